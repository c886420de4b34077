#pragma once

#include "qwts/walk.hpp"

#include <Eigen/Dense>

namespace qwts::oracle {

// Brute-force path sums for the two-state walk on Z. Exponential in the number
// of steps; test support only.

inline constexpr int kDefaultCap = 12;

struct CoinSplit {
    Eigen::Matrix2cd left;  // P: top row of U
    Eigen::Matrix2cd right; // Q: bottom row of U
};

CoinSplit split_coin(const Eigen::Matrix2cd& coin);

/// Xi_n(l, r): sum over all orderings of l left and r right steps of the
/// time-ordered product (latest step leftmost).
Eigen::Matrix2cd path_sum(const Eigen::Matrix2cd& coin, int left, int right, int cap = kDefaultCap);

/// mu_n(x) = |Xi_n(l, r) phi|^2 with x = r - l.
Distribution oracle_distribution(const Eigen::Matrix2cd& coin, const Eigen::Vector2cd& phi, int steps,
                                 int cap = kDefaultCap);

} // namespace qwts::oracle
