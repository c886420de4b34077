#include "qwts/path_oracle.hpp"

#include "qwts/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace qwts::oracle {

namespace {

void check_cap(int steps, int cap) {
    if (steps > cap) {
        throw OracleCapError("path oracle refuses " + std::to_string(steps) + " steps (cap " +
                             std::to_string(cap) + ")");
    }
}

} // namespace

CoinSplit split_coin(const Eigen::Matrix2cd& coin) {
    CoinSplit split{Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
    split.left.row(0) = coin.row(0);
    split.right.row(1) = coin.row(1);
    return split;
}

Eigen::Matrix2cd path_sum(const Eigen::Matrix2cd& coin, int left, int right, int cap) {
    if (left < 0 || right < 0) throw std::invalid_argument("step counts must be nonnegative");
    const int n = left + right;
    check_cap(n, cap);
    const CoinSplit pq = split_coin(coin);

    // Bit k of a pattern is step k+1: 1 = right (Q), 0 = left (P).
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    const std::uint32_t patterns = 1u << n;
    for (std::uint32_t bits = 0; bits < patterns; ++bits) {
        if (std::popcount(bits) != right) continue;
        Eigen::Matrix2cd product = Eigen::Matrix2cd::Identity();
        for (int k = 0; k < n; ++k) {
            product = (((bits >> k) & 1u) ? pq.right : pq.left) * product;
        }
        sum += product;
    }
    return sum;
}

Distribution oracle_distribution(const Eigen::Matrix2cd& coin, const Eigen::Vector2cd& phi, int steps, int cap) {
    if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
    check_cap(steps, cap);
    if (std::abs(phi.squaredNorm() - 1.0) > 1e-12) throw std::invalid_argument("initial state must have unit norm");

    LatticeWindow window(1, steps);
    std::vector<double> mass(window.size(), 0.0);
    for (int left = 0; left <= steps; ++left) {
        const int right = steps - left;
        mass[window.index({right - left, 0})] = (path_sum(coin, left, right, cap) * phi).squaredNorm();
    }
    return {steps, window, std::move(mass)};
}

} // namespace qwts::oracle
