#pragma once

#include "qwts/walk.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace qwts {

using Point = std::vector<double>;

/// Observed data x_0..x_n, shifted so that x_0 is the origin and divided by scale.
class Series {
public:
    /// raw[t] is the d-vector observed at time t.
    static Series from_raw(const std::vector<Point>& raw, double scale = 1.0);

    int dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<Point>& values() const noexcept { return values_; }
    const Point& operator[](std::size_t t) const { return values_[t]; }
    const Point& anchor() const noexcept { return anchor_; }
    double scale() const noexcept { return scale_; }

    /// Maps a model-space value back to the units of the raw data.
    Point restore(std::span<const double> model) const;

    /// First n+1 points only, keeping anchor and scale.
    Series prefix(std::size_t count) const;

private:
    int dimension_ = 1;
    std::vector<Point> values_;
    Point anchor_;
    double scale_ = 1.0;
};

/// Closed search interval of one parameter axis.
struct Axis {
    std::string_view name;
    double lo;
    double hi;
};

/// Search box for a family: (theta, xi) for TwoState1D, (coin, phase...) otherwise.
std::vector<Axis> parameter_box(WalkFamily family);

struct GridSpec {
    std::vector<int> resolution;

    static GridSpec uniform(WalkFamily family, int points);
    /// 65 points per axis on two-axis boxes, fewer on the larger families.
    static GridSpec defaults(WalkFamily family);

    void validate(WalkFamily family) const;
    std::size_t size() const noexcept;
    /// Axis values, endpoints included exactly.
    std::vector<std::vector<double>> axes(WalkFamily family) const;
    /// Grid point at a flat index; the last axis varies fastest.
    Point point(WalkFamily family, std::size_t index) const;
};

struct SearchOptions {
    GridSpec grid;
    double eps_tie = 1e-9;   // relative to max(1, |v_min|)
    double eps_const = 1e-9; // relative to max(1, |v_max|)
    bool refine = false;
    int refine_points = 9;   // per axis, odd
    unsigned threads = 0;    // 0: QWTS_THREADS or hardware concurrency

    static SearchOptions defaults(WalkFamily family);
    void validate(WalkFamily family) const;
};

/// Worker count actually used for a requested count (0 = automatic).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) over the given number of workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// sum_x |x - target|^2 mu(x).
double squared_distance_cost(const Distribution& dist, std::span<const double> target);

/// V_n = sum_{t=0}^{n} sum_x |x - x_t|^2 mu_t(x).
double evaluate_v(const Series& series, const WalkSpec& spec, int n);

/// One evolution pass to time n+1: per-time costs for t = 0..n and the means E(X_t).
struct WalkProfile {
    std::vector<double> cost;
    std::vector<Point> mean; // mean[t] = E(X_t), t = 0..n+1
};
WalkProfile walk_profile(const Series& series, const WalkSpec& spec, int n);

struct Minimum {
    std::vector<Point> argmin_set;  // lexicographic order
    std::vector<Point> next_means;  // E(X_{n+1}) per argmin point
    double v_min = 0.0;
    double v_max = 0.0;
    bool constant = false;
};

/// Indices with value <= min + eps_tie * max(1, |min|), ascending.
std::vector<std::size_t> argmin_indices(std::span<const double> values, double eps_tie);

Minimum minimize_v(const Series& series, WalkFamily family, const SearchOptions& options, int n);

/// V_n at every grid point, in grid order.
std::vector<double> v_surface(const Series& series, WalkFamily family, const SearchOptions& options, int n);

enum class EstimateRule { UniqueMin, TieAverage, ConstantV };
std::string_view to_string(EstimateRule rule) noexcept;

struct StepEstimate {
    int time = 0;              // n + 1
    Point value;               // in raw data units
    Point model_value;         // anchored and scaled
    std::vector<Point> argmin_set;
    double v_min = 0.0;
    EstimateRule rule = EstimateRule::ConstantV;
};

struct ForecastTrace {
    std::vector<StepEstimate> steps;
};

StepEstimate estimate_next(const Series& series, WalkFamily family, const SearchOptions& options, int n);

/// x*_1 .. x*_{len}; the last entry is the out-of-sample forecast.
ForecastTrace rolling_forecast(const Series& series, WalkFamily family, const SearchOptions& options);

} // namespace qwts
