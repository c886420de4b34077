#include "qwts/forecast.hpp"

#include "qwts/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace qwts {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_horizon(const Series& series, const WalkSpec& spec, int n) {
    if (dimension(spec.family()) != series.dimension()) {
        throw std::invalid_argument("walk family " + std::string(to_string(spec.family())) + " has dimension " +
                                    std::to_string(dimension(spec.family())) + " but series has dimension " +
                                    std::to_string(series.dimension()));
    }
    if (n < 0 || static_cast<std::size_t>(n) >= series.size()) {
        throw std::out_of_range("time " + std::to_string(n) + " outside series of length " +
                                std::to_string(series.size()));
    }
}

struct Coarse {
    std::vector<Point> points;
    std::vector<double> values;
    std::vector<Point> next;
};

Coarse coarse_grid(const Series& series, WalkFamily family, const SearchOptions& options, int n) {
    const std::size_t count = options.grid.size();
    Coarse c;
    c.points.resize(count);
    c.values.resize(count);
    c.next.resize(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        c.points[i] = options.grid.point(family, i);
        const WalkProfile profile = walk_profile(series, WalkSpec::from_point(family, c.points[i]), n);
        double v = 0.0;
        for (double cost : profile.cost) v += cost;
        c.values[i] = v;
        c.next[i] = profile.mean.back();
    });
    return c;
}

// Offsets j * h / K, |j| <= (K-1)/2, stay strictly inside the cell of half-width h/2
// so sub-grids of neighbouring coarse points never overlap.
std::vector<Point> refinement_points(const Point& center, const std::vector<Axis>& box,
                                     const std::vector<std::vector<double>>& axes, int per_axis) {
    const int half = (per_axis - 1) / 2;
    std::vector<std::vector<double>> local(box.size());
    for (std::size_t a = 0; a < box.size(); ++a) {
        const double h = axes[a].size() > 1 ? axes[a][1] - axes[a][0] : 0.0;
        for (int j = -half; j <= half; ++j) {
            const double v = j == 0 ? center[a] : center[a] + j * h / per_axis;
            if (v >= box[a].lo && v <= box[a].hi) local[a].push_back(v);
        }
    }
    std::vector<Point> out;
    std::vector<std::size_t> idx(box.size(), 0);
    while (true) {
        Point p(box.size());
        bool is_center = true;
        for (std::size_t a = 0; a < box.size(); ++a) {
            p[a] = local[a][idx[a]];
            is_center = is_center && p[a] == center[a];
        }
        if (!is_center) out.push_back(std::move(p));
        std::size_t a = box.size();
        while (a > 0) {
            --a;
            if (++idx[a] < local[a].size()) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
    }
}

Minimum select(const Series& series, WalkFamily family, const SearchOptions& options, int n, const Coarse& coarse) {
    Minimum result;
    const auto [lo, hi] = std::minmax_element(coarse.values.begin(), coarse.values.end());
    result.v_min = *lo;
    result.v_max = *hi;
    result.constant = (result.v_max - result.v_min) < options.eps_const * std::max(1.0, std::abs(result.v_max));

    std::vector<Point> points;
    std::vector<double> values;
    std::vector<Point> next;
    auto tie_limit = [&](double vmin) { return vmin + options.eps_tie * std::max(1.0, std::abs(vmin)); };

    if (options.refine && !result.constant) {
        const auto box = parameter_box(family);
        const auto axes = options.grid.axes(family);
        const double limit = tie_limit(result.v_min);
        std::vector<Point> extra;
        for (std::size_t i = 0; i < coarse.values.size(); ++i) {
            if (coarse.values[i] > limit) continue;
            auto sub = refinement_points(coarse.points[i], box, axes, options.refine_points);
            extra.insert(extra.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
        }
        std::vector<double> extra_values(extra.size());
        std::vector<Point> extra_next(extra.size());
        parallel_for(extra.size(), options.threads, [&](std::size_t i) {
            const WalkProfile profile = walk_profile(series, WalkSpec::from_point(family, extra[i]), n);
            double v = 0.0;
            for (double cost : profile.cost) v += cost;
            extra_values[i] = v;
            extra_next[i] = profile.mean.back();
        });
        points = coarse.points;
        values = coarse.values;
        next = coarse.next;
        points.insert(points.end(), extra.begin(), extra.end());
        values.insert(values.end(), extra_values.begin(), extra_values.end());
        next.insert(next.end(), extra_next.begin(), extra_next.end());
        result.v_min = std::min(result.v_min, *std::min_element(values.begin(), values.end()));
    }
    const auto& pts = points.empty() ? coarse.points : points;
    const auto& vals = values.empty() ? coarse.values : values;
    const auto& nxt = next.empty() ? coarse.next : next;

    std::vector<std::size_t> members = argmin_indices(vals, options.eps_tie);
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    for (std::size_t i : members) {
        result.argmin_set.push_back(pts[i]);
        result.next_means.push_back(nxt[i]);
    }
    return result;
}

StepEstimate make_estimate(const Series& series, int n, Minimum&& min) {
    StepEstimate est;
    est.time = n + 1;
    est.v_min = min.v_min;
    if (min.constant) {
        est.rule = EstimateRule::ConstantV;
        est.model_value = series[static_cast<std::size_t>(n)];
    } else {
        est.rule = min.argmin_set.size() == 1 ? EstimateRule::UniqueMin : EstimateRule::TieAverage;
        Point mean(static_cast<std::size_t>(series.dimension()), 0.0);
        for (const auto& e : min.next_means) {
            for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += e[k];
        }
        for (auto& m : mean) m /= static_cast<double>(min.next_means.size());
        est.model_value = std::move(mean);
    }
    est.value = series.restore(est.model_value);
    est.argmin_set = std::move(min.argmin_set);
    return est;
}

} // namespace

Series Series::from_raw(const std::vector<Point>& raw, double scale) {
    if (raw.empty()) throw std::invalid_argument("series is empty");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive and finite");
    const std::size_t d = raw.front().size();
    if (d != 1 && d != 2) throw std::invalid_argument("series dimension must be 1 or 2");

    Series s;
    s.dimension_ = static_cast<int>(d);
    s.scale_ = scale;
    s.anchor_ = raw.front();
    s.values_.reserve(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) {
        if (raw[t].size() != d) throw std::invalid_argument("inconsistent dimension at t = " + std::to_string(t));
        Point p(d);
        for (std::size_t k = 0; k < d; ++k) {
            if (!std::isfinite(raw[t][k])) throw std::invalid_argument("non-finite value at t = " + std::to_string(t));
            p[k] = t == 0 ? 0.0 : (raw[t][k] - s.anchor_[k]) / scale;
        }
        s.values_.push_back(std::move(p));
    }
    return s;
}

Point Series::restore(std::span<const double> model) const {
    Point out(model.size());
    for (std::size_t k = 0; k < model.size(); ++k) out[k] = model[k] * scale_ + anchor_[k];
    return out;
}

Series Series::prefix(std::size_t count) const {
    if (count == 0 || count > values_.size()) throw std::out_of_range("prefix length out of range");
    Series s = *this;
    s.values_.resize(count);
    return s;
}

std::vector<Axis> parameter_box(WalkFamily family) {
    switch (family) {
    case WalkFamily::TwoState1D: return {{"theta", 0.0, kHalfPi}, {"xi", 0.0, kHalfPi}};
    case WalkFamily::ThreeState1D: return {{"coin", 0.0, 1.0}, {"phase1", 0.0, kTwoPi}, {"phase2", 0.0, kTwoPi}};
    case WalkFamily::FourState2D:
        return {{"coin", 0.0, 1.0}, {"phase1", 0.0, kTwoPi}, {"phase2", 0.0, kTwoPi}, {"phase3", 0.0, kTwoPi}};
    }
    return {};
}

GridSpec GridSpec::uniform(WalkFamily family, int points) {
    return {std::vector<int>(parameter_box(family).size(), points)};
}

GridSpec GridSpec::defaults(WalkFamily family) {
    switch (family) {
    case WalkFamily::TwoState1D: return {{65, 65}};
    case WalkFamily::ThreeState1D: return {{33, 17, 17}};
    case WalkFamily::FourState2D: return {{17, 9, 9, 9}};
    }
    return {};
}

void GridSpec::validate(WalkFamily family) const {
    if (resolution.size() != parameter_box(family).size()) {
        throw std::invalid_argument("grid for " + std::string(to_string(family)) + " needs " +
                                    std::to_string(parameter_box(family).size()) + " resolutions");
    }
    for (int r : resolution) {
        if (r < 2) throw std::invalid_argument("grid resolution must be at least 2");
    }
}

std::size_t GridSpec::size() const noexcept {
    std::size_t n = 1;
    for (int r : resolution) n *= static_cast<std::size_t>(r);
    return n;
}

std::vector<std::vector<double>> GridSpec::axes(WalkFamily family) const {
    validate(family);
    const auto box = parameter_box(family);
    std::vector<std::vector<double>> out(box.size());
    for (std::size_t a = 0; a < box.size(); ++a) {
        const int r = resolution[a];
        out[a].resize(static_cast<std::size_t>(r));
        for (int k = 0; k < r; ++k) out[a][static_cast<std::size_t>(k)] = box[a].lo + (box[a].hi - box[a].lo) * k / (r - 1);
        out[a].front() = box[a].lo;
        out[a].back() = box[a].hi;
    }
    return out;
}

Point GridSpec::point(WalkFamily family, std::size_t index) const {
    const auto box = parameter_box(family);
    Point p(box.size());
    for (std::size_t a = box.size(); a-- > 0;) {
        const auto r = static_cast<std::size_t>(resolution[a]);
        const std::size_t k = index % r;
        index /= r;
        if (k == 0) {
            p[a] = box[a].lo;
        } else if (k == r - 1) {
            p[a] = box[a].hi;
        } else {
            p[a] = box[a].lo + (box[a].hi - box[a].lo) * static_cast<double>(k) / static_cast<double>(r - 1);
        }
    }
    return p;
}

SearchOptions SearchOptions::defaults(WalkFamily family) {
    SearchOptions o;
    o.grid = GridSpec::defaults(family);
    return o;
}

void SearchOptions::validate(WalkFamily family) const {
    grid.validate(family);
    if (!(eps_tie > 0.0) || !(eps_const > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (refine_points < 3 || refine_points % 2 == 0) throw std::invalid_argument("refine_points must be odd and >= 3");
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QWTS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double squared_distance_cost(const Distribution& dist, std::span<const double> target) {
    const LatticeWindow& w = dist.window();
    const auto masses = dist.masses();
    const double y1 = target[0];
    const double y2 = target.size() > 1 ? target[1] : 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (masses[i] == 0.0) continue;
        const Site s = w.site(i);
        const double d1 = s.x1 - y1;
        const double d2 = s.x2 - y2;
        sum += (d1 * d1 + d2 * d2) * masses[i];
    }
    return sum;
}

WalkProfile walk_profile(const Series& series, const WalkSpec& spec, int n) {
    check_horizon(series, spec, n);
    WalkProfile profile;
    profile.cost.reserve(static_cast<std::size_t>(n) + 1);
    profile.mean.reserve(static_cast<std::size_t>(n) + 2);
    const CoinMatrix coin = spec.coin();
    AmplitudeField field = initial_field(spec);
    for (int t = 0;; ++t) {
        const Distribution mu = distribution(field);
        profile.mean.push_back(expectation(mu));
        if (t > n) break;
        profile.cost.push_back(squared_distance_cost(mu, series[static_cast<std::size_t>(t)]));
        field = step(field, coin);
    }
    return profile;
}

double evaluate_v(const Series& series, const WalkSpec& spec, int n) {
    check_horizon(series, spec, n);
    const CoinMatrix coin = spec.coin();
    AmplitudeField field = initial_field(spec);
    double v = 0.0;
    for (int t = 0; t <= n; ++t) {
        if (t > 0) field = step(field, coin);
        v += squared_distance_cost(distribution(field), series[static_cast<std::size_t>(t)]);
    }
    return v;
}

std::vector<std::size_t> argmin_indices(std::span<const double> values, double eps_tie) {
    std::vector<std::size_t> out;
    if (values.empty()) return out;
    const double vmin = *std::min_element(values.begin(), values.end());
    const double limit = vmin + eps_tie * std::max(1.0, std::abs(vmin));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= limit) out.push_back(i);
    }
    return out;
}

Minimum minimize_v(const Series& series, WalkFamily family, const SearchOptions& options, int n) {
    options.validate(family);
    return select(series, family, options, n, coarse_grid(series, family, options, n));
}

std::vector<double> v_surface(const Series& series, WalkFamily family, const SearchOptions& options, int n) {
    options.validate(family);
    return coarse_grid(series, family, options, n).values;
}

std::string_view to_string(EstimateRule rule) noexcept {
    switch (rule) {
    case EstimateRule::UniqueMin: return "UniqueMin";
    case EstimateRule::TieAverage: return "TieAverage";
    case EstimateRule::ConstantV: return "ConstantV";
    }
    return "?";
}

StepEstimate estimate_next(const Series& series, WalkFamily family, const SearchOptions& options, int n) {
    return make_estimate(series, n, minimize_v(series, family, options, n));
}

ForecastTrace rolling_forecast(const Series& series, WalkFamily family, const SearchOptions& options) {
    options.validate(family);
    if (dimension(family) != series.dimension()) {
        throw std::invalid_argument("walk family dimension does not match series dimension");
    }
    const int last = static_cast<int>(series.size()) - 1;

    // One walk per grid point up to the last horizon; V_n for every n is a prefix
    // sum of the per-time costs, and only data up to n enters V_n.
    const std::size_t count = options.grid.size();
    std::vector<Point> points(count);
    std::vector<WalkProfile> profiles(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        points[i] = options.grid.point(family, i);
        profiles[i] = walk_profile(series, WalkSpec::from_point(family, points[i]), last);
    });

    ForecastTrace trace;
    trace.steps.reserve(series.size());
    Coarse coarse;
    coarse.points = std::move(points);
    coarse.values.assign(count, 0.0);
    coarse.next.resize(count);
    for (int n = 0; n <= last; ++n) {
        const auto t = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i) {
            coarse.values[i] += profiles[i].cost[t];
            coarse.next[i] = profiles[i].mean[t + 1];
        }
        trace.steps.push_back(make_estimate(series, n, select(series, family, options, n, coarse)));
    }
    return trace;
}

} // namespace qwts
