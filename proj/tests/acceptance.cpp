// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "qwts/closed_form.hpp"
#include "qwts/forecast.hpp"
#include "qwts/io.hpp"
#include "qwts/path_oracle.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace qwts;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << " " << name;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << '\n';
}

WalkSpec angle_spec(double theta, double xi) {
    return WalkSpec(WalkFamily::TwoState1D, CoinParam::angle(theta), InitParam{{xi}});
}

WalkSpec random_spec(WalkFamily family, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
    if (family == WalkFamily::TwoState1D) return angle_spec(kHalfPi * unit(rng), kHalfPi * unit(rng));
    std::vector<double> init(static_cast<std::size_t>(init_param_count(family)));
    for (auto& p : init) p = phase(rng);
    return WalkSpec(family, CoinParam::raw(unit(rng)), InitParam{std::move(init)});
}

Outcome two_point_forecasts() {
    double worst_time = 0.0;
    for (double x1 : {0.5, 1.0, 10.0, -0.5, -1.0, -10.0}) {
        const auto start = Clock::now();
        std::ostringstream out;
        io::write_forecast({{{0.0}, {x1}}, io::RunConfig{}}, out);
        worst_time = std::max(worst_time, seconds_since(start));
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        std::getline(in, line);
        std::istringstream row(line);
        std::string t, truth, star;
        std::getline(row, t, ',');
        std::getline(row, truth, ',');
        std::getline(row, star, ',');
        const double expected = x1 > 0 ? 1.0 : -1.0;
        if (t != "2" || std::abs(std::stod(star) - expected) > 1e-9) {
            return {false, "x1=" + io::format_number(x1) + " gave x2*=" + star};
        }
    }
    if (worst_time >= 1.0) return {false, "slowest run " + io::format_number(worst_time) + " s"};
    return {true, "slowest run " + io::format_number(worst_time) + " s"};
}

Outcome corner_minimizers() {
    const SearchOptions options = SearchOptions::defaults(WalkFamily::TwoState1D);
    for (double x1 : {0.5, 1.0, 10.0, -0.5, -1.0, -10.0}) {
        const Minimum m = minimize_v(Series::from_raw({{0.0}, {x1}}), WalkFamily::TwoState1D, options, 1);
        const std::vector<Point> expected = x1 > 0 ? std::vector<Point>{{0.0, kHalfPi}, {kHalfPi, 0.0}}
                                                   : std::vector<Point>{{0.0, 0.0}, {kHalfPi, kHalfPi}};
        const double v = x1 > 0 ? x1 * x1 - 2 * x1 + 1 : x1 * x1 + 2 * x1 + 1;
        if (m.argmin_set != expected) return {false, "argmin set for x1=" + io::format_number(x1)};
        if (std::abs(m.v_min - v) > 1e-12) return {false, "v_min for x1=" + io::format_number(x1)};
    }
    return {};
}

Outcome oracle_agreement() {
    const auto start = Clock::now();
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const WalkSpec spec = random_spec(WalkFamily::TwoState1D, rng);
        const CoinMatrix u = spec.coin();
        AmplitudeField field = initial_field(spec);
        for (int n = 0; n <= 8; ++n) {
            if (n > 0) field = step(field, u);
            const Distribution engine = distribution(field);
            const Distribution truth = oracle::oracle_distribution(u, spec.initial_state(), n);
            for (int x = -n; x <= n; ++x) worst = std::max(worst, std::abs(engine.at({x, 0}) - truth.at({x, 0})));
        }
    }
    const double elapsed = seconds_since(start);
    const std::string detail = "max deviation " + io::format_number(worst) + ", " + io::format_number(elapsed) + " s";
    return {worst < 1e-12 && elapsed < 10.0, detail};
}

Outcome closed_form_chain() {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double theta = (kHalfPi - 0.01) * i / 9.0;
            const double xi = kHalfPi * j / 9.0;
            const closed_form::AngleParams p(theta, xi);
            const WalkSpec spec = angle_spec(theta, xi);
            const CoinMatrix u = spec.coin();
            AmplitudeField field = initial_field(spec);
            for (int n = 1; n <= 10; ++n) {
                field = step(field, u);
                const Distribution mu = distribution(field);
                const double mean = expectation(mu)[0];
                if (n == 1) {
                    for (double x1 : {-2.0, 0.0, 0.7, 3.0}) {
                        worst = std::max(worst, std::abs(closed_form::v1(x1, p) - squared_distance_cost(mu, Point{x1})));
                    }
                    continue;
                }
                if (n == 2) worst = std::max(worst, std::abs(closed_form::e2(p) - mean));
                if (n == 3) worst = std::max(worst, std::abs(closed_form::e3(p) - mean));
                worst = std::max(worst, std::abs(closed_form::en_series(p, n) - mean));
            }
        }
    }
    return {worst < 1e-9, "max deviation " + io::format_number(worst)};
}

Outcome symmetry() {
    double worst_mass = 0.0;
    double worst_mean = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double theta = kHalfPi * i / 19.0;
        const WalkSpec spec = angle_spec(theta, kPi / 4);
        const CoinMatrix u = spec.coin();
        AmplitudeField field = initial_field(spec);
        for (int n = 0; n <= 30; ++n) {
            if (n > 0) field = step(field, u);
            const Distribution mu = distribution(field);
            for (int x = 1; x <= n; ++x) worst_mass = std::max(worst_mass, std::abs(mu.at({x, 0}) - mu.at({-x, 0})));
            worst_mean = std::max(worst_mean, std::abs(expectation(mu)[0]));
        }
    }
    return {worst_mass < 1e-12 && worst_mean < 1e-10,
            "mass " + io::format_number(worst_mass) + ", mean " + io::format_number(worst_mean)};
}

Outcome normalization_and_unitarity() {
    std::mt19937_64 rng(2024);
    double worst_norm = 0.0;
    double worst_unitary = 0.0;
    for (WalkFamily family : {WalkFamily::TwoState1D, WalkFamily::ThreeState1D, WalkFamily::FourState2D}) {
        for (int trial = 0; trial < 100; ++trial) {
            const WalkSpec spec = random_spec(family, rng);
            const CoinMatrix u = spec.coin();
            AmplitudeField field = initial_field(spec);
            for (int n = 1; n <= 50; ++n) {
                field = step(field, u);
                worst_norm = std::max(worst_norm, std::abs(field.total_norm_squared() - 1.0));
            }
        }
        for (int trial = 0; trial < 1000; ++trial) {
            const CoinMatrix u = random_spec(family, rng).coin();
            const CoinMatrix gram = u.adjoint() * u;
            const auto m = static_cast<Eigen::Index>(gram.rows());
            worst_unitary = std::max(worst_unitary, (gram - CoinMatrix::Identity(m, m)).cwiseAbs().maxCoeff());
        }
    }
    return {worst_norm < 1e-10 && worst_unitary < 1e-12,
            "norm " + io::format_number(worst_norm) + ", unitarity " + io::format_number(worst_unitary)};
}

#ifdef QWTS_CLI_PATH
std::string run_capture(const std::string& command) {
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + command);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
    const int status = pclose(pipe);
    if (status != 0) throw std::runtime_error("command failed: " + command);
    return output;
}
#endif

Outcome determinism() {
#ifdef QWTS_CLI_PATH
    const auto dir = std::filesystem::temp_directory_path() / ("qwts_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto series = dir / "series.csv";
    {
        std::ofstream f(series);
        f << "t,x1\n0,0\n1,0.8\n2,0.3\n3,1.9\n4,1.2\n5,2.6\n6,2.2\n";
    }
    const std::string base = std::string("\"") + QWTS_CLI_PATH + "\" forecast --series \"" + series.string() +
                             "\" --resolution 33";
    const std::string one = run_capture(base + " --threads 1");
    const std::string many = run_capture(base + " --threads 7");
    const std::string env = run_capture("QWTS_THREADS=3 " + base);
    std::filesystem::remove_all(dir);
    if (one.empty()) return {false, "empty output"};
    if (one != many || one != env) return {false, "outputs differ across thread counts"};
    return {true, std::to_string(one.size()) + " identical bytes for 1, 3 and 7 threads"};
#else
    return {false, "CLI binary not built"};
#endif
}

} // namespace

int main() {
    report(1, "two-point series forecasts", two_point_forecasts);
    report(2, "corner minimizers of V_1", corner_minimizers);
    report(3, "engine matches path oracle", oracle_agreement);
    report(4, "closed forms match engine", closed_form_chain);
    report(5, "symmetric initial state", symmetry);
    report(6, "normalization and unitarity", normalization_and_unitarity);
    report(7, "deterministic across thread counts", determinism);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
