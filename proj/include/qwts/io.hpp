#pragma once

#include "qwts/forecast.hpp"
#include "qwts/walk.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qwts::io {

/// 17 significant digits, "%.17g".
std::string format_number(double value);

/// Decimal radians or a pi-rational literal: "pi", "pi/4", "3pi/4", "3*pi/4", "-pi/2".
double parse_angle(std::string_view text);

/// Comma-separated table with header `t,x1[,x2]`; t must run 0, 1, 2, ...
/// Throws ParseError with the offending line.
std::vector<Point> read_series(std::istream& in);
std::vector<Point> read_series_file(const std::string& path);

/// Rows of a distribution table: t, x1[, x2], mu.
struct MassRow {
    int t;
    Site site;
    double mu;
};
std::vector<MassRow> read_distribution(std::istream& in);

struct RunConfig {
    WalkFamily family = WalkFamily::TwoState1D;
    std::vector<int> resolution; // empty: family default
    double eps_tie = 1e-9;
    double eps_const = 1e-9;
    double scale = 1.0;
    bool refine = false;
    unsigned threads = 0;
    std::string out; // empty: stdout

    SearchOptions search_options() const;
    void validate() const;
};

/// `key = value` lines; '#' starts a comment. Unknown keys are errors.
void apply_config(RunConfig& config, std::istream& in);
void apply_config_file(RunConfig& config, const std::string& path);

/// Applies one key/value pair; shared by the config file and command-line flags.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Commands. Each writes its table to `out`, diagnostics to `err`, and returns
// the process exit code: 0 success, 1 usage or parse error, 2 tolerance failure.

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitTolerance = 2;

struct SimulateArgs {
    WalkSpec spec;
    int steps = 0;
};
void write_simulation(const SimulateArgs& args, std::ostream& out);

struct SurfaceArgs {
    std::vector<Point> raw;
    RunConfig config;
    int n = 0;
};
void write_surface(const SurfaceArgs& args, std::ostream& out);

struct ForecastArgs {
    std::vector<Point> raw;
    RunConfig config;
};
void write_forecast(const ForecastArgs& args, std::ostream& out);

struct SelfcheckArgs {
    int steps = 8;
    int trials = 100;
    std::uint64_t seed = 42;
    int cap = 12;
};
/// Engine vs path oracle and engine vs closed forms; returns kExitOk or kExitTolerance.
int run_selfcheck(const SelfcheckArgs& args, std::ostream& out, std::ostream& err);

} // namespace qwts::io
