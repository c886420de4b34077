#include "qwts/io.hpp"

#include "qwts/closed_form.hpp"
#include "qwts/errors.hpp"
#include "qwts/path_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace qwts::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long> to_long(std::string_view s) {
    s = trim(s);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

double require_double(std::string_view s, std::string_view what) {
    if (auto v = to_double(s)) return *v;
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(s) + "'");
}

bool parse_bool(std::string_view s) {
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw std::invalid_argument("invalid boolean '" + std::string(s) + "'");
}

// 53 random bits mapped to [0, 1]; independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::string format_number(double value) {
    if (value == 0.0) value = 0.0; // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    const auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) return require_double(s, "angle");

    std::string_view coeff = trim(s.substr(0, pi_at));
    std::string_view rest = trim(s.substr(pi_at + 2));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    double factor = 1.0;
    if (coeff == "-") {
        factor = -1.0;
    } else if (!coeff.empty() && coeff != "+") {
        factor = require_double(coeff, "angle coefficient");
    }
    double divisor = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
        divisor = require_double(rest.substr(1), "angle divisor");
        if (divisor == 0.0) throw std::invalid_argument("angle divisor is zero");
    }
    return factor * std::numbers::pi / divisor;
}

std::vector<Point> read_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    std::vector<Point> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        const auto fields = split(body, ',');
        if (columns == 0) {
            const bool ok = (fields.size() == 2 || fields.size() == 3) && fields[0] == "t" && fields[1] == "x1" &&
                            (fields.size() == 2 || fields[2] == "x2");
            if (!ok) throw ParseError("expected header 't,x1' or 't,x1,x2'", line_no);
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        const auto t = to_long(fields[0]);
        if (!t || *t != static_cast<long>(rows.size())) {
            throw ParseError("t must be " + std::to_string(rows.size()) + ", got '" + std::string(fields[0]) + "'",
                             line_no);
        }
        Point p;
        for (std::size_t k = 1; k < columns; ++k) {
            const auto v = to_double(fields[k]);
            if (!v) throw ParseError("invalid number '" + std::string(fields[k]) + "'", line_no);
            p.push_back(*v);
        }
        rows.push_back(std::move(p));
    }
    if (columns == 0) throw ParseError("missing header", line_no + 1);
    if (rows.empty()) throw ParseError("no data rows", line_no + 1);
    return rows;
}

std::vector<Point> read_series_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open series file '" + path + "'");
    return read_series(f);
}

std::vector<MassRow> read_distribution(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    std::vector<MassRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        const auto fields = split(body, ',');
        if (columns == 0) {
            if (fields.size() != 3 && fields.size() != 4) throw ParseError("bad distribution header", line_no);
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns) throw ParseError("wrong field count", line_no);
        const auto t = to_long(fields[0]);
        const auto x1 = to_long(fields[1]);
        const auto x2 = columns == 4 ? to_long(fields[2]) : std::optional<long>(0);
        const auto mu = to_double(fields[columns - 1]);
        if (!t || !x1 || !x2 || !mu) throw ParseError("invalid row", line_no);
        rows.push_back({static_cast<int>(*t), {static_cast<int>(*x1), static_cast<int>(*x2)}, *mu});
    }
    return rows;
}

SearchOptions RunConfig::search_options() const {
    SearchOptions o = SearchOptions::defaults(family);
    if (resolution.size() == 1) {
        o.grid = GridSpec::uniform(family, resolution.front());
    } else if (!resolution.empty()) {
        o.grid.resolution = resolution;
    }
    o.eps_tie = eps_tie;
    o.eps_const = eps_const;
    o.refine = refine;
    o.threads = threads;
    return o;
}

void RunConfig::validate() const {
    search_options().validate(family);
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "family") {
        config.family = parse_family(value);
    } else if (key == "resolution") {
        config.resolution.clear();
        for (auto part : split(value, ',')) {
            const auto r = to_long(part);
            if (!r) throw std::invalid_argument("invalid resolution '" + std::string(part) + "'");
            config.resolution.push_back(static_cast<int>(*r));
        }
    } else if (key == "eps_tie") {
        config.eps_tie = require_double(value, "eps_tie");
    } else if (key == "eps_const") {
        config.eps_const = require_double(value, "eps_const");
    } else if (key == "scale") {
        config.scale = require_double(value, "scale");
    } else if (key == "refine") {
        config.refine = parse_bool(value);
    } else if (key == "threads") {
        const auto t = to_long(value);
        if (!t || *t < 0) throw std::invalid_argument("invalid thread count '" + std::string(value) + "'");
        config.threads = static_cast<unsigned>(*t);
    } else if (key == "out") {
        config.out = std::string(value);
    } else {
        throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
    }
}

void apply_config(RunConfig& config, std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        try {
            apply_setting(config, trim(body.substr(0, eq)), body.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), line_no);
        }
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    apply_config(config, f);
}

void write_simulation(const SimulateArgs& args, std::ostream& out) {
    if (args.steps < 0) throw std::invalid_argument("steps must be nonnegative");
    const bool two_d = dimension(args.spec.family()) == 2;
    out << (two_d ? "t,x1,x2,mu\n" : "t,x1,mu\n");
    const CoinMatrix coin = args.spec.coin();
    AmplitudeField field = initial_field(args.spec);
    for (int t = 0; t <= args.steps; ++t) {
        if (t > 0) field = step(field, coin);
        const Distribution mu = distribution(field);
        const auto masses = mu.masses();
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (masses[i] == 0.0) continue;
            const Site s = mu.window().site(i);
            out << t << ',' << s.x1 << ',';
            if (two_d) out << s.x2 << ',';
            out << format_number(masses[i]) << '\n';
        }
    }
}

void write_surface(const SurfaceArgs& args, std::ostream& out) {
    args.config.validate();
    const WalkFamily family = args.config.family;
    const Series series = Series::from_raw(args.raw, args.config.scale);
    if (args.n < 0 || static_cast<std::size_t>(args.n) >= series.size()) {
        throw std::out_of_range("n = " + std::to_string(args.n) + " must be below the series length " +
                                std::to_string(series.size()));
    }
    if (dimension(family) != series.dimension()) {
        throw std::invalid_argument("walk family dimension does not match series dimension");
    }
    const SearchOptions options = args.config.search_options();
    const auto values = v_surface(series, family, options, args.n);

    for (const auto& axis : parameter_box(family)) out << axis.name << ',';
    out << "V\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (double p : options.grid.point(family, i)) out << format_number(p) << ',';
        out << format_number(values[i]) << '\n';
    }
    out << "# argmin_rows=";
    const auto members = argmin_indices(values, options.eps_tie);
    for (std::size_t k = 0; k < members.size(); ++k) out << (k ? ";" : "") << members[k];
    out << '\n';
}

void write_forecast(const ForecastArgs& args, std::ostream& out) {
    args.config.validate();
    const Series series = Series::from_raw(args.raw, args.config.scale);
    const ForecastTrace trace = rolling_forecast(series, args.config.family, args.config.search_options());
    const bool two_d = series.dimension() == 2;

    out << (two_d ? "t,x_true1,x_true2,x_star1,x_star2" : "t,x_true,x_star") << ",rule,v_min,n_argmin\n";
    for (const auto& est : trace.steps) {
        const auto t = static_cast<std::size_t>(est.time);
        out << est.time;
        for (int k = 0; k < series.dimension(); ++k) {
            out << ',';
            if (t < args.raw.size()) out << format_number(args.raw[t][static_cast<std::size_t>(k)]);
        }
        for (double v : est.value) out << ',' << format_number(v);
        out << ',' << to_string(est.rule) << ',' << format_number(est.v_min) << ',' << est.argmin_set.size() << '\n';
    }
}

int run_selfcheck(const SelfcheckArgs& args, std::ostream& out, std::ostream& err) {
    if (args.steps < 0 || args.trials < 0) throw std::invalid_argument("steps and trials must be nonnegative");
    if (args.steps > args.cap) {
        throw OracleCapError("selfcheck steps " + std::to_string(args.steps) + " exceed the oracle cap " +
                             std::to_string(args.cap));
    }
    constexpr double kOracleTol = 1e-12;
    constexpr double kClosedTol = 1e-9;
    constexpr double kHalfPi = std::numbers::pi / 2.0;

    std::mt19937_64 rng(args.seed);
    double max_site = 0.0;
    double max_tv = 0.0;
    double max_closed = 0.0;
    int failures = 0;
    auto fail = [&](std::string_view what, double theta, double xi, int n, double dev) {
        ++failures;
        err << "FAIL " << what << " theta=" << format_number(theta) << " xi=" << format_number(xi) << " n=" << n
            << " deviation=" << format_number(dev) << '\n';
    };

    for (int trial = 0; trial < args.trials; ++trial) {
        const double theta = kHalfPi * unit_uniform(rng);
        const double xi = kHalfPi * unit_uniform(rng);
        const double x1 = 10.0 * unit_uniform(rng) - 5.0;
        const WalkSpec spec(WalkFamily::TwoState1D, CoinParam::angle(theta), InitParam{{xi}});
        const Eigen::Matrix2cd coin = spec.coin();
        const Eigen::Vector2cd phi = spec.initial_state();
        const closed_form::AngleParams angles(theta, xi);

        const CoinMatrix u = spec.coin();
        AmplitudeField field = initial_field(spec);
        for (int n = 0; n <= std::max(args.steps, 3); ++n) {
            if (n > 0) field = step(field, u);
            const Distribution engine = distribution(field);
            if (n <= args.steps) {
                const Distribution truth = oracle::oracle_distribution(coin, phi, n, args.cap);
                double site = 0.0;
                double tv = 0.0;
                for (int x = -n; x <= n; ++x) {
                    const double d = std::abs(engine.at({x, 0}) - truth.at({x, 0}));
                    site = std::max(site, d);
                    tv += d;
                }
                tv *= 0.5;
                max_site = std::max(max_site, site);
                max_tv = std::max(max_tv, tv);
                if (site >= kOracleTol) fail("oracle", theta, xi, n, site);
            }

            const double mean = expectation(engine)[0];
            double dev = 0.0;
            if (n == 1) {
                const Series s = Series::from_raw({{0.0}, {x1}});
                dev = std::abs(closed_form::v1(x1, angles) - squared_distance_cost(engine, s[1]));
            } else if (n == 2) {
                dev = std::abs(closed_form::e2(angles) - mean);
            } else if (n == 3) {
                dev = std::abs(closed_form::e3(angles) - mean);
            }
            if (n >= 2 && n <= args.steps && theta < kHalfPi - 0.01) {
                dev = std::max(dev, std::abs(closed_form::en_series(angles, n) - mean));
            }
            max_closed = std::max(max_closed, dev);
            if (dev >= kClosedTol) fail("closed-form", theta, xi, n, dev);
        }
    }

    out << "trials " << args.trials << " steps " << args.steps << " seed " << args.seed << '\n';
    out << "oracle max_site_deviation " << format_number(max_site) << " max_tv_deviation " << format_number(max_tv)
        << " tolerance " << format_number(kOracleTol) << '\n';
    out << "closed_form max_deviation " << format_number(max_closed) << " tolerance " << format_number(kClosedTol)
        << '\n';
    out << (failures == 0 ? "status ok\n" : "status FAILED\n");
    return failures == 0 ? kExitOk : kExitTolerance;
}

} // namespace qwts::io
