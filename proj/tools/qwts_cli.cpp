#include "qwts/errors.hpp"
#include "qwts/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace qwts;

struct RunFlags {
    std::string config_path;
};

// Registers the RunConfig keys as string flags; values are applied after the
// config file so that flags take precedence.
void add_run_flags(CLI::App& cmd, RunFlags& flags, std::map<std::string, std::string>& raw) {
    cmd.add_option("--config", flags.config_path, "key = value configuration file");
    const std::vector<std::pair<std::string, std::string>> keys{
        {"family", "walk family: two, three, four"},
        {"resolution", "grid points per axis, one value or a comma list"},
        {"eps_tie", "relative tolerance for argmin membership"},
        {"eps_const", "relative tolerance for the constant-V test"},
        {"scale", "positive divisor applied to the series"},
        {"refine", "local refinement around argmins (true/false)"},
        {"threads", "worker threads (0: QWTS_THREADS or hardware)"},
        {"out", "output path (default stdout)"},
    };
    for (const auto& [key, help] : keys) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        cmd.add_option(flag, raw[key], help);
    }
}

io::RunConfig resolve_config(const CLI::App& cmd, const RunFlags& flags, const std::map<std::string, std::string>& raw) {
    io::RunConfig config;
    if (!flags.config_path.empty()) io::apply_config_file(config, flags.config_path);
    for (const auto& [key, value] : raw) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (cmd.get_option(flag)->count() > 0) io::apply_setting(config, key, value);
    }
    config.validate();
    return config;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
}

std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(io::parse_angle(part));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-walk time-series forecasting"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Evolve one walk and print mu_t(x) for t = 0..steps");
    std::string sim_family = "two";
    std::string sim_theta;
    std::string sim_coin;
    std::string sim_init;
    int sim_steps = 0;
    std::string sim_out;
    simulate->add_option("--family", sim_family, "two, three or four");
    simulate->add_option("--theta", sim_theta, "coin angle in [0, pi/2] (two-state only)");
    simulate->add_option("--coin", sim_coin, "raw coin parameter in [0, 1]");
    simulate->add_option("--xi,--init", sim_init, "initial-state angle(s), comma separated");
    simulate->add_option("--steps", sim_steps, "number of steps")->required();
    simulate->add_option("--out", sim_out, "output path (default stdout)");

    // surface
    auto* surface = app.add_subcommand("surface", "Tabulate V_n over the search grid");
    std::string surf_series;
    int surf_n = 0;
    RunFlags surf_flags;
    std::map<std::string, std::string> surf_raw;
    surface->add_option("--series", surf_series, "series CSV (t,x1[,x2])")->required();
    surface->add_option("--n", surf_n, "time index of V_n")->required();
    add_run_flags(*surface, surf_flags, surf_raw);

    // forecast
    auto* forecast = app.add_subcommand("forecast", "Rolling one-step-ahead forecast");
    std::string fc_series;
    RunFlags fc_flags;
    std::map<std::string, std::string> fc_raw;
    forecast->add_option("--series", fc_series, "series CSV (t,x1[,x2])")->required();
    add_run_flags(*forecast, fc_flags, fc_raw);

    // selfcheck
    auto* selfcheck = app.add_subcommand("selfcheck", "Engine against path oracle and closed forms");
    io::SelfcheckArgs sc;
    selfcheck->add_option("--steps", sc.steps, "maximum walk length (<= oracle cap)");
    selfcheck->add_option("--trials", sc.trials, "random (theta, xi) draws");
    selfcheck->add_option("--seed", sc.seed, "random seed");
    selfcheck->add_option("--cap", sc.cap, "oracle enumeration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return io::kExitUsage;
    }

    try {
        if (*simulate) {
            const WalkFamily family = parse_family(sim_family);
            CoinParam coin;
            if (!sim_theta.empty() && !sim_coin.empty()) throw std::invalid_argument("give --theta or --coin, not both");
            if (!sim_theta.empty()) {
                coin = CoinParam::angle(io::parse_angle(sim_theta));
            } else if (!sim_coin.empty()) {
                coin = CoinParam::raw(io::parse_angle(sim_coin));
            } else {
                throw std::invalid_argument("one of --theta or --coin is required");
            }
            InitParam init{sim_init.empty() ? std::vector<double>(static_cast<std::size_t>(init_param_count(family)), 0.0)
                                            : parse_angle_list(sim_init)};
            std::ostringstream os;
            io::write_simulation({WalkSpec(family, coin, std::move(init)), sim_steps}, os);
            emit(sim_out, os.str());
        } else if (*surface) {
            io::SurfaceArgs args{io::read_series_file(surf_series), resolve_config(*surface, surf_flags, surf_raw), surf_n};
            std::ostringstream os;
            io::write_surface(args, os);
            emit(args.config.out, os.str());
        } else if (*forecast) {
            io::ForecastArgs args{io::read_series_file(fc_series), resolve_config(*forecast, fc_flags, fc_raw)};
            std::ostringstream os;
            io::write_forecast(args, os);
            emit(args.config.out, os.str());
        } else if (*selfcheck) {
            return io::run_selfcheck(sc, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "qwts: " << e.what() << '\n';
        return io::kExitUsage;
    }
    return io::kExitOk;
}
