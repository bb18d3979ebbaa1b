// hmmlab command-line driver.
//
// Exit codes: 0 success, 1 criterion or verdict failure, 2 usage/config error,
// 3 model validation error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hmmlab/acceptance.hpp"
#include "hmmlab/csv.hpp"
#include "hmmlab/environment.hpp"
#include "hmmlab/errors.hpp"
#include "hmmlab/filtering.hpp"
#include "hmmlab/fixtures.hpp"
#include "hmmlab/model_io.hpp"
#include "hmmlab/oracle.hpp"
#include "hmmlab/scenario.hpp"

namespace fs = std::filesystem;
using namespace hmmlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

struct RunConfig {
    std::string model;
    std::string scenario;
    std::string registry;
    std::string prior = "pi";
    std::string observations;
    std::string inject_fault;
    std::uint64_t seed = 1;
    std::size_t horizon = 100;
    std::size_t trials = 0;
    std::size_t threads = 0;
    int filter = 0;
    std::vector<std::size_t> pair{0, 1};
    std::string out;
    bool seed_given = false;
    bool horizon_given = false;
};

fs::path output_dir(const RunConfig &cfg) {
    fs::path dir = cfg.out;
    if (dir.empty()) {
        const char *env = std::getenv("HMMLAB_OUT_DIR");
        dir = env && *env ? fs::path(env) : fs::path(".");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

std::ofstream open_output(const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

/// A model file, or a fixture label when no such file exists.
HmmModel resolve_model(const RunConfig &cfg) {
    if (cfg.model.empty()) throw ConfigError("--model is required");
    if (!fs::exists(cfg.model)) {
        const auto labels = fixtures::labels();
        if (std::find(labels.begin(), labels.end(), cfg.model) != labels.end()) return fixtures::by_label(cfg.model);
    }
    return io::load_model(cfg.model);
}

/// "pi", "uniform", "delta:k" or comma-separated weights.
Distribution resolve_prior(const std::string &text, const HmmModel &model) {
    PriorSpec spec;
    if (text == "pi") {
        spec = PriorSpec::stationary_law();
    } else if (text == "uniform") {
        spec = PriorSpec::uniform_law();
    } else if (text.rfind("delta:", 0) == 0) {
        try {
            spec = PriorSpec::point(std::stoul(text.substr(6)));
        } catch (const std::logic_error &) {
            throw ConfigError("bad prior '" + text + "'");
        }
    } else {
        std::vector<double> w;
        std::stringstream ss(text);
        std::string item;
        try {
            while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
        } catch (const std::logic_error &) {
            throw ConfigError("bad prior '" + text + "'");
        }
        spec = PriorSpec::explicit_weights(std::move(w));
    }
    return spec.resolve(model);
}

/// Reads the y column of a CSV with a header (or the only column).
ObservationPath read_observations(const std::string &file, const HmmModel &model) {
    std::istringstream in(io::read_file(file));
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("observation file '" + file + "' is empty");
    std::size_t column = 0;
    {
        std::stringstream header(line);
        std::string name;
        for (std::size_t i = 0; std::getline(header, name, ','); ++i)
            if (name == "y") column = i;
    }
    ObservationPath path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        for (std::size_t i = 0; i <= column; ++i)
            if (!std::getline(row, cell, ',')) throw ConfigError("observation file: short row '" + line + "'");
        try {
            if (model.channel.is_finite())
                path.push_back(Observation::discrete(std::stoul(cell)));
            else
                path.push_back(Observation::continuous(std::stod(cell)));
        } catch (const std::logic_error &) {
            throw ConfigError("observation file: bad value '" + cell + "'");
        }
    }
    if (path.empty()) throw ConfigError("observation file '" + file + "' has no rows");
    return path;
}

/// Observations from --observations, else simulated from the prior (horizon + 1 values).
ObservationPath resolve_path(const RunConfig &cfg, const HmmModel &model, const Distribution &prior) {
    if (!cfg.observations.empty()) return read_observations(cfg.observations, model);
    return simulate(model, prior, cfg.horizon + 1, cfg.seed).observations;
}

int cmd_simulate(const RunConfig &cfg) {
    const HmmModel model = resolve_model(cfg);
    const Distribution start = resolve_prior(cfg.prior, model);
    const auto path = simulate(model, start, cfg.horizon, cfg.seed);
    const auto file = output_dir(cfg) / "simulation.csv";
    auto out = open_output(file);
    csv::write_simulation(out, path);
    std::cout << file.string() << '\n';
    return kExitOk;
}

int cmd_filter(const RunConfig &cfg) {
    const HmmModel model = resolve_model(cfg);
    const Distribution prior = resolve_prior(cfg.prior, model);
    const auto y = resolve_path(cfg, model, prior);
    const auto traj = filter_run(model, prior, y);
    const auto file = output_dir(cfg) / "filter.csv";
    auto out = open_output(file);
    csv::write_trajectory(out, traj);
    std::cout << file.string() << '\n' << "log_likelihood," << csv::format_double(traj.log_likelihood()) << '\n';
    return kExitOk;
}

int cmd_stability(const RunConfig &cfg) {
    if (cfg.scenario.empty()) throw ConfigError("--scenario is required");
    const auto registry = cfg.registry.empty() ? default_registry() : parse_registry(io::read_file(cfg.registry));
    ScenarioSpec spec = find_scenario(registry, cfg.scenario);
    if (cfg.seed_given) spec.seed = cfg.seed;
    if (cfg.horizon_given) spec.horizon = cfg.horizon;
    if (cfg.trials > 0) spec.trials = cfg.trials;
    const HmmModel model = cfg.model.empty() ? fixtures::by_label(spec.model_label) : resolve_model(cfg);
    const auto result = run_scenario(spec, model, RunOptions{cfg.threads});
    const auto file = output_dir(cfg) / (spec.name + ".csv");
    auto out = open_output(file);
    write_scenario_csv(out, result);
    std::cout << file.string() << '\n'
              << "VERDICT," << (result.pass ? "PASS" : "FAIL") << ',' << csv::format_double(result.metric) << ','
              << csv::format_double(result.threshold) << '\n';
    return result.pass ? kExitOk : kExitFail;
}

int cmd_environment(const RunConfig &cfg) {
    const HmmModel model = resolve_model(cfg);
    const Distribution prior = resolve_prior(cfg.prior, model);
    const auto y = resolve_path(cfg, model, prior);
    if (cfg.pair.size() != 2) throw ConfigError("--pair takes two states");
    const auto kernels = conditional_kernels(model, y);
    const auto dir = output_dir(cfg);
    {
        auto out = open_output(dir / "kernels.csv");
        csv::write_kernels(out, kernels);
    }
    {
        auto out = open_output(dir / "beta.csv");
        csv::write_beta_curve(out, beta_curve(kernels, cfg.pair[0], cfg.pair[1]));
    }
    const auto meet = irreducibility_check(kernels, cfg.pair[0], cfg.pair[1]);
    std::cout << (dir / "kernels.csv").string() << '\n'
              << (dir / "beta.csv").string() << '\n'
              << "irreducible_at," << (meet ? std::to_string(*meet) : std::string("none")) << '\n';
    return kExitOk;
}

int cmd_oracle_check(const RunConfig &cfg) {
    const HmmModel model = resolve_model(cfg);
    const Distribution prior = resolve_prior(cfg.prior, model);
    const auto y = resolve_path(cfg, model, prior);
    const auto traj = filter_run(model, prior, y);
    const oracle::TableSummary full(oracle::joint_table(model, prior, y));
    double filt = 0.0, smooth = 0.0;
    for (std::size_t n = 0; n <= y.horizon(); ++n) {
        const oracle::TableSummary prefix(oracle::joint_table(model, prior, y.prefix(n)));
        const auto expect = prefix.marginal_law(n);
        for (std::size_t x = 0; x < model.states(); ++x) filt = std::max(filt, std::abs(traj.states[n][x] - expect[x]));
    }
    const auto smoothed = smoothed_marginals(model, prior, y);
    for (std::size_t n = 0; n <= y.horizon(); ++n) {
        const auto expect = full.marginal_law(n);
        for (std::size_t x = 0; x < model.states(); ++x)
            smooth = std::max(smooth, std::abs(smoothed[n][x] - expect[x]));
    }
    const bool ok = std::max(filt, smooth) <= 1e-10;
    std::cout << "filter_max_abs," << csv::format_double(filt) << '\n'
              << "smoother_max_abs," << csv::format_double(smooth) << '\n'
              << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitFail;
}

int cmd_accept(const RunConfig &cfg) {
    acceptance::Options opts;
    if (cfg.seed_given) opts.seed = cfg.seed;
    if (cfg.filter != 0) opts.only = cfg.filter;
    opts.threads = cfg.threads;
    if (!cfg.registry.empty()) opts.registry = parse_registry(io::read_file(cfg.registry));
    if (!cfg.inject_fault.empty()) {
        if (cfg.inject_fault != "corrupt-kernel") throw ConfigError("unknown fault '" + cfg.inject_fault + "'");
        opts.corrupt_kernel = true;
    }
    const auto results = acceptance::run(opts);
    const std::string text = acceptance::summary(results);
    std::cout << text;
    std::cerr << "timing (id,seconds,budget)\n" << acceptance::timing_report(results);
    if (!cfg.out.empty() || std::getenv("HMMLAB_OUT_DIR")) {
        auto out = open_output(output_dir(cfg) / "acceptance.txt");
        out << text;
    }
    return acceptance::all_pass(results) ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Finite-state HMM laboratory for filter stability experiments"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--out", cfg.out, "Output directory (default $HMMLAB_OUT_DIR or .)");
        sub->add_option("--seed", cfg.seed, "Master seed (u64)");
    };
    auto model_opts = [&](CLI::App *sub) {
        sub->add_option("--model", cfg.model, "Model JSON file or fixture label M1..M4")->required();
        sub->add_option("--prior", cfg.prior, "pi, uniform, delta:k or comma-separated weights");
        sub->add_option("--horizon", cfg.horizon, "Final time index N of a simulated path");
        sub->add_option("--observations", cfg.observations, "CSV with a y column instead of simulating");
    };

    auto *simulate_cmd = app.add_subcommand("simulate", "Simulate states and observations");
    simulate_cmd->add_option("--model", cfg.model, "Model JSON file or fixture label M1..M4")->required();
    simulate_cmd->add_option("--prior", cfg.prior, "Law of X_0");
    simulate_cmd->add_option("--horizon", cfg.horizon, "Number of rows to emit");
    common(simulate_cmd);

    auto *filter_cmd = app.add_subcommand("filter", "Run the filter along a path");
    model_opts(filter_cmd);
    common(filter_cmd);

    auto *stability_cmd = app.add_subcommand("stability", "Run a registered stability scenario");
    stability_cmd->add_option("--scenario", cfg.scenario, "Scenario name")->required();
    stability_cmd->add_option("--registry", cfg.registry, "Scenario registry JSON (default: built-in)");
    stability_cmd->add_option("--model", cfg.model, "Override the scenario's fixture");
    auto *horizon_opt = stability_cmd->add_option("--horizon", cfg.horizon, "Override the horizon");
    stability_cmd->add_option("--trials", cfg.trials, "Override the trial count");
    stability_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    common(stability_cmd);

    auto *environment_cmd = app.add_subcommand("environment", "Conditional kernels and beta curve");
    model_opts(environment_cmd);
    environment_cmd->add_option("--pair", cfg.pair, "Two start states for beta")->expected(2);
    common(environment_cmd);

    auto *oracle_cmd = app.add_subcommand("oracle-check", "Compare filter and smoother with enumeration");
    model_opts(oracle_cmd);
    common(oracle_cmd);

    auto *accept_cmd = app.add_subcommand("accept", "Run the acceptance suite");
    accept_cmd->add_option("--filter", cfg.filter, "Run one criterion id");
    accept_cmd->add_option("--registry", cfg.registry, "Scenario registry JSON (default: built-in)");
    accept_cmd->add_option("--inject-fault", cfg.inject_fault, "corrupt-kernel");
    accept_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    common(accept_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    for (auto *sub : {simulate_cmd, filter_cmd, stability_cmd, environment_cmd, oracle_cmd, accept_cmd})
        if (sub->parsed()) cfg.seed_given = sub->count("--seed") > 0;
    cfg.horizon_given = horizon_opt->count() > 0;

    try {
        if (simulate_cmd->parsed()) return cmd_simulate(cfg);
        if (filter_cmd->parsed()) return cmd_filter(cfg);
        if (stability_cmd->parsed()) return cmd_stability(cfg);
        if (environment_cmd->parsed()) return cmd_environment(cfg);
        if (oracle_cmd->parsed()) return cmd_oracle_check(cfg);
        if (accept_cmd->parsed()) return cmd_accept(cfg);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ModelError &e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitModel;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
