#include "hmmlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "hmmlab/csv.hpp"
#include "hmmlab/errors.hpp"
#include "hmmlab/fixtures.hpp"
#include "hmmlab/numeric.hpp"
#include "hmmlab/rng.hpp"
#include "hmmlab/stability.hpp"

namespace hmmlab {

using nlohmann::json;

Distribution PriorSpec::resolve(const HmmModel &model) const {
    const std::size_t d = model.states();
    switch (kind) {
    case Kind::stationary:
        return model.stationary;
    case Kind::uniform:
        return Distribution::uniform(d);
    case Kind::point:
        if (state >= d) throw ConfigError("prior: point mass at " + std::to_string(state) + " outside " +
                                          std::to_string(d) + " states");
        return Distribution::point_mass(d, state);
    case Kind::weights:
        if (weights.size() != d) throw ConfigError("prior: weight vector has wrong dimension");
        try {
            return Distribution::checked(weights);
        } catch (const Error &e) {
            throw ConfigError(std::string("prior: ") + e.what());
        }
    }
    throw ConfigError("prior: unknown kind");
}

std::string_view to_string(ClaimKind kind) {
    switch (kind) {
    case ClaimKind::merges_below: return "merges_below";
    case ClaimKind::stays_at_least: return "stays_at_least";
    case ClaimKind::entropy_below: return "entropy_below";
    case ClaimKind::dominates_singular_mass: return "dominates_singular_mass";
    }
    return "?";
}

ClaimKind claim_from_string(std::string_view text) {
    for (auto k : {ClaimKind::merges_below, ClaimKind::stays_at_least, ClaimKind::entropy_below,
                   ClaimKind::dominates_singular_mass})
        if (to_string(k) == text) return k;
    throw ConfigError("unknown claim '" + std::string(text) + "'");
}

namespace {

struct TrialOutput {
    StabilityCurve curve;
};

TrialOutput run_trial(const ScenarioSpec &spec, const HmmModel &model, const Distribution &mu,
                      const Distribution &nu, const Distribution &gamma, std::size_t index) {
    ObservationPath y;
    if (spec.explicit_path) {
        y = ObservationPath::symbols(*spec.explicit_path);
    } else {
        y = simulate(model, gamma, spec.horizon + 1, child_seed(spec.seed, index)).observations;
    }
    return {stability_curve(model, mu, nu, y)};
}

double mean_of_sorted(std::vector<double> &v) {
    std::sort(v.begin(), v.end());
    if (std::isinf(v.back())) return v.back();
    numeric::KahanSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

double median_of_sorted(const std::vector<double> &v) {
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

} // namespace

ScenarioResult run_scenario(const ScenarioSpec &spec, const HmmModel &model, const RunOptions &options) {
    if (spec.trials == 0) throw ConfigError("scenario '" + spec.name + "': trials must be positive");
    if (spec.explicit_path && spec.explicit_path->size() != spec.horizon + 1)
        throw ConfigError("scenario '" + spec.name + "': explicit path length must be horizon + 1");
    const Distribution mu = spec.mu.resolve(model);
    const Distribution nu = spec.nu.resolve(model);
    const Distribution gamma = spec.path_law.resolve(model);

    std::vector<TrialOutput> outputs(spec.trials);
    std::size_t workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    workers = std::min(workers, spec.trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < spec.trials; ++t) outputs[t] = run_trial(spec, model, mu, nu, gamma, t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = next++; t < spec.trials; t = next++)
                        outputs[t] = run_trial(spec, model, mu, nu, gamma, t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto &th : pool) th.join();
        for (auto &e : errors)
            if (e) std::rethrow_exception(e);
    }

    ScenarioResult result;
    result.name = spec.name;
    result.claim = spec.claim;
    result.threshold = spec.threshold;
    for (auto &o : outputs) {
        if (o.curve.truncated_at) ++result.truncated_trials;
        result.trial_tv.push_back(o.curve.tv_values);
    }

    double min_tv = std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> tv, ent;
    for (std::size_t n = 0; n <= spec.horizon; ++n) {
        tv.clear();
        ent.clear();
        for (const auto &o : outputs) {
            if (n >= o.curve.size()) continue;
            tv.push_back(o.curve.tv_values[n]);
            ent.push_back(o.curve.entropy_values[n]);
        }
        if (tv.empty()) continue;
        ScenarioRow row;
        row.n = n;
        row.tv_mean = mean_of_sorted(tv);
        row.tv_median = median_of_sorted(tv);
        row.tv_max = tv.back();
        min_tv = std::min(min_tv, tv.front());
        row.entropy_mean = mean_of_sorted(ent);
        if (spec.claim == ClaimKind::dominates_singular_mass)
            min_gap = std::min(min_gap, row.tv_mean - singular_mass(model, mu, n));
        if (n >= 1) result.rows.push_back(row);
    }

    const bool complete = result.truncated_trials == 0 && !result.rows.empty();
    switch (spec.claim) {
    case ClaimKind::merges_below:
        result.metric = complete ? result.rows.back().tv_mean : std::numeric_limits<double>::quiet_NaN();
        result.pass = complete && result.metric < spec.threshold;
        break;
    case ClaimKind::stays_at_least:
        result.metric = min_tv;
        result.pass = complete && min_tv >= spec.threshold;
        break;
    case ClaimKind::entropy_below:
        result.metric = complete ? result.rows.back().entropy_mean : std::numeric_limits<double>::quiet_NaN();
        result.pass = complete && result.metric < spec.threshold;
        break;
    case ClaimKind::dominates_singular_mass:
        result.metric = min_gap;
        result.pass = complete && min_gap >= spec.threshold;
        break;
    }
    return result;
}

ScenarioResult run_scenario(const ScenarioSpec &spec, const RunOptions &options) {
    return run_scenario(spec, fixtures::by_label(spec.model_label), options);
}

void write_scenario_csv(std::ostream &os, const ScenarioResult &result) {
    using csv::format_double;
    os << "n,tv_mean,tv_median,tv_max,entropy_mean\n";
    for (const auto &r : result.rows)
        os << r.n << ',' << format_double(r.tv_mean) << ',' << format_double(r.tv_median) << ','
           << format_double(r.tv_max) << ',' << format_double(r.entropy_mean) << '\n';
    os << "VERDICT," << (result.pass ? "PASS" : "FAIL") << ',' << format_double(result.metric) << ','
       << format_double(result.threshold) << '\n';
}

// Registry -------------------------------------------------------------------

std::vector<ScenarioSpec> default_registry() {
    std::vector<ScenarioSpec> r;
    {
        ScenarioSpec s;
        s.name = "M1-stable";
        s.model_label = "M1";
        s.mu = PriorSpec::point(0);
        s.nu = PriorSpec::stationary_law();
        s.path_law = PriorSpec::point(0);
        s.horizon = 200;
        s.trials = 100;
        s.seed = 20240601;
        s.claim = ClaimKind::merges_below;
        s.threshold = 0.01;
        r.push_back(s);
    }
    {
        ScenarioSpec s;
        s.name = "M2-unstable";
        s.model_label = "M2";
        s.mu = PriorSpec::point(0);
        s.nu = PriorSpec::point(2);
        s.path_law = PriorSpec::point(0);
        s.horizon = 1000;
        s.trials = 100;
        s.seed = 20240602;
        s.claim = ClaimKind::stays_at_least;
        s.threshold = 2.0;
        r.push_back(s);
    }
    {
        ScenarioSpec s;
        s.name = "M3-detectable";
        s.model_label = "M3";
        s.mu = PriorSpec::explicit_weights({0.5, 0.3, 0.2});
        s.nu = PriorSpec::uniform_law();
        s.path_law = PriorSpec::stationary_law();
        s.horizon = 500;
        s.trials = 100;
        s.seed = 20240603;
        s.claim = ClaimKind::merges_below;
        s.threshold = 0.01;
        r.push_back(s);
    }
    {
        ScenarioSpec s;
        s.name = "M1-entropy";
        s.model_label = "M1";
        s.mu = PriorSpec::explicit_weights({0.9, 0.1});
        s.nu = PriorSpec::stationary_law();
        s.path_law = PriorSpec::explicit_weights({0.9, 0.1});
        s.horizon = 200;
        s.trials = 100;
        s.seed = 20240604;
        s.claim = ClaimKind::entropy_below;
        s.threshold = 1e-3;
        r.push_back(s);
    }
    {
        ScenarioSpec s;
        s.name = "M4-singular";
        s.model_label = "M4";
        s.mu = PriorSpec::point(2);
        s.nu = PriorSpec::stationary_law();
        s.path_law = PriorSpec::point(2);
        s.horizon = 100;
        s.trials = 100;
        s.seed = 20240605;
        s.claim = ClaimKind::dominates_singular_mass;
        s.threshold = 0.0;
        r.push_back(s);
    }
    return r;
}

const ScenarioSpec &find_scenario(const std::vector<ScenarioSpec> &registry, std::string_view name) {
    for (const auto &s : registry)
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

namespace {

json prior_to_json(const PriorSpec &p) {
    switch (p.kind) {
    case PriorSpec::Kind::stationary: return "pi";
    case PriorSpec::Kind::uniform: return "uniform";
    case PriorSpec::Kind::point: return json{{"delta", p.state}};
    case PriorSpec::Kind::weights: return p.weights;
    }
    return nullptr;
}

PriorSpec prior_from_json(const json &j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "pi") return PriorSpec::stationary_law();
        if (s == "uniform") return PriorSpec::uniform_law();
        throw ConfigError("prior: unknown name '" + s + "'");
    }
    if (j.is_object() && j.contains("delta")) return PriorSpec::point(j.at("delta").get<std::size_t>());
    if (j.is_array()) return PriorSpec::explicit_weights(j.get<std::vector<double>>());
    throw ConfigError("prior: expected \"pi\", \"uniform\", {\"delta\": k} or a weight array");
}

json spec_to_json(const ScenarioSpec &s) {
    json j;
    j["name"] = s.name;
    j["model"] = s.model_label;
    j["mu"] = prior_to_json(s.mu);
    j["nu"] = prior_to_json(s.nu);
    if (s.explicit_path)
        j["path"] = *s.explicit_path;
    else
        j["path_law"] = prior_to_json(s.path_law);
    j["horizon"] = s.horizon;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["claim"] = std::string(to_string(s.claim));
    j["threshold"] = s.threshold;
    return j;
}

ScenarioSpec spec_from_json(const json &j) {
    ScenarioSpec s;
    s.name = j.at("name").get<std::string>();
    s.model_label = j.at("model").get<std::string>();
    s.mu = prior_from_json(j.at("mu"));
    s.nu = prior_from_json(j.at("nu"));
    if (j.contains("path"))
        s.explicit_path = j.at("path").get<std::vector<std::size_t>>();
    else if (j.contains("path_law"))
        s.path_law = prior_from_json(j.at("path_law"));
    s.horizon = j.at("horizon").get<std::size_t>();
    s.trials = j.at("trials").get<std::size_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.claim = claim_from_string(j.at("claim").get<std::string>());
    s.threshold = j.at("threshold").get<double>();
    return s;
}

} // namespace

std::vector<ScenarioSpec> parse_registry(std::string_view text) {
    try {
        const json j = json::parse(text);
        std::vector<ScenarioSpec> out;
        for (const auto &item : j.at("scenarios")) out.push_back(spec_from_json(item));
        return out;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("scenario registry: ") + e.what());
    }
}

std::string serialize_registry(const std::vector<ScenarioSpec> &registry) {
    json list = json::array();
    for (const auto &s : registry) list.push_back(spec_to_json(s));
    return json{{"scenarios", list}}.dump(2) + "\n";
}

} // namespace hmmlab
