#include "hmmlab/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmmlab/errors.hpp"

namespace hmmlab::io {

using nlohmann::json;

namespace {

template <typename T> T field(const json &j, const char *key) {
    if (!j.contains(key)) throw ConfigError(std::string("model config: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("model config: bad field '") + key + "': " + e.what());
    }
}

ObservationChannel parse_channel(const json &j, std::size_t states) {
    const auto type = field<std::string>(j, "type");
    if (type == "finite") {
        auto g = field<std::vector<std::vector<double>>>(j, "g");
        const std::size_t m = j.contains("m") ? field<std::size_t>(j, "m") : (g.empty() ? 0 : g.front().size());
        auto phi = j.contains("phi") ? field<std::vector<double>>(j, "phi") : std::vector<double>(m, 1.0);
        if (phi.size() != m) throw ModelError("channel: phi length differs from m");
        if (g.size() != states) throw ModelError("channel: g has " + std::to_string(g.size()) +
                                                 " rows for " + std::to_string(states) + " states");
        for (const auto &row : g)
            if (row.size() != m) throw ModelError("channel: g row length differs from m");
        return ObservationChannel::finite(std::move(g), std::move(phi));
    }
    if (type == "gaussian") {
        auto means = field<std::vector<double>>(j, "means");
        if (means.size() != states) throw ModelError("channel: gaussian means length differs from state count");
        return ObservationChannel::gaussian(std::move(means), field<double>(j, "sigma"));
    }
    throw ConfigError("model config: unknown channel type '" + type + "'");
}

} // namespace

HmmModel parse_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("model config: top level must be an object");
    const auto rows = field<std::vector<std::vector<double>>>(j, "kernel");
    for (const auto &r : rows)
        if (r.size() != rows.size()) throw ModelError("kernel must be square");
    if (!j.contains("channel")) throw ConfigError("model config: missing field 'channel'");
    ObservationChannel channel = parse_channel(j.at("channel"), rows.size());
    std::optional<Distribution> stationary;
    if (j.contains("stationary")) stationary = Distribution(field<std::vector<double>>(j, "stationary"));
    const std::string label = j.contains("label") ? field<std::string>(j, "label") : std::string("unnamed");
    try {
        return make_model(TransitionKernel(rows), std::move(channel), label, std::move(stationary));
    } catch (const NonUniqueStationary &e) {
        throw ModelError(std::string(e.what()) + "; supply 'stationary' explicitly");
    } catch (const NoConvergence &e) {
        throw ModelError(e.what());
    }
}

std::string serialize_model(const HmmModel &model) {
    json j;
    j["label"] = model.label;
    j["kernel"] = model.kernel.to_rows();
    j["stationary"] = model.stationary.vec();
    const auto &ch = model.channel;
    if (ch.is_finite()) {
        j["channel"] = {{"type", "finite"}, {"m", ch.alphabet()}, {"g", ch.g_rows()}, {"phi", ch.phi()}};
    } else if (ch.gaussian_means()) {
        j["channel"] = {{"type", "gaussian"}, {"means", *ch.gaussian_means()}, {"sigma", ch.gaussian_sigma()}};
    } else {
        throw ModelError("serialize_model: custom continuous channels have no file representation");
    }
    return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HmmModel load_model(const std::filesystem::path &path) { return parse_model(read_file(path)); }

void save_model(const std::filesystem::path &path, const HmmModel &model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << serialize_model(model);
}

} // namespace hmmlab::io
