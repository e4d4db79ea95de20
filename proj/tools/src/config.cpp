#include "dloc_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dloc_cli/manifest.hpp"

namespace dloc::cli {

using nlohmann::json;

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
    std::vector<std::uint64_t> s;
    for (int r = 0; r < realizations; ++r) s.push_back(seed_base + std::uint64_t(r));
    return s;
}

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + it.key(), "unknown key");
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + key, std::string("wrong type (") + e.what() + ")");
    }
}

const json& section(const json& j, const char* name) {
    static const json empty = json::object();
    if (!j.contains(name)) return empty;
    if (!j.at(name).is_object()) throw ConfigError(name, "must be an object");
    return j.at(name);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown(j, "", {"mode", "model", "seeds", "numerics", "checks", "output"});
    ExperimentConfig c;
    read(j, "", "mode", c.mode);
    read(j, "", "checks", c.checks);
    read(j, "", "output", c.output);

    const json& m = section(j, "model");
    reject_unknown(m, "model.", {"L", "sigma", "lambda", "tau", "delta", "ell", "eta"});
    read(m, "model.", "L", c.L);
    read(m, "model.", "sigma", c.sigma);
    if (m.contains("lambda") && m.at("lambda").is_number()) c.lambdas = {m.at("lambda").get<double>()};
    else read(m, "model.", "lambda", c.lambdas);
    read(m, "model.", "tau", c.tau);
    read(m, "model.", "delta", c.delta);
    read(m, "model.", "ell", c.ell);
    read(m, "model.", "eta", c.eta);

    const json& s = section(j, "seeds");
    reject_unknown(s, "seeds.", {"base", "realizations"});
    read(s, "seeds.", "base", c.seed_base);
    read(s, "seeds.", "realizations", c.realizations);

    const json& n = section(j, "numerics");
    reject_unknown(n, "numerics.", {"grid_m", "filter_degree", "tol", "dense_limit", "times", "sigmas", "J", "j_min",
                                    "j_max", "epsilon_log2", "kappas", "cap", "configs", "samples"});
    read(n, "numerics.", "grid_m", c.grid_m);
    read(n, "numerics.", "filter_degree", c.filter_degree);
    read(n, "numerics.", "tol", c.tol);
    read(n, "numerics.", "dense_limit", c.dense_limit);
    read(n, "numerics.", "times", c.times);
    read(n, "numerics.", "sigmas", c.sigmas);
    read(n, "numerics.", "J", c.J);
    read(n, "numerics.", "j_min", c.j_min);
    read(n, "numerics.", "j_max", c.j_max);
    read(n, "numerics.", "epsilon_log2", c.epsilon_log2);
    read(n, "numerics.", "kappas", c.kappas);
    read(n, "numerics.", "cap", c.cap);
    read(n, "numerics.", "configs", c.configs);
    read(n, "numerics.", "samples", c.samples);
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = c.mode;
    j["model"] = {{"L", c.L},         {"sigma", c.sigma}, {"lambda", c.lambdas}, {"tau", c.tau},
                  {"delta", c.delta}, {"ell", c.ell},     {"eta", c.eta}};
    j["seeds"] = {{"base", c.seed_base}, {"realizations", c.realizations}};
    j["numerics"] = {{"grid_m", c.grid_m}, {"filter_degree", c.filter_degree}, {"tol", c.tol},
                     {"dense_limit", c.dense_limit}, {"times", c.times}, {"sigmas", c.sigmas},
                     {"J", c.J}, {"j_min", c.j_min}, {"j_max", c.j_max}, {"epsilon_log2", c.epsilon_log2},
                     {"kappas", c.kappas}, {"cap", c.cap}, {"configs", c.configs}, {"samples", c.samples}};
    j["checks"] = c.checks;
    j["output"] = c.output;
    return j;
}

namespace {

void require(bool ok, const std::string& field, const std::string& reason) {
    if (!ok) throw ConfigError(field, reason);
}

}  // namespace

void validate(const ExperimentConfig& c) {
    const auto& modes = known_modes();
    require(std::find(modes.begin(), modes.end(), c.mode) != modes.end(), "mode", "unknown mode '" + c.mode + "'");
    const bool analytic = c.mode == "schedule" || c.mode == "bounds";
    const bool needs_positive_sigma = analytic || c.mode == "resolvent-norms" || c.mode == "verify-wick";

    require(c.L >= 1 && c.L <= 200, "model.L", "must lie in [1, 200]");
    for (double s : c.sigma_list()) {
        require(s >= 0.0 && s <= 0.5, "model.sigma", "must lie in [0, 1/2]");
        if (needs_positive_sigma) require(s > 0.0, "model.sigma", "must be positive in mode " + c.mode);
    }
    require(!c.lambdas.empty(), "model.lambda", "needs at least one value");
    for (double l : c.lambdas) require(l >= 0.0 && std::isfinite(l), "model.lambda", "must be finite and >= 0");
    require(c.tau > 0.0 && c.tau < 1.0, "model.tau", "must lie in (0, 1)");
    require(c.delta > 0.0 && c.delta < 1.0, "model.delta", "must lie in (0, 1)");
    require(c.eta > 0.0 && c.eta < 0.25, "model.eta", "must lie in (0, 1/4)");
    if (analytic) {
        for (double l : c.lambdas) require(l > 0.0 && l < c.tau, "model.lambda", "need 0 < lambda < tau");
        require(c.tau < c.delta, "model.tau", "need tau < delta");
    }
    if (c.mode == "sweep" || c.mode == "diag") {
        require(c.ell >= 8, "model.ell", "must be >= 8");
        require(c.mode == "diag" || 2 * c.ell < c.L, "model.ell", "need ell < L/2 so interior shells exist");
        require(std::size_t(2 * c.L + 1) * std::size_t(2 * c.L + 1) <= std::size_t(c.dense_limit), "model.L",
                "box exceeds numerics.dense_limit");
    }
    if (c.mode == "evolve") require(c.ell >= 8, "model.ell", "must be >= 8");

    require(c.realizations >= 0 && c.realizations <= 100000, "seeds.realizations", "must lie in [0, 100000]");
    require(c.grid_m >= 1 && c.grid_m <= 14, "numerics.grid_m", "must lie in [1, 14]");
    require(c.filter_degree >= 1 && c.filter_degree <= 100000, "numerics.filter_degree", "must lie in [1, 100000]");
    require(c.tol > 0.0 && c.tol < 1.0, "numerics.tol", "must lie in (0, 1)");
    require(c.dense_limit >= 1, "numerics.dense_limit", "must be positive");
    for (double t : c.times) require(t >= 0.0 && std::isfinite(t), "numerics.times", "must be finite and >= 0");
    require(c.J >= 0, "numerics.J", "must be >= 0");
    require(c.j_min >= 0 && c.j_min < c.j_max, "numerics.j_min", "need 0 <= j_min < j_max");
    if (c.mode == "resolvent-norms") {
        require(c.grid_m >= c.J + 3, "numerics.grid_m", "need grid_m >= J + 3 to resolve scale 2^J");
        require(c.j_max <= c.J, "numerics.j_max", "need j_max <= J");
        require(!c.epsilon_log2.empty(), "numerics.epsilon_log2", "needs at least one value");
    }
    for (int e : c.epsilon_log2) require(e < 0 && e >= -60, "numerics.epsilon_log2", "must lie in [-60, -1]");
    for (int k : c.kappas) require(k >= 1 && (k & (k - 1)) == 0, "numerics.kappas", "must be powers of two");
    require(c.cap >= 2 && c.cap <= 12, "numerics.cap", "must lie in [2, 12]");
    require(c.configs >= 0, "numerics.configs", "must be >= 0");
    require(c.samples >= 1000, "numerics.samples", "must be >= 1000");
    require(!c.output.empty(), "output", "must not be empty");
}

std::string config_hash(const ExperimentConfig& c) {
    json j = to_json(c);
    j.erase("output");
    return sha256_hex(j.dump());
}

}  // namespace dloc::cli
