#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dloc::cli {

// Raised for anything wrong in a config file; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& reason)
        : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline const std::vector<std::string>& known_modes() {
    static const std::vector<std::string> m{"sweep", "verify-wick", "resolvent-norms", "evolve", "diag", "schedule", "bounds"};
    return m;
}

// All lengths are in lattice spacings, energies in units of the hopping, times in
// inverse hopping; momenta live on [-1/2, 1/2]^2.
struct ExperimentConfig {
    std::string mode = "sweep";

    // model
    int L = 20;
    double sigma = 0.25;
    std::vector<double> lambdas{0.5};
    double tau = 0.5;
    double delta = 0.2;
    int ell = 8;
    double eta = 0.1;

    // seeds
    std::uint64_t seed_base = 1;
    int realizations = 4;

    // numerics
    int grid_m = 10;
    int filter_degree = 2000;
    double tol = 1e-10;
    int dense_limit = 10000;
    std::vector<double> times{1.0, 3.0, 10.0};
    std::vector<double> sigmas;  // sweep over several sigma (resolvent-norms, schedule, bounds); empty = {sigma}
    int J = 8;
    int j_min = 3;
    int j_max = 8;
    std::vector<int> epsilon_log2{-30};  // eps = 2^k
    std::vector<int> kappas{1};
    int cap = 8;
    int configs = 50;
    int samples = 1000000;

    bool checks = true;
    std::string output = "out";

    std::vector<double> sigma_list() const { return sigmas.empty() ? std::vector<double>{sigma} : sigmas; }
    std::vector<std::uint64_t> seeds() const;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);
// Throws ConfigError naming the first field outside its validity window.
void validate(const ExperimentConfig& c);
// SHA-256 of the canonical JSON without the output directory (workers never enter it).
std::string config_hash(const ExperimentConfig& c);

}  // namespace dloc::cli
