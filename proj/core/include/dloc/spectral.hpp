#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dloc/disorder.hpp"
#include "dloc/lattice.hpp"

namespace dloc {

class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double measured) : std::runtime_error(what), measured_(measured) {}
    double measured() const { return measured_; }

private:
    double measured_;
};

// Eigenpairs of the Dirichlet Hamiltonian. vectors is column-major: column k is psi_k.
struct EigenSolution {
    LatticeBox box{1};
    double lambda = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // size() * count()
    bool complete = true;          // false when only part of the spectrum was computed

    std::size_t count() const { return values.size(); }
    const double* vec(std::size_t k) const { return vectors.data() + k * box.size(); }
};

EigenSolution dirichlet_diagonalize(const LatticeBox& box, const DisorderField& disorder, double lambda,
                                    std::size_t dense_limit = 10000);
EigenSolution diagonalize(const Hamiltonian& h, std::size_t dense_limit = 10000);
// Symmetric dense eigensolve of a column-major matrix (overwritten by the vectors).
std::vector<double> symmetric_eigensolve(std::vector<double>& a, std::size_t n);

// The `count` eigenpairs closest to `target`, by shift-invert Lanczos on the
// banded LU of H - target. Residuals are checked against H.
EigenSolution nearest_eigenpairs(const Hamiltonian& h, double target, std::size_t count, std::uint64_t start_seed = 1);

enum class ShellCenters { all, interior };

// S_alpha = sum_x |psi(x)| ||R_{x,delta,ell} psi||.
double membership_statistic(const EigenSolution& sol, std::size_t alpha, double delta, int ell,
                            ShellCenters centers = ShellCenters::interior);
double membership_statistic(const std::vector<double>& psi, const LatticeBox& box, double delta, int ell,
                            ShellCenters centers = ShellCenters::interior);

double inverse_participation(const double* psi, std::size_t n);
// -1/slope of a least-squares fit of log|psi| against distance from the peak; +inf if slope >= 0.
double exponential_fit_length(const double* psi, const LatticeBox& box);

struct EigenstateDiagnostics {
    std::size_t alpha = 0;
    double energy = 0.0;
    double s_alpha = 0.0;           // interior centers
    double s_alpha_clipped = 0.0;   // all centers, clipped shells
    double ipr = 0.0;
    double fit_length = 0.0;
    bool in_window = false;
    bool localized = false;
};

struct LocalizationReport {
    EnergyWindow window{0.5};
    double eps = 0.0;
    double delta = 0.0;
    int ell = 0;
    ShellCenters centers = ShellCenters::interior;
    std::vector<std::size_t> window_set;     // A_L(I_tau)
    std::vector<std::size_t> localized_set;  // A^omega_L(eps, delta, ell; I_tau)
    std::size_t total = 0;                   // |A_L|
    double fraction = 0.0;                   // |A_L \ A^omega| / |A_L|
    std::vector<EigenstateDiagnostics> states;
};

LocalizationReport localization_report(const EigenSolution& sol, const EnergyWindow& window, double eps, double delta,
                                       int ell, ShellCenters centers = ShellCenters::interior);

// Both sides of the split estimate sum_x ||R_x chi(H) e^{-itH} delta_x||^2 <=
// (1 + eps^{1/2}) |A(I) \ A^omega| + eps (1 + eps^{-1/2}) |A^omega|, with the literal
// (all-centers) membership sets.
struct SplitEstimate {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t window_count = 0;
    std::size_t localized_count = 0;
};
SplitEstimate split_estimate(const EigenSolution& sol, const EnergyWindow& window, double eps, double delta, int ell,
                             double t);

// Welford accumulator with the parallel (Chan) merge.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }
    double stderr_mean() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t count = 0;
};

MeanStderr disorder_average(const std::vector<double>& values);
MeanStderr disorder_average(const std::vector<RunningStats>& parts);

}  // namespace dloc
