#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dloc/dyadic.hpp"
#include "dloc/lattice.hpp"

namespace dloc {

// One realization V(x) = v(x) omega_x on a box. omega_x depends only on (seed, x).
class DisorderField {
public:
    DisorderField(std::uint64_t seed, LatticeBox box, DecayProfile profile);

    std::uint64_t seed() const { return seed_; }
    const LatticeBox& box() const { return box_; }
    const DecayProfile& profile() const { return profile_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& values() const { return values_; }
    double max_abs() const;

    // V_j(x) = P_j(x) v(x) omega_x for j = 0..J+1
    std::vector<std::vector<double>> dyadic_slices(const DyadicPartition& partition) const;

private:
    std::uint64_t seed_;
    LatticeBox box_;
    DecayProfile profile_;
    std::vector<double> omega_;
    std::vector<double> values_;
};

DisorderField sample_disorder(std::uint64_t seed, const LatticeBox& box, const DecayProfile& profile);

// Same per-site draws on a periodic grid: array position a holds lattice coordinate a or a - N.
std::vector<double> torus_potential(std::uint64_t seed, const TorusGrid& grid, const DecayProfile& profile);

// H = Delta + lambda V on a box, Dirichlet: neighbours outside the box are dropped.
class Hamiltonian {
public:
    Hamiltonian(const DisorderField& disorder, double lambda);
    Hamiltonian(LatticeBox box, std::vector<double> potential);  // potential already includes lambda

    const LatticeBox& box() const { return box_; }
    const std::vector<double>& potential() const { return potential_; }
    double spectral_bound() const;  // 4 + max |lambda V|

    void apply(const std::complex<double>* in, std::complex<double>* out) const;
    void apply(const double* in, double* out) const;
    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& psi) const;

    // column-major dense matrix
    std::vector<double> dense() const;

private:
    LatticeBox box_;
    std::vector<double> potential_;
};

std::vector<std::complex<double>> apply_hamiltonian(const std::vector<std::complex<double>>& psi,
                                                    const DisorderField& disorder, double lambda);

}  // namespace dloc
