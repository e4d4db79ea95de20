#include "dloc/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dloc/rng.hpp"

namespace dloc {

DisorderField::DisorderField(std::uint64_t seed, LatticeBox box, DecayProfile profile)
    : seed_(seed), box_(box), profile_(profile), omega_(box.size()), values_(box.size()) {
    for (std::size_t i = 0; i < box_.size(); ++i) {
        const Site x = box_.site(i);
        omega_[i] = site_gaussian(seed_, x);
        values_[i] = profile_(x) * omega_[i];
    }
}

double DisorderField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<std::vector<double>> DisorderField::dyadic_slices(const DyadicPartition& partition) const {
    std::vector<std::vector<double>> out(partition.count(), std::vector<double>(box_.size()));
    for (std::size_t i = 0; i < box_.size(); ++i) {
        const Site x = box_.site(i);
        const double r = std::sqrt(norm2(x));
        double rest = values_[i];
        // the last slice takes what is left so the slices sum back to V
        for (int j = 0; j <= partition.top_scale(); ++j) {
            out[j][i] = partition.bump_radius(j, r) * values_[i];
            rest -= out[j][i];
        }
        out[partition.top_scale() + 1][i] = rest;
    }
    return out;
}

DisorderField sample_disorder(std::uint64_t seed, const LatticeBox& box, const DecayProfile& profile) {
    return DisorderField(seed, box, profile);
}

std::vector<double> torus_potential(std::uint64_t seed, const TorusGrid& grid, const DecayProfile& profile) {
    std::vector<double> v(grid.size());
    for (int a = 0; a < grid.n(); ++a)
        for (int b = 0; b < grid.n(); ++b) {
            const Site x{grid.position(a), grid.position(b)};
            v[grid.index(a, b)] = profile(x) * site_gaussian(seed, x);
        }
    return v;
}

Hamiltonian::Hamiltonian(const DisorderField& disorder, double lambda)
    : box_(disorder.box()), potential_(disorder.values()) {
    for (auto& v : potential_) v *= lambda;
}

Hamiltonian::Hamiltonian(LatticeBox box, std::vector<double> potential)
    : box_(box), potential_(std::move(potential)) {
    if (potential_.size() != box_.size()) throw std::invalid_argument("Hamiltonian: potential size does not match box");
}

double Hamiltonian::spectral_bound() const {
    double m = 0.0;
    for (double v : potential_) m = std::max(m, std::abs(v));
    return 4.0 + m;
}

namespace {
template <class T>
void stencil(const LatticeBox& box, const std::vector<double>& pot, const T* in, T* out) {
    const int n = box.side();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const std::size_t i = std::size_t(a) * n + b;
            T s = pot[i] * in[i];
            if (a > 0) s += in[i - n];
            if (a + 1 < n) s += in[i + n];
            if (b > 0) s += in[i - 1];
            if (b + 1 < n) s += in[i + 1];
            out[i] = s;
        }
    }
}
}  // namespace

void Hamiltonian::apply(const std::complex<double>* in, std::complex<double>* out) const {
    stencil(box_, potential_, in, out);
}

void Hamiltonian::apply(const double* in, double* out) const { stencil(box_, potential_, in, out); }

std::vector<std::complex<double>> Hamiltonian::apply(const std::vector<std::complex<double>>& psi) const {
    if (psi.size() != box_.size()) throw std::invalid_argument("Hamiltonian::apply: field size does not match box");
    std::vector<std::complex<double>> out(psi.size());
    apply(psi.data(), out.data());
    return out;
}

std::vector<double> Hamiltonian::dense() const {
    const std::size_t N = box_.size();
    const int n = box_.side();
    std::vector<double> h(N * N, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const std::size_t i = std::size_t(a) * n + b;
            h[i * N + i] = potential_[i];
            if (a + 1 < n) h[i * N + i + n] = h[(i + n) * N + i] = 1.0;
            if (b + 1 < n) h[i * N + i + 1] = h[(i + 1) * N + i] = 1.0;
        }
    return h;
}

std::vector<std::complex<double>> apply_hamiltonian(const std::vector<std::complex<double>>& psi,
                                                    const DisorderField& disorder, double lambda) {
    return Hamiltonian(disorder, lambda).apply(psi);
}

}  // namespace dloc
