#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dloc {

inline constexpr double pi = 3.14159265358979323846;

using Site = std::array<int, 2>;

inline double norm2(const Site& x) {
    return double(x[0]) * x[0] + double(x[1]) * x[1];
}

// Lambda_L = [-L, L]^2 with row-major index (x1 + L) * n + (x2 + L).
class LatticeBox {
public:
    explicit LatticeBox(int L);

    int half_side() const { return L_; }
    int side() const { return 2 * L_ + 1; }
    std::size_t size() const { return std::size_t(side()) * side(); }

    bool contains(const Site& x) const {
        return std::abs(x[0]) <= L_ && std::abs(x[1]) <= L_;
    }
    std::size_t index(const Site& x) const {
        return std::size_t(x[0] + L_) * side() + std::size_t(x[1] + L_);
    }
    Site site(std::size_t i) const {
        const int n = side();
        return {int(i / n) - L_, int(i % n) - L_};
    }

    // Lambda_{L+1} \ Lambda_L
    std::vector<Site> boundary() const;

private:
    int L_;
};

// 2^m x 2^m grid; node a sits at frequency a/N folded into [-1/2, 1/2),
// and the dual lattice site for array position a is a or a - N.
class TorusGrid {
public:
    explicit TorusGrid(int m);

    int exponent() const { return m_; }
    int n() const { return n_; }
    std::size_t size() const { return std::size_t(n_) * n_; }
    double weight() const { return 1.0 / (double(n_) * n_); }

    double frequency(int a) const { return (a < n_ / 2 ? a : a - n_) / double(n_); }
    int position(int a) const { return a < n_ / 2 ? a : a - n_; }
    int wrap(int x) const { return ((x % n_) + n_) % n_; }
    std::size_t index(int a, int b) const { return std::size_t(a) * n_ + std::size_t(b); }
    std::size_t index_of_site(const Site& x) const { return index(wrap(x[0]), wrap(x[1])); }

private:
    int m_;
    int n_;
};

// v(x) = (1 + |x|^2)^(-sigma/2). sigma = 0 is accepted as the uniform-disorder baseline.
class DecayProfile {
public:
    explicit DecayProfile(double sigma);

    double sigma() const { return sigma_; }
    double operator()(const Site& x) const { return std::pow(1.0 + norm2(x), -0.5 * sigma_); }
    double of_radius_sq(double r2) const { return std::pow(1.0 + r2, -0.5 * sigma_); }
    // sup_x |x|^sigma v(x) <= C_v
    static constexpr double c_v = 1.0;

private:
    double sigma_;
};

// I_tau = (-4 + tau, -tau) U (tau, 4 - tau)
class EnergyWindow {
public:
    explicit EnergyWindow(double tau, bool complement = false);

    double tau() const { return tau_; }
    bool complement() const { return complement_; }
    bool in_window(double e) const {
        return (e > -4.0 + tau_ && e < -tau_) || (e > tau_ && e < 4.0 - tau_);
    }
    bool contains(double e) const { return in_window(e) != complement_; }

private:
    double tau_;
    bool complement_;
};

inline double laplacian_symbol(double k1, double k2) {
    return 2.0 * std::cos(2.0 * pi * k1) + 2.0 * std::cos(2.0 * pi * k2);
}

}  // namespace dloc
