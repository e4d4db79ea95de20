#include "dloc/shell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dloc {
namespace {

// plateau 1[|d| <= a] convolved with weights (K - |m|)/K^2, |m| < K
std::vector<double> fejer_plateau(int a, int K, int reach) {
    std::vector<double> s(2 * reach + 1, 0.0);
    const double k2 = double(K) * K;
    for (int d = -reach; d <= reach; ++d) {
        double acc = 0.0;
        for (int m = -(K - 1); m <= K - 1; ++m)
            if (std::abs(d - m) <= a) acc += (K - std::abs(m)) / k2;
        s[d + reach] = acc;
    }
    return s;
}

}  // namespace

ShellObservable::ShellObservable(Site center, double delta, int ell)
    : center_(center), delta_(delta), ell_(ell), reach_(0), norm_(1.0) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ShellObservable: delta must lie in (0, 1)");
    if (ell < 8) throw std::invalid_argument("ShellObservable: ell must be at least 8, got " + std::to_string(ell));
    reach_ = (ell + 1) / 2 - 1;  // ceil(ell/2) - 1 < ell/2
    const int k_out = std::max(1, ell / 64);
    const int a_out = reach_ - (k_out - 1);
    const int core = int(std::floor(delta * ell / 2.0));
    const int k_in = std::max(1, int(std::floor(delta * ell / 4.0)));
    const int a_in = core + k_in - 1;
    if (a_in + k_in - 1 > a_out - (k_out - 1))
        throw std::invalid_argument("ShellObservable: delta too close to 1 for ell = " + std::to_string(ell));
    outer_ = fejer_plateau(a_out, k_out, reach_);
    inner_ = fejer_plateau(a_in, k_in, reach_);
    double peak = 0.0;
    for (int d1 = -reach_; d1 <= reach_; ++d1)
        for (int d2 = -reach_; d2 <= reach_; ++d2)
            peak = std::max(peak, outer(d1) * outer(d2) - inner(d1) * inner(d2));
    if (!(peak > 0.0)) throw std::invalid_argument("ShellObservable: empty shell");
    norm_ = 1.0 / peak;
}

ShellObservable ShellObservable::recentered(const Site& x) const {
    ShellObservable s = *this;
    s.center_ = x;
    return s;
}

double ShellObservable::weight(const Site& y) const {
    const int d1 = y[0] - center_[0], d2 = y[1] - center_[1];
    if (std::abs(d1) > reach_ || std::abs(d2) > reach_) return 0.0;
    const double r = norm_ * (outer(d1) * outer(d2) - inner(d1) * inner(d2));
    return std::clamp(r, 0.0, 1.0);
}

namespace {
template <class Amp>
double box_mass(const std::vector<Amp>& psi, const LatticeBox& box, const ShellObservable& shell, bool clip) {
    if (psi.size() != box.size()) throw std::invalid_argument("shell_mass: field size does not match box");
    const int h = shell.reach();
    const Site& c = shell.center();
    const int L = box.half_side();
    if (!clip && (std::abs(c[0]) + h > L || std::abs(c[1]) + h > L))
        throw std::invalid_argument("shell_mass: shell exceeds the box");
    double acc = 0.0;
    for (int a = std::max(-L, c[0] - h); a <= std::min(L, c[0] + h); ++a)
        for (int b = std::max(-L, c[1] - h); b <= std::min(L, c[1] + h); ++b) {
            const double r = shell.weight({a, b});
            acc += r * r * std::norm(psi[box.index({a, b})]);
        }
    return acc;
}
}  // namespace

double shell_mass(const std::vector<std::complex<double>>& psi, const LatticeBox& box, const ShellObservable& shell,
                  bool clip) {
    return box_mass(psi, box, shell, clip);
}

double shell_mass(const std::vector<double>& psi, const LatticeBox& box, const ShellObservable& shell, bool clip) {
    return box_mass(psi, box, shell, clip);
}

double shell_mass(const std::vector<std::complex<double>>& psi, const TorusGrid& grid, const ShellObservable& shell) {
    if (psi.size() != grid.size()) throw std::invalid_argument("shell_mass: field size does not match grid");
    const int h = shell.reach();
    if (2 * h + 1 > grid.n()) throw std::invalid_argument("shell_mass: shell wraps around the torus");
    const Site& c = shell.center();
    double acc = 0.0;
    for (int a = c[0] - h; a <= c[0] + h; ++a)
        for (int b = c[1] - h; b <= c[1] + h; ++b) {
            const double r = shell.weight({a, b});
            acc += r * r * std::norm(psi[grid.index_of_site({a, b})]);
        }
    return acc;
}

std::vector<double> shell_mass_map(const std::vector<double>& density, const LatticeBox& box, double delta, int ell) {
    if (density.size() != box.size()) throw std::invalid_argument("shell_mass_map: field size does not match box");
    const ShellObservable shell({0, 0}, delta, ell);
    const int h = shell.reach();
    const int n = box.side();
    const double c2 = shell.normalization() * shell.normalization();
    // R^2 = c^2 (oo x oo - 2 oi x oi + ii x ii) with oo = S_out^2, oi = S_out S_in, ii = S_in^2
    std::vector<double> oo(2 * h + 1), oi(2 * h + 1), ii(2 * h + 1);
    for (int d = -h; d <= h; ++d) {
        oo[d + h] = shell.outer(d) * shell.outer(d);
        oi[d + h] = shell.outer(d) * shell.inner(d);
        ii[d + h] = shell.inner(d) * shell.inner(d);
    }
    std::vector<double> out(box.size(), 0.0), tmp(box.size());
    const std::vector<double>* kernels[3] = {&oo, &oi, &ii};
    const double coef[3] = {1.0, -2.0, 1.0};
    for (int t = 0; t < 3; ++t) {
        const auto& k = *kernels[t];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int d = std::max(-h, -b); d <= std::min(h, n - 1 - b); ++d) s += k[d + h] * density[a * n + b + d];
                tmp[a * n + b] = s;
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int d = std::max(-h, -a); d <= std::min(h, n - 1 - a); ++d) s += k[d + h] * tmp[(a + d) * n + b];
                out[a * n + b] += coef[t] * c2 * s;
            }
    }
    for (auto& v : out) v = std::max(v, 0.0);
    return out;
}

}  // namespace dloc
