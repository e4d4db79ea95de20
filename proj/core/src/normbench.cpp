#include "dloc/normbench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dloc/spectral.hpp"

namespace dloc {

void ResolventProbe::validate(double tau) const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ResolventProbe: epsilon must be positive");
    const double re = alpha.real(), im = alpha.imag();
    const bool left = re >= -4.0 + tau / 2.0 - 1e-12 && re <= -tau / 2.0 + 1e-12;
    const bool right = re >= tau / 2.0 - 1e-12 && re <= 4.0 - tau / 2.0 + 1e-12;
    if (!(left || right)) throw std::invalid_argument("ResolventProbe: Re alpha outside I_{tau/2}");
    if (std::abs(im) > 1e-12 && std::abs(im + 2.0 * epsilon) > 1e-12 * std::max(1.0, epsilon))
        throw std::invalid_argument("ResolventProbe: Im alpha must be 0 or -2 eps");
}

ResolventProbe ResolventProbe::with_kappa(double kappa) const {
    if (!(kappa >= 1.0)) throw std::invalid_argument("ResolventProbe: kappa must be >= 1");
    ResolventProbe p = *this;
    p.epsilon = epsilon * kappa;
    p.alpha = cplx(alpha.real(), alpha.imag() == 0.0 ? 0.0 : -2.0 * p.epsilon);
    return p;
}

std::vector<cplx> alpha_samples(double tau, double epsilon, const std::vector<double>& fractions) {
    std::vector<cplx> out;
    const double ranges[2][2] = {{-4.0 + tau / 2.0, -tau / 2.0}, {tau / 2.0, 4.0 - tau / 2.0}};
    for (const auto& r : ranges)
        for (double im : {0.0, -2.0 * epsilon})
            for (double q : fractions) out.emplace_back(r[0] + (r[1] - r[0]) * q, im);
    return out;
}

std::vector<cplx> alpha_samples_reduced(double tau, double epsilon, const std::vector<double>& fractions) {
    (void)epsilon;
    std::vector<cplx> out;
    for (double q : fractions) out.emplace_back(tau / 2.0 + (4.0 - tau) * q, 0.0);
    return out;
}

namespace {

constexpr double gl_nodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double gl_weights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                  0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

std::vector<double> resolvent_modulus(const ResolventProbe& probe) {
    const TorusGrid& g = probe.grid;
    const int n = g.n();
    const double h = 1.0 / n;
    const double x0 = probe.alpha.real();
    // |Im(alpha + i eps)| is eps on both horizontal sides
    const double eta = std::abs(probe.alpha.imag() + probe.epsilon);
    if (!(eta > 0.0)) throw std::invalid_argument("resolvent_modulus: contour point sits on the real axis pole");
    std::vector<double> out(g.size());
    for (int a = 0; a < n; ++a) {
        const double k1 = g.frequency(a);
        const double g1 = -4.0 * pi * std::sin(2.0 * pi * k1);
        for (int b = 0; b < n; ++b) {
            const double k2 = g.frequency(b);
            const double g2 = -4.0 * pi * std::sin(2.0 * pi * k2);
            const double c = laplacian_symbol(k1, k2) - x0;
            double val;
            if (std::abs(c) < 3.0 * (std::abs(g1) + std::abs(g2)) * h) {
                const double gmaj = std::abs(g1) >= std::abs(g2) ? std::abs(g1) : std::abs(g2);
                const double gmin = std::abs(g1) >= std::abs(g2) ? g2 : g1;
                if (gmaj * h < 1e-14) {
                    val = 1.0 / std::hypot(c, eta);
                } else {
                    double acc = 0.0;
                    for (int q = 0; q < 8; ++q) {
                        const double cc = c + gmin * 0.5 * h * gl_nodes[q];
                        const double up = std::asinh((cc + 0.5 * gmaj * h) / eta);
                        const double dn = std::asinh((cc - 0.5 * gmaj * h) / eta);
                        acc += 0.5 * gl_weights[q] * (up - dn) / (gmaj * h);
                    }
                    val = acc;
                }
            } else {
                val = 1.0 / std::hypot(c, eta);
            }
            out[g.index(a, b)] = val;
        }
    }
    return out;
}

double resolvent_l1(const ResolventProbe& probe) {
    const auto m = resolvent_modulus(probe);
    double s = 0.0;
    for (double v : m) s += v;
    return s * probe.grid.weight();
}

double resolvent_l1_checked(const ResolventProbe& probe, double rel_tol) {
    const double coarse = resolvent_l1(probe);
    ResolventProbe fine = probe;
    fine.grid = TorusGrid(probe.grid.exponent() + 1);
    const double v = resolvent_l1(fine);
    const double rel = std::abs(v - coarse) / v;
    if (rel > rel_tol)
        throw NumericError("resolvent_l1: grid doubling changes the value by " + std::to_string(rel), rel);
    return v;
}

SmoothingKernel smoothing_kernel(const DyadicPartition& partition, int j, int jp) {
    if (j < 0 || jp < 0 || j > partition.top_scale() + 1 || jp > partition.top_scale() + 1)
        throw std::invalid_argument("smoothing_kernel: scale index out of range");
    if (j <= partition.top_scale() && j > partition.grid().exponent() - 3)
        throw std::invalid_argument("smoothing_kernel: scale 2^" + std::to_string(j) + " not resolvable on grid 2^" +
                                    std::to_string(partition.grid().exponent()));
    SmoothingKernel k;
    k.j = j;
    k.jp = jp;
    k.n = partition.grid().n();
    const auto b = partition.fourier_abs(j, jp, true);
    double s = 0.0;
    for (double v : b) s += v;
    k.l1 = s * partition.grid().weight();
    k.half = rfft2d(b, k.n);
    return k;
}

SmoothingKernel smoothing_kernel(const DyadicPartition& partition, int j) { return smoothing_kernel(partition, j, j); }

double smoothed_linf(const std::vector<double>& modulus, const SmoothingKernel& kernel) {
    if (modulus.size() != std::size_t(kernel.n) * kernel.n)
        throw std::invalid_argument("smoothed_linf: grid mismatch between probe and partition");
    const auto conv = circular_convolve(modulus, kernel.half, kernel.n);
    return *std::max_element(conv.begin(), conv.end());
}

double smoothed_linf_half(const std::vector<cplx>& modulus_half, const SmoothingKernel& kernel) {
    const auto conv = circular_convolve_half(modulus_half, kernel.half, kernel.n);
    return *std::max_element(conv.begin(), conv.end());
}

double smoothed_resolvent_linf(const ResolventProbe& probe, int j, const DyadicPartition& partition) {
    if (probe.grid.n() != partition.grid().n())
        throw std::invalid_argument("smoothed_resolvent_linf: probe and partition use different grids");
    return smoothed_linf(resolvent_modulus(probe), smoothing_kernel(partition, j));
}

double kappa_smoothed_linf(const ResolventProbe& probe, int j, const DyadicPartition& partition, double kappa) {
    return smoothed_resolvent_linf(probe.with_kappa(kappa), j, partition);
}

namespace {

double scale_sum(double sigma, int J, double eps, double tau, const TorusGrid& grid, const std::vector<double>& fractions) {
    const DyadicPartition part(J, DecayProfile(sigma), grid);
    std::vector<std::vector<cplx>> spectra;
    for (const cplx& a : alpha_samples_reduced(tau, eps, fractions))
        spectra.push_back(rfft2d(resolvent_modulus(ResolventProbe{a, eps, grid}), grid.n()));
    std::vector<double> sums(spectra.size(), 0.0);
    for (int j = 0; j <= J + 1; ++j) {
        const auto k = smoothing_kernel(part, j);
        for (std::size_t i = 0; i < spectra.size(); ++i) sums[i] += smoothed_linf_half(spectra[i], k);
    }
    return *std::max_element(sums.begin(), sums.end());
}

}  // namespace

KappaGain kappa_gain(double sigma, int J, int kappa, double tau, const TorusGrid& grid,
                     const std::vector<double>& fractions) {
    if (kappa < 1 || (kappa & (kappa - 1)) != 0) throw std::invalid_argument("kappa_gain: kappa must be a power of two");
    const int shift = int(std::lround(std::log2(double(kappa))));
    if (shift > J) throw std::invalid_argument("kappa_gain: kappa exceeds 2^J");
    KappaGain out;
    out.J = J;
    out.J_prime = J - shift;
    const double eps = std::ldexp(1.0, -J);
    const double base = scale_sum(sigma, J, eps, tau, grid, fractions);
    const double smoothed = scale_sum(sigma, out.J_prime, eps * kappa, tau, grid, fractions);
    out.gain = smoothed / base;
    out.target = std::pow(double(kappa), -(1.0 - 2.0 * sigma));
    return out;
}

}  // namespace dloc
