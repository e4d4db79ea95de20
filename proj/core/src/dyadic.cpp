#include "dloc/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dloc/fft.hpp"

namespace dloc {

double RadialRamp::operator()(double s) const {
    if (s <= 1.0) return 1.0;
    if (s >= 1.0 + width) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (s - 1.0) / width));
}

DyadicPartition::DyadicPartition(int J, DecayProfile profile, TorusGrid grid, RadialRamp ramp)
    : J_(J), profile_(profile), grid_(grid), ramp_(ramp) {
    if (J < 0) throw std::invalid_argument("DyadicPartition: J must be >= 0");
    if (!(ramp.width > 0.0 && ramp.width <= 1.0))
        throw std::invalid_argument("DyadicPartition: ramp width must lie in (0, 1]");
    if (grid.exponent() < J + 3)
        throw std::invalid_argument("DyadicPartition: grid 2^" + std::to_string(grid.exponent()) +
                                    " cannot resolve scale 2^" + std::to_string(J) + " (need m >= J + 3)");
}

double DyadicPartition::phi(int j, double r) const { return ramp_(r / std::ldexp(1.0, j)); }

double DyadicPartition::bump_radius(int j, double r) const {
    if (j < 0 || j > J_ + 1) throw std::out_of_range("DyadicPartition: scale index out of range");
    if (j == 0) return phi(0, r);
    if (j == J_ + 1) return 1.0 - phi(J_, r);
    return phi(j, r) - phi(j - 1, r);
}

double DyadicPartition::bump(int j, const Site& x) const { return bump_radius(j, std::sqrt(norm2(x))); }

std::vector<double> DyadicPartition::spatial(int j, int jp, bool with_profile) const {
    const int n = grid_.n();
    std::vector<double> f(grid_.size());
    for (int a = 0; a < n; ++a) {
        const int x1 = grid_.position(a);
        for (int b = 0; b < n; ++b) {
            const int x2 = grid_.position(b);
            const double r2 = double(x1) * x1 + double(x2) * x2;
            const double r = std::sqrt(r2);
            double v = bump_radius(j, r) * bump_radius(jp, r);
            if (with_profile && v != 0.0) v *= std::pow(profile_.of_radius_sq(r2), 2);
            f[grid_.index(a, b)] = v;
        }
    }
    return f;
}

std::vector<double> DyadicPartition::fourier_abs(int j, int jp, bool with_profile) const {
    return abs_spectrum(spatial(j, jp, with_profile), grid_.n());
}

void DyadicPartition::certify(double mask_fraction) {
    certs_.clear();
    c_dyad_ = 0.0;
    const double sigma = profile_.sigma();
    for (int j = 0; j <= J_; ++j) {
        const auto den = fourier_abs(j, j, false);
        const double peak = *std::max_element(den.begin(), den.end());
        for (int jp = j; jp <= j + 1; ++jp) {
            const auto num = fourier_abs(j, jp, true);
            const double scale = std::exp2(-2.0 * sigma * j);
            double ratio = 0.0;
            for (std::size_t i = 0; i < den.size(); ++i)
                if (den[i] >= mask_fraction * peak) ratio = std::max(ratio, num[i] / (scale * den[i]));
            const auto plain = jp == j ? den : fourier_abs(j, jp, false);
            double l1 = 0.0;
            for (double v : plain) l1 += v;
            l1 *= grid_.weight();
            certs_.push_back({j, jp, ratio, l1});
            c_dyad_ = std::max(c_dyad_, ratio);
        }
    }
}

DyadicPartition build_dyadic_partition(int J, const DecayProfile& profile, const TorusGrid& grid, RadialRamp ramp) {
    DyadicPartition p(J, profile, grid, ramp);
    p.certify();
    return p;
}

}  // namespace dloc
