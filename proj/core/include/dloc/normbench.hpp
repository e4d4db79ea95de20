#pragma once

#include <complex>
#include <vector>

#include "dloc/dyadic.hpp"
#include "dloc/fft.hpp"
#include "dloc/lattice.hpp"

namespace dloc {

// alpha on the horizontal contour: Re alpha in one component of I_{tau/2}, Im alpha in {0, -2 eps}.
struct ResolventProbe {
    cplx alpha;
    double epsilon = 0.0;
    TorusGrid grid{10};

    void validate(double tau) const;
    // same relative contour position with eps -> kappa eps
    ResolventProbe with_kappa(double kappa) const;
};

// Points at fractions q along each of the four horizontal segments.
std::vector<cplx> alpha_samples(double tau, double epsilon, const std::vector<double>& fractions = {0.05, 0.25, 0.5, 0.75, 0.95});
// Samples on the top segment of C_+ only. |1/(e - alpha - i eps)| is the same on the
// other three segments at mirrored points (e(k + (1/2,1/2)) = -e(k)), so maxima agree.
std::vector<cplx> alpha_samples_reduced(double tau, double epsilon, const std::vector<double>& fractions = {0.05, 0.25, 0.5, 0.75, 0.95});

// Cell averages of |1/(e(k) - alpha - i eps)| over the grid cells. Cells cut by the
// level set e = Re alpha use the linearized symbol: exact asinh integral along the
// steeper axis, 8-point Gauss-Legendre along the other.
std::vector<double> resolvent_modulus(const ResolventProbe& probe);

double resolvent_l1(const ResolventProbe& probe);
// Same, and throws NumericError when one more grid doubling moves the value by more than rel_tol.
double resolvent_l1_checked(const ResolventProbe& probe, double rel_tol = 0.02);

// Half spectrum of |F(P_j P_j' v^2)|, ready for circular convolution.
struct SmoothingKernel {
    int j = 0;
    int jp = 0;
    int n = 0;
    double l1 = 0.0;  // ||F(P_j P_j' v^2)||_{L^1}
    std::vector<cplx> half;
};

SmoothingKernel smoothing_kernel(const DyadicPartition& partition, int j, int jp);
SmoothingKernel smoothing_kernel(const DyadicPartition& partition, int j);
double smoothed_linf(const std::vector<double>& modulus, const SmoothingKernel& kernel);
// modulus given as its rfft2d half spectrum
double smoothed_linf_half(const std::vector<cplx>& modulus_half, const SmoothingKernel& kernel);

// sup_k (|R| * |F(P_j^2 v^2)|)(k)
double smoothed_resolvent_linf(const ResolventProbe& probe, int j, const DyadicPartition& partition);
double kappa_smoothed_linf(const ResolventProbe& probe, int j, const DyadicPartition& partition, double kappa);

struct KappaGain {
    double gain = 0.0;    // S(kappa eps, J') / S(eps, J), S = max over alpha of sum_{j <= J+1} smoothed norms
    double target = 0.0;  // kappa^{-(1 - 2 sigma)}
    int J = 0;
    int J_prime = 0;
};

// eps = 2^-J, J' = J - log2(kappa).
KappaGain kappa_gain(double sigma, int J, int kappa, double tau, const TorusGrid& grid,
                     const std::vector<double>& fractions = {0.05, 0.25, 0.5, 0.75, 0.95});

}  // namespace dloc
