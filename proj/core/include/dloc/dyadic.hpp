#pragma once

#include <vector>

#include "dloc/lattice.hpp"

namespace dloc {

// psi(s) = 1 for s <= 1, 0 for s >= 1 + width, raised cosine in between.
struct RadialRamp {
    double width = 1.0;
    double operator()(double s) const;
};

struct PartitionCertificate {
    int j = 0;
    int jp = 0;
    double max_ratio = 0.0;  // max |F(P_j P_j' v^2)| / (2^{-2 sigma j} |F(P_j^2)|)
    double l1_norm = 0.0;    // ||F(P_j P_j')||_{L^1(T^2)}
};

// P_0 = Phi_0, P_j = Phi_j - Phi_{j-1} (1 <= j <= J), P_{J+1} = 1 - Phi_J,
// Phi_j(x) = ramp(|x| / 2^j). The telescoping sum is 1 at every site.
class DyadicPartition {
public:
    DyadicPartition(int J, DecayProfile profile, TorusGrid grid, RadialRamp ramp = {});

    int top_scale() const { return J_; }
    int count() const { return J_ + 2; }
    const DecayProfile& profile() const { return profile_; }
    const TorusGrid& grid() const { return grid_; }
    const RadialRamp& ramp() const { return ramp_; }

    double bump(int j, const Site& x) const;
    double bump_radius(int j, double r) const;

    // P_j P_j' (times v^2 when with_profile) sampled on the torus grid with the
    // array position a representing lattice coordinate a or a - N.
    std::vector<double> spatial(int j, int jp, bool with_profile) const;
    // |F(P_j P_j' v^2)| (or without v^2) on the full frequency grid.
    std::vector<double> fourier_abs(int j, int jp, bool with_profile) const;

    const std::vector<PartitionCertificate>& certificates() const { return certs_; }
    double c_dyad() const { return c_dyad_; }

    void certify(double mask_fraction = 1e-2);

private:
    int J_;
    DecayProfile profile_;
    TorusGrid grid_;
    RadialRamp ramp_;
    std::vector<PartitionCertificate> certs_;
    double c_dyad_ = 0.0;

    double phi(int j, double r) const;
};

// Builds the partition and its Fourier-side certificate. Requires 2^m >= 2^{J+3}.
DyadicPartition build_dyadic_partition(int J, const DecayProfile& profile, const TorusGrid& grid,
                                       RadialRamp ramp = {});

}  // namespace dloc
