#pragma once

#include <complex>
#include <vector>

#include "dloc/lattice.hpp"

namespace dloc {

// R_{x,delta,ell}(y) = c (S_out(d1) S_out(d2) - S_in(d1) S_in(d2)), d = y - x.
// Each S is a plateau smoothed by a lattice Fejer (triangle) kernel; the outer one
// lives inside |d_i| < ell/2, the inner one equals 1 on |d_i| <= delta ell/2.
// R vanishes on the inner square and c normalizes the sup to 1.
class ShellObservable {
public:
    ShellObservable(Site center, double delta, int ell);

    const Site& center() const { return center_; }
    double delta() const { return delta_; }
    int ell() const { return ell_; }
    int reach() const { return reach_; }  // R(y) = 0 once some |d_i| > reach

    double weight(const Site& y) const;
    double outer(int d) const { return outer_[d + reach_]; }
    double inner(int d) const { return inner_[d + reach_]; }
    double normalization() const { return norm_; }
    ShellObservable recentered(const Site& x) const;

private:
    Site center_;
    double delta_;
    int ell_;
    int reach_;
    std::vector<double> outer_;
    std::vector<double> inner_;
    double norm_;
};

// ||R psi||^2 for psi on a box. Throws if the shell leaves the box unless clip is set.
double shell_mass(const std::vector<std::complex<double>>& psi, const LatticeBox& box, const ShellObservable& shell,
                  bool clip = false);
double shell_mass(const std::vector<double>& psi, const LatticeBox& box, const ShellObservable& shell,
                  bool clip = false);
// Same on a periodic grid; the shell must not wrap.
double shell_mass(const std::vector<std::complex<double>>& psi, const TorusGrid& grid, const ShellObservable& shell);

// ||R_{x} psi||^2 for every center x of the box at once (psi zero outside),
// through the separable expansion of R^2. Input is |psi|^2.
std::vector<double> shell_mass_map(const std::vector<double>& density, const LatticeBox& box, double delta, int ell);

}  // namespace dloc
