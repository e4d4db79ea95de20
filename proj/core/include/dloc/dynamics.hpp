#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "dloc/disorder.hpp"
#include "dloc/fft.hpp"
#include "dloc/lattice.hpp"
#include "dloc/spectral.hpp"

namespace dloc {

using Field = std::vector<cplx>;

double l2_norm(const Field& psi);
Field delta_field(const LatticeBox& box, const Site& x);
Field delta_field(const TorusGrid& grid, const Site& x);

// F^{-1}(e^{-it e(k)} F psi) on the periodic grid.
Field free_evolve(const Field& psi, const TorusGrid& grid, double t);

struct ChebyshevOptions {
    double tol = 1e-12;
    std::size_t max_order = 200000;
    double margin = 1.01;  // rescale by margin * spectral bound
};

struct ChebyshevResult {
    Field psi;
    std::size_t order = 0;
};

// e^{-itH} psi as sum_k c_k T_k(H/a), c_0 = J_0(at), c_k = 2 (-i)^k J_k(at).
ChebyshevResult chebyshev_evolve(const Field& psi, const Hamiltonian& h, double t, const ChebyshevOptions& opt = {});

// Exact spectral evolution from an eigenbasis (oracle path).
Field eigen_evolve(const Field& psi, const EigenSolution& sol, double t);

enum class FilterMethod { exact, chebyshev_jackson };

// Jackson-damped Chebyshev coefficients of the indicator of the window, on [-a, a].
std::vector<double> window_chebyshev_coefficients(const EnergyWindow& window, double a, int degree);
double chebyshev_series(const std::vector<double>& coef, double x);
// Sup of |p(E) - 1_window(E)| over [-5,5] within [-a, a], at distance >= tau/4 from the window edges.
double filter_sup_error(const EnergyWindow& window, double a, int degree, int samples = 8001);

struct FilterOptions {
    int degree = 2000;
    double sup_tolerance = 0.01;
    double margin = 1.01;
};

Field spectral_filter_exact(const Field& psi, const EigenSolution& sol, const EnergyWindow& window);
Field spectral_filter_polynomial(const Field& psi, const Hamiltonian& h, const EnergyWindow& window,
                                 const FilterOptions& opt = {});
Field spectral_filter(const Field& psi, const Hamiltonian& h, const EnergyWindow& window, FilterMethod method,
                      const EigenSolution* sol = nullptr, const FilterOptions& opt = {});

// Clockwise loops C_- (real parts [-4 + tau/2, -tau/2]) and C_+ ([tau/2, 4 - tau/2]),
// horizontal sides at Im 0 and -2 eps, eps = 1/t.
class ContourSpec {
public:
    ContourSpec(double tau, double t, double nodes_per_unit);

    double tau() const { return tau_; }
    double t() const { return t_; }
    double epsilon() const { return 1.0 / t_; }
    double nodes_per_unit() const { return m_; }
    ContourSpec refined(double factor) const { return ContourSpec(tau_, t_, m_ * factor); }

private:
    double tau_;
    double t_;
    double m_;
};

enum class ContourPart { horizontal, vertical, loop_minus, loop_plus, loops };

struct ContourNode {
    cplx alpha;
    cplx weight;  // dalpha, orientation included
};

std::vector<ContourNode> contour_nodes(const ContourSpec& spec, ContourPart part = ContourPart::horizontal);

// Multiplier of phi_{0,t} in momentum space at energy e:
// (e^{eps t} / 2 pi i) sum_nodes w e^{-it alpha} / (e - alpha - i eps)
cplx contour_multiplier(const std::vector<ContourNode>& nodes, const ContourSpec& spec, double e);

struct DuhamelOptions {
    bool check_convergence = false;
    double tol = 1e-6;  // relative change allowed under node doubling
};

// phi_{n,t} = (e^{eps t}/2 pi i) int_{C^(h)} e^{-it alpha} R_alpha (-lambda V R_alpha)^n phi0,
// R_alpha = 1/(e(k) - alpha - i eps) applied in Fourier space. n <= 3.
Field duhamel_term(int n, const Field& phi0, const TorusGrid& grid, const std::vector<double>& potential, double lambda,
                   const ContourSpec& spec, const DuhamelOptions& opt = {});

// ||phi_{0,t} - chi(Delta) e^{-it Delta} phi0||^2 for phi0 = delta_0, as a Riemann sum over the grid.
double deformation_error(const ContourSpec& spec, const TorusGrid& grid);

}  // namespace dloc
