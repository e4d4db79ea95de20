#include "dloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dloc {

double l2_norm(const Field& psi) {
    double s = 0.0;
    for (const auto& z : psi) s += std::norm(z);
    return std::sqrt(s);
}

Field delta_field(const LatticeBox& box, const Site& x) {
    if (!box.contains(x)) throw std::invalid_argument("delta_field: site outside the box");
    Field f(box.size());
    f[box.index(x)] = 1.0;
    return f;
}

Field delta_field(const TorusGrid& grid, const Site& x) {
    Field f(grid.size());
    f[grid.index_of_site(x)] = 1.0;
    return f;
}

Field free_evolve(const Field& psi, const TorusGrid& grid, double t) {
    if (psi.size() != grid.size()) throw std::invalid_argument("free_evolve: field size does not match grid");
    const int n = grid.n();
    Field out = psi;
    fft2d_forward(out.data(), n);
    const double scale = 1.0 / double(grid.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double e = laplacian_symbol(grid.frequency(a), grid.frequency(b));
            out[grid.index(a, b)] *= std::polar(scale, -t * e);
        }
    fft2d_backward(out.data(), n);
    return out;
}

namespace {

// y = (H x) / a
void scaled_apply(const Hamiltonian& h, double a, const Field& x, Field& y) {
    h.apply(x.data(), y.data());
    for (auto& v : y) v /= a;
}

}  // namespace

ChebyshevResult chebyshev_evolve(const Field& psi, const Hamiltonian& h, double t, const ChebyshevOptions& opt) {
    if (psi.size() != h.box().size()) throw std::invalid_argument("chebyshev_evolve: field size does not match box");
    const double a = opt.margin * h.spectral_bound();
    const double z = a * std::abs(t);
    const double sgn = t < 0 ? -1.0 : 1.0;
    ChebyshevResult res;
    res.psi.assign(psi.size(), 0.0);
    Field prev = psi, cur(psi.size()), next(psi.size());
    // (-i)^k, with the sign of t folded in through J_k(-z) = (-1)^k J_k(z)
    auto coef = [&](std::size_t k) {
        const double j = std::cyl_bessel_j(double(k), z);
        const cplx phase = std::pow(cplx(0.0, -sgn), double(k));
        return (k == 0 ? 1.0 : 2.0) * j * phase;
    };
    const cplx c0 = coef(0);
    for (std::size_t i = 0; i < psi.size(); ++i) res.psi[i] = c0 * prev[i];
    if (z == 0.0) return res;
    scaled_apply(h, a, prev, cur);
    for (std::size_t k = 1;; ++k) {
        const cplx ck = coef(k);
        if (double(k) > z && std::abs(ck) < opt.tol) {
            res.order = k;
            break;
        }
        if (k >= opt.max_order)
            throw NumericError("chebyshev_evolve: no convergence within order " + std::to_string(opt.max_order),
                               std::abs(ck));
        for (std::size_t i = 0; i < psi.size(); ++i) res.psi[i] += ck * cur[i];
        scaled_apply(h, a, cur, next);
        for (std::size_t i = 0; i < psi.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return res;
}

Field eigen_evolve(const Field& psi, const EigenSolution& sol, double t) {
    const std::size_t N = sol.box.size();
    if (psi.size() != N) throw std::invalid_argument("eigen_evolve: field size does not match box");
    Field out(N);
    for (std::size_t k = 0; k < sol.count(); ++k) {
        const double* v = sol.vec(k);
        cplx c = 0.0;
        for (std::size_t i = 0; i < N; ++i) c += v[i] * psi[i];
        c *= std::polar(1.0, -t * sol.values[k]);
        for (std::size_t i = 0; i < N; ++i) out[i] += c * v[i];
    }
    return out;
}

std::vector<double> window_chebyshev_coefficients(const EnergyWindow& window, double a, int degree) {
    if (degree < 1) throw std::invalid_argument("window_chebyshev_coefficients: degree must be positive");
    const double tau = window.tau();
    const double edges[2][2] = {{-4.0 + tau, -tau}, {tau, 4.0 - tau}};
    std::vector<double> c(degree + 1, 0.0);
    for (const auto& iv : edges) {
        const double t1 = std::acos(std::clamp(iv[0] / a, -1.0, 1.0));
        const double t2 = std::acos(std::clamp(iv[1] / a, -1.0, 1.0));
        c[0] += (t1 - t2) / pi;
        for (int k = 1; k <= degree; ++k) c[k] += 2.0 * (std::sin(k * t1) - std::sin(k * t2)) / (k * pi);
    }
    if (window.complement()) {
        for (auto& v : c) v = -v;
        c[0] += 1.0;
    }
    const double M = degree + 1;
    const double q = pi / (M + 1);
    for (int k = 0; k <= degree; ++k)
        c[k] *= ((M - k + 1) * std::cos(q * k) + std::sin(q * k) / std::tan(q)) / (M + 1);
    return c;
}

double chebyshev_series(const std::vector<double>& coef, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coef.size(); k-- > 1;) {
        const double b0 = coef[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coef[0] + x * b1 - b2;
}

double filter_sup_error(const EnergyWindow& window, double a, int degree, int samples) {
    const auto c = window_chebyshev_coefficients(window, a, degree);
    const double tau = window.tau();
    const double edges[4] = {-4.0 + tau, -tau, tau, 4.0 - tau};
    const double lo = std::max(-5.0, -a), hi = std::min(5.0, a);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double e = lo + (hi - lo) * s / double(samples - 1);
        bool near = false;
        for (double edge : edges) near = near || std::abs(e - edge) < tau / 4.0;
        if (near) continue;
        const double target = window.contains(e) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(chebyshev_series(c, e / a) - target));
    }
    return worst;
}

Field spectral_filter_exact(const Field& psi, const EigenSolution& sol, const EnergyWindow& window) {
    const std::size_t N = sol.box.size();
    if (psi.size() != N) throw std::invalid_argument("spectral_filter: field size does not match box");
    Field out(N);
    for (std::size_t k = 0; k < sol.count(); ++k) {
        if (!window.contains(sol.values[k])) continue;
        const double* v = sol.vec(k);
        cplx c = 0.0;
        for (std::size_t i = 0; i < N; ++i) c += v[i] * psi[i];
        for (std::size_t i = 0; i < N; ++i) out[i] += c * v[i];
    }
    return out;
}

Field spectral_filter_polynomial(const Field& psi, const Hamiltonian& h, const EnergyWindow& window,
                                 const FilterOptions& opt) {
    if (psi.size() != h.box().size()) throw std::invalid_argument("spectral_filter: field size does not match box");
    const double a = opt.margin * h.spectral_bound();
    const double err = filter_sup_error(window, a, opt.degree);
    if (err > opt.sup_tolerance)
        throw NumericError("spectral_filter: degree " + std::to_string(opt.degree) + " gives sup error " +
                               std::to_string(err),
                           err);
    const auto c = window_chebyshev_coefficients(window, a, opt.degree);
    Field out(psi.size()), prev = psi, cur(psi.size()), next(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] = c[0] * prev[i];
    scaled_apply(h, a, prev, cur);
    for (int k = 1; k <= opt.degree; ++k) {
        for (std::size_t i = 0; i < psi.size(); ++i) out[i] += c[k] * cur[i];
        if (k == opt.degree) break;
        scaled_apply(h, a, cur, next);
        for (std::size_t i = 0; i < psi.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return out;
}

Field spectral_filter(const Field& psi, const Hamiltonian& h, const EnergyWindow& window, FilterMethod method,
                      const EigenSolution* sol, const FilterOptions& opt) {
    if (method == FilterMethod::exact) {
        if (!sol) throw std::invalid_argument("spectral_filter: exact method needs an eigen solution");
        return spectral_filter_exact(psi, *sol, window);
    }
    return spectral_filter_polynomial(psi, h, window, opt);
}

ContourSpec::ContourSpec(double tau, double t, double nodes_per_unit) : tau_(tau), t_(t), m_(nodes_per_unit) {
    if (!(t > 0.0)) throw std::invalid_argument("ContourSpec: t must be positive");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("ContourSpec: tau must lie in (0, 1)");
    if (tau <= 2.0 / t)
        throw std::invalid_argument("ContourSpec: tau <= 2 eps (tau = " + std::to_string(tau) +
                                    ", eps = " + std::to_string(1.0 / t) + ")");
    if (!(nodes_per_unit >= 1.0)) throw std::invalid_argument("ContourSpec: node density must be >= 1");
}

namespace {

void segment(std::vector<ContourNode>& out, cplx from, cplx to, double density) {
    const double len = std::abs(to - from);
    const int m = std::max(2, int(std::ceil(density * len)));
    const cplx h = (to - from) / double(m);
    for (int i = 0; i <= m; ++i) out.push_back({from + double(i) * h, (i == 0 || i == m) ? 0.5 * h : h});
}

}  // namespace

std::vector<ContourNode> contour_nodes(const ContourSpec& spec, ContourPart part) {
    const double tau = spec.tau(), eps = spec.epsilon(), M = spec.nodes_per_unit();
    std::vector<ContourNode> out;
    const double ranges[2][2] = {{-4.0 + tau / 2.0, -tau / 2.0}, {tau / 2.0, 4.0 - tau / 2.0}};
    for (int s = 0; s < 2; ++s) {
        if (part == ContourPart::loop_minus && s == 1) continue;
        if (part == ContourPart::loop_plus && s == 0) continue;
        const cplx tl(ranges[s][0], 0.0), tr(ranges[s][1], 0.0);
        const cplx bl(ranges[s][0], -2.0 * eps), br(ranges[s][1], -2.0 * eps);
        const bool horiz = part != ContourPart::vertical;
        const bool vert = part != ContourPart::horizontal;
        // clockwise: top left->right, right side down, bottom right->left, left side up
        if (horiz) segment(out, tl, tr, M);
        if (vert) segment(out, tr, br, M);
        if (horiz) segment(out, br, bl, M);
        if (vert) segment(out, bl, tl, M);
    }
    return out;
}

cplx contour_multiplier(const std::vector<ContourNode>& nodes, const ContourSpec& spec, double e) {
    const double eps = spec.epsilon(), t = spec.t();
    cplx acc = 0.0;
    for (const auto& nd : nodes) acc += nd.weight * std::exp(cplx(0.0, -t) * nd.alpha) / (e - nd.alpha - cplx(0.0, eps));
    return acc * std::exp(eps * t) / cplx(0.0, 2.0 * pi);
}

namespace {

Field duhamel_once(int n, const Field& phi0, const TorusGrid& grid, const std::vector<double>& potential,
                   double lambda, const ContourSpec& spec) {
    const int N = grid.n();
    const std::size_t sz = grid.size();
    const double eps = spec.epsilon(), t = spec.t();
    std::vector<double> symbol(sz);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) symbol[grid.index(a, b)] = laplacian_symbol(grid.frequency(a), grid.frequency(b));
    Field hat0 = phi0;
    fft2d_forward(hat0.data(), N);
    Field acc(sz), u(sz);
    const double inv = 1.0 / double(sz);
    for (const auto& nd : contour_nodes(spec, ContourPart::horizontal)) {
        const cplx shift = nd.alpha + cplx(0.0, eps);
        for (std::size_t i = 0; i < sz; ++i) u[i] = hat0[i] / (symbol[i] - shift);
        for (int step = 0; step < n; ++step) {
            fft2d_backward(u.data(), N);
            for (std::size_t i = 0; i < sz; ++i) u[i] *= -lambda * potential[i] * inv;
            fft2d_forward(u.data(), N);
            for (std::size_t i = 0; i < sz; ++i) u[i] /= symbol[i] - shift;
        }
        const cplx w = nd.weight * std::exp(cplx(0.0, -t) * nd.alpha);
        for (std::size_t i = 0; i < sz; ++i) acc[i] += w * u[i];
    }
    fft2d_backward(acc.data(), N);
    const cplx pre = std::exp(eps * t) / cplx(0.0, 2.0 * pi) * inv;
    for (auto& v : acc) v *= pre;
    return acc;
}

}  // namespace

Field duhamel_term(int n, const Field& phi0, const TorusGrid& grid, const std::vector<double>& potential, double lambda,
                   const ContourSpec& spec, const DuhamelOptions& opt) {
    if (n < 0 || n > 3) throw std::invalid_argument("duhamel_term: order must lie in [0, 3]");
    if (grid.n() > 64) throw std::invalid_argument("duhamel_term: grid larger than 64^2");
    if (phi0.size() != grid.size() || potential.size() != grid.size())
        throw std::invalid_argument("duhamel_term: field size does not match grid");
    Field out = duhamel_once(n, phi0, grid, potential, lambda, spec);
    if (opt.check_convergence) {
        const Field fine = duhamel_once(n, phi0, grid, potential, lambda, spec.refined(2.0));
        Field diff(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) diff[i] = fine[i] - out[i];
        const double rel = l2_norm(diff) / std::max(l2_norm(fine), 1e-300);
        if (rel > opt.tol)
            throw NumericError("duhamel_term: quadrature changes by " + std::to_string(rel) + " under node doubling",
                               rel);
        return fine;
    }
    return out;
}

double deformation_error(const ContourSpec& spec, const TorusGrid& grid) {
    const auto nodes = contour_nodes(spec, ContourPart::horizontal);
    const EnergyWindow window(spec.tau());
    const double t = spec.t();
    const int N = grid.n();
    double acc = 0.0;
    // the symbol is even in each coordinate, so sum over one quadrant with multiplicities
    for (int a = 0; a <= N / 2; ++a)
        for (int b = 0; b <= N / 2; ++b) {
            const double e = laplacian_symbol(grid.frequency(a), grid.frequency(b));
            const cplx target = window.contains(e) ? std::polar(1.0, -t * e) : cplx(0.0);
            const double mult = (a == 0 || a == N / 2 ? 1.0 : 2.0) * (b == 0 || b == N / 2 ? 1.0 : 2.0);
            acc += mult * std::norm(contour_multiplier(nodes, spec, e) - target);
        }
    return acc * grid.weight();
}

}  // namespace dloc
