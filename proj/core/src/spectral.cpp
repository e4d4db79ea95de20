#include "dloc/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "dloc/rng.hpp"
#include "dloc/shell.hpp"

namespace dloc {

std::vector<double> symmetric_eigensolve(std::vector<double>& a, std::size_t n) {
    std::vector<double> w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', lapack_int(n), a.data(), lapack_int(n), w.data());
    if (info != 0) throw NumericError("dsyevd failed with info " + std::to_string(info), double(info));
    return w;
}

EigenSolution diagonalize(const Hamiltonian& h, std::size_t dense_limit) {
    const std::size_t N = h.box().size();
    if (N > dense_limit)
        throw std::invalid_argument("diagonalize: box of " + std::to_string(N) + " sites exceeds the dense limit " +
                                    std::to_string(dense_limit));
    EigenSolution sol;
    sol.box = h.box();
    sol.vectors = h.dense();
    sol.values = symmetric_eigensolve(sol.vectors, N);
    sol.complete = true;
    return sol;
}

EigenSolution dirichlet_diagonalize(const LatticeBox& box, const DisorderField& disorder, double lambda,
                                    std::size_t dense_limit) {
    if (disorder.box().half_side() != box.half_side())
        throw std::invalid_argument("dirichlet_diagonalize: disorder field lives on a different box");
    auto sol = diagonalize(Hamiltonian(disorder, lambda), dense_limit);
    sol.lambda = lambda;
    sol.sigma = disorder.profile().sigma();
    sol.seed = disorder.seed();
    return sol;
}

namespace {

// Rayleigh quotient of a unit vector, and the residual norm it leaves.
double refine(const Hamiltonian& h, const double* psi, double& e, std::vector<double>& scratch) {
    const std::size_t N = h.box().size();
    scratch.resize(N);
    h.apply(psi, scratch.data());
    e = std::inner_product(psi, psi + N, scratch.data(), 0.0);
    double r = 0.0;
    for (std::size_t i = 0; i < N; ++i) r += (scratch[i] - e * psi[i]) * (scratch[i] - e * psi[i]);
    return std::sqrt(r);
}

}  // namespace

EigenSolution nearest_eigenpairs(const Hamiltonian& h, double target, std::size_t count, std::uint64_t start_seed) {
    const LatticeBox& box = h.box();
    const std::size_t N = box.size();
    const int n = box.side();
    if (count == 0 || count > N) throw std::invalid_argument("nearest_eigenpairs: count must lie in [1, |box|]");

    // general band storage of H - target, kl = ku = n
    const lapack_int kl = n, ku = n, ldab = 2 * kl + ku + 1;
    std::vector<double> ab(std::size_t(ldab) * N, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return ab[(kl + ku + i - j) + j * ldab]; };
    for (std::size_t i = 0; i < N; ++i) {
        at(i, i) = h.potential()[i] - target;
        if ((i % n) + 1 < std::size_t(n)) at(i, i + 1) = at(i + 1, i) = 1.0;
        if (i + n < N) at(i, i + n) = at(i + n, i) = 1.0;
    }
    std::vector<lapack_int> piv(N);
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, lapack_int(N), lapack_int(N), kl, ku, ab.data(), ldab, piv.data());
    if (info != 0) throw NumericError("nearest_eigenpairs: target is an eigenvalue", target);

    std::vector<double> scratch;
    std::size_t m = std::min(N, 3 * count + 60);
    for (;;) {
        std::vector<double> Q(N * (m + 1), 0.0), alpha(m, 0.0), beta(m, 0.0);
        double nrm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            Q[i] = uniform01(start_seed, Stream::test_vector, i) - 0.5;
            nrm += Q[i] * Q[i];
        }
        for (std::size_t i = 0; i < N; ++i) Q[i] /= std::sqrt(nrm);
        std::size_t steps = m;
        for (std::size_t j = 0; j < m; ++j) {
            double* w = Q.data() + (j + 1) * N;
            std::copy(Q.data() + j * N, Q.data() + (j + 1) * N, w);
            info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', lapack_int(N), kl, ku, 1, ab.data(), ldab, piv.data(), w,
                                  lapack_int(N));
            if (info != 0) throw NumericError("nearest_eigenpairs: band solve failed", double(info));
            const double* q = Q.data() + j * N;
            alpha[j] = std::inner_product(q, q + N, w, 0.0);
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t k = 0; k <= j; ++k) {
                    const double* qk = Q.data() + k * N;
                    const double c = std::inner_product(qk, qk + N, w, 0.0);
                    for (std::size_t i = 0; i < N; ++i) w[i] -= c * qk[i];
                }
            const double b = std::sqrt(std::inner_product(w, w + N, w, 0.0));
            beta[j] = b;
            if (b < 1e-12 * std::abs(alpha[j]) || b == 0.0) {
                steps = j + 1;
                break;
            }
            for (std::size_t i = 0; i < N; ++i) w[i] /= b;
        }
        std::vector<double> d(alpha.begin(), alpha.begin() + steps), e(beta.begin(), beta.begin() + steps);
        std::vector<double> z(steps * steps);
        info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', lapack_int(steps), d.data(), e.data(), z.data(), lapack_int(steps));
        if (info != 0) throw NumericError("nearest_eigenpairs: tridiagonal solve failed", double(info));
        std::vector<std::size_t> order(steps);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(d[a]) > std::abs(d[b]) || (std::abs(d[a]) == std::abs(d[b]) && a < b);
        });
        const std::size_t take = std::min(count, steps);
        std::vector<std::pair<double, std::vector<double>>> pairs;
        bool ok = take == count;
        for (std::size_t r = 0; r < take && ok; ++r) {
            const std::size_t k = order[r];
            std::vector<double> psi(N, 0.0);
            for (std::size_t c = 0; c < steps; ++c) {
                const double zc = z[k * steps + c];
                const double* qc = Q.data() + c * N;
                for (std::size_t i = 0; i < N; ++i) psi[i] += zc * qc[i];
            }
            const double s = std::sqrt(std::inner_product(psi.begin(), psi.end(), psi.begin(), 0.0));
            for (auto& v : psi) v /= s;
            double ev = target + 1.0 / d[k];
            if (refine(h, psi.data(), ev, scratch) > 1e-9) ok = false;
            pairs.emplace_back(ev, std::move(psi));
        }
        if (ok) {
            std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            EigenSolution sol;
            sol.box = box;
            sol.complete = count == N;
            sol.vectors.reserve(N * count);
            for (auto& p : pairs) {
                sol.values.push_back(p.first);
                sol.vectors.insert(sol.vectors.end(), p.second.begin(), p.second.end());
            }
            return sol;
        }
        if (m == N) throw NumericError("nearest_eigenpairs: Lanczos did not converge", double(m));
        m = std::min(N, 2 * m);
    }
}

double membership_statistic(const std::vector<double>& psi, const LatticeBox& box, double delta, int ell,
                            ShellCenters centers) {
    std::vector<double> density(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) density[i] = psi[i] * psi[i];
    const auto map = shell_mass_map(density, box, delta, ell);
    const int h = ShellObservable({0, 0}, delta, ell).reach();
    const int L = box.half_side();
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (centers == ShellCenters::interior) {
            const Site x = box.site(i);
            if (std::abs(x[0]) + h > L || std::abs(x[1]) + h > L) continue;
        }
        s += std::abs(psi[i]) * std::sqrt(map[i]);
    }
    return s;
}

double membership_statistic(const EigenSolution& sol, std::size_t alpha, double delta, int ell, ShellCenters centers) {
    if (alpha >= sol.count()) throw std::out_of_range("membership_statistic: eigenstate index out of range");
    const std::size_t N = sol.box.size();
    std::vector<double> psi(sol.vec(alpha), sol.vec(alpha) + N);
    return membership_statistic(psi, sol.box, delta, ell, centers);
}

double inverse_participation(const double* psi, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += psi[i] * psi[i] * psi[i] * psi[i];
    return s;
}

double exponential_fit_length(const double* psi, const LatticeBox& box) {
    const std::size_t N = box.size();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (std::abs(psi[i]) > std::abs(psi[peak])) peak = i;
    const Site p = box.site(peak);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double a = std::abs(psi[i]);
        if (a <= 0.0) continue;
        const Site x = box.site(i);
        const double d = std::hypot(double(x[0] - p[0]), double(x[1] - p[1]));
        const double y = std::log(a);
        sx += d;
        sy += y;
        sxx += d * d;
        sxy += d * y;
        ++cnt;
    }
    if (cnt < 2) return std::numeric_limits<double>::infinity();
    const double den = cnt * sxx - sx * sx;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    const double slope = (cnt * sxy - sx * sy) / den;
    return slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
}

LocalizationReport localization_report(const EigenSolution& sol, const EnergyWindow& window, double eps, double delta,
                                       int ell, ShellCenters centers) {
    LocalizationReport rep;
    rep.window = window;
    rep.eps = eps;
    rep.delta = delta;
    rep.ell = ell;
    rep.centers = centers;
    rep.total = sol.count();
    const std::size_t N = sol.box.size();
    const int h = ShellObservable({0, 0}, delta, ell).reach();
    const int L = sol.box.half_side();
    std::vector<char> interior(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Site x = sol.box.site(i);
        interior[i] = std::abs(x[0]) + h <= L && std::abs(x[1]) + h <= L;
    }
    std::vector<double> density(N);
    for (std::size_t a = 0; a < sol.count(); ++a) {
        const double* psi = sol.vec(a);
        for (std::size_t i = 0; i < N; ++i) density[i] = psi[i] * psi[i];
        const auto map = shell_mass_map(density, sol.box, delta, ell);
        EigenstateDiagnostics d;
        d.alpha = a;
        d.energy = sol.values[a];
        for (std::size_t i = 0; i < N; ++i) {
            const double c = std::abs(psi[i]) * std::sqrt(map[i]);
            d.s_alpha_clipped += c;
            if (interior[i]) d.s_alpha += c;
        }
        d.ipr = inverse_participation(psi, N);
        d.fit_length = exponential_fit_length(psi, sol.box);
        d.in_window = window.contains(d.energy);
        const double s = centers == ShellCenters::interior ? d.s_alpha : d.s_alpha_clipped;
        d.localized = d.in_window && s < eps;
        if (d.in_window) rep.window_set.push_back(a);
        if (d.localized) rep.localized_set.push_back(a);
        rep.states.push_back(d);
    }
    rep.fraction = rep.total ? double(rep.total - rep.localized_set.size()) / double(rep.total) : 0.0;
    return rep;
}

SplitEstimate split_estimate(const EigenSolution& sol, const EnergyWindow& window, double eps, double delta, int ell,
                             double t) {
    const auto rep = localization_report(sol, window, eps, delta, ell, ShellCenters::all);
    const std::size_t N = sol.box.size();
    const ShellObservable shell({0, 0}, delta, ell);
    SplitEstimate out;
    out.window_count = rep.window_set.size();
    out.localized_count = rep.localized_set.size();
    std::vector<std::complex<double>> phi(N);
    for (std::size_t x = 0; x < N; ++x) {
        std::fill(phi.begin(), phi.end(), std::complex<double>(0.0));
        for (std::size_t a : rep.window_set) {
            const double* psi = sol.vec(a);
            const std::complex<double> c = std::polar(psi[x], -t * sol.values[a]);
            for (std::size_t i = 0; i < N; ++i) phi[i] += c * psi[i];
        }
        out.lhs += shell_mass(phi, sol.box, shell.recentered(sol.box.site(x)), true);
    }
    const double nw = double(out.window_count), nl = double(out.localized_count);
    out.rhs = (1.0 + std::sqrt(eps)) * (nw - nl) + eps * (1.0 + 1.0 / std::sqrt(eps)) * nl;
    return out;
}

void RunningStats::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / double(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double n = double(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * double(o.n_) / n;
    m2_ += o.m2_ + d * d * double(n_) * double(o.n_) / n;
    n_ += o.n_;
}

double RunningStats::stderr_mean() const { return n_ > 1 ? std::sqrt(variance() / double(n_)) : 0.0; }

MeanStderr disorder_average(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("disorder_average: empty input");
    RunningStats s;
    for (double v : values) s.add(v);
    return {s.mean(), s.stderr_mean(), s.count()};
}

MeanStderr disorder_average(const std::vector<RunningStats>& parts) {
    RunningStats s;
    for (const auto& p : parts) s.merge(p);
    if (s.count() == 0) throw std::invalid_argument("disorder_average: empty input");
    return {s.mean(), s.stderr_mean(), s.count()};
}

}  // namespace dloc
