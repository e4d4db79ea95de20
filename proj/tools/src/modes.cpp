#include "dloc_cli/modes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "dloc/bounds.hpp"
#include "dloc/dynamics.hpp"
#include "dloc/graphs.hpp"
#include "dloc/normbench.hpp"
#include "dloc/rng.hpp"
#include "dloc/shell.hpp"
#include "dloc/spectral.hpp"
#include "dloc/stats.hpp"
#include "dloc_cli/parallel.hpp"

#ifndef DLOC_VERSION
#define DLOC_VERSION "0.0.0"
#endif

namespace dloc::cli {

const char* artifact_version() { return DLOC_VERSION; }

namespace {

void fail(ModeResult& r, const ExperimentConfig& c, const std::string& check, const std::string& detail) {
    if (c.checks) r.failures.push_back({check, detail});
}

// seed failures are always reported, checks or not
template <class T>
void collect_errors(ModeResult& r, const std::vector<SeedOutcome<T>>& out, const std::string& what) {
    for (const auto& o : out)
        if (!o.value) r.failures.push_back({what, "seed " + std::to_string(o.seed) + ": " + o.error});
}

double fraction_at(const std::vector<EigenstateDiagnostics>& states, double eps) {
    std::size_t loc = 0;
    for (const auto& s : states) loc += s.in_window && s.s_alpha < eps;
    return states.empty() ? 0.0 : double(states.size() - loc) / double(states.size());
}

}  // namespace

ModeResult run_sweep(const ExperimentConfig& c, int workers) {
    ModeResult r;
    CsvTable states({"seed", "L", "lambda", "sigma", "alpha", "energy", "S_alpha", "IPR", "fit_length", "in_window",
                     "in_localized_set"});
    CsvTable agg({"sigma", "lambda", "L", "realizations", "completed", "fraction_mean", "fraction_stderr",
                  "share_fraction_ge_1_minus_delta_pow_0.1"});
    const LatticeBox box(c.L);
    const DecayProfile profile(c.sigma);
    const EnergyWindow window(c.tau);
    const double eps = std::pow(c.delta, 0.8);
    struct SeedResult {
        LocalizationReport rep;
    };
    for (double lambda : c.lambdas) {
        auto task = [&](std::uint64_t seed) {
            const auto dis = sample_disorder(seed, box, profile);
            const auto sol = dirichlet_diagonalize(box, dis, lambda, std::size_t(c.dense_limit));
            return SeedResult{localization_report(sol, window, eps, c.delta, c.ell)};
        };
        const auto out = parallel_seed_map<SeedResult>(task, c.seeds(), workers);
        collect_errors(r, out, "sweep");
        std::vector<double> fractions;
        std::size_t above = 0;
        for (const auto& o : out) {
            if (!o.value) continue;
            const auto& rep = o.value->rep;
            std::set<std::size_t> win(rep.window_set.begin(), rep.window_set.end());
            for (std::size_t a : rep.localized_set)
                if (!win.count(a)) fail(r, c, "nesting", "seed " + std::to_string(o.seed) + ": localized state outside window");
            if (!(rep.fraction >= 0.0 && rep.fraction <= 1.0))
                fail(r, c, "fraction-range", "seed " + std::to_string(o.seed));
            const double lo = fraction_at(rep.states, 0.5 * eps), hi = fraction_at(rep.states, 2.0 * eps);
            if (!(lo >= rep.fraction && rep.fraction >= hi))
                fail(r, c, "fraction-monotone-in-eps", "seed " + std::to_string(o.seed));
            for (const auto& s : rep.states)
                states.add(o.seed, c.L, lambda, c.sigma, s.alpha, s.energy, s.s_alpha, s.ipr, s.fit_length,
                           s.in_window, s.localized);
            fractions.push_back(rep.fraction);
            above += rep.fraction >= 1.0 - std::pow(c.delta, 0.1);
        }
        if (fractions.empty()) {
            agg.add(c.sigma, lambda, c.L, c.realizations, 0, std::nan(""), std::nan(""), std::nan(""));
        } else {
            const auto ms = disorder_average(fractions);
            agg.add(c.sigma, lambda, c.L, c.realizations, fractions.size(), ms.mean,
                    fractions.size() > 1 ? ms.stderr_mean : std::nan(""), double(above) / double(fractions.size()));
        }
    }
    r.tables.emplace_back("eigenstates.csv", std::move(states));
    r.tables.emplace_back("aggregate.csv", std::move(agg));
    return r;
}

ModeResult run_diag(const ExperimentConfig& c, int workers) {
    ModeResult r;
    CsvTable values({"seed", "L", "lambda", "sigma", "alpha", "energy"});
    CsvTable checks({"seed", "L", "lambda", "count", "max_residual", "max_gram_error", "max_parseval_error",
                     "free_box_error"});
    const LatticeBox box(c.L);
    const DecayProfile profile(c.sigma);
    struct SeedResult {
        std::vector<double> energies;
        double residual = 0, gram = 0, parseval = 0, free_error = std::nan("");
    };
    for (double lambda : c.lambdas) {
        auto task = [&](std::uint64_t seed) {
            const auto dis = sample_disorder(seed, box, profile);
            const Hamiltonian h(dis, lambda);
            const auto sol = dirichlet_diagonalize(box, dis, lambda, std::size_t(c.dense_limit));
            const std::size_t N = box.size();
            SeedResult s;
            s.energies = sol.values;
            std::vector<double> hv(N);
            for (std::size_t k = 0; k < N; ++k) {
                h.apply(sol.vec(k), hv.data());
                double res = 0.0;
                for (std::size_t i = 0; i < N; ++i) res += std::pow(hv[i] - sol.values[k] * sol.vec(k)[i], 2);
                s.residual = std::max(s.residual, std::sqrt(res));
                for (std::size_t l = 0; l <= k; ++l) {
                    double g = 0.0;
                    for (std::size_t i = 0; i < N; ++i) g += sol.vec(k)[i] * sol.vec(l)[i];
                    s.gram = std::max(s.gram, std::abs(g - (k == l ? 1.0 : 0.0)));
                }
            }
            for (std::size_t i = 0; i < N; ++i) {
                double p = 0.0;
                for (std::size_t k = 0; k < N; ++k) p += sol.vec(k)[i] * sol.vec(k)[i];
                s.parseval = std::max(s.parseval, std::abs(p - 1.0));
            }
            if (lambda == 0.0) {
                std::vector<double> exact;
                const int n = box.side();
                for (int a = 1; a <= n; ++a)
                    for (int b = 1; b <= n; ++b)
                        exact.push_back(2.0 * std::cos(pi * a / (n + 1.0)) + 2.0 * std::cos(pi * b / (n + 1.0)));
                std::sort(exact.begin(), exact.end());
                s.free_error = 0.0;
                for (std::size_t k = 0; k < N; ++k) s.free_error = std::max(s.free_error, std::abs(exact[k] - sol.values[k]));
            }
            return s;
        };
        const auto out = parallel_seed_map<SeedResult>(task, c.seeds(), workers);
        collect_errors(r, out, "diag");
        for (const auto& o : out) {
            if (!o.value) continue;
            const auto& s = *o.value;
            for (std::size_t k = 0; k < s.energies.size(); ++k) values.add(o.seed, c.L, lambda, c.sigma, k, s.energies[k]);
            checks.add(o.seed, c.L, lambda, s.energies.size(), s.residual, s.gram, s.parseval, s.free_error);
            const std::string tag = "seed " + std::to_string(o.seed) + " lambda " + fmt(lambda);
            if (s.energies.size() != box.size()) fail(r, c, "eigenvalue-count", tag);
            if (s.residual > 1e-8) fail(r, c, "residual", tag + ": " + fmt(s.residual));
            if (s.gram > 1e-10) fail(r, c, "orthonormality", tag + ": " + fmt(s.gram));
            if (s.parseval > 1e-8) fail(r, c, "parseval", tag + ": " + fmt(s.parseval));
            if (lambda == 0.0 && s.free_error > 1e-10) fail(r, c, "free-box-closed-form", tag + ": " + fmt(s.free_error));
        }
    }
    r.tables.emplace_back("eigenvalues.csv", std::move(values));
    r.tables.emplace_back("diag_checks.csv", std::move(checks));
    return r;
}

ModeResult run_evolve(const ExperimentConfig& c, int workers) {
    ModeResult r;
    CsvTable free_trace({"t", "norm", "shell_mass"});
    {
        const TorusGrid grid(c.grid_m);
        const ShellObservable shell({0, 0}, c.delta, c.ell);
        const auto psi0 = delta_field(grid, {0, 0});
        for (double t : c.times) {
            const auto psi = free_evolve(psi0, grid, t);
            const double norm = l2_norm(psi);
            free_trace.add(t, norm, shell_mass(psi, grid, shell));
            if (std::abs(norm - 1.0) > 1e-10) fail(r, c, "free-unitarity", "t " + fmt(t) + ": norm " + fmt(norm));
        }
    }
    CsvTable trace({"seed", "lambda", "t", "norm", "shell_mass", "chebyshev_order"});
    CsvTable filt({"lambda", "spectral_bound", "degree", "sup_error"});
    const LatticeBox box(c.L);
    const DecayProfile profile(c.sigma);
    const ShellObservable shell({0, 0}, c.delta, c.ell);
    const bool clip = shell.reach() > c.L;
    struct Point {
        double norm, mass;
        std::size_t order;
    };
    for (double lambda : c.lambdas) {
        auto task = [&](std::uint64_t seed) {
            const Hamiltonian h(sample_disorder(seed, box, profile), lambda);
            const auto psi0 = delta_field(box, {0, 0});
            std::vector<Point> pts;
            for (double t : c.times) {
                const auto res = chebyshev_evolve(psi0, h, t, ChebyshevOptions{c.tol});
                pts.push_back({l2_norm(res.psi), shell_mass(res.psi, box, shell, clip), res.order});
            }
            return pts;
        };
        const auto out = parallel_seed_map<std::vector<Point>>(task, c.seeds(), workers);
        collect_errors(r, out, "evolve");
        for (const auto& o : out) {
            if (!o.value) continue;
            for (std::size_t i = 0; i < c.times.size(); ++i) {
                const auto& p = (*o.value)[i];
                trace.add(o.seed, lambda, c.times[i], p.norm, p.mass, p.order);
                if (std::abs(p.norm - 1.0) > 10.0 * c.tol)
                    fail(r, c, "chebyshev-unitarity", "seed " + std::to_string(o.seed) + " t " + fmt(c.times[i]));
            }
        }
        // filter quality on the first realization's spectral range
        if (!c.seeds().empty()) {
            const Hamiltonian h(sample_disorder(c.seed_base, box, profile), lambda);
            const double a = 1.01 * h.spectral_bound();
            for (int d = std::max(1, c.filter_degree / 8); d <= c.filter_degree; d *= 2)
                filt.add(lambda, a, d, filter_sup_error(EnergyWindow(c.tau), a, d));
        }
    }
    r.tables.emplace_back("free_trace.csv", std::move(free_trace));
    r.tables.emplace_back("trace.csv", std::move(trace));
    r.tables.emplace_back("filter_error.csv", std::move(filt));
    return r;
}

namespace {

std::string join_pairs(const std::vector<std::pair<int, int>>& pairs) {
    std::string s;
    for (const auto& [a, b] : pairs) s += (s.empty() ? "" : ";") + std::to_string(a) + "-" + std::to_string(b);
    return s;
}

struct WickConfig {
    int n = 0, np = 0;
    std::vector<Site> sites;
    ScaleAssignment scales;
};

std::vector<std::pair<int, int>> even_shapes(int cap) {
    std::vector<std::pair<int, int>> s;
    for (int total = 0; total <= cap; total += 2)
        for (int n = 0; n <= total; ++n) s.emplace_back(n, total - n);
    return s;
}

// Random site/scale configuration number `index`: a pool of one to three sites
// so that coincidences (and hence nonzero pairings) are common, scales mostly
// drawn where the bump is nonzero.
WickConfig wick_config(std::uint64_t seed, std::uint64_t index, int cap, const DyadicPartition& part) {
    const auto shapes = even_shapes(cap);
    std::uint64_t k = 0;
    auto u = [&] { return uniform01(seed, Stream::test_vector, index * 4096 + k++); };
    WickConfig w;
    std::tie(w.n, w.np) = shapes[index % shapes.size()];
    const int pool_size = 1 + int(u() * 3.0);
    std::vector<Site> pool;
    while (int(pool.size()) < pool_size) {
        const Site x{int(u() * 41.0) - 20, int(u() * 41.0) - 20};
        if (std::find(pool.begin(), pool.end(), x) == pool.end()) pool.push_back(x);
    }
    const int top = part.top_scale() + 1;
    for (int i = 0; i < w.n + w.np; ++i) {
        const Site x = pool[std::size_t(u() * pool_size)];
        std::vector<int> live;
        for (int j = 0; j <= top; ++j)
            if (part.bump(j, x) > 0.0) live.push_back(j);
        int j = live[std::size_t(u() * double(live.size()))];
        if (u() < 0.15) j = int(u() * (top + 1));
        w.sites.push_back(x);
        w.scales.j.push_back(j);
    }
    return w;
}

}  // namespace

ModeResult run_verify_wick(const ExperimentConfig& c, int workers) {
    ModeResult r;
    CsvTable counts({"n", "n_prime", "count", "expected"});
    CsvTable graphs({"n", "n_prime", "graph_id", "pairs", "tree_edges"});
    for (int total = 0; total <= c.cap; ++total)
        for (int n = 0; n <= total; ++n) {
            const int np = total - n;
            const auto gs = enumerate_pairings(n, np, c.cap);
            const std::uint64_t expected = total % 2 ? 0 : (total == 0 ? 1 : double_factorial(total - 1));
            counts.add(n, np, gs.size(), expected);
            if (gs.size() != expected)
                fail(r, c, "pairing-count", "(" + std::to_string(n) + "," + std::to_string(np) + ")");
            for (const auto& g : gs) {
                std::string edges = "n/a";
                if (n >= 1 && np >= 1) {
                    const auto t = admissible_tree(g);
                    if (t) {
                        edges.clear();
                        for (int l : t->tree_lines) edges += (edges.empty() ? "p" : ";p") + std::to_string(l);
                        edges += ";" + join_pairs(t->contraction_lines);
                        if (t->tree_propagators != g.nbar() || t->loop_propagators != g.nbar())
                            fail(r, c, "tree-counting", "(" + std::to_string(n) + "," + std::to_string(np) + ") graph " +
                                                            std::to_string(g.id));
                    } else {
                        edges = "none";
                    }
                }
                graphs.add(n, np, g.id, join_pairs(g.pairs), edges);
            }
        }

    CsvTable wick({"config", "n", "n_prime", "sites", "scales", "graph_sum", "wick_expectation", "mc_mean", "mc_stderr",
                   "z"});
    const DecayProfile profile(c.sigma);
    const DyadicPartition part(4, profile, TorusGrid(7));
    struct Row {
        WickConfig w;
        double graph, wick;
        MonteCarloEstimate mc;
    };
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < c.configs; ++i) ids.push_back(std::uint64_t(i));
    auto task = [&](std::uint64_t id) {
        Row row;
        row.w = wick_config(c.seed_base, id, c.cap, part);
        row.graph = graph_sum(row.w.n, row.w.np, row.w.sites, row.w.scales, part, profile);
        row.wick = wick_expectation(row.w.sites, row.w.scales, part, profile);
        row.mc = mc_wick_oracle(row.w.sites, row.w.scales, part, profile, std::size_t(c.samples), c.seed_base + id);
        return row;
    };
    const auto out = parallel_seed_map<Row>(task, ids, workers);
    collect_errors(r, out, "verify-wick");
    double worst = 0.0;
    for (const auto& o : out) {
        if (!o.value) continue;
        const auto& row = *o.value;
        std::string sites, scales;
        for (std::size_t i = 0; i < row.w.sites.size(); ++i) {
            sites += (i ? ";" : "") + std::to_string(row.w.sites[i][0]) + ":" + std::to_string(row.w.sites[i][1]);
            scales += (i ? ";" : "") + std::to_string(row.w.scales.j[i]);
        }
        const double diff = std::abs(row.graph - row.mc.mean);
        const double z = row.mc.stderr_mean > 0.0 ? diff / row.mc.stderr_mean
                                                  : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        worst = std::max(worst, z);
        wick.add(o.seed, row.w.n, row.w.np, sites, scales, row.graph, row.wick, row.mc.mean, row.mc.stderr_mean, z);
        if (z > 4.0) fail(r, c, "wick-vs-monte-carlo", "config " + std::to_string(o.seed) + ": z = " + fmt(z));
        if (std::abs(row.graph - row.wick) > 1e-12 * std::max(1.0, std::abs(row.wick)))
            fail(r, c, "graph-sum-vs-hafnian", "config " + std::to_string(o.seed));
    }
    r.tables.emplace_back("pairing_counts.csv", std::move(counts));
    r.tables.emplace_back("graphs.csv", std::move(graphs));
    r.tables.emplace_back("wick.csv", std::move(wick));
    return r;
}

ModeResult run_resolvent_norms(const ExperimentConfig& c, int workers) {
    ModeResult r;
    CsvTable norms({"sigma", "j", "J", "epsilon", "kappa", "alpha_re", "alpha_im", "norm_kind", "value", "grid_m"});
    CsvTable fits({"sigma", "epsilon", "kappa", "norm_kind", "slope", "intercept", "r2", "target", "pass"});
    CsvTable gains({"sigma", "epsilon", "kappa", "J", "J_prime", "gain", "target", "ratio", "pass"});
    const TorusGrid grid(c.grid_m);
    const auto sigmas = c.sigma_list();
    std::vector<std::uint64_t> ids;
    for (std::size_t i = 0; i < sigmas.size(); ++i) ids.push_back(i);
    struct Out {
        CsvTable norms, fits, gains;
        std::vector<std::string> bad;
    };
    auto task = [&](std::uint64_t id) {
        const double sigma = sigmas[id];
        Out o{CsvTable(norms.header()), CsvTable(fits.header()), CsvTable(gains.header()), {}};
        const DyadicPartition part(c.J, DecayProfile(sigma), grid);
        std::vector<int> scales;
        for (int j = c.j_min; j <= c.j_max; ++j) scales.push_back(j);
        scales.push_back(c.J + 1);
        for (int kappa : c.kappas)
            for (int e2 : c.epsilon_log2) {
                const double eps = std::ldexp(1.0, e2);
                std::vector<ResolventProbe> probes;
                std::vector<std::vector<cplx>> spectra;
                for (const cplx& a : alpha_samples_reduced(c.tau, eps)) {
                    probes.push_back(ResolventProbe{a, eps, grid}.with_kappa(kappa));
                    const auto mod = resolvent_modulus(probes.back());
                    double l1 = 0.0;
                    for (double v : mod) l1 += v;
                    o.norms.add(sigma, -1, c.J, eps, kappa, a.real(), a.imag(), "l1", l1 * grid.weight(), c.grid_m);
                    spectra.push_back(rfft2d(mod, grid.n()));
                }
                std::vector<double> xs, ys;
                for (int j : scales) {
                    const auto k = smoothing_kernel(part, j);
                    double best = 0.0;
                    for (std::size_t i = 0; i < spectra.size(); ++i) {
                        const double v = smoothed_linf_half(spectra[i], k);
                        best = std::max(best, v);
                        o.norms.add(sigma, j, c.J, eps, kappa, probes[i].alpha.real(), probes[i].alpha.imag(),
                                    "smoothed_linf", v, c.grid_m);
                    }
                    if (j <= c.j_max) {
                        xs.push_back(j);
                        ys.push_back(std::log2(best));
                    }
                }
                if (xs.size() >= 2) {
                    const auto f = linear_fit(xs, ys);
                    const double target = 1.0 - 2.0 * sigma;
                    const bool pass = kappa != 1 || std::abs(f.slope - target) <= 0.15;
                    o.fits.add(sigma, eps, kappa, "smoothed_linf", f.slope, f.intercept, f.r2, target, pass);
                    if (!pass) o.bad.push_back("sigma " + fmt(sigma) + " eps 2^" + std::to_string(e2) + ": slope " + fmt(f.slope));
                }
            }
        if (c.epsilon_log2.size() >= 3) {
            // L1 growth in log(1/eps), worst alpha
            std::vector<double> xs, ys;
            for (int e2 : c.epsilon_log2) {
                double best = 0.0;
                for (const cplx& a : alpha_samples_reduced(c.tau, std::ldexp(1.0, e2)))
                    best = std::max(best, resolvent_l1(ResolventProbe{a, std::ldexp(1.0, e2), grid}));
                xs.push_back(-e2 * std::log(2.0));
                ys.push_back(best);
            }
            const auto f = linear_fit(xs, ys);
            o.fits.add(sigma, std::nan(""), 1, "l1", f.slope, f.intercept, f.r2, std::nan(""), f.r2 >= 0.99);
            if (f.r2 < 0.99) o.bad.push_back("sigma " + fmt(sigma) + ": L1 fit r2 " + fmt(f.r2));
        }
        for (int kappa : c.kappas) {
            if (kappa == 1 || (1 << (c.J)) < kappa) continue;
            const auto g = kappa_gain(sigma, c.J, kappa, c.tau, grid);
            const double ref = sigma == 0.5 ? double(g.J_prime) / g.J : g.target;
            const double ratio = g.gain / ref;
            const bool pass = ratio >= 1.0 / 3.0 && ratio <= 3.0;
            o.gains.add(sigma, std::ldexp(1.0, -c.J), kappa, g.J, g.J_prime, g.gain, ref, ratio, pass);
            if (!pass) o.bad.push_back("sigma " + fmt(sigma) + " kappa " + std::to_string(kappa) + ": gain ratio " + fmt(ratio));
        }
        return o;
    };
    const auto out = parallel_seed_map<Out>(task, ids, workers);
    collect_errors(r, out, "resolvent-norms");
    for (const auto& o : out) {
        if (!o.value) continue;
        norms.append(o.value->norms);
        fits.append(o.value->fits);
        gains.append(o.value->gains);
        for (const auto& b : o.value->bad) fail(r, c, "norm-scaling", b);
    }
    r.tables.emplace_back("normbench.csv", std::move(norms));
    r.tables.emplace_back("normbench_fits.csv", std::move(fits));
    r.tables.emplace_back("normbench_gains.csv", std::move(gains));
    return r;
}

ModeResult run_schedule(const ExperimentConfig& c) {
    ModeResult r;
    CsvTable t({"sigma", "lambda", "eta", "delta", "tau", "regime", "J", "N", "kappa", "log10_kappa", "J_prime",
                "epsilon", "t_star", "log10_t_star", "ell_lower", "log10_ell_lower", "raw_J", "raw_N"});
    const double ln10 = std::log(10.0);
    for (double sigma : c.sigma_list())
        for (double lambda : c.lambdas) {
            const std::string tag = "sigma " + fmt(sigma) + " lambda " + fmt(lambda);
            try {
                const auto s = schedule_parameters(sigma, lambda, c.eta, c.delta, c.tau);
                const bool sub = s.regime == Regime::subcritical;
                t.add(sigma, lambda, c.eta, c.delta, c.tau, sub ? "subcritical" : "critical", s.J, std::int64_t(s.N),
                      s.kappa, s.log_kappa / ln10, std::int64_t(s.J_prime), s.epsilon(), std::exp(s.log_t_star),
                      s.log_t_star / ln10, std::exp(s.log_ell_lower), s.log_ell_lower / ln10, s.raw_J, s.raw_N);
                if (sub) {
                    const double target = (2.0 - 2.0 * c.eta) * -std::log(lambda);
                    const double at = std::log(double(s.J)) + log_K_sigma(sigma, s.J);
                    const double below = s.J > 1 ? std::log(double(s.J - 1)) + log_K_sigma(sigma, s.J - 1) : -1e300;
                    if (!(at >= target && below < target)) fail(r, c, "J-bracketing", tag);
                    if (!((1.0 - 2.0 * sigma) * s.N * s.log_kappa > -3.0 * std::log(lambda)))
                        fail(r, c, "kappa-power", tag);
                }
            } catch (const std::exception& e) {
                fail(r, c, "schedule", tag + ": " + e.what());
            }
        }
    r.tables.emplace_back("schedule.csv", std::move(t));
    return r;
}

ModeResult run_bounds(const ExperimentConfig& c) {
    ModeResult r;
    CsvTable t({"regime", "sigma", "lambda", "eta", "tau", "J", "N", "term", "log10_value", "log10_target", "pass"});
    CsvTable th({"sigma", "eta", "term", "first_passing_log10_lambda"});
    for (double sigma : c.sigma_list()) {
        std::set<std::string> names;
        for (double lambda : c.lambdas) {
            const std::string tag = "sigma " + fmt(sigma) + " lambda " + fmt(lambda);
            try {
                const auto s = schedule_parameters(sigma, lambda, c.eta, c.delta, c.tau);
                const auto rep = remainder_bounds(s, s.amplitude());
                const char* regime = s.regime == Regime::subcritical ? "subcritical" : "critical";
                for (const auto& row : rep.rows) {
                    t.add(regime, sigma, lambda, c.eta, c.tau, s.J, std::int64_t(s.N), row.name, row.log10_value,
                          row.log10_target, row.pass);
                    names.insert(row.name);
                    if (!row.pass)
                        fail(r, c, "bound-" + row.name, tag + ": log10 value " + fmt(row.log10_value) + " vs target " +
                                                            fmt(row.log10_target));
                }
            } catch (const std::exception& e) {
                fail(r, c, "bounds", tag + ": " + e.what());
            }
        }
        // where each row starts to hold, scanning lambda = 10^x downward
        const double from = std::floor(std::log10(std::min(c.tau, 0.36)) * 2.0) / 2.0;
        for (const auto& name : names) {
            const auto x = first_passing_log10_lambda(sigma, c.eta, c.delta, c.tau, name, from, -1000.0, 0.5);
            th.add(sigma, c.eta, name, x ? *x : std::nan(""));
        }
    }
    r.tables.emplace_back("bounds.csv", std::move(t));
    r.tables.emplace_back("bound_thresholds.csv", std::move(th));
    return r;
}

ModeResult run_mode(const ExperimentConfig& c, int workers) {
    if (c.mode == "sweep") return run_sweep(c, workers);
    if (c.mode == "diag") return run_diag(c, workers);
    if (c.mode == "evolve") return run_evolve(c, workers);
    if (c.mode == "verify-wick") return run_verify_wick(c, workers);
    if (c.mode == "resolvent-norms") return run_resolvent_norms(c, workers);
    if (c.mode == "schedule") return run_schedule(c);
    if (c.mode == "bounds") return run_bounds(c);
    throw ConfigError("mode", "unknown mode '" + c.mode + "'");
}

RunManifest run(const ExperimentConfig& c, const std::string& out_dir, int workers) {
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
    const ModeResult res = run_mode(c, workers);
    RunManifest m;
    m.mode = c.mode;
    m.config_hash = config_hash(c);
    m.version = artifact_version();
    m.workers = workers;
    for (const auto& [name, table] : res.tables) {
        const std::string path = out_dir + "/" + name;
        table.write(path);
        m.files.emplace_back(name, sha256_file(path));
    }
    m.failures = res.failures;
    m.checks_pass = res.failures.empty();
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(out_dir, m);
    return m;
}

}  // namespace dloc::cli
