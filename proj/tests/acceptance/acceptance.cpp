#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "../unit/bessel_oracle.hpp"
#include "dloc/bounds.hpp"
#include "dloc/dynamics.hpp"
#include "dloc/graphs.hpp"
#include "dloc/normbench.hpp"
#include "dloc/rng.hpp"
#include "dloc/shell.hpp"
#include "dloc/spectral.hpp"
#include "dloc/stats.hpp"
#include "dloc_cli/config.hpp"
#include "dloc_cli/modes.hpp"

using namespace dloc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    std::string cli;
    fs::path scratch;
    int workers = 1;
};

std::string num(double x, int prec = 4) {
    std::ostringstream s;
    s.precision(prec);
    s << x;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string table_text(const cli::ModeResult& r, const std::string& name) {
    for (const auto& [n, t] : r.tables)
        if (n == name) return t.str();
    throw std::runtime_error("missing table " + name);
}

// ---- Wick pairing oracle --------------------------------------------------

Outcome wick(const Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = cli::load_config(DLOC_CONFIG_DIR "/verify_wick.json");
    // configs cycle through the 25 even shapes, so this is 50 per shape
    cfg.configs = 50 * 25;
    const auto res = cli::run_mode(cfg, ctx.workers);
    const auto rows = parse_csv(table_text(res, "wick.csv"));
    std::map<std::string, int> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = int(i);
    double worst = 0;
    int nonzero = 0, bad = 0;
    std::map<std::pair<int, int>, int> shapes;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const double g = std::stod(row[col["graph_sum"]]), m = std::stod(row[col["mc_mean"]]),
                     se = std::stod(row[col["mc_stderr"]]);
        const int n = std::stoi(row[col["n"]]), np = std::stoi(row[col["n_prime"]]);
        shapes[{n, np}]++;
        const double diff = std::abs(g - m);
        const double z = se > 0 ? diff / se : (diff == 0 ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        bad += z > 4.0;
        nonzero += g != 0.0;
    }
    // every even shape with n + n' <= 8
    int missing = 0;
    for (int n = 0; n <= 8; ++n)
        for (int np = 0; n + np <= 8; ++np)
            if ((n + np) % 2 == 0 && (!shapes.count({n, np}) || shapes.at({n, np}) < 50)) ++missing;
    bool counts_ok = true;
    for (int n = 0; n <= 8; ++n)
        for (int np = 0; n + np <= 8; ++np) {
            const std::size_t c = enumerate_pairings(n, np).size();
            const int k = n + np;
            counts_ok = counts_ok && c == (k % 2 ? 0 : (k == 0 ? 1 : double_factorial(k - 1)));
        }
    const double secs = seconds_since(t0);
    const int configs = int(rows.size()) - 1;
    Outcome o;
    o.pass = res.failures.empty() && bad == 0 && missing == 0 && counts_ok && configs == 50 * 25 && secs <= 600;
    o.detail = std::to_string(configs) + " configs over " + std::to_string(shapes.size()) + " shapes (" + std::to_string(nonzero) + " nonzero), max |graph-MC|/stderr " +
               num(worst) + ", shapes missing " + std::to_string(missing) + ", counts " +
               (counts_ok ? "(n+n'-1)!!" : "WRONG") + ", " + num(secs, 3) + " s";
    return o;
}

// ---- free evolution vs Bessel product -------------------------------------

Outcome bessel(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusGrid g(10);
    const auto d0 = delta_field(g, {0, 0});
    double worst = 0;
    for (double t : {1.0, 3.0, 10.0}) {
        const auto psi = free_evolve(d0, g, t);
        for (int a = -10; a <= 10; ++a)
            for (int b = -10; b <= 10; ++b)
                if (a * a + b * b <= 100)
                    worst = std::max(worst, std::abs(psi[g.index_of_site({a, b})] - free_propagator(a, b, t)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs <= 60, "max error " + num(worst, 3) + " on grid 2^10, t in {1,3,10}, " + num(secs, 3) + " s"};
}

// ---- free shell-mass bound ----------------------------------------------------

Outcome shell(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusGrid g(9);
    const auto d0 = delta_field(g, {0, 0});
    bool ok = true;
    double min_margin = 1e300;
    std::string worst;
    for (double delta : {0.05, 0.1, 0.2})
        for (int ell : {32, 64}) {
            const double t = std::pow(delta, 0.8) * ell;
            const double m = shell_mass(free_evolve(d0, g, t), g, ShellObservable({0, 0}, delta, ell));
            const double target = 1.0 - std::pow(delta, 0.3);
            ok = ok && m >= target;
            if (m - target < min_margin) {
                min_margin = m - target;
                worst = "delta=" + num(delta) + " ell=" + std::to_string(ell) + ": " + num(m) + " >= " + num(target);
            }
        }
    const double secs = seconds_since(t0);
    return {ok && secs <= 300, "tightest " + worst + ", " + num(secs, 3) + " s"};
}

// ---- smoothed resolvent scaling ---------------------------------------------

Outcome scaling(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusGrid g(12);
    const double eps = std::ldexp(1.0, -30);
    const int J = 9;
    std::vector<cplx> spectra_alpha = alpha_samples_reduced(0.5, eps);
    std::vector<std::vector<cplx>> spectra;
    for (const auto& a : spectra_alpha) spectra.push_back(rfft2d(resolvent_modulus({a, eps, g}), g.n()));
    bool ok = true;
    std::string slopes;
    for (double sigma : {0.1, 0.25, 0.4, 0.5}) {
        const DyadicPartition part(J, DecayProfile(sigma), g);
        std::vector<double> x, y;
        for (int j = 3; j <= 8; ++j) {
            const auto k = smoothing_kernel(part, j);
            double best = 0;
            for (const auto& s : spectra) best = std::max(best, smoothed_linf_half(s, k));
            x.push_back(j);
            y.push_back(std::log2(best));
        }
        const auto fit = linear_fit(x, y);
        const double target = 1.0 - 2.0 * sigma;
        ok = ok && std::abs(fit.slope - target) <= 0.15;
        slopes += (slopes.empty() ? "" : ", ") + std::string("sigma ") + num(sigma, 2) + ": " + num(fit.slope) + " vs " +
                  num(target, 2);
    }
    // L1 norm against log(1/eps), each value confirmed by one doubling up to 2^12
    double min_r2 = 1.0;
    for (const auto& a : spectra_alpha) {
        std::vector<double> x, y;
        for (int k = 4; k <= 10; ++k) {
            const double e = std::ldexp(1.0, -k);
            x.push_back(std::log(1.0 / e));
            y.push_back(resolvent_l1_checked({a, e, TorusGrid(11)}));
        }
        const auto fit = linear_fit(x, y);
        min_r2 = std::min(min_r2, fit.r2);
        ok = ok && fit.slope > 0;
    }
    ok = ok && min_r2 >= 0.99;
    const double secs = seconds_since(t0);
    ok = ok && secs <= 900;
    return {ok, "slopes " + slopes + "; L1 min R^2 " + num(min_r2) + "; " + num(secs, 3) + " s"};
}

// ---- kappa smoothing gain --------------------------------------------------------

Outcome kappa(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusGrid g(11);
    const int J = 8;
    bool ok = true;
    std::string detail;
    for (double sigma : {0.25, 0.4})
        for (int k : {4, 16}) {
            const auto r = kappa_gain(sigma, J, k, 0.5, g);
            const double ratio = r.gain / r.target;
            ok = ok && ratio >= 1.0 / 3.0 && ratio <= 3.0;
            detail += "sigma " + num(sigma, 2) + " kappa " + std::to_string(k) + " gain/target " + num(ratio, 3) + "; ";
        }
    // sigma = 1/2: no power gain, only the J'/J shrink of the scale sum
    for (int k : {4, 16}) {
        const auto r = kappa_gain(0.5, J, k, 0.5, g);
        const double logratio = double(r.J_prime) / r.J;
        const double ratio = r.gain / logratio;
        ok = ok && ratio >= 1.0 / 3.0 && ratio <= 3.0;
        detail += "sigma 0.5 kappa " + std::to_string(k) + " gain " + num(r.gain, 3) + " vs J'/J " + num(logratio, 3) + "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs <= 600;
    return {ok, detail + num(secs, 3) + " s"};
}

// ---- parameter schedule and bound closure ---------------------------------------

Outcome bounds(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const struct {
        double sigma, eta;
    } cases[] = {{0.25, 0.1}, {0.5, 0.05}};
    for (const auto& c : cases) {
        const auto s = schedule_parameters(c.sigma, 1e-4, c.eta, 0.6, 0.5);
        const auto rep = remainder_bounds(s, s.amplitude());
        std::string failed;
        for (const auto& r : rep.rows)
            if (!r.pass) failed += (failed.empty() ? "" : ",") + r.name + "(" + num(r.log10_value) + " vs " + num(r.log10_target) + ")";
        ok = ok && rep.all_pass();
        detail += std::string(s.regime == Regime::critical ? "critical" : "subcritical") + " J=" + std::to_string(s.J) +
                  " N=" + std::to_string(s.N) + (failed.empty() ? " all rows pass" : " failing log10 rows " + failed) + "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs <= 1.0;
    return {ok, detail + num(secs, 3) + " s"};
}

// ---- spectral suite ------------------------------------------------------------

Outcome spectral(const Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    {
        const int L = 24;
        const auto d = sample_disorder(1, LatticeBox(L), DecayProfile(0.25));
        const auto sol = dirichlet_diagonalize(d.box(), d, 0.0);
        std::vector<double> ref;
        for (int a = 1; a <= 2 * L + 1; ++a)
            for (int b = 1; b <= 2 * L + 1; ++b)
                ref.push_back(2.0 * std::cos(pi * a / (2 * L + 2)) + 2.0 * std::cos(pi * b / (2 * L + 2)));
        std::sort(ref.begin(), ref.end());
        double worst = 0;
        for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(sol.values[k] - ref[k]));
        ok = ok && worst <= 1e-10 && sol.count() == ref.size();
        detail += "free box L=24 max deviation " + num(worst, 3) + "; ";
    }
    {
        const int L = 20;
        const auto d = sample_disorder(1, LatticeBox(L), DecayProfile(0.25));
        Hamiltonian h(d, 0.1);
        const auto sol = diagonalize(h);
        const std::size_t N = d.box().size();
        Field psi(N);
        for (std::size_t i = 0; i < N; ++i) psi[i] = gaussian_pair(2, Stream::test_vector, i, 0)[0];
        // Parseval: sum of squared coefficients in the eigenbasis
        double coef2 = 0;
        for (std::size_t k = 0; k < N; ++k) {
            cplx c = 0;
            for (std::size_t i = 0; i < N; ++i) c += sol.vec(k)[i] * psi[i];
            coef2 += std::norm(c);
        }
        const double n2 = std::pow(l2_norm(psi), 2);
        const double parseval = std::abs(coef2 - n2) / n2;
        const EnergyWindow w(0.5);
        const auto once = spectral_filter_exact(psi, sol, w);
        const auto twice = spectral_filter_exact(once, sol, w);
        Field diff(N);
        for (std::size_t i = 0; i < N; ++i) diff[i] = twice[i] - once[i];
        const double idem = l2_norm(diff) / l2_norm(psi);
        FilterOptions fo;
        fo.degree = 2000;
        const auto poly = spectral_filter_polynomial(psi, h, w, fo);
        for (std::size_t i = 0; i < N; ++i) diff[i] = poly[i] - once[i];
        const double filt = l2_norm(diff) / l2_norm(psi);
        ok = ok && parseval <= 1e-8 && idem <= 1e-10 && filt <= 0.02;
        detail += "Parseval " + num(parseval, 3) + ", idempotency " + num(idem, 3) + ", polynomial vs exact " + num(filt) +
                  " (L=20, degree 2000, tau 0.5); ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs <= 600;
    return {ok, detail + num(secs, 3) + " s"};
}

// ---- localization trend ------------------------------------------------------------

Outcome trend(const Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeBox box(40);
    const int seeds = 20;
    auto median_length = [&](std::uint64_t seed, double sigma) {
        Hamiltonian h(sample_disorder(seed, box, DecayProfile(sigma)), 1.0);
        std::vector<double> fl;
        for (double E : {-2.0, 2.0}) {
            const auto sol = nearest_eigenpairs(h, E, 64, seed);
            for (std::size_t i = 0; i < sol.count(); ++i) fl.push_back(exponential_fit_length(sol.vec(i), box));
        }
        return median(fl);
    };
    std::vector<double> uniform(seeds), decaying(seeds);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < ctx.workers; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < seeds;) {
                uniform[i] = median_length(std::uint64_t(i + 1), 0.0);
                decaying[i] = median_length(std::uint64_t(i + 1), 0.4);
            }
        });
    for (auto& t : pool) t.join();
    const double mu = median(uniform), md = median(decaying);
    const auto w = wilcoxon_signed_rank(decaying, uniform);
    const double secs = seconds_since(t0);
    const bool ok = md > mu && w.p_one_sided < 0.05 && secs <= 1800;
    return {ok, "median fit length sigma=0.4 " + num(md) + " vs sigma=0 " + num(mu) + ", Wilcoxon W+=" + num(w.statistic) +
                    " p=" + num(w.p_one_sided, 3) + ", " + num(secs, 3) + " s"};
}

// ---- determinism ----------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const Context& ctx, const std::string& mode, const std::string& config, const fs::path& out, int workers) {
    fs::remove_all(out);
    const std::string cmd = "\"" + ctx.cli + "\" " + mode + " --config \"" + config + "\" --out \"" + out.string() +
                            "\" --workers " + std::to_string(workers) + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome determinism(const Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, std::string>> runs{
        {"schedule", "schedule.json"},       {"bounds", "bounds.json"},          {"bounds", "bounds_critical.json"},
        {"verify-wick", "verify_wick.json"}, {"diag", "diag.json"},              {"sweep", "sweep.json"},
        {"evolve", "evolve.json"},           {"resolvent-norms", "resolvent_norms.json"}};
    bool ok = true;
    int files = 0;
    std::string problems;
    for (const auto& [mode, cfg] : runs) {
        const std::string path = std::string(DLOC_CONFIG_DIR) + "/" + cfg;
        const fs::path base = ctx.scratch / cfg;
        const int r1 = run_cli(ctx, mode, path, base / "a", 1);
        const int r2 = run_cli(ctx, mode, path, base / "b", 1);
        const int r8 = run_cli(ctx, mode, path, base / "c", 8);
        if (r1 != r2 || r1 != r8 || r1 < 0 || r1 > 1) {
            ok = false;
            problems += cfg + " exit codes " + std::to_string(r1) + "/" + std::to_string(r2) + "/" + std::to_string(r8) + "; ";
            continue;
        }
        int here = 0;
        for (const auto& e : fs::directory_iterator(base / "a")) {
            if (e.path().extension() != ".csv") continue;
            const auto name = e.path().filename();
            const std::string a = slurp(e.path());
            if (a != slurp(base / "b" / name) || a != slurp(base / "c" / name)) {
                ok = false;
                problems += cfg + ":" + name.string() + " differs; ";
            }
            ++here;
        }
        if (here == 0) {
            ok = false;
            problems += cfg + " wrote no CSV; ";
        }
        files += here;
    }
    return {ok, std::to_string(runs.size()) + " configs, " + std::to_string(files) +
                    " CSVs compared across two 1-worker runs and one 8-worker run" +
                    (problems.empty() ? "" : "; " + problems) + ", " + num(seconds_since(t0), 3) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string which = "all";
    Context ctx;
    ctx.scratch = fs::temp_directory_path() / "dloc_acceptance";
    std::string scratch = ctx.scratch.string();
    ctx.workers = int(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--criterion", which, "criterion name or all");
    app.add_option("--cli", ctx.cli, "path to the dloc binary (determinism)");
    app.add_option("--scratch", scratch, "scratch directory");
    app.add_option("--workers", ctx.workers, "threads for seed-parallel parts");
    CLI11_PARSE(app, argc, argv);
    ctx.scratch = scratch;
    fs::create_directories(ctx.scratch);

    const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> criteria{
        {"wick", wick},         {"bessel", bessel}, {"shell", shell},   {"scaling", scaling},        {"kappa", kappa},
        {"bounds", bounds},     {"spectral", spectral}, {"trend", trend}, {"determinism", determinism}};
    bool any = false, all_pass = true;
    for (const auto& [name, fn] : criteria) {
        if (which != "all" && which != name) continue;
        any = true;
        if (name == "determinism" && ctx.cli.empty()) {
            std::cout << "FAIL determinism: --cli not given" << std::endl;
            all_pass = false;
            continue;
        }
        Outcome o;
        try {
            o = fn(ctx);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        all_pass = all_pass && o.pass;
    }
    if (!any) {
        std::cerr << "unknown criterion " << which << '\n';
        return 2;
    }
    return all_pass ? 0 : 1;
}
