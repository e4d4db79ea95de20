#include "dloc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dloc {
namespace {

constexpr double ln2 = 0.69314718055994530942;
constexpr double ln10 = 2.30258509299404568402;

void check_sigma(double sigma) {
    if (!(sigma > 0.0 && sigma <= 0.5))
        throw std::invalid_argument("sigma must lie in (0, 1/2], got " + std::to_string(sigma));
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log(e^x - 1) for x > 0
double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

// log sum_{n=lo}^{hi} n! A^n; past a million terms the sum is replaced by
// (count) * (largest term), which bounds it from above since the summand is log-convex in n.
double log_factorial_power_sum(long lo, long hi, double log_A) {
    if (hi < lo) return -std::numeric_limits<double>::infinity();
    auto term = [&](long n) { return std::lgamma(double(n) + 1.0) + double(n) * log_A; };
    if (hi - lo > 1000000) return std::log(double(hi - lo + 1)) + std::max(term(lo), term(hi));
    double acc = -std::numeric_limits<double>::infinity();
    for (long n = lo; n <= hi; ++n) acc = log_add(acc, term(n));
    return acc;
}

}  // namespace

double log_sum_exp(const std::vector<double>& terms) {
    double acc = -std::numeric_limits<double>::infinity();
    for (double t : terms) acc = log_add(acc, t);
    return acc;
}

double log_K_sigma(double sigma, double J) {
    check_sigma(sigma);
    if (J < 0) throw std::invalid_argument("K_sigma: J must be >= 0");
    if (sigma == 0.5) return std::log(J + 1.0);
    const double r = (1.0 - 2.0 * sigma) * ln2;
    return log_expm1(r * (J + 1.0)) - log_expm1(r);
}

double K_sigma(double sigma, int J) {
    check_sigma(sigma);
    if (J < 0) throw std::invalid_argument("K_sigma: J must be >= 0");
    if (sigma == 0.5) return J + 1.0;
    const double r = (1.0 - 2.0 * sigma) * ln2;
    return std::expm1(r * (J + 1.0)) / std::expm1(r);
}

AmplitudeParams AmplitudeParams::from_values(double sigma, double tau, int J, double lambda, double epsilon,
                                             double c_tau) {
    if (!(lambda > 0.0)) throw std::invalid_argument("AmplitudeParams: lambda must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("AmplitudeParams: epsilon must lie in (0, 1)");
    AmplitudeParams p;
    p.sigma = sigma;
    p.tau = tau;
    p.J = J;
    p.log_lambda = std::log(lambda);
    p.log_epsilon = std::log(epsilon);
    p.c_tau = c_tau;
    return p;
}

double AmplitudeParams::log_A() const {
    check_sigma(sigma);
    if (!(log_epsilon < 0.0)) throw std::invalid_argument("AmplitudeParams: epsilon must lie in (0, 1)");
    const double log_L = std::log(-log_epsilon);
    const double first = log_K_sigma(sigma, J);
    const double second = -log_epsilon - std::log(sigma) - 2.0 * sigma * J * ln2;
    return std::log(c_tau) + 2.0 * log_lambda + log_L + log_add(first, second);
}

double AmplitudeParams::A() const { return std::exp(log_A()); }

double log_amplitude_bound(const AmplitudeParams& p, int nbar) {
    if (nbar < 1) throw std::invalid_argument("amplitude_bound: nbar must be >= 1");
    return 2.0 * std::log(-p.log_epsilon) + nbar * p.log_A();
}

double amplitude_bound(const AmplitudeParams& p, int nbar) { return std::exp(log_amplitude_bound(p, nbar)); }

double ParameterSchedule::lambda() const { return std::exp(log_lambda); }
double ParameterSchedule::epsilon() const {
    // eps = 2^-J in both regimes; ldexp keeps it exact
    const double k = log_epsilon / ln2;
    if (std::abs(k - std::round(k)) < 1e-9 && k > -1074.0) return std::ldexp(1.0, int(std::round(k)));
    return std::exp(log_epsilon);
}
double ParameterSchedule::theta(long j, double t) const { return double(j) * t * std::exp(-log_kappa); }

AmplitudeParams ParameterSchedule::amplitude(double c_tau) const {
    AmplitudeParams p;
    p.sigma = sigma;
    p.tau = tau;
    p.J = J;
    p.log_lambda = log_lambda;
    p.log_epsilon = log_epsilon;
    p.c_tau = c_tau;
    return p;
}

double log_critical_length_bound(double lambda, double eta) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("critical length bound: lambda must lie in (0, 1)");
    return std::pow(lambda, -0.25 + eta) * ln2;
}

ParameterSchedule schedule_parameters_log(double sigma, double log_lambda, double eta, double delta, double tau) {
    check_sigma(sigma);
    if (!(eta > 0.0 && eta < 0.25)) throw std::invalid_argument("schedule: eta must lie in (0, 1/4)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("schedule: delta must lie in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("schedule: tau must lie in (0, 1)");
    if (!(log_lambda < std::log(tau))) throw std::invalid_argument("schedule: need lambda < tau");
    if (!(tau < delta)) throw std::invalid_argument("schedule: need tau < delta");
    ParameterSchedule s;
    s.sigma = sigma;
    s.log_lambda = log_lambda;
    s.eta = eta;
    s.delta = delta;
    s.tau = tau;
    const double Ll = -log_lambda;  // log(1/lambda)
    if (sigma < 0.5) {
        s.regime = Regime::subcritical;
        if (!(Ll > 1.0))
            throw std::invalid_argument("schedule: lambda must be below e^-1 = 0.3679 for N >= 1 (log log(1/lambda) > 0)");
        const double target = (2.0 - 2.0 * eta) * Ll;
        auto ok = [&](long J) { return std::log(double(J)) + log_K_sigma(sigma, double(J)) >= target; };
        long hi = 1;
        while (!ok(hi)) {
            if (hi > (1L << 52)) throw std::overflow_error("schedule: J exceeds the supported range");
            hi *= 2;
        }
        long lo = hi / 2;  // ok(lo) false or lo == 0
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            (ok(mid) ? hi : lo) = mid;
        }
        if (hi > std::numeric_limits<int>::max()) throw std::overflow_error("schedule: J exceeds int range");
        s.J = int(hi);
        s.raw_J = double(hi);
        s.log_epsilon = -double(s.J) * ln2;
        s.raw_N = eta * Ll / (10.0 * std::log(Ll));
        s.N = long(std::ceil(s.raw_N));
        s.raw_log_kappa = 30.0 / (eta * (1.0 - 2.0 * sigma)) * std::log(Ll);
        if (s.raw_log_kappa < 36.0) {
            s.kappa = std::ceil(std::exp(s.raw_log_kappa));
            s.log_kappa = std::log(s.kappa);
        } else {
            s.kappa = s.raw_log_kappa < 700.0 ? std::exp(s.raw_log_kappa) : std::numeric_limits<double>::infinity();
            s.log_kappa = s.raw_log_kappa;  // the ceiling is below double resolution here
        }
        s.J_prime = std::max(0L, long(s.J) - long(std::ceil(s.log_kappa / ln2)));
        s.log_ell_lower = (2.0 - eta) / (1.0 - 2.0 * sigma) * Ll;
    } else {
        s.regime = Regime::critical;
        const double x = std::exp((-0.25 + eta) * log_lambda);
        if (x > 1e9) throw std::overflow_error("schedule: J = N exceeds the supported range");
        s.raw_J = s.raw_N = x;
        // an x that is an integer up to rounding must not be bumped by the ceiling
        const double nearest = std::round(x);
        s.N = long(std::abs(x - nearest) <= 1e-12 * x ? nearest : std::ceil(x));
        s.J = int(s.N);
        s.log_epsilon = -double(s.N) * ln2;
        s.kappa = 1.0;
        s.log_kappa = 0.0;
        s.J_prime = s.J;
        s.log_ell_lower = x * ln2;
    }
    s.log_t_star = 0.8 * std::log(delta) + s.log_ell_lower;
    return s;
}

ParameterSchedule schedule_parameters(double sigma, double lambda, double eta, double delta, double tau) {
    if (!(lambda > 0.0)) throw std::invalid_argument("schedule: lambda must be positive");
    return schedule_parameters_log(sigma, std::log(lambda), eta, delta, tau);
}

bool BoundReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass; });
}

const BoundRow* BoundReport::find(const std::string& name) const {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

BoundReport remainder_bounds(const SeriesInputs& in) {
    if (in.N < 1) throw std::invalid_argument("remainder_bounds: N must be >= 1");
    if (!(in.log_epsilon < 0.0)) throw std::invalid_argument("remainder_bounds: epsilon must lie in (0, 1)");
    BoundReport rep;
    rep.regime = in.regime;
    auto row = [&](const std::string& name, double log_value, double log_target, bool less = true) {
        const bool pass = less ? log_value < log_target : log_value > log_target;
        rep.rows.push_back({name, log_value / ln10, log_target / ln10, less, pass});
        return log_value;
    };
    const double lA = in.log_A, ll = in.log_lambda, le = in.log_epsilon;
    const double lL2 = 2.0 * std::log(-le);
    const long N = in.N;
    std::vector<double> series;
    if (in.regime == Regime::subcritical) {
        row("A", lA, 1.9 * in.eta * ll);
        series.push_back(row("S1", lL2 + log_factorial_power_sum(1, N, lA), 1.1 * in.eta * ll));
        series.push_back(row("S2", std::lgamma(N + 1.0) + 2.0 * ll - 2.0 * std::log(in.tau) + lL2 + N * lA, ll));
        series.push_back(row("S3",
                             2.0 * ll + 2.0 * (std::log(3.0) + in.log_kappa + std::log(double(N))) + lL2 +
                                 log_factorial_power_sum(N + 1, 4 * N - 1, lA),
                             2.0 * in.eta * ll));
        series.push_back(row("S4",
                             std::lgamma(4.0 * N + 1.0) + 2.0 * ll - 2.0 * le -
                                 (1.0 - 2.0 * in.sigma) * N * in.log_kappa + lL2 + 4.0 * N * lA,
                             2.0 * in.eta * ll));
        row("kappa", (1.0 - 2.0 * in.sigma) * N * in.log_kappa, -3.0 * ll, false);
    } else {
        row("N2A", 2.0 * std::log(double(N)) + lA, 3.0 * in.eta * ll);
        series.push_back(row("S1", lL2 + log_factorial_power_sum(1, N, lA), 2.0 * in.eta * ll));
        series.push_back(row("S2", std::lgamma(N + 1.0) + 2.0 * ll - 2.0 * std::log(in.tau) + lL2 + N * lA, ll));
        series.push_back(row("S3", std::lgamma(N + 1.0) + 2.0 * ll - 2.0 * le + lL2 + N * lA, ll));
    }
    // total against tau^{1/2} + lambda^eta with the unnamed constant set to 1
    row("total", log_sum_exp(series), log_add(0.5 * std::log(in.tau), in.eta * ll));
    return rep;
}

BoundReport remainder_bounds(const ParameterSchedule& s, const AmplitudeParams& p) {
    if (p.J != s.J || std::abs(p.log_epsilon - s.log_epsilon) > 1e-12 * std::abs(s.log_epsilon) ||
        std::abs(p.log_lambda - s.log_lambda) > 1e-12 * std::abs(s.log_lambda) || p.sigma != s.sigma)
        throw std::invalid_argument("remainder_bounds: amplitude parameters do not match the schedule");
    SeriesInputs in;
    in.regime = s.regime;
    in.sigma = s.sigma;
    in.log_lambda = s.log_lambda;
    in.eta = s.eta;
    in.tau = s.tau;
    in.N = s.N;
    in.log_epsilon = s.log_epsilon;
    in.log_kappa = s.log_kappa;
    in.log_A = p.log_A();
    return remainder_bounds(in);
}

std::optional<double> first_passing_log10_lambda(double sigma, double eta, double delta, double tau,
                                                 const std::string& row, double from, double to, double step) {
    if (!(step > 0.0) || !(to < from)) throw std::invalid_argument("first_passing_log10_lambda: bad scan range");
    for (double x = from; x >= to; x -= step) {
        const auto s = schedule_parameters_log(sigma, x * ln10, eta, delta, tau);
        const auto rep = remainder_bounds(s, s.amplitude());
        const auto* r = rep.find(row);
        if (!r) throw std::invalid_argument("first_passing_log10_lambda: unknown row " + row);
        if (r->pass) return x;
    }
    return std::nullopt;
}

}  // namespace dloc
