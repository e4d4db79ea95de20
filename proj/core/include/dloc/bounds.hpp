#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dloc {

// K_sigma(J) = sum_{j=0}^{J} 2^{(1-2 sigma) j}
double K_sigma(double sigma, int J);
double log_K_sigma(double sigma, double J);

// Natural logs throughout so that tiny lambda and huge factorials stay finite.
struct AmplitudeParams {
    double sigma = 0.5;
    double tau = 0.5;
    int J = 0;
    double log_lambda = 0.0;
    double log_epsilon = 0.0;
    double c_tau = 1.0;

    static AmplitudeParams from_values(double sigma, double tau, int J, double lambda, double epsilon, double c_tau = 1.0);
    // A = C_tau (K_sigma(J) lambda^2 log(1/eps) + eps^-1 sigma^-1 2^{-2 sigma J} lambda^2 log(1/eps))
    double log_A() const;
    double A() const;
};

double amplitude_bound(const AmplitudeParams& p, int nbar);      // (log 1/eps)^2 A^nbar
double log_amplitude_bound(const AmplitudeParams& p, int nbar);

enum class Regime { subcritical, critical };

struct ParameterSchedule {
    Regime regime = Regime::subcritical;
    double sigma = 0.0;
    double log_lambda = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    int J = 0;
    long N = 0;
    double log_epsilon = 0.0;
    double log_kappa = 0.0;     // 0 in the critical case
    double kappa = 1.0;         // exact ceiling when it fits a double, else +inf
    long J_prime = 0;           // J - ceil(log2 kappa), at least 0
    double log_t_star = 0.0;    // t* = delta^{4/5} ell
    double log_ell_lower = 0.0;
    double raw_J = 0.0;         // unrounded values the ceilings were applied to
    double raw_N = 0.0;
    double raw_log_kappa = 0.0;

    double lambda() const;
    double epsilon() const;
    double theta(long j, double t) const;  // j t / kappa
    AmplitudeParams amplitude(double c_tau = 1.0) const;
};

ParameterSchedule schedule_parameters(double sigma, double lambda, double eta, double delta, double tau);
ParameterSchedule schedule_parameters_log(double sigma, double log_lambda, double eta, double delta, double tau);

// 2^{lambda^{-1/4 + eta}} in natural log; eta = 0 allowed.
double log_critical_length_bound(double lambda, double eta);

struct BoundRow {
    std::string name;
    double log10_value = 0.0;
    double log10_target = 0.0;
    bool less_than = true;  // pass iff value < target (else value > target)
    bool pass = false;
};

struct BoundReport {
    Regime regime = Regime::subcritical;
    std::vector<BoundRow> rows;
    bool all_pass() const;
    const BoundRow* find(const std::string& name) const;
};

// Direct inputs for the series, so they can be checked against other arithmetic.
struct SeriesInputs {
    Regime regime = Regime::subcritical;
    double sigma = 0.0;
    double log_lambda = 0.0;
    double eta = 0.0;
    double tau = 0.0;
    long N = 1;
    double log_epsilon = 0.0;
    double log_kappa = 0.0;
    double log_A = 0.0;
};

BoundReport remainder_bounds(const SeriesInputs& in);
BoundReport remainder_bounds(const ParameterSchedule& schedule, const AmplitudeParams& params);

double log_sum_exp(const std::vector<double>& terms);

// Largest lambda = 10^x, scanning x downward from `from` to `to` in `step`, at which
// the named row of the schedule's bound report passes.
std::optional<double> first_passing_log10_lambda(double sigma, double eta, double delta, double tau,
                                                 const std::string& row, double from, double to, double step);

}  // namespace dloc
