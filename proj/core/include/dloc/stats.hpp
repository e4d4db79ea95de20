#pragma once

#include <vector>

namespace dloc {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// NaNs are rejected; +inf sorts last.
double median(std::vector<double> v);

struct SignedRankResult {
    double statistic = 0.0;  // W+ over nonzero differences
    int nonzero = 0;
    double p_one_sided = 1.0;  // P(W+ >= observed) under the null, exact
};

// One-sided paired signed-rank test of H1: a > b. Ties share average ranks and the
// exact null distribution is enumerated over the doubled ranks.
SignedRankResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dloc
