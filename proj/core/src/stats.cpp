#include "dloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dloc {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two or more paired points");
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return f;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    for (double x : v)
        if (std::isnan(x)) throw std::invalid_argument("median: NaN in sample");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    if (v.size() % 2) return v[h];
    if (std::isinf(v[h]) || std::isinf(v[h - 1])) return v[h - 1] == v[h] ? v[h] : (std::isinf(v[h]) ? v[h] : v[h - 1]);
    return 0.5 * (v[h - 1] + v[h]);
}

SignedRankResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: unpaired samples");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x;
        if (std::isinf(a[i]) && std::isinf(b[i]) && (a[i] > 0) == (b[i] > 0)) x = 0.0;
        else x = a[i] - b[i];
        if (std::isnan(x)) throw std::invalid_argument("wilcoxon_signed_rank: NaN difference");
        if (x != 0.0) d.push_back(x);
    }
    SignedRankResult r;
    r.nonzero = int(d.size());
    if (d.empty()) return r;
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return std::abs(d[p]) < std::abs(d[q]); });
    // doubled ranks keep ties integral
    std::vector<int> rank2(d.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t k = i;
        while (k + 1 < order.size() && std::abs(d[order[k + 1]]) == std::abs(d[order[i]])) ++k;
        const int avg2 = int(i + k + 2);
        for (std::size_t q = i; q <= k; ++q) rank2[order[q]] = avg2;
        i = k + 1;
    }
    int w2 = 0, total2 = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total2 += rank2[i];
        if (d[i] > 0) w2 += rank2[i];
    }
    r.statistic = w2 / 2.0;
    std::vector<double> dist(std::size_t(total2) + 1, 0.0);
    dist[0] = 1.0;
    for (int rk : rank2)
        for (int s = total2; s >= rk; --s) dist[s] += dist[s - rk];
    double tail = 0.0;
    for (int s = w2; s <= total2; ++s) tail += dist[s];
    r.p_one_sided = tail / std::ldexp(1.0, int(d.size()));
    return r;
}

}  // namespace dloc
