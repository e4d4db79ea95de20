#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dloc/stats.hpp"

using namespace dloc;

namespace {

// P(W+ >= w) by flipping every sign pattern of the given ranks
double brute_p(const std::vector<double>& ranks, double w) {
    const std::size_t n = ranks.size();
    std::size_t hit = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) s += ranks[i];
        hit += s >= w - 1e-9;
    }
    return double(hit) / double(std::size_t(1) << n);
}

}  // namespace

TEST_SUITE("stats") {
    TEST_CASE("linear fit") {
        const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.r2 == doctest::Approx(1.0));
        const auto g = linear_fit({0, 1, 2}, {0, 1, 0});
        CHECK(g.slope == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(g.r2 == doctest::Approx(0.0).epsilon(1e-15));
        CHECK_THROWS_AS(linear_fit({1}, {2}), std::invalid_argument);
        CHECK_THROWS_AS(linear_fit({1, 1}, {2, 3}), std::invalid_argument);
    }

    TEST_CASE("median") {
        CHECK(median({3, 1, 2}) == 2.0);
        CHECK(median({4, 1, 2, 3}) == 2.5);
        const double inf = std::numeric_limits<double>::infinity();
        CHECK(median({inf, 1, inf}) == inf);
        CHECK(median({inf, 1, 2}) == 2.0);
        CHECK_THROWS_AS(median({}), std::invalid_argument);
        CHECK_THROWS_AS(median({1, std::nan("")}), std::invalid_argument);
    }

    TEST_CASE("signed-rank test against brute-force sign flips") {
        const std::vector<double> a{51, 32, 77, 40, 66, 25, 81, 44, 50, 60};
        const std::vector<double> b{40, 35, 61, 30, 56, 25, 60, 48, 40, 45};
        const auto r = wilcoxon_signed_rank(a, b);
        CHECK(r.nonzero == 9);
        // d = 11 -3 16 10 10 0 21 -4 10 15, ranks with ties averaged
        const std::vector<double> ranks{6, 1, 8, 4, 4, 9, 2, 4, 7};
        CHECK(r.statistic == doctest::Approx(6 + 8 + 4 + 4 + 9 + 4 + 7));
        CHECK(r.p_one_sided == doctest::Approx(brute_p(ranks, r.statistic)).epsilon(1e-12));
        CHECK(r.p_one_sided < 0.05);
        const auto rev = wilcoxon_signed_rank(b, a);
        CHECK(rev.p_one_sided > 0.9);
    }

    TEST_CASE("signed-rank edge cases") {
        const auto all_up = wilcoxon_signed_rank({2, 3, 4, 5, 6}, {1, 1, 1, 1, 1});
        CHECK(all_up.p_one_sided == doctest::Approx(1.0 / 32));
        const auto ties = wilcoxon_signed_rank({1, 2}, {1, 2});
        CHECK(ties.nonzero == 0);
        CHECK(ties.p_one_sided == 1.0);
        const double inf = std::numeric_limits<double>::infinity();
        const auto infs = wilcoxon_signed_rank({inf, 5, 6}, {1, 1, 1});
        CHECK(infs.statistic == doctest::Approx(6.0));
        CHECK_THROWS_AS(wilcoxon_signed_rank({1}, {1, 2}), std::invalid_argument);
        CHECK(wilcoxon_signed_rank({inf, 2}, {inf, 1}).nonzero == 1);
        CHECK_THROWS_AS(wilcoxon_signed_rank({std::nan("")}, {1.0}), std::invalid_argument);
    }
}
