#include <stdexcept>
#include <doctest.h>

#include <cmath>

#include "dloc/dyadic.hpp"

using namespace dloc;

TEST_SUITE("dyadic") {
    TEST_CASE("ramp shape") {
        RadialRamp r;
        CHECK(r(0.0) == 1.0);
        CHECK(r(1.0) == 1.0);
        CHECK(r(1.5) == doctest::Approx(0.5));
        CHECK(r(2.0) == 0.0);
        CHECK(r(7.0) == 0.0);
        RadialRamp q{0.25};
        CHECK(q(1.25) == 0.0);
        CHECK(q(1.125) == doctest::Approx(0.5));
    }

    TEST_CASE("partition of unity, J = 3") {
        DyadicPartition p(3, DecayProfile(0.25), TorusGrid(7));
        CHECK(p.count() == 5);
        for (int a = -64; a <= 64; ++a)
            for (int b = -64; b <= 64; ++b) {
                if (a * a + b * b > 64 * 64) continue;
                double s = 0.0;
                for (int j = 0; j <= 4; ++j) {
                    const double v = p.bump(j, {a, b});
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                    s += v;
                }
                CHECK(std::abs(s - 1.0) < 1e-15);
            }
    }

    TEST_CASE("bump supports are dyadic annuli") {
        const int J = 6;
        DyadicPartition p(J, DecayProfile(0.5), TorusGrid(9));
        for (int j = 1; j <= J; ++j)
            for (double r = 0.0; r < 400.0; r += 0.25)
                if (p.bump_radius(j, r) > 0.0) {
                    CHECK(r > std::ldexp(1.0, j - 1));
                    CHECK(r < std::ldexp(1.0, j + 1));
                }
        for (double r = 0.0; r < 400.0; r += 0.25) {
            if (p.bump_radius(0, r) > 0.0) CHECK(r < 2.0);
            if (p.bump_radius(J + 1, r) > 0.0) CHECK(r > std::ldexp(1.0, J));
        }
        CHECK_THROWS_AS(p.bump(J + 2, {0, 0}), std::out_of_range);
    }

    TEST_CASE("grid must resolve the top scale") {
        CHECK_THROWS_AS(DyadicPartition(5, DecayProfile(0.5), TorusGrid(7)), std::invalid_argument);
        CHECK_NOTHROW(DyadicPartition(5, DecayProfile(0.5), TorusGrid(8)));
        CHECK_THROWS_AS(build_dyadic_partition(5, DecayProfile(0.5), TorusGrid(7)), std::invalid_argument);
    }

    TEST_CASE("spatial samples use folded positions") {
        DyadicPartition p(2, DecayProfile(0.25), TorusGrid(5));
        const auto f = p.spatial(1, 1, true);
        const TorusGrid& g = p.grid();
        const double r = std::sqrt(10.0);
        CHECK(f[g.index_of_site({-3, 1})] == doctest::Approx(std::pow(p.bump_radius(1, r), 2) * std::pow(11.0, -0.25)));
    }

    TEST_CASE("C_dyad stable under grid refinement at sigma = 1/2, J = 5") {
        const auto coarse = build_dyadic_partition(5, DecayProfile(0.5), TorusGrid(9));
        const auto fine = build_dyadic_partition(5, DecayProfile(0.5), TorusGrid(10));
        CHECK(std::isfinite(coarse.c_dyad()));
        CHECK(coarse.c_dyad() > 0.0);
        CHECK(std::abs(fine.c_dyad() / coarse.c_dyad() - 1.0) <= 0.10);
    }

    TEST_CASE("L1 norms of F(P_j^2) are uniform in j") {
        const auto p = build_dyadic_partition(7, DecayProfile(0.25), TorusGrid(10));
        double lo = 1e300, hi = 0.0;
        for (const auto& c : p.certificates())
            if (c.jp == c.j) {
                lo = std::min(lo, c.l1_norm);
                hi = std::max(hi, c.l1_norm);
            }
        CHECK(lo > 0.0);
        CHECK(hi / lo <= 4.0);
        // certificates cover (j, j) and (j, j+1) for j = 0..J
        CHECK(p.certificates().size() == 2u * 8u);
    }
}
