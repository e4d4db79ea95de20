#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <set>

#include "dloc/lattice.hpp"
#include "dloc/rng.hpp"

using namespace dloc;

TEST_SUITE("lattice") {
    TEST_CASE("symbol at special momenta") {
        CHECK(laplacian_symbol(0.0, 0.0) == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(laplacian_symbol(0.5, 0.5) == doctest::Approx(-4.0).epsilon(1e-15));
        CHECK(std::abs(laplacian_symbol(0.25, 0.25)) < 1e-15);
        // e(k + (1/2,1/2)) = -e(k)
        for (double k1 : {0.03, 0.21, -0.4})
            for (double k2 : {0.11, -0.33})
                CHECK(laplacian_symbol(k1 + 0.5, k2 + 0.5) == doctest::Approx(-laplacian_symbol(k1, k2)));
    }

    TEST_CASE("box index map round trips") {
        LatticeBox box(3);
        CHECK(box.side() == 7);
        CHECK(box.size() == 49u);
        for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.index(box.site(i)) == i);
        CHECK(box.index({-3, -3}) == 0u);
        CHECK(box.contains({3, -3}));
        CHECK_FALSE(box.contains({4, 0}));
        CHECK_THROWS_AS(LatticeBox(0), std::invalid_argument);
    }

    TEST_CASE("box boundary is the next shell of sites") {
        LatticeBox box(2);
        const auto b = box.boundary();
        CHECK(b.size() == 7u * 7u - 5u * 5u);
        std::set<Site> seen(b.begin(), b.end());
        CHECK(seen.size() == b.size());
        for (const auto& x : b) {
            CHECK_FALSE(box.contains(x));
            CHECK(std::max(std::abs(x[0]), std::abs(x[1])) == 3);
        }
    }

    TEST_CASE("torus grid folding") {
        TorusGrid g(3);
        CHECK(g.n() == 8);
        CHECK(g.frequency(0) == 0.0);
        CHECK(g.frequency(3) == 3.0 / 8.0);
        CHECK(g.frequency(4) == -0.5);
        CHECK(g.position(7) == -1);
        CHECK(g.wrap(-1) == 7);
        CHECK(g.index_of_site({-1, 2}) == g.index(7, 2));
        CHECK_THROWS_AS(TorusGrid(0), std::invalid_argument);
        CHECK_THROWS_AS(TorusGrid(15), std::invalid_argument);
    }

    TEST_CASE("decay profile") {
        DecayProfile v(0.25);
        CHECK(v({0, 0}) == 1.0);
        CHECK(v({3, 4}) == doctest::Approx(std::pow(26.0, -0.125)));
        // sup |x|^sigma v(x) <= 1
        for (double s : {0.1, 0.25, 0.5}) {
            DecayProfile p(s);
            for (int r = 0; r < 2000; r += 7) CHECK(std::pow(double(r), s) * p.of_radius_sq(double(r) * r) <= DecayProfile::c_v);
        }
        CHECK(DecayProfile(0.0)({5, 5}) == 1.0);
        CHECK_THROWS_AS(DecayProfile(0.6), std::invalid_argument);
        CHECK_THROWS_AS(DecayProfile(-0.1), std::invalid_argument);
    }

    TEST_CASE("energy window") {
        EnergyWindow w(0.5);
        CHECK(w.contains(1.0));
        CHECK(w.contains(-3.0));
        CHECK_FALSE(w.contains(0.2));
        CHECK_FALSE(w.contains(3.7));
        CHECK_FALSE(w.contains(0.5));  // open interval
        EnergyWindow c(0.5, true);
        CHECK(c.contains(0.2));
        CHECK_FALSE(c.contains(1.0));
        CHECK_THROWS_AS(EnergyWindow(1.0), std::invalid_argument);
    }
}

TEST_SUITE("rng") {
    TEST_CASE("philox4x32-10 known answers") {
        CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
        CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
              PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
        CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
              PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    }

    TEST_CASE("site keys are distinct") {
        std::set<std::uint64_t> keys;
        for (int a = -30; a <= 30; ++a)
            for (int b = -30; b <= 30; ++b) keys.insert(site_key({a, b}));
        CHECK(keys.size() == 61u * 61u);
    }

    TEST_CASE("streams are independent draws") {
        const auto d = gaussian_pair(5, Stream::disorder, 17, 0);
        const auto m = gaussian_pair(5, Stream::monte_carlo, 17, 0);
        CHECK(d != m);
        CHECK(gaussian_pair(5, Stream::disorder, 17, 0) == d);
    }

    TEST_CASE("gaussian moments") {
        double s1 = 0, s2 = 0, s4 = 0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const auto g = gaussian_pair(11, Stream::test_vector, std::uint64_t(i), 0);
            for (double x : g) {
                s1 += x;
                s2 += x * x;
                s4 += x * x * x * x;
            }
        }
        const double N = 2.0 * n;
        CHECK(std::abs(s1 / N) < 5.0 / std::sqrt(N));
        CHECK(std::abs(s2 / N - 1.0) < 5.0 * std::sqrt(2.0 / N));
        CHECK(std::abs(s4 / N - 3.0) < 5.0 * std::sqrt(96.0 / N));
    }

    TEST_CASE("uniforms in [0,1)") {
        double mean = 0;
        for (int i = 0; i < 10000; ++i) {
            const double u = uniform01(3, Stream::test_vector, std::uint64_t(i));
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            mean += u;
        }
        CHECK(std::abs(mean / 10000 - 0.5) < 0.015);
    }
}
