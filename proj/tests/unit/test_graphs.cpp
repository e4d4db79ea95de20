#include <stdexcept>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dloc/graphs.hpp"

using namespace dloc;

namespace {

// perfect matchings of k points by bitmask recursion
std::uint64_t brute_matchings(unsigned mask) {
    if (mask == 0) return 1;
    const int low = __builtin_ctz(mask);
    const unsigned rest = mask & ~(1u << low);
    std::uint64_t c = 0;
    for (unsigned m = rest; m; m &= m - 1) c += brute_matchings(rest & ~(m & -m));
    return c;
}

const DyadicPartition& partition() {
    static const DyadicPartition p(4, DecayProfile(0.25), TorusGrid(7));
    return p;
}

}  // namespace

TEST_SUITE("graphs") {
    TEST_CASE("small pairing counts") {
        CHECK(enumerate_pairings(1, 1).size() == 1u);
        CHECK(enumerate_pairings(2, 2).size() == 3u);
        CHECK(enumerate_pairings(2, 1).empty());
        CHECK(enumerate_pairings(0, 0).size() == 1u);
        CHECK(vertex_slots(2, 1) == std::vector<int>{1, 2, 4});
    }

    TEST_CASE("double factorial law up to twelve vertices") {
        for (int n = 0; n <= 12; ++n)
            for (int np = 0; n + np <= 12; ++np) {
                const auto g = enumerate_pairings(n, np);
                const int k = n + np;
                if (k % 2) {
                    CHECK(g.empty());
                    continue;
                }
                CHECK(g.size() == double_factorial(k - 1));
                CHECK(g.size() == brute_matchings((1u << k) - 1));
            }
        CHECK(double_factorial(11) == 10395u);
    }

    TEST_CASE("pairings are distinct perfect matchings of the V slots") {
        const auto graphs = enumerate_pairings(3, 3);
        std::set<std::vector<std::pair<int, int>>> seen;
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            const auto& g = graphs[i];
            CHECK(g.id == i);
            CHECK(seen.insert(g.pairs).second);
            std::vector<int> used;
            for (const auto& [a, b] : g.pairs) {
                CHECK(a < b);
                used.push_back(a);
                used.push_back(b);
            }
            std::sort(used.begin(), used.end());
            CHECK(used == g.vertex_slots());
            CHECK(std::is_sorted(g.pairs.begin(), g.pairs.end()));
        }
    }

    TEST_CASE("cap guard") {
        CHECK_THROWS_AS(enumerate_pairings(7, 7), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_pairings(3, 3, 4), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_pairings(-1, 3), std::invalid_argument);
    }

    TEST_CASE("wick expectation: delta in sites, zero-variance factors, length check") {
        const auto& p = partition();
        const DecayProfile& v = p.profile();
        // two distinct sites never pair
        CHECK(wick_expectation({{0, 0}, {1, 0}}, {{0, 0}}, p, v) == 0.0);
        // one pair at the same site: P_j(x)^2 v(x)^2
        const Site x{3, 0};
        const double pair = p.bump(1, x) * p.bump(2, x) * v(x) * v(x);
        CHECK(wick_expectation({x, x}, {{1, 2}}, p, v) == doctest::Approx(pair));
        // scales two apart never pair
        CHECK(wick_expectation({x, x}, {{0, 2}}, p, v) == 0.0);
        // P_0 vanishes at radius 5, so this is exactly zero
        CHECK(wick_expectation({{5, 0}, {5, 0}, {1, 0}, {1, 0}}, {{0, 0, 0, 0}}, p, v) == 0.0);
        // four at one site, all scales equal: three matchings
        const Site y{2, 1};
        const double q = std::pow(p.bump(1, y) * v(y), 2);
        CHECK(wick_expectation({y, y, y, y}, {{1, 1, 1, 1}}, p, v) == doctest::Approx(3 * q * q));
        CHECK(wick_expectation({y, y, y}, {{1, 1, 1}}, p, v) == 0.0);
        CHECK_THROWS_AS(wick_expectation({y, y}, {{1}}, p, v), std::invalid_argument);
        CHECK_THROWS_AS(wick_expectation({y, y}, {{1, 9}}, p, v), std::invalid_argument);
    }

    TEST_CASE("graph sum equals the hafnian") {
        const auto& p = partition();
        const DecayProfile& v = p.profile();
        // off the origin, where P_1 and P_2 both live
        const std::vector<Site> pool{{2, 1}, {3, 0}};
        int checked = 0;
        for (int n = 0; n <= 4; ++n)
            for (int np = 0; n + np <= 6; ++np) {
                if ((n + np) % 2) continue;
                const int k = n + np;
                for (int trial = 0; trial < 6; ++trial) {
                    std::vector<Site> sites;
                    ScaleAssignment s;
                    for (int i = 0; i < k; ++i) {
                        sites.push_back(pool[trial % 2 ? 0 : (i / 2 + trial / 2) % 2]);
                        s.j.push_back(1 + (i + trial) % 2);
                    }
                    const double a = graph_sum(n, np, sites, s, p, v);
                    const double b = wick_expectation(sites, s, p, v);
                    CHECK(a == doctest::Approx(b).epsilon(1e-13));
                    checked += a != 0.0;
                }
            }
        CHECK(checked > 10);
    }

    TEST_CASE("Monte Carlo oracle agrees within four standard errors") {
        const auto& p = partition();
        const DecayProfile& v = p.profile();
        const Site y{2, 1};
        const std::vector<Site> sites{y, y, y, y};
        const ScaleAssignment s{{1, 1, 1, 2}};
        const double exact = wick_expectation(sites, s, p, v);
        const auto mc = mc_wick_oracle(sites, s, p, v, 200000, 11);
        CHECK(mc.samples == 200000u);
        CHECK(std::abs(mc.mean - exact) <= 4.0 * mc.stderr_mean);
        const auto again = mc_wick_oracle(sites, s, p, v, 200000, 11);
        CHECK(again.mean == mc.mean);
        CHECK_THROWS_AS(mc_wick_oracle(sites, s, p, v, 10, 1), std::invalid_argument);
    }

    TEST_CASE("scale compatibility") {
        const auto g = enumerate_pairings(1, 1).front();
        CHECK(ScaleAssignment{{2, 3}}.compatible(g));
        CHECK_FALSE(ScaleAssignment{{1, 3}}.compatible(g));
        CHECK_THROWS_AS(ScaleAssignment{{1}}.compatible(g), std::invalid_argument);
    }

    TEST_CASE("admissible trees") {
        for (int n = 1; n <= 7; ++n)
            for (int np = 1; n + np <= 8; ++np)
                for (const auto& g : enumerate_pairings(n, np)) {
                    const auto t = admissible_tree(g);
                    REQUIRE(t.has_value() == crosses_lines(g));
                    if (!t) continue;
                    const int top = 2 * g.nbar() + 1;
                    CHECK(int(t->tree_lines.size() + t->loop_lines.size()) == top + 1);
                    CHECK(int(t->contraction_lines.size()) == g.nbar());
                    // a spanning tree of top + 1 vertices has top edges
                    CHECK(int(t->tree_lines.size() + t->contraction_lines.size()) == top);
                    auto in = [](const std::vector<int>& v, int l) { return std::find(v.begin(), v.end(), l) != v.end(); };
                    CHECK(in(t->tree_lines, n));
                    CHECK(in(t->tree_lines, top));
                    CHECK(in(t->loop_lines, 0));
                    CHECK(in(t->loop_lines, n + 1));
                    const auto again = admissible_tree(g);
                    CHECK(again->tree_lines == t->tree_lines);
                }
        const auto g = enumerate_pairings(2, 2)[0];  // (1,2)(4,5): no line crosses
        CHECK_FALSE(crosses_lines(g));
        CHECK_FALSE(admissible_tree(g).has_value());
        CHECK_THROWS_AS(admissible_tree(enumerate_pairings(0, 2)[0]), std::invalid_argument);
    }
}
