#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dloc/dyadic.hpp"
#include "dloc/lattice.hpp"

namespace dloc {

// A Wick pairing of the V-vertices of <phi_{n'}, phi_n>. Vertex slots run over
// 1..2nbar+1; slot n+1 is the L^2 vertex and is never paired.
struct PairingGraph {
    int n = 0;
    int np = 0;
    std::size_t id = 0;
    std::vector<std::pair<int, int>> pairs;  // slot pairs, first < second, sorted by first

    int nbar() const { return (n + np) / 2; }
    std::vector<int> vertex_slots() const;
};

std::vector<int> vertex_slots(int n, int np);
std::vector<PairingGraph> enumerate_pairings(int n, int np, int cap = 12);
std::uint64_t double_factorial(int k);

// dyadic scale j_i for the i-th V-vertex in slot order
struct ScaleAssignment {
    std::vector<int> j;
    bool compatible(const PairingGraph& g) const;
};

// E[prod_i V_{j_i}(x_i)] = sum over perfect matchings of prod over pairs of
// [x = x'] [|j - j'| <= 1] P_j(x) P_j'(x) v(x)^2.
double wick_expectation(const std::vector<Site>& sites, const ScaleAssignment& scales, const DyadicPartition& partition,
                        const DecayProfile& profile);

// Same expectation as an explicit sum over the graphs of Pi_{n,n'}; sites and scales
// follow vertex_slots(n, n') order.
double graph_sum(int n, int np, const std::vector<Site>& sites, const ScaleAssignment& scales,
                 const DyadicPartition& partition, const DecayProfile& profile);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t samples = 0;
};

MonteCarloEstimate mc_wick_oracle(const std::vector<Site>& sites, const ScaleAssignment& scales,
                                  const DyadicPartition& partition, const DecayProfile& profile, std::size_t samples,
                                  std::uint64_t seed);

// Graph on the closed particle cycle E - v_1 - ... - v_n - L2 - v_{n+2} - ... - E,
// where E joins the two outer ends, plus the contraction lines. Particle line p_l
// runs between slot l and slot l+1 (slot 0 and slot 2nbar+2 are E).
struct SpanningTree {
    std::vector<int> tree_lines;        // momentum indices l of particle lines in T
    std::vector<int> loop_lines;        // particle lines in T^c
    std::vector<std::pair<int, int>> contraction_lines;  // all of them are in T
    int tree_propagators = 0;           // |T| without p_n
    int loop_propagators = 0;           // |T^c| without p_{n+1}
};

// Admissible tree: all contraction lines, p_n and p_{2nbar+1} in T; p_0 and p_{n+1}
// in T^c; remaining particle lines added by increasing momentum index. Requires
// n, n' >= 1. Returns nothing when no contraction line joins the two particle
// lines, since then the cycle minus {p_0, p_{n+1}} cannot be spanned.
std::optional<SpanningTree> admissible_tree(const PairingGraph& graph);

bool crosses_lines(const PairingGraph& graph);

}  // namespace dloc
