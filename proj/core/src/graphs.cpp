#include "dloc/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dloc/rng.hpp"
#include "dloc/spectral.hpp"

namespace dloc {

std::vector<int> vertex_slots(int n, int np) {
    std::vector<int> s;
    for (int i = 1; i <= n + np + 1; ++i)
        if (i != n + 1) s.push_back(i);
    return s;
}

std::vector<int> PairingGraph::vertex_slots() const { return dloc::vertex_slots(n, np); }

std::uint64_t double_factorial(int k) {
    std::uint64_t r = 1;
    for (int i = k; i > 1; i -= 2) r *= std::uint64_t(i);
    return r;
}

namespace {

void match(std::vector<int>& free, std::vector<std::pair<int, int>>& cur, std::vector<std::vector<std::pair<int, int>>>& out) {
    if (free.empty()) {
        out.push_back(cur);
        return;
    }
    const int first = free.front();
    for (std::size_t k = 1; k < free.size(); ++k) {
        const int other = free[k];
        std::vector<int> rest;
        rest.reserve(free.size() - 2);
        for (std::size_t q = 1; q < free.size(); ++q)
            if (q != k) rest.push_back(free[q]);
        cur.emplace_back(first, other);
        match(rest, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<PairingGraph> enumerate_pairings(int n, int np, int cap) {
    if (n < 0 || np < 0) throw std::invalid_argument("enumerate_pairings: n and n' must be >= 0");
    if (n + np > cap)
        throw std::invalid_argument("enumerate_pairings: " + std::to_string(n + np) + " vertices exceed the cap of " +
                                    std::to_string(cap));
    std::vector<PairingGraph> graphs;
    if ((n + np) % 2 != 0) return graphs;
    auto slots = vertex_slots(n, np);
    std::vector<std::vector<std::pair<int, int>>> all;
    std::vector<std::pair<int, int>> cur;
    match(slots, cur, all);
    for (std::size_t id = 0; id < all.size(); ++id) graphs.push_back({n, np, id, std::move(all[id])});
    return graphs;
}

bool ScaleAssignment::compatible(const PairingGraph& g) const {
    const auto slots = g.vertex_slots();
    if (j.size() != slots.size()) throw std::invalid_argument("ScaleAssignment: length does not match the graph");
    auto pos = [&](int slot) { return std::size_t(std::find(slots.begin(), slots.end(), slot) - slots.begin()); };
    for (const auto& [a, b] : g.pairs)
        if (std::abs(j[pos(a)] - j[pos(b)]) > 1) return false;
    return true;
}

namespace {

double hafnian(std::vector<int>& free, const std::vector<std::vector<double>>& w) {
    if (free.empty()) return 1.0;
    const int first = free.front();
    double acc = 0.0;
    for (std::size_t k = 1; k < free.size(); ++k) {
        const double c = w[first][free[k]];
        if (c == 0.0) continue;
        std::vector<int> rest;
        for (std::size_t q = 1; q < free.size(); ++q)
            if (q != k) rest.push_back(free[q]);
        acc += c * hafnian(rest, w);
    }
    return acc;
}

void check_config(const std::vector<Site>& sites, const ScaleAssignment& scales, const DyadicPartition& partition) {
    if (sites.size() != scales.j.size())
        throw std::invalid_argument("wick: " + std::to_string(sites.size()) + " sites but " +
                                    std::to_string(scales.j.size()) + " scales");
    for (int j : scales.j)
        if (j < 0 || j > partition.top_scale() + 1) throw std::invalid_argument("wick: scale index out of range");
}

}  // namespace

double wick_expectation(const std::vector<Site>& sites, const ScaleAssignment& scales, const DyadicPartition& partition,
                        const DecayProfile& profile) {
    check_config(sites, scales, partition);
    const std::size_t k = sites.size();
    if (k % 2 != 0) return 0.0;
    std::vector<std::vector<double>> w(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            if (sites[a] != sites[b] || std::abs(scales.j[a] - scales.j[b]) > 1) continue;
            const double v = profile(sites[a]);
            w[a][b] = w[b][a] = partition.bump(scales.j[a], sites[a]) * partition.bump(scales.j[b], sites[b]) * v * v;
        }
    std::vector<int> free(k);
    std::iota(free.begin(), free.end(), 0);
    return hafnian(free, w);
}

double graph_sum(int n, int np, const std::vector<Site>& sites, const ScaleAssignment& scales,
                 const DyadicPartition& partition, const DecayProfile& profile) {
    check_config(sites, scales, partition);
    if (sites.size() != std::size_t(n + np)) throw std::invalid_argument("graph_sum: need n + n' sites");
    const auto slots = vertex_slots(n, np);
    auto pos = [&](int slot) { return std::size_t(std::find(slots.begin(), slots.end(), slot) - slots.begin()); };
    double total = 0.0;
    for (const auto& g : enumerate_pairings(n, np)) {
        double w = 1.0;
        for (const auto& [a, b] : g.pairs) {
            const std::size_t p = pos(a), q = pos(b);
            if (sites[p] != sites[q] || std::abs(scales.j[p] - scales.j[q]) > 1) {
                w = 0.0;
                break;
            }
            const double v = profile(sites[p]);
            w *= partition.bump(scales.j[p], sites[p]) * partition.bump(scales.j[q], sites[q]) * v * v;
        }
        total += w;
    }
    return total;
}

MonteCarloEstimate mc_wick_oracle(const std::vector<Site>& sites, const ScaleAssignment& scales,
                                  const DyadicPartition& partition, const DecayProfile& profile, std::size_t samples,
                                  std::uint64_t seed) {
    check_config(sites, scales, partition);
    if (samples < 1000) throw std::invalid_argument("mc_wick_oracle: need at least 1000 samples");
    double coef = 1.0;
    std::map<Site, int> mult;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        coef *= partition.bump(scales.j[i], sites[i]) * profile(sites[i]);
        ++mult[sites[i]];
    }
    MonteCarloEstimate est;
    est.samples = samples;
    if (coef == 0.0) return est;
    std::vector<int> powers;
    for (const auto& [x, m] : mult) powers.push_back(m);
    RunningStats stats;
    for (std::size_t s = 0; s < samples; ++s) {
        double prod = coef;
        for (std::size_t d = 0; d < powers.size(); d += 2) {
            const auto g = gaussian_pair(seed, Stream::monte_carlo, s, std::uint32_t(d / 2));
            for (int p = 0; p < powers[d]; ++p) prod *= g[0];
            if (d + 1 < powers.size())
                for (int p = 0; p < powers[d + 1]; ++p) prod *= g[1];
        }
        stats.add(prod);
    }
    est.mean = stats.mean();
    est.stderr_mean = stats.stderr_mean();
    return est;
}

bool crosses_lines(const PairingGraph& g) {
    for (const auto& [a, b] : g.pairs)
        if ((a <= g.n) != (b <= g.n)) return true;
    return false;
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

std::optional<SpanningTree> admissible_tree(const PairingGraph& g) {
    if (g.n < 1 || g.np < 1) throw std::invalid_argument("admissible_tree: needs n, n' >= 1");
    const int nb = g.nbar();
    const int top = 2 * nb + 1;  // last momentum index
    // vertex of slot s: E for s = 0 and s = 2nbar + 2, otherwise s
    auto vertex = [&](int s) { return (s == 0 || s == top + 1) ? 0 : s; };
    DisjointSets ds(top + 1);
    SpanningTree t;
    for (const auto& p : g.pairs) {
        if (!ds.unite(p.first, p.second)) throw std::logic_error("admissible_tree: malformed pairing");
        t.contraction_lines.push_back(p);
    }
    std::vector<char> in_tree(top + 1, 0);
    for (int l : {g.n, top}) {
        if (!ds.unite(vertex(l), vertex(l + 1))) throw std::logic_error("admissible_tree: forced line closes a cycle");
        in_tree[l] = 1;
    }
    for (int l = 1; l < top; ++l) {
        if (l == g.n || l == g.n + 1) continue;
        if (ds.unite(vertex(l), vertex(l + 1))) in_tree[l] = 1;
    }
    const int root = ds.find(0);
    for (int v = 1; v <= top; ++v)
        if (ds.find(v) != root) return std::nullopt;
    for (int l = 0; l <= top; ++l) (in_tree[l] ? t.tree_lines : t.loop_lines).push_back(l);
    t.tree_propagators = int(t.tree_lines.size()) - 1;
    t.loop_propagators = int(t.loop_lines.size()) - 1;
    return t;
}

}  // namespace dloc
