#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "pubsim/rng.hpp"

namespace pubsim {

// Undirected simple graph over dense node ids 0..n-1. Adjacency is stored in
// CSR form with each neighbour list sorted; immutable after construction.
class OverlayGraph {
public:
    OverlayGraph() = default;

    // Edges must already be simple (no self-loops, no duplicates in either
    // orientation) and reference nodes below n.
    static OverlayGraph from_edges(int n, std::span<const std::pair<int, int>> edges);

    int num_nodes() const { return n_; }
    long long num_edges() const { return num_edges_; }
    int degree(int v) const { return int(offsets_[v + 1] - offsets_[v]); }
    std::span<const int> neighbors(int v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    bool has_edge(int u, int v) const;

    // Each edge once, u < v, ascending.
    std::vector<std::pair<int, int>> edges() const;

private:
    int n_ = 0;
    long long num_edges_ = 0;
    std::vector<std::int64_t> offsets_;
    std::vector<int> adj_;
};

struct ConfigModelResult {
    OverlayGraph graph;
    // Stubs left unmatched once the retry budget is spent; the affected
    // nodes fall short of their target degree.
    int discarded_stubs = 0;
};

// Random mapping of degree stubs: shuffle the stub multiset and pair
// sequentially; pairs that would form a self-loop or duplicate edge are
// re-queued for the next pass, and whatever survives 100 passes is dropped
// (erased-configuration-model semantics, with the erasure count surfaced).
// Throws InfeasibleSequenceError on odd stub count or max degree >= n.
ConfigModelResult configuration_model(std::span<const int> degrees, Xoshiro256& rng);

struct GiantComponent {
    int size = 0;
    std::vector<std::uint8_t> membership;
};

// Largest connected component; among equal-sized ones, the one containing
// the lowest node id.
GiantComponent giant_component(const OverlayGraph& graph);

// Closed triples over all triples; 0 for graphs with no length-2 path.
double global_clustering(const OverlayGraph& graph);

// ASCII edge list: a "# nodes <n>" directive, then one "u v" line per edge
// with u < v, ascending. The reader ignores other '#' lines and infers n
// from the largest id if the directive is missing.
void write_edge_list(const OverlayGraph& graph, std::ostream& out);
OverlayGraph read_edge_list(std::istream& in);

}  // namespace pubsim
