#include "pubsim/overlay.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "pubsim/errors.hpp"

namespace pubsim {

namespace {

std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

struct UnionFind {
    std::vector<int> parent;
    std::vector<int> size;

    explicit UnionFind(int n) : parent(n), size(n, 1) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

}  // namespace

OverlayGraph OverlayGraph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("negative node count");
    OverlayGraph g;
    g.n_ = n;
    g.num_edges_ = (long long)edges.size();
    g.offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (int i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adj_.resize(std::size_t(g.offsets_[n]));
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.adj_[std::size_t(cursor[u]++)] = v;
        g.adj_[std::size_t(cursor[v]++)] = u;
    }
    for (int v = 0; v < n; ++v) {
        auto* begin = g.adj_.data() + g.offsets_[v];
        auto* end = g.adj_.data() + g.offsets_[v + 1];
        std::sort(begin, end);
        if (std::adjacent_find(begin, end) != end) throw std::invalid_argument("duplicate edge");
    }
    return g;
}

bool OverlayGraph::has_edge(int u, int v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> OverlayGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(std::size_t(num_edges_));
    for (int u = 0; u < n_; ++u) {
        for (int v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

ConfigModelResult configuration_model(std::span<const int> degrees, Xoshiro256& rng) {
    const int n = int(degrees.size());
    long long stub_count = 0;
    int max_degree = 0;
    for (int d : degrees) {
        if (d < 0) throw InfeasibleSequenceError("negative degree");
        stub_count += d;
        max_degree = std::max(max_degree, d);
    }
    if (stub_count % 2 != 0) throw InfeasibleSequenceError("odd stub count");
    if (max_degree >= n && stub_count > 0) {
        throw InfeasibleSequenceError("degree " + std::to_string(max_degree) +
                                      " infeasible in a simple graph on " + std::to_string(n) +
                                      " nodes");
    }

    std::vector<int> stubs;
    stubs.reserve(std::size_t(stub_count));
    for (int i = 0; i < n; ++i) stubs.insert(stubs.end(), std::size_t(degrees[i]), i);

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(std::size_t(stub_count / 2 * 2));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(std::size_t(stub_count / 2));

    constexpr int kMaxPasses = 100;
    std::vector<int> requeued;
    for (int pass = 0; pass < kMaxPasses && !stubs.empty(); ++pass) {
        shuffle(stubs, rng);
        requeued.clear();
        for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
            const int a = stubs[k];
            const int b = stubs[k + 1];
            if (a == b || !seen.insert(edge_key(a, b)).second) {
                requeued.push_back(a);
                requeued.push_back(b);
                continue;
            }
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        stubs.swap(requeued);
    }

    ConfigModelResult result;
    result.discarded_stubs = int(stubs.size());
    result.graph = OverlayGraph::from_edges(n, edges);
    return result;
}

GiantComponent giant_component(const OverlayGraph& graph) {
    const int n = graph.num_nodes();
    UnionFind uf(n);
    for (int u = 0; u < n; ++u) {
        for (int v : graph.neighbors(u)) {
            if (u < v) uf.unite(u, v);
        }
    }
    int best = 0;
    for (int v = 0; v < n; ++v) best = std::max(best, uf.size[uf.find(v)]);
    // first node whose component hits the maximum has the lowest id in it
    int root = -1;
    for (int v = 0; v < n && root < 0; ++v) {
        if (uf.size[uf.find(v)] == best) root = uf.find(v);
    }
    GiantComponent out;
    out.size = best;
    out.membership.assign(std::size_t(n), 0);
    for (int v = 0; v < n; ++v) out.membership[std::size_t(v)] = uf.find(v) == root;
    return out;
}

double global_clustering(const OverlayGraph& graph) {
    long long closed = 0;  // per-edge common-neighbour counts; 3 * triangles total
    long long triples = 0;
    const int n = graph.num_nodes();
    for (int u = 0; u < n; ++u) {
        const long long d = graph.degree(u);
        triples += d * (d - 1) / 2;
        for (int v : graph.neighbors(u)) {
            if (v <= u) continue;
            const auto a = graph.neighbors(u);
            const auto b = graph.neighbors(v);
            std::size_t i = 0, j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] == b[j]) {
                    ++closed;
                    ++i;
                    ++j;
                } else if (a[i] < b[j]) {
                    ++i;
                } else {
                    ++j;
                }
            }
        }
    }
    if (triples == 0) return 0.0;
    return double(closed) / double(triples);
}

void write_edge_list(const OverlayGraph& graph, std::ostream& out) {
    out << "# nodes " << graph.num_nodes() << '\n';
    for (const auto& [u, v] : graph.edges()) {
        out << u << ' ' << v << '\n';
    }
}

OverlayGraph read_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<std::uint64_t> seen;
    int declared_n = -1;
    int max_id = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line);
            std::string hash, word;
            ss >> hash >> word;
            if (word == "nodes") {
                int n = 0;
                if (!(ss >> n) || n < 0) throw ParseError("bad node count directive", line_no);
                declared_n = n;
            }
            continue;
        }
        std::istringstream ss(line);
        int u = 0, v = 0;
        if (!(ss >> u >> v)) throw ParseError("expected 'u v' edge line", line_no);
        std::string trailing;
        if (ss >> trailing) throw ParseError("trailing characters after edge", line_no);
        if (u < 0 || v < 0) throw ParseError("negative node id", line_no);
        if (u == v) throw ParseError("self-loop", line_no);
        if (!seen.insert(edge_key(u, v)).second) throw ParseError("duplicate edge", line_no);
        if (declared_n >= 0 && (u >= declared_n || v >= declared_n)) {
            throw ParseError("node id beyond declared count", line_no);
        }
        max_id = std::max({max_id, u, v});
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    const int n = declared_n >= 0 ? declared_n : max_id + 1;
    return OverlayGraph::from_edges(n, edges);
}

}  // namespace pubsim
