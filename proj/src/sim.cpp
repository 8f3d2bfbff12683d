#include "pubsim/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "pubsim/errors.hpp"

namespace pubsim {

std::vector<std::uint8_t> assign_subscriptions(int n, double sigma, Xoshiro256& rng) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in [0,1]");
    std::vector<std::uint8_t> subs(std::size_t(n), 0);
    for (auto& s : subs) s = rng.bernoulli(sigma);
    return subs;
}

SubscriptionCache::SubscriptionCache(const OverlayGraph& graph,
                                     std::span<const std::uint8_t> subs)
    : graph_(&graph) {
    std::size_t total = 0;
    for (int v = 0; v < graph.num_nodes(); ++v) total += std::size_t(graph.degree(v));
    entries_.assign(total, 0);
    // every node "sends" its subscription to all neighbours
    for (int v = 0; v < graph.num_nodes(); ++v) {
        if (subs[std::size_t(v)]) notify_subscription(v, true);
    }
}

std::size_t SubscriptionCache::offset(int node) const {
    // CSR offset recomputed from spans to avoid duplicating graph internals
    return std::size_t(graph_->neighbors(node).data() - graph_->neighbors(0).data());
}

bool SubscriptionCache::entry_for(int node, int neighbor) const {
    const auto nb = graph_->neighbors(node);
    const auto it = std::lower_bound(nb.begin(), nb.end(), neighbor);
    if (it == nb.end() || *it != neighbor) throw std::invalid_argument("not a neighbour");
    return entry(node, int(it - nb.begin()));
}

void SubscriptionCache::notify_subscription(int node, bool subscribed) {
    for (int m : graph_->neighbors(node)) {
        const auto nb = graph_->neighbors(m);
        const auto it = std::lower_bound(nb.begin(), nb.end(), node);
        entries_[offset(m) + std::size_t(it - nb.begin())] = subscribed ? 1 : 0;
    }
}

SubscriptionCache subscription_phase(const OverlayGraph& graph,
                                     std::span<const std::uint8_t> subs) {
    return SubscriptionCache(graph, subs);
}

namespace {

struct PendingMessage {
    int node;
    int sender;  // -1: event originated here
    int ttl;
    int hops;
};

template <typename GossipDraw>
DisseminationResult run_dissemination(const OverlayGraph& graph, const SubscriptionCache& cache,
                                      std::span<const std::uint8_t> subs, int publisher,
                                      double gamma, int ttl0, GossipDraw&& draw,
                                      std::vector<std::uint8_t>* received) {
    const int n = graph.num_nodes();
    if (publisher < 0 || publisher >= n) throw InvalidPublisherError("publisher id out of range");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
    if (ttl0 != kInfiniteTtl && ttl0 < 1) {
        throw std::invalid_argument("ttl must be >= 1 or infinite");
    }

    DisseminationResult result;
    std::vector<std::uint8_t> handled(std::size_t(n), 0);
    std::deque<PendingMessage> queue;
    queue.push_back({publisher, -1, ttl0, 0});

    while (!queue.empty()) {
        const PendingMessage msg = queue.front();
        queue.pop_front();
        if (handled[std::size_t(msg.node)] || msg.ttl == 0) continue;
        handled[std::size_t(msg.node)] = 1;
        ++result.receivers;
        if (subs[std::size_t(msg.node)]) ++result.subscribers_reached;
        result.max_hops = std::max(result.max_hops, msg.hops);

        const int next_ttl = msg.ttl > 0 ? msg.ttl - 1 : msg.ttl;
        const auto nb = graph.neighbors(msg.node);
        // neighbour subscribers first, then gossip to the rest
        for (int k = 0; k < int(nb.size()); ++k) {
            const int v = nb[std::size_t(k)];
            if (v == msg.sender || !cache.entry(msg.node, k)) continue;
            queue.push_back({v, msg.node, next_ttl, msg.hops + 1});
            ++result.messages_sent;
        }
        for (int k = 0; k < int(nb.size()); ++k) {
            const int v = nb[std::size_t(k)];
            if (v == msg.sender || cache.entry(msg.node, k)) continue;
            if (draw(msg.node, v) < gamma) {
                queue.push_back({v, msg.node, next_ttl, msg.hops + 1});
                ++result.messages_sent;
            }
        }
    }

    if (received) *received = std::move(handled);
    return result;
}

}  // namespace

DisseminationResult disseminate(const OverlayGraph& graph, const SubscriptionCache& cache,
                                std::span<const std::uint8_t> subs, int publisher, double gamma,
                                int ttl0, Xoshiro256& rng, std::vector<std::uint8_t>* received) {
    return run_dissemination(
        graph, cache, subs, publisher, gamma, ttl0,
        [&rng](int, int) { return rng.next_double(); }, received);
}

DisseminationResult disseminate_coupled(const OverlayGraph& graph, const SubscriptionCache& cache,
                                        std::span<const std::uint8_t> subs, int publisher,
                                        double gamma, int ttl0, std::uint64_t coupling_seed,
                                        std::vector<std::uint8_t>* received) {
    const auto draw = [coupling_seed](int u, int v) {
        std::uint64_t s = derive_seed(coupling_seed, std::uint64_t(u), std::uint64_t(v));
        return double(splitmix64(s) >> 11) * 0x1.0p-53;
    };
    return run_dissemination(graph, cache, subs, publisher, gamma, ttl0, draw, received);
}

std::vector<double> smallgraph_oracle(const OverlayGraph& graph,
                                      std::span<const std::uint8_t> subs, int publisher,
                                      double gamma) {
    const int n = graph.num_nodes();
    if (publisher < 0 || publisher >= n) throw InvalidPublisherError("publisher id out of range");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
    if (n > 32) throw OracleTooLargeError("oracle limited to 32 nodes");

    // Forced sends: any link whose target subscribes. Gossip-eligible: the
    // rest. gamma 0 or 1 makes every decision deterministic, so fold those
    // into the forced masks instead of enumerating.
    std::vector<std::uint32_t> forced(std::size_t(n), 0);
    std::vector<std::pair<int, int>> eligible;
    for (int u = 0; u < n; ++u) {
        for (int v : graph.neighbors(u)) {
            if (subs[std::size_t(v)]) {
                forced[std::size_t(u)] |= std::uint32_t(1) << v;
            } else if (gamma >= 1.0) {
                forced[std::size_t(u)] |= std::uint32_t(1) << v;
            } else if (gamma > 0.0) {
                eligible.emplace_back(u, v);
            }
        }
    }
    const int k = int(eligible.size());
    if (k > 24) {
        throw OracleTooLargeError("too many gossip-eligible links: " + std::to_string(k));
    }

    // weight of an outcome depends only on how many links are active
    std::vector<double> weight_by_active(std::size_t(k) + 1);
    for (int c = 0; c <= k; ++c) {
        weight_by_active[std::size_t(c)] = std::pow(gamma, c) * std::pow(1.0 - gamma, k - c);
    }

    std::vector<double> pmf(std::size_t(n) + 1, 0.0);
    std::vector<std::uint32_t> send(forced.size());
    for (std::uint32_t outcome = 0; outcome < (std::uint32_t(1) << k); ++outcome) {
        std::copy(forced.begin(), forced.end(), send.begin());
        for (int l = 0; l < k; ++l) {
            if (outcome & (std::uint32_t(1) << l)) {
                send[std::size_t(eligible[std::size_t(l)].first)] |=
                    std::uint32_t(1) << eligible[std::size_t(l)].second;
            }
        }
        std::uint32_t reached = std::uint32_t(1) << publisher;
        std::uint32_t frontier = reached;
        while (frontier != 0) {
            std::uint32_t next = 0;
            std::uint32_t f = frontier;
            while (f != 0) {
                const int u = std::countr_zero(f);
                f &= f - 1;
                next |= send[std::size_t(u)];
            }
            frontier = next & ~reached;
            reached |= frontier;
        }
        pmf[std::size_t(std::popcount(reached))] += weight_by_active[std::size_t(std::popcount(outcome))];
    }
    return pmf;
}

}  // namespace pubsim
