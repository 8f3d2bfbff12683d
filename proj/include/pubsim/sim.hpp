#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pubsim/overlay.hpp"
#include "pubsim/rng.hpp"

namespace pubsim {

// Messages carry no hop budget; they are dropped only by the dedup cache.
inline constexpr int kInfiniteTtl = -1;

// One i.i.d. Bernoulli(sigma) flag per node, consuming exactly n uniforms.
std::vector<std::uint8_t> assign_subscriptions(int n, double sigma, Xoshiro256& rng);

// Per-node mirror of every neighbour's subscription flag, the state each
// peer accumulates from subscription control messages. Entries are aligned
// with the graph's adjacency lists.
class SubscriptionCache {
public:
    SubscriptionCache(const OverlayGraph& graph, std::span<const std::uint8_t> subs);

    // Subscription flag of the k-th neighbour of `node`.
    bool entry(int node, int k) const { return entries_[offset(node) + std::size_t(k)] != 0; }
    // Lookup by neighbour id.
    bool entry_for(int node, int neighbor) const;

    // A node announced a new subscription (or removed one): every neighbour
    // updates its cache entry for that node.
    void notify_subscription(int node, bool subscribed);

    const OverlayGraph& graph() const { return *graph_; }

private:
    std::size_t offset(int node) const;

    const OverlayGraph* graph_;
    std::vector<std::uint8_t> entries_;
};

// Full subscription exchange: every node sends its flag to all neighbours.
SubscriptionCache subscription_phase(const OverlayGraph& graph,
                                     std::span<const std::uint8_t> subs);

struct DisseminationResult {
    int receivers = 0;            // distinct nodes that processed the event, publisher included
    int subscribers_reached = 0;  // receivers whose own subscription matches
    long long messages_sent = 0;  // point-to-point sends, including ones the recipient drops
    int max_hops = 0;             // largest hop distance at first processing
};

// One event pushed from `publisher` through the overlay: every processed
// node forwards to cached subscriber neighbours (sender excluded) and
// gossips to each remaining neighbour with probability gamma. FIFO
// processing; a node handles an event at most once; ttl0 is a hop budget or
// kInfiniteTtl. Gossip draws are consumed one per non-subscriber neighbour
// of each processed node, in adjacency order. If `received` is non-null it
// is resized to n and set to the processed-node indicator.
DisseminationResult disseminate(const OverlayGraph& graph, const SubscriptionCache& cache,
                                std::span<const std::uint8_t> subs, int publisher, double gamma,
                                int ttl0, Xoshiro256& rng,
                                std::vector<std::uint8_t>* received = nullptr);

// Same protocol, but the gossip draw for a directed link (u, v) is a fixed
// uniform derived from coupling_seed, shared across runs. Raising gamma with
// the same seed can only activate more links, so receiver sets are nested.
DisseminationResult disseminate_coupled(const OverlayGraph& graph, const SubscriptionCache& cache,
                                        std::span<const std::uint8_t> subs, int publisher,
                                        double gamma, int ttl0, std::uint64_t coupling_seed,
                                        std::vector<std::uint8_t>* received = nullptr);

// Exact receiver-count distribution by enumerating every combination of
// gossip decisions (one Bernoulli(gamma) per directed link into a
// non-subscriber). Returns pmf indexed by receiver count, size n+1.
// Throws OracleTooLargeError beyond 24 gossip-eligible links.
std::vector<double> smallgraph_oracle(const OverlayGraph& graph,
                                      std::span<const std::uint8_t> subs, int publisher,
                                      double gamma);

}  // namespace pubsim
