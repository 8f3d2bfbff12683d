#pragma once

#include <Eigen/Core>

#include <optional>

#include "pubsim/degree_dist.hpp"

namespace pubsim {

// Subscription probability sigma and gossip probability gamma. The chance
// that a relaying node sends the event down a given link is
//   Gamma = sigma + (1 - sigma) * gamma
// (neighbour is a subscriber, or it is not and the node gossips anyway).
// Gamma is always derived from the pair, never stored separately.
struct CoverageParams {
    double sigma = 0.0;
    double gamma = 0.0;

    CoverageParams(double sigma_, double gamma_);
    double effective_prob() const { return sigma + (1.0 - sigma) * gamma; }
};

// f_i: probability a relaying node forwards the event to exactly i
// neighbours, mixing the binomial over the node degree law.
Eigen::ArrayXd forward_pmf(const DegreeDistribution& dist, const CoverageParams& params);
double forward_pmf(const DegreeDistribution& dist, const CoverageParams& params, int i);

// Same, for the node found at the end of a random link (excess degree law).
Eigen::ArrayXd link_forward_pmf(const DegreeDistribution& dist, const CoverageParams& params);
double link_forward_pmf(const DegreeDistribution& dist, const CoverageParams& params, int i);

struct CoveragePrediction {
    double mean_receivers = 0.0;    // <r>; +infinity when divergent
    double mean_subscribers = 0.0;  // <s> = sigma * <r>
    double branching_factor = 0.0;  // Gamma * <q>, mean onward forwards per informed link
    std::optional<double> threshold_gamma_eff;  // Gamma*; nullopt if no divergence possible
    bool divergent = false;
};

// Mean receivers 1 + Gamma<p>^2 / ((1+Gamma)<p> - Gamma<p^2>), flagged
// divergent once the denominator falls below 1e-9 * <p> (the event reaches a
// network-scale set of nodes; the finite value is numerically meaningless).
CoveragePrediction predict(const DegreeDistribution& dist, const CoverageParams& params);

// Gamma* = <p> / (<p^2> - <p>), the effective probability at which the mean
// receiver count diverges. nullopt when <p^2> <= <p>: no giant component is
// possible and dissemination never percolates, whatever sigma and gamma.
std::optional<double> threshold_gamma_eff(const DegreeDistribution& dist);

// Critical value of one parameter with the other held fixed, clamped to
// [0,1]; `clamped` reports that the unconstrained solution fell outside.
struct ThresholdSolution {
    double value = 0.0;
    bool clamped = false;
};
std::optional<ThresholdSolution> solve_sigma(const DegreeDistribution& dist, double gamma);
std::optional<ThresholdSolution> solve_gamma(const DegreeDistribution& dist, double sigma);

// Truncated distribution of how many peers an event reaches. Entry [i] is
// the probability that exactly i peers receive it; index 0 is always 0 (the
// origin of a link or the publisher itself always counts). Mass beyond the
// truncation is reported, not renormalized away.
struct ClusterSizePmf {
    Eigen::ArrayXd node_rooted;  // r_0..r_T, r_0 = 0
    Eigen::ArrayXd link_rooted;  // r->_0..r->_T, r->_0 = 0
    int truncation = 0;
    double residual_mass = 0.0;       // 1 - sum(node_rooted)
    double link_residual_mass = 0.0;  // 1 - sum(link_rooted)
};

// Evaluates the size recurrences by truncated power-series iteration: the
// link-rooted series first, then the node-rooted one on top of its powers.
ClusterSizePmf cluster_size_pmf(const DegreeDistribution& dist, const CoverageParams& params,
                                int truncation);

}  // namespace pubsim
