#include "pubsim/coverage_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pubsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Binomial mixture sum_j w_j C(j,i) Gamma^i (1-Gamma)^(j-i) for all i, in
// log space so degrees in the hundreds cannot underflow the (1-Gamma)^j
// factors. weights[j] need not be normalized.
Eigen::ArrayXd binomial_mixture(const Eigen::ArrayXd& weights, double gamma_eff) {
    const Eigen::Index size = weights.size();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(size);
    if (gamma_eff <= 0.0) {
        out[0] = weights.sum();
        return out;
    }
    if (gamma_eff >= 1.0) {
        return weights;
    }
    Eigen::ArrayXd lgamma_table(size + 1);
    for (Eigen::Index k = 0; k <= size; ++k) lgamma_table[k] = std::lgamma(double(k + 1));
    const double log_g = std::log(gamma_eff);
    const double log_1g = std::log1p(-gamma_eff);
    for (Eigen::Index j = 0; j < size; ++j) {
        if (weights[j] <= 0.0) continue;
        const double log_w = std::log(weights[j]);
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double log_choose = lgamma_table[j] - lgamma_table[i] - lgamma_table[j - i];
            out[i] += std::exp(log_w + log_choose + double(i) * log_g + double(j - i) * log_1g);
        }
    }
    return out;
}

}  // namespace

CoverageParams::CoverageParams(double sigma_, double gamma_) : sigma(sigma_), gamma(gamma_) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in [0,1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
}

Eigen::ArrayXd forward_pmf(const DegreeDistribution& dist, const CoverageParams& params) {
    return binomial_mixture(dist.probabilities(), params.effective_prob());
}

Eigen::ArrayXd link_forward_pmf(const DegreeDistribution& dist, const CoverageParams& params) {
    return binomial_mixture(dist.excess_probabilities(), params.effective_prob());
}

double forward_pmf(const DegreeDistribution& dist, const CoverageParams& params, int i) {
    if (i < 0 || i > dist.max_degree()) return 0.0;
    return forward_pmf(dist, params)[i];
}

double link_forward_pmf(const DegreeDistribution& dist, const CoverageParams& params, int i) {
    if (i < 0 || i >= dist.max_degree()) return 0.0;
    return link_forward_pmf(dist, params)[i];
}

CoveragePrediction predict(const DegreeDistribution& dist, const CoverageParams& params) {
    const Moments m = dist.moments();
    const double gamma_eff = params.effective_prob();

    CoveragePrediction out;
    out.branching_factor = gamma_eff * m.mean_excess;
    out.threshold_gamma_eff = threshold_gamma_eff(dist);

    // denominator = <p> (1 - Gamma<q>); treat near-singular as divergent.
    const double denom = (1.0 + gamma_eff) * m.mean_degree - gamma_eff * m.second_moment;
    out.divergent = denom <= 1e-9 * m.mean_degree;
    if (out.divergent) {
        out.mean_receivers = kInf;
        out.mean_subscribers = params.sigma > 0.0 ? kInf : 0.0;
    } else {
        out.mean_receivers =
            1.0 + gamma_eff * m.mean_degree * m.mean_degree / denom;
        out.mean_subscribers = params.sigma * out.mean_receivers;
    }
    return out;
}

std::optional<double> threshold_gamma_eff(const DegreeDistribution& dist) {
    const Moments m = dist.moments();
    if (m.second_moment <= m.mean_degree) return std::nullopt;
    return m.mean_degree / (m.second_moment - m.mean_degree);
}

namespace {

// Gamma(x) = fixed + (1 - fixed) * x is the same map for either parameter,
// so one solver serves both solve_sigma and solve_gamma.
std::optional<ThresholdSolution> solve_free_param(const DegreeDistribution& dist, double fixed) {
    const auto star = threshold_gamma_eff(dist);
    if (!star) return std::nullopt;
    ThresholdSolution sol;
    if (fixed >= 1.0) {
        // Gamma is pinned at 1 whatever the free parameter is.
        if (*star <= 1.0) {
            sol.value = 0.0;
        } else {
            sol.value = 1.0;
            sol.clamped = true;
        }
        return sol;
    }
    const double raw = (*star - fixed) / (1.0 - fixed);
    sol.clamped = raw < 0.0 || raw > 1.0;
    sol.value = std::min(1.0, std::max(0.0, raw));
    return sol;
}

}  // namespace

std::optional<ThresholdSolution> solve_sigma(const DegreeDistribution& dist, double gamma) {
    return solve_free_param(dist, gamma);
}

std::optional<ThresholdSolution> solve_gamma(const DegreeDistribution& dist, double sigma) {
    return solve_free_param(dist, sigma);
}

ClusterSizePmf cluster_size_pmf(const DegreeDistribution& dist, const CoverageParams& params,
                                int truncation) {
    if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
    const Eigen::ArrayXd f_node = forward_pmf(dist, params);
    const Eigen::ArrayXd f_link = link_forward_pmf(dist, params);
    const int t_max = truncation;
    const Eigen::Index j_max = f_node.size() - 1;  // powers needed up to the node degree bound

    // powers(j, t) = coefficient of x^t in (sum_i r->_i x^i)^j. Since the
    // link-rooted series has no constant term, column t only involves
    // coefficients r->_1..r->_t, all known before step t+1; filling one
    // column per step keeps the recurrence triangular.
    Eigen::MatrixXd powers = Eigen::MatrixXd::Zero(j_max + 1, t_max);
    powers(0, 0) = 1.0;

    Eigen::ArrayXd r_link = Eigen::ArrayXd::Zero(t_max + 1);
    for (int m = 1; m <= t_max; ++m) {
        const int t = m - 1;
        for (Eigen::Index j = 1; j <= std::min<Eigen::Index>(j_max, t); ++j) {
            double acc = 0.0;
            for (int s = 1; s <= t - int(j) + 1; ++s) {
                acc += r_link[s] * powers(j - 1, t - s);
            }
            powers(j, t) = acc;
        }
        double value = 0.0;
        for (Eigen::Index j = 0; j < f_link.size() && j <= t; ++j) {
            value += f_link[j] * powers(j, t);
        }
        r_link[m] = value;
    }

    Eigen::ArrayXd r_node = Eigen::ArrayXd::Zero(t_max + 1);
    for (int m = 1; m <= t_max; ++m) {
        double value = 0.0;
        for (Eigen::Index j = 0; j < f_node.size() && j <= m - 1; ++j) {
            value += f_node[j] * powers(j, m - 1);
        }
        r_node[m] = value;
    }

    ClusterSizePmf out;
    out.truncation = t_max;
    out.node_rooted = std::move(r_node);
    out.link_rooted = std::move(r_link);
    out.residual_mass = std::max(0.0, 1.0 - out.node_rooted.sum());
    out.link_residual_mass = std::max(0.0, 1.0 - out.link_rooted.sum());
    return out;
}

}  // namespace pubsim
