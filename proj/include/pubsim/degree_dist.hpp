#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "pubsim/rng.hpp"

namespace pubsim {

struct Moments {
    double mean_degree = 0.0;    // <p> = sum_i i*p_i
    double second_moment = 0.0;  // <p^2> = sum_i i^2*p_i
    double mean_excess = 0.0;    // <q> = (<p^2> - <p>) / <p>
};

// Node-degree distribution on finite support [0, max_degree()], renormalized
// after truncation so the probabilities sum to 1 exactly. Unbounded kinds
// (Poisson) are cut where the tail mass drops below 1e-12 unless an explicit
// bound is given. Distributions with mean degree 0 are rejected at
// construction. Immutable; sampling mutates only the caller's generator.
class DegreeDistribution {
public:
    static constexpr int kAutoTruncate = -1;

    static DegreeDistribution poisson(double lambda, int k_max = kAutoTruncate);
    // p_i proportional to i^exponent on [k_min, k_max]; exponent must be negative.
    static DegreeDistribution power_law(double exponent, int k_min = 1, int k_max = 1000);
    // Degree counts floor(e^a / x^b) for x in [1, floor(e^{a/b})], normalized.
    static DegreeDistribution aiello(double a, double b);
    static DegreeDistribution empirical(const std::map<int, double>& pmf);
    static DegreeDistribution from_degrees(std::span<const int> degrees);

    double pmf(int degree) const;
    double excess_pmf(int degree) const;
    Moments moments() const;

    int max_degree() const { return static_cast<int>(p_.size()) - 1; }
    const Eigen::ArrayXd& probabilities() const { return p_; }
    // q_0..q_{max_degree-1}; q_i = (i+1) p_{i+1} / <p>.
    Eigen::ArrayXd excess_probabilities() const;

    // Inverse-CDF draw; consumes exactly one uniform from the generator.
    int sample(Xoshiro256& rng) const;

private:
    explicit DegreeDistribution(Eigen::ArrayXd p);

    Eigen::ArrayXd p_;
    Eigen::ArrayXd cdf_;
    double mean_ = 0.0;
    double second_ = 0.0;
};

// One entry per node: exactly floor(e^a / x^b) nodes of degree x, ascending x.
// Deterministic; total length is the network size the parameters fix.
std::vector<int> aiello_degree_sequence(double a, double b);

// n i.i.d. draws; if the stub count comes out odd, one uniformly random
// node's degree is incremented so a graph can be built from the sequence.
std::vector<int> sample_degree_sequence(const DegreeDistribution& dist, int n, Xoshiro256& rng);

// Newline-delimited integers, '#' comment lines ignored.
void write_degree_sequence(std::ostream& out, std::span<const int> degrees);
std::vector<int> read_degree_sequence(std::istream& in);

}  // namespace pubsim
