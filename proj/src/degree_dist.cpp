#include "pubsim/degree_dist.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pubsim/errors.hpp"

namespace pubsim {

namespace {
constexpr double kTailCut = 1e-12;
}

DegreeDistribution::DegreeDistribution(Eigen::ArrayXd p) : p_(std::move(p)) {
    if (p_.size() == 0) throw std::invalid_argument("empty degree distribution");
    if ((p_ < 0.0).any()) throw std::invalid_argument("negative probability in degree distribution");
    const double total = p_.sum();
    if (!(total > 0.0)) throw std::invalid_argument("degree distribution has zero total mass");
    p_ /= total;

    const Eigen::ArrayXd idx = Eigen::ArrayXd::LinSpaced(p_.size(), 0.0, double(p_.size() - 1));
    mean_ = (idx * p_).sum();
    second_ = (idx.square() * p_).sum();
    if (!(mean_ > 0.0)) {
        throw ZeroMeanDegreeError("degree distribution has mean degree 0 (all nodes isolated)");
    }

    cdf_.resize(p_.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
        acc += p_[i];
        cdf_[i] = acc;
    }
    cdf_[p_.size() - 1] = 1.0;
}

DegreeDistribution DegreeDistribution::poisson(double lambda, int k_max) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson mean must be positive");
    if (k_max == kAutoTruncate) {
        // Smallest k whose tail mass is below the cut. The hard bound keeps
        // the loop finite when exp(-lambda) underflows to zero.
        const int bound = int(lambda + 40.0 * std::sqrt(lambda) + 100.0);
        double term = std::exp(-lambda);
        double cum = term;
        int k = 0;
        while (1.0 - cum >= kTailCut && k < bound) {
            ++k;
            term *= lambda / k;
            cum += term;
        }
        k_max = k;
    }
    if (k_max < 1) throw std::invalid_argument("poisson truncation bound must be >= 1");
    Eigen::ArrayXd p(k_max + 1);
    double term = std::exp(-lambda);
    for (int i = 0; i <= k_max; ++i) {
        p[i] = term;
        term *= lambda / (i + 1);
    }
    return DegreeDistribution(std::move(p));
}

DegreeDistribution DegreeDistribution::power_law(double exponent, int k_min, int k_max) {
    if (!(exponent < 0.0)) throw std::invalid_argument("power-law exponent must be negative");
    if (k_min < 1 || k_max < k_min) throw std::invalid_argument("bad power-law degree bounds");
    Eigen::ArrayXd p = Eigen::ArrayXd::Zero(k_max + 1);
    for (int i = k_min; i <= k_max; ++i) {
        p[i] = std::pow(double(i), exponent);
    }
    return DegreeDistribution(std::move(p));
}

DegreeDistribution DegreeDistribution::aiello(double a, double b) {
    if (a < 0.0) throw std::invalid_argument("aiello parameter a must be >= 0");
    if (!(b > 0.0)) throw std::invalid_argument("aiello parameter b must be positive");
    if (std::exp(a / b) > 1e7) throw std::invalid_argument("aiello parameters imply a huge degree range");
    const int max_deg = int(std::floor(std::exp(a / b)));
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(max_deg + 1);
    for (int x = 1; x <= max_deg; ++x) {
        counts[x] = std::floor(std::exp(a) / std::pow(double(x), b));
    }
    return DegreeDistribution(std::move(counts));
}

DegreeDistribution DegreeDistribution::empirical(const std::map<int, double>& pmf) {
    if (pmf.empty()) throw std::invalid_argument("empty empirical pmf");
    int k_max = 0;
    for (const auto& [degree, prob] : pmf) {
        if (degree < 0) throw std::invalid_argument("negative degree in empirical pmf");
        if (prob < 0.0) throw std::invalid_argument("negative probability in empirical pmf");
        k_max = std::max(k_max, degree);
    }
    Eigen::ArrayXd p = Eigen::ArrayXd::Zero(k_max + 1);
    for (const auto& [degree, prob] : pmf) p[degree] += prob;
    return DegreeDistribution(std::move(p));
}

DegreeDistribution DegreeDistribution::from_degrees(std::span<const int> degrees) {
    if (degrees.empty()) throw std::invalid_argument("empty degree sequence");
    int k_max = 0;
    for (int d : degrees) {
        if (d < 0) throw std::invalid_argument("negative degree");
        k_max = std::max(k_max, d);
    }
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(k_max + 1);
    for (int d : degrees) counts[d] += 1.0;
    return DegreeDistribution(std::move(counts));
}

double DegreeDistribution::pmf(int degree) const {
    if (degree < 0 || degree > max_degree()) return 0.0;
    return p_[degree];
}

double DegreeDistribution::excess_pmf(int degree) const {
    if (degree < 0 || degree >= max_degree()) return 0.0;
    return (degree + 1) * p_[degree + 1] / mean_;
}

Eigen::ArrayXd DegreeDistribution::excess_probabilities() const {
    const Eigen::Index n = p_.size() - 1;
    const Eigen::ArrayXd idx = Eigen::ArrayXd::LinSpaced(n, 1.0, double(n));
    return (idx * p_.tail(n)) / mean_;
}

Moments DegreeDistribution::moments() const {
    return Moments{mean_, second_, (second_ - mean_) / mean_};
}

int DegreeDistribution::sample(Xoshiro256& rng) const {
    const double u = rng.next_double();
    const double* begin = cdf_.data();
    const double* end = begin + cdf_.size();
    return int(std::upper_bound(begin, end, u) - begin);
}

std::vector<int> aiello_degree_sequence(double a, double b) {
    if (a < 0.0) throw std::invalid_argument("aiello parameter a must be >= 0");
    if (!(b > 0.0)) throw std::invalid_argument("aiello parameter b must be positive");
    if (std::exp(a) > 1e7) throw std::invalid_argument("aiello parameters imply a huge network");
    const long max_deg = long(std::floor(std::exp(a / b)));
    std::vector<int> degrees;
    for (long x = 1; x <= max_deg; ++x) {
        const long count = long(std::floor(std::exp(a) / std::pow(double(x), b)));
        degrees.insert(degrees.end(), count, int(x));
    }
    return degrees;
}

std::vector<int> sample_degree_sequence(const DegreeDistribution& dist, int n, Xoshiro256& rng) {
    if (n < 2) throw std::invalid_argument("degree sequence needs at least 2 nodes");
    std::vector<int> degrees(n);
    long long sum = 0;
    for (int i = 0; i < n; ++i) {
        degrees[i] = dist.sample(rng);
        sum += degrees[i];
    }
    if (sum % 2 != 0) {
        degrees[rng.next_below(std::uint64_t(n))] += 1;
    }
    return degrees;
}

void write_degree_sequence(std::ostream& out, std::span<const int> degrees) {
    for (int d : degrees) out << d << '\n';
}

std::vector<int> read_degree_sequence(std::istream& in) {
    std::vector<int> degrees;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int d = 0;
        if (!(ss >> d) || d < 0) throw ParseError("bad degree entry", line_no);
        std::string trailing;
        if (ss >> trailing) throw ParseError("trailing characters after degree", line_no);
        degrees.push_back(d);
    }
    return degrees;
}

}  // namespace pubsim
