// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Heavier than the unit tests (full 20x400 experiment runs); expect minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pubsim/coverage_model.hpp"
#include "pubsim/degree_dist.hpp"
#include "pubsim/harness.hpp"
#include "pubsim/overlay.hpp"
#include "pubsim/sim.hpp"

using namespace pubsim;

namespace {

int failures = 0;
std::string cli_path;  // argv[1]: the pubsim binary, for the determinism check

void report(int id, bool pass, const std::string& name, const std::string& detail,
            double seconds) {
    std::printf("[%d/9] %s %s: %s (%.1fs)\n", id, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

void criterion_closed_forms() {
    Timer timer;
    const auto poisson = DegreeDistribution::poisson(5.0);
    const auto pred = predict(poisson, CoverageParams(0.1, 0.0));
    const auto star = threshold_gamma_eff(poisson);
    const bool pass = !pred.divergent && std::abs(pred.mean_receivers - 2.0) < 1e-9 &&
                      star.has_value() && std::abs(*star - 0.2) < 1e-9;
    report(1, pass, "closed-form exactness",
           "mean_receivers=" + fmt(pred.mean_receivers) + " threshold=" +
               (star ? fmt(*star) : std::string("none")) + " (tolerance 1e-9)",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 2

void criterion_generating_functions() {
    Timer timer;
    const std::vector<std::pair<std::string, DegreeDistribution>> dists = {
        {"poisson(5)", DegreeDistribution::poisson(5.0)},
        {"powerlaw(-3.3)", DegreeDistribution::power_law(-3.3)},
        {"aiello(6,1)", DegreeDistribution::from_degrees(aiello_degree_sequence(6.0, 1.0))},
    };
    const std::vector<CoverageParams> params_grid = {
        CoverageParams(0.1, 0.0), CoverageParams(0.0, 0.3), CoverageParams(0.2, 0.5)};

    bool pass = true;
    double worst = 0.0;
    for (const auto& [name, dist] : dists) {
        const auto m = dist.moments();
        for (const auto& params : params_grid) {
            const double gamma_eff = params.effective_prob();
            const auto f = forward_pmf(dist, params);
            const auto f_link = link_forward_pmf(dist, params);
            for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                double lhs = 0.0;
                for (int i = 0; i < f.size(); ++i) lhs += f[i] * std::pow(x, i);
                double rhs = 0.0;
                for (int j = 0; j <= dist.max_degree(); ++j) {
                    rhs += dist.pmf(j) * std::pow(gamma_eff * x + 1.0 - gamma_eff, j);
                }
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            double mean_f = 0.0;
            for (int i = 0; i < f.size(); ++i) mean_f += i * f[i];
            worst = std::max(worst, std::abs(mean_f - gamma_eff * m.mean_degree));
            double mean_link = 0.0;
            for (int i = 0; i < f_link.size(); ++i) mean_link += i * f_link[i];
            worst = std::max(worst, std::abs(mean_link - gamma_eff * m.mean_excess));
        }
    }
    pass = worst < 1e-9;
    report(2, pass, "generating-function identities",
           "worst deviation " + fmt(worst) + " over 3 distributions x 3 params x 5 points",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 3

void criterion_aiello() {
    Timer timer;
    const auto seq = aiello_degree_sequence(6.0, 1.0);
    const long n = long(seq.size());
    const int max_degree = seq.empty() ? 0 : seq.back();
    std::string detail = "N=" + std::to_string(n) + " max_degree=" + std::to_string(max_degree);
    bool pass = false;
    if (n == 2482 && max_degree == 403) {
        pass = true;
    } else if (std::abs(n - 2482) <= 0.01 * 2482 && max_degree == 403) {
        // close but not exact: pass loudly, never silently
        pass = true;
        detail += " FLAGGED: floor convention gives N within 1% of 2482 but not equal";
    } else {
        detail += " expected N=2482 max_degree=403";
    }
    report(3, pass, "aiello construction", detail, timer.seconds());
}

// ---------------------------------------------------------------- criterion 4

struct CorpusPoint {
    OverlayGraph graph;
    std::vector<std::uint8_t> subs;
    int publisher = 0;
    double gamma = 0.0;
};

std::vector<CorpusPoint> build_oracle_corpus(int count) {
    std::vector<CorpusPoint> corpus;
    Xoshiro256 rng(20240601);
    const double gammas[3] = {0.25, 0.5, 0.75};
    while (int(corpus.size()) < count) {
        const int n = 3 + int(rng.next_below(6));  // 3..8 nodes
        const int max_edges = n * (n - 1) / 2;
        const int m = std::min(max_edges, n - 1 + int(rng.next_below(4)));
        std::vector<std::pair<int, int>> edges;
        std::vector<std::uint8_t> adjacency(std::size_t(n) * std::size_t(n), 0);
        while (int(edges.size()) < m) {
            const int u = int(rng.next_below(std::uint64_t(n)));
            const int v = int(rng.next_below(std::uint64_t(n)));
            if (u == v || adjacency[std::size_t(u) * std::size_t(n) + std::size_t(v)]) continue;
            adjacency[std::size_t(u) * std::size_t(n) + std::size_t(v)] = 1;
            adjacency[std::size_t(v) * std::size_t(n) + std::size_t(u)] = 1;
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        CorpusPoint point;
        point.graph = OverlayGraph::from_edges(n, edges);
        point.subs = assign_subscriptions(n, 0.35, rng);
        point.publisher = int(rng.next_below(std::uint64_t(n)));
        point.gamma = gammas[corpus.size() % 3];
        int eligible = 0;
        for (int u = 0; u < n; ++u) {
            for (int v : point.graph.neighbors(u)) eligible += point.subs[std::size_t(v)] ? 0 : 1;
        }
        if (eligible > 20) continue;  // keep each enumeration cheap
        corpus.push_back(std::move(point));
    }
    return corpus;
}

void criterion_oracle_equivalence() {
    Timer timer;
    const auto corpus = build_oracle_corpus(50);
    const int trials = 100000;
    double worst_tv = 0.0;
    int worst_index = -1;
    for (int c = 0; c < int(corpus.size()); ++c) {
        const auto& point = corpus[std::size_t(c)];
        const int n = point.graph.num_nodes();
        const auto exact = smallgraph_oracle(point.graph, point.subs, point.publisher, point.gamma);
        const auto cache = subscription_phase(point.graph, point.subs);
        std::vector<double> sampled(std::size_t(n) + 1, 0.0);
        for (int t = 0; t < trials; ++t) {
            Xoshiro256 rng(derive_seed(555, std::uint64_t(c), std::uint64_t(t)));
            const auto result = disseminate(point.graph, cache, point.subs, point.publisher,
                                            point.gamma, kInfiniteTtl, rng);
            sampled[std::size_t(result.receivers)] += 1.0 / trials;
        }
        double tv = 0.0;
        for (std::size_t i = 0; i < sampled.size(); ++i) tv += std::abs(sampled[i] - exact[i]);
        tv /= 2.0;
        if (tv > worst_tv) {
            worst_tv = tv;
            worst_index = c;
        }
    }
    report(4, worst_tv < 0.02, "oracle equivalence",
           "worst TV distance " + fmt(worst_tv) + " (corpus point " +
               std::to_string(worst_index) + " of 50, 1e5 trials each, limit 0.02)",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 5

void criterion_subcritical_agreement() {
    Timer timer;
    ExperimentConfig config;
    config.topology = TopologySpec::parse("poisson:5");
    config.n = 10000;
    config.replicates = 20;
    config.events_per_network = 400;
    config.master_seed = 424242;
    // branching factors 0.25, 0.5, 0.75 => Gamma = 0.05, 0.10, 0.15, split
    // between sigma and gamma so both mechanisms are exercised
    struct Point {
        double sigma, gamma;
    };
    std::vector<Point> points;
    for (double gamma_eff : {0.05, 0.10, 0.15}) {
        const double sigma = gamma_eff * 0.4;
        points.push_back({sigma, (gamma_eff - sigma) / (1.0 - sigma)});
    }

    bool pass = true;
    std::string detail;
    for (const auto& point : points) {
        config.sigma_grid = {point.sigma};
        config.gamma_grid = {point.gamma};
        const auto result = run_sweep(config);
        const auto& row = result.rows.front();
        const double rel =
            std::abs(row.sim_mean_receivers - row.model_mean_receivers) / row.model_mean_receivers;
        if (!detail.empty()) detail += "; ";
        detail += "Gamma=" + fmt(CoverageParams(point.sigma, point.gamma).effective_prob()) +
                  " sim=" + fmt(row.sim_mean_receivers) + " model=" +
                  fmt(row.model_mean_receivers) + " rel=" + fmt(rel);
        if (!(rel < 0.15)) pass = false;
    }
    report(5, pass, "sub-critical model vs simulation", detail + " (limit 0.15)",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 6

void criterion_phase_transition() {
    Timer timer;
    ExperimentConfig config;
    config.topology = TopologySpec::parse("poisson:5");
    config.n = 10000;
    config.replicates = 20;
    config.events_per_network = 400;
    config.master_seed = 987654;
    config.gamma_grid = {0.1};
    for (int i = 0; i <= 25; ++i) config.sigma_grid.push_back(0.01 * i);

    const auto scan = phase_scan(config, VaryParam::Sigma);
    const double sigma_star = scan.analytic_threshold ? scan.analytic_threshold->value : -1.0;
    std::string detail = "analytic sigma*=" + fmt(sigma_star);
    bool pass = false;
    if (scan.empirical_transition) {
        const double measured = *scan.empirical_transition;
        pass = std::abs(measured - 1.0 / 9.0) <= 0.03;
        detail += " empirical transition (majority >10% coverage) at sigma=" + fmt(measured) +
                  ", |delta|=" + fmt(std::abs(measured - 1.0 / 9.0)) + " (limit 0.03)";
    } else {
        detail += " no grid point had a majority of events above 10% coverage";
    }
    report(6, pass, "phase transition location", detail, timer.seconds());
}

// ---------------------------------------------------------------- criterion 7

void criterion_scale_free_coverage() {
    Timer timer;
    ExperimentConfig config;
    config.topology = TopologySpec::parse("aiello:6:1");
    config.replicates = 20;
    config.events_per_network = 400;
    config.master_seed = 13579;

    bool pass = true;
    std::string detail;
    const std::pair<double, double> settings[2] = {{0.1, 0.6}, {0.6, 0.1}};
    for (const auto& [sigma, gamma] : settings) {
        config.sigma_grid = {sigma};
        config.gamma_grid = {gamma};
        const auto result = run_sweep(config);
        const auto& row = result.rows.front();
        if (!detail.empty()) detail += "; ";
        detail += "sigma=" + fmt(sigma) + " gamma=" + fmt(gamma) + " mean=" +
                  fmt(row.sim_mean_receivers) + "/" + std::to_string(row.n);
        if (!(row.sim_mean_receivers > 2200.0)) pass = false;
    }
    report(7, pass, "super-critical scale-free coverage", detail + " (require > 2200 of 2482)",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 8

void criterion_protocol_invariants() {
    Timer timer;
    Xoshiro256 rng(112233);
    long long cases = 0;
    long long violations = 0;
    const int kCases = 2000;  // per property; 5 properties = 1e4 cases

    const auto random_instance = [&rng](int min_n, int max_n) {
        const int n = min_n + int(rng.next_below(std::uint64_t(max_n - min_n + 1)));
        const double mean = 1.0 + rng.next_double() * 4.0;
        auto degrees = sample_degree_sequence(DegreeDistribution::poisson(mean), n, rng);
        // cap draws at n-1 so the sequence stays realizable on tiny graphs
        long long sum = 0;
        for (auto& d : degrees) {
            d = std::min(d, n - 1);
            sum += d;
        }
        if (sum % 2 != 0) {
            for (auto& d : degrees) {
                if (d < n - 1) {
                    ++d;
                    break;
                }
            }
        }
        return configuration_model(degrees, rng).graph;
    };

    // at-most-once + message bound
    for (int c = 0; c < kCases; ++c, ++cases) {
        const auto g = random_instance(5, 50);
        const auto subs = assign_subscriptions(g.num_nodes(), rng.next_double() * 0.5, rng);
        const auto cache = subscription_phase(g, subs);
        std::vector<std::uint8_t> received;
        const auto result = disseminate(g, cache, subs, int(rng.next_below(std::uint64_t(g.num_nodes()))),
                                        rng.next_double(), kInfiniteTtl, rng, &received);
        long long degree_sum = 0;
        int count = 0;
        for (int v = 0; v < g.num_nodes(); ++v) {
            if (received[std::size_t(v)]) {
                degree_sum += g.degree(v);
                ++count;
            }
        }
        if (result.receivers != count) ++violations;
        if (result.messages_sent > degree_sum - (result.receivers - 1)) ++violations;
    }

    // sender exclusion observable on a two-node subscriber pair embedded in the run above
    // is already covered by the message bound; here: explicit echo check
    for (int c = 0; c < kCases; ++c, ++cases) {
        const auto pair = OverlayGraph::from_edges(2, std::vector<std::pair<int, int>>{{0, 1}});
        const std::vector<std::uint8_t> subs{1, 1};
        const auto cache = subscription_phase(pair, subs);
        const auto result = disseminate(pair, cache, subs, int(rng.next_below(2)),
                                        rng.next_double(), kInfiniteTtl, rng);
        if (result.messages_sent != 1 || result.receivers != 2) ++violations;
    }

    // gamma-coupling monotonicity
    for (int c = 0; c < kCases; ++c, ++cases) {
        const auto g = random_instance(5, 50);
        const auto subs = assign_subscriptions(g.num_nodes(), 0.15, rng);
        const auto cache = subscription_phase(g, subs);
        const int publisher = int(rng.next_below(std::uint64_t(g.num_nodes())));
        const double low = rng.next_double() * 0.5;
        const double high = low + rng.next_double() * (1.0 - low);
        const std::uint64_t coupling = rng.next();
        std::vector<std::uint8_t> low_set, high_set;
        disseminate_coupled(g, cache, subs, publisher, low, kInfiniteTtl, coupling, &low_set);
        disseminate_coupled(g, cache, subs, publisher, high, kInfiniteTtl, coupling, &high_set);
        for (std::size_t v = 0; v < low_set.size(); ++v) {
            if (low_set[v] && !high_set[v]) ++violations;
        }
    }

    // infinite ttl == ttl n
    for (int c = 0; c < kCases; ++c, ++cases) {
        const auto g = random_instance(5, 50);
        const auto subs = assign_subscriptions(g.num_nodes(), 0.2, rng);
        const auto cache = subscription_phase(g, subs);
        const int publisher = int(rng.next_below(std::uint64_t(g.num_nodes())));
        const double gamma = rng.next_double();
        const std::uint64_t seed = rng.next();
        Xoshiro256 a(seed), b(seed);
        const auto inf_run = disseminate(g, cache, subs, publisher, gamma, kInfiniteTtl, a);
        const auto n_run = disseminate(g, cache, subs, publisher, gamma, g.num_nodes(), b);
        if (inf_run.receivers != n_run.receivers || inf_run.messages_sent != n_run.messages_sent ||
            inf_run.max_hops != n_run.max_hops ||
            inf_run.subscribers_reached != n_run.subscribers_reached) {
            ++violations;
        }
    }

    // subscriber guarantee
    for (int c = 0; c < kCases; ++c, ++cases) {
        const auto g = random_instance(5, 50);
        const auto subs = assign_subscriptions(g.num_nodes(), 0.3, rng);
        const auto cache = subscription_phase(g, subs);
        const int publisher = int(rng.next_below(std::uint64_t(g.num_nodes())));
        std::vector<std::uint8_t> received;
        disseminate(g, cache, subs, publisher, rng.next_double(), kInfiniteTtl, rng, &received);
        for (int v = 0; v < g.num_nodes(); ++v) {
            if (!subs[std::size_t(v)] || received[std::size_t(v)]) continue;
            for (int u : g.neighbors(v)) {
                if (received[std::size_t(u)]) ++violations;
            }
        }
    }

    report(8, violations == 0, "protocol invariant suite",
           std::to_string(cases) + " randomized cases, " + std::to_string(violations) +
               " violations",
           timer.seconds());
}

// ---------------------------------------------------------------- criterion 9

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_determinism() {
    Timer timer;
    const std::string dir = "acceptance_tmp";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        report(9, false, "sweep determinism", "could not create scratch directory", timer.seconds());
        return;
    }
    const std::string config_path = dir + "/sweep_config.json";
    {
        std::ofstream config(config_path);
        config << R"({
  "topology": "poisson:5",
  "n": 2000,
  "replicates": 3,
  "events_per_network": 50,
  "sigma_grid": [0.05, 0.1],
  "gamma_grid": [0.0, 0.1],
  "master_seed": 777,
  "ttl": "inf"
})";
    }

    bool pass = false;
    std::string detail;
    if (!cli_path.empty()) {
        const std::string out_a = dir + "/run_a.csv";
        const std::string out_b = dir + "/run_b.csv";
        const std::string base =
            "\"" + cli_path + "\" sweep --config " + config_path + " --out ";
        const int rc_a = std::system((base + out_a).c_str());
        const int rc_b = std::system((base + out_b).c_str());
        const std::string text_a = read_file(out_a);
        const std::string text_b = read_file(out_b);
        pass = rc_a == 0 && rc_b == 0 && !text_a.empty() && text_a == text_b;
        detail = "two CLI sweep runs, " + std::to_string(text_a.size()) + " bytes each, " +
                 (pass ? "byte-identical" : "DIFFER");
    } else {
        std::ifstream in(config_path);
        const auto config = ExperimentConfig::from_json(in);
        std::ostringstream a, b;
        emit_report(run_sweep(config).rows, a);
        emit_report(run_sweep(config).rows, b);
        pass = !a.str().empty() && a.str() == b.str();
        detail = "two in-process sweep runs (no CLI path provided), " +
                 std::string(pass ? "byte-identical" : "DIFFER");
    }
    report(9, pass, "sweep determinism", detail, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) cli_path = argv[1];
    criterion_closed_forms();
    criterion_generating_functions();
    criterion_aiello();
    criterion_oracle_equivalence();
    criterion_subcritical_agreement();
    criterion_phase_transition();
    criterion_scale_free_coverage();
    criterion_protocol_invariants();
    criterion_determinism();
    if (failures != 0) {
        std::printf("%d of 9 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
