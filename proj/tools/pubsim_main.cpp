// Command-line front end: analytic predictions, overlay generation, single
// simulations, parameter sweeps and the exact small-graph oracle.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pubsim/coverage_model.hpp"
#include "pubsim/degree_dist.hpp"
#include "pubsim/errors.hpp"
#include "pubsim/harness.hpp"
#include "pubsim/overlay.hpp"
#include "pubsim/sim.hpp"

namespace {

using namespace pubsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string format6(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int parse_ttl_flag(const std::string& text) {
    if (text == "inf") return kInfiniteTtl;
    try {
        const int v = std::stoi(text);
        if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("--ttl expects a positive hop count or \"inf\"");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

// stdout unless --out was given
struct OutputTarget {
    std::string path;
    std::ofstream file;
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) file = open_output(path);
        return file;
    }
};

OverlayGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path);
    return read_edge_list(in);
}

struct AnalyticOptions {
    std::string topology;
    int n = 0;
    std::vector<double> sigma{0.0};
    std::vector<double> gamma{0.0};
    bool solve_threshold = false;
    OutputTarget out;
};

int run_analytic(AnalyticOptions& opt) {
    const auto dist = TopologySpec::parse(opt.topology).make_distribution(opt.n);
    auto& os = opt.out.stream();
    if (opt.solve_threshold) {
        os << "quantity,value,clamped\n";
        const auto star = threshold_gamma_eff(dist);
        os << "gamma_eff_star," << (star ? format6(*star) : "none") << ",0\n";
        for (double g : opt.gamma) {
            const auto s = solve_sigma(dist, g);
            os << "sigma_star(gamma=" << format6(g) << "),"
               << (s ? format6(s->value) : "none") << ',' << (s && s->clamped ? 1 : 0) << '\n';
        }
        for (double s : opt.sigma) {
            const auto g = solve_gamma(dist, s);
            os << "gamma_star(sigma=" << format6(s) << "),"
               << (g ? format6(g->value) : "none") << ',' << (g && g->clamped ? 1 : 0) << '\n';
        }
        return kExitOk;
    }
    os << "sigma,gamma,gamma_eff,mean_receivers,mean_subscribers,branching_factor\n";
    for (double s : opt.sigma) {
        for (double g : opt.gamma) {
            const CoverageParams params(s, g);
            const auto pred = predict(dist, params);
            os << format6(s) << ',' << format6(g) << ',' << format6(params.effective_prob())
               << ',' << (pred.divergent ? "inf" : format6(pred.mean_receivers)) << ','
               << format6(pred.mean_subscribers) << ',' << format6(pred.branching_factor)
               << '\n';
        }
    }
    return kExitOk;
}

struct GenerateOptions {
    std::string topology;
    int n = 10000;
    std::uint64_t seed = 1;
    std::string out_path;
};

int run_generate(GenerateOptions& opt) {
    const auto spec = TopologySpec::parse(opt.topology);
    // network stream 0 under the master seed, same as simulate --topology
    Xoshiro256 rng(derive_seed(opt.seed, 1, 0));
    const auto degrees = spec.degree_sequence(opt.n, rng);
    const auto built = configuration_model(degrees, rng);
    const auto giant = giant_component(built.graph);

    auto out = open_output(opt.out_path);
    write_edge_list(built.graph, out);
    if (!out) throw IoError("failed writing edge list: " + opt.out_path);

    std::cout << "seed,n,edges,discarded_stubs,giant_component_size\n"
              << opt.seed << ',' << built.graph.num_nodes() << ',' << built.graph.num_edges()
              << ',' << built.discarded_stubs << ',' << giant.size << '\n';
    return kExitOk;
}

struct SimulateOptions {
    std::string graph_path;
    std::string topology;
    int n = 10000;
    double sigma = 0.0;
    double gamma = 0.0;
    int events = 1;
    std::uint64_t seed = 1;
    std::string ttl_text = "inf";
    OutputTarget out;
};

int run_simulate(SimulateOptions& opt) {
    const int ttl = parse_ttl_flag(opt.ttl_text);
    OverlayGraph graph;
    if (!opt.graph_path.empty()) {
        graph = load_graph(opt.graph_path);
    } else if (!opt.topology.empty()) {
        Xoshiro256 rng(derive_seed(opt.seed, 1, 0));
        const auto degrees = TopologySpec::parse(opt.topology).degree_sequence(opt.n, rng);
        graph = configuration_model(degrees, rng).graph;
    } else {
        throw ConfigError("simulate needs --graph or --topology");
    }
    const int n = graph.num_nodes();
    if (n < 1) throw ConfigError("empty graph");

    // same stream layout as the sweep harness, grid point 0, network 0
    Xoshiro256 subs_rng(derive_seed(opt.seed, 2, 0, 0));
    const auto subs = assign_subscriptions(n, opt.sigma, subs_rng);
    const auto cache = subscription_phase(graph, subs);

    auto& os = opt.out.stream();
    os << "network_id,event_id,publisher,sigma,gamma,ttl,receivers,subscribers_reached,"
          "messages_sent,max_hops\n";
    for (int e = 0; e < opt.events; ++e) {
        Xoshiro256 event_rng(derive_seed(opt.seed, 3, 0, 0, std::uint64_t(e)));
        const int publisher = int(event_rng.next_below(std::uint64_t(n)));
        const auto result = disseminate(graph, cache, subs, publisher, opt.gamma, ttl, event_rng);
        os << 0 << ',' << e << ',' << publisher << ',' << format6(opt.sigma) << ','
           << format6(opt.gamma) << ',' << (ttl == kInfiniteTtl ? "inf" : std::to_string(ttl))
           << ',' << result.receivers << ',' << result.subscribers_reached << ','
           << result.messages_sent << ',' << result.max_hops << '\n';
    }
    return kExitOk;
}

struct SweepOptions {
    std::string config_path;
    std::string topology;
    std::optional<int> n;
    std::optional<int> replicates;
    std::optional<int> events;
    std::vector<double> sigma;
    std::vector<double> gamma;
    std::optional<std::uint64_t> seed;
    std::string ttl_text;
    OutputTarget out;
    std::string per_network_path;
    bool phase_sigma = false;
    bool phase_gamma = false;
};

int run_sweep_cmd(SweepOptions& opt) {
    ExperimentConfig config;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw IoError("cannot open config file: " + opt.config_path);
        config = ExperimentConfig::from_json(in);
    }
    if (!opt.topology.empty()) config.topology = TopologySpec::parse(opt.topology);
    if (opt.n) config.n = *opt.n;
    if (opt.replicates) config.replicates = *opt.replicates;
    if (opt.events) config.events_per_network = *opt.events;
    if (!opt.sigma.empty()) config.sigma_grid = opt.sigma;
    if (!opt.gamma.empty()) config.gamma_grid = opt.gamma;
    if (opt.seed) config.master_seed = *opt.seed;
    if (!opt.ttl_text.empty()) config.ttl = parse_ttl_flag(opt.ttl_text);
    config.validate();

    if (opt.phase_sigma || opt.phase_gamma) {
        if (opt.phase_sigma && opt.phase_gamma) {
            throw ConfigError("choose one of --phase-sigma / --phase-gamma");
        }
        const auto scan =
            phase_scan(config, opt.phase_sigma ? VaryParam::Sigma : VaryParam::Gamma);
        emit_phase_report(scan, opt.out.stream());
        return kExitOk;
    }

    const auto result = run_sweep(config);
    emit_report(result.rows, opt.out.stream());
    if (!opt.per_network_path.empty()) {
        auto out = open_output(opt.per_network_path);
        emit_per_network(result.per_network, out);
    }
    return kExitOk;
}

struct OracleOptions {
    std::string graph_path;
    std::vector<int> subscribers;
    int publisher = 0;
    double gamma = 0.0;
    OutputTarget out;
};

int run_oracle(OracleOptions& opt) {
    const auto graph = load_graph(opt.graph_path);
    std::vector<std::uint8_t> subs(std::size_t(graph.num_nodes()), 0);
    for (int v : opt.subscribers) {
        if (v < 0 || v >= graph.num_nodes()) throw ConfigError("subscriber id out of range");
        subs[std::size_t(v)] = 1;
    }
    const auto pmf = smallgraph_oracle(graph, subs, opt.publisher, opt.gamma);
    auto& os = opt.out.stream();
    os << "receivers,probability\n";
    for (std::size_t i = 1; i < pmf.size(); ++i) {
        os << i << ',' << format6(pmf[i]) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gossip publish-subscribe overlay simulator"};
    app.require_subcommand(1);

    AnalyticOptions analytic_opt;
    auto* analytic = app.add_subcommand("analytic", "coverage predictions and thresholds");
    analytic->add_option("--topology", analytic_opt.topology, "degree distribution")->required();
    analytic->add_option("--n", analytic_opt.n, "network size hint (power-law cutoff)");
    analytic->add_option("--sigma", analytic_opt.sigma, "subscription probabilities");
    analytic->add_option("--gamma", analytic_opt.gamma, "gossip probabilities");
    analytic->add_flag("--solve-threshold", analytic_opt.solve_threshold,
                       "print percolation thresholds instead of predictions");
    analytic->add_option("--out", analytic_opt.out.path, "output CSV (default stdout)");

    GenerateOptions generate_opt;
    auto* generate = app.add_subcommand("generate", "build one overlay, write its edge list");
    generate->add_option("--topology", generate_opt.topology, "degree distribution")->required();
    generate->add_option("--n", generate_opt.n, "node count (ignored for aiello)");
    generate->add_option("--seed", generate_opt.seed, "construction seed");
    generate->add_option("--out", generate_opt.out_path, "edge list file")->required();

    SimulateOptions simulate_opt;
    auto* simulate = app.add_subcommand("simulate", "disseminate events on one network");
    simulate->add_option("--graph", simulate_opt.graph_path, "edge list file");
    simulate->add_option("--topology", simulate_opt.topology, "degree distribution");
    simulate->add_option("--n", simulate_opt.n, "node count (ignored for aiello)");
    simulate->add_option("--sigma", simulate_opt.sigma, "subscription probability")->required();
    simulate->add_option("--gamma", simulate_opt.gamma, "gossip probability")->required();
    simulate->add_option("--events", simulate_opt.events, "events to publish");
    simulate->add_option("--seed", simulate_opt.seed, "master seed");
    simulate->add_option("--ttl", simulate_opt.ttl_text, "hop budget or \"inf\"");
    simulate->add_option("--out", simulate_opt.out.path, "output CSV (default stdout)");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "full (sigma, gamma) grid, model vs simulation");
    sweep->add_option("--config", sweep_opt.config_path, "JSON config file");
    sweep->add_option("--topology", sweep_opt.topology, "degree distribution");
    sweep->add_option("--n", sweep_opt.n, "node count");
    sweep->add_option("--replicates", sweep_opt.replicates, "independent networks");
    sweep->add_option("--events", sweep_opt.events, "events per network");
    sweep->add_option("--sigma", sweep_opt.sigma, "sigma grid");
    sweep->add_option("--gamma", sweep_opt.gamma, "gamma grid");
    sweep->add_option("--seed", sweep_opt.seed, "master seed");
    sweep->add_option("--ttl", sweep_opt.ttl_text, "hop budget or \"inf\"");
    sweep->add_option("--out", sweep_opt.out.path, "report CSV (default stdout)");
    sweep->add_option("--per-network-out", sweep_opt.per_network_path, "per-network CSV");
    sweep->add_flag("--phase-sigma", sweep_opt.phase_sigma, "phase scan over the sigma grid");
    sweep->add_flag("--phase-gamma", sweep_opt.phase_gamma, "phase scan over the gamma grid");

    OracleOptions oracle_opt;
    auto* oracle = app.add_subcommand("oracle", "exact receiver distribution on a small graph");
    oracle->add_option("--graph", oracle_opt.graph_path, "edge list file")->required();
    oracle->add_option("--subscribers", oracle_opt.subscribers, "subscriber node ids");
    oracle->add_option("--publisher", oracle_opt.publisher, "publishing node")->required();
    oracle->add_option("--gamma", oracle_opt.gamma, "gossip probability")->required();
    oracle->add_option("--out", oracle_opt.out.path, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (analytic->parsed()) return run_analytic(analytic_opt);
        if (generate->parsed()) return run_generate(generate_opt);
        if (simulate->parsed()) return run_simulate(simulate_opt);
        if (sweep->parsed()) return run_sweep_cmd(sweep_opt);
        if (oracle->parsed()) return run_oracle(oracle_opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
