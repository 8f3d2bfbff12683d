#include "pubsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pubsim/errors.hpp"
#include "pubsim/overlay.hpp"

namespace pubsim {

namespace {

// stream tags under the master seed (see rng.hpp)
constexpr std::uint64_t kNetworkStream = 1;
constexpr std::uint64_t kSubscriptionStream = 2;
constexpr std::uint64_t kEventStream = 3;

std::string format_double(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string format_ttl(int ttl) {
    return ttl == kInfiniteTtl ? "inf" : std::to_string(ttl);
}

int parse_ttl_text(const std::string& text) {
    if (text == "inf") return kInfiniteTtl;
    try {
        const int v = std::stoi(text);
        if (v != kInfiniteTtl && v < 1) throw ConfigError("ttl must be >= 1 or \"inf\"");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad ttl value: " + text);
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double to_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw ConfigError(std::string("bad ") + what + ": " + text);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(std::string("bad ") + what + ": " + text);
    }
}

int to_int(const std::string& text, const char* what) {
    const double v = to_double(text, what);
    if (v != std::floor(v)) throw ConfigError(std::string("bad ") + what + ": " + text);
    return int(v);
}

}  // namespace

TopologySpec TopologySpec::parse(const std::string& text) {
    const std::size_t sep = text.find(':');
    const std::string kind = text.substr(0, sep);
    TopologySpec spec;
    if (kind == "empirical") {
        if (sep == std::string::npos || sep + 1 >= text.size()) {
            throw ConfigError("empirical topology needs a degree file: empirical:<file>");
        }
        spec.kind = Kind::Empirical;
        spec.degrees_file = text.substr(sep + 1);
        return spec;
    }
    const auto args = sep == std::string::npos
                          ? std::vector<std::string>{}
                          : split(text.substr(sep + 1), ':');
    if (kind == "poisson") {
        if (args.size() != 1) throw ConfigError("poisson topology: poisson:<mean>");
        spec.kind = Kind::Poisson;
        spec.lambda = to_double(args[0], "poisson mean");
        return spec;
    }
    if (kind == "powerlaw") {
        if (args.empty() || args.size() > 3) {
            throw ConfigError("powerlaw topology: powerlaw:<exponent>[:<k_min>[:<k_max>]]");
        }
        spec.kind = Kind::PowerLaw;
        spec.lambda = to_double(args[0], "power-law exponent");
        if (args.size() >= 2) spec.k_min = to_int(args[1], "k_min");
        if (args.size() >= 3) spec.k_max = to_int(args[2], "k_max");
        return spec;
    }
    if (kind == "aiello") {
        if (args.size() != 2) throw ConfigError("aiello topology: aiello:<a>:<b>");
        spec.kind = Kind::Aiello;
        spec.a = to_double(args[0], "aiello a");
        spec.b = to_double(args[1], "aiello b");
        return spec;
    }
    throw ConfigError("unknown topology kind: " + kind);
}

std::string TopologySpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Poisson:
            out << "poisson:" << format_double(lambda);
            break;
        case Kind::PowerLaw:
            out << "powerlaw:" << format_double(lambda) << ':' << k_min << ':' << k_max;
            break;
        case Kind::Aiello:
            out << "aiello:" << format_double(a) << ':' << format_double(b);
            break;
        case Kind::Empirical:
            out << "empirical:" << degrees_file;
            break;
    }
    return out.str();
}

DegreeDistribution TopologySpec::make_distribution(int n_hint) const {
    switch (kind) {
        case Kind::Poisson:
            return DegreeDistribution::poisson(lambda);
        case Kind::PowerLaw: {
            int bound = k_max;
            if (bound <= 0) bound = n_hint > 0 ? int(std::ceil(std::sqrt(double(n_hint)))) : 1000;
            return DegreeDistribution::power_law(lambda, k_min, bound);
        }
        case Kind::Aiello:
            return DegreeDistribution::aiello(a, b);
        case Kind::Empirical: {
            std::ifstream in(degrees_file);
            if (!in) throw IoError("cannot open degree file: " + degrees_file);
            const auto degrees = read_degree_sequence(in);
            if (degrees.empty()) throw ConfigError("degree file is empty: " + degrees_file);
            return DegreeDistribution::from_degrees(degrees);
        }
    }
    throw ConfigError("bad topology kind");
}

std::vector<int> TopologySpec::degree_sequence(int n, Xoshiro256& rng) const {
    if (kind == Kind::Aiello) {
        auto degrees = aiello_degree_sequence(a, b);
        long long sum = 0;
        for (int d : degrees) sum += d;
        if (sum % 2 != 0) degrees[rng.next_below(degrees.size())] += 1;
        return degrees;
    }
    return sample_degree_sequence(make_distribution(n), n, rng);
}

ExperimentConfig ExperimentConfig::from_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    ExperimentConfig config;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "topology") {
                config.topology = TopologySpec::parse(value.get<std::string>());
            } else if (key == "n") {
                config.n = value.get<int>();
            } else if (key == "replicates") {
                config.replicates = value.get<int>();
            } else if (key == "events_per_network") {
                config.events_per_network = value.get<int>();
            } else if (key == "sigma_grid") {
                config.sigma_grid = value.get<std::vector<double>>();
            } else if (key == "gamma_grid") {
                config.gamma_grid = value.get<std::vector<double>>();
            } else if (key == "master_seed") {
                config.master_seed = value.get<std::uint64_t>();
            } else if (key == "ttl") {
                config.ttl = value.is_string() ? parse_ttl_text(value.get<std::string>())
                                               : parse_ttl_text(std::to_string(value.get<long long>()));
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return config;
}

void ExperimentConfig::validate() const {
    if (!topology.fixes_node_count() && n < 2) throw ConfigError("n must be >= 2");
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (events_per_network < 1) throw ConfigError("events_per_network must be >= 1");
    if (sigma_grid.empty() || gamma_grid.empty()) throw ConfigError("empty parameter grid");
    for (double s : sigma_grid) {
        if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("sigma grid value outside [0,1]");
    }
    for (double g : gamma_grid) {
        if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("gamma grid value outside [0,1]");
    }
    if (ttl != kInfiniteTtl && ttl < 1) throw ConfigError("ttl must be >= 1 or infinite");
}

namespace {

struct ReplicateNetwork {
    OverlayGraph graph;
    std::uint64_t seed = 0;
    int giant_size = 0;
};

std::vector<ReplicateNetwork> build_networks(const ExperimentConfig& config) {
    std::vector<ReplicateNetwork> networks;
    networks.reserve(std::size_t(config.replicates));
    for (int r = 0; r < config.replicates; ++r) {
        ReplicateNetwork net;
        net.seed = derive_seed(config.master_seed, kNetworkStream, std::uint64_t(r));
        Xoshiro256 rng(net.seed);
        const auto degrees = config.topology.degree_sequence(config.n, rng);
        net.graph = configuration_model(degrees, rng).graph;
        net.giant_size = giant_component(net.graph).size;
        networks.push_back(std::move(net));
    }
    return networks;
}

struct GridPointStats {
    double mean_receivers = 0.0;
    double mean_subscribers = 0.0;
    double stddev_receivers = 0.0;
    double fraction_big = 0.0;  // events covering > 10% of their network's giant component
    std::vector<PerNetworkRow> per_network;
};

GridPointStats evaluate_grid_point(const ExperimentConfig& config,
                                   const std::vector<ReplicateNetwork>& networks,
                                   std::uint64_t grid_index, double sigma, double gamma) {
    GridPointStats stats;
    double sum = 0.0, sum_sq = 0.0, subs_sum = 0.0;
    long long count = 0, big = 0;
    for (int r = 0; r < int(networks.size()); ++r) {
        const auto& net = networks[std::size_t(r)];
        const int n = net.graph.num_nodes();
        Xoshiro256 subs_rng(
            derive_seed(config.master_seed, kSubscriptionStream, grid_index, std::uint64_t(r)));
        const auto subs = assign_subscriptions(n, sigma, subs_rng);
        const auto cache = subscription_phase(net.graph, subs);

        double net_sum = 0.0, net_subs = 0.0;
        for (int e = 0; e < config.events_per_network; ++e) {
            Xoshiro256 event_rng(derive_seed(config.master_seed, kEventStream, grid_index,
                                             std::uint64_t(r), std::uint64_t(e)));
            const int publisher = int(event_rng.next_below(std::uint64_t(n)));
            const auto result =
                disseminate(net.graph, cache, subs, publisher, gamma, config.ttl, event_rng);
            sum += result.receivers;
            sum_sq += double(result.receivers) * result.receivers;
            subs_sum += result.subscribers_reached;
            net_sum += result.receivers;
            net_subs += result.subscribers_reached;
            ++count;
            if (result.receivers > 0.1 * net.giant_size) ++big;
        }
        PerNetworkRow row;
        row.sigma = sigma;
        row.gamma = gamma;
        row.network_id = r;
        row.network_seed = net.seed;
        row.giant_component = net.giant_size;
        row.mean_receivers = net_sum / config.events_per_network;
        row.mean_subscribers = net_subs / config.events_per_network;
        stats.per_network.push_back(row);
    }
    stats.mean_receivers = sum / double(count);
    stats.mean_subscribers = subs_sum / double(count);
    if (count > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / double(count)) / double(count - 1));
        stats.stddev_receivers = std::sqrt(var);
    }
    stats.fraction_big = double(big) / double(count);
    return stats;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();
    const auto networks = build_networks(config);
    const int n_actual = networks.front().graph.num_nodes();
    const auto dist = config.topology.make_distribution(config.n);
    double giant_mean = 0.0;
    for (const auto& net : networks) giant_mean += net.giant_size;
    giant_mean /= double(networks.size());

    SweepResult result;
    std::uint64_t grid_index = 0;
    for (double sigma : config.sigma_grid) {
        for (double gamma : config.gamma_grid) {
            const auto stats = evaluate_grid_point(config, networks, grid_index, sigma, gamma);
            const auto prediction = predict(dist, CoverageParams(sigma, gamma));

            SweepRow row;
            row.topology = config.topology.to_string();
            row.n = n_actual;
            row.replicates = config.replicates;
            row.events = config.events_per_network;
            row.seed = config.master_seed;
            row.ttl = config.ttl;
            row.sigma = sigma;
            row.gamma = gamma;
            row.sim_mean_receivers = stats.mean_receivers;
            row.sim_mean_subscribers = stats.mean_subscribers;
            row.sim_stddev_receivers = stats.stddev_receivers;
            row.model_mean_receivers = prediction.mean_receivers;
            row.model_divergent = prediction.divergent;
            row.giant_component_mean = giant_mean;
            result.rows.push_back(std::move(row));
            result.per_network.insert(result.per_network.end(), stats.per_network.begin(),
                                      stats.per_network.end());
            ++grid_index;
        }
    }
    return result;
}

namespace {
constexpr const char* kReportHeader =
    "topology,n,replicates,events,seed,ttl,sigma,gamma,sim_mean_receivers,"
    "sim_mean_subscribers,sim_stddev_receivers,model_mean_receivers,model_divergent,"
    "giant_component_mean";
}

void emit_report(std::span<const SweepRow> rows, std::ostream& out) {
    if (rows.empty()) throw IoError("no sweep rows to report");
    out << kReportHeader << '\n';
    for (const auto& row : rows) {
        out << row.topology << ',' << row.n << ',' << row.replicates << ',' << row.events << ','
            << row.seed << ',' << format_ttl(row.ttl) << ',' << format_double(row.sigma) << ','
            << format_double(row.gamma) << ',' << format_double(row.sim_mean_receivers) << ','
            << format_double(row.sim_mean_subscribers) << ','
            << format_double(row.sim_stddev_receivers) << ','
            << (row.model_divergent ? "inf" : format_double(row.model_mean_receivers)) << ','
            << (row.model_divergent ? 1 : 0) << ',' << format_double(row.giant_component_mean)
            << '\n';
    }
    if (!out) throw IoError("failed writing sweep report");
}

std::vector<SweepRow> parse_report(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError("missing report header", 1);
    ++line_no;
    if (line != kReportHeader) throw ParseError("unexpected report header", 1);
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 14) throw ParseError("expected 14 columns", line_no);
        SweepRow row;
        try {
            row.topology = fields[0];
            row.n = std::stoi(fields[1]);
            row.replicates = std::stoi(fields[2]);
            row.events = std::stoi(fields[3]);
            row.seed = std::stoull(fields[4]);
            row.ttl = fields[5] == "inf" ? kInfiniteTtl : std::stoi(fields[5]);
            row.sigma = std::stod(fields[6]);
            row.gamma = std::stod(fields[7]);
            row.sim_mean_receivers = std::stod(fields[8]);
            row.sim_mean_subscribers = std::stod(fields[9]);
            row.sim_stddev_receivers = std::stod(fields[10]);
            row.model_divergent = std::stoi(fields[12]) != 0;
            row.model_mean_receivers = fields[11] == "inf"
                                           ? std::numeric_limits<double>::infinity()
                                           : std::stod(fields[11]);
            row.giant_component_mean = std::stod(fields[13]);
        } catch (const std::exception&) {
            throw ParseError("bad report row", line_no);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_per_network(std::span<const PerNetworkRow> rows, std::ostream& out) {
    if (rows.empty()) throw IoError("no per-network rows to report");
    out << "sigma,gamma,network_id,network_seed,giant_component,mean_receivers,mean_subscribers\n";
    for (const auto& row : rows) {
        out << format_double(row.sigma) << ',' << format_double(row.gamma) << ','
            << row.network_id << ',' << row.network_seed << ',' << row.giant_component << ','
            << format_double(row.mean_receivers) << ',' << format_double(row.mean_subscribers)
            << '\n';
    }
    if (!out) throw IoError("failed writing per-network report");
}

PhaseScanResult phase_scan(const ExperimentConfig& config, VaryParam varied) {
    config.validate();
    const auto& grid = varied == VaryParam::Sigma ? config.sigma_grid : config.gamma_grid;
    const auto& other = varied == VaryParam::Sigma ? config.gamma_grid : config.sigma_grid;
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw ConfigError("phase scan grid must be monotone");
    }
    const double fixed = other.front();

    const auto networks = build_networks(config);
    const auto dist = config.topology.make_distribution(config.n);

    PhaseScanResult scan;
    scan.varied = varied;
    scan.fixed_value = fixed;
    scan.analytic_threshold =
        varied == VaryParam::Sigma ? solve_sigma(dist, fixed) : solve_gamma(dist, fixed);

    for (std::uint64_t i = 0; i < grid.size(); ++i) {
        const double value = grid[i];
        const double sigma = varied == VaryParam::Sigma ? value : fixed;
        const double gamma = varied == VaryParam::Sigma ? fixed : value;
        const auto stats = evaluate_grid_point(config, networks, i, sigma, gamma);
        scan.points.push_back({value, stats.fraction_big, stats.mean_receivers});
        if (!scan.empirical_transition && stats.fraction_big > 0.5) {
            scan.empirical_transition = value;
        }
    }
    return scan;
}

void emit_phase_report(const PhaseScanResult& scan, std::ostream& out) {
    const char* name = scan.varied == VaryParam::Sigma ? "sigma" : "gamma";
    out << name << ",fraction_big,mean_receivers\n";
    for (const auto& point : scan.points) {
        out << format_double(point.value) << ',' << format_double(point.fraction_big) << ','
            << format_double(point.mean_receivers) << '\n';
    }
    out << "# fixed " << (scan.varied == VaryParam::Sigma ? "gamma" : "sigma") << ' '
        << format_double(scan.fixed_value) << '\n';
    if (scan.empirical_transition) {
        out << "# empirical_transition " << format_double(*scan.empirical_transition) << '\n';
    } else {
        out << "# empirical_transition none\n";
    }
    if (scan.analytic_threshold) {
        out << "# analytic_" << name << "_star " << format_double(scan.analytic_threshold->value)
            << (scan.analytic_threshold->clamped ? " (clamped)" : "") << '\n';
    } else {
        out << "# analytic_" << name << "_star none (no giant component possible)\n";
    }
    if (!out) throw IoError("failed writing phase report");
}

}  // namespace pubsim
