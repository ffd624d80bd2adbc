// detwalk: deterministic-random-walk experiment harness.
// Subcommands: analyze | simulate | cover | sweep.
// Exit codes: 0 success, 1 usage, 2 chain precondition failure,
// 3 bound violation, 4 horizon exhaustion.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "detwalk/bounds.hpp"
#include "detwalk/builders.hpp"
#include "detwalk/walk.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace detwalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitChain = 2;
constexpr int kExitBound = 3;
constexpr int kExitHorizon = 4;

constexpr double kBoundSlack = 1e-6;
constexpr double kFreqSlack = 1e-9;

struct ExperimentConfig {
    std::string graph_path;
    std::string matrix_path;
    std::string gen_kind;
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;

    std::string chain = "simple";
    double alpha = 0.5;
    double beta = 0.5;

    long k = 1;
    std::string place = "single:0";

    long steps = 0;
    long tmax = 100000;

    std::string out_dir;
    bool audit_identity = false;
    bool dump_flows = false;
    bool dump_emissions = false;
    std::string tie_order = "asc";
    std::string eps_list = "0.25";

    std::string sweep_k;
    std::string sweep_t;
    std::string sweep_n;
};

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string cell;
    while (std::getline(in, cell, ','))
        if (!cell.empty()) out.push_back(std::stod(cell));
    return out;
}

std::vector<long> parse_longs(const std::string& csv) {
    std::vector<long> out;
    std::istringstream in(csv);
    std::string cell;
    while (std::getline(in, cell, ','))
        if (!cell.empty()) out.push_back(std::stol(cell));
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

struct Chain {
    TransitionMatrix P;
    std::optional<Graph> G;
    std::string description;
};

Chain build_chain(const ExperimentConfig& cfg) {
    if (!cfg.matrix_path.empty())
        return {load_matrix(cfg.matrix_path), std::nullopt,
                "matrix:" + cfg.matrix_path};

    Graph G = !cfg.graph_path.empty()
                  ? load_graph(cfg.graph_path)
                  : generate(graph_kind_from_string(cfg.gen_kind),
                             {.n = cfg.n, .p = cfg.p, .seed = cfg.seed});
    if (!G.connected) throw BadParams("graph is not connected");

    TransitionMatrix P = [&] {
        if (cfg.chain == "simple") return simple_rw(G);
        if (cfg.chain == "lazy") return lazy_rw(G, cfg.alpha);
        if (cfg.chain == "metropolis") return metropolis(G);
        if (cfg.chain == "beta") return beta_rw(G, cfg.beta);
        throw BadParams("unknown chain kind: " + cfg.chain);
    }();
    const std::string gdesc = !cfg.graph_path.empty()
                                  ? "graph:" + cfg.graph_path
                                  : cfg.gen_kind + std::to_string(G.n);
    return {std::move(P), std::move(G), gdesc + "/" + cfg.chain};
}

// Exit 2 with a diagnostic naming the failed check.
void require_ergodic(const TransitionMatrix& P, const std::string& chain) {
    if (!check_irreducible(P)) {
        std::cerr << "chain precondition failed: irreducibility\n";
        std::exit(kExitChain);
    }
    if (!check_aperiodic(P)) {
        std::cerr << "chain precondition failed: aperiodicity";
        if (chain == "simple")
            std::cerr << " (bipartite graph; try --chain lazy)";
        std::cerr << "\n";
        std::exit(kExitChain);
    }
}

VectorI resolve_placement(const ExperimentConfig& cfg, int n) {
    VectorI mu0 = VectorI::Zero(n);
    if (cfg.place.rfind("single:", 0) == 0) {
        const int v = std::stoi(cfg.place.substr(7));
        if (v < 0 || v >= n) throw BadParams("placement vertex out of range");
        mu0(v) = cfg.k;
    } else if (cfg.place == "uniform") {
        for (int v = 0; v < n; ++v)
            mu0(v) = cfg.k / n + (v < cfg.k % n ? 1 : 0);
    } else if (cfg.place.rfind("file:", 0) == 0) {
        std::ifstream in(cfg.place.substr(5));
        if (!in) throw ParseError("cannot open placement file");
        long c;
        int v = 0;
        while (in >> c) {
            if (v >= n) throw BadParams("placement file longer than n");
            mu0(v++) = c;
        }
        if (mu0.sum() != cfg.k)
            throw BadParams("placement file does not sum to k");
    } else {
        throw BadParams("bad --place (single:V | uniform | file:PATH)");
    }
    return mu0;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& body) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << body;
}

void write_meta(const ExperimentConfig& cfg, const std::string& command) {
    if (cfg.out_dir.empty()) return;
    json meta;
    meta["command"] = command;
    meta["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    write_file(cfg.out_dir, "meta.json", meta.dump(2) + "\n");
}

json profile_to_json(const MixingProfile& prof) {
    json j;
    j["t_star"] = prof.t_star;
    j["complete"] = prof.complete;
    j["tv_curve"] = prof.tv_curve;
    j["d_bar_curve"] = prof.d_bar_curve;
    j["separation_curve"] = prof.separation_curve;
    json taus = json::object();
    for (auto [eps, tau] : prof.tau) taus[fmt(eps)] = tau;
    j["tau"] = taus;
    return j;
}

int cmd_analyze(const ExperimentConfig& cfg) {
    Chain chain = build_chain(cfg);
    require_ergodic(chain.P, cfg.chain);
    const Vector pi = stationary_distribution(chain.P);
    const bool reversible = check_reversible(chain.P, pi);
    const auto prof =
        mixing_profile(chain.P, pi, cfg.tmax, parse_doubles(cfg.eps_list));

    json report;
    report["chain"] = chain.description;
    report["n"] = chain.P.n;
    if (chain.G) report["m"] = chain.G->m;
    report["ergodic"] = true;
    report["reversible"] = reversible;
    std::vector<std::string> pi17;
    for (int v = 0; v < chain.P.n; ++v) pi17.push_back(fmt(pi(v)));
    report["pi"] = pi17;
    report["m_prime"] = bounds::m_prime(chain.P, pi);
    report["mixing"] = profile_to_json(prof);
    if (!chain.P.warnings.empty()) report["warnings"] = chain.P.warnings;

    std::cout << report.dump(2) << "\n";
    write_file(cfg.out_dir, "analyze.json", report.dump(2) + "\n");
    write_meta(cfg, "analyze");
    return prof.complete ? kExitOk : kExitHorizon;
}

Walk make_walk(const ExperimentConfig& cfg, const Chain& chain) {
    WalkOptions opts;
    opts.tie = cfg.tie_order == "desc" ? TieOrder::Descending
                                       : TieOrder::Ascending;
    opts.retain_history = cfg.audit_identity;
    return Walk(chain.P, resolve_placement(cfg, chain.P.n), opts);
}

int cmd_simulate(const ExperimentConfig& cfg) {
    if (cfg.steps < 1) throw BadParams("simulate requires --steps T >= 1");
    Chain chain = build_chain(cfg);
    require_ergodic(chain.P, cfg.chain);
    const Vector pi = stationary_distribution(chain.P);
    const bool reversible = check_reversible(chain.P, pi);
    const auto prof = mixing_profile(chain.P, pi, cfg.tmax);
    if (prof.t_star < 0) {
        std::cerr << "t* not reached within --tmax\n";
        return kExitHorizon;
    }
    const double ts = static_cast<double>(prof.t_star);
    const double mp = bounds::m_prime(chain.P, pi);

    Walk W = make_walk(cfg, chain);

    std::ostringstream flows;
    if (cfg.dump_flows) flows << "t,v,chi,X,mu,M\n";
    std::ostringstream emissions;
    if (cfg.dump_emissions)
        W.router().trace = [&](int v, std::int64_t i, int u) {
            emissions << v << " " << i << " " << u << "\n";
        };

    for (long t = 0; t < cfg.steps; ++t) {
        if (cfg.dump_flows)
            for (int v = 0; v < chain.P.n; ++v)
                flows << W.time() << "," << v << "," << W.chi()(v) << ","
                      << W.visits()(v) << "," << fmt(W.mu()(v)) << ","
                      << fmt(W.expected_visits()(v)) << "\n";
        W.step();
    }

    const double T = static_cast<double>(cfg.steps);
    const double k = static_cast<double>(W.tokens());
    const Vector gap = W.visit_discrepancy();
    const Vector freq_err = W.frequency_error(pi);

    std::ostringstream csv;
    csv << "vertex,X,M,abs_gap,visit_bound,visit_margin,"
           "freq_err,freq_bound,freq_margin\n";
    bool violated = false;
    double worst_visit_margin = std::numeric_limits<double>::infinity();
    double worst_freq_margin = std::numeric_limits<double>::infinity();
    for (int w = 0; w < chain.P.n; ++w) {
        const double vb = bounds::visit_bound(pi(w), ts, mp);
        const double fb = bounds::frequency_bound(ts, T, pi(w), mp, k);
        const double vm = vb + kBoundSlack - gap(w);
        const double fm = fb + kFreqSlack - freq_err(w);
        worst_visit_margin = std::min(worst_visit_margin, vm);
        worst_freq_margin = std::min(worst_freq_margin, fm);
        if (reversible && (vm < 0.0 || fm < 0.0)) violated = true;
        csv << w << "," << W.visits()(w) << "," << fmt(W.expected_visits()(w))
            << "," << fmt(gap(w)) << "," << fmt(vb) << "," << fmt(vm) << ","
            << fmt(freq_err(w)) << "," << fmt(fb) << "," << fmt(fm) << "\n";
    }

    json summary;
    summary["chain"] = chain.description;
    summary["k"] = W.tokens();
    summary["T"] = cfg.steps;
    summary["t_star"] = prof.t_star;
    summary["m_prime"] = mp;
    summary["reversible"] = reversible;
    summary["bounds_asserted"] = reversible;
    if (!reversible)
        summary["bounds_skipped_reason"] = "P is not reversible (Thm 3.1 "
                                           "hypothesis)";
    summary["max_abs_gap"] = gap.maxCoeff();
    summary["max_flow_discrepancy"] = W.max_flow_discrepancy();
    summary["worst_visit_margin"] = worst_visit_margin;
    summary["worst_freq_margin"] = worst_freq_margin;
    summary["violated"] = violated;
    if (cfg.audit_identity) {
        summary["identity_residual_step"] = identity_residual_step(W, pi);
        summary["identity_residual_cumulative"] =
            identity_residual_cumulative(W, pi);
    }

    std::cout << summary.dump(2) << "\n";
    write_file(cfg.out_dir, "simulate.csv", csv.str());
    write_file(cfg.out_dir, "simulate.json", summary.dump(2) + "\n");
    if (cfg.dump_flows) write_file(cfg.out_dir, "flows.csv", flows.str());
    if (cfg.dump_emissions)
        write_file(cfg.out_dir, "emissions.txt", emissions.str());
    write_meta(cfg, "simulate");
    return violated ? kExitBound : kExitOk;
}

int cmd_cover(const ExperimentConfig& cfg) {
    Chain chain = build_chain(cfg);
    require_ergodic(chain.P, cfg.chain);
    const Vector pi = stationary_distribution(chain.P);
    const bool reversible = check_reversible(chain.P, pi);
    const auto prof = mixing_profile(chain.P, pi, cfg.tmax);
    if (prof.t_star < 0) {
        std::cerr << "t* not reached within --tmax\n";
        return kExitHorizon;
    }
    const double ts = static_cast<double>(prof.t_star);
    const double mp = bounds::m_prime(chain.P, pi);
    const double bound = bounds::cover_bound(ts, mp, static_cast<double>(cfg.k));

    const long horizon =
        cfg.steps > 0 ? cfg.steps : static_cast<long>(std::ceil(bound)) + 1;
    Walk W = make_walk(cfg, chain);
    const auto rep = cover_time(W, horizon);

    std::ostringstream csv;
    csv << "vertex,first_visit\n";
    for (int v = 0; v < chain.P.n; ++v)
        csv << v << "," << rep.first_visit[v] << "\n";

    json summary;
    summary["chain"] = chain.description;
    summary["k"] = cfg.k;
    summary["t_star"] = prof.t_star;
    summary["m_prime"] = mp;
    summary["reversible"] = reversible;
    summary["covered"] = rep.covered;
    summary["horizon"] = horizon;
    summary["cover_bound"] = bound;
    if (chain.G) {
        summary["m"] = chain.G->m;
        if (cfg.chain == "simple")
            summary["rotor_cover_bound"] = bounds::rotor_cover_bound(
                ts, static_cast<double>(chain.G->m),
                static_cast<double>(cfg.k));
    }
    if (rep.covered) {
        summary["t_cover"] = rep.t_cover;
        summary["ratio"] = static_cast<double>(rep.t_cover) / bound;
    }

    std::cout << summary.dump(2) << "\n";
    write_file(cfg.out_dir, "cover.csv", csv.str());
    write_file(cfg.out_dir, "cover.json", summary.dump(2) + "\n");
    write_meta(cfg, "cover");

    if (!rep.covered) return kExitHorizon;
    if (reversible && static_cast<double>(rep.t_cover) > bound)
        return kExitBound;
    return kExitOk;
}

struct SweepRow {
    std::string axis;
    std::string value;
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    std::string error;
};

int cmd_sweep(const ExperimentConfig& cfg) {
    std::string axis;
    std::vector<long> points;
    if (!cfg.sweep_k.empty()) {
        axis = "k";
        points = parse_longs(cfg.sweep_k);
    } else if (!cfg.sweep_t.empty()) {
        axis = "T";
        points = parse_longs(cfg.sweep_t);
    } else if (!cfg.sweep_n.empty()) {
        axis = "n";
        points = parse_longs(cfg.sweep_n);
    }
    if (points.empty())
        throw BadParams("sweep needs a nonempty --sweep-k/--sweep-T/--sweep-n");

    auto run_point = [&](long value) -> SweepRow {
        SweepRow row{axis, std::to_string(value)};
        try {
            ExperimentConfig point = cfg;
            if (axis == "k") point.k = value;
            if (axis == "n") point.n = static_cast<int>(value);
            Chain chain = build_chain(point);
            if (!check_ergodic(chain.P))
                throw NotErgodic("chain is not ergodic");
            const Vector pi = stationary_distribution(chain.P);
            const auto prof = mixing_profile(chain.P, pi, point.tmax);
            if (prof.t_star < 0)
                throw HorizonOverflow("t* not reached within --tmax");
            const double ts = static_cast<double>(prof.t_star);
            const double mp = bounds::m_prime(chain.P, pi);

            if (axis == "T") {
                point.steps = value;
                Walk W = make_walk(point, chain);
                W.run(value);
                const Vector err = W.frequency_error(pi);
                int worst = 0;
                double worst_margin =
                    std::numeric_limits<double>::infinity();
                for (int w = 0; w < chain.P.n; ++w) {
                    const double fb = bounds::frequency_bound(
                        ts, static_cast<double>(value), pi(w), mp,
                        static_cast<double>(point.k));
                    if (fb - err(w) < worst_margin) {
                        worst_margin = fb - err(w);
                        worst = w;
                    }
                }
                row.measured = err(worst);
                row.bound = bounds::frequency_bound(
                    ts, static_cast<double>(value), pi(worst), mp,
                    static_cast<double>(point.k));
                row.margin = row.bound + kFreqSlack - row.measured;
            } else {
                const double bound = bounds::cover_bound(
                    ts, mp, static_cast<double>(point.k));
                Walk W = make_walk(point, chain);
                const auto rep = cover_time(
                    W, point.steps > 0
                           ? point.steps
                           : static_cast<long>(std::ceil(bound)) + 1);
                if (!rep.covered) throw HorizonOverflow("not covered");
                row.measured = static_cast<double>(rep.t_cover);
                row.bound = bound;
                row.margin = bound - row.measured;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    // independent walk instances in a worker pool; rows emitted in axis order
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(points.size());
    for (long value : points)
        futures.push_back(
            std::async(std::launch::async, run_point, value));

    std::ostringstream csv;
    csv << "axis,value,measured,bound,margin,error\n";
    bool violated = false, failed = false;
    for (auto& f : futures) {
        SweepRow row = f.get();
        csv << row.axis << "," << row.value << "," << fmt(row.measured) << ","
            << fmt(row.bound) << "," << fmt(row.margin) << "," << row.error
            << "\n";
        if (!row.error.empty()) failed = true;
        else if (row.margin < 0.0) violated = true;
    }

    std::cout << csv.str();
    write_file(cfg.out_dir, "sweep.csv", csv.str());
    write_meta(cfg, "sweep");
    if (violated) return kExitBound;
    return failed ? kExitHorizon : kExitOk;
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open config file: " + path);
    json j = json::parse(in);
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("graph", cfg.graph_path);
    get("matrix", cfg.matrix_path);
    get("gen", cfg.gen_kind);
    get("n", cfg.n);
    get("p", cfg.p);
    get("seed", cfg.seed);
    get("chain", cfg.chain);
    get("alpha", cfg.alpha);
    get("beta", cfg.beta);
    get("k", cfg.k);
    get("place", cfg.place);
    get("steps", cfg.steps);
    get("tmax", cfg.tmax);
    get("out", cfg.out_dir);
    get("audit_identity", cfg.audit_identity);
    get("dump_flows", cfg.dump_flows);
    get("dump_emissions", cfg.dump_emissions);
    get("tie_order", cfg.tie_order);
    get("eps_list", cfg.eps_list);
    get("sweep_k", cfg.sweep_k);
    get("sweep_T", cfg.sweep_t);
    get("sweep_n", cfg.sweep_n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic random walk (SRT-router) experiment harness"};
    app.require_subcommand(1);

    ExperimentConfig cfg;

    // A config file provides defaults; explicit flags override it, so it is
    // applied before CLI11 parses.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }

    std::string command;
    for (const char* name : {"analyze", "simulate", "cover", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", "JSON config file (flags override)")
            ->check(CLI::ExistingFile);
        sub->add_option("--graph", cfg.graph_path, "edge-list file");
        sub->add_option("--matrix", cfg.matrix_path, "matrix file (JSON/CSV)");
        sub->add_option("--gen", cfg.gen_kind,
                        "path|cycle|complete|star|grid|er");
        sub->add_option("--n", cfg.n, "vertex count for --gen");
        sub->add_option("--p", cfg.p, "er edge probability");
        sub->add_option("--seed", cfg.seed, "er seed");
        sub->add_option("--chain", cfg.chain, "simple|lazy|metropolis|beta");
        sub->add_option("--alpha", cfg.alpha, "lazy holding probability");
        sub->add_option("--beta", cfg.beta, "beta-walk exponent");
        sub->add_option("--k", cfg.k, "token count");
        sub->add_option("--place", cfg.place, "single:V|uniform|file:PATH");
        sub->add_option("--steps", cfg.steps, "simulation steps / horizon");
        sub->add_option("--tmax", cfg.tmax, "mixing-profile horizon");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_flag("--audit-identity", cfg.audit_identity,
                      "retain flow history; report identity residuals");
        sub->add_flag("--dump-flows", cfg.dump_flows, "per-step trace CSV");
        sub->add_flag("--dump-emissions", cfg.dump_emissions,
                      "router emission trace \"v i u\"");
        sub->add_option("--tie-order", cfg.tie_order, "asc|desc");
        sub->add_option("--eps-list", cfg.eps_list,
                        "comma-separated mixing thresholds");
        sub->add_option("--sweep-k", cfg.sweep_k, "k-axis points");
        sub->add_option("--sweep-T", cfg.sweep_t, "T-axis points");
        sub->add_option("--sweep-n", cfg.sweep_n, "graph-size axis points");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cfg.matrix_path.empty() && cfg.graph_path.empty() &&
            cfg.gen_kind.empty())
            throw BadParams("one of --graph/--gen/--matrix is required");
        if (cfg.k < 1) throw BadParams("--k must be >= 1");
        if (command == "analyze") return cmd_analyze(cfg);
        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "cover") return cmd_cover(cfg);
        if (command == "sweep") return cmd_sweep(cfg);
    } catch (const NotErgodic& e) {
        std::cerr << "chain precondition failed: " << e.what() << "\n";
        return kExitChain;
    } catch (const HorizonOverflow& e) {
        std::cerr << "horizon exhausted: " << e.what() << "\n";
        return kExitHorizon;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
