// Experiment runner for the beeping-network shortest-path simulator: single
// runs, seed sweeps, standalone HBD solving, instance generation and trace
// conformance checks. Machine-readable output goes to stdout; diagnostics to
// stderr. Probabilistic protocol failures are reported as data (exit 0);
// only operational errors exit nonzero.

#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "beep/hbd.hpp"
#include "beep/runner.hpp"
#include "beep/sim.hpp"
#include "beep/verify.hpp"

using namespace beep;

namespace {

struct DestFile {
    std::vector<NodeId> dests;
    WakeSchedule schedule;
};

DestFile load_dest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open destination file: " + path);
    DestFile out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        long node, round;
        if (!(is >> node)) continue;
        if (!(is >> round)) throw ParseError(line_no, "expected 'node_id wake_round'");
        out.dests.push_back(static_cast<NodeId>(node));
        out.schedule.rounds[static_cast<NodeId>(node)] = static_cast<int>(round);
    }
    return out;
}

void save_dest_file(const DestFile& d, std::ostream& out) {
    for (NodeId y : d.dests) {
        auto it = d.schedule.rounds.find(y);
        out << y << " " << (it == d.schedule.rounds.end() ? 1 : it->second) << "\n";
    }
}

DestFile random_dests(const Graph& g, NodeId source, int count, int spread, uint64_t seed) {
    Rng rng(Rng::mix(seed, 0x6465737473ULL));
    const int n = g.node_count();
    if (count >= n) throw std::runtime_error("need fewer destinations than nodes");
    std::set<NodeId> chosen;
    while (static_cast<int>(chosen.size()) < count) {
        NodeId v = rng.below(n);
        if (v != source) chosen.insert(v);
    }
    DestFile out;
    bool first = true;
    for (NodeId y : chosen) {
        out.dests.push_back(y);
        out.schedule.rounds[y] = first ? 1 : rng.uniform_int(1, 1 + spread);
        first = false;
    }
    return out;
}

Graph obtain_graph(const std::string& graph_file, const std::string& gen_spec, uint64_t seed,
                   std::string& label) {
    if (!graph_file.empty()) {
        label = graph_file;
        return load_graph_file(graph_file);
    }
    if (gen_spec.empty()) throw std::runtime_error("either --graph or --gen is required");
    label = gen_spec;
    return gen_graph(GenSpec::parse(gen_spec), seed);
}

int cmd_run(const std::string& graph_file, const std::string& gen_spec,
            const std::string& dest_file, int dest_count, int wake_spread, NodeId source,
            const std::string& task, const std::string& policy, int n_bound, int c1, int c2,
            uint64_t seed, const std::string& trace_path, bool light) {
    RunSpec spec;
    spec.graph = obtain_graph(graph_file, gen_spec, seed, spec.instance);
    spec.source = source;
    if (!dest_file.empty()) {
        DestFile d = load_dest_file(dest_file);
        spec.dests = d.dests;
        spec.schedule = d.schedule;
    } else {
        DestFile d = random_dests(spec.graph, source, dest_count, wake_spread, seed);
        spec.dests = d.dests;
        spec.schedule = d.schedule;
    }
    spec.config.task = task == "tree" ? TaskKind::Tree : TaskKind::SinglePath;
    spec.config.policy = DistancePolicy::parse(policy);
    spec.config.hbd = HbdParams::make(std::max(2, n_bound > 0 ? n_bound : spec.graph.node_count()),
                                      c1, c2);
    spec.seed = seed;
    spec.full_trace = !light || !trace_path.empty();

    RunOutput out = execute_run(spec);
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw std::runtime_error("cannot open trace output: " + trace_path);
        export_trace(out.run.sim.trace, tf);
    }
    std::cout << out.summary.to_json() << "\n";
    return 0;
}

int cmd_sweep(const std::string& gen_specs, const std::string& seed_range, int dest_count,
              int wake_spread, NodeId source, const std::string& task, const std::string& policy,
              int n_bound, int c1, int c2, const std::string& out_format, int threads) {
    std::vector<std::string> specs;
    {
        std::istringstream is(gen_specs);
        std::string piece;
        while (std::getline(is, piece, ';'))
            if (!piece.empty()) specs.push_back(piece);
    }
    if (specs.empty()) throw std::runtime_error("--gen grid is empty");
    long lo = 0, hi = -1;
    {
        auto colon = seed_range.find(':');
        if (colon == std::string::npos) {
            lo = hi = std::stol(seed_range);
        } else {
            lo = std::stol(seed_range.substr(0, colon));
            hi = std::stol(seed_range.substr(colon + 1));
        }
    }
    if (hi < lo) {
        std::cout << RunSummary::csv_header() << "\n";
        std::cerr << "sweep: 0 runs\n";
        return 0;
    }

    std::vector<RunSpec> runs;
    for (const std::string& gs : specs) {
        for (long seed = lo; seed <= hi; ++seed) {
            RunSpec spec;
            spec.instance = gs;
            spec.graph = gen_graph(GenSpec::parse(gs), static_cast<uint64_t>(seed));
            spec.source = source;
            DestFile d =
                random_dests(spec.graph, source, dest_count, wake_spread, static_cast<uint64_t>(seed));
            spec.dests = d.dests;
            spec.schedule = d.schedule;
            spec.config.task = task == "tree" ? TaskKind::Tree : TaskKind::SinglePath;
            spec.config.policy = DistancePolicy::parse(policy);
            spec.config.hbd = HbdParams::make(
                std::max(2, n_bound > 0 ? n_bound : spec.graph.node_count()), c1, c2);
            spec.seed = static_cast<uint64_t>(seed);
            runs.push_back(std::move(spec));
        }
    }
    std::vector<RunSummary> results = run_sweep(runs, threads);
    int ok = 0;
    if (out_format == "json") {
        for (const RunSummary& r : results) std::cout << r.to_json() << "\n";
    } else {
        std::cout << RunSummary::csv_header() << "\n";
        for (const RunSummary& r : results) std::cout << r.to_csv_row() << "\n";
    }
    for (const RunSummary& r : results) ok += r.success ? 1 : 0;
    std::cerr << "sweep: " << ok << "/" << results.size() << " runs succeeded\n";
    return 0;
}

int cmd_hbd(const std::string& hg_file, int n_bound, int c1, int c2, uint64_t seed) {
    Hypergraph h = load_hypergraph_file(hg_file);
    int bound = n_bound > 0 ? n_bound : std::max(2, h.n_vertices + h.edge_count());
    HbdParams params = HbdParams::make(bound, c1, c2);
    HbdSolution sol = solve_hbd_abstract(h, params, seed);
    HbdReport report = verify_hbd(h, sol);
    PaletteStats stats = palette_stats(sol, h, params);

    nlohmann::json j;
    j["params"] = {{"n_bound", params.n_bound},
                   {"epochs", params.epochs()},
                   {"iters_per_epoch", params.iters_per_epoch()},
                   {"sub_iters", params.sub_iters()},
                   {"k", params.palette_size()},
                   {"W", params.color_width()}};
    j["feasible"] = report.feasible();
    nlohmann::json viols = nlohmann::json::array();
    for (const auto& v : report.violations) viols.push_back(v.describe());
    j["violations"] = viols;
    j["stats"] = {{"max_epoch_used", stats.max_epoch_used},
                  {"max_index_used", stats.max_index_used},
                  {"per_epoch", stats.per_epoch},
                  {"uncolored_fraction", stats.uncolored_fraction}};
    j["edge_color"] = sol.edge_color;
    j["vertex_colorset"] = sol.vertex_colorset;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& trace_path, const std::string& graph_file,
               const std::string& dest_file) {
    Graph g = load_graph_file(graph_file);
    std::ifstream tf(trace_path);
    if (!tf) throw std::runtime_error("cannot open trace: " + trace_path);
    TraceLoadResult loaded = load_trace(tf, g.node_count());

    std::optional<WakeSchedule> schedule;
    if (!dest_file.empty()) schedule = load_dest_file(dest_file).schedule;
    ConformanceReport report =
        check_trace_conformance(g, loaded.trace, schedule ? &*schedule : nullptr);

    nlohmann::json j;
    j["ok"] = report.ok() && loaded.structural_problems.empty();
    nlohmann::json viols = nlohmann::json::array();
    for (const auto& v : report.violations)
        viols.push_back({{"round", v.round}, {"node", v.node}, {"what", v.what}});
    j["violations"] = viols;
    j["structural"] = loaded.structural_problems;
    j["assumed_scheduled"] = report.assumed_scheduled;
    TraceSummary ts = summarize(loaded.trace);
    nlohmann::json phases = nlohmann::json::object();
    for (auto& [name, count] : ts.phase_rounds) phases[name] = count;
    j["summary"] = {{"rounds", ts.rounds}, {"beeps", ts.beeps}, {"phase_rounds", phases}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beeping-network shortest-path simulator"};
    app.require_subcommand(1);

    std::string graph_file, gen_spec, dest_file, task = "single", policy = "all";
    std::string trace_path, out_format = "csv", seed_range = "0:0", hg_file;
    int n_bound = 0, c1 = 4, c2 = 4, dest_count = 1, wake_spread = 0, threads = 0;
    int source = 0;
    uint64_t seed = 0;
    bool light = false;

    auto add_config_flags = [&](CLI::App* cmd, bool with_task) {
        cmd->add_option("--n-bound", n_bound, "size bound N known to the nodes (default: n)");
        cmd->add_option("--c1", c1, "HBD iterations-per-epoch multiplier");
        cmd->add_option("--c2", c2, "HBD sub-iterations multiplier");
        if (with_task) {
            cmd->add_option("--task", task, "single | tree");
            cmd->add_option("--policy", policy, "min | max | all | fixed:a,b,...");
            cmd->add_option("--source", source, "source node id");
            cmd->add_option("--dests", dest_count, "random destinations when no --dest file");
            cmd->add_option("--wake-spread", wake_spread, "max extra delay of later wake events");
        }
    };

    CLI::App* run = app.add_subcommand("run", "one full protocol run plus all oracle checks");
    run->add_option("--graph", graph_file, "graph file");
    run->add_option("--gen", gen_spec, "generator spec, e.g. gnp:50,0.1");
    run->add_option("--dest", dest_file, "destination schedule file ('node wake_round' lines)");
    run->add_option("--seed", seed, "run seed");
    run->add_option("--trace", trace_path, "write the trace as JSONL");
    run->add_flag("--light", light, "skip full trace recording (faster, fewer verdicts)");
    add_config_flags(run, true);

    CLI::App* sweep = app.add_subcommand("sweep", "independent runs over a generator/seed grid");
    sweep->add_option("--gen", gen_spec, "generator specs separated by ';'")->required();
    sweep->add_option("--seeds", seed_range, "seed range lo:hi (inclusive)");
    sweep->add_option("--out", out_format, "csv | json");
    sweep->add_option("--threads", threads, "worker threads (default: hardware)");
    add_config_flags(sweep, true);

    CLI::App* hbd = app.add_subcommand("hbd", "solve one hypergraph with the abstract HBD process");
    hbd->add_option("--hypergraph", hg_file, "hypergraph file")->required();
    hbd->add_option("--seed", seed, "solver seed");
    add_config_flags(hbd, false);

    CLI::App* gen = app.add_subcommand("gen", "write graph / hypergraph / schedule files");
    std::string gen_kind = "graph", out_path = "-";
    int hg_vertices = 8, hg_edges = 16, hg_max_rank = 4;
    double hg_p_empty = 0.0;
    gen->add_option("kind", gen_kind, "graph | hypergraph | schedule")->required();
    gen->add_option("--spec", gen_spec, "graph generator spec");
    gen->add_option("--graph", graph_file, "graph file (for schedule generation)");
    gen->add_option("--vertices", hg_vertices, "hypergraph vertices");
    gen->add_option("--edges", hg_edges, "hypergraph edges");
    gen->add_option("--max-rank", hg_max_rank, "max hyperedge rank");
    gen->add_option("--p-empty", hg_p_empty, "probability of an empty hyperedge");
    gen->add_option("--count", dest_count, "schedule: number of destinations");
    gen->add_option("--spread", wake_spread, "schedule: max extra wake delay");
    gen->add_option("--source", source, "schedule: source to avoid");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("-o,--out", out_path, "output path ('-' = stdout)");

    CLI::App* verify = app.add_subcommand("verify", "replay engine conformance over a stored trace");
    verify->add_option("--trace", trace_path, "trace JSONL file")->required();
    verify->add_option("--graph", graph_file, "graph file")->required();
    verify->add_option("--dest", dest_file, "schedule file for wake-causality checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(graph_file, gen_spec, dest_file, dest_count, wake_spread, source, task,
                           policy, n_bound, c1, c2, seed, trace_path, light);
        if (sweep->parsed())
            return cmd_sweep(gen_spec, seed_range, dest_count, wake_spread, source, task, policy,
                             n_bound, c1, c2, out_format, threads);
        if (hbd->parsed()) return cmd_hbd(hg_file, n_bound, c1, c2, seed);
        if (verify->parsed()) return cmd_verify(trace_path, graph_file, dest_file);
        if (gen->parsed()) {
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (out_path != "-") {
                file.open(out_path);
                if (!file) throw std::runtime_error("cannot open output: " + out_path);
                os = &file;
            }
            if (gen_kind == "graph") {
                if (gen_spec.empty()) throw std::runtime_error("gen graph needs --spec");
                save_graph(gen_graph(GenSpec::parse(gen_spec), seed), *os);
            } else if (gen_kind == "hypergraph") {
                save_hypergraph(
                    gen_random_hypergraph(hg_vertices, hg_edges, hg_max_rank, seed, hg_p_empty),
                    *os);
            } else if (gen_kind == "schedule") {
                if (graph_file.empty() && gen_spec.empty())
                    throw std::runtime_error("gen schedule needs --graph or --spec");
                std::string label;
                Graph g = obtain_graph(graph_file, gen_spec, seed, label);
                save_dest_file(random_dests(g, source, dest_count, wake_spread, seed), *os);
            } else {
                throw std::runtime_error("unknown gen kind: " + gen_kind);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
