#include "beep/runner.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace beep {

namespace {

void add_verdict(RunSummary& s, const std::string& name, const Verdict& v) {
    s.verdicts.push_back({name, v.ok, v.reason});
}

}  // namespace

RunOutput execute_run(const RunSpec& spec) {
    RunOutput out;
    RunSummary& s = out.summary;
    s.instance = spec.instance;
    s.seed = spec.seed;
    s.task = task_name(spec.config.task);
    s.policy = spec.config.policy.name();
    s.palette_k = spec.config.hbd.palette_size();
    s.palette_w = spec.config.hbd.color_width();

    SimOptions opt;
    opt.full_trace = spec.full_trace;
    out.run = run_full_protocol(spec.graph, spec.source, spec.dests, spec.schedule, spec.config,
                                spec.seed, opt);
    ProtocolRun& run = out.run;
    s.rounds = run.rounds;
    s.d_max = run.d_max;
    s.target_layers = run.target_layers;
    s.all_awake_round = run.sim.trace.all_awake_round();

    s.z.resize(spec.graph.node_count());
    for (NodeId v = 0; v < spec.graph.node_count(); ++v) s.z[v] = run.knowledge[v].z;
    for (const NodeKnowledge& kv : run.knowledge) {
        auto note = [&](int c) {
            if (c != kNoColor) {
                Color col = Color::from_index(c, spec.config.hbd);
                s.max_epoch_used = std::max(s.max_epoch_used, col.epoch);
            }
        };
        note(kv.c_out);
        note(kv.c_in);
    }

    if (run.timed_out) {
        s.success = false;
        s.failure_reason = "timeout";
        return out;
    }
    if (!run.flags.empty()) {
        s.success = false;
        s.failure_reason = "conformance: " + run.flags.front();
    }

    add_verdict(s, "wakeup",
                check_wakeup_postconditions(spec.graph, spec.source, spec.dests, run.target_layers,
                                            run));
    add_verdict(s, "round_formulas",
                check_round_formulas(run.rounds, spec.config.hbd, run.d_max, run.target_layers,
                                     spec.config.task));

    const bool skipped = run.target_layers.empty();
    if (!spec.config.wakeup_only) {
        if (skipped) {
            bool all_zero = std::all_of(s.z.begin(), s.z.end(), [](int b) { return b == 0; });
            add_verdict(s, "output",
                        all_zero ? Verdict::accept()
                                 : Verdict::reject("J is empty but some node output 1"));
        } else {
            T5Verdict t5 = check_theorem5_conditions(spec.graph, spec.source, spec.dests,
                                                     run.target_layers, run.knowledge);
            if (t5.ok()) {
                add_verdict(s, "theorem5", Verdict::accept());
            } else {
                std::ostringstream os;
                os << t5.violations.size() << " violation(s), first: node "
                   << t5.violations.front().node << " condition " << t5.violations.front().condition
                   << " (" << t5.violations.front().detail << ")";
                add_verdict(s, "theorem5", Verdict::reject(os.str()));
            }
            add_verdict(s, "output",
                        spec.config.task == TaskKind::SinglePath
                            ? check_single_path(spec.graph, spec.source, spec.dests,
                                                run.target_layers, s.z)
                            : check_spt(spec.graph, spec.source, spec.dests, run.target_layers,
                                        s.z));
            if (spec.full_trace && spec.check_iteration_invariant)
                add_verdict(s, "iteration_invariant",
                            spec.config.task == TaskKind::SinglePath
                                ? check_single_path_invariant(spec.graph, spec.source, spec.dests,
                                                              run.target_layers, run)
                                : check_tree_invariant(spec.graph, spec.source, spec.dests,
                                                       run.target_layers, run));
        }
    }
    if (spec.full_trace) {
        ConformanceReport conf =
            check_trace_conformance(spec.graph, run.sim.trace, &spec.schedule);
        add_verdict(s, "conformance",
                    conf.ok() ? Verdict::accept()
                              : Verdict::reject("round " + std::to_string(conf.violations.front().round) +
                                                " node " + std::to_string(conf.violations.front().node) +
                                                ": " + conf.violations.front().what));
    }

    if (s.failure_reason.empty()) {
        auto bad = std::find_if(s.verdicts.begin(), s.verdicts.end(),
                                [](const VerdictEntry& v) { return !v.ok; });
        if (bad == s.verdicts.end()) {
            s.success = true;
        } else {
            s.success = false;
            s.failure_reason = bad->name + ": " + bad->detail;
        }
    }
    return out;
}

std::vector<RunSummary> run_sweep(const std::vector<RunSpec>& specs, int thread_count) {
    std::vector<RunSummary> out(specs.size());
    if (thread_count <= 0)
        thread_count = static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::max(1, std::min<int>(thread_count, static_cast<int>(specs.size())));

    if (thread_count == 1) {
        for (size_t i = 0; i < specs.size(); ++i) out[i] = execute_run(specs[i]).summary;
        return out;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= specs.size()) break;
            out[i] = execute_run(specs[i]).summary;
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return out;
}

std::string RunSummary::to_json() const {
    nlohmann::json j;
    j["instance"] = instance;
    j["seed"] = seed;
    j["task"] = task;
    j["policy"] = policy;
    j["success"] = success;
    j["failure_reason"] = success ? nlohmann::json() : nlohmann::json(failure_reason);
    j["rounds"] = {{"wakeup", rounds.wakeup},
                   {"wakeup_sub3", rounds.wakeup_sub3},
                   {"preprocessing", rounds.preprocessing},
                   {"construction", rounds.construction},
                   {"total", rounds.total}};
    j["palette"] = {{"k", palette_k}, {"W", palette_w}, {"max_epoch_used", max_epoch_used}};
    j["d_max"] = d_max;
    j["all_awake_round"] = all_awake_round;
    j["target_layers"] = target_layers;
    nlohmann::json verd = nlohmann::json::object();
    for (const VerdictEntry& v : verdicts)
        verd[v.name] = v.ok ? nlohmann::json(true) : nlohmann::json(v.detail);
    j["verdicts"] = verd;
    j["z"] = z;
    return j.dump(2);
}

std::string RunSummary::csv_header() {
    return "instance,seed,task,policy,success,failure_reason,rounds_wakeup,rounds_wakeup_sub3,"
           "rounds_preprocessing,rounds_construction,rounds_total,d_max,all_awake_round,"
           "palette_k,palette_w,max_epoch_used";
}

std::string RunSummary::to_csv_row() const {
    std::ostringstream os;
    std::string reason = failure_reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    os << instance << "," << seed << "," << task << "," << policy << "," << (success ? 1 : 0) << ","
       << reason << "," << rounds.wakeup << "," << rounds.wakeup_sub3 << ","
       << rounds.preprocessing << "," << rounds.construction << "," << rounds.total << "," << d_max
       << "," << all_awake_round << "," << palette_k << "," << palette_w << "," << max_epoch_used;
    return os.str();
}

}  // namespace beep
