#include "beep/sim.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace beep {

int WakeSchedule::min_round() const {
    int m = 0;
    for (auto [node, round] : rounds) m = (m == 0 || round < m) ? round : m;
    return m;
}

uint16_t Trace::intern(std::string_view tag) {
    for (size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == tag) return static_cast<uint16_t>(i);
    tags.emplace_back(tag);
    return static_cast<uint16_t>(tags.size() - 1);
}

const TraceEntry* Trace::at(NodeId node, int round) const {
    const PerNode& pn = nodes[node];
    if (pn.wake == 0 || round < pn.wake) return nullptr;
    size_t idx = static_cast<size_t>(round - pn.wake);
    if (idx >= pn.entries.size()) return nullptr;
    return &pn.entries[idx];
}

std::string_view Trace::phase(int round) const {
    if (round < 1 || round > static_cast<int>(round_phase.size())) return {};
    return tags[round_phase[round - 1]];
}

int Trace::last_round(NodeId node) const {
    const PerNode& pn = nodes[node];
    if (pn.wake == 0 || pn.entries.empty()) return 0;
    return pn.wake + static_cast<int>(pn.entries.size()) - 1;
}

int Trace::last_round_tagged(NodeId node, std::string_view prefix) const {
    const PerNode& pn = nodes[node];
    for (int i = static_cast<int>(pn.entries.size()) - 1; i >= 0; --i) {
        const TraceEntry& e = pn.entries[i];
        if (!e.terminal && tag_name(e.tag).substr(0, prefix.size()) == prefix)
            return pn.wake + i;
    }
    return 0;
}

int Trace::count_phase_rounds(std::string_view prefix) const {
    int count = 0;
    for (uint16_t id : round_phase)
        if (tags[id].substr(0, prefix.size()) == prefix && !tags[id].empty()) ++count;
    return count;
}

int Trace::all_awake_round() const {
    int latest = 0;
    for (const PerNode& pn : nodes) {
        if (pn.wake == 0) return 0;
        latest = std::max(latest, pn.wake);
    }
    return latest;
}

SimResult run_simulation(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& programs,
                         const WakeSchedule& schedule, const SimOptions& opt) {
    const int n = g.node_count();
    if (static_cast<int>(programs.size()) != n)
        throw std::invalid_argument("run_simulation: one program per node required");
    for (auto [node, round] : schedule.rounds) {
        if (node < 0 || node >= n) throw std::invalid_argument("schedule: node out of range");
        if (round < 1) throw std::invalid_argument("schedule: wake rounds start at 1");
    }

    enum class St : uint8_t { Asleep, Awake, Finished };
    std::vector<St> status(n, St::Asleep);
    std::vector<int> pending_wake(n, 0);
    std::vector<int> local(n, 0);
    std::vector<Observation> pending_obs(n, Observation::Nothing);
    for (auto [node, round] : schedule.rounds) pending_wake[node] = round;

    SimResult result;
    Trace& tr = result.trace;
    tr.full = opt.full_trace;
    tr.nodes.assign(n, {});
    const uint16_t end_tag = tr.intern("end");

    std::vector<NodeId> beepers, listeners, terminals;
    std::vector<uint8_t> heard(n, 0);
    int awake_unfinished = 0;
    int pending_wake_count = static_cast<int>(schedule.rounds.size());

    for (int r = 1; r <= opt.max_rounds; ++r) {
        for (NodeId v = 0; v < n; ++v) {
            if (status[v] == St::Asleep && pending_wake[v] == r) {
                status[v] = St::Awake;
                ++awake_unfinished;
                --pending_wake_count;
                tr.nodes[v].wake = r;
                programs[v]->on_wake(Rng(Rng::mix(opt.seed, static_cast<uint64_t>(v))));
            }
        }

        beepers.clear();
        listeners.clear();
        terminals.clear();
        bool acted = false;
        for (NodeId v = 0; v < n; ++v) {
            if (status[v] != St::Awake) continue;
            ++local[v];
            auto a = programs[v]->step(local[v], pending_obs[v]);
            pending_obs[v] = Observation::Nothing;
            if (!a) {
                status[v] = St::Finished;
                --awake_unfinished;
                terminals.push_back(v);
                continue;
            }
            acted = true;
            if (opt.full_trace)
                tr.nodes[v].entries.push_back(
                    {*a, Observation::Nothing, tr.intern(programs[v]->state_tag()), false});
            if (*a == Action::Beep) {
                beepers.push_back(v);
                ++tr.beeps;
            } else if (*a == Action::Listen) {
                listeners.push_back(v);
            }
        }

        if (acted) {
            tr.rounds = r;
            // terminal markers share the round so finish times stay visible
            if (opt.full_trace)
                for (NodeId v : terminals)
                    tr.nodes[v].entries.push_back({Action::Idle, Observation::Nothing, end_tag, true});
            uint16_t phase_tag = 0;
            for (NodeId v = 0; v < n && phase_tag == 0; ++v)
                if (status[v] == St::Awake) phase_tag = tr.intern(programs[v]->state_tag());
            while (static_cast<int>(tr.round_phase.size()) < r) tr.round_phase.push_back(0);
            tr.round_phase[r - 1] = phase_tag;
        }
        // a round with no actions leaves no records at all

        if (!beepers.empty()) {
            for (NodeId b : beepers)
                for (NodeId nb : g.neighbors(b)) heard[nb] = 1;
            for (NodeId v : listeners) {
                Observation o = heard[v] ? Observation::HeardBeep : Observation::Silence;
                pending_obs[v] = o;
                if (opt.full_trace) tr.nodes[v].entries.back().obs = o;
            }
            for (NodeId b : beepers)
                for (NodeId nb : g.neighbors(b)) {
                    heard[nb] = 0;
                    if (status[nb] == St::Asleep &&
                        (pending_wake[nb] == 0 || pending_wake[nb] > r + 1)) {
                        if (pending_wake[nb] == 0) ++pending_wake_count;
                        pending_wake[nb] = r + 1;
                    }
                }
        } else {
            for (NodeId v : listeners) {
                pending_obs[v] = Observation::Silence;
                if (opt.full_trace) tr.nodes[v].entries.back().obs = Observation::Silence;
            }
        }

        if (awake_unfinished == 0 && pending_wake_count == 0) break;
        if (r == opt.max_rounds) result.timed_out = true;
    }

    result.all_finished = std::all_of(status.begin(), status.end(),
                                      [](St s) { return s == St::Finished; });
    for (NodeId v = 0; v < n; ++v)
        if (status[v] == St::Asleep) result.never_woke.push_back(v);
    tr.round_phase.resize(tr.rounds);
    return result;
}

// ---- JSONL export / import ----

void export_trace(const Trace& trace, std::ostream& out) {
    if (!trace.full) throw std::logic_error("export_trace: trace was recorded without entries");
    nlohmann::json rec;
    for (int r = 1; r <= trace.rounds; ++r) {
        for (NodeId v = 0; v < static_cast<int>(trace.nodes.size()); ++v) {
            const TraceEntry* e = trace.at(v, r);
            if (!e) continue;
            rec = nlohmann::json::object();
            rec["round"] = r;
            rec["node"] = v;
            rec["action"] = std::string(1, action_char(e->action));
            if (e->action == Action::Listen)
                rec["obs"] = e->obs == Observation::HeardBeep ? "beep" : "silence";
            else
                rec["obs"] = nullptr;
            rec["state"] = std::string(trace.tag_name(e->tag));
            out << rec.dump() << "\n";
        }
    }
}

std::string trace_to_jsonl(const Trace& trace) {
    std::ostringstream os;
    export_trace(trace, os);
    return os.str();
}

TraceLoadResult load_trace(std::istream& in, int node_count) {
    TraceLoadResult result;
    Trace& tr = result.trace;
    tr.nodes.assign(node_count, {});
    std::string line;
    int line_no = 0;
    struct Rec {
        int round;
        TraceEntry entry;
    };
    std::vector<std::vector<Rec>> per_node(node_count);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, std::string("bad JSONL record: ") + e.what());
        }
        int round = j.at("round").get<int>();
        int node = j.at("node").get<int>();
        std::string action = j.at("action").get<std::string>();
        if (node < 0 || node >= node_count) {
            result.structural_problems.push_back("line " + std::to_string(line_no) +
                                                 ": node id out of range");
            continue;
        }
        TraceEntry e;
        if (action == "B")
            e.action = Action::Beep;
        else if (action == "L")
            e.action = Action::Listen;
        else if (action == "I")
            e.action = Action::Idle;
        else
            throw ParseError(line_no, "unknown action '" + action + "'");
        if (j.contains("obs") && !j.at("obs").is_null()) {
            std::string obs = j.at("obs").get<std::string>();
            e.obs = obs == "beep" ? Observation::HeardBeep : Observation::Silence;
        }
        std::string state = j.value("state", std::string{});
        e.tag = tr.intern(state);
        e.terminal = state == "end";
        if (e.action == Action::Beep) ++tr.beeps;
        tr.rounds = std::max(tr.rounds, round);
        per_node[node].push_back({round, e});
    }
    for (NodeId v = 0; v < node_count; ++v) {
        auto& recs = per_node[v];
        std::stable_sort(recs.begin(), recs.end(),
                         [](const Rec& a, const Rec& b) { return a.round < b.round; });
        if (recs.empty()) continue;
        tr.nodes[v].wake = recs.front().round;
        int expect = recs.front().round;
        for (const Rec& rec : recs) {
            if (rec.round != expect) {
                result.structural_problems.push_back(
                    "node " + std::to_string(v) + ": activity gap or duplicate at round " +
                    std::to_string(rec.round) + " (expected " + std::to_string(expect) + ")");
                expect = rec.round;
            }
            tr.nodes[v].entries.push_back(rec.entry);
            ++expect;
        }
    }
    tr.round_phase.assign(tr.rounds, 0);
    return result;
}

TraceSummary summarize(const Trace& trace) {
    TraceSummary s;
    s.rounds = trace.rounds;
    s.beeps = trace.beeps;
    std::vector<std::pair<std::string, int>>& groups = s.phase_rounds;
    for (uint16_t id : trace.round_phase) {
        std::string_view tag = trace.tag_name(id);
        if (tag.empty()) continue;
        std::string group(tag.substr(0, tag.find('.')));
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == group; });
        if (it == groups.end())
            groups.emplace_back(group, 1);
        else
            ++it->second;
    }
    return s;
}

ConformanceReport check_trace_conformance(const Graph& g, const Trace& trace,
                                          const WakeSchedule* schedule) {
    ConformanceReport report;
    const int n = g.node_count();

    for (int r = 1; r <= trace.rounds; ++r) {
        for (NodeId v = 0; v < n; ++v) {
            const TraceEntry* e = trace.at(v, r);
            if (!e) continue;
            if (e->action != Action::Listen && e->obs != Observation::Nothing) {
                report.violations.push_back({r, v, "observation recorded for a non-listening node"});
                continue;
            }
            if (e->action == Action::Listen) {
                bool neighbor_beeped = false;
                for (NodeId nb : g.neighbors(v)) {
                    const TraceEntry* ne = trace.at(nb, r);
                    if (ne && ne->action == Action::Beep) {
                        neighbor_beeped = true;
                        break;
                    }
                }
                Observation expected =
                    neighbor_beeped ? Observation::HeardBeep : Observation::Silence;
                if (e->obs != expected)
                    report.violations.push_back(
                        {r, v,
                         std::string("listener observation is not the OR of neighbor beeps (") +
                             (neighbor_beeped ? "expected beep)" : "expected silence)")});
            }
        }
    }

    for (NodeId v = 0; v < n; ++v) {
        int w = trace.nodes[v].wake;
        if (w == 0) continue;
        bool scheduled = schedule && schedule->rounds.count(v) && schedule->rounds.at(v) == w;
        if (schedule && schedule->rounds.count(v) && schedule->rounds.at(v) < w)
            report.violations.push_back(
                {w, v, "node woke later than its scheduled round"});
        if (scheduled) continue;
        bool caused = false;
        if (w >= 2) {
            for (NodeId nb : g.neighbors(v)) {
                const TraceEntry* ne = trace.at(nb, w - 1);
                if (ne && ne->action == Action::Beep) {
                    caused = true;
                    break;
                }
            }
        }
        if (!caused) {
            if (schedule)
                report.violations.push_back({w, v, "wake without scheduled event or waking beep"});
            else
                report.assumed_scheduled.push_back(v);
        }
    }
    return report;
}

}  // namespace beep
