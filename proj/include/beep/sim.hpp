#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "beep/graph.hpp"
#include "beep/model.hpp"
#include "beep/util.hpp"

namespace beep {

// A node's behavior, driven round by round. The engine never inspects program
// state; all cross-node effects flow through beeps. Local rounds start at 1 in
// the round the node wakes (scheduled wake) or in the round after the waking
// beep (beep-triggered wake).
class NodeProgram {
public:
    virtual ~NodeProgram() = default;
    // Called once when the node wakes, with a generator derived from
    // (simulation seed, node id).
    virtual void on_wake(Rng rng) { (void)rng; }
    // Returns the action for this local round, given the observation produced
    // by the previous round's action; nullopt once the program has finished.
    virtual std::optional<Action> step(int local_round, Observation prev) = 0;
    virtual std::string_view state_tag() const { return {}; }
};

// External wake events: destination node -> global wake round (>= 1).
struct WakeSchedule {
    std::map<NodeId, int> rounds;

    static WakeSchedule single(NodeId node, int round = 1) { return {{{node, round}}}; }
    int min_round() const;
};

struct TraceEntry {
    Action action = Action::Idle;
    Observation obs = Observation::Nothing;
    uint16_t tag = 0;
    bool terminal = false;  // synthetic record for the round a program finished in
};

// Per-round, per-awake-node record of the run. Entries are stored per node,
// contiguous from the wake round. round_phase keeps the state tag of the
// lowest-id acting node even when full entries are disabled, so phase round
// counts stay measurable on large runs.
struct Trace {
    struct PerNode {
        int wake = 0;  // 0 = never woke
        std::vector<TraceEntry> entries;
    };

    std::vector<PerNode> nodes;
    std::vector<std::string> tags{""};
    std::vector<uint16_t> round_phase;  // index round-1
    int rounds = 0;                     // last round with any record
    long beeps = 0;
    bool full = true;

    uint16_t intern(std::string_view tag);
    const TraceEntry* at(NodeId node, int round) const;
    std::string_view tag_name(uint16_t id) const { return tags[id]; }
    std::string_view phase(int round) const;
    int last_round(NodeId node) const;
    // Last round the node recorded a non-terminal action with a tag matching
    // the prefix; 0 if none.
    int last_round_tagged(NodeId node, std::string_view prefix) const;
    int count_phase_rounds(std::string_view prefix) const;
    // First round in which every node of the graph is awake; 0 if never.
    int all_awake_round() const;
};

struct SimOptions {
    int max_rounds = 2'000'000;
    bool full_trace = true;
    uint64_t seed = 0;
};

struct SimResult {
    Trace trace;
    bool timed_out = false;
    bool all_finished = false;
    std::vector<NodeId> never_woke;
};

// Runs the synchronous beeping-model engine: scheduled wakes, one action per
// awake node per round, OR-observations for listeners, wake-on-beep for
// sleeping neighbors. Deterministic for fixed inputs.
SimResult run_simulation(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& programs,
                         const WakeSchedule& schedule, const SimOptions& opt = {});

// ---- Trace export / import (JSONL) ----
// One record per (round, awake node):
// {"round":int,"node":int,"action":"B"|"L"|"I","obs":"beep"|"silence"|null,"state":str}

void export_trace(const Trace& trace, std::ostream& out);
std::string trace_to_jsonl(const Trace& trace);

struct TraceLoadResult {
    Trace trace;
    std::vector<std::string> structural_problems;  // gaps, duplicates, bad ids
};
TraceLoadResult load_trace(std::istream& in, int node_count);

struct TraceSummary {
    int rounds = 0;
    long beeps = 0;
    std::vector<std::pair<std::string, int>> phase_rounds;  // tag group -> rounds
};
TraceSummary summarize(const Trace& trace);

// ---- Model conformance ----
// (i) beeping/idle nodes observe nothing; (ii) a listener's observation is the
// OR of its neighbors' beeps; (iii) every non-scheduled wake is caused by a
// neighbor's beep in the previous round; (iv) no activity outside the
// [wake, finish] window (contiguity).

struct ConformanceViolation {
    int round = 0;
    NodeId node = 0;
    std::string what;
};

struct ConformanceReport {
    std::vector<ConformanceViolation> violations;
    std::vector<NodeId> assumed_scheduled;  // wakes with no visible cause, no schedule given
    bool ok() const { return violations.empty(); }
};

ConformanceReport check_trace_conformance(const Graph& g, const Trace& trace,
                                          const WakeSchedule* schedule = nullptr);

}  // namespace beep
