#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beep/coro.hpp"
#include "beep/graph.hpp"
#include "beep/hbd.hpp"
#include "beep/sim.hpp"

namespace beep {

enum class TaskKind { SinglePath, Tree };

inline const char* task_name(TaskKind t) {
    return t == TaskKind::SinglePath ? "single" : "tree";
}

// Source-private map from destination-occupied layer indices I to target
// layer indices J subset of I.
struct DistancePolicy {
    enum class Kind { Min, Max, All, FixedSet };
    Kind kind = Kind::All;
    std::vector<int> fixed;  // FixedSet only

    std::vector<int> apply(const std::vector<int>& occupied) const;
    static DistancePolicy parse(const std::string& text);  // min | max | all | fixed:a,b,...
    std::string name() const;
};

struct ProtocolConfig {
    HbdParams hbd;  // carries the size bound N and the c1/c2 multipliers
    TaskKind task = TaskKind::SinglePath;
    DistancePolicy policy;
    bool wakeup_only = false;  // stop after the wake-up phase (all nodes terminate together)

    int n_bound() const { return hbd.n_bound; }
    int dmax_word_width() const { return ceil_log2(hbd.n_bound + 1); }
};

// Everything a node has learned when it terminates.
struct NodeKnowledge {
    int d_v = -1;
    int d_max = -1;
    std::vector<uint8_t> sp;         // sp[i] = 1 iff the node joined the i-th reverse wave
    std::vector<uint8_t> learned_j;  // indicator over [1, d_max]
    bool in_sp_j = false;
    int c_out = kNoColor, c_in = kNoColor;
    std::vector<int> cs_out, cs_in;
    int z = 0;
    int ed_silence_r = -1;  // source only
    std::vector<std::string> flags;  // conformance violations observed locally

    std::vector<int> j_set() const;
};

struct PhaseRounds {
    int wakeup = 0;
    int wakeup_sub3 = 0;
    int preprocessing = 0;
    int construction = 0;
    int total = 0;
};

struct ProtocolRun {
    SimResult sim;
    std::vector<NodeKnowledge> knowledge;
    PhaseRounds rounds;
    std::vector<std::string> flags;  // aggregated per-node conformance flags
    bool timed_out = false;

    // oracle-side context computed from the inputs (not from the run)
    int d_max = 0;
    std::vector<int> occupied_layers;  // I
    std::vector<int> target_layers;    // J = policy(I)
    int j_max = 0;                     // 0 when J is empty
};

// Wires the three phases end to end: wake-up (subphases 1-4), preprocessing
// (6 HBD subphases over the SP_J-induced layers) and the construction phase
// for the configured task. Requires g connected, Y nonempty, s not in Y, and
// a schedule over destinations whose earliest round is 1.
ProtocolRun run_full_protocol(const Graph& g, NodeId source, const std::vector<NodeId>& dests,
                              const WakeSchedule& schedule, const ProtocolConfig& config,
                              uint64_t seed, const SimOptions& sim_opt = {});

// The per-node program, exposed for harness-level tests of single phases.
std::unique_ptr<NodeProgram> make_protocol_program(bool is_source, bool is_destination,
                                                   const ProtocolConfig& config,
                                                   const NodeKnowledge** out_knowledge);

// Single HBD layer-pair schedule, runnable standalone on an embedded
// instance (used by equivalence tests between the beeping implementation and
// the abstract solver).
enum class HbdRole { Vertex, Hyperedge, Bystander };
ProgramCoro beeping_hbd_round_schedule(HbdRole role, const HbdParams& params, Rng& rng,
                                       int* out_color, std::vector<int>* out_colorset,
                                       int max_iterations = 0);

}  // namespace beep
