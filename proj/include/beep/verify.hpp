#pragma once

#include <string>
#include <vector>

#include "beep/graph.hpp"
#include "beep/protocol.hpp"

namespace beep {

// Brute-force oracles for the protocol postconditions. Everything here is
// BFS and set arithmetic over the input graph; no protocol code paths are
// reused, so agreement with a run is meaningful evidence.

struct SpMembership {
    int d_max = 0;
    // in_sp[v][i] = 1 iff v lies on some shortest path from s to a
    // destination in layer i (1 <= i <= d_max; index 0 unused).
    std::vector<std::vector<uint8_t>> in_sp;

    std::vector<uint8_t> sp_j(const std::vector<int>& target_layers) const;
};

SpMembership compute_sp_sets(const Graph& g, NodeId s, const std::vector<NodeId>& dests);

struct Verdict {
    bool ok = true;
    std::string reason;

    static Verdict accept() { return {}; }
    static Verdict reject(std::string why) { return {false, std::move(why)}; }
};

// Accepts iff the 1-nodes induce a simple path from s to a destination in a
// target layer, one node per layer 0..d(s,y).
Verdict check_single_path(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                          const std::vector<int>& target_layers, const std::vector<int>& z);

// Accepts iff the 1-nodes are exactly the node set of some union of
// layer-decreasing shortest paths, one per destination in the target layers,
// that forms a tree rooted at s (every 1-node covered, no stray branches).
// Tree existence is decided by a per-layer-pair matching that assigns each
// non-destination 1-node a distinct child.
Verdict check_spt(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                  const std::vector<int>& target_layers, const std::vector<int>& z);

struct T5Violation {
    NodeId node = 0;
    int condition = 0;  // 1..4
    std::string detail;
};

struct T5Verdict {
    std::vector<T5Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the four preprocessing conditions over the SP_J-induced layered
// graph: out-color iff an upper SP_J neighbor exists, in-color iff not the
// source, and exactly one witness above (out) / below (in).
T5Verdict check_theorem5_conditions(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& target_layers,
                                    const std::vector<NodeKnowledge>& knowledge);

// Structural round counts: preprocessing = 6*E*T_iter*T_sub*2, single-path
// construction = j_max*W, tree construction = j_max*k, wake-up subphase 3 =
// 3*(4*d_max - 2). Empty target sets skip preprocessing and construction.
Verdict check_round_formulas(const PhaseRounds& rounds, const HbdParams& params, int d_max,
                             const std::vector<int>& target_layers, TaskKind task);

// Theorem-4 postconditions for a finished run: learned distances, d_max, sp
// arrays and J match the oracles, and (when a full trace is present) all
// nodes leave the wake-up phase in the same global round.
Verdict check_wakeup_postconditions(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& expected_target_layers,
                                    const ProtocolRun& run);

// Per-iteration induction invariants of the construction phase, read off the
// state tags of a full trace.
Verdict check_single_path_invariant(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& target_layers,
                                    const ProtocolRun& run);
Verdict check_tree_invariant(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                             const std::vector<int>& target_layers, const ProtocolRun& run);

}  // namespace beep
