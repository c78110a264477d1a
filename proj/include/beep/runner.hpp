#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beep/protocol.hpp"
#include "beep/verify.hpp"

namespace beep {

// One experiment: instance + task + configuration + seed.
struct RunSpec {
    Graph graph;
    std::string instance;  // label for reports
    NodeId source = 0;
    std::vector<NodeId> dests;
    WakeSchedule schedule;
    ProtocolConfig config;
    uint64_t seed = 0;
    bool full_trace = true;
    bool check_iteration_invariant = true;
};

struct VerdictEntry {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct RunSummary {
    std::string instance;
    uint64_t seed = 0;
    std::string task;
    std::string policy;
    bool success = false;
    std::string failure_reason;
    PhaseRounds rounds;
    int d_max = 0;
    int all_awake_round = 0;  // first round with the whole network awake
    int palette_k = 0, palette_w = 0, max_epoch_used = -1;
    std::vector<VerdictEntry> verdicts;
    std::vector<int> z;
    std::vector<int> target_layers;

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

struct RunOutput {
    RunSummary summary;
    ProtocolRun run;  // full artifacts for further analysis / trace export
};

// Runs the protocol and every applicable oracle; protocol failures (HBD tail
// events) are recorded in the summary, not thrown.
RunOutput execute_run(const RunSpec& spec);

// Independent runs merged in input order; thread_count <= 1 runs inline.
std::vector<RunSummary> run_sweep(const std::vector<RunSpec>& specs, int thread_count = 0);

}  // namespace beep
