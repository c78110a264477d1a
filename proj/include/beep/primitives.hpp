#pragma once

#include <string>
#include <vector>

#include "beep/coro.hpp"
#include "beep/model.hpp"

namespace beep {

// Triplet scheduling used by reverse beep waves: rounds are grouped in blocks
// of three; a layer-i node initiates or relays only in round i mod 3 of a
// triplet and reacts only to beeps in round (i+1) mod 3.
struct TripletPhase {
    int triplet = 1;  // 1-based
    int offset = 0;   // 0..2

    static TripletPhase of_round(int round) { return {(round - 1) / 3 + 1, (round - 1) % 3}; }
    static int round_of(int triplet, int offset) { return 3 * (triplet - 1) + 1 + offset; }
    static int beep_offset(int layer) { return layer % 3; }
    static int trigger_offset(int layer) { return (layer + 1) % 3; }
};

// ---- Beep-wave broadcast ----
// Fixed-budget broadcast of a known-length message: wave w is initiated by the
// source in round 3(w-1)+1 and carries a beep iff bit w is 1; a layer-d node
// hears wave w in round 3(w-1)+d and relays one round later. Every
// participant runs for exactly 3*(length + d_max) rounds, so no termination
// detection is needed.

struct BeepWaveSpec {
    int layer = 0;  // 0 = source
    int d_max = 0;
    int length = 0;
    std::vector<uint8_t> message;  // source only; size == length
};

struct BeepWaveResult {
    std::vector<uint8_t> decoded;
    std::vector<std::string> flags;  // beeps heard outside the designated slots
};

ProgramCoro beep_wave_broadcast(const BeepWaveSpec& spec, BeepWaveResult& out);

// ---- Reverse beep waves ----
// Runs for exactly 3*triplet_count rounds. The node initiates in the listed
// triplets; otherwise it listens and relays any wave heard from the layer
// above in the following triplet. Records every triplet in which it initiated
// or relayed.

struct ReverseWaveSpec {
    int layer = 0;
    int triplet_count = 0;
    std::vector<int> initiate_at;  // 1-based triplet indices
};

struct ReverseWaveParticipation {
    int triplet = 0;
    bool initiated = false;  // false = relayed
};

struct ReverseWaveResult {
    std::vector<ReverseWaveParticipation> participated;
    std::vector<std::string> flags;  // e.g. a relay truncated by the budget
};

ProgramCoro reverse_beep_wave(const ReverseWaveSpec& spec, ReverseWaveResult& out);

// ---- EstimateDiameter ----
// Step-level fragment (the caller simulates one step per round triplet). The
// source beeps in step 1; a node hearing its first beep in step r' learns
// d_v = r' and relays; the relays form reverse waves that reach the source
// every three steps. After three consecutive silent steps ending at r-1 the
// source computes d_max = r/3 - 1 and broadcasts it as one marker wave plus a
// fixed-width word of word_width bits. Receivers know their distance but not
// the broadcast start, so they accept the marker only in steps
// = d_v - 1 (mod 3); residues rule out every stray relay beep. All nodes
// finish in the same step.

struct EstimateDiameterSpec {
    bool is_source = false;
    int word_width = 1;  // ceil(log2(N+1))
};

struct EstimateDiameterResult {
    int d_v = 0;
    int d_max = -1;
    int silence_r = -1;  // source only: the literal r with d_max = r/3 - 1
    std::vector<std::string> flags;
};

ProgramCoro estimate_diameter(const EstimateDiameterSpec& spec, EstimateDiameterResult& out);

}  // namespace beep
