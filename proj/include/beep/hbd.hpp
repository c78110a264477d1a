#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beep/hypergraph.hpp"
#include "beep/util.hpp"

namespace beep {

// Palette sizing for the hypergraph bipartite decomposition. The paper fixes
// only the asymptotics; c1/c2 are the iteration multipliers (defaults 4).
struct HbdParams {
    int n_bound = 2;  // N, size bound known to all nodes
    int c1 = 4;       // iterations per epoch = ceil(c1 * log2 N)
    int c2 = 4;       // sub-iterations per iteration = ceil(c2 * log2 N)

    static HbdParams make(int n_bound, int c1 = 4, int c2 = 4);  // validates

    int epochs() const { return floor_log2(n_bound) + 1; }  // E
    int iters_per_epoch() const;                            // T_iter
    int sub_iters() const;                                  // T_sub
    int palette_size() const { return epochs() * iters_per_epoch(); }  // k
    int color_width() const { return ceil_log2(palette_size() + 1); }  // W
};

// Colors are pairs (epoch i, iteration j) with a 1-based flat index
// i*T_iter + j in [1, k]; index 0 is reserved for "no color" so the all-zero
// beep word can never collide with a real color.
struct Color {
    int epoch = 0;
    int iter = 1;  // 1-based

    int index(const HbdParams& p) const { return epoch * p.iters_per_epoch() + iter; }
    static Color from_index(int index, const HbdParams& p);
};

inline constexpr int kNoColor = 0;

struct HbdSolution {
    std::vector<int> edge_color;                    // per hyperedge, 0 = no color
    std::vector<std::vector<int>> vertex_colorset;  // per vertex, sorted indices
    int palette_size = 0;
};

// Abstract decay process: epoch i in [0, E), iteration j in [1, T_iter];
// every vertex samples X ~ Bernoulli(2^-i) and joins the color set on
// success; a still-uncolored hyperedge takes color (i,j) iff exactly one of
// its members sampled 1. Deterministic per seed. Hyperedges may remain
// uncolored (whp tail); callers decide whether that fails the run.
HbdSolution solve_hbd_abstract(const Hypergraph& h, const HbdParams& params, uint64_t seed);

struct HbdViolation {
    enum class Kind { UncoloredNonempty, ColoredEmpty, ZeroWitnesses, MultipleWitnesses };
    int edge = 0;
    Kind kind{};
    int witness_count = 0;
    std::string describe() const;
};

struct HbdReport {
    std::vector<HbdViolation> violations;
    bool feasible() const { return violations.empty(); }
};

// Checks the decomposition constraints: color iff nonempty, and exactly one
// member of each colored hyperedge carries the color in its set. Throws
// std::invalid_argument on shape mismatch.
HbdReport verify_hbd(const Hypergraph& h, const HbdSolution& sol);

// Fixed-width MSB-first word for a color index; at least one bit is set since
// indices are 1-based, so silence is distinguishable from every color.
std::vector<uint8_t> color_word(int index, int width);
int color_from_word(const std::vector<uint8_t>& bits);

struct PaletteStats {
    int max_epoch_used = 0;
    int max_index_used = 0;
    std::vector<int> per_epoch;  // colored hyperedges per epoch
    double uncolored_fraction = 0.0;  // among nonempty hyperedges
};

PaletteStats palette_stats(const HbdSolution& sol, const Hypergraph& h, const HbdParams& params);

}  // namespace beep
