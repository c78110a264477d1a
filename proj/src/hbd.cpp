#include "beep/hbd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beep {

HbdParams HbdParams::make(int n_bound, int c1, int c2) {
    if (n_bound < 2) throw std::invalid_argument("HbdParams: n_bound must be >= 2");
    if (c1 < 1 || c2 < 1) throw std::invalid_argument("HbdParams: c1 and c2 must be >= 1");
    return HbdParams{n_bound, c1, c2};
}

namespace {
int ceil_mult_log2(int c, int n) {
    double v = static_cast<double>(c) * std::log2(static_cast<double>(n));
    return static_cast<int>(std::ceil(v - 1e-9));
}
}  // namespace

int HbdParams::iters_per_epoch() const { return ceil_mult_log2(c1, n_bound); }
int HbdParams::sub_iters() const { return ceil_mult_log2(c2, n_bound); }

Color Color::from_index(int index, const HbdParams& p) {
    if (index < 1 || index > p.palette_size())
        throw std::out_of_range("color index out of palette range");
    int t = p.iters_per_epoch();
    return Color{(index - 1) / t, (index - 1) % t + 1};
}

HbdSolution solve_hbd_abstract(const Hypergraph& h, const HbdParams& params, uint64_t seed) {
    Rng rng(seed);
    HbdSolution sol;
    sol.palette_size = params.palette_size();
    sol.edge_color.assign(h.edge_count(), kNoColor);
    sol.vertex_colorset.assign(h.n_vertices, {});

    const int E = params.epochs();
    const int T = params.iters_per_epoch();
    std::vector<uint8_t> flipped(h.n_vertices);
    for (int i = 0; i < E; ++i) {
        const double p = std::ldexp(1.0, -i);  // 2^-i
        for (int j = 1; j <= T; ++j) {
            const int idx = i * T + j;
            for (int u = 0; u < h.n_vertices; ++u) {
                flipped[u] = rng.bernoulli(p);
                if (flipped[u]) sol.vertex_colorset[u].push_back(idx);
            }
            for (int e = 0; e < h.edge_count(); ++e) {
                if (sol.edge_color[e] != kNoColor) continue;
                int ones = 0;
                for (int u : h.edges[e]) ones += flipped[u];
                if (ones == 1 && !h.edges[e].empty()) sol.edge_color[e] = idx;
            }
        }
    }
    return sol;
}

std::string HbdViolation::describe() const {
    std::string k;
    switch (kind) {
        case Kind::UncoloredNonempty: k = "uncolored-nonempty"; break;
        case Kind::ColoredEmpty: k = "colored-empty"; break;
        case Kind::ZeroWitnesses: k = "zero-witnesses"; break;
        case Kind::MultipleWitnesses:
            k = "multiple-witnesses(" + std::to_string(witness_count) + ")";
            break;
    }
    return "hyperedge " + std::to_string(edge) + ": " + k;
}

HbdReport verify_hbd(const Hypergraph& h, const HbdSolution& sol) {
    if (static_cast<int>(sol.edge_color.size()) != h.edge_count() ||
        static_cast<int>(sol.vertex_colorset.size()) != h.n_vertices)
        throw std::invalid_argument("verify_hbd: solution shape does not match hypergraph");
    for (int c : sol.edge_color)
        if (c < 0 || c > sol.palette_size)
            throw std::invalid_argument("verify_hbd: edge color outside palette");
    for (const auto& cs : sol.vertex_colorset)
        for (int c : cs)
            if (c < 1 || c > sol.palette_size)
                throw std::invalid_argument("verify_hbd: color set entry outside palette");

    HbdReport report;
    using Kind = HbdViolation::Kind;
    for (int e = 0; e < h.edge_count(); ++e) {
        const bool empty = h.edges[e].empty();
        const int c = sol.edge_color[e];
        if (c == kNoColor) {
            if (!empty) report.violations.push_back({e, Kind::UncoloredNonempty, 0});
            continue;
        }
        if (empty) {
            report.violations.push_back({e, Kind::ColoredEmpty, 0});
            continue;
        }
        int witnesses = 0;
        for (int u : h.edges[e]) {
            const auto& cs = sol.vertex_colorset[u];
            if (std::binary_search(cs.begin(), cs.end(), c)) ++witnesses;
        }
        if (witnesses == 0) report.violations.push_back({e, Kind::ZeroWitnesses, 0});
        if (witnesses > 1) report.violations.push_back({e, Kind::MultipleWitnesses, witnesses});
    }
    return report;
}

std::vector<uint8_t> color_word(int index, int width) {
    if (width < 1) throw std::invalid_argument("color_word: width must be >= 1");
    if (index < 1 || index >= (1 << width))
        throw std::out_of_range("color_word: index " + std::to_string(index) +
                                " not in [1, 2^" + std::to_string(width) + "-1]");
    std::vector<uint8_t> bits(width);
    for (int b = 0; b < width; ++b) bits[b] = (index >> (width - 1 - b)) & 1;
    return bits;
}

int color_from_word(const std::vector<uint8_t>& bits) {
    int v = 0;
    for (uint8_t b : bits) v = (v << 1) | (b ? 1 : 0);
    return v;
}

PaletteStats palette_stats(const HbdSolution& sol, const Hypergraph& h, const HbdParams& params) {
    PaletteStats st;
    st.per_epoch.assign(params.epochs(), 0);
    int nonempty = 0, uncolored = 0;
    for (int e = 0; e < h.edge_count(); ++e) {
        if (h.edges[e].empty()) continue;
        ++nonempty;
        int c = sol.edge_color[e];
        if (c == kNoColor) {
            ++uncolored;
            continue;
        }
        Color col = Color::from_index(c, params);
        st.per_epoch[col.epoch]++;
        st.max_epoch_used = std::max(st.max_epoch_used, col.epoch);
        st.max_index_used = std::max(st.max_index_used, c);
    }
    st.uncolored_fraction = nonempty == 0 ? 0.0 : static_cast<double>(uncolored) / nonempty;
    return st;
}

}  // namespace beep
