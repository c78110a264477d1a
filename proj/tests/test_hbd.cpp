#include <algorithm>

#include "doctest.h"

#include "beep/hbd.hpp"

using namespace beep;

TEST_CASE("parameter arithmetic") {
    HbdParams p = HbdParams::make(256, 4, 4);
    CHECK(p.epochs() == 9);
    CHECK(p.iters_per_epoch() == 32);
    CHECK(p.palette_size() == 288);
    CHECK(p.color_width() == 9);  // ceil(log2 289)

    HbdParams q = HbdParams::make(64, 4, 4);
    CHECK(q.epochs() == 7);
    CHECK(q.iters_per_epoch() == 24);
    CHECK(q.sub_iters() == 24);

    CHECK_THROWS(HbdParams::make(1));
    CHECK_THROWS(HbdParams::make(16, 0));
}

TEST_CASE("color index <-> (epoch, iteration) is a bijection") {
    HbdParams p = HbdParams::make(64);
    for (int idx = 1; idx <= p.palette_size(); ++idx) {
        Color c = Color::from_index(idx, p);
        CHECK(c.index(p) == idx);
        CHECK(c.epoch >= 0);
        CHECK(c.epoch < p.epochs());
        CHECK(c.iter >= 1);
        CHECK(c.iter <= p.iters_per_epoch());
    }
    CHECK_THROWS(Color::from_index(0, p));
    CHECK_THROWS(Color::from_index(p.palette_size() + 1, p));
}

TEST_CASE("a singleton hyperedge is colored in the first iteration") {
    // epoch 0 flips with probability 1, so exactly one member always flips
    Hypergraph h = Hypergraph::make(1, {{0}});
    HbdParams p = HbdParams::make(8);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto sol = solve_hbd_abstract(h, p, seed);
        CHECK(sol.edge_color[0] == 1);  // (epoch 0, iteration 1)
    }
}

TEST_CASE("a pair hyperedge is never colored in epoch 0 and usually by end of epoch 1") {
    Hypergraph h = Hypergraph::make(2, {{0, 1}});
    HbdParams p = HbdParams::make(16, 4, 4);  // T_iter = 16
    const int trials = 10000;
    int colored_by_epoch1 = 0;
    for (int t = 0; t < trials; ++t) {
        auto sol = solve_hbd_abstract(h, p, 1000 + t);
        int c = sol.edge_color[0];
        REQUIRE(c != kNoColor);
        Color col = Color::from_index(c, p);
        CHECK(col.epoch >= 1);  // both members flip at p=1
        if (col.epoch <= 1) ++colored_by_epoch1;
    }
    // per-iteration success in epoch 1 is 1/2; failing all T_iter iterations
    // has probability 2^-16
    double rate = static_cast<double>(colored_by_epoch1) / trials;
    CHECK(rate >= 1.0 - std::ldexp(1.0, -p.iters_per_epoch()) - 0.01);
}

TEST_CASE("witness probability for r=2 at p=1/2 is 1/4") {
    // Pr(X_u = 1 and X_u' = 0) estimated over 1e5 trials
    Rng rng(42);
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        bool x1 = rng.bernoulli(0.5), x2 = rng.bernoulli(0.5);
        if (x1 && !x2) ++hits;
    }
    double est = static_cast<double>(hits) / trials;
    CHECK(est > 0.23);
    CHECK(est < 0.27);
}

TEST_CASE("verify_hbd accepts a hand-built feasible solution") {
    Hypergraph h = Hypergraph::make(2, {{0}, {0, 1}});
    HbdSolution sol;
    sol.palette_size = 10;
    sol.edge_color = {1, 2};
    sol.vertex_colorset = {{1}, {2}};
    CHECK(verify_hbd(h, sol).feasible());

    SUBCASE("two witnesses for one color") {
        sol.vertex_colorset = {{1, 2}, {2}};
        auto report = verify_hbd(h, sol);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].edge == 1);
        CHECK(report.violations[0].kind == HbdViolation::Kind::MultipleWitnesses);
    }
    SUBCASE("colored empty hyperedge") {
        Hypergraph h2 = Hypergraph::make(2, {{0}, {0, 1}, {}});
        HbdSolution s2 = sol;
        s2.edge_color = {1, 2, 5};
        s2.vertex_colorset = {{1}, {2}};
        auto report = verify_hbd(h2, s2);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].kind == HbdViolation::Kind::ColoredEmpty);
    }
    SUBCASE("zero witnesses") {
        sol.vertex_colorset = {{1}, {}};
        auto report = verify_hbd(h, sol);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].kind == HbdViolation::Kind::ZeroWitnesses);
    }
    SUBCASE("shape mismatch throws") {
        sol.edge_color = {1};
        CHECK_THROWS_AS(verify_hbd(h, sol), std::invalid_argument);
    }
}

TEST_CASE("solver soundness: every assigned color has exactly one witness") {
    // holds with probability 1 by construction, checked over random instances
    for (uint64_t seed = 0; seed < 30; ++seed) {
        Hypergraph h = gen_random_hypergraph(16, 48, 6, seed, 0.05);
        HbdParams p = HbdParams::make(64);
        auto sol = solve_hbd_abstract(h, p, seed * 31 + 1);
        for (int e = 0; e < h.edge_count(); ++e) {
            int c = sol.edge_color[e];
            if (c == kNoColor) continue;
            int witnesses = 0;
            for (int u : h.edges[e])
                if (std::binary_search(sol.vertex_colorset[u].begin(),
                                       sol.vertex_colorset[u].end(), c))
                    ++witnesses;
            CHECK(witnesses == 1);
        }
        auto report = verify_hbd(h, sol);
        for (const auto& v : report.violations)
            CHECK(v.kind == HbdViolation::Kind::UncoloredNonempty);
    }
}

TEST_CASE("solver is deterministic per seed and max index stays within k") {
    Hypergraph h = gen_random_hypergraph(32, 100, 5, 9);
    HbdParams p = HbdParams::make(132);
    auto a = solve_hbd_abstract(h, p, 77);
    auto b = solve_hbd_abstract(h, p, 77);
    CHECK(a.edge_color == b.edge_color);
    CHECK(a.vertex_colorset == b.vertex_colorset);
    for (int c : a.edge_color) CHECK(c <= p.palette_size());
    auto c = solve_hbd_abstract(h, p, 78);
    CHECK(a.edge_color != c.edge_color);
}

TEST_CASE("color_word encodes MSB-first with at least one set bit") {
    CHECK(color_word(1, 4) == std::vector<uint8_t>{0, 0, 0, 1});
    CHECK(color_word(9, 4) == std::vector<uint8_t>{1, 0, 0, 1});
    CHECK(color_from_word(color_word(9, 4)) == 9);
    CHECK_THROWS(color_word(0, 4));
    CHECK_THROWS(color_word(16, 4));
    for (int idx = 1; idx < 32; ++idx) {
        auto bits = color_word(idx, 5);
        CHECK(std::count(bits.begin(), bits.end(), 1) >= 1);
        CHECK(color_from_word(bits) == idx);
    }
}

TEST_CASE("palette_stats") {
    HbdParams p = HbdParams::make(16);
    SUBCASE("all-singleton edges use epoch 0 only") {
        Hypergraph h = Hypergraph::make(3, {{0}, {1}, {2}});
        auto sol = solve_hbd_abstract(h, p, 5);
        auto st = palette_stats(sol, h, p);
        CHECK(st.max_epoch_used == 0);
        CHECK(st.uncolored_fraction == 0.0);
    }
    SUBCASE("empty hypergraph gives all-zero stats") {
        Hypergraph h = Hypergraph::make(4, {});
        auto sol = solve_hbd_abstract(h, p, 5);
        auto st = palette_stats(sol, h, p);
        CHECK(st.max_epoch_used == 0);
        CHECK(st.max_index_used == 0);
        CHECK(st.uncolored_fraction == 0.0);
    }
    SUBCASE("rank-r edges are colored by epoch floor(log2 r) almost always") {
        const int r = 6;  // floor(log2 6) = 2
        std::vector<int> members(r);
        for (int i = 0; i < r; ++i) members[i] = i;
        Hypergraph h = Hypergraph::make(r, {members});
        int within = 0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            auto sol = solve_hbd_abstract(h, p, 500 + t);
            REQUIRE(sol.edge_color[0] != kNoColor);
            auto st = palette_stats(sol, h, p);
            if (st.max_epoch_used <= 2) ++within;
        }
        CHECK(static_cast<double>(within) / trials >= 0.99);
    }
}

TEST_CASE("feasibility rate over random instances") {
    int feasible = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        Hypergraph h = gen_random_hypergraph(24, 96, 8, 9000 + t, 0.05);
        HbdParams p = HbdParams::make(h.n_vertices + h.edge_count());
        auto sol = solve_hbd_abstract(h, p, 40 + t);
        if (verify_hbd(h, sol).feasible()) ++feasible;
    }
    CHECK(feasible == trials);
}
