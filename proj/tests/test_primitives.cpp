#include <functional>
#include <map>

#include "doctest.h"

#include "beep/graph.hpp"
#include "beep/primitives.hpp"
#include "beep/sim.hpp"
#include "beep/verify.hpp"

using namespace beep;

namespace {

class FragmentProgram : public NodeProgram {
public:
    explicit FragmentProgram(std::function<ProgramCoro()> make) : make_(std::move(make)) {}
    void on_wake(Rng) override { coro_ = make_(); }
    std::optional<Action> step(int, Observation prev) override { return coro_.resume(prev); }
    std::string_view state_tag() const override { return "frag"; }

private:
    std::function<ProgramCoro()> make_;
    ProgramCoro coro_;
};

WakeSchedule all_at_round_one(int n) {
    WakeSchedule s;
    for (int v = 0; v < n; ++v) s.rounds[v] = 1;
    return s;
}

// Drives step-level EstimateDiameter fragments directly, one step at a time,
// with the same observation semantics as the round engine.
struct EdDrive {
    std::vector<EstimateDiameterResult> results;
    std::vector<int> finish_step;
};

EdDrive drive_estimate_diameter(const Graph& g, NodeId s, int word_width, int max_steps = 100000) {
    const int n = g.node_count();
    EdDrive out;
    out.results.resize(n);
    out.finish_step.assign(n, 0);
    std::vector<ProgramCoro> frags;
    frags.reserve(n);
    for (NodeId v = 0; v < n; ++v)
        frags.push_back(estimate_diameter({v == s, word_width}, out.results[v]));
    std::vector<Observation> pending(n, Observation::Nothing);
    std::vector<uint8_t> done(n, 0);

    for (int step = 1; step <= max_steps; ++step) {
        std::vector<uint8_t> beeps(n, 0), listens(n, 0);
        bool any = false;
        for (NodeId v = 0; v < n; ++v) {
            if (done[v]) continue;
            auto a = frags[v].resume(pending[v]);
            pending[v] = Observation::Nothing;
            if (!a) {
                done[v] = 1;
                out.finish_step[v] = step - 1;
                continue;
            }
            any = true;
            if (*a == Action::Beep) beeps[v] = 1;
            if (*a == Action::Listen) listens[v] = 1;
        }
        if (!any) break;
        for (NodeId v = 0; v < n; ++v) {
            if (!listens[v]) continue;
            bool h = false;
            for (NodeId nb : g.neighbors(v)) h = h || beeps[nb];
            pending[v] = h ? Observation::HeardBeep : Observation::Silence;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("beep wave broadcast of one-bit messages on a 3-path") {
    Graph g = gen_path(3);
    std::vector<BeepWaveResult> res(3);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < 3; ++v) {
        BeepWaveSpec spec;
        spec.layer = v;
        spec.d_max = 2;
        spec.length = 1;
        if (v == 0) spec.message = {1};
        progs.push_back(
            std::make_unique<FragmentProgram>([spec, &res, v] { return beep_wave_broadcast(spec, res[v]); }));
    }
    auto sim = run_simulation(g, progs, all_at_round_one(3));
    CHECK(sim.all_finished);
    CHECK(sim.trace.rounds == 3 * (1 + 2));
    for (int v = 0; v < 3; ++v) {
        CHECK(res[v].decoded == std::vector<uint8_t>{1});
        CHECK(res[v].flags.empty());
    }
    // relays fire one hop per round: source round 1, layer 1 round 2, layer 2 round 3
    CHECK(sim.trace.at(0, 1)->action == Action::Beep);
    CHECK(sim.trace.at(1, 2)->action == Action::Beep);
    CHECK(sim.trace.at(2, 3)->action == Action::Beep);
}

TEST_CASE("beep wave broadcast decodes 101 everywhere on a 5-path") {
    Graph g = gen_path(5);
    std::vector<BeepWaveResult> res(5);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < 5; ++v) {
        BeepWaveSpec spec;
        spec.layer = v;
        spec.d_max = 4;
        spec.length = 3;
        if (v == 0) spec.message = {1, 0, 1};
        progs.push_back(std::make_unique<FragmentProgram>(
            [spec, &res, v] { return beep_wave_broadcast(spec, res[v]); }));
    }
    auto sim = run_simulation(g, progs, all_at_round_one(5));
    CHECK(sim.all_finished);
    CHECK(sim.trace.rounds == 3 * (3 + 4));
    for (int v = 0; v < 5; ++v) {
        CHECK(res[v].decoded == std::vector<uint8_t>{1, 0, 1});
        CHECK(res[v].flags.empty());
    }
}

TEST_CASE("an all-zero message is pure silence and still decodes") {
    Graph g = gen_path(4);
    std::vector<BeepWaveResult> res(4);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < 4; ++v) {
        BeepWaveSpec spec;
        spec.layer = v;
        spec.d_max = 3;
        spec.length = 2;
        if (v == 0) spec.message = {0, 0};
        progs.push_back(std::make_unique<FragmentProgram>(
            [spec, &res, v] { return beep_wave_broadcast(spec, res[v]); }));
    }
    auto sim = run_simulation(g, progs, all_at_round_one(4));
    CHECK(sim.trace.beeps == 0);
    for (int v = 0; v < 4; ++v) CHECK(res[v].decoded == std::vector<uint8_t>{0, 0});
}

TEST_CASE("reverse wave: one wave walks from the top layer to the source") {
    Graph g = gen_path(3);  // s - a - b
    std::vector<ReverseWaveResult> res(3);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < 3; ++v) {
        ReverseWaveSpec spec;
        spec.layer = v;
        spec.triplet_count = 4;
        if (v == 2) spec.initiate_at = {1};
        progs.push_back(std::make_unique<FragmentProgram>(
            [spec, &res, v] { return reverse_beep_wave(spec, res[v]); }));
    }
    auto sim = run_simulation(g, progs, all_at_round_one(3));
    CHECK(sim.all_finished);
    REQUIRE(res[2].participated.size() == 1);
    CHECK(res[2].participated[0].triplet == 1);
    CHECK(res[2].participated[0].initiated);
    REQUIRE(res[1].participated.size() == 1);
    CHECK(res[1].participated[0].triplet == 2);
    CHECK(!res[1].participated[0].initiated);
    REQUIRE(res[0].participated.size() == 1);
    CHECK(res[0].participated[0].triplet == 3);
    // beeps land in round (layer mod 3) of the triplet
    CHECK(sim.trace.at(2, TripletPhase::round_of(1, 2))->action == Action::Beep);
    CHECK(sim.trace.at(1, TripletPhase::round_of(2, 1))->action == Action::Beep);
    CHECK(sim.trace.at(0, TripletPhase::round_of(3, 0))->action == Action::Beep);
}

TEST_CASE("a layer-i node never reacts to beeps from layer i-1") {
    Graph g = gen_path(3);
    std::vector<ReverseWaveResult> res(3);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < 3; ++v) {
        ReverseWaveSpec spec;
        spec.layer = v;
        spec.triplet_count = 4;
        if (v == 0) spec.initiate_at = {1};  // the source-side layer beeps
        progs.push_back(std::make_unique<FragmentProgram>(
            [spec, &res, v] { return reverse_beep_wave(spec, res[v]); }));
    }
    run_simulation(g, progs, all_at_round_one(3));
    CHECK(res[1].participated.empty());
    CHECK(res[2].participated.empty());
}

TEST_CASE("waves three triplets apart never occupy adjacent layers in one triplet") {
    const int n = 10;
    Graph g = gen_path(n);
    std::vector<ReverseWaveResult> res(n);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    const int T = 16;
    for (int v = 0; v < n; ++v) {
        ReverseWaveSpec spec;
        spec.layer = v;
        spec.triplet_count = T;
        if (v == n - 1) spec.initiate_at = {1, 4};
        progs.push_back(std::make_unique<FragmentProgram>(
            [spec, &res, v] { return reverse_beep_wave(spec, res[v]); }));
    }
    auto sim = run_simulation(g, progs, all_at_round_one(n));
    // every interior node relays both waves, three triplets apart
    for (int v = 0; v < n - 1; ++v) {
        REQUIRE(res[v].participated.size() == 2);
        CHECK(res[v].participated[1].triplet - res[v].participated[0].triplet == 3);
    }
    // per triplet, beeping layers are never adjacent
    for (int t = 1; t <= T; ++t) {
        std::vector<int> layers;
        for (int v = 0; v < n; ++v)
            for (int off = 0; off < 3; ++off) {
                const TraceEntry* e = sim.trace.at(v, TripletPhase::round_of(t, off));
                if (e && e->action == Action::Beep) layers.push_back(v);
            }
        for (size_t a = 0; a < layers.size(); ++a)
            for (size_t b = a + 1; b < layers.size(); ++b)
                CHECK(std::abs(layers[a] - layers[b]) >= 2);
    }
}

TEST_CASE("reverse waves reach exactly the nodes on shortest paths to the initiators") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = gen_random_gnp(18, 0.18, seed);
        auto ld = bfs_layers(g, 0);
        // initiators: every node in the top layer
        const int i = ld.d_max;
        std::vector<NodeId> initiators = ld.layers[i];
        std::vector<ReverseWaveResult> res(18);
        std::vector<std::unique_ptr<NodeProgram>> progs;
        for (int v = 0; v < 18; ++v) {
            ReverseWaveSpec spec;
            spec.layer = ld.dist[v];
            spec.triplet_count = 2 * i + 2;
            if (ld.dist[v] == i) spec.initiate_at = {1};
            progs.push_back(std::make_unique<FragmentProgram>(
                [spec, &res, v] { return reverse_beep_wave(spec, res[v]); }));
        }
        run_simulation(g, progs, all_at_round_one(18));
        auto sp = compute_sp_sets(g, 0, initiators);
        for (int v = 0; v < 18; ++v) {
            bool participated = !res[v].participated.empty();
            CHECK(participated == (sp.in_sp[v][i] != 0));
        }
    }
}

TEST_CASE("EstimateDiameter on the 3-path: silence window gives r=9, d_max=2") {
    Graph g = gen_path(3);
    auto out = drive_estimate_diameter(g, 0, 2);
    CHECK(out.results[0].silence_r == 9);
    CHECK(out.results[0].d_max == 2);
    CHECK(out.results[1].d_v == 1);
    CHECK(out.results[2].d_v == 2);
    for (int v = 0; v < 3; ++v) {
        CHECK(out.results[v].d_max == 2);
        CHECK(out.results[v].flags.empty());
        CHECK(out.finish_step[v] == out.finish_step[0]);
    }
}

TEST_CASE("EstimateDiameter on a 2-path") {
    Graph g = gen_path(2);
    auto out = drive_estimate_diameter(g, 0, 2);
    CHECK(out.results[0].silence_r == 6);
    CHECK(out.results[0].d_max == 1);
    CHECK(out.results[1].d_v == 1);
    CHECK(out.results[1].d_max == 1);
    CHECK(out.finish_step[0] == out.finish_step[1]);
}

TEST_CASE("EstimateDiameter: everyone finishes in the same step on random graphs") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = gen_random_gnp(30, 0.12, seed);
        auto ld = bfs_layers(g, 0);
        auto out = drive_estimate_diameter(g, 0, 6);
        for (int v = 0; v < 30; ++v) {
            CHECK(out.results[v].d_v == ld.dist[v]);
            CHECK(out.results[v].d_max == ld.d_max);
            CHECK(out.results[v].flags.empty());
            CHECK(out.finish_step[v] == out.finish_step[0]);
        }
        CHECK(out.results[0].silence_r == 3 * (ld.d_max + 1));
    }
}

TEST_CASE("EstimateDiameter framing survives early-exit nodes with stray relays nearby") {
    // star-with-tail: node 2 hangs off the hub and exits its relay loop long
    // before the d_max broadcast starts; the residue filter must reject the
    // hub's late reverse-wave relays.
    Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    auto ld = bfs_layers(g, 0);
    CHECK(ld.d_max == 3);
    auto out = drive_estimate_diameter(g, 0, 3);
    for (int v = 0; v < 5; ++v) {
        CHECK(out.results[v].d_v == ld.dist[v]);
        CHECK(out.results[v].d_max == 3);
        CHECK(out.finish_step[v] == out.finish_step[0]);
    }
}
