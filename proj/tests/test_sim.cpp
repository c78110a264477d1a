#include <sstream>

#include "doctest.h"

#include "beep/sim.hpp"

using namespace beep;

namespace {

// Fixed script of actions; finishes after the last one.
class ScriptProgram : public NodeProgram {
public:
    explicit ScriptProgram(std::vector<Action> actions, std::string tag = "run")
        : actions_(std::move(actions)), tag_(std::move(tag)) {}
    std::optional<Action> step(int local_round, Observation) override {
        size_t i = static_cast<size_t>(local_round) - 1;
        if (i >= actions_.size()) return std::nullopt;
        return actions_[i];
    }
    std::string_view state_tag() const override { return tag_; }
    std::vector<Observation> seen;

private:
    std::vector<Action> actions_;
    std::string tag_;
};

// Listens forever, recording observations; finishes after max_rounds steps.
class ListenerProgram : public NodeProgram {
public:
    explicit ListenerProgram(int rounds) : rounds_(rounds) {}
    std::optional<Action> step(int local_round, Observation prev) override {
        if (local_round > 1) seen.push_back(prev);
        if (local_round > rounds_) return std::nullopt;
        return Action::Listen;
    }
    std::string_view state_tag() const override { return "listen"; }
    std::vector<Observation> seen;

private:
    int rounds_;
};

std::vector<std::unique_ptr<NodeProgram>> programs(std::vector<NodeProgram*> raw) {
    std::vector<std::unique_ptr<NodeProgram>> out;
    for (NodeProgram* p : raw) out.emplace_back(p);
    return out;
}

}  // namespace

TEST_CASE("wake convention: beep-triggered wake acts one round after the beep") {
    Graph g = gen_path(2);
    auto progs = programs({new ScriptProgram({Action::Beep}), new ScriptProgram({Action::Beep})});
    auto res = run_simulation(g, progs, WakeSchedule::single(0, 1));
    CHECK(res.all_finished);
    CHECK(res.trace.rounds == 2);
    CHECK(res.trace.nodes[0].wake == 1);
    CHECK(res.trace.nodes[1].wake == 2);
    CHECK(res.trace.at(0, 1)->action == Action::Beep);
    CHECK(res.trace.at(1, 2)->action == Action::Beep);
    CHECK(res.trace.beeps == 2);
}

TEST_CASE("terminal markers appear only in rounds where someone still acts") {
    Graph g = gen_path(2);
    auto progs = programs({new ScriptProgram({Action::Beep}), new ScriptProgram({Action::Beep})});
    auto res = run_simulation(g, progs, WakeSchedule::single(0, 1));
    // A beeped in round 1; in round 2 its program finished while B beeped, so
    // round 2 holds A's terminal marker and B's beep. B's own finish falls in
    // round 3 where nothing happens, so the run stays 2 rounds long.
    int records = 0;
    for (int r = 1; r <= res.trace.rounds; ++r)
        for (NodeId v = 0; v < 2; ++v)
            if (res.trace.at(v, r)) ++records;
    CHECK(records == 3);
    CHECK(res.trace.at(0, 2)->terminal);
    CHECK(res.trace.at(1, 2)->action == Action::Beep);
}

TEST_CASE("listeners observe the OR of neighbor beeps; beepers observe nothing") {
    Graph g = gen_cycle(3);
    SUBCASE("one beeper, two listeners") {
        auto beeper = new ScriptProgram({Action::Beep, Action::Listen});
        auto l1 = new ListenerProgram(2);
        auto l2 = new ListenerProgram(2);
        auto progs = programs({beeper, l1, l2});
        WakeSchedule sched;
        sched.rounds = {{0, 1}, {1, 1}, {2, 1}};
        auto res = run_simulation(g, progs, sched);
        CHECK(res.trace.at(1, 1)->obs == Observation::HeardBeep);
        CHECK(res.trace.at(2, 1)->obs == Observation::HeardBeep);
        CHECK(res.trace.at(0, 1)->obs == Observation::Nothing);
        CHECK(l1->seen.front() == Observation::HeardBeep);
    }
    SUBCASE("two simultaneous beepers are indistinguishable from one") {
        auto b1 = new ScriptProgram({Action::Beep});
        auto b2 = new ScriptProgram({Action::Beep});
        auto l = new ListenerProgram(1);
        auto progs = programs({b1, b2, l});
        WakeSchedule sched;
        sched.rounds = {{0, 1}, {1, 1}, {2, 1}};
        auto res = run_simulation(g, progs, sched);
        CHECK(res.trace.at(2, 1)->obs == Observation::HeardBeep);
        CHECK(l->seen == std::vector<Observation>{Observation::HeardBeep});
    }
}

TEST_CASE("identical inputs give bit-identical traces") {
    Graph g = gen_random_gnp(12, 0.3, 5);
    auto make = [&] {
        std::vector<std::unique_ptr<NodeProgram>> ps;
        for (int v = 0; v < 12; ++v)
            ps.push_back(std::make_unique<ScriptProgram>(
                std::vector<Action>{Action::Beep, Action::Listen, Action::Beep}));
        return ps;
    };
    auto p1 = make();
    auto p2 = make();
    SimOptions opt;
    opt.seed = 9;
    auto r1 = run_simulation(g, p1, WakeSchedule::single(3, 1), opt);
    auto r2 = run_simulation(g, p2, WakeSchedule::single(3, 1), opt);
    CHECK(trace_to_jsonl(r1.trace) == trace_to_jsonl(r2.trace));
}

TEST_CASE("max_rounds exhaustion reports a timeout with the partial trace") {
    Graph g = gen_path(2);
    auto progs = programs({new ListenerProgram(1 << 20), new ListenerProgram(1 << 20)});
    SimOptions opt;
    opt.max_rounds = 50;
    auto res = run_simulation(g, progs, WakeSchedule::single(0, 1), opt);
    CHECK(res.timed_out);
    CHECK(!res.all_finished);
    CHECK(res.trace.rounds == 50);
}

TEST_CASE("scheduled wake of an already-awake node is ignored") {
    Graph g = gen_path(2);
    auto progs =
        programs({new ScriptProgram({Action::Beep, Action::Idle}), new ListenerProgram(3)});
    WakeSchedule sched;
    sched.rounds = {{0, 1}, {1, 4}};  // node 1 is beep-woken at round 2 already
    auto res = run_simulation(g, progs, sched);
    CHECK(res.trace.nodes[1].wake == 2);
}

TEST_CASE("trace export matches the documented JSONL schema") {
    Graph g = gen_path(2);
    auto progs = programs({new ScriptProgram({Action::Beep}), new ScriptProgram({Action::Beep})});
    auto res = run_simulation(g, progs, WakeSchedule::single(0, 1));
    std::string jsonl = trace_to_jsonl(res.trace);
    CHECK(jsonl ==
          R"({"action":"B","node":0,"obs":null,"round":1,"state":"run"})"
          "\n"
          R"({"action":"I","node":0,"obs":null,"round":2,"state":"end"})"
          "\n"
          R"({"action":"B","node":1,"obs":null,"round":2,"state":"run"})"
          "\n");

    auto summary = summarize(res.trace);
    CHECK(summary.rounds == 2);
    CHECK(summary.beeps == 2);

    SUBCASE("empty trace exports an empty stream") {
        Trace t;
        t.nodes.resize(2);
        CHECK(trace_to_jsonl(t).empty());
    }

    SUBCASE("round-trip through the loader") {
        std::istringstream in(jsonl);
        auto loaded = load_trace(in, 2);
        CHECK(loaded.structural_problems.empty());
        CHECK(loaded.trace.rounds == 2);
        CHECK(loaded.trace.at(0, 1)->action == Action::Beep);
        CHECK(loaded.trace.at(1, 2)->action == Action::Beep);
    }
}

TEST_CASE("conformance checker catches corrupted traces") {
    Graph g = gen_path(3);
    auto progs = programs({new ScriptProgram({Action::Beep, Action::Listen}),
                           new ScriptProgram({Action::Beep, Action::Listen}),
                           new ScriptProgram({Action::Beep, Action::Listen})});
    auto sched = WakeSchedule::single(0, 1);
    auto res = run_simulation(g, progs, sched);
    CHECK(check_trace_conformance(g, res.trace, &sched).ok());

    SUBCASE("a beeper recording an observation violates (i)") {
        Trace t = res.trace;
        for (auto& e : t.nodes[0].entries)
            if (e.action == Action::Beep) e.obs = Observation::HeardBeep;
        auto report = check_trace_conformance(g, t, &sched);
        CHECK(!report.ok());
        CHECK(report.violations.front().what.find("non-listening") != std::string::npos);
    }
    SUBCASE("a flipped listener observation violates (ii)") {
        Trace t = res.trace;
        bool flipped = false;
        for (auto& e : t.nodes[1].entries)
            if (!flipped && e.action == Action::Listen) {
                e.obs = e.obs == Observation::HeardBeep ? Observation::Silence
                                                        : Observation::HeardBeep;
                flipped = true;
            }
        REQUIRE(flipped);
        CHECK(!check_trace_conformance(g, t, &sched).ok());
    }
    SUBCASE("a wake without cause violates (iii)") {
        Trace t = res.trace;
        t.nodes[2].wake = 1;  // claims to act before any neighbor beeped
        auto report = check_trace_conformance(g, t, &sched);
        CHECK(!report.ok());
    }
    SUBCASE("without a schedule, causeless wakes are only reported") {
        auto report = check_trace_conformance(g, res.trace, nullptr);
        CHECK(report.ok());
        CHECK(report.assumed_scheduled == std::vector<NodeId>{0});
    }
}
