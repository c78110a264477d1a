#include "beep/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "beep/primitives.hpp"

namespace beep {

std::vector<int> DistancePolicy::apply(const std::vector<int>& occupied) const {
    if (occupied.empty()) return {};
    std::vector<int> sorted = occupied;
    std::sort(sorted.begin(), sorted.end());
    switch (kind) {
        case Kind::Min: return {sorted.front()};
        case Kind::Max: return {sorted.back()};
        case Kind::All: return sorted;
        case Kind::FixedSet: {
            std::vector<int> j;
            for (int i : sorted)
                if (std::find(fixed.begin(), fixed.end(), i) != fixed.end()) j.push_back(i);
            return j;
        }
    }
    return {};
}

DistancePolicy DistancePolicy::parse(const std::string& text) {
    DistancePolicy p;
    if (text == "min") {
        p.kind = Kind::Min;
    } else if (text == "max") {
        p.kind = Kind::Max;
    } else if (text == "all") {
        p.kind = Kind::All;
    } else if (text.rfind("fixed:", 0) == 0) {
        p.kind = Kind::FixedSet;
        std::istringstream is(text.substr(6));
        std::string piece;
        while (std::getline(is, piece, ','))
            if (!piece.empty()) p.fixed.push_back(std::stoi(piece));
    } else {
        throw std::invalid_argument("unknown policy '" + text + "' (min|max|all|fixed:a,b,...)");
    }
    return p;
}

std::string DistancePolicy::name() const {
    switch (kind) {
        case Kind::Min: return "min";
        case Kind::Max: return "max";
        case Kind::All: return "all";
        case Kind::FixedSet: {
            std::string s = "fixed:";
            for (size_t i = 0; i < fixed.size(); ++i)
                s += (i ? "," : "") + std::to_string(fixed[i]);
            return s;
        }
    }
    return "?";
}

std::vector<int> NodeKnowledge::j_set() const {
    std::vector<int> j;
    for (size_t i = 0; i < learned_j.size(); ++i)
        if (learned_j[i]) j.push_back(static_cast<int>(i) + 1);
    return j;
}

ProgramCoro beeping_hbd_round_schedule(HbdRole role, const HbdParams& params, Rng& rng,
                                       int* out_color, std::vector<int>* out_colorset,
                                       int max_iterations) {
    const int E = params.epochs();
    const int T = params.iters_per_epoch();
    const int S = params.sub_iters();
    int budget = E * T;
    if (max_iterations > 0) budget = std::min(budget, max_iterations);

    int done = 0;
    bool colored = false;
    for (int i = 0; i < E && done < budget; ++i) {
        const double p = std::ldexp(1.0, -i);
        for (int j = 1; j <= T && done < budget; ++j, ++done) {
            const int idx = i * T + j;
            if (role == HbdRole::Vertex) {
                const bool x = rng.bernoulli(p);
                if (x && out_colorset) out_colorset->push_back(idx);
                for (int s = 0; s < S; ++s) {
                    if (!x) {
                        (void)(co_yield Action::Idle);
                        (void)(co_yield Action::Idle);
                    } else if (rng.below(2) == 0) {
                        (void)(co_yield Action::Beep);
                        (void)(co_yield Action::Idle);
                    } else {
                        (void)(co_yield Action::Idle);
                        (void)(co_yield Action::Beep);
                    }
                }
            } else if (role == HbdRole::Hyperedge && !colored) {
                bool exactly_one_each = true;
                for (int s = 0; s < S; ++s) {
                    const bool h1 = heard(co_yield Action::Listen);
                    const bool h2 = heard(co_yield Action::Listen);
                    if (h1 == h2) exactly_one_each = false;  // 0 or 2 beeps in the pair
                }
                if (exactly_one_each) {
                    colored = true;
                    if (out_color) *out_color = idx;
                }
            } else {
                for (int s = 0; s < 2 * S; ++s) (void)(co_yield Action::Idle);
            }
        }
    }
    co_return;
}

namespace {

struct NodeCtx {
    bool is_source = false;
    bool is_destination = false;
    ProtocolConfig config;
    Rng rng{0};
    NodeKnowledge out;
    std::string tag;
};

ProgramCoro protocol_coro(NodeCtx& c) {
    // --- wake-up, first subphase: wake beep, then the synchronization wave ---
    c.tag = "w1";
    (void)(co_yield Action::Beep);
    (void)(co_yield Action::Idle);
    if (c.is_source) {
        (void)(co_yield Action::Idle);
        (void)(co_yield Action::Beep);  // local round 4 starts the sync wave
        (void)(co_yield Action::Idle);
        (void)(co_yield Action::Idle);
    } else {
        // Neighbors' wake beeps are all over by local round 2, so the first
        // beep heard from round 3 on is the sync wave.
        Observation o = co_yield Action::Listen;
        while (!heard(o)) o = co_yield Action::Listen;
        (void)(co_yield Action::Beep);
        (void)(co_yield Action::Idle);
        (void)(co_yield Action::Idle);
    }

    // --- second subphase: EstimateDiameter, one step per local round triplet.
    // Neighbor clocks differ by at most one round, so a beep in the middle
    // round of a triplet falls inside the neighbors' matching triplet.
    c.tag = "w2";
    EstimateDiameterResult ed;
    {
        EstimateDiameterSpec spec{c.is_source, c.config.dmax_word_width()};
        auto frag = estimate_diameter(spec, ed);
        Observation step_obs = Observation::Nothing;
        while (auto act = frag.resume(step_obs)) {
            if (*act == Action::Beep) {
                (void)(co_yield Action::Idle);
                (void)(co_yield Action::Beep);
                (void)(co_yield Action::Idle);
                step_obs = Observation::Nothing;
            } else if (*act == Action::Listen) {
                bool h = false;
                for (int i = 0; i < 3; ++i)
                    if (heard(co_yield Action::Listen)) h = true;
                step_obs = h ? Observation::HeardBeep : Observation::Silence;
            } else {
                for (int i = 0; i < 3; ++i) (void)(co_yield Action::Idle);
                step_obs = Observation::Nothing;
            }
        }
    }
    const int d_v = ed.d_v;
    const int d_max = ed.d_max;
    c.out.d_v = d_v;
    c.out.d_max = d_max;
    c.out.ed_silence_r = ed.silence_r;
    for (auto& f : ed.flags) c.out.flags.push_back("w2: " + f);
    if (d_max < 1 || d_v < 0 || d_v > d_max) {
        c.out.flags.push_back("w2: implausible distances, aborting node");
        c.out.z = 0;
        co_return;
    }
    // collapse the layer offset so the whole network is now in lockstep
    for (int i = 0; i < d_max - d_v; ++i) (void)(co_yield Action::Idle);

    // --- third subphase: distance gathering. Destinations in layer d start
    // wave d in triplet 3(d-1)+1; a node relaying in triplet r is on a
    // shortest path to layer (r+2+d_v)/4.
    c.tag = "w3";
    ReverseWaveSpec rw_spec;
    rw_spec.layer = d_v;
    rw_spec.triplet_count = 4 * d_max - 2;
    if (c.is_destination) rw_spec.initiate_at.push_back(3 * (d_v - 1) + 1);
    ReverseWaveResult rw;
    {
        auto frag = reverse_beep_wave(rw_spec, rw);
        Observation o = Observation::Nothing;
        while (auto act = frag.resume(o)) o = co_yield *act;
    }
    c.out.sp.assign(d_max + 1, 0);
    for (auto part : rw.participated) {
        if (part.initiated) {
            c.out.sp[d_v] = 1;
            continue;
        }
        const int num = part.triplet + 2 + d_v;
        if (num % 4 != 0)
            c.out.flags.push_back("w3: triplet " + std::to_string(part.triplet) +
                                  " gives a non-integer layer index");
        else if (num / 4 >= 1 && num / 4 <= d_max)
            c.out.sp[num / 4] = 1;
        else
            c.out.flags.push_back("w3: triplet " + std::to_string(part.triplet) +
                                  " gives an out-of-range layer index");
    }
    for (auto& f : rw.flags) c.out.flags.push_back("w3: " + f);

    // --- fourth subphase: the source applies the (source-private) policy and
    // broadcasts the indicator string of J; everyone filters against sp[].
    c.tag = "w4";
    BeepWaveSpec bw;
    bw.layer = d_v;
    bw.d_max = d_max;
    bw.length = d_max;
    if (c.is_source) {
        std::vector<int> occupied;
        for (int i = 1; i <= d_max; ++i)
            if (c.out.sp[i]) occupied.push_back(i);
        std::vector<int> j = c.config.policy.apply(occupied);
        bw.message.assign(d_max, 0);
        for (int idx : j)
            if (idx >= 1 && idx <= d_max) bw.message[idx - 1] = 1;
    }
    BeepWaveResult bwr;
    {
        auto frag = beep_wave_broadcast(bw, bwr);
        Observation o = Observation::Nothing;
        while (auto act = frag.resume(o)) o = co_yield *act;
    }
    c.out.learned_j = bwr.decoded;
    for (auto& f : bwr.flags) c.out.flags.push_back("w4: " + f);
    bool in_spj = false;
    for (int i = 1; i <= d_max; ++i)
        if (bwr.decoded[i - 1] && c.out.sp[i]) in_spj = true;
    c.out.in_sp_j = in_spj;

    if (c.config.wakeup_only || !in_spj) {
        c.out.z = 0;
        co_return;
    }

    // --- preprocessing: subphases (out,l) pair layers (L_i, L_{i+1}) for
    // i = l mod 3 with the hyperedge side listening below and the vertex side
    // beeping above; (in,l) swaps the roles. Beeping layers are 3 apart, so
    // concurrent pairs never interfere.
    const HbdParams& hp = c.config.hbd;
    for (int sub = 0; sub < 6; ++sub) {
        const bool outward = sub % 2 == 0;
        const int ell = sub / 2;
        c.tag = std::string("p.") + (outward ? "o" : "i") + std::to_string(ell);
        HbdRole role = HbdRole::Bystander;
        if (outward) {
            if (d_v <= d_max - 1 && d_v % 3 == ell)
                role = HbdRole::Hyperedge;
            else if (d_v >= 1 && (d_v - 1) % 3 == ell)
                role = HbdRole::Vertex;
        } else {
            if (d_v >= 1 && (d_v - 1) % 3 == ell)
                role = HbdRole::Hyperedge;
            else if (d_v <= d_max - 1 && d_v % 3 == ell)
                role = HbdRole::Vertex;
        }
        int* color_slot =
            role == HbdRole::Hyperedge ? (outward ? &c.out.c_out : &c.out.c_in) : nullptr;
        std::vector<int>* cs_slot =
            role == HbdRole::Vertex ? (outward ? &c.out.cs_out : &c.out.cs_in) : nullptr;
        auto frag = beeping_hbd_round_schedule(role, hp, c.rng, color_slot, cs_slot);
        Observation o = Observation::Nothing;
        while (auto act = frag.resume(o)) o = co_yield *act;
    }

    // --- construction phase ---
    const std::vector<int> j_set = c.out.j_set();
    const int j_max = j_set.empty() ? 0 : j_set.back();
    const bool in_yj =
        c.is_destination && std::find(j_set.begin(), j_set.end(), d_v) != j_set.end();
    const int k = hp.palette_size();
    const int W = hp.color_width();

    if (c.config.task == TaskKind::SinglePath) {
        bool active = c.is_source;
        for (int l = 1; l <= j_max; ++l) {
            c.tag = "c1.i" + std::to_string(l) + (active ? ".a" : ".n");
            if (active && !in_yj && d_v == l - 1) {
                if (c.out.c_out != kNoColor) {
                    auto word = color_word(c.out.c_out, W);
                    for (uint8_t b : word) (void)(co_yield(b ? Action::Beep : Action::Idle));
                } else {
                    for (int w = 0; w < W; ++w) (void)(co_yield Action::Idle);
                }
            } else if (d_v == l) {
                int val = 0;
                for (int w = 0; w < W; ++w) {
                    Observation o = co_yield Action::Listen;
                    val = (val << 1) | (heard(o) ? 1 : 0);
                }
                if (val != kNoColor &&
                    std::binary_search(c.out.cs_out.begin(), c.out.cs_out.end(), val))
                    active = true;
            } else {
                for (int w = 0; w < W; ++w) (void)(co_yield Action::Idle);
            }
        }
        c.out.z = active ? 1 : 0;
    } else {
        bool active = in_yj;
        for (int l = 1; l <= j_max; ++l) {
            c.tag = "ct.i" + std::to_string(l) + (active ? ".a" : ".n");
            if (active && d_v == j_max - l + 1) {
                for (int t = 1; t <= k; ++t)
                    (void)(co_yield(t == c.out.c_in ? Action::Beep : Action::Idle));
            } else {
                // only the layer right below the beepers may activate; the
                // unary color indices of other layer pairs share the palette
                const bool test_layer = d_v == j_max - l;
                bool hit = false;
                for (int t = 1; t <= k; ++t) {
                    Observation o = co_yield Action::Listen;
                    if (test_layer && heard(o) &&
                        std::binary_search(c.out.cs_in.begin(), c.out.cs_in.end(), t))
                        hit = true;
                }
                if (test_layer && hit) active = true;
            }
        }
        c.out.z = active ? 1 : 0;
    }
    co_return;
}

class ProtocolProgram : public NodeProgram {
public:
    ProtocolProgram(bool is_source, bool is_destination, const ProtocolConfig& config) {
        ctx_.is_source = is_source;
        ctx_.is_destination = is_destination;
        ctx_.config = config;
    }
    void on_wake(Rng rng) override {
        ctx_.rng = rng;
        coro_ = protocol_coro(ctx_);
    }
    std::optional<Action> step(int, Observation prev) override { return coro_.resume(prev); }
    std::string_view state_tag() const override { return ctx_.tag; }
    const NodeKnowledge& knowledge() const { return ctx_.out; }

private:
    NodeCtx ctx_;
    ProgramCoro coro_;
};

}  // namespace

std::unique_ptr<NodeProgram> make_protocol_program(bool is_source, bool is_destination,
                                                   const ProtocolConfig& config,
                                                   const NodeKnowledge** out_knowledge) {
    auto prog = std::make_unique<ProtocolProgram>(is_source, is_destination, config);
    if (out_knowledge) *out_knowledge = &prog->knowledge();
    return prog;
}

ProtocolRun run_full_protocol(const Graph& g, NodeId source, const std::vector<NodeId>& dests,
                              const WakeSchedule& schedule, const ProtocolConfig& config,
                              uint64_t seed, const SimOptions& sim_opt) {
    const int n = g.node_count();
    if (source < 0 || source >= n) throw std::invalid_argument("source out of range");
    if (dests.empty()) throw std::invalid_argument("destination set must be nonempty");
    if (config.n_bound() < n)
        throw std::invalid_argument("size bound N must be at least the node count");
    g.require_connected();

    std::vector<uint8_t> is_dest(n, 0);
    for (NodeId y : dests) {
        if (y < 0 || y >= n) throw std::invalid_argument("destination out of range");
        if (y == source)
            throw std::invalid_argument("the source cannot be a destination (layer 0 has no policy index)");
        is_dest[y] = 1;
    }
    if (schedule.rounds.empty()) throw std::invalid_argument("schedule must wake at least one destination");
    if (schedule.min_round() != 1) throw std::invalid_argument("the earliest scheduled wake must be round 1");
    for (auto [node, round] : schedule.rounds)
        if (!is_dest[node]) throw std::invalid_argument("schedule contains a non-destination node");

    ProtocolRun run;
    auto ld = bfs_layers(g, source);
    run.d_max = ld.d_max;
    {
        std::set<int> occ;
        for (NodeId y : dests) occ.insert(ld.dist[y]);
        run.occupied_layers.assign(occ.begin(), occ.end());
    }
    run.target_layers = config.policy.apply(run.occupied_layers);
    run.j_max = run.target_layers.empty() ? 0 : run.target_layers.back();

    std::vector<std::unique_ptr<NodeProgram>> programs;
    std::vector<const NodeKnowledge*> knowledge_ptrs(n);
    programs.reserve(n);
    for (NodeId v = 0; v < n; ++v)
        programs.push_back(
            make_protocol_program(v == source, is_dest[v], config, &knowledge_ptrs[v]));

    SimOptions opt = sim_opt;
    opt.seed = seed;
    if (opt.max_rounds == SimOptions{}.max_rounds) {
        const HbdParams& hp = config.hbd;
        long wake = 35L * n + 9L * config.dmax_word_width() + 64;
        long preproc = 12L * hp.epochs() * hp.iters_per_epoch() * hp.sub_iters();
        long constr = static_cast<long>(n) * hp.palette_size();
        long bound = 2 * (wake + preproc + constr) + 128;
        opt.max_rounds = static_cast<int>(std::min<long>(bound, 1L << 30));
    }

    run.sim = run_simulation(g, programs, schedule, opt);
    run.timed_out = run.sim.timed_out;
    if (run.timed_out) run.flags.push_back("engine: max_rounds exhausted before termination");

    run.knowledge.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        run.knowledge[v] = *knowledge_ptrs[v];
        for (auto& f : knowledge_ptrs[v]->flags)
            run.flags.push_back("node " + std::to_string(v) + ": " + f);
    }

    const Trace& tr = run.sim.trace;
    run.rounds.wakeup = tr.count_phase_rounds("w");
    run.rounds.wakeup_sub3 = tr.count_phase_rounds("w3");
    run.rounds.preprocessing = tr.count_phase_rounds("p");
    run.rounds.construction = tr.count_phase_rounds("c");
    run.rounds.total = tr.rounds;
    return run;
}

}  // namespace beep
