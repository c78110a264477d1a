#include "beep/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace beep {

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s = "{";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

std::vector<NodeId> ones(const std::vector<int>& z) {
    std::vector<NodeId> out;
    for (size_t v = 0; v < z.size(); ++v)
        if (z[v]) out.push_back(static_cast<NodeId>(v));
    return out;
}

// Matches every node of `required` to a distinct adjacent node of `uppers`
// (Kuhn's augmenting paths); true iff all of `required` can be saturated.
bool saturating_matching(const Graph& g, const std::vector<NodeId>& required,
                         const std::vector<NodeId>& uppers) {
    std::map<NodeId, int> upper_index;
    for (size_t i = 0; i < uppers.size(); ++i) upper_index[uppers[i]] = static_cast<int>(i);
    std::vector<int> matched_to(uppers.size(), -1);  // upper -> index into required
    for (size_t wi = 0; wi < required.size(); ++wi) {
        std::vector<uint8_t> visited(uppers.size(), 0);
        std::function<bool(NodeId)> augment = [&](NodeId w) -> bool {
            for (NodeId nb : g.neighbors(w)) {
                auto it = upper_index.find(nb);
                if (it == upper_index.end() || visited[it->second]) continue;
                visited[it->second] = 1;
                if (matched_to[it->second] < 0 ||
                    augment(required[matched_to[it->second]])) {
                    matched_to[it->second] = static_cast<int>(wi);
                    return true;
                }
            }
            return false;
        };
        if (!augment(required[wi])) return false;
    }
    return true;
}

}  // namespace

std::vector<uint8_t> SpMembership::sp_j(const std::vector<int>& target_layers) const {
    std::vector<uint8_t> out(in_sp.size(), 0);
    for (size_t v = 0; v < in_sp.size(); ++v)
        for (int j : target_layers)
            if (j >= 1 && j <= d_max && in_sp[v][j]) out[v] = 1;
    return out;
}

SpMembership compute_sp_sets(const Graph& g, NodeId s, const std::vector<NodeId>& dests) {
    auto ld = bfs_layers(g, s);
    SpMembership m;
    m.d_max = ld.d_max;
    m.in_sp.assign(g.node_count(), std::vector<uint8_t>(ld.d_max + 1, 0));
    for (NodeId y : dests) {
        const int i = ld.dist[y];
        if (i < 1) continue;
        auto dy = bfs_dist(g, y);
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (ld.dist[v] + dy[v] == i) m.in_sp[v][i] = 1;
    }
    return m;
}

Verdict check_single_path(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                          const std::vector<int>& target_layers, const std::vector<int>& z) {
    auto ld = bfs_layers(g, s);
    auto active = ones(z);
    if (active.empty()) return Verdict::reject("no active nodes");
    if (!z[s]) return Verdict::reject("source is not active");

    int top = 0;
    for (NodeId v : active) top = std::max(top, ld.dist[v]);
    std::vector<NodeId> per_layer(top + 1, -1);
    for (NodeId v : active) {
        int d = ld.dist[v];
        if (per_layer[d] != -1)
            return Verdict::reject("two active nodes in layer " + std::to_string(d));
        per_layer[d] = v;
    }
    for (int i = 0; i <= top; ++i)
        if (per_layer[i] == -1) return Verdict::reject("no active node in layer " + std::to_string(i));
    for (int i = 0; i + 1 <= top; ++i)
        if (!g.has_edge(per_layer[i], per_layer[i + 1]))
            return Verdict::reject("active nodes in layers " + std::to_string(i) + "," +
                                   std::to_string(i + 1) + " are not adjacent");
    NodeId endpoint = per_layer[top];
    if (std::find(dests.begin(), dests.end(), endpoint) == dests.end())
        return Verdict::reject("endpoint is not a destination");
    if (std::find(target_layers.begin(), target_layers.end(), top) == target_layers.end())
        return Verdict::reject("endpoint layer " + std::to_string(top) + " is not in J=" +
                               join_ints(target_layers));
    return Verdict::accept();
}

Verdict check_spt(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                  const std::vector<int>& target_layers, const std::vector<int>& z) {
    auto ld = bfs_layers(g, s);
    std::set<NodeId> yj;
    for (NodeId y : dests)
        if (std::find(target_layers.begin(), target_layers.end(), ld.dist[y]) != target_layers.end())
            yj.insert(y);
    if (yj.empty()) return Verdict::reject("target destination set is empty");
    if (!z[s]) return Verdict::reject("source is not active");
    for (NodeId y : yj)
        if (!z[y]) return Verdict::reject("destination " + std::to_string(y) + " is not spanned");

    auto active = ones(z);
    int top = 0;
    for (NodeId v : active) top = std::max(top, ld.dist[v]);
    std::vector<std::vector<NodeId>> by_layer(top + 1);
    for (NodeId v : active) by_layer[ld.dist[v]].push_back(v);

    for (NodeId v : active) {
        if (v == s) continue;
        bool has_parent = false;
        for (NodeId nb : g.neighbors(v))
            if (z[nb] && ld.dist[nb] == ld.dist[v] - 1) has_parent = true;
        if (!has_parent)
            return Verdict::reject("node " + std::to_string(v) +
                                   " has no active neighbor one layer closer to the source");
    }

    // Every non-destination 1-node must head a distinct branch of some
    // destination's path; per layer pair that is a matching into the layer
    // above.
    for (int i = 0; i < top; ++i) {
        std::vector<NodeId> required;
        for (NodeId v : by_layer[i])
            if (!yj.count(v)) required.push_back(v);
        if (required.empty()) continue;
        if (!saturating_matching(g, required, by_layer[i + 1]))
            return Verdict::reject("stray branch: layer " + std::to_string(i) +
                                   " has active non-destinations not on any destination path");
    }
    for (NodeId v : by_layer[top])
        if (!yj.count(v) && v != s)
            return Verdict::reject("stray branch: top active layer contains non-destination " +
                                   std::to_string(v));
    return Verdict::accept();
}

T5Verdict check_theorem5_conditions(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& target_layers,
                                    const std::vector<NodeKnowledge>& knowledge) {
    T5Verdict verdict;
    auto ld = bfs_layers(g, s);
    auto sp = compute_sp_sets(g, s, dests);
    auto in_spj = sp.sp_j(target_layers);

    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!in_spj[v]) continue;
        const NodeKnowledge& kv = knowledge[v];
        const int d = ld.dist[v];

        std::vector<NodeId> upper, lower;
        for (NodeId nb : g.neighbors(v)) {
            if (!in_spj[nb]) continue;
            if (ld.dist[nb] == d + 1) upper.push_back(nb);
            if (ld.dist[nb] == d - 1) lower.push_back(nb);
        }

        if ((kv.c_out == kNoColor) != upper.empty())
            verdict.violations.push_back(
                {v, 1, kv.c_out == kNoColor ? "uncolored despite an upper SP_J neighbor"
                                            : "out-color without an upper SP_J neighbor"});
        if ((kv.c_in == kNoColor) != (v == s))
            verdict.violations.push_back(
                {v, 2, kv.c_in == kNoColor ? "non-source without in-color"
                                           : "source carries an in-color"});
        if (kv.c_out != kNoColor) {
            int witnesses = 0;
            for (NodeId u : upper) {
                const auto& cs = knowledge[u].cs_out;
                if (std::binary_search(cs.begin(), cs.end(), kv.c_out)) ++witnesses;
            }
            if (witnesses != 1)
                verdict.violations.push_back(
                    {v, 3, std::to_string(witnesses) + " upper witnesses for c_out"});
        }
        if (kv.c_in != kNoColor) {
            int witnesses = 0;
            for (NodeId u : lower) {
                const auto& cs = knowledge[u].cs_in;
                if (std::binary_search(cs.begin(), cs.end(), kv.c_in)) ++witnesses;
            }
            if (witnesses != 1)
                verdict.violations.push_back(
                    {v, 4, std::to_string(witnesses) + " lower witnesses for c_in"});
        }
    }
    return verdict;
}

Verdict check_round_formulas(const PhaseRounds& rounds, const HbdParams& params, int d_max,
                             const std::vector<int>& target_layers, TaskKind task) {
    auto mismatch = [](const char* what, long expected, long actual) {
        std::ostringstream os;
        os << what << ": expected " << expected << ", measured " << actual;
        return Verdict::reject(os.str());
    };

    const long sub3 = 3L * (4L * d_max - 2);
    if (rounds.wakeup_sub3 != sub3) return mismatch("wake-up subphase 3", sub3, rounds.wakeup_sub3);

    const bool skipped = target_layers.empty();
    const long preproc =
        skipped ? 0 : 6L * params.epochs() * params.iters_per_epoch() * params.sub_iters() * 2;
    if (rounds.preprocessing != preproc)
        return mismatch("preprocessing", preproc, rounds.preprocessing);

    const long j_max = skipped ? 0 : target_layers.back();
    const long per_iter = task == TaskKind::SinglePath ? params.color_width() : params.palette_size();
    if (rounds.construction != j_max * per_iter)
        return mismatch("construction", j_max * per_iter, rounds.construction);
    return Verdict::accept();
}

Verdict check_wakeup_postconditions(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& expected_target_layers,
                                    const ProtocolRun& run) {
    auto ld = bfs_layers(g, s);
    auto sp = compute_sp_sets(g, s, dests);
    auto in_spj = sp.sp_j(expected_target_layers);

    for (NodeId v = 0; v < g.node_count(); ++v) {
        const NodeKnowledge& kv = run.knowledge[v];
        if (kv.d_v != ld.dist[v])
            return Verdict::reject("node " + std::to_string(v) + ": learned d_v=" +
                                   std::to_string(kv.d_v) + ", oracle " + std::to_string(ld.dist[v]));
        if (kv.d_max != ld.d_max)
            return Verdict::reject("node " + std::to_string(v) + ": learned d_max=" +
                                   std::to_string(kv.d_max) + ", oracle " + std::to_string(ld.d_max));
        if (static_cast<int>(kv.sp.size()) != ld.d_max + 1)
            return Verdict::reject("node " + std::to_string(v) + ": sp array has wrong length");
        for (int i = 1; i <= ld.d_max; ++i)
            if ((kv.sp[i] != 0) != (sp.in_sp[v][i] != 0))
                return Verdict::reject("node " + std::to_string(v) + ": sp[" + std::to_string(i) +
                                       "]=" + std::to_string(kv.sp[i]) + " disagrees with oracle");
        std::vector<int> expected_ind(ld.d_max, 0);
        for (int j : expected_target_layers)
            if (j >= 1 && j <= ld.d_max) expected_ind[j - 1] = 1;
        if (static_cast<int>(kv.learned_j.size()) != ld.d_max)
            return Verdict::reject("node " + std::to_string(v) + ": J indicator has wrong length");
        for (int i = 0; i < ld.d_max; ++i)
            if ((kv.learned_j[i] != 0) != (expected_ind[i] != 0))
                return Verdict::reject("node " + std::to_string(v) + ": learned J disagrees with policy");
        if (kv.in_sp_j != (in_spj[v] != 0))
            return Verdict::reject("node " + std::to_string(v) + ": SP_J membership disagrees");
    }

    const NodeKnowledge& ks = run.knowledge[s];
    if (ks.ed_silence_r != 3 * (ld.d_max + 1))
        return Verdict::reject("source silence round r=" + std::to_string(ks.ed_silence_r) +
                               ", expected " + std::to_string(3 * (ld.d_max + 1)));

    if (run.sim.trace.full) {
        int end_round = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            int last_w = run.sim.trace.last_round_tagged(v, "w");
            if (last_w == 0)
                return Verdict::reject("node " + std::to_string(v) + " has no wake-up activity");
            if (end_round == 0) end_round = last_w;
            if (last_w != end_round)
                return Verdict::reject("node " + std::to_string(v) + " ends wake-up at round " +
                                       std::to_string(last_w) + ", others at " +
                                       std::to_string(end_round));
        }
    }
    return Verdict::accept();
}

namespace {

// Active sets per construction iteration, read from the state tags
// ("c1.i<l>.a" etc.): the set after iteration l is tagged at the first round
// of iteration l+1; after the last iteration it is the z output.
struct IterationView {
    int j_max = 0;
    std::vector<int> first_round;  // index l-1, first round of iteration l
};

IterationView iteration_rounds(const Trace& tr, const std::string& prefix, int j_max) {
    IterationView view;
    view.j_max = j_max;
    view.first_round.assign(j_max, 0);
    for (int r = 1; r <= tr.rounds; ++r) {
        std::string_view tag = tr.phase(r);
        if (tag.substr(0, prefix.size()) != prefix) continue;
        size_t dot = tag.find('.', prefix.size());
        int iter = std::stoi(std::string(tag.substr(prefix.size(), dot - prefix.size())));
        if (iter >= 1 && iter <= j_max && view.first_round[iter - 1] == 0)
            view.first_round[iter - 1] = r;
    }
    return view;
}

std::vector<int> active_at_round(const Trace& tr, int round) {
    std::vector<int> active(tr.nodes.size(), 0);
    for (NodeId v = 0; v < static_cast<int>(tr.nodes.size()); ++v) {
        const TraceEntry* e = tr.at(v, round);
        if (!e) continue;
        std::string_view tag = tr.tag_name(e->tag);
        if (tag.size() >= 2 && tag.substr(tag.size() - 2) == ".a") active[v] = 1;
    }
    return active;
}

}  // namespace

Verdict check_single_path_invariant(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                                    const std::vector<int>& target_layers, const ProtocolRun& run) {
    if (!run.sim.trace.full) return Verdict::reject("full trace required");
    if (target_layers.empty()) return Verdict::accept();
    auto ld = bfs_layers(g, s);
    auto sp = compute_sp_sets(g, s, dests);
    auto in_spj = sp.sp_j(target_layers);
    const int j_max = target_layers.back();
    auto view = iteration_rounds(run.sim.trace, "c1.i", j_max);

    for (int l = 1; l <= j_max; ++l) {
        std::vector<int> active;
        if (l < j_max) {
            if (view.first_round[l] == 0)
                return Verdict::reject("iteration " + std::to_string(l + 1) + " missing from trace");
            active = active_at_round(run.sim.trace, view.first_round[l]);
        } else {
            active.resize(g.node_count());
            for (NodeId v = 0; v < g.node_count(); ++v) active[v] = run.knowledge[v].z;
        }

        auto act = ones(active);
        if (act.empty()) return Verdict::reject("no active nodes after iteration " + std::to_string(l));
        int top = 0;
        for (NodeId v : act) top = std::max(top, ld.dist[v]);
        std::vector<NodeId> per_layer(top + 1, -1);
        for (NodeId v : act) {
            if (per_layer[ld.dist[v]] != -1)
                return Verdict::reject("iteration " + std::to_string(l) + ": two active nodes in layer " +
                                       std::to_string(ld.dist[v]));
            per_layer[ld.dist[v]] = v;
        }
        if (per_layer[0] != s)
            return Verdict::reject("iteration " + std::to_string(l) + ": source not the layer-0 node");
        for (int i = 0; i <= top; ++i)
            if (per_layer[i] == -1)
                return Verdict::reject("iteration " + std::to_string(l) + ": gap at layer " +
                                       std::to_string(i));
        for (int i = 0; i + 1 <= top; ++i)
            if (!g.has_edge(per_layer[i], per_layer[i + 1]))
                return Verdict::reject("iteration " + std::to_string(l) + ": non-adjacent layers " +
                                       std::to_string(i) + "," + std::to_string(i + 1));
        if (top > l)
            return Verdict::reject("iteration " + std::to_string(l) + ": path reaches layer " +
                                   std::to_string(top) + " too early");
        NodeId endpoint = per_layer[top];
        if (top == l) {
            if (!in_spj[endpoint])
                return Verdict::reject("iteration " + std::to_string(l) +
                                       ": frontier node is not in SP_J");
        } else {
            const bool is_dest = std::find(dests.begin(), dests.end(), endpoint) != dests.end();
            const bool target = std::find(target_layers.begin(), target_layers.end(), top) !=
                                target_layers.end();
            if (!is_dest || !target)
                return Verdict::reject("iteration " + std::to_string(l) +
                                       ": path stalled below layer " + std::to_string(l) +
                                       " at a non-target node");
        }
    }
    return Verdict::accept();
}

Verdict check_tree_invariant(const Graph& g, NodeId s, const std::vector<NodeId>& dests,
                             const std::vector<int>& target_layers, const ProtocolRun& run) {
    if (!run.sim.trace.full) return Verdict::reject("full trace required");
    if (target_layers.empty()) return Verdict::accept();
    auto ld = bfs_layers(g, s);
    auto sp = compute_sp_sets(g, s, dests);
    auto in_spj = sp.sp_j(target_layers);
    const int j_max = target_layers.back();
    auto view = iteration_rounds(run.sim.trace, "ct.i", j_max);
    std::set<NodeId> yj;
    for (NodeId y : dests)
        if (std::find(target_layers.begin(), target_layers.end(), ld.dist[y]) != target_layers.end())
            yj.insert(y);

    for (int l = 1; l <= j_max; ++l) {
        std::vector<int> active;
        if (l < j_max) {
            if (view.first_round[l] == 0)
                return Verdict::reject("iteration " + std::to_string(l + 1) + " missing from trace");
            active = active_at_round(run.sim.trace, view.first_round[l]);
        } else {
            active.resize(g.node_count());
            for (NodeId v = 0; v < g.node_count(); ++v) active[v] = run.knowledge[v].z;
        }

        const int root_layer = j_max - l;
        auto act = ones(active);
        int top = 0;
        std::vector<std::vector<NodeId>> by_layer(ld.d_max + 1);
        for (NodeId v : act) {
            if (!in_spj[v])
                return Verdict::reject("iteration " + std::to_string(l) + ": active node " +
                                       std::to_string(v) + " outside SP_J");
            if (ld.dist[v] < root_layer)
                return Verdict::reject("iteration " + std::to_string(l) + ": active node below layer " +
                                       std::to_string(root_layer));
            by_layer[ld.dist[v]].push_back(v);
            top = std::max(top, ld.dist[v]);
        }
        for (NodeId y : yj)
            if (ld.dist[y] >= root_layer && !active[y])
                return Verdict::reject("iteration " + std::to_string(l) + ": destination " +
                                       std::to_string(y) + " inactive in covered layers");
        for (NodeId v : act) {
            if (ld.dist[v] == root_layer) continue;
            bool has_parent = false;
            for (NodeId nb : g.neighbors(v))
                if (active[nb] && ld.dist[nb] == ld.dist[v] - 1) has_parent = true;
            if (!has_parent)
                return Verdict::reject("iteration " + std::to_string(l) + ": node " +
                                       std::to_string(v) + " has no active parent candidate");
        }
        for (int i = root_layer; i <= top; ++i) {
            std::vector<NodeId> required;
            for (NodeId v : by_layer[i])
                if (!yj.count(v)) required.push_back(v);
            if (required.empty()) continue;
            static const std::vector<NodeId> kNoUppers;
            const std::vector<NodeId>& uppers = i + 1 <= ld.d_max ? by_layer[i + 1] : kNoUppers;
            if (!saturating_matching(g, required, uppers))
                return Verdict::reject("iteration " + std::to_string(l) + ": layer " +
                                       std::to_string(i) + " has active nodes on no destination path");
        }
    }
    return Verdict::accept();
}

}  // namespace beep
