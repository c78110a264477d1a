#include "beep/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beep {

Hypergraph Hypergraph::make(int n_vertices, std::vector<std::vector<int>> edges) {
    if (n_vertices < 0) throw std::invalid_argument("hypergraph: negative vertex count");
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw std::invalid_argument("hypergraph: duplicate member in hyperedge");
        for (int v : e)
            if (v < 0 || v >= n_vertices)
                throw std::invalid_argument("hypergraph: member id out of range");
    }
    return Hypergraph{n_vertices, std::move(edges)};
}

Hypergraph load_hypergraph(std::istream& in) {
    std::string line;
    int line_no = 0;
    long nv = -1, ne = -1;
    std::vector<std::vector<int>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        if (nv < 0) {
            if (!(is >> nv >> ne)) {
                std::istringstream probe(line);
                std::string tok;
                if (!(probe >> tok)) continue;
                throw ParseError(line_no, "expected header 'n_vertices n_edges'");
            }
            if (nv < 0 || ne < 0) throw ParseError(line_no, "invalid header values");
            continue;
        }
        long d;
        if (!(is >> d)) {
            std::istringstream probe(line);
            std::string tok;
            if (!(probe >> tok)) continue;
            throw ParseError(line_no, "expected hyperedge 'd v1 ... vd'");
        }
        if (d < 0) throw ParseError(line_no, "negative rank");
        std::vector<int> members;
        for (long i = 0; i < d; ++i) {
            long v;
            if (!(is >> v)) throw ParseError(line_no, "hyperedge shorter than its rank");
            if (v < 0 || v >= nv) throw ParseError(line_no, "member id out of range");
            members.push_back(static_cast<int>(v));
        }
        edges.push_back(std::move(members));
    }
    if (nv < 0) throw ParseError(line_no, "missing header");
    if (static_cast<long>(edges.size()) != ne)
        throw ParseError(line_no, "expected " + std::to_string(ne) + " hyperedges, found " +
                                      std::to_string(edges.size()));
    try {
        return Hypergraph::make(static_cast<int>(nv), std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

Hypergraph load_hypergraph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hypergraph file: " + path);
    return load_hypergraph(in);
}

void save_hypergraph(const Hypergraph& h, std::ostream& out) {
    out << h.n_vertices << " " << h.edge_count() << "\n";
    for (const auto& e : h.edges) {
        out << e.size();
        for (int v : e) out << " " << v;
        out << "\n";
    }
}

Hypergraph gen_random_hypergraph(int n_vertices, int n_edges, int max_rank, uint64_t seed,
                                 double p_empty) {
    if (n_vertices < 1 || n_edges < 0 || max_rank < 1)
        throw std::invalid_argument("gen_random_hypergraph: bad parameters");
    Rng rng(seed);
    std::vector<std::vector<int>> edges;
    edges.reserve(n_edges);
    for (int e = 0; e < n_edges; ++e) {
        if (rng.bernoulli(p_empty)) {
            edges.push_back({});
            continue;
        }
        int rank = rng.uniform_int(1, std::min(max_rank, n_vertices));
        std::vector<int> members;
        while (static_cast<int>(members.size()) < rank) {
            int v = rng.below(n_vertices);
            if (std::find(members.begin(), members.end(), v) == members.end())
                members.push_back(v);
        }
        edges.push_back(std::move(members));
    }
    return Hypergraph::make(n_vertices, std::move(edges));
}

EmbeddedHypergraph embed_hypergraph(const Hypergraph& h) {
    if (h.n_vertices < 1) throw std::invalid_argument("embed_hypergraph: needs >= 1 vertex");
    EmbeddedHypergraph em;
    bool any_empty = std::any_of(h.edges.begin(), h.edges.end(),
                                 [](const auto& e) { return e.empty(); });
    int next = 0;
    em.source = next++;
    em.vertex_node.resize(h.n_vertices);
    for (int v = 0; v < h.n_vertices; ++v) em.vertex_node[v] = next++;
    if (any_empty) em.dummy_vertex_node = next++;
    em.edge_node.resize(h.edge_count());
    em.edge_is_empty.resize(h.edge_count());
    for (int e = 0; e < h.edge_count(); ++e) {
        em.edge_node[e] = next++;
        em.edge_is_empty[e] = h.edges[e].empty();
    }
    std::vector<std::pair<NodeId, NodeId>> ge;
    for (int v = 0; v < h.n_vertices; ++v) ge.emplace_back(em.source, em.vertex_node[v]);
    if (any_empty) ge.emplace_back(em.source, *em.dummy_vertex_node);
    for (int e = 0; e < h.edge_count(); ++e) {
        if (h.edges[e].empty()) {
            ge.emplace_back(*em.dummy_vertex_node, em.edge_node[e]);
        } else {
            for (int v : h.edges[e]) ge.emplace_back(em.vertex_node[v], em.edge_node[e]);
        }
    }
    em.graph = Graph::from_edges(next, ge);
    return em;
}

}  // namespace beep
