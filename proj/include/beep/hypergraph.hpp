#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beep/graph.hpp"

namespace beep {

// Hypergraph with vertex ids [0, n_vertices). Hyperedges are duplicate-free
// member lists and may be empty.
struct Hypergraph {
    int n_vertices = 0;
    std::vector<std::vector<int>> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    static Hypergraph make(int n_vertices, std::vector<std::vector<int>> edges);  // validates
};

// Text format: first line "n_vertices n_edges"; then one line per hyperedge
// "d v1 ... vd" (d may be 0). '#' comments and blank lines are ignored.
Hypergraph load_hypergraph(std::istream& in);
Hypergraph load_hypergraph_file(const std::string& path);
void save_hypergraph(const Hypergraph& h, std::ostream& out);

Hypergraph gen_random_hypergraph(int n_vertices, int n_edges, int max_rank, uint64_t seed,
                                 double p_empty = 0.0);

// 3-layer embedding: L0 = fresh source, L1 = hypergraph vertices (all attached
// to the source), L2 = one node per hyperedge adjacent to its members. Empty
// hyperedges hang off a designated dummy L1 vertex so the graph stays
// connected; the mapping flags them.
struct EmbeddedHypergraph {
    Graph graph;
    NodeId source = 0;
    std::vector<NodeId> vertex_node;  // hypergraph vertex -> graph node
    std::vector<NodeId> edge_node;    // hyperedge -> graph node
    std::optional<NodeId> dummy_vertex_node;
    std::vector<bool> edge_is_empty;
};

EmbeddedHypergraph embed_hypergraph(const Hypergraph& h);

}  // namespace beep
