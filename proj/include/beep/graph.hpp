#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beep/util.hpp"

namespace beep {

using NodeId = int;

// Undirected simple graph over dense node ids [0, n). Adjacency lists are
// sorted and immutable after construction; instances can be shared read-only
// across concurrent simulations.
class Graph {
public:
    Graph() = default;

    // Validates ids, rejects self-loops and duplicate edges, symmetrizes.
    static Graph from_edges(int n, const std::vector<std::pair<NodeId, NodeId>>& edges);

    int node_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
    int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(NodeId u, NodeId v) const;
    std::vector<std::pair<NodeId, NodeId>> edges() const;  // normalized u < v

    bool is_connected() const;
    // Throws GraphError naming an unreachable node if not connected.
    void require_connected() const;

private:
    std::vector<std::vector<NodeId>> adj_;
    int edge_count_ = 0;
};

// BFS layers from a source: dist, eccentricity and the layer partition.
struct LayerDecomposition {
    NodeId source = 0;
    std::vector<int> dist;                   // exact hop distance
    int d_max = 0;                           // source eccentricity
    std::vector<std::vector<NodeId>> layers; // layers[i] = { v : dist[v] = i }
};

// Throws GraphError naming an unreachable node if g is disconnected.
LayerDecomposition bfs_layers(const Graph& g, NodeId s);

// Distances from s; unreachable nodes get -1. Never throws.
std::vector<int> bfs_dist(const Graph& g, NodeId s);

// ---- Generators (deterministic for fixed spec + seed) ----

struct GenSpec {
    enum class Family { Path, Cycle, Grid, RandomGnp, LayeredRandom };
    Family family = Family::Path;
    int n = 0;             // path, cycle, gnp
    int rows = 0, cols = 0;  // grid
    double p = 0.0;        // gnp edge probability / layered extra-edge probability
    int depth = 0, width = 0;  // layered

    std::string to_string() const;
    static GenSpec parse(const std::string& text);  // e.g. "gnp:50,0.1", "grid:3x4"
};

Graph gen_path(int n);
Graph gen_cycle(int n);
Graph gen_grid(int rows, int cols);
// Resamples up to 100 derived attempts until connected; throws GraphError.
Graph gen_random_gnp(int n, double p, uint64_t seed);
// Node 0 is the single root; construction layers coincide with BFS layers
// from 0 (edges only inside a layer or between adjacent layers).
Graph gen_layered_random(int depth, int max_width, double p_extra, uint64_t seed);
Graph gen_graph(const GenSpec& spec, uint64_t seed);

// ---- Text format ----
// First line "n m", then m lines "u v" with u < v. Blank lines and '#'
// comments are ignored. load/save round-trip to the normalized form.

Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);
void save_graph(const Graph& g, std::ostream& out);
std::string graph_to_string(const Graph& g);

}  // namespace beep
