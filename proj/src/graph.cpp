#include "beep/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

namespace beep {

Graph Graph::from_edges(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    if (n < 1) throw GraphError("graph must have at least one node");
    Graph g;
    g.adj_.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                             ") out of range for n=" + std::to_string(n));
        if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (NodeId v = 0; v < n; ++v) {
        auto& a = g.adj_[v];
        std::sort(a.begin(), a.end());
        if (std::adjacent_find(a.begin(), a.end()) != a.end())
            throw GraphError("duplicate edge at node " + std::to_string(v));
    }
    g.edge_count_ = static_cast<int>(edges.size());
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::vector<int> bfs_dist(const Graph& g, NodeId s) {
    std::vector<int> dist(g.node_count(), -1);
    std::queue<NodeId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

bool Graph::is_connected() const {
    if (node_count() == 0) return false;
    auto d = bfs_dist(*this, 0);
    return std::find(d.begin(), d.end(), -1) == d.end();
}

void Graph::require_connected() const {
    auto d = bfs_dist(*this, 0);
    auto it = std::find(d.begin(), d.end(), -1);
    if (it != d.end())
        throw GraphError("graph is disconnected: node " +
                         std::to_string(it - d.begin()) + " unreachable from node 0");
}

LayerDecomposition bfs_layers(const Graph& g, NodeId s) {
    if (s < 0 || s >= g.node_count()) throw GraphError("source out of range");
    LayerDecomposition ld;
    ld.source = s;
    ld.dist = bfs_dist(g, s);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (ld.dist[v] < 0)
            throw GraphError("graph is disconnected: node " + std::to_string(v) +
                             " unreachable from source " + std::to_string(s));
    ld.d_max = *std::max_element(ld.dist.begin(), ld.dist.end());
    ld.layers.assign(ld.d_max + 1, {});
    for (NodeId v = 0; v < g.node_count(); ++v) ld.layers[ld.dist[v]].push_back(v);
    return ld;
}

// ---- Generators ----

Graph gen_path(int n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

Graph gen_cycle(int n) {
    if (n < 3) throw GraphError("cycle needs n >= 3");
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(0, n - 1);
    return Graph::from_edges(n, e);
}

Graph gen_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw GraphError("grid needs positive dimensions");
    std::vector<std::pair<NodeId, NodeId>> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph::from_edges(rows * cols, e);
}

Graph gen_random_gnp(int n, double p, uint64_t seed) {
    if (n < 1) throw GraphError("gnp needs n >= 1");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng(Rng::mix(seed, static_cast<uint64_t>(attempt)));
        std::vector<std::pair<NodeId, NodeId>> e;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) e.emplace_back(u, v);
        Graph g = Graph::from_edges(n, e);
        if (g.is_connected()) return g;
    }
    throw GraphError("gnp(n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                     "): no connected sample within 100 attempts");
}

Graph gen_layered_random(int depth, int max_width, double p_extra, uint64_t seed) {
    if (depth < 0 || max_width < 1) throw GraphError("layered needs depth >= 0, width >= 1");
    Rng rng(seed);
    std::vector<std::vector<NodeId>> layers(depth + 1);
    int next_id = 0;
    layers[0].push_back(next_id++);
    for (int i = 1; i <= depth; ++i) {
        int w = rng.uniform_int(1, max_width);
        for (int j = 0; j < w; ++j) layers[i].push_back(next_id++);
    }
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 1; i <= depth; ++i) {
        for (NodeId v : layers[i]) {
            NodeId parent = layers[i - 1][rng.below(static_cast<int>(layers[i - 1].size()))];
            e.emplace_back(parent, v);
        }
        // extra edges keep the BFS layering intact: same layer or adjacent only
        for (NodeId v : layers[i])
            for (NodeId u : layers[i - 1])
                if (rng.bernoulli(p_extra) && u != v) e.emplace_back(u, v);
        for (size_t a = 0; a < layers[i].size(); ++a)
            for (size_t b = a + 1; b < layers[i].size(); ++b)
                if (rng.bernoulli(p_extra)) e.emplace_back(layers[i][a], layers[i][b]);
    }
    std::sort(e.begin(), e.end(), [](auto x, auto y) {
        auto nx = std::minmax(x.first, x.second), ny = std::minmax(y.first, y.second);
        return nx < ny;
    });
    e.erase(std::unique(e.begin(), e.end(),
                        [](auto x, auto y) {
                            return std::minmax(x.first, x.second) == std::minmax(y.first, y.second);
                        }),
            e.end());
    return Graph::from_edges(next_id, e);
}

Graph gen_graph(const GenSpec& spec, uint64_t seed) {
    using F = GenSpec::Family;
    switch (spec.family) {
        case F::Path: return gen_path(spec.n);
        case F::Cycle: return gen_cycle(spec.n);
        case F::Grid: return gen_grid(spec.rows, spec.cols);
        case F::RandomGnp: return gen_random_gnp(spec.n, spec.p, seed);
        case F::LayeredRandom: return gen_layered_random(spec.depth, spec.width, spec.p, seed);
    }
    throw GraphError("unknown generator family");
}

std::string GenSpec::to_string() const {
    using F = GenSpec::Family;
    std::ostringstream os;
    switch (family) {
        case F::Path: os << "path:" << n; break;
        case F::Cycle: os << "cycle:" << n; break;
        case F::Grid: os << "grid:" << rows << "x" << cols; break;
        case F::RandomGnp: os << "gnp:" << n << "," << p; break;
        case F::LayeredRandom: os << "layered:" << depth << "," << width << "," << p; break;
    }
    return os.str();
}

GenSpec GenSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw GraphError("generator spec needs 'family:params': " + text);
    std::string fam = text.substr(0, colon);
    std::string params = text.substr(colon + 1);
    GenSpec s;
    auto split = [](const std::string& str, char sep) {
        std::vector<std::string> parts;
        std::istringstream is(str);
        std::string piece;
        while (std::getline(is, piece, sep)) parts.push_back(piece);
        return parts;
    };
    try {
        if (fam == "path") {
            s.family = Family::Path;
            s.n = std::stoi(params);
        } else if (fam == "cycle") {
            s.family = Family::Cycle;
            s.n = std::stoi(params);
        } else if (fam == "grid") {
            s.family = Family::Grid;
            auto parts = split(params, 'x');
            if (parts.size() != 2) throw GraphError("grid spec is 'grid:RxC'");
            s.rows = std::stoi(parts[0]);
            s.cols = std::stoi(parts[1]);
        } else if (fam == "gnp") {
            s.family = Family::RandomGnp;
            auto parts = split(params, ',');
            if (parts.size() != 2) throw GraphError("gnp spec is 'gnp:n,p'");
            s.n = std::stoi(parts[0]);
            s.p = std::stod(parts[1]);
        } else if (fam == "layered") {
            s.family = Family::LayeredRandom;
            auto parts = split(params, ',');
            if (parts.size() != 3) throw GraphError("layered spec is 'layered:depth,width,p'");
            s.depth = std::stoi(parts[0]);
            s.width = std::stoi(parts[1]);
            s.p = std::stod(parts[2]);
        } else {
            throw GraphError("unknown generator family: " + fam);
        }
    } catch (const std::invalid_argument&) {
        throw GraphError("bad generator params: " + text);
    }
    return s;
}

// ---- Text format ----

Graph load_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    long n = -1, m = -1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        if (n < 0) {
            if (!(is >> n >> m)) {
                std::string rest;
                if (is.clear(), is.str(line), !(is >> rest)) continue;  // blank
                throw ParseError(line_no, "expected header 'n m'");
            }
            if (n < 1 || m < 0) throw ParseError(line_no, "invalid header values");
            continue;
        }
        long u, v;
        if (!(is >> u >> v)) {
            std::string rest;
            std::istringstream probe(line);
            if (!(probe >> rest)) continue;  // blank after comment strip
            throw ParseError(line_no, "expected edge 'u v'");
        }
        std::string trailing;
        if (is >> trailing) throw ParseError(line_no, "trailing tokens after edge");
        if (u < 0 || u >= n) throw ParseError(line_no, "id " + std::to_string(u) + " out of range");
        if (v < 0 || v >= n) throw ParseError(line_no, "id " + std::to_string(v) + " out of range");
        if (u >= v) throw ParseError(line_no, "edges must satisfy u < v");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    if (n < 0) throw ParseError(line_no, "missing header 'n m'");
    if (static_cast<long>(edges.size()) != m)
        throw ParseError(line_no, "expected " + std::to_string(m) + " edges, found " +
                                      std::to_string(edges.size()));
    try {
        return Graph::from_edges(static_cast<int>(n), edges);
    } catch (const GraphError& e) {
        throw ParseError(line_no, e.what());
    }
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file: " + path);
    return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
    auto e = g.edges();
    out << g.node_count() << " " << e.size() << "\n";
    for (auto [u, v] : e) out << u << " " << v << "\n";
}

std::string graph_to_string(const Graph& g) {
    std::ostringstream os;
    save_graph(g, os);
    return os.str();
}

}  // namespace beep
