#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detwalk/markov.hpp"

namespace detwalk {

/// Simple undirected graph; vertex ids 0..n-1.
struct Graph {
    int n = 0;
    long m = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, sorted
    std::vector<std::vector<int>> adj;       // ascending neighbor lists
    std::vector<std::int64_t> original_ids;  // pre-compaction labels
    bool connected = false;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

/// Edge list, "u v" per line, '#' comments. Arbitrary nonnegative vertex
/// labels are compacted to 0..n-1 (mapping kept in original_ids).
/// Disconnectedness is a flag on the result, not an error.
Graph load_graph(const std::string& path);
Graph parse_graph(const std::string& text);

enum class GraphKind { Path, Cycle, Complete, Star, Grid, ER };
GraphKind graph_kind_from_string(const std::string& s);

struct GenParams {
    int n = 0;
    double p = 0.0;          // er edge probability
    std::uint64_t seed = 0;  // er
};

/// Deterministic for fixed (kind, params, seed). ER retries up to 100
/// draws until connected, then throws Disconnected.
Graph generate(GraphKind kind, const GenParams& params);

/// P_{u,v} = 1/deg(u) on edges.
TransitionMatrix simple_rw(const Graph& G);

/// P_{u,u} = alpha, P_{u,v} = (1-alpha)/deg(u) on edges; alpha in (0,1).
TransitionMatrix lazy_rw(const Graph& G, double alpha);

/// P_{u,v} = min(1/deg(u), 1/deg(v)) on edges, remainder held; pi uniform.
TransitionMatrix metropolis(const Graph& G);

/// P_{u,v} = deg(v)^(-beta) / sum_{w in N(u)} deg(w)^(-beta); beta in [0,1].
TransitionMatrix beta_rw(const Graph& G, double beta = 0.5);

/// JSON {"n":..,"rows":[[..],..]} or CSV (detected by extension/content);
/// reals serialized with 17 significant digits on save.
TransitionMatrix load_matrix(const std::string& path);
void save_matrix(const TransitionMatrix& P, const std::string& path);

}  // namespace detwalk
