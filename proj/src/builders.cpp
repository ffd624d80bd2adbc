#include "detwalk/builders.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace detwalk {

namespace {

bool is_connected(int n, const std::vector<std::vector<int>>& adj) {
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                q.push_back(u);
            }
    }
    return reached == n;
}

}  // namespace

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    for (auto& [u, v] : edges) {
        if (u == v) throw SelfLoopRejected(u);
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw BadParams("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph G;
    G.n = n;
    G.edges = std::move(edges);
    G.m = static_cast<long>(G.edges.size());
    G.adj.resize(n);
    for (auto [u, v] : G.edges) {
        G.adj[u].push_back(v);
        G.adj[v].push_back(u);
    }
    for (auto& nbrs : G.adj) std::sort(nbrs.begin(), nbrs.end());
    G.original_ids.resize(n);
    for (int v = 0; v < n; ++v) G.original_ids[v] = v;
    G.connected = is_connected(n, G.adj);
    return G;
}

Graph parse_graph(const std::string& text) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::int64_t u, v;
        if (!(ls >> u >> v)) throw ParseError("expected \"u v\"", lineno);
        std::string rest;
        if (ls >> rest) throw ParseError("trailing tokens after edge", lineno);
        if (u < 0 || v < 0) throw ParseError("negative vertex id", lineno);
        if (u == v) throw SelfLoopRejected(u);
        raw.emplace_back(u, v);
    }
    std::map<std::int64_t, int> compact;
    for (auto [u, v] : raw) {
        compact.emplace(u, 0);
        compact.emplace(v, 0);
    }
    int next_id = 0;
    for (auto& [orig, id] : compact) id = next_id++;

    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) edges.emplace_back(compact[u], compact[v]);
    Graph G = make_graph(next_id, std::move(edges));
    int i = 0;
    for (auto& [orig, id] : compact) G.original_ids[i++] = orig;
    return G;
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "path") return GraphKind::Path;
    if (s == "cycle") return GraphKind::Cycle;
    if (s == "complete") return GraphKind::Complete;
    if (s == "star") return GraphKind::Star;
    if (s == "grid") return GraphKind::Grid;
    if (s == "er") return GraphKind::ER;
    throw BadParams("unknown graph kind: " + s);
}

Graph generate(GraphKind kind, const GenParams& params) {
    const int n = params.n;
    if (n < 2) throw BadParams("generator needs n >= 2");
    std::vector<std::pair<int, int>> edges;
    switch (kind) {
        case GraphKind::Path:
            for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
            break;
        case GraphKind::Cycle:
            if (n < 3) throw BadParams("cycle needs n >= 3");
            for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
            break;
        case GraphKind::Complete:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
            break;
        case GraphKind::Star:
            for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
            break;
        case GraphKind::Grid: {
            const int r = static_cast<int>(std::lround(std::sqrt(n)));
            if (r * r != n) throw BadParams("grid needs a square n");
            auto id = [r](int i, int j) { return i * r + j; };
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    if (j + 1 < r) edges.emplace_back(id(i, j), id(i, j + 1));
                    if (i + 1 < r) edges.emplace_back(id(i, j), id(i + 1, j));
                }
            break;
        }
        case GraphKind::ER: {
            if (params.p <= 0.0 || params.p > 1.0)
                throw BadParams("er needs p in (0,1]");
            std::mt19937_64 rng(params.seed);
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            for (int attempt = 0; attempt < 100; ++attempt) {
                edges.clear();
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v)
                        if (coin(rng) < params.p) edges.emplace_back(u, v);
                Graph G = make_graph(n, edges);
                if (G.connected) return G;
            }
            throw Disconnected("er graph disconnected after 100 draws");
        }
    }
    return make_graph(n, std::move(edges));
}

namespace {

void require_connected(const Graph& G) {
    if (!G.connected) throw BadParams("walk builder needs a connected graph");
}

}  // namespace

TransitionMatrix simple_rw(const Graph& G) {
    require_connected(G);
    Matrix P = Matrix::Zero(G.n, G.n);
    for (int u = 0; u < G.n; ++u)
        for (int v : G.adj[u]) P(u, v) = 1.0 / G.degree(u);
    return validate(P);
}

TransitionMatrix lazy_rw(const Graph& G, double alpha) {
    require_connected(G);
    if (alpha <= 0.0 || alpha >= 1.0)
        throw BadParams("lazy walk needs alpha in (0,1)");
    Matrix P = Matrix::Zero(G.n, G.n);
    for (int u = 0; u < G.n; ++u) {
        P(u, u) = alpha;
        for (int v : G.adj[u]) P(u, v) = (1.0 - alpha) / G.degree(u);
    }
    return validate(P);
}

TransitionMatrix metropolis(const Graph& G) {
    require_connected(G);
    Matrix P = Matrix::Zero(G.n, G.n);
    for (int u = 0; u < G.n; ++u) {
        double out = 0.0;
        for (int v : G.adj[u]) {
            P(u, v) = std::min(1.0 / G.degree(u), 1.0 / G.degree(v));
            out += P(u, v);
        }
        // a residue below 1e-13 is accumulation noise from an exactly-zero
        // holding probability (regular neighborhoods); keep the entry an
        // exact zero, the row sum stays within the validator's 1e-12
        const double hold = 1.0 - out;
        if (hold > 1e-13) P(u, u) = hold;
    }
    return validate(P);
}

TransitionMatrix beta_rw(const Graph& G, double beta) {
    require_connected(G);
    if (beta < 0.0 || beta > 1.0) throw BadParams("beta must lie in [0,1]");
    Matrix P = Matrix::Zero(G.n, G.n);
    for (int u = 0; u < G.n; ++u) {
        double norm = 0.0;
        for (int v : G.adj[u]) norm += std::pow(G.degree(v), -beta);
        for (int v : G.adj[u]) P(u, v) = std::pow(G.degree(v), -beta) / norm;
    }
    return validate(P);
}

TransitionMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty matrix file");

    if (text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("bad matrix JSON: ") + e.what());
        }
        const int n = j.at("n").get<int>();
        const auto& rows = j.at("rows");
        if (static_cast<int>(rows.size()) != n)
            throw ParseError("row count does not match n");
        Matrix M(n, n);
        for (int u = 0; u < n; ++u) {
            if (static_cast<int>(rows[u].size()) != n)
                throw ParseError("column count does not match n");
            for (int v = 0; v < n; ++v) M(u, v) = rows[u][v].get<double>();
        }
        return validate(M);
    }

    // CSV: n rows of n comma-separated reals
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("bad CSV cell \"" + cell + "\"", lineno);
            }
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    Matrix M(n, n);
    for (int u = 0; u < n; ++u) {
        if (static_cast<int>(rows[u].size()) != n)
            throw ParseError("CSV is not square", u + 1);
        for (int v = 0; v < n; ++v) M(u, v) = rows[u][v];
    }
    return validate(M);
}

void save_matrix(const TransitionMatrix& P, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "{\"n\": " << P.n << ", \"rows\": [";
    out << std::setprecision(17);
    for (int u = 0; u < P.n; ++u) {
        out << (u ? ", [" : "[");
        for (int v = 0; v < P.n; ++v) out << (v ? ", " : "") << P.rows(u, v);
        out << "]";
    }
    out << "]}\n";
}

}  // namespace detwalk
