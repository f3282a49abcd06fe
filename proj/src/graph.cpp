#include "der/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "der/errors.hpp"

namespace der {

namespace {

Graph build(std::vector<std::string> ids, std::unordered_map<std::string, int> index_of,
            const std::map<std::pair<int, int>, double>& weights) {
    Graph g;
    g.n = static_cast<int>(ids.size());
    g.ids = std::move(ids);
    g.index_of = std::move(index_of);
    g.adj.assign(g.n, {});
    g.degree.assign(g.n, 0.0);
    for (const auto& [uv, w] : weights) {
        auto [u, v] = uv;
        g.adj[u].push_back({v, w});
        g.degree[u] += w;
        if (u != v) {
            g.adj[v].push_back({u, w});
            g.degree[v] += w;
        }
    }
    for (auto& nbrs : g.adj)
        std::sort(nbrs.begin(), nbrs.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
    g.total_degree = 0.0;
    for (double d : g.degree) g.total_degree += d;
    return g;
}

}  // namespace

Graph Graph::from_edge_list(std::istream& in) {
    std::vector<std::string> ids;
    std::unordered_map<std::string, int> index_of;
    std::map<std::pair<int, int>, double> weights;  // key: (min, max) internal indices

    auto intern = [&](const std::string& token) {
        auto it = index_of.find(token);
        if (it != index_of.end()) return it->second;
        int idx = static_cast<int>(ids.size());
        ids.push_back(token);
        index_of.emplace(token, idx);
        return idx;
    };

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string u, v, w_tok, rest;
        if (!(ls >> u)) continue;       // blank
        if (u[0] == '#') continue;      // comment
        if (!(ls >> v))
            throw ParseError("edge list line " + std::to_string(line_no) + ": expected \"u v\" or \"u v w\"", line_no);
        double w = 1.0;
        if (ls >> w_tok) {
            char* end = nullptr;
            w = std::strtod(w_tok.c_str(), &end);
            if (end != w_tok.c_str() + w_tok.size() || !std::isfinite(w) || w <= 0.0)
                throw ParseError("edge list line " + std::to_string(line_no) + ": weight \"" + w_tok +
                                     "\" is not a positive number",
                                 line_no);
            if (ls >> rest)
                throw ParseError("edge list line " + std::to_string(line_no) + ": trailing token \"" + rest + "\"",
                                 line_no);
        }
        int a = intern(u), b = intern(v);
        weights[{std::min(a, b), std::max(a, b)}] += w;
    }
    return build(std::move(ids), std::move(index_of), weights);
}

Graph Graph::from_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open edge list file: " + path);
    return from_edge_list(in);
}

Graph Graph::from_edge_list_text(const std::string& text) {
    std::istringstream in(text);
    return from_edge_list(in);
}

Graph Graph::from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges,
                        std::vector<std::string> names) {
    if (names.empty()) {
        names.reserve(n);
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    }
    std::unordered_map<std::string, int> index_of;
    for (int i = 0; i < n; ++i) index_of.emplace(names[i], i);
    std::map<std::pair<int, int>, double> weights;
    for (const auto& [u, v, w] : edges) {
        if (w == 0.0) continue;
        if (w < 0.0 || !std::isfinite(w)) throw InvalidInput("negative or non-finite edge weight");
        if (u < 0 || u >= n || v < 0 || v >= n) throw InvalidInput("edge endpoint out of range");
        weights[{std::min(u, v), std::max(u, v)}] += w;
    }
    return build(std::move(names), std::move(index_of), weights);
}

void Graph::to_edge_list(std::ostream& out) const {
    out.precision(17);
    for (int u = 0; u < n; ++u)
        for (const Edge& e : adj[u])
            if (e.to >= u) out << ids[u] << ' ' << ids[e.to] << ' ' << e.weight << '\n';
}

std::vector<double> Graph::stationary() const {
    if (total_degree <= 0.0) throw InvalidInput("degenerate graph: total degree is zero");
    std::vector<double> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = degree[i] / total_degree;
    return pi;
}

std::vector<int> Graph::active_vertices() const {
    std::vector<int> active;
    for (int i = 0; i < n; ++i)
        if (degree[i] > 0.0) active.push_back(i);
    return active;
}

bool Graph::is_unweighted() const {
    for (const auto& nbrs : adj)
        for (const Edge& e : nbrs)
            if (e.weight != 1.0) return false;
    return true;
}

}  // namespace der
