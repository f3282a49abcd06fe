#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace der {

struct Edge {
    int to;
    double weight;
};

// Sparse undirected weighted graph. Immutable after construction; safe for
// concurrent reads. External string vertex IDs are mapped to dense 0-based
// indices in first-seen order; all internal math works on indices.
class Graph {
public:
    int n = 0;
    std::vector<std::vector<Edge>> adj;  // per-vertex, sorted by neighbor index
    std::vector<double> degree;          // d_i = sum of incident weights
    double total_degree = 0.0;           // d_V
    std::vector<std::string> ids;        // index -> external ID
    std::unordered_map<std::string, int> index_of;

    // Parses "u v" / "u v w" lines; '#'-lines and blank lines are skipped.
    // Duplicate edges have weights summed; a self-loop with weight w
    // contributes w (not 2w) to d_i.
    static Graph from_edge_list(std::istream& in);
    static Graph from_edge_list_file(const std::string& path);
    static Graph from_edge_list_text(const std::string& text);

    // Programmatic construction from internal indices; zero-weight edges
    // are dropped, duplicates summed. Vertex i gets external ID "i" unless
    // names are given.
    static Graph from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges,
                            std::vector<std::string> names = {});

    void to_edge_list(std::ostream& out) const;

    // pi(i) = d_i / d_V. Throws InvalidInput when d_V = 0.
    std::vector<double> stationary() const;

    // Vertices with d_i > 0, ascending.
    std::vector<int> active_vertices() const;

    // True when every stored weight is exactly 1.
    bool is_unweighted() const;
};

}  // namespace der
