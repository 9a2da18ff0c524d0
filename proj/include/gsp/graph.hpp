#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsp {

// Simple undirected graph on vertices 0..n-1 with per-vertex neighbor bitmasks.
// n is capped at 25 for the diagonal engine (2^n coefficients); the dense
// oracle enforces its own tighter limit.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // each pair (a,b) with a < b, sorted, unique
    std::vector<uint32_t> adj;               // adj[a] = OR of 1<<b over neighbors b

    bool operator==(const Graph& o) const { return n == o.n && edges == o.edges; }
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Graph build_graph(int n, std::vector<std::pair<int, int>> edge_list);

Graph ring_graph(int n);
Graph path_graph(int n);

// Ordered partition of vertices into independent sets, one bitmask per class.
struct Coloring {
    std::vector<uint32_t> classes;

    int k() const { return static_cast<int>(classes.size()); }
    uint32_t mask(int j) const { return classes.at(static_cast<size_t>(j)); }
};

// Validates independence and partition; returns the offending edge on failure.
std::optional<std::pair<int, int>> coloring_violation(const Graph& g, const Coloring& c);

// Returns hint when valid, else greedy coloring in ascending vertex order.
// Throws GraphError naming the bad edge when the hint is invalid.
Coloring color_graph(const Graph& g, const std::optional<Coloring>& hint = std::nullopt);

// Subgraph keeping only the edges with exactly one endpoint in class j.
// Two-colorable with classes (A_j, complement).
Graph derive_gj(const Graph& g, const Coloring& c, int j);

// Proper 2-coloring of a (two-colorable) graph: BFS layering per component,
// isolated vertices land in the second class. Throws if an odd cycle exists.
Coloring two_coloring(const Graph& g);

struct SplitResult {
    std::vector<Graph> subgraphs;           // each on the original vertex set
    std::vector<std::vector<int>> alive;    // vertices carried by each subgraph
    Graph residual;                          // remaining two-colorable part
    std::vector<int> residual_alive;
};

// Iterative split: g~_j = g_j with all earlier classes' vertices deleted,
// stopping once the remainder is two-colorable.
SplitResult derive_split_subgraphs(const Graph& g, const Coloring& c,
                                   const std::vector<int>& order);

// Pauli word with a global sign, one letter per vertex.
struct PauliString {
    std::string letters;  // chars from {I,X,Y,Z}
    int sign = +1;
};

// K_a: X on a, Z on each neighbor.
PauliString correlation_operator(const Graph& g, int a);

bool pauli_commute(const PauliString& p, const PauliString& q);

bool is_two_colorable(const Graph& g);

// Graph after deleting a vertex set (indices kept, edges dropped).
Graph drop_vertices(const Graph& g, uint32_t victims);

// Graph after deleting a vertex set, survivors renumbered downward in order.
// map_out[v] is the new index of survivor v, -1 for victims.
Graph delete_vertices(const Graph& g, uint32_t victims, std::vector<int>* map_out = nullptr);

// Graph after identifying vertex vb with va inside one graph: va keeps the
// symmetric difference of the two neighborhoods (doubled edges cancel), vb is
// removed and higher vertices shift down. Throws when va and vb are adjacent;
// the contraction then leaves the graph-state family. map_out[vb] maps to the
// merged vertex.
Graph identify_vertices(const Graph& g, int va, int vb, std::vector<int>* map_out = nullptr);

// Graph on the union vertex set after identifying vertex v2 of g2 with v1 of
// g1: the merged vertex inherits both neighborhoods. g2's vertices (minus v2)
// are appended after g1's.
Graph merge_graphs(const Graph& g1, int v1, const Graph& g2, int v2,
                   std::vector<int>* g2_map_out = nullptr);

}  // namespace gsp
