#include "gsp/graph.hpp"

#include <algorithm>
#include <queue>

namespace gsp {

Graph build_graph(int n, std::vector<std::pair<int, int>> edge_list) {
    if (n < 1 || n > 25) throw GraphError("vertex count out of range: " + std::to_string(n));
    for (auto& [a, b] : edge_list) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw GraphError("edge endpoint out of range: (" + std::to_string(a) + "," +
                             std::to_string(b) + ")");
        if (a == b) throw GraphError("self-loop at vertex " + std::to_string(a));
        if (a > b) std::swap(a, b);
    }
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
    Graph g;
    g.n = n;
    g.edges = std::move(edge_list);
    g.adj.assign(static_cast<size_t>(n), 0);
    for (auto [a, b] : g.edges) {
        g.adj[static_cast<size_t>(a)] |= 1u << b;
        g.adj[static_cast<size_t>(b)] |= 1u << a;
    }
    return g;
}

Graph ring_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return build_graph(n, std::move(e));
}

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return build_graph(n, std::move(e));
}

std::optional<std::pair<int, int>> coloring_violation(const Graph& g, const Coloring& c) {
    uint32_t seen = 0;
    for (uint32_t m : c.classes) {
        if (m & seen) return std::make_pair(-1, -1);  // overlap flagged as pseudo-edge
        seen |= m;
    }
    if (seen != (1u << g.n) - 1u) return std::make_pair(-1, -1);
    for (uint32_t m : c.classes)
        for (auto [a, b] : g.edges)
            if ((m >> a & 1u) && (m >> b & 1u)) return std::make_pair(a, b);
    return std::nullopt;
}

Coloring color_graph(const Graph& g, const std::optional<Coloring>& hint) {
    if (hint) {
        if (auto bad = coloring_violation(g, *hint)) {
            if (bad->first < 0) throw GraphError("coloring classes do not partition the vertex set");
            throw GraphError("coloring not independent: edge (" + std::to_string(bad->first) +
                             "," + std::to_string(bad->second) + ") inside one class");
        }
        return *hint;
    }
    std::vector<int> color(static_cast<size_t>(g.n), -1);
    int k = 0;
    for (int v = 0; v < g.n; ++v) {
        uint32_t used = 0;
        for (int u = 0; u < v; ++u)
            if ((g.adj[static_cast<size_t>(v)] >> u & 1u) && color[static_cast<size_t>(u)] >= 0)
                used |= 1u << color[static_cast<size_t>(u)];
        int ccol = 0;
        while (used >> ccol & 1u) ++ccol;
        color[static_cast<size_t>(v)] = ccol;
        k = std::max(k, ccol + 1);
    }
    Coloring c;
    c.classes.assign(static_cast<size_t>(k), 0);
    for (int v = 0; v < g.n; ++v) c.classes[static_cast<size_t>(color[static_cast<size_t>(v)])] |= 1u << v;
    return c;
}

Graph derive_gj(const Graph& g, const Coloring& c, int j) {
    uint32_t m = c.mask(j);
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges) {
        bool ina = m >> a & 1u, inb = m >> b & 1u;
        if (ina != inb) e.emplace_back(a, b);
    }
    return build_graph(g.n, std::move(e));
}

Coloring two_coloring(const Graph& g) {
    std::vector<int> side(static_cast<size_t>(g.n), -1);
    for (int s = 0; s < g.n; ++s) {
        if (side[static_cast<size_t>(s)] >= 0) continue;
        if (g.adj[static_cast<size_t>(s)] == 0) {
            side[static_cast<size_t>(s)] = 1;  // isolated vertices join the larger second class
            continue;
        }
        side[static_cast<size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u = 0; u < g.n; ++u) {
                if (!(g.adj[static_cast<size_t>(v)] >> u & 1u)) continue;
                if (side[static_cast<size_t>(u)] < 0) {
                    side[static_cast<size_t>(u)] = 1 - side[static_cast<size_t>(v)];
                    q.push(u);
                } else if (side[static_cast<size_t>(u)] == side[static_cast<size_t>(v)]) {
                    throw GraphError("graph is not two-colorable (odd cycle)");
                }
            }
        }
    }
    Coloring c;
    c.classes.assign(2, 0);
    for (int v = 0; v < g.n; ++v) c.classes[static_cast<size_t>(side[static_cast<size_t>(v)])] |= 1u << v;
    return c;
}

bool is_two_colorable(const Graph& g) {
    try {
        two_coloring(g);
        return true;
    } catch (const GraphError&) {
        return false;
    }
}

Graph drop_vertices(const Graph& g, uint32_t victims) {
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges)
        if (!((victims >> a | victims >> b) & 1u)) e.emplace_back(a, b);
    return build_graph(g.n, std::move(e));
}

Graph delete_vertices(const Graph& g, uint32_t victims, std::vector<int>* map_out) {
    std::vector<int> map(static_cast<size_t>(g.n), -1);
    int next = 0;
    for (int v = 0; v < g.n; ++v)
        if (!(victims >> v & 1u)) map[static_cast<size_t>(v)] = next++;
    if (next == 0) throw GraphError("cannot delete every vertex");
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges)
        if (!((victims >> a | victims >> b) & 1u))
            e.emplace_back(map[static_cast<size_t>(a)], map[static_cast<size_t>(b)]);
    if (map_out) *map_out = map;
    return build_graph(next, std::move(e));
}

Graph identify_vertices(const Graph& g, int va, int vb, std::vector<int>* map_out) {
    if (va < 0 || va >= g.n || vb < 0 || vb >= g.n || va == vb)
        throw GraphError("identify_vertices needs two distinct in-range vertices");
    if (g.adj[static_cast<size_t>(va)] >> vb & 1u)
        throw GraphError("cannot identify adjacent vertices (" + std::to_string(va) + "," +
                         std::to_string(vb) + ")");
    std::vector<int> map(static_cast<size_t>(g.n));
    for (int v = 0; v < g.n; ++v) map[static_cast<size_t>(v)] = v - (v > vb);
    map[static_cast<size_t>(vb)] = map[static_cast<size_t>(va)];
    uint32_t pin = (1u << va) | (1u << vb);
    uint32_t nbr = (g.adj[static_cast<size_t>(va)] ^ g.adj[static_cast<size_t>(vb)]) & ~pin;
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges)
        if (!((pin >> a | pin >> b) & 1u))
            e.emplace_back(map[static_cast<size_t>(a)], map[static_cast<size_t>(b)]);
    for (int c = 0; c < g.n; ++c)
        if (nbr >> c & 1u) e.emplace_back(map[static_cast<size_t>(va)], map[static_cast<size_t>(c)]);
    Graph out = build_graph(g.n - 1, std::move(e));
    if (map_out) *map_out = map;
    return out;
}

SplitResult derive_split_subgraphs(const Graph& g, const Coloring& c,
                                   const std::vector<int>& order) {
    SplitResult r;
    uint32_t all = (1u << g.n) - 1u;
    uint32_t erased = 0;
    Graph rest = g;
    for (int j : order) {
        if (is_two_colorable(rest)) break;
        Graph gj = derive_gj(g, c, j);
        Graph trimmed = drop_vertices(gj, erased);
        r.subgraphs.push_back(trimmed);
        std::vector<int> alive;
        for (int v = 0; v < g.n; ++v)
            if (!(erased >> v & 1u)) alive.push_back(v);
        r.alive.push_back(std::move(alive));
        // the edges of g~_j leave the remainder
        std::vector<std::pair<int, int>> keep;
        for (auto [a, b] : rest.edges) {
            bool used = false;
            for (auto [x, y] : trimmed.edges) used |= (a == x && b == y);
            if (!used) keep.emplace_back(a, b);
        }
        rest = build_graph(g.n, std::move(keep));
        erased |= c.mask(j);
    }
    r.residual = rest;
    for (int v = 0; v < g.n; ++v)
        if (!(erased >> v & 1u)) r.residual_alive.push_back(v);
    (void)all;
    return r;
}

PauliString correlation_operator(const Graph& g, int a) {
    if (a < 0 || a >= g.n) throw GraphError("vertex out of range");
    PauliString p;
    p.letters.assign(static_cast<size_t>(g.n), 'I');
    p.letters[static_cast<size_t>(a)] = 'X';
    for (int b = 0; b < g.n; ++b)
        if (g.adj[static_cast<size_t>(a)] >> b & 1u) p.letters[static_cast<size_t>(b)] = 'Z';
    return p;
}

bool pauli_commute(const PauliString& p, const PauliString& q) {
    int anti = 0;
    for (size_t i = 0; i < p.letters.size(); ++i) {
        char x = p.letters[i], y = q.letters[i];
        if (x != 'I' && y != 'I' && x != y) ++anti;
    }
    return anti % 2 == 0;
}

Graph merge_graphs(const Graph& g1, int v1, const Graph& g2, int v2,
                   std::vector<int>* g2_map_out) {
    int n = g1.n + g2.n - 1;
    std::vector<int> map2(static_cast<size_t>(g2.n));
    int next = g1.n;
    for (int v = 0; v < g2.n; ++v) map2[static_cast<size_t>(v)] = (v == v2) ? v1 : next++;
    std::vector<std::pair<int, int>> e = g1.edges;
    for (auto [a, b] : g2.edges) e.emplace_back(map2[static_cast<size_t>(a)], map2[static_cast<size_t>(b)]);
    if (g2_map_out) *g2_map_out = map2;
    return build_graph(n, std::move(e));
}

}  // namespace gsp
