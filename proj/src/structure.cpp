#include "polydyn/structure.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace polydyn {

const char* to_string(Connectivity c) {
    switch (c) {
        case Connectivity::Strong: return "strong";
        case Connectivity::Unilateral: return "unilateral";
        case Connectivity::Weak: return "weak";
        case Connectivity::Disconnected: return "disconnected";
    }
    return "?";
}

std::vector<std::vector<int>> positive_pattern(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m(i, j) > 0.0) adj[i].push_back(j);
    return adj;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    stack.reserve(n);
    std::vector<std::vector<int>> comps;

    struct Frame {
        int v;
        std::size_t next;
    };
    std::vector<Frame> call;
    int counter = 0;

    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        call.push_back({s, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < adj[f.v].size()) {
                const int u = adj[f.v][f.next++];
                if (index[u] == -1) {
                    index[u] = low[u] = counter++;
                    stack.push_back(u);
                    on_stack[u] = 1;
                    call.push_back({u, 0});
                } else if (on_stack[u]) {
                    low[f.v] = std::min(low[f.v], index[u]);
                }
            } else {
                const int v = f.v;
                if (low[v] == index[v]) {
                    std::vector<int> comp;
                    int u;
                    do {
                        u = stack.back();
                        stack.pop_back();
                        on_stack[u] = 0;
                        comp.push_back(u);
                    } while (u != v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                call.pop_back();
                if (!call.empty())
                    low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return comps;
}

int component_period(const std::vector<std::vector<int>>& adj,
                     const std::vector<int>& component) {
    const int n = static_cast<int>(adj.size());
    std::vector<char> in_comp(n, 0);
    for (int v : component) in_comp[v] = 1;

    if (component.size() == 1) {
        const int v = component.front();
        const bool self_loop =
            std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
        return self_loop ? 1 : 0;
    }

    // BFS levels from any node; the gcd of (level(u) + 1 - level(v)) over
    // internal edges u -> v equals the cycle-length gcd.
    std::vector<int> level(n, -1);
    const int root = component.front();
    level[root] = 0;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (!in_comp[v]) continue;
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                q.push(v);
            }
        }
    }
    int g = 0;
    for (int u : component)
        for (int v : adj[u])
            if (in_comp[v]) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    return g;
}

namespace {

// A condensation DAG has a Hamiltonian path iff its topological order is
// unique (exactly one zero-indegree candidate at every Kahn step).
bool condensation_is_chain(const std::vector<std::set<int>>& dag) {
    const int k = static_cast<int>(dag.size());
    std::vector<int> indeg(k, 0);
    for (int c = 0; c < k; ++c)
        for (int d : dag[c]) ++indeg[d];
    std::vector<char> done(k, 0);
    for (int step = 0; step < k; ++step) {
        int candidate = -1;
        for (int c = 0; c < k; ++c) {
            if (done[c] || indeg[c] != 0) continue;
            if (candidate != -1) return false;
            candidate = c;
        }
        if (candidate == -1) return false;
        done[candidate] = 1;
        for (int d : dag[candidate]) --indeg[d];
    }
    return true;
}

bool undirected_connected(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return false;
    std::vector<std::vector<int>> sym(n);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) {
            sym[u].push_back(v);
            sym[v].push_back(u);
        }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : sym[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == n;
}

}  // namespace

StructureClass structure_class(const InfluenceMatrix& w) {
    const auto adj = positive_pattern(w.matrix());
    const int n = static_cast<int>(adj.size());
    const auto comps = strongly_connected_components(adj);
    const int k = static_cast<int>(comps.size());

    std::vector<int> comp_of(n, -1);
    for (int c = 0; c < k; ++c)
        for (int v : comps[c]) comp_of[v] = c;

    std::vector<std::set<int>> dag(k);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (comp_of[u] != comp_of[v]) dag[comp_of[u]].insert(comp_of[v]);

    StructureClass out;
    if (k == 1)
        out.connectivity = Connectivity::Strong;
    else if (condensation_is_chain(dag))
        out.connectivity = Connectivity::Unilateral;
    else if (undirected_connected(adj))
        out.connectivity = Connectivity::Weak;
    else
        out.connectivity = Connectivity::Disconnected;

    out.has_positive_diagonal = w.matrix().diagonal().maxCoeff() > 0.0;

    for (int c = 0; c < k; ++c) {
        if (!dag[c].empty()) continue;  // not terminal
        out.terminal_periods.push_back(component_period(adj, comps[c]));
    }
    out.aperiodic = !out.terminal_periods.empty();
    for (int p : out.terminal_periods)
        if (p != 1) out.aperiodic = false;

    return out;
}

}  // namespace polydyn
