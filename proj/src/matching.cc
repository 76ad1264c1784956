// Copyright 2026 lomatch Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lomatch/matching.h"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>

namespace lomatch {

void MatchGraph::add_edge(int a, int b, int64_t weight, int payload, bool in_obs) {
    if (a < 0 || a >= n_vertices || b < 0 || b >= n_vertices || a == b) {
        throw std::invalid_argument("bad edge endpoints");
    }
    if (weight < 0) {
        throw std::invalid_argument("edge weights must be non-negative");
    }
    edges.push_back(Edge{a, b, weight, payload, in_obs});
}

void MatchGraph::add_boundary_edge(int a, int64_t weight, int payload, bool in_obs) {
    if (a < 0 || a >= n_vertices) {
        throw std::invalid_argument("bad edge endpoint");
    }
    if (weight < 0) {
        throw std::invalid_argument("edge weights must be non-negative");
    }
    edges.push_back(Edge{a, -1, weight, payload, in_obs});
}

namespace {

/// Primal-dual blossom algorithm for maximum-weight matching on a dense
/// graph, O(n^3). Nodes are 1-based; 0 is the null sentinel; slots above n
/// hold contracted blossoms. Weights are pre-doubled so dual variables stay
/// integral throughout (see the parity argument in the tests).
class BlossomSolver {
   public:
    explicit BlossomSolver(const std::vector<std::vector<int64_t>> &w2) {
        n = int(w2.size());
        cap = 2 * n + 1;
        g.assign(size_t(cap), std::vector<E>(size_t(cap), E{0, 0, 0}));
        lab.assign(size_t(cap), 0);
        match_.assign(size_t(cap), 0);
        slack_.assign(size_t(cap), 0);
        st_.assign(size_t(cap), 0);
        pa_.assign(size_t(cap), 0);
        S_.assign(size_t(cap), -1);
        vis_.assign(size_t(cap), 0);
        flower_.assign(size_t(cap), {});
        flower_from_.assign(size_t(cap), std::vector<int>(size_t(n + 1), 0));
        n_x = n;
        int64_t w_max = 0;
        for (int u = 1; u <= n; u++) {
            for (int v = 1; v <= n; v++) {
                g[u][v] = E{u, v, u == v ? 0 : w2[size_t(u - 1)][size_t(v - 1)]};
                w_max = std::max(w_max, g[u][v].w);
            }
        }
        for (int u = 1; u <= n; u++) {
            st_[u] = u;
            flower_from_[u][u] = u;
            lab[u] = w_max / 2;
        }
    }

    /// Returns 1-based mates (0 = unmatched).
    std::vector<int> solve() {
        while (matching()) {
        }
        return match_;
    }

   private:
    struct E {
        int u, v;
        int64_t w;
    };
    int n, n_x, cap;
    std::vector<std::vector<E>> g;
    std::vector<int64_t> lab;
    std::vector<int> match_, slack_, st_, pa_, S_, vis_;
    std::vector<std::vector<int>> flower_, flower_from_;
    std::deque<int> q_;
    int vis_token_ = 0;

    int64_t e_delta(const E &e) const {
        return lab[e.u] + lab[e.v] - g[e.u][e.v].w;
    }
    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g[u][x]) < e_delta(g[slack_[x]][x])) {
            slack_[x] = u;
        }
    }
    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n; u++) {
            if (g[u][x].w > 0 && st_[u] != x && S_[st_[u]] == 0) {
                update_slack(u, x);
            }
        }
    }
    void q_push(int x) {
        if (x <= n) {
            q_.push_back(x);
        } else {
            for (int t : flower_[x]) {
                q_push(t);
            }
        }
    }
    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n) {
            for (int t : flower_[x]) {
                set_st(t, b);
            }
        }
    }
    int get_pr(int b, int xr) {
        int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) - flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return int(flower_[b].size()) - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match_[u] = g[u][v].v;
        if (u <= n) {
            return;
        }
        E e = g[u][v];
        int xr = flower_from_[u][e.u];
        int pr = get_pr(u, xr);
        for (int i = 0; i < pr; i++) {
            set_match(flower_[u][size_t(i)], flower_[u][size_t(i ^ 1)]);
        }
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) {
                return;
            }
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        for (++vis_token_; u || v; std::swap(u, v)) {
            if (u == 0) {
                continue;
            }
            if (vis_[u] == vis_token_) {
                return u;
            }
            vis_[u] = vis_token_;
            u = st_[match_[u]];
            if (u) {
                u = st_[pa_[u]];
            }
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n + 1;
        while (b <= n_x && st_[b]) {
            b++;
        }
        if (b > n_x) {
            n_x++;
        }
        lab[b] = 0;
        S_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x; x++) {
            g[b][x].w = g[x][b].w = 0;
        }
        for (int x = 1; x <= n; x++) {
            flower_from_[b][x] = 0;
        }
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x; x++) {
                if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
                    g[b][x] = g[xs][x];
                    g[x][b] = g[x][xs];
                }
            }
            for (int x = 1; x <= n; x++) {
                if (flower_from_[xs][x]) {
                    flower_from_[b][x] = xs;
                }
            }
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        for (int t : flower_[b]) {
            set_st(t, t);
        }
        int xr = flower_from_[b][g[b][pa_[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][size_t(i)];
            int xns = flower_[b][size_t(i + 1)];
            pa_[xs] = g[xns][xs].u;
            S_[xs] = 1;
            S_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = size_t(pr) + 1; i < flower_[b].size(); i++) {
            S_[flower_[b][i]] = -1;
            set_slack(flower_[b][i]);
        }
        st_[b] = 0;
    }
    bool on_found_edge(const E &e) {
        int u = st_[e.u], v = st_[e.v];
        if (S_[v] == -1) {
            pa_[v] = e.u;
            S_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            S_[nu] = 0;
            q_push(nu);
        } else if (S_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching() {
        std::fill(S_.begin(), S_.end(), -1);
        std::fill(slack_.begin(), slack_.end(), 0);
        q_.clear();
        bool any_free = false;
        for (int x = 1; x <= n_x; x++) {
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                S_[x] = 0;
                q_push(x);
                any_free = true;
            }
        }
        if (!any_free) {
            return false;
        }
        for (;;) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (S_[st_[u]] == 1) {
                    continue;
                }
                for (int v = 1; v <= n; v++) {
                    if (g[u][v].w > 0 && st_[u] != st_[v]) {
                        if (e_delta(g[u][v]) == 0) {
                            if (on_found_edge(g[u][v])) {
                                return true;
                            }
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
                }
            }
            int64_t d = kNoEdge;
            for (int b = n + 1; b <= n_x; b++) {
                if (st_[b] == b && S_[b] == 1) {
                    d = std::min(d, lab[b] / 2);
                }
            }
            for (int x = 1; x <= n_x; x++) {
                if (st_[x] == x && slack_[x]) {
                    if (S_[x] == -1) {
                        d = std::min(d, e_delta(g[slack_[x]][x]));
                    } else if (S_[x] == 0) {
                        d = std::min(d, e_delta(g[slack_[x]][x]) / 2);
                    }
                }
            }
            if (d >= kNoEdge) {
                return false;  // no progress possible: no perfect matching
            }
            for (int u = 1; u <= n; u++) {
                if (S_[st_[u]] == 0) {
                    if (lab[u] <= d) {
                        return false;
                    }
                    lab[u] -= d;
                } else if (S_[st_[u]] == 1) {
                    lab[u] += d;
                }
            }
            for (int b = n + 1; b <= n_x; b++) {
                if (st_[b] == b) {
                    if (S_[b] == 0) {
                        lab[b] += d * 2;
                    } else if (S_[b] == 1) {
                        lab[b] -= d * 2;
                    }
                }
            }
            q_.clear();
            for (int x = 1; x <= n_x; x++) {
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g[slack_[x]][x]) == 0) {
                    if (on_found_edge(g[slack_[x]][x])) {
                        return true;
                    }
                }
            }
            for (int b = n + 1; b <= n_x; b++) {
                if (st_[b] == b && S_[b] == 1 && lab[b] == 0) {
                    expand_blossom(b);
                }
            }
        }
    }
};

}  // namespace

std::optional<std::vector<int>> min_weight_perfect_matching(
    const std::vector<std::vector<int64_t>> &wt) {
    size_t n = wt.size();
    if (n == 0) {
        return std::vector<int>{};
    }
    if (n % 2 != 0) {
        return std::nullopt;
    }
    int64_t max_cost = 0;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            if (i != j && wt[i][j] != kNoEdge) {
                max_cost = std::max(max_cost, wt[i][j]);
            }
        }
    }
    // Offset so every perfect matching outweighs every deficient one.
    int64_t c = (int64_t(n) / 2) * max_cost + 1;
    std::vector<std::vector<int64_t>> w2(n, std::vector<int64_t>(n, 0));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            if (i != j && wt[i][j] != kNoEdge) {
                w2[i][j] = 2 * (c - wt[i][j]);
            }
        }
    }
    BlossomSolver solver(w2);
    std::vector<int> mate1 = solver.solve();
    std::vector<int> mate(n, -1);
    for (size_t i = 0; i < n; i++) {
        if (mate1[i + 1] == 0) {
            return std::nullopt;
        }
        mate[i] = mate1[i + 1] - 1;
    }
    return mate;
}

ShortestPathEngine::ShortestPathEngine(const MatchGraph &graph) : graph_(&graph) {
    adjacency_.assign(size_t(graph.n_vertices) + 1, {});
    for (size_t e = 0; e < graph.edges.size(); e++) {
        const auto &edge = graph.edges[e];
        int b = edge.b < 0 ? graph.n_vertices : edge.b;
        adjacency_[size_t(edge.a)].emplace_back(b, int(e));
        if (b != graph.n_vertices) {
            adjacency_[size_t(b)].emplace_back(edge.a, int(e));
        }
        // The boundary is a sink: no out-edges.
    }
}

const ShortestPathEngine::SourceTable &ShortestPathEngine::from(int source) {
    auto it = cache_.find(source);
    if (it != cache_.end()) {
        return it->second;
    }
    size_t total = size_t(graph_->n_vertices) + 1;
    SourceTable table;
    table.dist.assign(total, kNoEdge);
    table.pred_vertex.assign(total, -1);
    table.pred_edge.assign(total, -1);
    using Item = std::pair<int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    table.dist[size_t(source)] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d != table.dist[size_t(v)]) {
            continue;
        }
        if (v == graph_->n_vertices) {
            continue;  // boundary is a sink
        }
        for (auto [nb, e] : adjacency_[size_t(v)]) {
            int64_t nd = d + graph_->edges[size_t(e)].weight;
            if (nd < table.dist[size_t(nb)] ||
                (nd == table.dist[size_t(nb)] &&
                 std::make_pair(v, e) < std::make_pair(table.pred_vertex[size_t(nb)],
                                                       table.pred_edge[size_t(nb)]))) {
                bool improved = nd < table.dist[size_t(nb)];
                table.dist[size_t(nb)] = nd;
                table.pred_vertex[size_t(nb)] = v;
                table.pred_edge[size_t(nb)] = e;
                if (improved) {
                    heap.emplace(nd, nb);
                }
            }
        }
    }
    return cache_.emplace(source, std::move(table)).first->second;
}

void ShortestPathEngine::path_edges(int source, int target, std::vector<int> &out) {
    const SourceTable &table = from(source);
    int v = target;
    while (v != source) {
        int e = table.pred_edge[size_t(v)];
        if (e < 0) {
            throw std::runtime_error("no path to reconstruct");
        }
        out.push_back(e);
        v = table.pred_vertex[size_t(v)];
    }
}

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

MatchingSolution decode_graph_with_engine(const MatchGraph &graph, ShortestPathEngine &engine,
                                          const std::vector<int> &defects) {
    std::vector<int> ds = defects;
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    for (int d : ds) {
        if (d < 0 || d >= graph.n_vertices) {
            throw std::invalid_argument("defect outside the graph: " + std::to_string(d));
        }
    }
    MatchingSolution solution;
    if (ds.empty()) {
        return solution;
    }
    size_t k = ds.size();
    int boundary = engine.boundary_vertex();
    // Nodes: 0..k-1 defects, k..2k-1 per-defect boundary images.
    std::vector<std::vector<int64_t>> wt(2 * k, std::vector<int64_t>(2 * k, kNoEdge));
    for (size_t i = 0; i < k; i++) {
        const auto &table = engine.from(ds[i]);
        for (size_t j = i + 1; j < k; j++) {
            wt[i][j] = wt[j][i] = table.dist[size_t(ds[j])];
        }
        wt[i][k + i] = wt[k + i][i] = table.dist[size_t(boundary)];
        for (size_t j = 0; j < k; j++) {
            if (j != i) {
                wt[k + i][k + j] = 0;
            }
        }
    }
    auto mates = min_weight_perfect_matching(wt);
    if (!mates) {
        throw std::runtime_error("defects cannot be matched (odd component without boundary)");
    }
    std::vector<char> edge_parity(graph.edges.size(), 0);
    std::vector<int> path;
    for (size_t i = 0; i < k; i++) {
        int m = (*mates)[i];
        if (m < 0 || (size_t(m) < k && size_t(m) < i)) {
            continue;  // pair handled from the lower index
        }
        path.clear();
        if (size_t(m) < k) {
            engine.path_edges(ds[i], ds[size_t(m)], path);
        } else if (size_t(m) == k + i) {
            engine.path_edges(ds[i], boundary, path);
        } else {
            continue;  // boundary image matched elsewhere; no physical path
        }
        for (int e : path) {
            edge_parity[size_t(e)] ^= 1;
        }
    }
    for (size_t e = 0; e < edge_parity.size(); e++) {
        if (edge_parity[e]) {
            solution.edges.push_back(int(e));
            solution.total_weight += graph.edges[e].weight;
            solution.obs_parity = solution.obs_parity ^ graph.edges[e].in_obs;
        }
    }
    return solution;
}

MatchingSolution decode_graph(const MatchGraph &graph, const std::vector<int> &defects,
                              const DecodeOptions &opts) {
    if (opts.tie_break_seed.has_value()) {
        MatchGraph perturbed = graph;
        for (size_t e = 0; e < perturbed.edges.size(); e++) {
            auto &edge = perturbed.edges[e];
            uint64_t h = mix64(*opts.tie_break_seed ^ mix64(e + 0x51ull));
            edge.weight = edge.weight * 256 + int64_t(h & 0xff);
        }
        ShortestPathEngine engine(perturbed);
        MatchingSolution sol = decode_graph_with_engine(perturbed, engine, defects);
        int64_t w = 0;
        for (int e : sol.edges) {
            w += graph.edges[size_t(e)].weight;
        }
        sol.total_weight = w;
        return sol;
    }
    ShortestPathEngine engine(graph);
    return decode_graph_with_engine(graph, engine, defects);
}

}  // namespace lomatch
