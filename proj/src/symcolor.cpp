#include "psad/symcolor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "psad/errors.hpp"

namespace psad {

namespace {

using Adjacency = std::vector<std::vector<std::int32_t>>;

// Smallest-last ordering on an explicit graph; same convention as the column
// version (reversed min-degree elimination, ties toward smaller index in the
// final ordering).
std::vector<std::int32_t> smallest_last(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::int32_t> degree(n);
    for (int v = 0; v < n; ++v) degree[v] = static_cast<std::int32_t>(adj[v].size());

    std::set<std::pair<std::int32_t, std::int32_t>> queue;
    for (int v = 0; v < n; ++v) queue.emplace(degree[v], n - 1 - v);

    std::vector<bool> removed(n, false);
    std::vector<std::int32_t> removal;
    removal.reserve(n);
    while (!queue.empty()) {
        const auto [d, key] = *queue.begin();
        queue.erase(queue.begin());
        const std::int32_t v = n - 1 - key;
        removed[v] = true;
        removal.push_back(v);
        for (std::int32_t u : adj[v]) {
            if (removed[u]) continue;
            queue.erase({degree[u], n - 1 - u});
            --degree[u];
            queue.emplace(degree[u], n - 1 - u);
        }
    }
    return {removal.rbegin(), removal.rend()};
}

int color_count(const std::vector<std::int32_t>& color) {
    std::int32_t p = 0;
    for (std::int32_t c : color) p = std::max(p, c);
    return p;
}

} // namespace

Matrix SymmetricColoring::seed_matrix() const {
    Matrix V(static_cast<int>(color.size()), p);
    for (std::size_t j = 0; j < color.size(); ++j) V(static_cast<int>(j), color[j] - 1) = 1.0;
    return V;
}

std::string SymmetricColoring::to_json() const {
    nlohmann::json doc;
    doc["kind"] = kind == SymmetricMethod::direct ? "direct" : "substitution";
    doc["p"] = p;
    doc["color"] = color;
    return doc.dump();
}

SymmetricColoring SymmetricColoring::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    SymmetricColoring out;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "direct") {
        out.kind = SymmetricMethod::direct;
    } else if (kind == "substitution") {
        out.kind = SymmetricMethod::substitution;
    } else {
        throw std::invalid_argument("unknown coloring kind: " + kind);
    }
    out.p = doc.at("p").get<int>();
    out.color = doc.at("color").get<std::vector<std::int32_t>>();
    for (std::int32_t c : out.color)
        if (c < 1 || c > out.p) throw std::invalid_argument("color outside [1, p]");
    return out;
}

namespace {

std::vector<std::int32_t> greedy_star_colors(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    const std::vector<std::int32_t> order = smallest_last(adj);

    std::vector<std::int32_t> color(n, 0);
    std::vector<std::int32_t> forbidden(n + 2, -1);
    std::vector<std::int32_t> times_seen(n + 2, 0); // per-step color multiplicity among neighbors

    for (std::int32_t v : order) {
        // Properness, and count how often each color occurs among colored
        // neighbors (a color occurring twice opens 4-vertex paths through v).
        std::vector<std::int32_t> touched;
        for (std::int32_t w : adj[v]) {
            if (color[w] == 0) continue;
            forbidden[color[w]] = v;
            if (times_seen[color[w]] == 0) touched.push_back(color[w]);
            ++times_seen[color[w]];
        }
        for (std::int32_t w : adj[v]) {
            if (color[w] == 0) continue;
            // Path t-v-w-u with color(t) == color(w): forbid every color
            // around w.
            if (times_seen[color[w]] >= 2) {
                for (std::int32_t u : adj[w]) {
                    if (u == v || color[u] == 0) continue;
                    forbidden[color[u]] = v;
                }
            }
            // Path v-w-u-t with color(t) == color(w): forbid color(u).
            for (std::int32_t u : adj[w]) {
                if (u == v || color[u] == 0 || forbidden[color[u]] == v) continue;
                for (std::int32_t t : adj[u]) {
                    if (t == w || t == v || color[t] == 0) continue;
                    if (color[t] == color[w]) {
                        forbidden[color[u]] = v;
                        break;
                    }
                }
            }
        }
        for (std::int32_t c : touched) times_seen[c] = 0;

        std::int32_t c = 1;
        while (forbidden[c] == v) ++c;
        color[v] = c;
    }
    return color;
}

} // namespace

SymmetricColoring star_coloring(const SymmetricPattern& H) {
    SymmetricColoring out;
    out.kind = SymmetricMethod::direct;
    out.color = greedy_star_colors(H.adjacency());
    out.p = std::max(1, color_count(out.color));
    return out;
}

namespace {

// Builds the two-colored forests of an acyclic coloring; throws
// plan_infeasible_error naming an edge on a bicolored cycle.
std::vector<SymmetricColoring::TwoColoredTree> build_two_colored_forest(
    const Adjacency& adj, const std::vector<std::int32_t>& color) {
    const int n = static_cast<int>(adj.size());
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::int32_t>> pair_vertices;
    std::vector<std::int32_t> mark(n, -1);

    // Collect, per color pair, the vertices incident to an edge of that pair.
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::pair<std::int32_t, std::int32_t>>>
        pair_edges;
    for (int v = 0; v < n; ++v) {
        for (std::int32_t u : adj[v]) {
            if (u <= v) continue;
            const auto key = std::minmax(color[v], color[u]);
            pair_edges[{key.first, key.second}].push_back({v, u});
        }
    }

    std::vector<SymmetricColoring::TwoColoredTree> forest;
    std::vector<std::int32_t> parent(n, -2);
    for (const auto& [key, edges] : pair_edges) {
        // Sub-adjacency restricted to this pair's edges.
        std::map<std::int32_t, std::vector<std::int32_t>> sub;
        for (auto [a, b] : edges) {
            sub[a].push_back(b);
            sub[b].push_back(a);
        }
        SymmetricColoring::TwoColoredTree tree;
        tree.color_a = key.first;
        tree.color_b = key.second;
        std::set<std::int32_t> visited;
        for (const auto& [root, _] : sub) {
            if (visited.count(root)) continue;
            // BFS from the smallest unvisited vertex of the component.
            std::queue<std::int32_t> frontier;
            frontier.push(root);
            visited.insert(root);
            tree.parent_edges.push_back({root, -1});
            std::map<std::int32_t, std::int32_t> par;
            par[root] = -1;
            while (!frontier.empty()) {
                const std::int32_t v = frontier.front();
                frontier.pop();
                for (std::int32_t u : sub[v]) {
                    if (u == par[v]) continue;
                    if (visited.count(u))
                        throw plan_infeasible_error(
                            "two-colored cycle through entry (" + std::to_string(std::max(v, u)) +
                                ", " + std::to_string(std::min(v, u)) + ")",
                            std::max(v, u), std::min(v, u));
                    visited.insert(u);
                    par[u] = v;
                    tree.parent_edges.push_back({u, v});
                    frontier.push(u);
                }
            }
        }
        forest.push_back(std::move(tree));
    }
    return forest;
}

} // namespace

namespace {

std::vector<std::int32_t> greedy_acyclic_colors(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    const std::vector<std::int32_t> order = smallest_last(adj);

    std::vector<std::int32_t> color(n, 0);
    std::vector<std::int32_t> visit_token(n, -1);
    int token = 0;

    // Connectivity probe inside the subgraph induced by colored vertices
    // whose color is cand or d, starting from `from`, looking for `goal`.
    auto connected = [&](std::int32_t from, std::int32_t goal, std::int32_t skip, std::int32_t a,
                         std::int32_t b) {
        ++token;
        std::queue<std::int32_t> frontier;
        frontier.push(from);
        visit_token[from] = token;
        while (!frontier.empty()) {
            const std::int32_t v = frontier.front();
            frontier.pop();
            for (std::int32_t u : adj[v]) {
                if (u == skip || color[u] == 0 || visit_token[u] == token) continue;
                if (color[u] != a && color[u] != b) continue;
                if (u == goal) return true;
                visit_token[u] = token;
                frontier.push(u);
            }
        }
        return false;
    };

    for (std::int32_t v : order) {
        std::vector<std::int32_t> neighbor_colors;
        for (std::int32_t w : adj[v])
            if (color[w] != 0) neighbor_colors.push_back(color[w]);
        std::sort(neighbor_colors.begin(), neighbor_colors.end());

        for (std::int32_t cand = 1;; ++cand) {
            if (std::binary_search(neighbor_colors.begin(), neighbor_colors.end(), cand)) continue;
            // Coloring v with cand closes a bicolored cycle iff two
            // d-colored neighbors are already connected in the {cand, d}
            // subgraph.
            bool ok = true;
            for (std::size_t a = 0; a + 1 < neighbor_colors.size() && ok; ++a) {
                if (neighbor_colors[a] != neighbor_colors[a + 1]) continue;
                const std::int32_t d = neighbor_colors[a];
                // Gather the d-colored neighbors once per run of duplicates.
                if (a > 0 && neighbor_colors[a - 1] == d) continue;
                std::vector<std::int32_t> same;
                for (std::int32_t w : adj[v])
                    if (color[w] == d) same.push_back(w);
                for (std::size_t x = 0; x < same.size() && ok; ++x)
                    for (std::size_t y = x + 1; y < same.size() && ok; ++y)
                        if (connected(same[x], same[y], v, cand, d)) ok = false;
            }
            if (ok) {
                color[v] = cand;
                break;
            }
        }
    }
    return color;
}

} // namespace

SymmetricColoring acyclic_coloring(const SymmetricPattern& H) {
    const Adjacency adj = H.adjacency();
    std::vector<std::int32_t> color = greedy_acyclic_colors(adj);
    // A star coloring is acyclic as well; greedy order effects occasionally
    // let the cycle-based greedy use more colors than the star greedy, so
    // take whichever is smaller. This keeps p(substitution) <= p(direct) on
    // every instance.
    std::vector<std::int32_t> star = greedy_star_colors(adj);
    if (color_count(star) < color_count(color)) color = std::move(star);

    SymmetricColoring out;
    out.kind = SymmetricMethod::substitution;
    out.color = std::move(color);
    out.p = std::max(1, color_count(out.color));
    out.forest = build_two_colored_forest(adj, out.color);
    return out;
}

namespace {

// Entry index of (i, j), i >= j, within the lower pattern, or -1.
std::int32_t entry_index(const SparsityPattern& lower, int i, int j) {
    const auto row = lower.row(i);
    const auto it = std::lower_bound(row.begin(), row.end(), static_cast<std::int32_t>(j));
    if (it == row.end() || *it != j) return -1;
    return lower.row_offsets()[i] + static_cast<std::int32_t>(it - row.begin());
}

} // namespace

HessianRecoveryPlan plan_recovery(const SymmetricPattern& H, const SymmetricColoring& coloring) {
    const int n = H.order();
    if (static_cast<int>(coloring.color.size()) != n)
        throw std::invalid_argument("coloring length does not match pattern order");
    for (std::int32_t c : coloring.color)
        if (c < 1 || c > coloring.p) throw std::invalid_argument("color outside [1, p]");

    const Adjacency adj = H.adjacency();
    const SparsityPattern& lower = H.lower();

    // Per-vertex color multiplicities over the pattern row (neighbors plus
    // the diagonal when present): cell (i, c) of W mixes exactly these.
    std::vector<std::map<std::int32_t, std::int32_t>> row_color_count(n);
    for (int i = 0; i < n; ++i) {
        for (std::int32_t u : adj[i]) ++row_color_count[i][coloring.color[u]];
        if (H.contains(i, i)) ++row_color_count[i][coloring.color[i]];
    }

    HessianRecoveryPlan plan;
    plan.coloring = coloring;
    plan.pattern = H;

    auto direct_cell = [&](int i, int j) -> std::pair<int, int> {
        // A cell resolves (i, j) directly when j is the only contribution of
        // its color in row i (or symmetrically).
        const auto& ci = row_color_count[i];
        auto it = ci.find(coloring.color[j]);
        if (it != ci.end() && it->second == 1) return {i, coloring.color[j] - 1};
        const auto& cj = row_color_count[j];
        it = cj.find(coloring.color[i]);
        if (it != cj.end() && it->second == 1) return {j, coloring.color[i] - 1};
        return {-1, -1};
    };

    if (coloring.kind == SymmetricMethod::direct) {
        for (int i = 0; i < n; ++i) {
            for (std::int32_t j : lower.row(i)) {
                const auto [r, c] = direct_cell(i, j);
                if (r < 0)
                    throw plan_infeasible_error("entry (" + std::to_string(i) + ", " +
                                                    std::to_string(j) +
                                                    ") is not directly resolvable",
                                                i, j);
                RecoveryStep step;
                step.target_row = i;
                step.target_col = j;
                step.target_entry = entry_index(lower, i, j);
                step.src_row = r;
                step.src_col = c;
                plan.schedule.push_back(std::move(step));
            }
        }
        return plan;
    }

    // Substitution: diagonals resolve directly; off-diagonal entries resolve
    // leaf-first along the two-colored trees, subtracting the child edges.
    for (int i = 0; i < n; ++i) {
        if (!H.contains(i, i)) continue;
        const auto& ci = row_color_count[i];
        const auto it = ci.find(coloring.color[i]);
        if (it == ci.end() || it->second != 1)
            throw plan_infeasible_error(
                "diagonal (" + std::to_string(i) + ", " + std::to_string(i) +
                    ") is not directly resolvable (coloring is not proper)",
                i, i);
        RecoveryStep step;
        step.target_row = i;
        step.target_col = i;
        step.target_entry = entry_index(lower, i, i);
        step.src_row = i;
        step.src_col = coloring.color[i] - 1;
        plan.schedule.push_back(std::move(step));
    }

    // Rebuild and re-validate the forests regardless of what the coloring
    // carries; a cycle surfaces as plan_infeasible_error.
    const auto forest = build_two_colored_forest(adj, coloring.color);
    for (const auto& tree : forest) {
        std::map<std::int32_t, std::int32_t> depth;
        std::map<std::int32_t, std::int32_t> parent;
        std::map<std::int32_t, std::vector<std::int32_t>> children;
        for (const auto& [v, par] : tree.parent_edges) {
            parent[v] = par;
            depth[v] = par < 0 ? 0 : depth[par] + 1;
            if (par >= 0) children[par].push_back(v);
        }
        // Deepest edges first; an edge is identified by its child endpoint.
        std::vector<std::int32_t> edge_children;
        for (const auto& [v, par] : tree.parent_edges)
            if (par >= 0) edge_children.push_back(v);
        std::sort(edge_children.begin(), edge_children.end(),
                  [&](std::int32_t a, std::int32_t b) {
                      if (depth[a] != depth[b]) return depth[a] > depth[b];
                      return a < b;
                  });
        for (std::int32_t child : edge_children) {
            const std::int32_t par = parent[child];
            RecoveryStep step;
            step.target_row = std::max(child, par);
            step.target_col = std::min(child, par);
            step.target_entry = entry_index(lower, step.target_row, step.target_col);
            if (step.target_entry < 0)
                throw plan_infeasible_error("edge (" + std::to_string(step.target_row) + ", " +
                                                std::to_string(step.target_col) +
                                                ") is missing from the pattern",
                                            step.target_row, step.target_col);
            step.src_row = child;
            step.src_col = coloring.color[par] - 1;
            for (std::int32_t grandchild : children[child]) {
                const std::int32_t e = entry_index(lower, std::max(child, grandchild),
                                                   std::min(child, grandchild));
                step.subtract.push_back(e);
            }
            plan.schedule.push_back(std::move(step));
        }
    }
    return plan;
}

int HessianRecoveryPlan::max_chain_length() const {
    std::vector<int> length(pattern.lower_nnz(), 0);
    int best = 0;
    for (const auto& step : schedule) {
        int chain = 0;
        for (std::int32_t e : step.subtract) chain = std::max(chain, length[e] + 1);
        length[step.target_entry] = chain;
        best = std::max(best, chain);
    }
    return best;
}

SymmetricValues recover_hessian(const HessianRecoveryPlan& plan, const CompressedMatrix& W) {
    const int n = plan.pattern.order();
    if (W.rows() != n || W.cols() != plan.coloring.p)
        throw std::invalid_argument("compressed matrix shape does not match the plan");

    SymmetricValues out;
    out.pattern = plan.pattern;
    out.values.assign(plan.pattern.lower_nnz(), 0.0);
    for (const auto& step : plan.schedule) {
        double v = W(step.src_row, step.src_col);
        for (std::int32_t e : step.subtract) v -= out.values[e];
        out.values[step.target_entry] = v;
    }
    return out;
}

double SymmetricValues::at(int i, int j) const {
    const int r = std::max(i, j);
    const int c = std::min(i, j);
    const auto row = pattern.lower().row(r);
    const auto it = std::lower_bound(row.begin(), row.end(), static_cast<std::int32_t>(c));
    if (it == row.end() || *it != c) return 0.0;
    return values[pattern.lower().row_offsets()[r] + (it - row.begin())];
}

Matrix SymmetricValues::to_dense() const {
    const int n = pattern.order();
    Matrix dense(n, n);
    for (int i = 0; i < n; ++i) {
        const auto row = pattern.lower().row(i);
        const std::int32_t base = pattern.lower().row_offsets()[i];
        for (std::size_t k = 0; k < row.size(); ++k) {
            dense(i, row[k]) = values[base + k];
            dense(row[k], i) = values[base + k];
        }
    }
    return dense;
}

bool verify_proper_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color) {
    const Adjacency adj = H.adjacency();
    for (int v = 0; v < H.order(); ++v) {
        if (color[v] < 1) return false;
        for (std::int32_t u : adj[v])
            if (color[u] == color[v]) return false;
    }
    return true;
}

bool verify_star_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color) {
    if (!verify_proper_coloring(H, color)) return false;
    const Adjacency adj = H.adjacency();
    // Every path on four distinct vertices must use at least three colors.
    for (int b = 0; b < H.order(); ++b) {
        for (std::int32_t c : adj[b]) {
            for (std::int32_t a : adj[b]) {
                if (a == c) continue;
                for (std::int32_t d : adj[c]) {
                    if (d == b || d == a) continue;
                    std::set<std::int32_t> used{color[a], color[b], color[c], color[d]};
                    if (used.size() < 3) return false;
                }
            }
        }
    }
    return true;
}

bool verify_acyclic_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color) {
    if (!verify_proper_coloring(H, color)) return false;
    const Adjacency adj = H.adjacency();
    const int n = H.order();
    // Union-find per color pair: a repeated union within one two-colored
    // edge set closes a bicolored cycle.
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::int32_t>> roots;
    auto find = [](std::vector<std::int32_t>& r, std::int32_t x) {
        while (r[x] != x) {
            r[x] = r[r[x]];
            x = r[x];
        }
        return x;
    };
    for (int v = 0; v < n; ++v) {
        for (std::int32_t u : adj[v]) {
            if (u <= v) continue;
            const auto key = std::minmax(color[v], color[u]);
            auto& r = roots[{key.first, key.second}];
            if (r.empty()) {
                r.resize(n);
                std::iota(r.begin(), r.end(), 0);
            }
            const std::int32_t rv = find(r, v);
            const std::int32_t ru = find(r, u);
            if (rv == ru) return false;
            r[rv] = ru;
        }
    }
    return true;
}

} // namespace psad
