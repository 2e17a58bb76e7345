#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "pmw/errors.hpp"
#include "pmw/rational.hpp"

namespace pmw {

struct Assignment {
    Rat total = Rat(0);
    std::vector<int> row_to_col;
};

// Exact min-cost perfect assignment on a square rational matrix
// (Kuhn-Munkres with rational potentials).
inline Assignment min_cost_assignment(const std::vector<std::vector<Rat>>& cost) {
    const int n = static_cast<int>(cost.size());
    Assignment out;
    out.row_to_col.assign(n, -1);
    if (n == 0) return out;

    std::vector<Rat> u(n + 1, Rat(0)), v(n + 1, Rat(0));
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<std::optional<Rat>> minv(n + 1);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            std::optional<Rat> delta;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                Rat cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (!minv[j] || cur < *minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (!delta || *minv[j] < *delta) {
                    delta = *minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += *delta;
                    v[j] -= *delta;
                } else if (minv[j]) {
                    *minv[j] -= *delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    for (int j = 1; j <= n; ++j)
        if (p[j]) out.row_to_col[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) out.total += cost[i][out.row_to_col[i]];
    return out;
}

// Maximum bipartite matching (Hopcroft-Karp) on an explicit adjacency list.
class HopcroftKarp {
  public:
    HopcroftKarp(int nleft, int nright) : nl_(nleft), nr_(nright), adj_(nleft) {}

    void add_edge(int l, int r) { adj_[l].push_back(r); }

    int max_matching() {
        match_l_.assign(nl_, -1);
        match_r_.assign(nr_, -1);
        int matched = 0;
        while (bfs()) {
            for (int l = 0; l < nl_; ++l)
                if (match_l_[l] < 0 && dfs(l)) ++matched;
        }
        return matched;
    }

    const std::vector<int>& left_match() const { return match_l_; }

  private:
    static constexpr int kInf = 1 << 30;

    bool bfs() {
        std::queue<int> q;
        dist_.assign(nl_, kInf);
        for (int l = 0; l < nl_; ++l)
            if (match_l_[l] < 0) {
                dist_[l] = 0;
                q.push(l);
            }
        bool found = false;
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj_[l]) {
                int l2 = match_r_[r];
                if (l2 < 0) {
                    found = true;
                } else if (dist_[l2] == kInf) {
                    dist_[l2] = dist_[l] + 1;
                    q.push(l2);
                }
            }
        }
        return found;
    }

    bool dfs(int l) {
        for (int r : adj_[l]) {
            int l2 = match_r_[r];
            if (l2 < 0 || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = kInf;
        return false;
    }

    int nl_, nr_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
};

// Minimax perfect assignment: smallest threshold t such that the graph of
// cells with cost <= t has a perfect matching. Cells may be forbidden.
inline Assignment bottleneck_assignment(const std::vector<std::vector<std::optional<Rat>>>& cost) {
    const int n = static_cast<int>(cost.size());
    Assignment out;
    out.row_to_col.assign(n, -1);
    if (n == 0) return out;

    std::vector<Rat> values;
    for (const auto& row : cost)
        for (const auto& c : row)
            if (c) values.push_back(*c);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    auto feasible = [&](const Rat& t, std::vector<int>* matching) {
        HopcroftKarp hk(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cost[i][j] && *cost[i][j] <= t) hk.add_edge(i, j);
        if (hk.max_matching() != n) return false;
        if (matching) *matching = hk.left_match();
        return true;
    };

    int lo = 0, hi = static_cast<int>(values.size()) - 1;
    if (hi < 0 || !feasible(values[hi], nullptr))
        throw ValidationError("no perfect matching exists in the bottleneck graph");
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (feasible(values[mid], nullptr))
            hi = mid;
        else
            lo = mid + 1;
    }
    feasible(values[lo], &out.row_to_col);
    out.total = values[lo];
    return out;
}

}  // namespace pmw
