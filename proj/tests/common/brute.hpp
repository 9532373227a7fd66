#pragma once
// Brute-force comparators shared by the unit and acceptance tests. Plain
// containers only; nothing from src/.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Chains as (height, digest) lists; consistent iff every height both cover
/// carries the same digest and the shorter-tipped one ends inside the other.
using ChainSketch = std::vector<std::pair<std::uint64_t, std::string>>;

inline bool consistent(const ChainSketch& a, const ChainSketch& b)
{
    const ChainSketch& hi = a.back().first >= b.back().first ? a : b;
    const ChainSketch& lo = &hi == &a ? b : a;
    std::map<std::uint64_t, std::string> at;
    for (const auto& [h, d] : hi)
        at[h] = d;
    if (!at.contains(lo.back().first))
        return false;
    for (const auto& [h, d] : lo)
        if (at.contains(h) && at[h] != d)
            return false;
    return true;
}

/// Hop distances from `src` by breadth-first search; unreachable nodes are absent.
inline std::map<int, int> bfs(const std::vector<std::pair<int, int>>& edges, int src)
{
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<int, int> dist{{src, 0}};
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!dist.contains(v)) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

inline int diameter(int n, const std::vector<std::pair<int, int>>& edges)
{
    int d = 0;
    for (int s = 0; s < n; ++s)
        for (auto [_, x] : bfs(edges, s))
            d = std::max(d, x);
    return d;
}

} // namespace oracle
