#include "bowenlab/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace bowenlab {

DirectedMultigraph build_graph(const std::vector<std::string>& vertices,
                               const std::vector<EdgeSpec>& edge_list,
                               std::optional<std::string> family_tag) {
  if (vertices.empty())
    throw Error(ErrorCode::UnknownVertex, "vertex set is empty");
  std::map<std::string, int> vindex;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    if (!vindex.emplace(vertices[i], i).second)
      throw Error(ErrorCode::UnknownVertex,
                  "duplicate vertex id '" + vertices[i] + "'");
  }
  DirectedMultigraph g;
  g.vertices = vertices;
  g.family_tag = std::move(family_tag);
  std::set<std::string> seen;
  for (const auto& spec : edge_list) {
    if (!seen.insert(spec.id).second)
      throw Error(ErrorCode::DuplicateEdgeId, "edge id '" + spec.id + "'");
    auto fi = vindex.find(spec.from);
    auto ti = vindex.find(spec.to);
    if (fi == vindex.end())
      throw Error(ErrorCode::UnknownVertex,
                  "edge '" + spec.id + "' starts at undeclared '" + spec.from + "'");
    if (ti == vindex.end())
      throw Error(ErrorCode::UnknownVertex,
                  "edge '" + spec.id + "' ends at undeclared '" + spec.to + "'");
    g.edges.push_back({spec.id, fi->second, ti->second});
  }
  return g;
}

DirectedMultigraph full_shift_graph(int n_symbols) {
  DirectedMultigraph g;
  g.vertices = {"v"};
  g.edges.reserve(n_symbols);
  for (int e = 1; e <= n_symbols; ++e)
    g.edges.push_back({std::to_string(e), 0, 0});
  g.family_tag = "full_shift";
  return g;
}

Eigen::MatrixXd incidence_matrix(const DirectedMultigraph& g) {
  const int n = g.num_edges();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < n; ++e)
    for (int ep = 0; ep < n; ++ep)
      if (g.incident(e, ep)) A(e, ep) = 1.0;
  return A;
}

IrreducibilityReport is_finitely_irreducible(const DirectedMultigraph& g) {
  const int n = g.num_edges();
  IrreducibilityReport rep;
  if (n == 0) return rep;

  // BFS over vertices: shortest edge-word from vertex u to vertex v.
  // parent tracking gives a lexicographically-first shortest path since
  // edges are scanned in index order.
  const int nv = g.num_vertices();
  // paths[u][v]: edge sequence of a shortest path u -> v (empty if u==v).
  std::vector<std::vector<std::optional<std::vector<int>>>> paths(
      nv, std::vector<std::optional<std::vector<int>>>(nv));
  for (int u = 0; u < nv; ++u) {
    paths[u][u] = std::vector<int>{};
    std::queue<int> q;
    q.push(u);
    while (!q.empty()) {
      int w = q.front();
      q.pop();
      for (int e = 0; e < n; ++e) {
        if (g.edges[e].from != w) continue;
        int v = g.edges[e].to;
        if (!paths[u][v]) {
          auto p = *paths[u][w];
          p.push_back(e);
          paths[u][v] = std::move(p);
          q.push(v);
        }
      }
    }
  }

  rep.irreducible = true;
  std::set<std::vector<int>> witness_set;
  for (int e = 0; e < n; ++e) {
    for (int ep = 0; ep < n; ++ep) {
      const auto& p = paths[g.edges[e].to][g.edges[ep].from];
      if (!p) {
        rep.irreducible = false;
        rep.witnesses.clear();
        return rep;
      }
      if (!p->empty()) witness_set.insert(*p);
    }
  }
  for (const auto& w : witness_set) rep.witnesses.push_back({w});
  return rep;
}

std::vector<Word> enumerate_cylinders(const DirectedMultigraph& g, int n) {
  std::vector<Word> out;
  if (n < 1) return out;
  std::vector<int> cur;
  // depth-first in edge-index order yields lexicographic output
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      out.push_back({cur});
      return;
    }
    for (int e = 0; e < g.num_edges(); ++e) {
      if (!cur.empty() && !g.incident(cur.back(), e)) continue;
      cur.push_back(e);
      self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace bowenlab
