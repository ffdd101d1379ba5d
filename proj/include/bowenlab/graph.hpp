#ifndef BOWENLAB_GRAPH_HPP
#define BOWENLAB_GRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bowenlab/errors.hpp"

namespace bowenlab {

// Directed multigraph on a finite vertex set with a finite (possibly
// truncated-countable) edge set.  Edges are addressed by dense index
// 0..num_edges-1; user-facing ids are kept alongside.
struct Edge {
  std::string id;
  int from = 0;  // index into vertices: i(e)
  int to = 0;    // t(e)
};

struct DirectedMultigraph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::optional<std::string> family_tag;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  // Incidence A(e,e') = 1 iff t(e) = i(e').
  bool incident(int e, int ep) const {
    return edges[e].to == edges[ep].from;
  }
};

struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
};

DirectedMultigraph build_graph(const std::vector<std::string>& vertices,
                               const std::vector<EdgeSpec>& edge_list,
                               std::optional<std::string> family_tag = {});

// Full shift on n symbols: single vertex, edges "1".."n".
DirectedMultigraph full_shift_graph(int n_symbols);

struct Word {
  std::vector<int> symbols;  // edge indices
  int length() const { return static_cast<int>(symbols.size()); }
};

struct IrreducibilityReport {
  bool irreducible = false;
  // Witness connecting words per ordered edge pair that needs one; for
  // directly adjacent pairs the empty word suffices and is not listed.
  std::vector<Word> witnesses;
};

IrreducibilityReport is_finitely_irreducible(const DirectedMultigraph& g);

// All admissible words of length n, lexicographic in edge index.
std::vector<Word> enumerate_cylinders(const DirectedMultigraph& g, int n);

// Edge adjacency matrix A as a dense 0/1 matrix.
Eigen::MatrixXd incidence_matrix(const DirectedMultigraph& g);

}  // namespace bowenlab

#endif
