#ifndef CONTRACTS_GRAPH_HPP
#define CONTRACTS_GRAPH_HPP

#include <utility>
#include <vector>

namespace contracts {

/// Simple undirected graph with 1-indexed vertices (matching the file
/// format).  `adjacency()` returns sorted neighbor lists.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  /// Sorted neighbor lists, index 0 unused.  Throws InputError on
  /// out-of-range endpoints, self-loops or duplicate edges.
  std::vector<std::vector<int>> adjacency() const;

  int max_degree() const;
};

}  // namespace contracts

#endif  // CONTRACTS_GRAPH_HPP
