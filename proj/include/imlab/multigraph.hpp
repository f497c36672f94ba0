#pragma once

#include "imlab/partition.hpp"

#include <string>
#include <vector>

namespace imlab {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  int label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Loop-free multigraph dual to a diverse partition: one vertex per block,
/// one edge per slot id joining the two blocks that contain it.
struct LabeledMultigraph {
  int vertex_count = 0;
  std::vector<Edge> edges;  // sorted by label

  int label_count() const { return static_cast<int>(edges.size()); }

  friend bool operator==(const LabeledMultigraph&, const LabeledMultigraph&) = default;
};

/// Vertices follow the canonical block order. Throws DomainError when `p` is
/// not diverse.
LabeledMultigraph partition_to_graph(const Partition& p);

/// Throws DomainError on loops, isolated vertices, out-of-range endpoints,
/// or labels that are not exactly 1..n once each.
Partition graph_to_partition(const LabeledMultigraph& g);

/// Undirected DOT text, one node or edge statement per line.
std::string export_dot(const LabeledMultigraph& g, const std::string& name = "partition");

} // namespace imlab
