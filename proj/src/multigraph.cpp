#include "imlab/multigraph.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace imlab {

LabeledMultigraph partition_to_graph(const Partition& p) {
  if (!p.is_diverse()) throw DomainError("partition_to_graph: partition is not diverse");
  LabeledMultigraph g;
  g.vertex_count = p.k();
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(p.n()) + 1);
  for (int v = 0; v < p.k(); ++v)
    for (int id : p.blocks()[static_cast<std::size_t>(v)]) holders[static_cast<std::size_t>(id)].push_back(v);
  for (int id = 1; id <= p.n(); ++id) {
    const auto& h = holders[static_cast<std::size_t>(id)];
    g.edges.push_back({h[0], h[1], id});
  }
  return g;
}

Partition graph_to_partition(const LabeledMultigraph& g) {
  const int n = g.label_count();
  if (n == 0) throw DomainError("graph_to_partition: graph has no edges");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  std::vector<Block> blocks(static_cast<std::size_t>(std::max(g.vertex_count, 0)));
  for (const auto& e : g.edges) {
    if (e.u == e.v) throw DomainError("graph_to_partition: loop on vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= g.vertex_count || e.v >= g.vertex_count)
      throw DomainError("graph_to_partition: edge endpoint out of range");
    if (e.label < 1 || e.label > n || seen[static_cast<std::size_t>(e.label)])
      throw DomainError("graph_to_partition: labels must be 1.." + std::to_string(n) + " exactly once");
    seen[static_cast<std::size_t>(e.label)] = true;
    blocks[static_cast<std::size_t>(e.u)].push_back(e.label);
    blocks[static_cast<std::size_t>(e.v)].push_back(e.label);
  }
  for (const auto& b : blocks)
    if (b.empty()) throw DomainError("graph_to_partition: isolated vertex");
  return Partition::from_blocks(std::move(blocks), n);
}

std::string export_dot(const LabeledMultigraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (int v = 0; v < g.vertex_count; ++v) out << "  v" << v << ";\n";
  for (const auto& e : g.edges) out << "  v" << e.u << " -- v" << e.v << " [label=\"" << e.label << "\"];\n";
  out << "}\n";
  return out.str();
}

} // namespace imlab
