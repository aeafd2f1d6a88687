#include "gfodd/reduce.hpp"

#include <algorithm>

#include "gfodd/detail/builder.hpp"
#include "gfodd/error.hpp"
#include "gfodd/eval.hpp"

namespace gfodd {

Reduction reduce_with_report(const Gfodd& f, const std::vector<Interpretation>& focus) {
  if (focus.empty()) throw ArgumentError("reduction needs at least one focus state");
  Reduction out;
  VeEvaluator ev(f);
  for (const auto& s : focus) out.marked.insert_all(ev.evaluate(s).edges);

  const auto& nodes = f.nodes();
  auto is_zero = [&](NodeId n) { return nodes[n].is_leaf && nodes[n].value == 0; };
  DiagramBuilder b(f.order_variables());
  auto zero = b.leaf(0);
  std::vector<DiagramBuilder::Ref> mapped(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    if (n.is_leaf) {
      mapped[i] = b.leaf(n.value);
      continue;
    }
    auto id = static_cast<NodeId>(i);
    auto keep = [&](bool branch, NodeId child) {
      EdgeId e{id, branch};
      if (out.marked.contains(e)) return mapped[child];
      if (!is_zero(child)) out.removed.push_back(e);
      return zero;
    };
    auto hi = keep(true, n.true_child);
    auto lo = keep(false, n.false_child);
    mapped[i] = b.ite_atom(n.atom, hi, lo);
  }
  std::sort(out.removed.begin(), out.removed.end());
  out.diagram = b.finish(f.free_vars(), f.prefix(), mapped[0], true);
  return out;
}

Gfodd reduce_on(const Gfodd& f, const std::vector<Interpretation>& focus) {
  return reduce_with_report(f, focus).diagram;
}

}  // namespace gfodd
