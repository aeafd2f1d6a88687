#pragma once

#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/relational.hpp"

namespace gfodd {

struct Reduction {
  Gfodd diagram;
  /// Edges used by a winning block on some focus state.
  EdgeSet marked;
  /// Unmarked edges of the input that did not already lead to leaf 0.
  std::vector<EdgeId> removed;
};

/// Model-checking reduction: evaluates f on every focus state, keeps the
/// edges of the winning blocks and sends every other edge to leaf 0. Exact on
/// the focus states, a lower bound elsewhere. Throws ArgumentError when
/// `focus` is empty.
Reduction reduce_with_report(const Gfodd& f, const std::vector<Interpretation>& focus);
Gfodd reduce_on(const Gfodd& f, const std::vector<Interpretation>& focus);

}  // namespace gfodd
