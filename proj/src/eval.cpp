#include "gfodd/eval.hpp"

#include <limits>
#include <algorithm>

#include "gfodd/error.hpp"

namespace gfodd {

namespace {

struct CompiledAtom {
  int pred = -1;               // -1 for equality
  std::vector<int> var_pos;    // prefix position per argument, -1 for constants
  std::vector<int> const_obj;  // object index per constant argument
};

std::vector<CompiledAtom> compile_atoms(const Gfodd& f, const Universe& u) {
  std::vector<CompiledAtom> out(f.size());
  const auto& vocab = u.vocabulary();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Node& n = f.node(static_cast<NodeId>(i));
    if (n.is_leaf) continue;
    auto& c = out[i];
    if (!n.atom.is_equality()) {
      auto p = vocab.find_predicate(n.atom.predicate);
      if (!p) throw VocabularyError("undeclared predicate '" + n.atom.predicate + "'");
      if (vocab.predicates()[*p].arity() != n.atom.args.size()) {
        throw VocabularyError("arity mismatch in " + to_string(n.atom));
      }
      c.pred = static_cast<int>(*p);
    }
    for (const auto& t : n.atom.args) {
      if (t.is_variable()) {
        int k = f.prefix_index(t.name);
        if (k < 0) throw ArgumentError("diagram has free variable '" + t.name + "'");
        c.var_pos.push_back(k);
        c.const_obj.push_back(-1);
      } else {
        c.var_pos.push_back(-1);
        c.const_obj.push_back(u.object_index(t.name));
      }
    }
  }
  return out;
}

std::vector<const std::vector<int>*> domains_of(const Gfodd& f, const Universe& u) {
  if (!f.free_vars().empty()) throw ArgumentError("cannot evaluate a diagram with free variables");
  std::vector<const std::vector<int>*> out;
  for (const auto& e : f.prefix()) {
    const auto& d = u.objects_of(e.var.sort);
    if (d.empty()) throw EmptyDomainError("sort '" + e.var.sort + "' of variable '" + e.var.name + "' has no objects");
    out.push_back(&d);
  }
  return out;
}

std::size_t leading_max(const Prefix& p) {
  std::size_t k = 0;
  while (k < p.size() && p[k].agg == Aggregator::Max) ++k;
  return k;
}

// Evaluates an atom given object indexes for prefix positions.
bool holds_with(const CompiledAtom& c, const Interpretation& I, const int* objects, int* scratch) {
  std::size_t n = c.var_pos.size();
  for (std::size_t k = 0; k < n; ++k) scratch[k] = c.var_pos[k] >= 0 ? objects[c.var_pos[k]] : c.const_obj[k];
  if (c.pred < 0) return scratch[0] == scratch[1];
  return I.holds(static_cast<std::size_t>(c.pred), std::span<const int>(scratch, n));
}

Substitution winner_binding(const Gfodd& f, const std::vector<const std::vector<int>*>& dom,
                            const std::vector<int>& positions, std::size_t leading, const Universe& u) {
  Substitution s;
  for (std::size_t k = 0; k < leading; ++k) {
    int p = positions[k] < 0 ? 0 : positions[k];
    s.bind(f.prefix()[k].var, u.objects()[(*dom[k])[p]].name);
  }
  return s;
}

// ---------------------------------------------------------------------------

struct BruteEntry {
  Rational value;
  EdgeSet edges;
  std::vector<int> winner;
};

class Brute {
 public:
  Brute(const Gfodd& f, const Interpretation& I)
      : f_(f), I_(I), atoms_(compile_atoms(f, I.universe())), dom_(domains_of(f, I.universe())),
        leading_(leading_max(f.prefix())), pos_(f.prefix().size(), 0), obj_(f.prefix().size(), 0), scratch_(16) {
    for (const auto& n : f.nodes()) {
      if (!n.is_leaf && n.atom.args.size() > scratch_.size()) scratch_.resize(n.atom.args.size());
    }
  }

  EvalResult run() {
    BruteEntry e = rec(0);
    EvalResult r;
    r.value = e.value;
    r.edges = std::move(e.edges);
    r.winner = winner_binding(f_, dom_, e.winner, leading_, I_.universe());
    r.work = count_;
    return r;
  }

 private:
  BruteEntry rec(std::size_t k) {
    if (k == pos_.size()) return walk();
    const auto& d = *dom_[k];
    bool is_max = f_.prefix()[k].agg == Aggregator::Max;
    BruteEntry acc;
    bool first = true;
    for (std::size_t p = 0; p < d.size(); ++p) {
      pos_[k] = static_cast<int>(p);
      obj_[k] = d[p];
      BruteEntry e = rec(k + 1);
      if (!is_max) {
        acc.value += e.value;
        acc.edges.insert_all(e.edges);
        if (first) acc.winner = std::move(e.winner);
      } else if (first || e.value > acc.value || (e.value == acc.value && e.edges < acc.edges)) {
        acc = std::move(e);
        if (k < leading_) acc.winner[k] = static_cast<int>(p);
      }
      first = false;
    }
    if (!is_max) acc.value /= static_cast<long>(d.size());
    return acc;
  }

  BruteEntry walk() {
    ++count_;
    BruteEntry e;
    e.winner.assign(leading_, -1);
    NodeId id = f_.root();
    while (!f_.node(id).is_leaf) {
      const Node& n = f_.node(id);
      bool b = holds_with(atoms_[id], I_, obj_.data(), scratch_.data());
      e.edges.insert({id, b});
      id = b ? n.true_child : n.false_child;
    }
    e.value = f_.node(id).value;
    return e;
  }

  const Gfodd& f_;
  const Interpretation& I_;
  std::vector<CompiledAtom> atoms_;
  std::vector<const std::vector<int>*> dom_;
  std::size_t leading_;
  std::vector<int> pos_;
  std::vector<int> obj_;
  std::vector<int> scratch_;
  std::uint64_t count_ = 0;
};

}  // namespace

EvalResult eval_brute(const Gfodd& f, const Interpretation& I) { return Brute(f, I).run(); }

std::uint64_t brute_substitution_count(const Gfodd& f, const Interpretation& I) {
  std::uint64_t n = 1;
  for (const auto* d : domains_of(f, I.universe())) {
    std::uint64_t k = d->size();
    if (k != 0 && n > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    n *= k;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Tables

std::size_t EvalTable::index_of(std::span<const int> positions) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < columns.size(); ++k) idx = idx * extent[k] + static_cast<std::size_t>(positions[k]);
  return idx;
}

bool EvalTable::has_column(int var) const { return std::find(columns.begin(), columns.end(), var) != columns.end(); }

namespace {

std::size_t table_size(const std::vector<std::size_t>& extent) {
  std::size_t n = 1;
  for (auto e : extent) n *= e;
  return n;
}

// Strides of `sub` columns laid out inside `full` columns (0 when absent).
std::vector<std::size_t> strides_within(const EvalTable& sub, const std::vector<int>& full) {
  std::vector<std::size_t> sub_stride(sub.columns.size(), 1);
  for (std::size_t k = sub.columns.size(); k-- > 1;) sub_stride[k - 1] = sub_stride[k] * sub.extent[k];
  std::vector<std::size_t> out(full.size(), 0);
  for (std::size_t k = 0; k < full.size(); ++k) {
    auto it = std::find(sub.columns.begin(), sub.columns.end(), full[k]);
    if (it != sub.columns.end()) out[k] = sub_stride[static_cast<std::size_t>(it - sub.columns.begin())];
  }
  return out;
}

// Visits every position tuple of `extent` (first slowest), tracking the
// flat indexes into each projected table.
template <typename Fn>
void for_each_row(const std::vector<std::size_t>& extent, const std::vector<std::vector<std::size_t>>& strides, Fn&& fn) {
  std::size_t total = table_size(extent);
  std::vector<int> pos(extent.size(), 0);
  std::vector<std::size_t> idx(strides.size(), 0);
  for (std::size_t row = 0; row < total; ++row) {
    fn(row, pos, idx);
    for (std::size_t k = extent.size(); k-- > 0;) {
      if (static_cast<std::size_t>(++pos[k]) < extent[k]) {
        for (std::size_t t = 0; t < strides.size(); ++t) idx[t] += strides[t][k];
        break;
      }
      for (std::size_t t = 0; t < strides.size(); ++t) idx[t] -= strides[t][k] * (extent[k] - 1);
      pos[k] = 0;
    }
  }
}

// Is a (with var at position pa) a better MAX row than b (at pb)?
bool better(const EvalPool& pool, const EvalEntry& a, int pa, const EvalEntry& b, int pb, int var) {
  if (a.value != b.value) return pool.value_of(a.value) > pool.value_of(b.value);
  if (a.edges != b.edges) return pool.edges_of(a.edges) < pool.edges_of(b.edges);
  const auto& wa = pool.winner_of(a.winner);
  const auto& wb = pool.winner_of(b.winner);
  for (std::size_t i = 0; i < wa.size(); ++i) {
    int x = static_cast<int>(i) == var ? pa : wa[i];
    int y = static_cast<int>(i) == var ? pb : wb[i];
    if (x != y) return x < y;
  }
  return false;
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

template <typename T>
std::size_t hash_range(const T& items) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto x : items) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
  return h;
}

}  // namespace

std::size_t EvalPool::Hash::operator()(const Rational& r) const noexcept {
  auto h = static_cast<std::size_t>(mpz_getlimbn(r.get_num_mpz_t(), 0));
  h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::size_t>(mpz_getlimbn(r.get_den_mpz_t(), 0));
  return h ^ static_cast<std::size_t>(mpz_size(r.get_num_mpz_t()) * 31 + mpz_sgn(r.get_num_mpz_t()));
}

std::size_t EvalPool::Hash::operator()(const EdgeSet& e) const noexcept { return hash_range(e.codes()); }

std::size_t EvalPool::Hash::operator()(const std::vector<int>& w) const noexcept { return hash_range(w); }

EvalPool::EvalPool() {
  value(Rational(0));
  edges(EdgeSet{});
  winner({});
}

EvalPool::Id EvalPool::value(const Rational& raw) {
  Rational v = raw;
  v.canonicalize();
  auto [it, fresh] = value_ids_.try_emplace(v, static_cast<Id>(values_.size()));
  if (fresh) values_.push_back(v);
  return it->second;
}

EvalPool::Id EvalPool::edges(const EdgeSet& e) {
  auto [it, fresh] = edge_ids_.try_emplace(e, static_cast<Id>(edge_sets_.size()));
  if (fresh) edge_sets_.push_back(e);
  return it->second;
}

EvalPool::Id EvalPool::winner(const std::vector<int>& w) {
  auto [it, fresh] = winner_ids_.try_emplace(w, static_cast<Id>(winners_.size()));
  if (fresh) winners_.push_back(w);
  return it->second;
}

EvalPool::Id EvalPool::add_edge(Id id, EdgeId e) {
  auto key = pair_key(id, e.code());
  if (auto it = add_edge_memo_.find(key); it != add_edge_memo_.end()) return it->second;
  EdgeSet s = edge_sets_[id];
  s.insert(e);
  Id out = edges(s);
  add_edge_memo_.emplace(key, out);
  return out;
}

EvalPool::Id EvalPool::unite_edges(Id a, Id b) {
  if (a == b) return a;
  if (a > b) std::swap(a, b);
  auto key = pair_key(a, b);
  if (auto it = unite_memo_.find(key); it != unite_memo_.end()) return it->second;
  EdgeSet s = edge_sets_[a];
  s.insert_all(edge_sets_[b]);
  Id out = edges(s);
  unite_memo_.emplace(key, out);
  return out;
}

EvalPool::Id EvalPool::set_winner(Id w, int var, int pos) {
  const auto& tuple = winners_[w];
  if (var < 0 || static_cast<std::size_t>(var) >= tuple.size() || tuple[static_cast<std::size_t>(var)] == pos) return w;
  auto key = pair_key(w, static_cast<std::uint32_t>(var) << 20 | static_cast<std::uint32_t>(pos));
  if (auto it = winner_memo_.find(key); it != winner_memo_.end()) return it->second;
  std::vector<int> t = tuple;
  t[static_cast<std::size_t>(var)] = pos;
  Id out = winner(t);
  winner_memo_.emplace(key, out);
  return out;
}

EvalTable aggregate_out(EvalPool& pool, const EvalTable& t, int var, std::size_t domain, Aggregator agg) {
  auto it = std::find(t.columns.begin(), t.columns.end(), var);
  if (it == t.columns.end()) {
    // Implicit: averaging or maximizing a constant block changes nothing;
    // a MAX winner takes the first object.
    EvalTable out = t;
    if (agg == Aggregator::Max) {
      for (auto& e : out.entries) {
        if (e.present) e.winner = pool.set_winner(e.winner, var, 0);
      }
    }
    return out;
  }
  std::size_t k = static_cast<std::size_t>(it - t.columns.begin());
  if (t.extent[k] != domain) throw InternalError("domain size mismatch while aggregating");
  EvalTable out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i == k) continue;
    out.columns.push_back(t.columns[i]);
    out.extent.push_back(t.extent[i]);
  }
  std::size_t inner = 1;
  for (std::size_t i = k + 1; i < t.extent.size(); ++i) inner *= t.extent[i];
  std::size_t outer = table_size(out.extent) / inner;
  out.entries.resize(outer * inner);
  Rational sum;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      auto& dst = out.entries[o * inner + in];
      std::size_t base = o * inner * domain + in;
      if (agg == Aggregator::Avg) {
        std::size_t present = 0;
        bool uniform = true;
        for (std::size_t p = 0; p < domain; ++p) {
          const auto& src = t.entries[base + p * inner];
          if (!src.present) continue;
          if (present == 0) {
            dst = src;
          } else {
            uniform = uniform && src.value == dst.value;
            dst.edges = pool.unite_edges(dst.edges, src.edges);
          }
          ++present;
        }
        if (present == 0) continue;
        if (present != domain) throw InternalError("incomplete group under average aggregation");
        if (!uniform) {
          sum = 0;
          for (std::size_t p = 0; p < domain; ++p) sum += pool.value_of(t.entries[base + p * inner].value);
          sum /= static_cast<long>(domain);
          dst.value = pool.value(sum);
        }
      } else {
        int best = -1;
        for (std::size_t p = 0; p < domain; ++p) {
          const auto& src = t.entries[base + p * inner];
          if (!src.present) continue;
          if (best < 0 ||
              better(pool, src, static_cast<int>(p), t.entries[base + static_cast<std::size_t>(best) * inner], best, var)) {
            best = static_cast<int>(p);
          }
        }
        if (best < 0) continue;
        dst = t.entries[base + static_cast<std::size_t>(best) * inner];
        dst.winner = pool.set_winner(dst.winner, var, best);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

// Variables aggregated once `visible` are the only ones still needed:
// everything above `limit`, plus (once the AVG variable y is gone) every
// MAX variable outside `visible`.
std::vector<int> aggregated_set(const std::vector<int>& visible, int limit, int y, int nvars) {
  std::vector<int> out;
  bool y_gone = y >= 0 && !contains(visible, y);
  for (int v = 0; v < nvars; ++v) {
    if (v > limit || (y_gone && !contains(visible, v))) out.push_back(v);
  }
  return out;
}

}  // namespace

VeEvaluator::VeEvaluator(const Gfodd& f) : f_(f) {
  const auto& p = f_.prefix();
  leading_ = leading_max(p);
  supported_ = f_.free_vars().empty() && (p.empty() || (leading_ + 1 == p.size() && p.back().agg == Aggregator::Avg));
  if (!supported_) return;
  int nvars = static_cast<int>(p.size());
  int y = p.empty() ? -1 : nvars - 1;
  std::size_t n = f_.size();
  stats_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = f_.node(static_cast<NodeId>(i));
    if (node.is_leaf) continue;
    auto& s = stats_[i];
    for (const auto& t : node.atom.args) {
      if (t.is_variable()) s.self.push_back(f_.prefix_index(t.name));
    }
    std::sort(s.self.begin(), s.self.end());
    s.self.erase(std::unique(s.self.begin(), s.self.end()), s.self.end());
  }
  // Node ids are topological: parents first.
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = f_.node(static_cast<NodeId>(i));
    if (node.is_leaf) continue;
    auto down = sorted_union(stats_[i].above, stats_[i].self);
    for (NodeId c : {node.true_child, node.false_child}) {
      if (c <= i) throw InternalError("diagram nodes are not topologically numbered");
      stats_[c].above = sorted_union(stats_[c].above, down);
    }
  }
  agg_branch_.resize(n);
  agg_node_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = stats_[i];
    s.maxabove = s.above.empty() ? -1 : s.above.back();
    s.maxself = s.self.empty() ? -1 : s.self.back();
    s.maxvar = std::max(s.maxabove, s.maxself);
    agg_node_[i] = aggregated_set(s.above, s.maxabove, y, nvars);
    if (!f_.node(static_cast<NodeId>(i)).is_leaf) {
      agg_branch_[i] = aggregated_set(sorted_union(s.above, s.self), s.maxvar, y, nvars);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = f_.node(static_cast<NodeId>(i));
    if (node.is_leaf) continue;
    for (NodeId c : {node.true_child, node.false_child}) {
      if (!sorted_difference(agg_node_[c], agg_branch_[i]).empty()) {
        throw InternalError("inconsistent aggregation schedule");
      }
    }
  }
}

struct VeRun {
  const VeEvaluator& ev;
  const Interpretation& I;
  std::vector<CompiledAtom> atoms;
  std::vector<const std::vector<int>*> dom;
  std::vector<std::optional<EvalTable>> memo;
  EvalPool pool;
  std::uint64_t rows = 0;
  std::vector<int> obj;
  std::vector<int> scratch;

  VeRun(const VeEvaluator& e, const Interpretation& interp)
      : ev(e), I(interp), atoms(compile_atoms(e.f_, interp.universe())), dom(domains_of(e.f_, interp.universe())),
        memo(e.f_.size()), obj(e.f_.prefix().size(), 0), scratch(16) {
    for (const auto& n : e.f_.nodes()) {
      if (!n.is_leaf && n.atom.args.size() > scratch.size()) scratch.resize(n.atom.args.size());
    }
  }

  EvalTable aggregate(EvalTable t, const std::vector<int>& vars) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      int v = *it;
      rows += t.entries.size();
      t = aggregate_out(pool, t, v, dom[static_cast<std::size_t>(v)]->size(), ev.f_.prefix()[static_cast<std::size_t>(v)].agg);
    }
    return t;
  }

  // Child table joined with the binding table of `n` for one branch.
  EvalTable join(NodeId n, bool branch, const EvalTable& child) {
    const auto& self = ev.stats_[n].self;
    EvalTable out;
    out.columns = sorted_union(self, child.columns);
    for (int c : out.columns) out.extent.push_back(dom[static_cast<std::size_t>(c)]->size());
    out.entries.resize(table_size(out.extent));
    rows += out.entries.size();
    std::vector<std::vector<std::size_t>> strides{strides_within(child, out.columns)};
    const auto& atom = atoms[n];
    EdgeId edge{n, branch};
    for_each_row(out.extent, strides, [&](std::size_t row, const std::vector<int>& pos, const std::vector<std::size_t>& idx) {
      for (std::size_t k = 0; k < out.columns.size(); ++k) {
        auto v = static_cast<std::size_t>(out.columns[k]);
        obj[v] = (*dom[v])[static_cast<std::size_t>(pos[k])];
      }
      if (holds_with(atom, I, obj.data(), scratch.data()) != branch) return;
      const auto& src = child.entries[idx[0]];
      if (!src.present) throw InternalError("incomplete child table");
      auto& dst = out.entries[row];
      dst = src;
      dst.edges = pool.add_edge(src.edges, edge);
    });
    return out;
  }

  EvalTable unite(const EvalTable& a, const EvalTable& b) {
    EvalTable out;
    out.columns = sorted_union(a.columns, b.columns);
    for (int c : out.columns) out.extent.push_back(dom[static_cast<std::size_t>(c)]->size());
    out.entries.resize(table_size(out.extent));
    rows += out.entries.size();
    std::vector<std::vector<std::size_t>> strides{strides_within(a, out.columns), strides_within(b, out.columns)};
    for_each_row(out.extent, strides, [&](std::size_t row, const std::vector<int>&, const std::vector<std::size_t>& idx) {
      const auto& x = a.entries[idx[0]];
      const auto& y = b.entries[idx[1]];
      if (x.present == y.present) throw InternalError("branch tables do not partition the bindings");
      out.entries[row] = x.present ? x : y;
    });
    return out;
  }

  const EvalTable& node(NodeId n) {
    if (memo[n]) return *memo[n];
    const Node& nd = ev.f_.node(n);
    EvalTable t;
    if (nd.is_leaf) {
      EvalEntry e;
      e.present = true;
      e.value = pool.value(nd.value);
      e.winner = pool.winner(std::vector<int>(ev.leading_, -1));
      t.entries.push_back(std::move(e));
      ++rows;
      t = aggregate(std::move(t), ev.agg_node_[n]);
    } else {
      EvalTable side[2];
      for (int b = 0; b < 2; ++b) {
        NodeId c = b ? nd.true_child : nd.false_child;
        EvalTable child = aggregate(node(c), sorted_difference(ev.agg_branch_[n], ev.agg_node_[c]));
        side[b] = join(n, b == 1, child);
      }
      t = aggregate(unite(side[1], side[0]), sorted_difference(ev.agg_node_[n], ev.agg_branch_[n]));
    }
    memo[n] = std::move(t);
    return *memo[n];
  }
};

EvalResult VeEvaluator::evaluate(const Interpretation& I) const {
  if (!supported_) return eval_brute(f_, I);
  VeRun run(*this, I);
  const EvalTable& t = run.node(f_.root());
  if (!t.columns.empty() || t.entries.size() != 1 || !t.entries[0].present) {
    throw InternalError("root table not fully aggregated");
  }
  const auto& e = t.entries[0];
  EvalResult r;
  r.value = run.pool.value_of(e.value);
  r.edges = run.pool.edges_of(e.edges);
  r.winner = winner_binding(f_, run.dom, run.pool.winner_of(e.winner), leading_, I.universe());
  r.work = run.rows;
  return r;
}

EvalResult eval_ve(const Gfodd& f, const Interpretation& I) { return VeEvaluator(f).evaluate(I); }

}  // namespace gfodd
