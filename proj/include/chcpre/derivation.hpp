#pragma once

// Derivation trees and bounded search for derivations of false.

#include "chcpre/chc.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chcpre {

/// Derivation skeleton labelled by clause identifiers only.
struct TraceTree {
  std::string clause;
  std::vector<TraceTree> children;

  std::size_t size() const;
  /// Term notation, e.g. `c1(c10,c2(c8,c6))`.
  std::string to_string() const;
  static TraceTree parse(const std::string& text);

  friend bool operator==(const TraceTree&, const TraceTree&) = default;
  friend auto operator<=>(const TraceTree& a, const TraceTree& b) {
    if (auto c = a.clause <=> b.clause; c != 0) return c;
    return a.children <=> b.children;
  }
};

/// Derivation tree whose nodes are clause instances over globally fresh
/// variables. A child's head arguments are the parent's body-atom arguments.
struct AndTree {
  std::string clause;
  std::optional<Atom> atom;  // absent for false
  Conj constr;
  std::vector<AndTree> children;
};

/// Fresh variables are numbered from `first_var`; `next_var` is updated.
AndTree instantiate(const Program& p, const TraceTree& t, std::uint32_t* next_var = nullptr);
TraceTree strip(const AndTree& t);
Conj constr_of(const AndTree& t);
bool feasible(const AndTree& t);

/// Leftmost-outermost (breadth-first) node labelled by an initial clause.
const AndTree* first_initial_node(const Program& p, const AndTree& t);
/// constr(t) projected onto the arguments of the first initial node, with
/// the i-th argument renamed to variable i.
std::optional<Conj> initial_projection(const Program& p, const AndTree& t);

/// Minimum number of nodes of a derivation per predicate (absent when
/// underivable).
std::map<std::string, std::size_t> min_sizes(const Program& p);

struct SearchOptions {
  std::size_t max_nodes = 40;
  /// Confirm feasibility of complete trees over the integers.
  bool integer_leaves = false;
};

struct Counterexample {
  AndTree tree;
  TraceTree trace;
  bool feasible = false;
};

/// Smallest feasible derivation of false (ties broken by clause order and
/// leftmost expansion); otherwise the smallest derivation skeleton, which is
/// infeasible; none if false has no derivation within the bound.
std::optional<Counterexample> find_counterexample(const Program& p, const SearchOptions& opts = {});

/// Visits derivation skeletons for false with exactly `nodes` nodes in
/// search order. With `prune`, subtrees whose partial constraint is
/// unsatisfiable are skipped, so only feasible trees are visited. The visitor
/// returns false to stop.
void enumerate_traces(const Program& p, std::size_t nodes, bool prune,
                      const std::function<bool(const TraceTree&)>& visit);

}  // namespace chcpre
