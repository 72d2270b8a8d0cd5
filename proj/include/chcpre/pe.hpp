#pragma once

// Polyvariant partial evaluation: unfolds deterministic predicates and
// splits predicates into versions keyed by abstracted call contexts.

#include "chcpre/chc.hpp"

namespace chcpre {

/// Candidate properties per predicate, over argument positions.
using PropertyMap = std::map<std::string, std::vector<Conj>>;

/// Projections of each clause constraint onto every atom's argument tuple
/// and onto each single argument; tautologies dropped, equivalent ones merged.
PropertyMap gen_properties(const Program& p);

struct PeOptions {
  /// When unfolding the goal element, also split non-deterministic atoms.
  bool split_goal_clauses = true;
  std::size_t split_cap = 64;
};

struct PeLayer {
  std::vector<std::string> facts;    // call contexts discovered at this depth
  std::vector<std::string> clauses;  // clauses emitted for those contexts
};

struct PeResult {
  Program program;
  PropertyMap properties;
  std::vector<PeLayer> trace;
};

/// Starts from `false <- true` and repeats unfold-then-abstract until no new
/// call context appears. Contexts of a non-recursive initial predicate are
/// kept exact; all others are abstracted to the entailed properties.
PeResult partial_evaluate(const Program& p, const PeOptions& opts = {});

std::string dump_trace(const PeResult& r);

}  // namespace chcpre
