#pragma once

// Sufficient preconditions over the arguments of the initial predicate.

#include "chcpre/chc.hpp"

namespace chcpre {

/// Complement of the disjunction of the initial-clause constraints, each
/// projected onto its head arguments and read positionally.
Dnf extract_swp(const Program& p);

/// Accumulated complements of the initial projections of eliminated
/// feasible counterexamples.
class PrecondState {
 public:
  void add_theta(const Conj& theta) { psi_.push_back(negate(theta)); }
  const std::vector<Dnf>& psi() const { return psi_; }
  /// prune(swp and every stored complement).
  Dnf final_precondition(const Dnf& swp) const;

 private:
  std::vector<Dnf> psi_;
};

enum class Classification { Trivial, MoreGeneral, NonTrivial, Undecided };
std::string to_string(Classification c);

/// Trivial when `pre` has no integer model; more general when `original` is
/// given and implies `pre`; otherwise non-trivial.
Classification classify(const Dnf& pre, const std::optional<Dnf>& original);

/// Replaces the constraints of the initial clauses by true and records their
/// disjunction in `original_init`. Identical facts are kept once.
Program strip_init(const Program& p);

}  // namespace chcpre
