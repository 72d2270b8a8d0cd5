#pragma once

// Constraint specialisation: polyhedral call/answer invariants of the
// query-answer program are conjoined back onto the source clauses.

#include "chcpre/polyhedra.hpp"
#include "chcpre/qa.hpp"

namespace chcpre {

struct PredInvariant {
  Polyhedron call;
  Polyhedron ans;
};

/// Per source predicate (false included), over argument positions 0..n-1.
using InvariantMap = std::map<std::string, PredInvariant>;

struct CsOptions {
  std::size_t widening_delay = 2;
};

/// Least fixpoint over the query-answer program, with join and, after the
/// delay, widening at predicates that lie on a cycle.
InvariantMap analyze(const QaProgram& qa, const CsOptions& opts = {});

struct CsResult {
  Program program;
  std::vector<std::string> deleted;
  InvariantMap invariants;
};

/// Conjoins the answer invariants of the body atoms (and, for constrained
/// facts, of the head) onto each clause, deletes clauses that become
/// unsatisfiable, alone or together with the call invariant of the head,
/// then prunes clauses that
/// can no longer contribute to a derivation of false.
CsResult strengthen(const Program& p, const InvariantMap& inv);

/// qa_transform, analyze and strengthen in sequence.
CsResult specialise(const Program& p, const CsOptions& opts = {});

/// One line per predicate: `pred: call=<conj>; ans=<conj>`.
std::string dump_invariants(const InvariantMap& inv);

}  // namespace chcpre
