#pragma once

// Bottom-up finite tree automata over clause identifiers, and trace
// elimination by automaton difference.

#include "chcpre/derivation.hpp"

namespace chcpre {

struct Fta {
  struct Transition {
    std::string symbol;
    std::vector<std::size_t> args;
    std::size_t target;
  };

  std::vector<std::string> states;
  /// Program predicate each state stands for (used to rebuild clauses).
  std::vector<std::string> pred;
  std::vector<Transition> transitions;
  std::set<std::size_t> finals;

  std::size_t add_state(std::string name, std::string of_pred);
  /// States reachable at the root of `t`.
  std::set<std::size_t> run(const TraceTree& t) const;
  bool accepts(const TraceTree& t) const;
};

/// One state per predicate; clause `c` gives `c(body preds) -> head`.
Fta program_to_fta(const Program& p);
/// One state per node; the root state is final.
Fta trace_to_fta(const TraceTree& t);
/// Subset construction; the resulting automaton is deterministic and only
/// has reachable, non-empty subsets as states.
Fta determinize(const Fta& a);
/// Accepts L(a) minus L(b). States are pairs of an a-state and a set of
/// b-states; states that cannot reach a final state are removed.
Fta difference(const Fta& a, const Fta& b);

/// One clause copy per transition, predicates renamed after the states.
/// Throws std::invalid_argument("automaton not derived from program") when
/// a transition does not match its clause.
struct FtaProgram {
  Program program;
  std::map<std::string, std::string> provenance;  // new clause id -> old id
};
FtaProgram fta_to_program(const Fta& f, const Program& p);

struct TeResult {
  Program program;
  std::map<std::string, std::string> provenance;
  bool feasible = false;
  /// Initial projection of the trace when it is feasible.
  std::optional<Conj> theta;
};

/// Removes exactly the derivation `t` from the language of `p`.
/// Throws std::invalid_argument("trace not in program language").
TeResult eliminate_trace(const Program& p, const TraceTree& t);

}  // namespace chcpre
