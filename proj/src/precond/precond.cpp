#include "chcpre/precond.hpp"

namespace chcpre {

namespace {

Conj head_projection(const Clause& c) {
  const auto& args = c.head->args;
  VarSet keep(args.begin(), args.end());
  return to_positional(project(c.constr, keep), args);
}

}  // namespace

Dnf extract_swp(const Program& p) {
  Dnf init;
  for (const Clause* c : p.initial_clauses()) {
    Conj theta = head_projection(*c);
    if (!theta.is_bottom()) init.disjuncts.push_back(std::move(theta));
  }
  return negate(init);
}

Dnf PrecondState::final_precondition(const Dnf& swp) const {
  Dnf out = swp;
  for (const auto& d : psi_) out = conjoin(out, d);
  return prune(out);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "trivial";
    case Classification::MoreGeneral: return "more-general";
    case Classification::NonTrivial: return "non-trivial";
    case Classification::Undecided: return "undecided";
  }
  return "undecided";
}

Classification classify(const Dnf& pre, const std::optional<Dnf>& original) {
  try {
    if (equiv_dnf(pre, Dnf::falsum())) return Classification::Trivial;
    if (original && implies(*original, pre)) return Classification::MoreGeneral;
    return Classification::NonTrivial;
  } catch (const Undecided&) {
    return Classification::Undecided;
  }
}

Program strip_init(const Program& p) {
  Program q = p;
  q.clauses.clear();
  Dnf removed;
  std::set<std::string> seen;
  for (const auto& c : p.clauses) {
    if (!p.is_initial_clause(c)) {
      q.clauses.push_back(c);
      continue;
    }
    Conj theta = head_projection(c);
    if (!theta.is_bottom()) removed.disjuncts.push_back(theta);
    if (!seen.insert(c.head->pred).second) continue;
    Clause d = c;
    d.constr = Conj();
    compact(d);
    q.clauses.push_back(std::move(d));
  }
  q.original_init = std::move(removed);
  return q;
}

}  // namespace chcpre
