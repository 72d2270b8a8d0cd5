#include "chcpre/linarith.hpp"

#include "chcpre/deadline.hpp"

#include <algorithm>

namespace chcpre {

namespace {

LinConstraint at_least(const std::vector<LinConstraint::Term>& terms,
                       const Integer& b) {
  // t >= b  as  -t <= -b
  std::vector<LinConstraint::Term> neg;
  for (const auto& [v, a] : terms) neg.emplace_back(v, -a);
  return LinConstraint(std::move(neg), Rel::Le, -b);
}

/// Divides coefficients by their gcd, flooring the bound. Returns false if
/// an equality has no integer solution.
bool tighten(std::vector<LinConstraint>& cs) {
  for (auto& k : cs) {
    if (k.is_ground()) continue;
    Integer g = 0;
    for (const auto& [v, a] : k.terms())
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) continue;
    if (k.rel() == Rel::Eq) {
      if (!mpz_divisible_p(k.rhs().get_mpz_t(), g.get_mpz_t())) return false;
      continue;  // canonical form already divided
    }
    std::vector<LinConstraint::Term> t;
    for (const auto& [v, a] : k.terms()) t.emplace_back(v, a / g);
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), k.rhs().get_mpz_t(), g.get_mpz_t());
    k = LinConstraint(std::move(t), Rel::Le, q);
  }
  return true;
}

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

bool sat_or_drop(const Conj& c) { return !c.is_bottom() && satisfiable(c); }

/// Conjunction with pruning of unsatisfiable and subsumed disjuncts.
void add_disjunct(std::vector<Conj>& out, Conj d) {
  if (!sat_or_drop(d)) return;
  for (const auto& e : out)
    if (entails(d, e)) return;
  std::erase_if(out, [&](const Conj& e) { return entails(e, d); });
  out.push_back(std::move(d));
}

}  // namespace

Dnf negate(const Conj& c) {
  if (c.is_bottom()) return Dnf::verum();
  Dnf out;
  for (const auto& k : c.constraints()) {
    std::vector<LinConstraint> atoms;
    atoms.push_back(at_least(k.terms(), k.rhs() + 1));
    if (k.rel() == Rel::Eq)
      atoms.emplace_back(k.terms(), Rel::Le, k.rhs() - 1);
    for (auto& a : atoms) {
      Conj d({a});
      if (d.is_bottom()) continue;
      if (std::find(out.disjuncts.begin(), out.disjuncts.end(), d) ==
          out.disjuncts.end())
        out.disjuncts.push_back(std::move(d));
    }
  }
  return out;
}

Dnf conjoin(const Dnf& a, const Dnf& b) {
  std::vector<Conj> out;
  for (const auto& x : a.disjuncts)
    for (const auto& y : b.disjuncts) add_disjunct(out, x & y);
  return prune(Dnf{std::move(out)});
}

Dnf negate(const Dnf& d) {
  Dnf acc = Dnf::verum();
  for (const auto& disj : d.disjuncts) {
    acc = conjoin(acc, negate(disj));
    if (acc.is_false()) break;
  }
  return acc;
}

Dnf prune(const Dnf& d) {
  std::vector<Conj> simplified;
  for (const auto& c : d.disjuncts) {
    if (!sat_or_drop(c)) continue;
    try {
      simplified.push_back(simplify(c));
    } catch (const std::invalid_argument&) {
      // integer-infeasible
    }
  }
  std::vector<Conj> out;
  for (auto& c : simplified) add_disjunct(out, std::move(c));
  return Dnf{std::move(out)};
}

Conj simplify(const Conj& c) {
  if (!satisfiable(c)) throw std::invalid_argument("unsat input");
  Conj cur = c;
  for (;;) {
    std::vector<LinConstraint> cs = cur.constraints();
    if (!tighten(cs)) throw std::invalid_argument("unsat input");
    Conj next = reduce(Conj(std::move(cs)));
    if (next.is_bottom()) throw std::invalid_argument("unsat input");
    if (next == cur) return next;
    cur = std::move(next);
  }
}

bool integer_satisfiable(const Conj& c, const IntegerOptions& opts) {
  std::size_t nodes = 0;
  std::vector<Conj> stack{c};
  while (!stack.empty()) {
    Conj cur = std::move(stack.back());
    stack.pop_back();
    check_deadline();
    if (++nodes > opts.node_budget)
      throw Undecided("branch-and-bound node budget exhausted");
    std::vector<LinConstraint> cs = cur.constraints();
    if (!tighten(cs)) continue;
    Conj node(std::move(cs));
    auto m = model(node);
    if (!m) continue;
    std::optional<std::pair<Var, Rational>> frac;
    for (const auto& [v, val] : *m) {
      if (val.get_den() != 1) {
        frac.emplace(v, val);
        break;
      }
    }
    if (!frac) return true;
    Integer fl = floor_of(frac->second);
    std::vector<LinConstraint::Term> t{{frac->first, Integer(1)}};
    Conj up = node;
    up.add(at_least(t, fl + 1));
    Conj down = node;
    down.add(LinConstraint(t, Rel::Le, fl));
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  return false;
}

namespace {

/// Searches for an integer point of `cur` outside every b[j..].
bool escapes(const Conj& cur, const std::vector<Dnf>& negs, std::size_t j,
             const IntegerOptions& opts) {
  if (!satisfiable(cur)) return false;
  if (j == negs.size()) return integer_satisfiable(cur, opts);
  for (const auto& atom : negs[j].disjuncts) {
    if (escapes(cur & atom, negs, j + 1, opts)) return true;
  }
  return false;
}

}  // namespace

bool implies(const Dnf& a, const Dnf& b, const IntegerOptions& opts) {
  std::vector<Dnf> negs;
  for (const auto& d : b.disjuncts) negs.push_back(negate(d));
  for (const auto& d : a.disjuncts) {
    // Disjuncts of b that cannot meet d impose nothing.
    std::vector<Dnf> relevant;
    for (std::size_t j = 0; j < negs.size(); ++j) {
      if (satisfiable(d & b.disjuncts[j])) relevant.push_back(negs[j]);
    }
    if (escapes(d, relevant, 0, opts)) return false;
  }
  return true;
}

bool equiv_dnf(const Dnf& a, const Dnf& b, const IntegerOptions& opts) {
  return implies(a, b, opts) && implies(b, a, opts);
}

}  // namespace chcpre
