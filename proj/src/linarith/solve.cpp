#include "chcpre/linarith.hpp"

#include "chcpre/deadline.hpp"
#include "simplex.hpp"

#include <algorithm>

namespace chcpre {

using detail::RowKind;
using detail::Simplex;

namespace {

Simplex load(const Conj& c) {
  Simplex s;
  for (const auto& k : c.constraints()) s.add(k);
  return s;
}

std::vector<LinConstraint::Term> negated_terms(const LinConstraint& k) {
  std::vector<LinConstraint::Term> out;
  out.reserve(k.terms().size());
  for (const auto& [v, a] : k.terms()) out.emplace_back(v, -a);
  return out;
}

/// c |= t <= b, checked as unsat(c and t > b) with a strict row.
bool entails_le(const Conj& c, const std::vector<LinConstraint::Term>& terms,
                const Integer& rhs) {
  Simplex s = load(c);
  std::vector<LinConstraint::Term> neg;
  for (const auto& [v, a] : terms) neg.emplace_back(v, -a);
  s.add_row(neg, RowKind::Lt, Rational(-rhs));
  return !s.check();
}

bool entails_sat(const Conj& c, const LinConstraint& d) {
  if (!entails_le(c, d.terms(), d.rhs())) return false;
  if (d.rel() == Rel::Eq) {
    return entails_le(c, negated_terms(d), Integer(-d.rhs()));
  }
  return true;
}

/// Keeps the tightest of several inequalities over identical terms.
std::vector<LinConstraint> drop_dominated(std::vector<LinConstraint> cs) {
  std::sort(cs.begin(), cs.end());
  std::vector<LinConstraint> out;
  for (auto& k : cs) {
    if (!out.empty() && out.back().rel() == Rel::Le && k.rel() == Rel::Le &&
        out.back().terms() == k.terms()) {
      continue;  // sorted by rhs, so the earlier one is tighter
    }
    out.push_back(std::move(k));
  }
  return out;
}

/// Drops inequalities implied by the rest, scanning in canonical order.
std::vector<LinConstraint> drop_redundant(std::vector<LinConstraint> cs) {
  for (std::size_t i = 0; i < cs.size();) {
    if (cs[i].rel() == Rel::Eq) {
      ++i;
      continue;
    }
    std::vector<LinConstraint> rest;
    rest.reserve(cs.size() - 1);
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (j != i) rest.push_back(cs[j]);
    if (entails_sat(Conj(rest), cs[i])) {
      cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return cs;
}

/// Reduced row echelon form of a set of equalities, one row per pivot.
std::vector<LinConstraint> echelon(const std::vector<LinConstraint>& eqs) {
  std::vector<std::map<Var, Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& e : eqs) {
    std::map<Var, Rational> r;
    for (const auto& [v, a] : e.terms()) r[v] = Rational(a);
    rows.push_back(std::move(r));
    rhs.emplace_back(e.rhs());
  }
  std::vector<Var> pivots;
  std::size_t done = 0;
  for (;;) {
    // Smallest variable among the remaining rows.
    std::optional<Var> best;
    std::size_t at = 0;
    for (std::size_t i = done; i < rows.size(); ++i) {
      if (rows[i].empty()) continue;
      Var v = rows[i].begin()->first;
      if (!best || v < *best) {
        best = v;
        at = i;
      }
    }
    if (!best) break;
    std::swap(rows[at], rows[done]);
    std::swap(rhs[at], rhs[done]);
    Var p = *best;
    Rational inv = 1 / rows[done][p];
    for (auto& [v, a] : rows[done]) a *= inv;
    rhs[done] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == done) continue;
      auto it = rows[i].find(p);
      if (it == rows[i].end()) continue;
      Rational f = it->second;
      for (const auto& [v, a] : rows[done]) {
        Rational& slot = rows[i][v];
        slot -= f * a;
        if (slot == 0) rows[i].erase(v);
      }
      rhs[i] -= f * rhs[done];
    }
    pivots.push_back(p);
    ++done;
  }
  std::vector<LinConstraint> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LinExpr e;
    for (const auto& [v, a] : rows[i]) e += LinExpr::var(v, a);
    out.push_back(LinConstraint::eq(e, LinExpr(rhs[i])));
  }
  return out;
}

void enforce_cap(std::vector<LinConstraint>& cs) {
  const std::size_t cap = projection_cap();
  if (cs.size() <= cap) return;
  std::size_t dropped = cs.size() - cap;
  std::stable_sort(cs.begin(), cs.end(),
                   [](const LinConstraint& a, const LinConstraint& b) {
                     return abs(a.rhs()) < abs(b.rhs());
                   });
  cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(cap), cs.end());
  WarningCollector::emit("projection cap of " + std::to_string(cap) +
                         " constraints reached; dropped " +
                         std::to_string(dropped) + " (result over-approximated)");
}

}  // namespace

bool satisfiable(const Conj& c) {
  if (c.is_bottom()) return false;
  if (c.empty()) return true;
  Simplex s = load(c);
  return s.check();
}

std::optional<std::map<Var, Rational>> model(const Conj& c) {
  if (c.is_bottom()) return std::nullopt;
  Simplex s = load(c);
  if (!s.check()) return std::nullopt;
  return s.model();
}

bool entails(const Conj& c, const LinConstraint& d) {
  if (d.is_tautology()) return true;
  return entails_sat(c, d);
}

bool entails(const Conj& c, const Conj& d) {
  if (!satisfiable(c)) return true;
  return std::all_of(d.constraints().begin(), d.constraints().end(),
                     [&](const LinConstraint& k) { return entails_sat(c, k); });
}

bool equivalent(const Conj& a, const Conj& b) {
  return entails(a, b) && entails(b, a);
}

Conj reduce(const Conj& c) {
  if (!satisfiable(c)) return Conj::bottom();
  std::vector<LinConstraint> eqs, ineqs;
  for (const auto& k : c.constraints()) {
    if (k.rel() == Rel::Eq) {
      eqs.push_back(k);
    } else if (entails_le(c, negated_terms(k), Integer(-k.rhs()))) {
      eqs.emplace_back(k.terms(), Rel::Eq, k.rhs());
    } else {
      ineqs.push_back(k);
    }
  }
  std::vector<LinConstraint> all = echelon(Conj(eqs).constraints());
  all.insert(all.end(), ineqs.begin(), ineqs.end());
  Conj canon(std::move(all));
  return Conj(drop_redundant(canon.constraints()));
}

Conj project(const Conj& c, const VarSet& keep) {
  if (!satisfiable(c)) return Conj::bottom();
  std::vector<LinConstraint> cs = c.constraints();
  VarSet elim;
  for (Var v : c.vars())
    if (!keep.contains(v)) elim.insert(v);
  if (elim.empty()) return reduce(c);

  // Equalities first: exact substitution.
  for (;;) {
    std::optional<std::size_t> row;
    Var pick{};
    Integer best;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].rel() != Rel::Eq) continue;
      for (const auto& [v, a] : cs[i].terms()) {
        if (!elim.contains(v)) continue;
        Integer mag = abs(a);
        if (!row || mag < best) {
          row = i;
          pick = v;
          best = mag;
        }
      }
    }
    if (!row) break;
    LinConstraint eq = cs[*row];
    cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(*row));
    Integer a = eq.coeff(pick);
    Integer sa = a > 0 ? Integer(1) : Integer(-1);
    Integer abs_a = abs(a);
    for (auto& k : cs) {
      Integer e = k.coeff(pick);
      if (e == 0) continue;
      k = LinConstraint::combine(abs_a, k, Integer(-sa * e), eq);
    }
    elim.erase(pick);
    cs = Conj(std::move(cs)).constraints();
    if (cs.size() == 1 && cs.front().is_contradiction()) return Conj::bottom();
  }

  // Fourier-Motzkin on the remaining inequalities.
  std::size_t redundancy_mark = std::max<std::size_t>(cs.size() * 2, 24);
  while (!elim.empty()) {
    check_deadline();
    std::optional<Var> pick;
    long best = 0;
    for (Var v : elim) {
      long pos = 0, neg = 0;
      for (const auto& k : cs) {
        Integer a = k.coeff(v);
        if (a > 0) ++pos;
        else if (a < 0) ++neg;
      }
      long cost = pos * neg - pos - neg;
      if (!pick || cost < best) {
        pick = v;
        best = cost;
      }
    }
    Var x = *pick;
    elim.erase(x);
    std::vector<LinConstraint> pos, neg, next;
    for (auto& k : cs) {
      Integer a = k.coeff(x);
      if (a > 0) pos.push_back(std::move(k));
      else if (a < 0) neg.push_back(std::move(k));
      else next.push_back(std::move(k));
    }
    for (const auto& p : pos) {
      Integer ap = p.coeff(x);
      for (const auto& n : neg) {
        Integer an = n.coeff(x);
        next.push_back(LinConstraint::combine(Integer(-an), p, ap, n));
      }
    }
    Conj canon(std::move(next));
    if (canon.is_bottom()) return Conj::bottom();
    cs = drop_dominated(canon.constraints());
    if (cs.size() > redundancy_mark) {
      cs = drop_redundant(std::move(cs));
      redundancy_mark = std::max<std::size_t>(cs.size() * 2, 24);
    }
    enforce_cap(cs);
  }
  return reduce(Conj(std::move(cs)));
}

}  // namespace chcpre
