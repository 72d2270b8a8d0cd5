#include "chcpre/polyhedra.hpp"

#include <algorithm>
#include <stdexcept>

namespace chcpre {

namespace {

void same_dims(const Polyhedron& p, const Polyhedron& q) {
  if (p.dims() != q.dims()) throw std::invalid_argument("dimension mismatch");
}

std::uint32_t next_free(const Polyhedron& p, const Polyhedron& q) {
  std::uint32_t n = 0;
  for (const Polyhedron* x : {&p, &q}) {
    for (Var v : x->dims()) n = std::max(n, v.id + 1);
    for (Var v : x->constr().vars()) n = std::max(n, v.id + 1);
  }
  return n;
}

/// Inequalities only: equalities become two opposite rows.
std::vector<LinConstraint> split(const Conj& c) {
  std::vector<LinConstraint> out;
  for (const auto& k : c.constraints()) {
    if (k.rel() == Rel::Eq) {
      out.emplace_back(k.terms(), Rel::Le, k.rhs());
      out.push_back(LinConstraint(k.terms(), Rel::Le, k.rhs()).flipped());
    } else {
      out.push_back(k);
    }
  }
  return out;
}

}  // namespace

Polyhedron Polyhedron::top(std::vector<Var> dims) {
  Polyhedron p;
  p.dims_ = std::move(dims);
  return p;
}

Polyhedron Polyhedron::bottom(std::vector<Var> dims) {
  Polyhedron p;
  p.dims_ = std::move(dims);
  p.bottom_ = true;
  return p;
}

Polyhedron Polyhedron::of(std::vector<Var> dims, const Conj& c) {
  VarSet keep(dims.begin(), dims.end());
  Conj shadow = project(c, keep);
  if (shadow.is_bottom()) return bottom(std::move(dims));
  Polyhedron p;
  p.dims_ = std::move(dims);
  p.constr_ = std::move(shadow);
  return p;
}

std::string Polyhedron::to_string(const VarNamer& namer) const {
  return bottom_ ? "false" : constr_.to_string(namer);
}

Polyhedron meet(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_bottom()) return p;
  if (q.is_bottom()) return q;
  return Polyhedron::of(p.dims(), p.constr() & q.constr());
}

bool includes(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (q.is_bottom()) return true;
  if (p.is_bottom()) return false;
  return entails(q.constr(), p.constr());
}

Polyhedron join(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_bottom()) return q;
  if (q.is_bottom()) return p;
  if (includes(p, q)) return p;
  if (includes(q, p)) return q;

  // x = y + z with A y <= b*l and A' z <= b'*(1-l), 0 <= l <= 1; the
  // second copy is substituted away as z = x - y.
  std::uint32_t base = next_free(p, q);
  std::map<Var, Var> y;
  for (Var d : p.dims()) y[d] = Var{base++};
  Var lambda{base++};
  auto y_of = [&](Var v) {
    auto it = y.find(v);
    return it == y.end() ? v : it->second;
  };

  std::vector<LinConstraint> lifted;
  for (const auto& k : p.constr().constraints()) {
    // sum a*y - b*l rel 0
    std::vector<LinConstraint::Term> t;
    for (const auto& [v, a] : k.terms()) t.emplace_back(y_of(v), a);
    t.emplace_back(lambda, -k.rhs());
    lifted.emplace_back(std::move(t), k.rel(), Integer(0));
  }
  for (const auto& k : q.constr().constraints()) {
    // sum a*(x - y) <= b*(1 - l)  =>  sum a*x - sum a*y + b*l <= b
    std::vector<LinConstraint::Term> t;
    for (const auto& [v, a] : k.terms()) {
      t.emplace_back(v, a);
      t.emplace_back(y_of(v), -a);
    }
    t.emplace_back(lambda, k.rhs());
    lifted.emplace_back(std::move(t), k.rel(), k.rhs());
  }
  lifted.emplace_back(std::vector<LinConstraint::Term>{{lambda, Integer(-1)}}, Rel::Le, Integer(0));
  lifted.emplace_back(std::vector<LinConstraint::Term>{{lambda, Integer(1)}}, Rel::Le, Integer(1));
  return Polyhedron::of(p.dims(), Conj(std::move(lifted)));
}

Polyhedron widen(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_bottom()) return q;
  if (q.is_bottom()) return p;
  std::vector<LinConstraint> kept;
  for (const auto& k : split(p.constr()))
    if (entails(q.constr(), k)) kept.push_back(k);
  // Re-pair opposite halves into equalities.
  std::vector<LinConstraint> out;
  std::vector<bool> used(kept.size(), false);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (used[i]) continue;
    LinConstraint opp = kept[i].flipped();
    bool paired = false;
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if (!used[j] && kept[j].terms() == opp.terms() && kept[j].rhs() == opp.rhs()) {
        used[j] = true;
        out.emplace_back(kept[i].terms(), Rel::Eq, kept[i].rhs());
        paired = true;
        break;
      }
    }
    if (!paired) out.push_back(kept[i]);
  }
  return Polyhedron::of(p.dims(), Conj(std::move(out)));
}

Polyhedron project_poly(const Polyhedron& p, const std::vector<Var>& keep) {
  for (Var v : keep)
    if (std::find(p.dims().begin(), p.dims().end(), v) == p.dims().end())
      throw std::invalid_argument("dimension mismatch");
  if (p.is_bottom()) return Polyhedron::bottom(keep);
  return Polyhedron::of(keep, p.constr());
}

Polyhedron rename(const Polyhedron& p, const std::map<Var, Var>& bijection) {
  std::vector<Var> dims;
  for (Var v : p.dims()) {
    auto it = bijection.find(v);
    if (it == bijection.end()) throw std::invalid_argument("dimension mismatch");
    dims.push_back(it->second);
  }
  if (p.is_bottom()) return Polyhedron::bottom(std::move(dims));
  Conj c = p.constr().rename([&](Var v) { return bijection.at(v); });
  return Polyhedron::of(std::move(dims), c);
}

}  // namespace chcpre
