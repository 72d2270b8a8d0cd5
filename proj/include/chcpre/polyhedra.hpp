#pragma once

// Closed convex polyhedra in constraint form over an ordered list of
// dimensions.

#include "chcpre/linarith.hpp"

#include <map>
#include <vector>

namespace chcpre {

class Polyhedron {
 public:
  static Polyhedron top(std::vector<Var> dims);
  static Polyhedron bottom(std::vector<Var> dims);
  /// The shadow of `c` on `dims` (bottom when unsatisfiable).
  static Polyhedron of(std::vector<Var> dims, const Conj& c);

  const std::vector<Var>& dims() const { return dims_; }
  const Conj& constr() const { return constr_; }
  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && constr_.empty(); }
  /// The constraint, with bottom as a ground contradiction.
  Conj as_conj() const { return bottom_ ? Conj::bottom() : constr_; }
  std::string to_string(const VarNamer& namer = default_var_name) const;

  friend bool operator==(const Polyhedron&, const Polyhedron&) = default;

 private:
  std::vector<Var> dims_;
  Conj constr_;
  bool bottom_ = false;
};

Polyhedron meet(const Polyhedron& p, const Polyhedron& q);
/// Closed convex hull.
Polyhedron join(const Polyhedron& p, const Polyhedron& q);
/// q is contained in p.
bool includes(const Polyhedron& p, const Polyhedron& q);
/// Constraints of p (equalities split in two) that q satisfies.
Polyhedron widen(const Polyhedron& p, const Polyhedron& q);
Polyhedron project_poly(const Polyhedron& p, const std::vector<Var>& keep);
/// Relabels dimensions through a bijection given as a map.
Polyhedron rename(const Polyhedron& p, const std::map<Var, Var>& bijection);

}  // namespace chcpre
