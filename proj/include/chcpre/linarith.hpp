#pragma once

// Exact linear arithmetic over integer-valued variables.
//
// Constraints are stored canonically as `sum(a_i * x_i) rel b` with integer
// coefficients, rel in {=, <=}, and the row (a_1..a_n, b) primitive (gcd 1).
// Satisfiability, entailment and projection are decided over the rationals;
// negation, simplification and the DNF equivalence oracle use integer
// semantics.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chcpre {

using Integer = mpz_class;
using Rational = mpq_class;

struct Var {
  std::uint32_t id = 0;

  friend auto operator<=>(const Var&, const Var&) = default;
};

using VarSet = std::set<Var>;
using VarNamer = std::function<std::string(Var)>;

std::string default_var_name(Var v);

/// Linear expression with rational coefficients, used to build constraints.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}
  static LinExpr var(Var v, Rational coeff = 1);

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(const Rational& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
  friend LinExpr operator*(const Rational& k, LinExpr a) { return a *= k; }

  const std::map<Var, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return coeffs_.empty(); }

 private:
  std::map<Var, Rational> coeffs_;  // no zero entries
  Rational constant_ = 0;
};

enum class Rel { Eq, Le };

class LinConstraint {
 public:
  using Term = std::pair<Var, Integer>;

  /// Builds and normalizes `sum(terms) rel rhs`.
  LinConstraint(std::vector<Term> terms, Rel rel, Integer rhs);

  /// `lhs <= rhs`, `lhs = rhs`, `lhs >= rhs` over rational expressions.
  static LinConstraint le(const LinExpr& lhs, const LinExpr& rhs);
  static LinConstraint ge(const LinExpr& lhs, const LinExpr& rhs);
  static LinConstraint eq(const LinExpr& lhs, const LinExpr& rhs);
  /// Integer-semantics strict forms: `lhs < rhs` becomes `lhs <= rhs - 1`
  /// after scaling to integer coefficients.
  static LinConstraint lt(const LinExpr& lhs, const LinExpr& rhs);
  static LinConstraint gt(const LinExpr& lhs, const LinExpr& rhs);
  static LinConstraint falsum();

  const std::vector<Term>& terms() const { return terms_; }
  Rel rel() const { return rel_; }
  const Integer& rhs() const { return rhs_; }

  Integer coeff(Var v) const;
  bool mentions(Var v) const;
  bool is_ground() const { return terms_.empty(); }
  bool is_tautology() const;
  bool is_contradiction() const;

  LinConstraint rename(const std::function<Var(Var)>& f) const;
  /// `a*this + b*other`; for inequalities a, b must be non-negative.
  static LinConstraint combine(const Integer& a, const LinConstraint& x,
                               const Integer& b, const LinConstraint& y);
  /// The same row with the opposite direction: `-t <= -b`.
  LinConstraint flipped() const;

  bool holds_at(const std::map<Var, Rational>& point) const;
  std::string to_string(const VarNamer& namer = default_var_name) const;

  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
  friend std::strong_ordering operator<=>(const LinConstraint& a,
                                          const LinConstraint& b);

 private:
  LinConstraint() = default;
  void normalize();

  std::vector<Term> terms_;  // sorted by var, non-zero coefficients
  Rel rel_ = Rel::Le;
  Integer rhs_ = 0;
};

/// A conjunction of linear constraints kept sorted and duplicate-free.
class Conj {
 public:
  Conj() = default;
  explicit Conj(std::vector<LinConstraint> cs);
  static Conj top() { return Conj(); }
  static Conj bottom();

  void add(const LinConstraint& c);
  void add(const Conj& other);
  Conj operator&(const Conj& other) const;

  const std::vector<LinConstraint>& constraints() const { return cs_; }
  std::size_t size() const { return cs_.size(); }
  bool empty() const { return cs_.empty(); }
  /// Syntactically false (contains a ground contradiction).
  bool is_bottom() const;

  VarSet vars() const;
  Conj rename(const std::function<Var(Var)>& f) const;
  bool holds_at(const std::map<Var, Rational>& point) const;
  std::string to_string(const VarNamer& namer = default_var_name) const;

  friend bool operator==(const Conj&, const Conj&) = default;
  friend auto operator<=>(const Conj& a, const Conj& b) {
    return a.cs_ <=> b.cs_;
  }

 private:
  void canonicalize();
  std::vector<LinConstraint> cs_;
};

/// Disjunction of conjunctions; the empty disjunction is false.
struct Dnf {
  std::vector<Conj> disjuncts;

  static Dnf falsum() { return {}; }
  static Dnf verum() { return {{Conj::top()}}; }
  bool is_false() const { return disjuncts.empty(); }
  std::string to_string(const VarNamer& namer = default_var_name) const;
  bool holds_at(const std::map<Var, Rational>& point) const;
};

/// Thrown when the branch-and-bound node budget is exhausted.
class Undecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- Rational decision procedures -----------------------------------------

bool satisfiable(const Conj& c);
/// A rational model of `c`, if one exists.
std::optional<std::map<Var, Rational>> model(const Conj& c);
bool entails(const Conj& c, const LinConstraint& d);
bool entails(const Conj& c, const Conj& d);
bool equivalent(const Conj& a, const Conj& b);

/// Exact rational shadow of `c` on `keep` by Fourier-Motzkin elimination.
Conj project(const Conj& c, const VarSet& keep);

/// Removes redundant constraints and turns implied opposite inequalities
/// into equalities. Returns `Conj::bottom()` when unsatisfiable.
Conj reduce(const Conj& c);

// --- Integer semantics -----------------------------------------------------

/// Integer complement of a conjunction as a DNF.
Dnf negate(const Conj& c);
/// Integer complement of a DNF, distributed back to DNF.
Dnf negate(const Dnf& d);
/// Conjunction of two DNFs, distributed with pruning.
Dnf conjoin(const Dnf& a, const Dnf& b);
/// Drops unsatisfiable and subsumed disjuncts, simplifying the rest.
Dnf prune(const Dnf& d);

/// Equivalent conjunction over the integers with gcd-tightened inequalities,
/// redundant constraints removed and equalities detected.
/// Throws std::invalid_argument("unsat input") when `c` is unsatisfiable.
Conj simplify(const Conj& c);

struct IntegerOptions {
  std::size_t node_budget = 100000;
};

/// Integer satisfiability by branch-and-bound; throws Undecided when the
/// node budget runs out.
bool integer_satisfiable(const Conj& c, const IntegerOptions& opts = {});
/// Integer DNF implication: every integer model of `a` satisfies `b`.
bool implies(const Dnf& a, const Dnf& b, const IntegerOptions& opts = {});
bool equiv_dnf(const Dnf& a, const Dnf& b, const IntegerOptions& opts = {});

// --- Diagnostics -----------------------------------------------------------

/// Upper bound on intermediate constraints during elimination. When exceeded,
/// the constraints with the largest constant magnitude are dropped, which
/// over-approximates the shadow, and a warning is recorded.
std::size_t& projection_cap();

/// Collects precision warnings raised on the current thread while alive.
class WarningCollector {
 public:
  WarningCollector();
  ~WarningCollector();
  WarningCollector(const WarningCollector&) = delete;
  WarningCollector& operator=(const WarningCollector&) = delete;

  const std::vector<std::string>& warnings() const { return warnings_; }
  static void emit(std::string msg);

 private:
  std::vector<std::string> warnings_;
  WarningCollector* previous_;
};

}  // namespace chcpre
