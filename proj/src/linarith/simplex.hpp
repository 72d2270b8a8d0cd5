#pragma once

// General simplex in the style used by SMT solvers: every constraint row
// becomes a bounded slack variable over unbounded problem variables, and
// strict bounds are handled with infinitesimal (delta) rationals.

#include "chcpre/linarith.hpp"

#include <map>
#include <optional>
#include <vector>

namespace chcpre::detail {

/// r + d*delta for an arbitrarily small positive delta.
struct DeltaRational {
  Rational r = 0;
  Rational d = 0;

  friend bool operator==(const DeltaRational&, const DeltaRational&) = default;
  friend bool operator<(const DeltaRational& a, const DeltaRational& b) {
    return a.r < b.r || (a.r == b.r && a.d < b.d);
  }
  friend bool operator>(const DeltaRational& a, const DeltaRational& b) {
    return b < a;
  }
  friend bool operator<=(const DeltaRational& a, const DeltaRational& b) {
    return !(b < a);
  }
  friend bool operator>=(const DeltaRational& a, const DeltaRational& b) {
    return !(a < b);
  }
};

enum class RowKind { Le, Lt, Eq };

class Simplex {
 public:
  /// Adds `sum(terms) kind rhs`.
  void add_row(const std::vector<LinConstraint::Term>& terms, RowKind kind,
               const Rational& rhs);
  void add(const LinConstraint& c) {
    add_row(c.terms(), c.rel() == Rel::Eq ? RowKind::Eq : RowKind::Le, c.rhs());
  }

  bool check();

  /// Rational model (delta instantiated) after a successful check.
  std::map<Var, Rational> model() const;

 private:
  int column(Var v);
  void build();
  void pivot(std::size_t row, int entering);
  void update_nonbasic(int var, const DeltaRational& value);

  struct PendingRow {
    std::vector<std::pair<int, Rational>> coeffs;
    std::optional<DeltaRational> lower, upper;
  };

  std::map<Var, int> columns_;
  std::vector<Var> column_vars_;
  std::vector<PendingRow> pending_;
  bool infeasible_ = false;

  // tableau: basic_[r] = sum_j rows_[r][j] * x_j over non-basic j
  std::size_t nvars_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<int> basic_;
  std::vector<int> row_of_;
  std::vector<DeltaRational> value_;
  std::vector<std::optional<DeltaRational>> lower_, upper_;
};

}  // namespace chcpre::detail
