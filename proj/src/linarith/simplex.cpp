#include "simplex.hpp"

#include <algorithm>

namespace chcpre::detail {

namespace {

DeltaRational operator+(const DeltaRational& a, const DeltaRational& b) {
  return {a.r + b.r, a.d + b.d};
}
DeltaRational operator-(const DeltaRational& a, const DeltaRational& b) {
  return {a.r - b.r, a.d - b.d};
}
DeltaRational operator*(const DeltaRational& a, const Rational& k) {
  return {a.r * k, a.d * k};
}

void tighten_lower(std::optional<DeltaRational>& slot, const DeltaRational& v) {
  if (!slot || *slot < v) slot = v;
}
void tighten_upper(std::optional<DeltaRational>& slot, const DeltaRational& v) {
  if (!slot || v < *slot) slot = v;
}

}  // namespace

int Simplex::column(Var v) {
  auto [it, inserted] = columns_.emplace(v, static_cast<int>(column_vars_.size()));
  if (inserted) column_vars_.push_back(v);
  return it->second;
}

void Simplex::add_row(const std::vector<LinConstraint::Term>& terms,
                      RowKind kind, const Rational& rhs) {
  if (terms.empty()) {
    bool ok = kind == RowKind::Eq ? rhs == 0
              : kind == RowKind::Le ? rhs >= 0
                                    : rhs > 0;
    if (!ok) infeasible_ = true;
    return;
  }
  PendingRow row;
  for (const auto& [v, k] : terms) row.coeffs.emplace_back(column(v), Rational(k));
  DeltaRational bound{rhs, kind == RowKind::Lt ? Rational(-1) : Rational(0)};
  row.upper = bound;
  if (kind == RowKind::Eq) row.lower = bound;
  pending_.push_back(std::move(row));
}

void Simplex::build() {
  const std::size_t ncols = column_vars_.size();
  lower_.assign(ncols, std::nullopt);
  upper_.assign(ncols, std::nullopt);

  // Single-variable rows become bounds on the variable itself.
  std::vector<const PendingRow*> general;
  for (const auto& row : pending_) {
    if (row.coeffs.size() != 1) {
      general.push_back(&row);
      continue;
    }
    const auto& [col, k] = row.coeffs.front();
    Rational inv = 1 / k;
    auto scale = [&](const DeltaRational& b) { return b * inv; };
    if (k > 0) {
      if (row.upper) tighten_upper(upper_[col], scale(*row.upper));
      if (row.lower) tighten_lower(lower_[col], scale(*row.lower));
    } else {
      if (row.upper) tighten_lower(lower_[col], scale(*row.upper));
      if (row.lower) tighten_upper(upper_[col], scale(*row.lower));
    }
  }

  nvars_ = ncols + general.size();
  lower_.resize(nvars_);
  upper_.resize(nvars_);
  value_.assign(nvars_, DeltaRational{});
  row_of_.assign(nvars_, -1);
  rows_.clear();
  basic_.clear();

  for (std::size_t c = 0; c < ncols; ++c) {
    if (lower_[c] && upper_[c] && *upper_[c] < *lower_[c]) {
      infeasible_ = true;
      return;
    }
    if (lower_[c]) value_[c] = *lower_[c];
    else if (upper_[c]) value_[c] = *upper_[c];
  }

  for (std::size_t i = 0; i < general.size(); ++i) {
    const int slack = static_cast<int>(ncols + i);
    std::vector<Rational> row(nvars_);
    DeltaRational val;
    for (const auto& [col, k] : general[i]->coeffs) {
      row[col] += k;
      val = val + value_[col] * k;
    }
    lower_[slack] = general[i]->lower;
    upper_[slack] = general[i]->upper;
    value_[slack] = val;
    row_of_[slack] = static_cast<int>(rows_.size());
    basic_.push_back(slack);
    rows_.push_back(std::move(row));
  }
}

void Simplex::update_nonbasic(int var, const DeltaRational& value) {
  DeltaRational delta = value - value_[var];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Rational& a = rows_[r][var];
    if (a != 0) value_[basic_[r]] = value_[basic_[r]] + delta * a;
  }
  value_[var] = value;
}

void Simplex::pivot(std::size_t r, int entering) {
  const int leaving = basic_[r];
  std::vector<Rational>& row = rows_[r];
  Rational a = row[entering];
  // leaving = a*entering + rest  =>  entering = (leaving - rest) / a
  Rational inv = 1 / a;
  for (std::size_t j = 0; j < nvars_; ++j) {
    if (row[j] != 0) row[j] = -row[j] * inv;
  }
  row[entering] = 0;
  row[leaving] = inv;

  for (std::size_t s = 0; s < rows_.size(); ++s) {
    if (s == r) continue;
    Rational c = rows_[s][entering];
    if (c == 0) continue;
    std::vector<Rational>& other = rows_[s];
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (row[j] != 0) other[j] += c * row[j];
    }
    other[entering] = 0;
  }
  basic_[r] = entering;
  row_of_[entering] = static_cast<int>(r);
  row_of_[leaving] = -1;
}

bool Simplex::check() {
  if (infeasible_) return false;
  build();
  if (infeasible_) return false;

  for (;;) {
    // Bland's rule: smallest violating basic variable.
    int violating = -1;
    bool below = false;
    for (std::size_t v = 0; v < nvars_; ++v) {
      int r = row_of_[v];
      if (r < 0) continue;
      if (lower_[v] && value_[v] < *lower_[v]) {
        violating = static_cast<int>(v);
        below = true;
        break;
      }
      if (upper_[v] && value_[v] > *upper_[v]) {
        violating = static_cast<int>(v);
        below = false;
        break;
      }
    }
    if (violating < 0) return true;

    const std::size_t r = static_cast<std::size_t>(row_of_[violating]);
    const std::vector<Rational>& row = rows_[r];
    int entering = -1;
    for (std::size_t j = 0; j < nvars_; ++j) {
      const Rational& a = row[j];
      if (a == 0 || row_of_[j] >= 0) continue;
      bool can_increase = !upper_[j] || value_[j] < *upper_[j];
      bool can_decrease = !lower_[j] || value_[j] > *lower_[j];
      bool ok = below ? ((a > 0 && can_increase) || (a < 0 && can_decrease))
                      : ((a < 0 && can_increase) || (a > 0 && can_decrease));
      if (ok) {
        entering = static_cast<int>(j);
        break;
      }
    }
    if (entering < 0) return false;

    const DeltaRational target = below ? *lower_[violating] : *upper_[violating];
    const Rational& a = row[entering];
    DeltaRational theta = (target - value_[violating]) * (1 / a);
    update_nonbasic(entering, value_[entering] + theta);
    pivot(r, entering);
  }
}

std::map<Var, Rational> Simplex::model() const {
  // Pick a concrete delta small enough for every bound.
  Rational delta = 1;
  auto constrain = [&](const DeltaRational& lo, const DeltaRational& hi) {
    // need lo.r + lo.d*delta <= hi.r + hi.d*delta
    if (lo.r < hi.r && lo.d > hi.d) {
      Rational limit = (hi.r - lo.r) / (lo.d - hi.d);
      if (limit < delta) delta = limit;
    }
  };
  for (std::size_t v = 0; v < nvars_; ++v) {
    if (lower_[v]) constrain(*lower_[v], value_[v]);
    if (upper_[v]) constrain(value_[v], *upper_[v]);
  }
  delta /= 2;
  std::map<Var, Rational> out;
  for (std::size_t c = 0; c < column_vars_.size(); ++c) {
    out[column_vars_[c]] = value_[c].r + value_[c].d * delta;
  }
  return out;
}

}  // namespace chcpre::detail
