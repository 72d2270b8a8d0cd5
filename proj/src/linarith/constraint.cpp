#include "chcpre/linarith.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <sstream>

namespace chcpre {

std::string default_var_name(Var v) { return "X" + std::to_string(v.id); }

// --- LinExpr ----------------------------------------------------------------

LinExpr LinExpr::var(Var v, Rational coeff) {
  LinExpr e;
  if (coeff != 0) e.coeffs_.emplace(v, std::move(coeff));
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& [v, k] : other.coeffs_) {
    Rational& slot = coeffs_[v];
    slot += k;
    if (slot == 0) coeffs_.erase(v);
  }
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  LinExpr neg = other;
  neg *= -1;
  return *this += neg;
}

LinExpr& LinExpr::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs_) c *= k;
  constant_ *= k;
  return *this;
}

// --- LinConstraint ------------------------------------------------------------

namespace {

int cmp(const Integer& a, const Integer& b) {
  int r = mpz_cmp(a.get_mpz_t(), b.get_mpz_t());
  return (r > 0) - (r < 0);
}

/// Scales `e rel 0` to integer coefficients.
LinConstraint from_expr(const LinExpr& e, Rel rel, const Integer& shift = 0) {
  Integer lcm = 1;
  for (const auto& [v, k] : e.coeffs()) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), k.get_den_mpz_t());
  }
  mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.constant().get_den_mpz_t());
  std::vector<LinConstraint::Term> terms;
  for (const auto& [v, k] : e.coeffs()) {
    Rational scaled = k * lcm;
    terms.emplace_back(v, scaled.get_num());
  }
  Rational rhs = -e.constant() * lcm;
  return LinConstraint(std::move(terms), rel, rhs.get_num() + shift);
}

}  // namespace

LinConstraint::LinConstraint(std::vector<Term> terms, Rel rel, Integer rhs)
    : terms_(std::move(terms)), rel_(rel), rhs_(std::move(rhs)) {
  normalize();
}

void LinConstraint::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first) {
      merged.back().second += t.second;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.second == 0; });
  terms_ = std::move(merged);

  if (terms_.empty()) {
    bool holds = rel_ == Rel::Eq ? rhs_ == 0 : rhs_ >= 0;
    rel_ = Rel::Le;
    rhs_ = holds ? 0 : -1;
    return;
  }
  Integer g = 0;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
  }
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), rhs_.get_mpz_t());
  if (g > 1) {
    for (auto& t : terms_) mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(rhs_.get_mpz_t(), rhs_.get_mpz_t(), g.get_mpz_t());
  }
  if (rel_ == Rel::Eq && terms_.front().second < 0) {
    for (auto& t : terms_) t.second = -t.second;
    rhs_ = -rhs_;
  }
}

LinConstraint LinConstraint::le(const LinExpr& lhs, const LinExpr& rhs) {
  return from_expr(lhs - rhs, Rel::Le);
}
LinConstraint LinConstraint::ge(const LinExpr& lhs, const LinExpr& rhs) {
  return from_expr(rhs - lhs, Rel::Le);
}
LinConstraint LinConstraint::eq(const LinExpr& lhs, const LinExpr& rhs) {
  return from_expr(lhs - rhs, Rel::Eq);
}
LinConstraint LinConstraint::lt(const LinExpr& lhs, const LinExpr& rhs) {
  // integer scaled: t < b  <=>  t <= b - 1
  return from_expr(lhs - rhs, Rel::Le, -1);
}
LinConstraint LinConstraint::gt(const LinExpr& lhs, const LinExpr& rhs) {
  return lt(rhs, lhs);
}
LinConstraint LinConstraint::falsum() { return LinConstraint({}, Rel::Le, -1); }

Integer LinConstraint::coeff(Var v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Term& t, Var x) { return t.first < x; });
  if (it != terms_.end() && it->first == v) return it->second;
  return 0;
}

bool LinConstraint::mentions(Var v) const { return coeff(v) != 0; }

bool LinConstraint::is_tautology() const { return terms_.empty() && rhs_ >= 0; }
bool LinConstraint::is_contradiction() const {
  return terms_.empty() && rhs_ < 0;
}

LinConstraint LinConstraint::rename(const std::function<Var(Var)>& f) const {
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& [v, k] : terms_) t.emplace_back(f(v), k);
  return LinConstraint(std::move(t), rel_, rhs_);
}

LinConstraint LinConstraint::combine(const Integer& a, const LinConstraint& x,
                                     const Integer& b,
                                     const LinConstraint& y) {
  std::vector<Term> t;
  t.reserve(x.terms_.size() + y.terms_.size());
  for (const auto& [v, k] : x.terms_) t.emplace_back(v, a * k);
  for (const auto& [v, k] : y.terms_) t.emplace_back(v, b * k);
  Rel rel = (x.rel_ == Rel::Eq && y.rel_ == Rel::Eq) ? Rel::Eq : Rel::Le;
  return LinConstraint(std::move(t), rel, a * x.rhs_ + b * y.rhs_);
}

LinConstraint LinConstraint::flipped() const {
  std::vector<Term> t;
  for (const auto& [v, k] : terms_) t.emplace_back(v, -k);
  return LinConstraint(std::move(t), rel_, -rhs_);
}

bool LinConstraint::holds_at(const std::map<Var, Rational>& point) const {
  Rational lhs = 0;
  for (const auto& [v, k] : terms_) {
    auto it = point.find(v);
    if (it != point.end()) lhs += k * it->second;
  }
  return rel_ == Rel::Eq ? lhs == rhs_ : lhs <= rhs_;
}

std::string LinConstraint::to_string(const VarNamer& namer) const {
  if (terms_.empty()) return is_tautology() ? "true" : "false";
  bool flip = rel_ == Rel::Le && terms_.front().second < 0;
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k0] : terms_) {
    Integer k = flip ? Integer(-k0) : k0;
    if (first) {
      if (k < 0) os << "-";
    } else {
      os << (k < 0 ? " - " : " + ");
    }
    Integer mag = abs(k);
    if (mag != 1) os << mag.get_str() << "*";
    os << namer(v);
    first = false;
  }
  const char* op = rel_ == Rel::Eq ? " = " : (flip ? " >= " : " =< ");
  os << op << (flip ? Integer(-rhs_) : rhs_).get_str();
  return os.str();
}

std::strong_ordering operator<=>(const LinConstraint& a,
                                 const LinConstraint& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].first <=> b.terms_[i].first; c != 0) return c;
    if (int c = cmp(a.terms_[i].second, b.terms_[i].second); c != 0)
      return c <=> 0;
  }
  if (auto c = a.terms_.size() <=> b.terms_.size(); c != 0) return c;
  if (auto c = static_cast<int>(a.rel_) <=> static_cast<int>(b.rel_); c != 0)
    return c;
  return cmp(a.rhs_, b.rhs_) <=> 0;
}

// --- Conj ---------------------------------------------------------------------

Conj::Conj(std::vector<LinConstraint> cs) : cs_(std::move(cs)) {
  canonicalize();
}

Conj Conj::bottom() { return Conj({LinConstraint::falsum()}); }

void Conj::canonicalize() {
  if (std::any_of(cs_.begin(), cs_.end(),
                  [](const LinConstraint& c) { return c.is_contradiction(); })) {
    cs_ = {LinConstraint::falsum()};
    return;
  }
  std::erase_if(cs_, [](const LinConstraint& c) { return c.is_tautology(); });
  std::sort(cs_.begin(), cs_.end());
  cs_.erase(std::unique(cs_.begin(), cs_.end()), cs_.end());
}

void Conj::add(const LinConstraint& c) {
  cs_.push_back(c);
  canonicalize();
}

void Conj::add(const Conj& other) {
  cs_.insert(cs_.end(), other.cs_.begin(), other.cs_.end());
  canonicalize();
}

Conj Conj::operator&(const Conj& other) const {
  Conj r = *this;
  r.add(other);
  return r;
}

bool Conj::is_bottom() const {
  return cs_.size() == 1 && cs_.front().is_contradiction();
}

VarSet Conj::vars() const {
  VarSet vs;
  for (const auto& c : cs_)
    for (const auto& [v, k] : c.terms()) vs.insert(v);
  return vs;
}

Conj Conj::rename(const std::function<Var(Var)>& f) const {
  std::vector<LinConstraint> out;
  out.reserve(cs_.size());
  for (const auto& c : cs_) out.push_back(c.rename(f));
  return Conj(std::move(out));
}

bool Conj::holds_at(const std::map<Var, Rational>& point) const {
  return std::all_of(cs_.begin(), cs_.end(),
                     [&](const LinConstraint& c) { return c.holds_at(point); });
}

std::string Conj::to_string(const VarNamer& namer) const {
  if (cs_.empty()) return "true";
  std::string out;
  for (const auto& c : cs_) {
    if (!out.empty()) out += ", ";
    out += c.to_string(namer);
  }
  return out;
}

std::string Dnf::to_string(const VarNamer& namer) const {
  if (disjuncts.empty()) return "false";
  std::string out;
  for (const auto& d : disjuncts) {
    if (!out.empty()) out += " ; ";
    out += "(" + d.to_string(namer) + ")";
  }
  return out;
}

bool Dnf::holds_at(const std::map<Var, Rational>& point) const {
  return std::any_of(disjuncts.begin(), disjuncts.end(),
                     [&](const Conj& c) { return c.holds_at(point); });
}

// --- Diagnostics --------------------------------------------------------------

namespace {
thread_local WarningCollector* current_collector = nullptr;
}

WarningCollector::WarningCollector() : previous_(current_collector) {
  current_collector = this;
}

WarningCollector::~WarningCollector() { current_collector = previous_; }

void WarningCollector::emit(std::string msg) {
  if (current_collector != nullptr) {
    auto& w = current_collector->warnings_;
    if (std::find(w.begin(), w.end(), msg) == w.end()) w.push_back(std::move(msg));
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

std::size_t& projection_cap() {
  thread_local std::size_t cap = 2000;
  return cap;
}

}  // namespace chcpre
