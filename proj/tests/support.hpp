#pragma once

#include "chcpre/chc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

namespace testing {

/// Shared variable table for writing constraints as text.
struct Vars {
  std::vector<std::string> names;

  chcpre::Conj operator()(const std::string& text) {
    return chcpre::parse_constraints(text, names);
  }
  chcpre::Var operator[](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return chcpre::Var{static_cast<std::uint32_t>(i)};
    names.push_back(name);
    return chcpre::Var{static_cast<std::uint32_t>(names.size() - 1)};
  }
  chcpre::VarSet set(std::initializer_list<const char*> ns) {
    chcpre::VarSet out;
    for (const char* n : ns) out.insert((*this)[n]);
    return out;
  }
  chcpre::Dnf dnf(std::initializer_list<const char*> disjuncts) {
    chcpre::Dnf d;
    for (const char* t : disjuncts) d.disjuncts.push_back((*this)(t));
    return d;
  }
  chcpre::VarNamer namer() const {
    return [n = names](chcpre::Var v) { return n.at(v.id); };
  }
};

/// Table pre-filled with A, B, C, ... as variables 0, 1, 2, ...
inline Vars positional(std::size_t n) {
  Vars v;
  for (std::size_t i = 0; i < n; ++i) v[chcpre::positional_name(i)];
  return v;
}

/// Same head and body predicates, and equivalent constraints once both are
/// projected onto the atom arguments and matched position by position.
inline bool clause_equivalent(const chcpre::Clause& a, const chcpre::Clause& b) {
  using namespace chcpre;
  if (a.head_pred() != b.head_pred() || a.body.size() != b.body.size()) return false;
  std::vector<const Atom*> xa, xb;
  if (a.head) xa.push_back(&*a.head), xb.push_back(&*b.head);
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (a.body[i].pred != b.body[i].pred) return false;
    xa.push_back(&a.body[i]);
    xb.push_back(&b.body[i]);
  }
  // Argument occurrences become shared fresh positions p_k; equal variables
  // across atoms become equalities between positions.
  std::vector<Var> pa, pb;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    pa.insert(pa.end(), xa[i]->args.begin(), xa[i]->args.end());
    pb.insert(pb.end(), xb[i]->args.begin(), xb[i]->args.end());
  }
  auto lift = [](const Clause& c, const std::vector<Var>& occ) {
    std::uint32_t base = static_cast<std::uint32_t>(occ.size());
    Conj out = c.constr.rename([&](Var v) { return Var{base + v.id}; });
    for (std::size_t k = 0; k < occ.size(); ++k)
      out.add(LinConstraint::eq(LinExpr::var(Var{static_cast<std::uint32_t>(k)}) -
                                    LinExpr::var(Var{base + occ[k].id}),
                                LinExpr()));
    VarSet keep;
    for (std::size_t k = 0; k < occ.size(); ++k) keep.insert(Var{static_cast<std::uint32_t>(k)});
    return project(out, keep);
  };
  return equivalent(lift(a, pa), lift(b, pb));
}

/// Each clause of `expected` matches one distinct clause of `actual`.
inline bool program_equivalent(const chcpre::Program& actual, const chcpre::Program& expected) {
  if (actual.clauses.size() != expected.clauses.size()) return false;
  std::vector<bool> used(actual.clauses.size(), false);
  for (const auto& e : expected.clauses) {
    bool found = false;
    for (std::size_t i = 0; i < actual.clauses.size() && !found; ++i) {
      if (!used[i] && clause_equivalent(actual.clauses[i], e)) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

/// Predicate name with a trailing `_<digits>` removed.
inline std::string base_name(const std::string& pred) {
  std::size_t u = pred.rfind('_');
  if (u == std::string::npos || u + 1 == pred.size()) return pred;
  for (std::size_t i = u + 1; i < pred.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(pred[i]))) return pred;
  return pred.substr(0, u);
}

/// program_equivalent under some bijection between predicate names that
/// respects origins (`actual` through its origin map, `expected` by name).
inline bool equivalent_up_to_renaming(const chcpre::Program& actual, const chcpre::Program& expected) {
  using namespace chcpre;
  std::map<std::string, std::vector<std::string>> ga, ge;
  for (const auto& [pred, n] : actual.arity) ga[actual.origin_of(pred)].push_back(pred);
  for (const auto& [pred, n] : expected.arity) ge[base_name(pred)].push_back(pred);
  if (ga.size() != ge.size()) return false;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> groups;
  for (auto& [origin, preds] : ge) {
    auto it = ga.find(origin);
    if (it == ga.end() || it->second.size() != preds.size()) return false;
    std::sort(it->second.begin(), it->second.end());
    groups.emplace_back(preds, it->second);
  }
  std::function<bool(std::size_t, std::map<std::string, std::string>&)> go =
      [&](std::size_t g, std::map<std::string, std::string>& m) {
        if (g == groups.size()) {
          Program renamed = expected;
          for (auto& c : renamed.clauses) {
            if (c.head) c.head->pred = m.at(c.head->pred);
            for (auto& b : c.body) b.pred = m.at(b.pred);
          }
          return program_equivalent(actual, renamed);
        }
        auto targets = groups[g].second;
        do {
          for (std::size_t i = 0; i < targets.size(); ++i) m[groups[g].first[i]] = targets[i];
          if (go(g + 1, m)) return true;
        } while (std::next_permutation(targets.begin(), targets.end()));
        return false;
      };
  std::map<std::string, std::string> m;
  return go(0, m);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(CHCPRE_DATA_DIR) + "/" + name;
}

inline chcpre::Program load(const std::string& name) {
  return chcpre::parse_program(read_file(data_path(name)));
}

}  // namespace testing
