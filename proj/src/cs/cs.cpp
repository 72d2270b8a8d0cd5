#include "chcpre/cs.hpp"

#include "chcpre/deadline.hpp"

#include <algorithm>

namespace chcpre {

namespace {

std::vector<Var> positions(std::size_t n) {
  std::vector<Var> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Var{static_cast<std::uint32_t>(i)});
  return out;
}

std::string source_of(const std::string& qa_pred) {
  return qa_pred.substr(0, qa_pred.size() - 2);
}

}  // namespace

InvariantMap analyze(const QaProgram& qa, const CsOptions& opts) {
  const Program& q = qa.program;
  std::set<std::string> cyclic = dependency_graph(q).recursive();
  std::map<std::string, Polyhedron> inv;
  std::map<std::string, std::size_t> updates;
  for (const auto& [pred, n] : q.arity) inv.emplace(pred, Polyhedron::bottom(positions(n)));

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : q.clauses) {
      check_deadline();
      Conj body = c.constr;
      bool dead = false;
      for (const auto& b : c.body) {
        const Polyhedron& bi = inv.at(b.pred);
        if (bi.is_bottom()) {
          dead = true;
          break;
        }
        body.add(from_positional(bi.constr(), b.args));
      }
      if (dead) continue;
      const Atom& h = *c.head;
      VarSet keep(h.args.begin(), h.args.end());
      Conj shadow = project(body, keep);
      if (shadow.is_bottom()) continue;
      Polyhedron got = Polyhedron::of(positions(h.args.size()), to_positional(shadow, h.args));
      Polyhedron& cur = inv.at(h.pred);
      if (includes(cur, got)) continue;
      Polyhedron next = join(cur, got);
      std::size_t& k = updates[h.pred];
      if (cyclic.contains(h.pred) && k >= opts.widening_delay && !cur.is_bottom())
        next = widen(cur, next);
      ++k;
      cur = std::move(next);
      changed = true;
    }
  }

  InvariantMap out;
  for (const auto& [pred, poly] : inv) {
    if (pred.ends_with("#q")) continue;
    std::string src = source_of(pred);
    out.emplace(src, PredInvariant{inv.at(query_pred(src)), poly});
  }
  return out;
}

namespace {

/// Drops clauses using undefined predicates and clauses whose head cannot
/// reach false, until nothing changes.
void prune_useless(std::vector<Clause>& clauses, std::vector<std::string>& deleted) {
  for (;;) {
    std::set<std::string> defined;
    for (const auto& c : clauses) defined.insert(c.head_pred());
    std::set<std::string> reach{kFalse};
    std::vector<std::string> work{kFalse};
    // walk backwards from false: preds occurring in bodies of reaching clauses
    std::map<std::string, std::set<std::string>> callees;
    for (const auto& c : clauses)
      for (const auto& b : c.body) callees[c.head_pred()].insert(b.pred);
    while (!work.empty()) {
      std::string x = work.back();
      work.pop_back();
      for (const auto& y : callees[x])
        if (reach.insert(y).second) work.push_back(y);
    }
    std::size_t before = clauses.size();
    std::vector<Clause> kept;
    for (auto& c : clauses) {
      bool ok = reach.contains(c.head_pred());
      for (const auto& b : c.body) ok = ok && defined.contains(b.pred);
      if (ok)
        kept.push_back(std::move(c));
      else
        deleted.push_back(c.id);
    }
    clauses = std::move(kept);
    if (clauses.size() == before) return;
  }
}

}  // namespace

CsResult strengthen(const Program& p, const InvariantMap& inv) {
  CsResult out;
  out.invariants = inv;
  std::vector<Clause> kept;
  auto ans_of = [&](const std::string& pred) -> const Polyhedron* {
    auto it = inv.find(pred);
    return it == inv.end() ? nullptr : &it->second.ans;
  };
  for (const auto& c : p.clauses) {
    check_deadline();
    auto head_inv = inv.find(c.head_pred());
    bool dead = head_inv == inv.end() || head_inv->second.call.is_bottom();
    Conj constr = c.constr;
    for (const auto& b : c.body) {
      const Polyhedron* a = ans_of(b.pred);
      if (a == nullptr || a->is_bottom()) {
        dead = true;
        break;
      }
      constr.add(from_positional(a->constr(), b.args));
    }
    if (!dead && c.head && c.is_fact()) {
      const Polyhedron* a = ans_of(c.head->pred);
      if (a == nullptr || a->is_bottom())
        dead = true;
      else
        constr.add(from_positional(a->constr(), c.head->args));
    }
    // the call invariant only decides deletion; it is not conjoined
    if (!dead && c.head && !satisfiable(constr & from_positional(head_inv->second.call.constr(), c.head->args)))
      dead = true;
    if (!dead) {
      try {
        constr = simplify(constr);
      } catch (const std::invalid_argument&) {
        dead = true;
      }
    }
    if (dead) {
      out.deleted.push_back(c.id);
      continue;
    }
    Clause d = c;
    d.constr = std::move(constr);
    kept.push_back(std::move(d));
  }
  prune_useless(kept, out.deleted);

  Program& q = out.program;
  q = p;
  q.clauses = std::move(kept);
  return out;
}

CsResult specialise(const Program& p, const CsOptions& opts) {
  return strengthen(p, analyze(qa_transform(p), opts));
}

std::string dump_invariants(const InvariantMap& inv) {
  std::string out;
  VarNamer names = positional_namer();
  for (const auto& [pred, pi] : inv) {
    out += pred + ": call=" + pi.call.to_string(names) + "; ans=" + pi.ans.to_string(names) + "\n";
  }
  return out;
}

}  // namespace chcpre
