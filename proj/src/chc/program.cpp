#include "chcpre/chc.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chcpre {

Var Clause::fresh_var(const std::string& hint) {
  std::string name = hint;
  auto used = [&](const std::string& n) {
    return std::find(var_names.begin(), var_names.end(), n) != var_names.end();
  };
  for (int k = 1; used(name); ++k) name = hint + "_" + std::to_string(k);
  var_names.push_back(name);
  return Var{static_cast<std::uint32_t>(var_names.size() - 1)};
}

VarNamer Clause::namer() const {
  return [names = var_names](Var v) {
    return v.id < names.size() ? names[v.id] : default_var_name(v);
  };
}

VarSet Clause::head_vars() const {
  VarSet vs;
  if (head) vs.insert(head->args.begin(), head->args.end());
  return vs;
}

const std::string& Program::origin_of(const std::string& pred) const {
  auto it = origin.find(pred);
  return it == origin.end() ? pred : it->second;
}

std::vector<const Clause*> Program::clauses_of(const std::string& pred) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.head_pred() == pred) out.push_back(&c);
  return out;
}

std::vector<const Clause*> Program::initial_clauses() const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (is_initial_clause(c)) out.push_back(&c);
  return out;
}

const Clause* Program::find_clause(const std::string& id) const {
  for (const auto& c : clauses)
    if (c.id == id) return &c;
  return nullptr;
}

std::set<std::string> Program::predicates() const {
  std::set<std::string> out{kFalse};
  for (const auto& [p, n] : arity) out.insert(p);
  return out;
}

void Program::validate() const {
  std::set<std::string> ids;
  for (const auto& c : clauses) {
    if (!ids.insert(c.id).second)
      throw std::invalid_argument("duplicate clause id '" + c.id + "'");
    auto check = [&](const Atom& a) {
      if (a.pred == kFalse) throw std::invalid_argument("false in body of clause " + c.id);
      auto it = arity.find(a.pred);
      if (it == arity.end() || it->second != a.args.size())
        throw std::invalid_argument("arity mismatch for '" + a.pred + "' in clause " + c.id);
      for (Var v : a.args)
        if (v.id >= c.num_vars())
          throw std::invalid_argument("unknown variable in clause " + c.id);
    };
    if (c.head) check(*c.head);
    for (const auto& b : c.body) check(b);
  }
}

// --- printing -----------------------------------------------------------------

namespace {

std::string print_atom(const Atom& a, const Clause& c) {
  std::string out = a.pred;
  if (a.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += c.var_names[a.args[i].id];
  }
  return out + ")";
}

}  // namespace

std::string print_clause(const Clause& c) {
  std::string out = c.id + ". " + (c.head ? print_atom(*c.head, c) : kFalse);
  std::vector<std::string> items;
  if (c.constr.is_bottom()) {
    items.push_back("1 =< 0");
  } else {
    VarNamer namer = c.namer();
    for (const auto& k : c.constr.constraints()) items.push_back(k.to_string(namer));
  }
  for (const auto& b : c.body) items.push_back(print_atom(b, c));
  if (!items.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += items[i];
    }
  }
  return out + ".";
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& v : p.initial_versions) {
    auto it = p.arity.find(v);
    if (it == p.arity.end()) continue;
    out += ":- initial(" + v + "/" + std::to_string(it->second) + ").\n";
  }
  for (const auto& c : p.clauses) out += print_clause(c) + "\n";
  return out;
}

// --- dependency graph -----------------------------------------------------------

DependencyGraph dependency_graph(const Program& p) {
  DependencyGraph g;
  g.nodes = p.predicates();
  for (const auto& c : p.clauses)
    for (const auto& b : c.body) g.succ[b.pred].insert(c.head_pred());
  return g;
}

bool DependencyGraph::has_edge(const std::string& from, const std::string& to) const {
  auto it = succ.find(from);
  return it != succ.end() && it->second.contains(to);
}

std::vector<std::vector<std::string>> DependencyGraph::sccs() const {
  // Tarjan's algorithm.
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    if (auto it = succ.find(v); it != succ.end()) {
      for (const auto& w : it->second) {
        if (!index.contains(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (const auto& n : nodes)
    if (!index.contains(n)) visit(n);
  return out;
}

std::set<std::string> DependencyGraph::recursive() const {
  std::set<std::string> out;
  for (const auto& comp : sccs()) {
    if (comp.size() > 1 || has_edge(comp.front(), comp.front()))
      out.insert(comp.begin(), comp.end());
  }
  return out;
}

bool check_initial_coverage(const Program& p) {
  // Predicates derivable without any initial clause.
  std::set<std::string> derivable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.clauses) {
      const std::string& h = c.head_pred();
      if (p.is_initial_clause(c) || derivable.contains(h)) continue;
      bool all = std::all_of(c.body.begin(), c.body.end(), [&](const Atom& a) {
        return derivable.contains(a.pred);
      });
      if (all) {
        derivable.insert(h);
        changed = true;
      }
    }
  }
  return !derivable.contains(kFalse);
}

std::string unique_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.contains(base)) return base;
  for (int k = 2;; ++k) {
    std::string n = base + "_" + std::to_string(k);
    if (!taken.contains(n)) return n;
  }
}

std::string positional_name(std::size_t i) {
  std::string name(1, static_cast<char>('A' + i % 26));
  if (i >= 26) name += std::to_string(i / 26);
  return name;
}

VarNamer positional_namer() {
  return [](Var v) { return positional_name(v.id); };
}

Conj to_positional(const Conj& c, const std::vector<Var>& args) {
  std::map<Var, Var> m;
  for (std::size_t i = 0; i < args.size(); ++i) m[args[i]] = Var{static_cast<std::uint32_t>(i)};
  return c.rename([&](Var v) {
    auto it = m.find(v);
    if (it == m.end()) throw std::logic_error("constraint mentions a non-argument variable");
    return it->second;
  });
}

Conj from_positional(const Conj& c, const std::vector<Var>& args) {
  return c.rename([&](Var v) {
    if (v.id >= args.size()) throw std::logic_error("positional variable out of range");
    return args[v.id];
  });
}

void compact(Clause& c) {
  std::vector<bool> used(c.num_vars(), false);
  auto mark = [&](Var v) { used[v.id] = true; };
  if (c.head)
    for (Var v : c.head->args) mark(v);
  for (const auto& b : c.body)
    for (Var v : b.args) mark(v);
  for (Var v : c.constr.vars()) mark(v);
  std::vector<Var> map(c.num_vars());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) continue;
    map[i] = Var{static_cast<std::uint32_t>(names.size())};
    names.push_back(c.var_names[i]);
  }
  auto f = [&](Var v) { return map[v.id]; };
  if (c.head)
    for (Var& v : c.head->args) v = f(v);
  for (auto& b : c.body)
    for (Var& v : b.args) v = f(v);
  c.constr = c.constr.rename(f);
  c.var_names = std::move(names);
}

}  // namespace chcpre
