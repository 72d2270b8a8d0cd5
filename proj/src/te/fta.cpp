#include "chcpre/fta.hpp"

#include "chcpre/deadline.hpp"

#include <algorithm>
#include <functional>

namespace chcpre {

std::size_t Fta::add_state(std::string name, std::string of_pred) {
  states.push_back(std::move(name));
  pred.push_back(std::move(of_pred));
  return states.size() - 1;
}

std::set<std::size_t> Fta::run(const TraceTree& t) const {
  std::vector<std::set<std::size_t>> kids;
  for (const auto& c : t.children) kids.push_back(run(c));
  std::set<std::size_t> out;
  for (const auto& tr : transitions) {
    if (tr.symbol != t.clause || tr.args.size() != kids.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < kids.size() && ok; ++i) ok = kids[i].contains(tr.args[i]);
    if (ok) out.insert(tr.target);
  }
  return out;
}

bool Fta::accepts(const TraceTree& t) const {
  for (std::size_t s : run(t))
    if (finals.contains(s)) return true;
  return false;
}

Fta program_to_fta(const Program& p) {
  Fta f;
  std::map<std::string, std::size_t> idx;
  for (const auto& pred : p.predicates()) idx[pred] = f.add_state(pred, pred);
  for (const auto& c : p.clauses) {
    Fta::Transition tr{c.id, {}, idx.at(c.head_pred())};
    for (const auto& b : c.body) tr.args.push_back(idx.at(b.pred));
    f.transitions.push_back(std::move(tr));
  }
  f.finals.insert(idx.at(kFalse));
  return f;
}

Fta trace_to_fta(const TraceTree& t) {
  Fta f;
  std::function<std::size_t(const TraceTree&)> go = [&](const TraceTree& n) {
    Fta::Transition tr{n.clause, {}, 0};
    for (const auto& c : n.children) tr.args.push_back(go(c));
    std::size_t target = f.add_state("n" + std::to_string(f.states.size() + 1), "");
    tr.target = target;
    f.transitions.push_back(std::move(tr));
    return target;
  };
  std::size_t root = go(t);
  f.finals.insert(root);
  return f;
}

namespace {

using StateSet = std::set<std::size_t>;

/// Transitions grouped by symbol for the subset step.
struct SubsetStep {
  std::map<std::string, std::vector<const Fta::Transition*>> by_symbol;

  explicit SubsetStep(const Fta& a) {
    for (const auto& tr : a.transitions) by_symbol[tr.symbol].push_back(&tr);
  }

  StateSet operator()(const std::string& symbol, const std::vector<const StateSet*>& args) const {
    StateSet out;
    auto it = by_symbol.find(symbol);
    if (it == by_symbol.end()) return out;
    for (const auto* tr : it->second) {
      if (tr->args.size() != args.size()) continue;
      bool ok = true;
      for (std::size_t i = 0; i < args.size() && ok; ++i) ok = args[i]->contains(tr->args[i]);
      if (ok) out.insert(tr->target);
    }
    return out;
  }
};

/// Calls `visit` for every tuple choosing one element per pool.
void for_each_tuple(const std::vector<std::vector<std::size_t>>& pools,
                    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pick(pools.size());
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == pools.size()) {
      visit(pick);
      return;
    }
    for (std::size_t x : pools[i]) {
      pick[i] = x;
      go(i + 1);
    }
  };
  go(0);
}

std::string set_name(const StateSet& s) {
  std::string out = "{";
  for (std::size_t x : s) out += (out.size() > 1 ? "," : "") + std::to_string(x);
  return out + "}";
}

}  // namespace

Fta determinize(const Fta& a) {
  SubsetStep step(a);
  std::set<std::string> symbols;
  std::map<std::string, std::size_t> arity;
  for (const auto& tr : a.transitions) {
    symbols.insert(tr.symbol);
    arity[tr.symbol] = tr.args.size();
  }
  Fta d;
  std::vector<StateSet> sets;
  std::map<StateSet, std::size_t> index;
  std::set<std::tuple<std::string, std::vector<std::size_t>>> seen;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& sym : symbols) {
      std::vector<std::vector<std::size_t>> pools(arity[sym]);
      for (auto& pool : pools)
        for (std::size_t i = 0; i < sets.size(); ++i) pool.push_back(i);
      for_each_tuple(pools, [&](const std::vector<std::size_t>& args) {
        if (!seen.insert({sym, args}).second) return;
        std::vector<const StateSet*> in;
        for (std::size_t x : args) in.push_back(&sets[x]);
        StateSet out = step(sym, in);
        if (out.empty()) return;
        auto [it, fresh] = index.try_emplace(out, sets.size());
        if (fresh) {
          sets.push_back(out);
          d.add_state(set_name(out), "");
          changed = true;
        }
        d.transitions.push_back({sym, args, it->second});
      });
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t s : sets[i])
      if (a.finals.contains(s)) d.finals.insert(i);
  return d;
}

Fta difference(const Fta& a, const Fta& b) {
  SubsetStep step(b);
  struct PState {
    std::size_t left;
    StateSet right;
  };
  std::vector<PState> ps;
  std::map<std::pair<std::size_t, StateSet>, std::size_t> index;
  std::vector<std::vector<std::size_t>> by_left(a.states.size());
  struct PTrans {
    std::size_t origin;  // index of the a-transition
    std::vector<std::size_t> args;
    std::size_t target;
  };
  std::vector<PTrans> trans;
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ti = 0; ti < a.transitions.size(); ++ti) {
      check_deadline();
      const auto& tr = a.transitions[ti];
      std::vector<std::vector<std::size_t>> pools;
      for (std::size_t s : tr.args) pools.push_back(by_left[s]);
      for_each_tuple(pools, [&](const std::vector<std::size_t>& args) {
        if (!seen.insert({ti, args}).second) return;
        std::vector<const StateSet*> in;
        for (std::size_t x : args) in.push_back(&ps[x].right);
        StateSet right = step(tr.symbol, in);
        auto [it, fresh] = index.try_emplace({tr.target, right}, ps.size());
        if (fresh) {
          ps.push_back({tr.target, right});
          by_left[tr.target].push_back(it->second);
          changed = true;
        }
        trans.push_back({ti, args, it->second});
      });
    }
  }

  auto is_final = [&](std::size_t x) {
    if (!a.finals.contains(ps[x].left)) return false;
    for (std::size_t s : ps[x].right)
      if (b.finals.contains(s)) return false;
    return true;
  };
  // keep states that occur in some accepted tree
  std::vector<bool> useful(ps.size(), false);
  for (std::size_t x = 0; x < ps.size(); ++x) useful[x] = is_final(x);
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : trans) {
      if (!useful[t.target]) continue;
      for (std::size_t x : t.args)
        if (!useful[x]) useful[x] = changed = true;
    }
  }

  Fta out;
  std::vector<std::size_t> renum(ps.size(), 0);
  std::map<std::string, std::size_t> counter;
  for (std::size_t x = 0; x < ps.size(); ++x) {
    if (!useful[x]) continue;
    const std::string& pred = a.pred[ps[x].left];
    std::string name = is_final(x) ? pred : pred + "__" + std::to_string(++counter[pred]);
    renum[x] = out.add_state(name, pred);
    if (is_final(x)) out.finals.insert(renum[x]);
  }
  std::stable_sort(trans.begin(), trans.end(),
                   [](const PTrans& x, const PTrans& y) { return x.origin < y.origin; });
  for (const auto& t : trans) {
    if (!useful[t.target]) continue;
    Fta::Transition nt{a.transitions[t.origin].symbol, {}, renum[t.target]};
    for (std::size_t x : t.args) nt.args.push_back(renum[x]);
    out.transitions.push_back(std::move(nt));
  }
  return out;
}

FtaProgram fta_to_program(const Fta& f, const Program& p) {
  FtaProgram out;
  Program& q = out.program;
  q.initial = p.initial;
  q.initial_arg_names = p.initial_arg_names;
  q.original_init = p.original_init;
  auto fail = [] { throw std::invalid_argument("automaton not derived from program"); };
  for (std::size_t s = 0; s < f.states.size(); ++s) {
    const std::string& pred = f.pred[s];
    if (pred == kFalse) continue;
    auto ar = p.arity.find(pred);
    if (ar == p.arity.end()) fail();
    q.arity[f.states[s]] = ar->second;
    q.origin[f.states[s]] = p.origin_of(pred);
    if (p.is_initial(pred)) q.initial_versions.insert(f.states[s]);
  }
  std::map<std::string, std::size_t> copies;
  for (const auto& tr : f.transitions) {
    const Clause* c = p.find_clause(tr.symbol);
    if (c == nullptr || c->body.size() != tr.args.size() || c->head_pred() != f.pred[tr.target]) fail();
    Clause d = *c;
    for (std::size_t i = 0; i < tr.args.size(); ++i) {
      if (f.pred[tr.args[i]] != c->body[i].pred) fail();
      d.body[i].pred = f.states[tr.args[i]];
    }
    if (d.head) d.head->pred = f.states[tr.target];
    std::size_t k = ++copies[c->id];
    if (k > 1) d.id = c->id + "__" + std::to_string(k);
    out.provenance[d.id] = c->id;
    q.clauses.push_back(std::move(d));
  }
  return out;
}

TeResult eliminate_trace(const Program& p, const TraceTree& t) {
  Fta a = program_to_fta(p);
  if (!a.accepts(t)) throw std::invalid_argument("trace not in program language");
  TeResult out;
  AndTree tree = instantiate(p, t);
  out.feasible = feasible(tree);
  if (out.feasible) out.theta = initial_projection(p, tree);
  FtaProgram fp = fta_to_program(difference(a, trace_to_fta(t)), p);
  out.program = std::move(fp.program);
  out.provenance = std::move(fp.provenance);
  return out;
}

}  // namespace chcpre
