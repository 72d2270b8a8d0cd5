#include "chcpre/pe.hpp"

#include "chcpre/deadline.hpp"

#include <deque>

namespace chcpre {

namespace {

void add_property(std::vector<Conj>& props, const Conj& c) {
  if (c.empty() || c.is_bottom()) return;
  for (const auto& q : props)
    if (equivalent(q, c)) return;
  props.push_back(c);
}

void atom_properties(PropertyMap& out, const Conj& phi, const Atom& a) {
  auto& props = out[a.pred];
  VarSet all(a.args.begin(), a.args.end());
  add_property(props, reduce(to_positional(project(phi, all), a.args)));
  for (Var z : a.args) {
    Conj single = reduce(to_positional(project(phi, {z}), a.args));
    add_property(props, single);
  }
}

}  // namespace

PropertyMap gen_properties(const Program& p) {
  PropertyMap out;
  for (const auto& c : p.clauses) {
    if (!satisfiable(c.constr)) continue;
    for (const auto& b : c.body) atom_properties(out, c.constr, b);
    if (c.head) atom_properties(out, c.constr, *c.head);
  }
  return out;
}

namespace {

struct Version {
  std::string name;
  std::string pred;
  Conj constr;  // positional
  std::vector<bool> key;
};

class Evaluator {
 public:
  Evaluator(const Program& p, const PeOptions& opts)
      : p_(p), opts_(opts), props_(gen_properties(p)), recursive_(dependency_graph(p).recursive()) {
    for (const auto& c : p.clauses) by_pred_[c.head_pred()].push_back(&c);
  }

  PeResult run() {
    Program& out = result_.program;
    out.initial = p_.initial;
    out.initial_arg_names = p_.initial_arg_names;
    out.original_init = p_.original_init;
    result_.properties = props_;

    versions_.push_back(Version{kFalse, kFalse, Conj(), {}});
    std::vector<std::size_t> layer{0};
    result_.trace.push_back(PeLayer{{"false :- true."}, {}});
    std::size_t depth = 0;
    while (!layer.empty()) {
      std::vector<std::size_t> next;
      for (std::size_t v : layer) unfold_version(v, depth, next);
      layer = std::move(next);
      ++depth;
      if (!layer.empty()) {
        PeLayer l;
        for (std::size_t v : layer) l.facts.push_back(fact_text(versions_[v]));
        result_.trace.push_back(std::move(l));
      }
    }
    return std::move(result_);
  }

 private:
  static std::string fact_text(const Version& v) {
    std::string out = v.name;
    return out + " :- " + (v.constr.empty() ? std::string("true") : v.constr.to_string(positional_namer())) + ".";
  }

  bool unfoldable(const std::string& pred) const {
    return !p_.is_initial(pred) && !recursive_.contains(pred);
  }

  std::size_t clause_count(const std::string& pred) const {
    auto it = by_pred_.find(pred);
    return it == by_pred_.end() ? 0 : it->second.size();
  }

  /// Replaces body atom `idx` of `w` by the body of `d`; false if unsat.
  static bool resolve(Clause& w, std::size_t idx, const Clause& d) {
    std::vector<Var> map(d.num_vars(), Var{0});
    std::vector<bool> set(d.num_vars(), false);
    const Atom call = w.body[idx];
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      map[d.head->args[i].id] = call.args[i];
      set[d.head->args[i].id] = true;
    }
    for (std::size_t j = 0; j < d.num_vars(); ++j)
      if (!set[j]) map[j] = w.fresh_var(d.var_names[j]);
    auto f = [&](Var v) { return map[v.id]; };
    w.constr.add(d.constr.rename(f));
    std::vector<Atom> body(w.body.begin(), w.body.begin() + idx);
    for (const auto& b : d.body) {
      Atom a{b.pred, {}};
      for (Var v : b.args) a.args.push_back(f(v));
      body.push_back(std::move(a));
    }
    body.insert(body.end(), w.body.begin() + idx + 1, w.body.end());
    w.body = std::move(body);
    return satisfiable(w.constr);
  }

  /// Unfolds `start` until no eligible atom is left; may split.
  std::vector<Clause> unfold(Clause start, bool split) {
    std::vector<Clause> done;
    std::deque<Clause> work{std::move(start)};
    while (!work.empty()) {
      check_deadline();
      Clause w = std::move(work.front());
      work.pop_front();
      std::optional<std::size_t> det, nondet;
      for (std::size_t i = 0; i < w.body.size(); ++i) {
        const std::string& q = w.body[i].pred;
        if (!unfoldable(q)) continue;
        std::size_t n = clause_count(q);
        if (n <= 1 && !det) det = i;
        if (n > 1 && !nondet) nondet = i;
      }
      if (det) {
        const std::string& q = w.body[*det].pred;
        if (clause_count(q) == 0) continue;
        if (resolve(w, *det, *by_pred_.at(q).front())) work.push_front(std::move(w));
        continue;
      }
      if (nondet && split) {
        const auto& alts = by_pred_.at(w.body[*nondet].pred);
        if (done.size() + work.size() + alts.size() <= opts_.split_cap) {
          // keep clause order among the alternatives
          std::vector<Clause> branches;
          for (const Clause* d : alts) {
            Clause b = w;
            if (resolve(b, *nondet, *d)) branches.push_back(std::move(b));
          }
          for (auto it = branches.rbegin(); it != branches.rend(); ++it) work.push_front(std::move(*it));
          continue;
        }
      }
      done.push_back(std::move(w));
    }
    return done;
  }

  std::size_t version_of(const std::string& pred, const Conj& theta, std::vector<std::size_t>& fresh) {
    bool exact = p_.is_initial(pred) && !recursive_.contains(pred);
    Version v{"", pred, Conj(), {}};
    if (exact) {
      v.constr = reduce(theta);
      for (std::size_t i = 0; i < versions_.size(); ++i)
        if (versions_[i].pred == pred && equivalent(versions_[i].constr, v.constr)) return i;
    } else {
      auto it = props_.find(pred);
      if (it != props_.end()) {
        for (const auto& prop : it->second) {
          bool holds = entails(theta, prop);
          v.key.push_back(holds);
          if (holds) v.constr.add(prop);
        }
      }
      v.constr = reduce(v.constr);
      auto found = keyed_.find({pred, v.key});
      if (found != keyed_.end()) return found->second;
    }
    v.name = p_.origin_of(pred) + "_" + std::to_string(++counter_);
    std::size_t idx = versions_.size();
    if (!exact) keyed_[{pred, v.key}] = idx;
    Program& out = result_.program;
    out.arity[v.name] = p_.arity.at(pred);
    out.origin[v.name] = p_.origin_of(pred);
    if (p_.is_initial(pred)) out.initial_versions.insert(v.name);
    versions_.push_back(std::move(v));
    fresh.push_back(idx);
    return idx;
  }

  void unfold_version(std::size_t vi, std::size_t depth, std::vector<std::size_t>& fresh) {
    const std::string pred = versions_[vi].pred;
    const Conj theta = versions_[vi].constr;
    const std::string name = versions_[vi].name;
    auto it = by_pred_.find(pred);
    if (it == by_pred_.end()) return;
    bool split = opts_.split_goal_clauses && pred == kFalse;
    for (const Clause* c : it->second) {
      Clause w = *c;
      if (w.head) w.constr.add(from_positional(theta, w.head->args));
      if (!satisfiable(w.constr)) continue;
      for (Clause& r : unfold(std::move(w), split)) emit(r, name, depth, fresh);
    }
  }

  void emit(Clause& r, const std::string& name, std::size_t depth, std::vector<std::size_t>& fresh) {
    VarSet keep = r.head_vars();
    for (const auto& b : r.body) keep.insert(b.args.begin(), b.args.end());
    Conj constr;
    try {
      constr = simplify(project(r.constr, keep));
    } catch (const std::invalid_argument&) {
      return;  // no integer solutions
    }
    for (auto& b : r.body) {
      VarSet args(b.args.begin(), b.args.end());
      Conj theta = to_positional(project(constr, args), b.args);
      b.pred = versions_[version_of(b.pred, theta, fresh)].name;
    }
    if (r.head) r.head->pred = name;
    r.constr = std::move(constr);
    r.id = "c" + std::to_string(result_.program.clauses.size() + 1);
    compact(r);
    result_.trace[depth].clauses.push_back(print_clause(r));
    result_.program.clauses.push_back(std::move(r));
  }

  const Program& p_;
  PeOptions opts_;
  PropertyMap props_;
  std::set<std::string> recursive_;
  std::map<std::string, std::vector<const Clause*>> by_pred_;
  std::vector<Version> versions_;
  std::map<std::pair<std::string, std::vector<bool>>, std::size_t> keyed_;
  std::size_t counter_ = 0;
  PeResult result_;
};

}  // namespace

PeResult partial_evaluate(const Program& p, const PeOptions& opts) {
  return Evaluator(p, opts).run();
}

std::string dump_trace(const PeResult& r) {
  std::string out;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    out += "-- iteration " + std::to_string(i) + "\n";
    for (const auto& f : r.trace[i].facts) out += "S " + f + "\n";
    for (const auto& c : r.trace[i].clauses) out += "R " + c + "\n";
  }
  return out;
}

}  // namespace chcpre
