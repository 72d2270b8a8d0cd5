#include "chcpre/derivation.hpp"

#include "chcpre/deadline.hpp"

#include <cctype>
#include <deque>
#include <limits>

namespace chcpre {

// --- trace trees -----------------------------------------------------------------

std::size_t TraceTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::string TraceTree::to_string() const {
  std::string out = clause;
  if (children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ",";
    out += children[i].to_string();
  }
  return out + ")";
}

TraceTree TraceTree::parse(const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  std::function<TraceTree()> node = [&]() -> TraceTree {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) throw std::invalid_argument("malformed trace term at offset " + std::to_string(pos));
    TraceTree t{text.substr(start, pos - start), {}};
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      for (;;) {
        t.children.push_back(node());
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        throw std::invalid_argument("malformed trace term at offset " + std::to_string(pos));
      }
    }
    return t;
  };
  TraceTree t = node();
  skip();
  if (pos != text.size()) throw std::invalid_argument("trailing input in trace term");
  return t;
}

// --- AND-trees ---------------------------------------------------------------------

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

AndTree instantiate_node(const Program& p, const TraceTree& t,
                         const std::vector<Var>* head_args, std::uint32_t& next) {
  const Clause* c = p.find_clause(t.clause);
  if (c == nullptr) throw std::invalid_argument("unknown clause " + t.clause);
  if (t.children.size() != c->body.size())
    throw std::invalid_argument("arity mismatch at clause " + t.clause);
  std::vector<Var> map(c->num_vars(), Var{kUnset});
  if (head_args != nullptr) {
    for (std::size_t i = 0; i < head_args->size(); ++i) map[c->head->args[i].id] = (*head_args)[i];
  }
  for (auto& v : map)
    if (v.id == kUnset) v = Var{next++};
  auto f = [&](Var v) { return map[v.id]; };
  AndTree node{t.clause, std::nullopt, c->constr.rename(f), {}};
  if (c->head) {
    Atom a = *c->head;
    for (Var& v : a.args) v = f(v);
    node.atom = std::move(a);
  }
  for (std::size_t i = 0; i < c->body.size(); ++i) {
    const Clause* child = p.find_clause(t.children[i].clause);
    if (child == nullptr) throw std::invalid_argument("unknown clause " + t.children[i].clause);
    if (child->head_pred() != c->body[i].pred)
      throw std::invalid_argument("clause " + child->id + " does not define " + c->body[i].pred);
    std::vector<Var> args;
    for (Var v : c->body[i].args) args.push_back(f(v));
    node.children.push_back(instantiate_node(p, t.children[i], &args, next));
  }
  return node;
}

void collect(const AndTree& t, std::vector<LinConstraint>& out) {
  out.insert(out.end(), t.constr.constraints().begin(), t.constr.constraints().end());
  for (const auto& c : t.children) collect(c, out);
}

}  // namespace

AndTree instantiate(const Program& p, const TraceTree& t, std::uint32_t* next_var) {
  std::uint32_t next = next_var ? *next_var : 0;
  AndTree out = instantiate_node(p, t, nullptr, next);
  if (next_var) *next_var = next;
  return out;
}

TraceTree strip(const AndTree& t) {
  TraceTree out{t.clause, {}};
  for (const auto& c : t.children) out.children.push_back(strip(c));
  return out;
}

Conj constr_of(const AndTree& t) {
  std::vector<LinConstraint> cs;
  collect(t, cs);
  return Conj(std::move(cs));
}

bool feasible(const AndTree& t) { return satisfiable(constr_of(t)); }

const AndTree* first_initial_node(const Program& p, const AndTree& t) {
  std::deque<const AndTree*> queue{&t};
  while (!queue.empty()) {
    const AndTree* n = queue.front();
    queue.pop_front();
    const Clause* c = p.find_clause(n->clause);
    if (c && p.is_initial_clause(*c)) return n;
    for (const auto& ch : n->children) queue.push_back(&ch);
  }
  return nullptr;
}

std::optional<Conj> initial_projection(const Program& p, const AndTree& t) {
  const AndTree* node = first_initial_node(p, t);
  if (node == nullptr || !node->atom) return std::nullopt;
  const auto& args = node->atom->args;
  VarSet keep(args.begin(), args.end());
  Conj theta = project(constr_of(t), keep);
  std::map<Var, Var> to_pos;
  for (std::size_t i = 0; i < args.size(); ++i) to_pos[args[i]] = Var{static_cast<std::uint32_t>(i)};
  return theta.rename([&](Var v) { return to_pos.at(v); });
}

std::map<std::string, std::size_t> min_sizes(const Program& p) {
  std::map<std::string, std::size_t> size;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.clauses) {
      std::size_t n = 1;
      bool ok = true;
      for (const auto& b : c.body) {
        auto it = size.find(b.pred);
        if (it == size.end()) {
          ok = false;
          break;
        }
        n += it->second;
      }
      if (!ok) continue;
      auto it = size.find(c.head_pred());
      if (it == size.end() || n < it->second) {
        size[c.head_pred()] = n;
        changed = true;
      }
    }
  }
  return size;
}

// --- enumeration -----------------------------------------------------------------

namespace {

struct Goal {
  std::string pred;
  std::vector<Var> args;
};

class Enumerator {
 public:
  Enumerator(const Program& p, std::size_t nodes, bool prune,
             const std::function<bool(const TraceTree&)>& visit)
      : p_(p), nodes_(nodes), prune_(prune), visit_(visit), min_(min_sizes(p)) {
    for (const auto& c : p.clauses) by_pred_[c.head_pred()].push_back(&c);
  }

  void run() {
    auto it = min_.find(kFalse);
    if (it == min_.end() || it->second > nodes_) return;
    std::vector<Goal> open{{kFalse, {}}};
    search(open, Conj(), 0, it->second);
  }

 private:
  /// Returns false to stop the whole enumeration.
  bool search(std::vector<Goal>& open, const Conj& state, std::size_t used, std::size_t pending) {
    check_deadline();
    if (open.empty()) {
      if (used != nodes_) return true;
      return visit_(rebuild());
    }
    Goal g = std::move(open.back());
    open.pop_back();
    std::size_t rest = pending - min_.at(g.pred);
    bool go_on = true;
    auto cl = by_pred_.find(g.pred);
    if (cl != by_pred_.end()) {
      for (const Clause* c : cl->second) {
        std::size_t need = 0;
        bool derivable = true;
        for (const auto& b : c->body) {
          auto m = min_.find(b.pred);
          if (m == min_.end()) {
            derivable = false;
            break;
          }
          need += m->second;
        }
        if (!derivable || used + 1 + need + rest > nodes_) continue;

        std::vector<Var> map(c->num_vars(), Var{kUnset});
        if (c->head)
          for (std::size_t i = 0; i < g.args.size(); ++i) map[c->head->args[i].id] = g.args[i];
        for (auto& v : map)
          if (v.id == kUnset) v = Var{next_var_++};
        auto f = [&](Var v) { return map[v.id]; };

        std::size_t before = open.size();
        for (auto b = c->body.rbegin(); b != c->body.rend(); ++b) {
          Goal child{b->pred, {}};
          for (Var v : b->args) child.args.push_back(f(v));
          open.push_back(std::move(child));
        }
        Conj next_state;
        bool ok = true;
        if (prune_) {
          VarSet keep;
          for (const auto& o : open) keep.insert(o.args.begin(), o.args.end());
          next_state = project(state & c->constr.rename(f), keep);
          ok = !next_state.is_bottom();
        }
        if (ok) {
          choices_.push_back(c);
          go_on = search(open, next_state, used + 1, rest + need);
          choices_.pop_back();
        }
        open.resize(before);
        if (!go_on) break;
      }
    }
    open.push_back(std::move(g));
    return go_on;
  }

  TraceTree rebuild() const {
    std::size_t pos = 0;
    std::function<TraceTree()> node = [&]() {
      const Clause* c = choices_[pos++];
      TraceTree t{c->id, {}};
      for (std::size_t i = 0; i < c->body.size(); ++i) t.children.push_back(node());
      return t;
    };
    return node();
  }

  const Program& p_;
  std::size_t nodes_;
  bool prune_;
  const std::function<bool(const TraceTree&)>& visit_;
  std::map<std::string, std::size_t> min_;
  std::map<std::string, std::vector<const Clause*>> by_pred_;
  std::vector<const Clause*> choices_;
  std::uint32_t next_var_ = 0;
};

}  // namespace

void enumerate_traces(const Program& p, std::size_t nodes, bool prune,
                      const std::function<bool(const TraceTree&)>& visit) {
  Enumerator(p, nodes, prune, visit).run();
}

std::optional<Counterexample> find_counterexample(const Program& p, const SearchOptions& opts) {
  std::optional<Counterexample> found;
  for (std::size_t n = 1; n <= opts.max_nodes && !found; ++n) {
    enumerate_traces(p, n, true, [&](const TraceTree& t) {
      AndTree tree = instantiate(p, t);
      if (opts.integer_leaves) {
        try {
          if (!integer_satisfiable(constr_of(tree))) return true;
        } catch (const Undecided&) {
          // keep it: treating it as feasible is the cautious choice
        }
      }
      found = Counterexample{std::move(tree), t, true};
      return false;
    });
  }
  if (found) return found;
  for (std::size_t n = 1; n <= opts.max_nodes && !found; ++n) {
    enumerate_traces(p, n, false, [&](const TraceTree& t) {
      found = Counterexample{instantiate(p, t), t, false};
      return false;
    });
  }
  return found;
}

}  // namespace chcpre
