#include "doctest.h"
#include "random_programs.hpp"
#include "support.hpp"

#include "chcpre/cs.hpp"
#include "chcpre/fta.hpp"
#include "chcpre/pe.hpp"
#include "chcpre/polyhedra.hpp"
#include "chcpre/precond.hpp"

using namespace chcpre;
using testing::Rng;
using testing::uniform;

namespace {

constexpr int kRuns = 300;

Var var(std::size_t i) { return Var{static_cast<std::uint32_t>(i)}; }

std::vector<TraceTree> traces_upto(const Program& p, std::size_t max_nodes) {
  std::vector<TraceTree> out;
  for (std::size_t n = 1; n <= max_nodes; ++n)
    enumerate_traces(p, n, false, [&](const TraceTree& t) {
      out.push_back(t);
      return true;
    });
  return out;
}

/// Integer feasibility; nullopt when the budget runs out.
std::optional<bool> int_feasible(const Program& p, const TraceTree& t) {
  try {
    return integer_satisfiable(constr_of(instantiate(p, t)));
  } catch (const Undecided&) {
    return std::nullopt;
  }
}

std::set<std::string> int_feasible_set(const Program& p, std::size_t max_nodes, bool& undecided) {
  std::set<std::string> out;
  for (const auto& t : traces_upto(p, max_nodes)) {
    auto f = int_feasible(p, t);
    if (!f) undecided = true;
    else if (*f) out.insert(t.to_string());
  }
  return out;
}

std::map<Var, Rational> point_of(const std::vector<Rational>& xs) {
  std::map<Var, Rational> m;
  for (std::size_t i = 0; i < xs.size(); ++i) m[var(i)] = xs[i];
  return m;
}

}  // namespace

TEST_CASE("projection agrees with satisfiability on sampled grid points") {
  Rng rng(101);
  int checked = 0;
  for (int run = 0; run < 500; ++run) {
    std::size_t n = uniform(rng, 2, 3);
    Conj c = testing::random_conj(rng, n, uniform(rng, 1, 4));
    std::size_t k = uniform(rng, 1, static_cast<int>(n) - 1);
    VarSet keep;
    for (std::size_t i = 0; i < k; ++i) keep.insert(var(i));
    Conj shadow = project(c, keep);
    for (int s = 0; s < 40; ++s) {
      std::vector<Rational> pt;
      Conj fixed = c;
      for (std::size_t i = 0; i < k; ++i) {
        Rational x(uniform(rng, -40, 40), uniform(rng, 1, 2));
        x.canonicalize();
        pt.push_back(x);
        fixed.add(LinConstraint::eq(LinExpr::var(var(i)), LinExpr(x)));
      }
      bool in_shadow = shadow.holds_at(point_of(pt));
      REQUIRE_MESSAGE(in_shadow == satisfiable(fixed), c.to_string());
      ++checked;
    }
  }
  CHECK(checked == 500 * 40);
}

TEST_CASE("integer negation partitions the grid") {
  Rng rng(202);
  for (int run = 0; run < 500; ++run) {
    std::size_t n = uniform(rng, 1, 3);
    Conj c = testing::random_conj(rng, n, uniform(rng, 1, 3));
    Dnf neg = negate(c);
    for (int s = 0; s < 300; ++s) {
      std::vector<Rational> pt;
      for (std::size_t i = 0; i < n; ++i) pt.emplace_back(uniform(rng, -15, 15));
      auto m = point_of(pt);
      REQUIRE_MESSAGE(c.holds_at(m) != neg.holds_at(m), c.to_string());
    }
  }
}

TEST_CASE("entailment is a preorder and simplify keeps integer solutions") {
  Rng rng(303);
  for (int run = 0; run < kRuns; ++run) {
    std::size_t n = uniform(rng, 1, 3);
    Conj a = testing::random_conj(rng, n, uniform(rng, 1, 3));
    Conj b = testing::random_conj(rng, n, uniform(rng, 0, 2));
    Conj c = testing::random_conj(rng, n, uniform(rng, 0, 2));
    CHECK(entails(a, a));
    if (entails(a, b) && entails(b, c)) CHECK(entails(a, c));
    CHECK(entails(a & b, a));

    std::optional<Conj> s;
    try {
      s = simplify(a);
    } catch (const std::invalid_argument&) {
    }
    for (int x = -6; x <= 6; ++x)
      for (int y = (n > 1 ? -6 : 0); y <= (n > 1 ? 6 : 0); ++y)
        for (int z = (n > 2 ? -6 : 0); z <= (n > 2 ? 6 : 0); ++z) {
          std::vector<Rational> pt{Rational(x), Rational(y), Rational(z)};
          pt.resize(n);
          auto m = point_of(pt);
          bool in_a = a.holds_at(m);
          if (!s) REQUIRE_FALSE(in_a);
          else REQUIRE(in_a == s->holds_at(m));
        }
  }
}

TEST_CASE("join is an upper bound and widening keeps a subset of constraints") {
  Rng rng(404);
  for (int run = 0; run < kRuns; ++run) {
    std::size_t n = uniform(rng, 1, 3);
    std::vector<Var> dims;
    for (std::size_t i = 0; i < n; ++i) dims.push_back(var(i));
    Polyhedron p = Polyhedron::of(dims, testing::random_conj(rng, n, uniform(rng, 0, 3)));
    Polyhedron q = Polyhedron::of(dims, testing::random_conj(rng, n, uniform(rng, 0, 3)));
    Polyhedron j = join(p, q);
    REQUIRE(includes(j, p));
    REQUIRE(includes(j, q));
    if (p.is_bottom() || q.is_bottom() || !includes(j, q)) continue;
    Polyhedron w = widen(p, j);
    CHECK(includes(w, j));
    // w is generated by the constraints of p it entails
    Conj generated;
    for (const auto& k : p.constr().constraints()) {
      LinConstraint le(k.terms(), Rel::Le, k.rhs());
      for (const auto& half : {le, le.flipped()}) {
        if (k.rel() == Rel::Le && !(half == le)) continue;
        if (entails(w.constr(), half)) generated.add(half);
      }
    }
    CHECK(equivalent(w.constr(), generated));
  }
}

namespace {

using Pt = std::pair<long, long>;

long cross(Pt o, Pt a, Pt b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

std::vector<Pt> hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Pt> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

/// Membership of (x/2, y/2) in the hull of integer points.
bool in_hull(const std::vector<Pt>& h, long x2, long y2) {
  auto scaled = [](Pt p) { return Pt{2 * p.first, 2 * p.second}; };
  Pt q{x2, y2};
  if (h.size() == 1) return scaled(h[0]) == q;
  if (h.size() == 2) {
    Pt a = scaled(h[0]), b = scaled(h[1]);
    return cross(a, b, q) == 0 && std::min(a.first, b.first) <= x2 && x2 <= std::max(a.first, b.first) &&
           std::min(a.second, b.second) <= y2 && y2 <= std::max(a.second, b.second);
  }
  for (std::size_t i = 0; i < h.size(); ++i)
    if (cross(scaled(h[i]), scaled(h[(i + 1) % h.size()]), q) < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("join is exact on integer boxes") {
  Rng rng(505);
  testing::Vars v = testing::positional(2);
  for (int run = 0; run < kRuns; ++run) {
    bool two_d = run % 2 == 1;
    auto box = [&](std::vector<Pt>& corners) {
      int x1 = uniform(rng, -8, 8), x2 = x1 + uniform(rng, 0, 4);
      int y1 = two_d ? uniform(rng, -8, 8) : 0, y2 = two_d ? y1 + uniform(rng, 0, 4) : 0;
      for (int x : {x1, x2})
        for (int y : {y1, y2}) corners.push_back({x, y});
      std::string text = "A >= " + std::to_string(x1) + ", A =< " + std::to_string(x2);
      if (two_d) text += ", B >= " + std::to_string(y1) + ", B =< " + std::to_string(y2);
      return v(text);
    };
    std::vector<Pt> corners;
    std::vector<Var> dims{var(0)};
    if (two_d) dims.push_back(var(1));
    Polyhedron a = Polyhedron::of(dims, box(corners));
    Polyhedron b = Polyhedron::of(dims, box(corners));
    Polyhedron j = join(a, b);
    if (!two_d) {
      long lo = std::min(corners[0].first, corners[4].first);
      long hi = std::max(corners[3].first, corners[7].first);
      CHECK(equivalent(j.constr(), v("A >= " + std::to_string(lo) + ", A =< " + std::to_string(hi))));
      continue;
    }
    std::vector<Pt> h = hull(corners);
    for (long x = -24; x <= 24; ++x)
      for (long y = -24; y <= 24; ++y) {
        std::map<Var, Rational> m{{var(0), Rational(x, 2)}, {var(1), Rational(y, 2)}};
        m[var(0)].canonicalize();
        m[var(1)].canonicalize();
        REQUIRE(j.constr().holds_at(m) == in_hull(h, x, y));
      }
  }
}

TEST_CASE("pruned enumeration finds exactly the feasible derivations") {
  Rng rng(606);
  for (int run = 0; run < kRuns; ++run) {
    Program p = testing::random_covered_program(rng);
    for (std::size_t n = 1; n <= 6; ++n) {
      std::vector<std::string> all, pruned;
      enumerate_traces(p, n, false, [&](const TraceTree& t) {
        AndTree tree = instantiate(p, t);
        REQUIRE(strip(tree) == t);
        if (feasible(tree)) all.push_back(t.to_string());
        return true;
      });
      enumerate_traces(p, n, true, [&](const TraceTree& t) {
        pruned.push_back(t.to_string());
        return true;
      });
      REQUIRE_MESSAGE(all == pruned, print_program(p));
    }
  }
}

namespace {

/// The query-answer derivation corresponding to a derivation of `p`.
TraceTree to_qa(const TraceTree& n, const TraceTree& query) {
  TraceTree out{n.clause + "_a", {query}};
  std::vector<TraceTree> answers;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    TraceTree q{n.clause + "_q" + std::to_string(i + 1), {query}};
    q.children.insert(q.children.end(), answers.begin(), answers.end());
    answers.push_back(to_qa(n.children[i], q));
  }
  out.children.insert(out.children.end(), answers.begin(), answers.end());
  return out;
}

/// Drops query subtrees of an answer derivation.
TraceTree from_qa(const TraceTree& n) {
  TraceTree out{n.clause.substr(0, n.clause.size() - 2), {}};
  for (std::size_t i = 1; i < n.children.size(); ++i) out.children.push_back(from_qa(n.children[i]));
  return out;
}

Program with_top(const QaProgram& qa) {
  Program q = qa.program;
  Clause top;
  top.id = "top";
  top.body.push_back(Atom{answer_pred(kFalse), {}});
  q.clauses.push_back(top);
  return q;
}

}  // namespace

TEST_CASE("query-answer transformation preserves derivability of false") {
  Rng rng(707);
  for (int run = 0; run < kRuns; ++run) {
    Program p = testing::random_covered_program(rng);
    Program q = with_top(qa_transform(p));
    for (const auto& t : traces_upto(p, 5)) {
      TraceTree image{"top", {to_qa(t, TraceTree{"seed_q", {}})}};
      REQUIRE(program_to_fta(q).accepts(image));
      REQUIRE_MESSAGE(feasible(instantiate(p, t)) == feasible(instantiate(q, image)), print_program(p));
    }
    for (std::size_t n = 1; n <= 12; ++n)
      enumerate_traces(q, n, true, [&](const TraceTree& t) {
        TraceTree back = from_qa(t.children.front());
        REQUIRE(program_to_fta(p).accepts(back));
        REQUIRE(feasible(instantiate(p, back)));
        return true;
      });
  }
}

TEST_CASE("trace elimination removes exactly one tree") {
  Rng rng(808);
  int instances = 0;
  while (instances < kRuns) {
    Program p = testing::random_covered_program(rng);
    std::vector<TraceTree> ts = traces_upto(p, 5);
    if (ts.empty()) continue;
    ++instances;
    TraceTree t = ts[uniform(rng, 0, static_cast<int>(ts.size()) - 1)];
    TeResult r = eliminate_trace(p, t);
    std::set<std::string> before, after;
    for (const auto& x : traces_upto(p, 7)) before.insert(x.to_string());
    before.erase(t.to_string());
    std::function<TraceTree(const TraceTree&)> back = [&](const TraceTree& x) {
      TraceTree o{r.provenance.at(x.clause), {}};
      for (const auto& c : x.children) o.children.push_back(back(c));
      return o;
    };
    std::size_t count = 0;
    for (const auto& x : traces_upto(r.program, 7)) {
      after.insert(back(x).to_string());
      ++count;
    }
    REQUIRE_MESSAGE(before == after, print_program(p) << t.to_string());
    CHECK(count == after.size());  // no tree is represented twice
    for (const auto& c : r.program.clauses) {
      const Clause* src = p.find_clause(r.provenance.at(c.id));
      REQUIRE(src);
      CHECK(src->constr == c.constr);
    }
  }
}

TEST_CASE("determinization preserves the language") {
  Rng rng(909);
  const std::vector<std::pair<std::string, std::size_t>> symbols{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 2}};
  std::function<TraceTree(int)> random_tree = [&](int depth) {
    auto [sym, ar] = symbols[uniform(rng, depth > 0 ? 0 : 0, depth > 0 ? 3 : 1)];
    TraceTree t{sym, {}};
    for (std::size_t i = 0; i < ar; ++i) t.children.push_back(random_tree(depth - 1));
    return t;
  };
  for (int run = 0; run < kRuns; ++run) {
    Fta a;
    int ns = uniform(rng, 1, 4);
    for (int i = 0; i < ns; ++i) a.add_state("s" + std::to_string(i), "");
    int nt = uniform(rng, 2, 10);
    for (int i = 0; i < nt; ++i) {
      auto [sym, ar] = symbols[uniform(rng, 0, 3)];
      Fta::Transition tr{sym, {}, static_cast<std::size_t>(uniform(rng, 0, ns - 1))};
      for (std::size_t k = 0; k < ar; ++k) tr.args.push_back(uniform(rng, 0, ns - 1));
      a.transitions.push_back(tr);
    }
    a.finals.insert(uniform(rng, 0, ns - 1));
    Fta d = determinize(a);
    for (std::size_t i = 0; i < d.transitions.size(); ++i)
      for (std::size_t j = i + 1; j < d.transitions.size(); ++j)
        REQUIRE_FALSE((d.transitions[i].symbol == d.transitions[j].symbol &&
                       d.transitions[i].args == d.transitions[j].args));
    for (int s = 0; s < 30; ++s) {
      TraceTree t = random_tree(3);
      REQUIRE(a.accepts(t) == d.accepts(t));
      REQUIRE(d.run(t).size() <= 1);
    }
  }
}

TEST_CASE("constraint specialisation properties") {
  Rng rng(1001);
  for (int run = 0; run < kRuns; ++run) {
    Program p = testing::random_covered_program(rng);
    CsResult r = specialise(p);
    for (const auto& c : r.program.clauses) {
      const Clause* src = p.find_clause(c.id);
      REQUIRE(src);
      CHECK(entails(c.constr, src->constr));
    }
    bool undecided = false;
    auto before = int_feasible_set(p, 6, undecided);
    auto after = int_feasible_set(r.program, 6, undecided);
    if (!undecided) REQUIRE_MESSAGE(before == after, print_program(p));
    // initial clauses used by some feasible derivation survive
    for (const auto& t : before) {
      std::function<void(const TraceTree&)> visit = [&](const TraceTree& x) {
        const Clause* c = p.find_clause(x.clause);
        if (p.is_initial_clause(*c)) CHECK(r.program.find_clause(c->id) != nullptr);
        for (const auto& k : x.children) visit(k);
      };
      visit(TraceTree::parse(t));
    }
    try {
      CHECK(implies(extract_swp(p), extract_swp(r.program)));
    } catch (const Undecided&) {
    }
  }
}

TEST_CASE("partial evaluation properties") {
  Rng rng(1102);
  for (int run = 0; run < kRuns; ++run) {
    Program p = testing::random_covered_program(rng);
    PeResult r = partial_evaluate(p);
    try {
      REQUIRE_MESSAGE(implies(extract_swp(p), extract_swp(r.program)), print_program(p));
    } catch (const Undecided&) {
    }
    bool undecided = false;
    auto before = int_feasible_set(p, 5, undecided);
    auto after = int_feasible_set(r.program, 5, undecided);
    if (undecided) continue;
    // unfolding shrinks derivations, so only this direction holds per bound
    if (!before.empty()) CHECK_MESSAGE(!after.empty(), print_program(p));
    if (!after.empty()) {
      SearchOptions wide;
      wide.max_nodes = 20;
      wide.integer_leaves = true;
      auto cex = find_counterexample(p, wide);
      CHECK_MESSAGE((cex && cex->feasible), print_program(p));
    }
    for (const auto& name : r.program.initial_versions) CHECK(r.program.origin_of(name) == "init");
  }
}

TEST_CASE("argument normalization preserves models") {
  Rng rng(1203);
  const std::vector<std::string> vars{"X", "Y", "Z"};
  for (int run = 0; run < kRuns; ++run) {
    std::string args;
    int n = uniform(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      std::string a = vars[uniform(rng, 0, 2)];
      int shape = uniform(rng, 0, 2);
      if (shape == 1) a += " + " + std::to_string(uniform(rng, 1, 3));
      if (shape == 2) a = std::to_string(uniform(rng, 2, 3)) + "*" + a;
      args += (i ? ", " : "") + a;
    }
    std::string phi = testing::random_constraint_text(rng, vars);
    Program p = parse_program(":- initial(q/" + std::to_string(n) + ").\nq(" + args + ") :- " + phi + ".\n");
    const Clause& c = p.clauses.front();
    std::vector<std::string> names = c.var_names;
    Conj original = parse_constraints(phi, names);
    for (int s = 0; s < 20; ++s) {
      std::map<Var, Rational> sigma;
      Conj fixed = c.constr;
      for (const auto& name : vars) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) continue;
        Var v = var(it - names.begin());
        int x = uniform(rng, -6, 6);
        sigma[v] = x;
        if (v.id < c.num_vars()) fixed.add(LinConstraint::eq(LinExpr::var(v), LinExpr(Rational(x))));
      }
      REQUIRE(original.holds_at(sigma) == satisfiable(fixed));
    }
  }
}
