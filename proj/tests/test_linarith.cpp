#include "doctest.h"
#include "support.hpp"

using namespace chcpre;
using testing::Vars;

TEST_CASE("constraint normal form") {
  Vars v;
  CHECK(v("2*X =< 4") == v("X =< 2"));
  CHECK(v("X < 3") == v("X =< 2"));
  CHECK(v("X > 3") == v("X >= 4"));
  CHECK(v("-X = -3") == v("X = 3"));
  CHECK(v("0 =< 1").empty());
  CHECK(v("1 =< 0").is_bottom());
  CHECK(v("2*A + B = 200").constraints().front().to_string(v.namer()) == "2*A + B = 200");
  CHECK(v("A >= 101").constraints().front().to_string(v.namer()) == "A >= 101");
  CHECK(v("A - B >= 0").constraints().front().to_string(v.namer()) == "A - B >= 0");
}

TEST_CASE("satisfiable") {
  Vars v;
  CHECK_FALSE(satisfiable(v("X >= 1, X =< 0")));
  CHECK(satisfiable(v("A =< 0, B = 0, C =< 100, A = 100 - C")));
  CHECK_FALSE(satisfiable(v("2*A + B = 200, A >= 101, B >= 0")));
  CHECK(satisfiable(Conj()));
  CHECK_FALSE(satisfiable(v("X + Y >= 3, X =< 1, Y =< 1")));
  CHECK(satisfiable(v("X + Y >= 3, X =< 1, Y =< 2")));
}

TEST_CASE("model satisfies the conjunction") {
  Vars v;
  Conj c = v("X + Y >= 3, X =< 1, Y =< 5, X - Y < 0, 3*X + Y > 2");
  auto m = model(c);
  REQUIRE(m);
  CHECK(c.holds_at(*m));
}

TEST_CASE("entails") {
  Vars v;
  CHECK(entails(v("X = 1"), v("X >= 0")));
  CHECK(entails(v("A = 0, B = 0"), v("A =< 0, B = 0")));
  CHECK_FALSE(entails(v("X >= 0"), v("X >= 1")));
  CHECK(entails(v("1 =< 0"), v("X >= 1")));
  CHECK(equivalent(v("X =< 3, X >= 3"), v("X = 3")));
}

TEST_CASE("project") {
  Vars v;
  CHECK(project(v("X =< Y, Y =< 5"), v.set({"X"})) == v("X =< 5"));
  Conj shadow = project(v("A =< 0, B = 0, C =< 100, A = 100 - C"), v.set({"C", "B"}));
  CHECK(equivalent(shadow, v("C = 100, B = 0")));
  CHECK(project(v("X >= 1"), {}).empty());
  CHECK(project(v("X >= 1, X =< 0"), {}).is_bottom());
  // equality chains
  Conj c = v("A = B + 1, B = C + 1, C >= 0, D = A + C");
  CHECK(equivalent(project(c, v.set({"A", "D"})), v("A >= 2, D = 2*A - 2")));
}

TEST_CASE("reduce removes redundancy and finds equalities") {
  Vars v;
  CHECK(reduce(v("X =< 3, X =< 5")) == v("X =< 3"));
  CHECK(reduce(v("X =< 3, X >= 3")) == v("X = 3"));
  CHECK(reduce(v("X =< Y, Y =< X, Y =< 4")).size() == 2);
  CHECK(reduce(v("X >= 1, X =< 0")).is_bottom());
}

TEST_CASE("negate") {
  Vars v;
  CHECK(negate(Conj()).is_false());
  Dnf n = negate(v("A =< 99, 2*A + B = 200"));
  CHECK(n.disjuncts.size() == 3);
  CHECK(equiv_dnf(n, v.dnf({"A >= 100", "2*A + B =< 199", "2*A + B >= 201"})));
  Dnf m = negate(v("A = 100, B = 0"));
  CHECK(m.disjuncts.size() == 4);
  CHECK(equiv_dnf(m, v.dnf({"A =< 99", "A >= 101", "B =< -1", "B >= 1"})));
}

TEST_CASE("negate dnf") {
  Vars v;
  CHECK(negate(v.dnf({"A =< 99", "A =< 100", "A >= 101"})).is_false());
  Dnf t = negate(Dnf::falsum());
  REQUIRE(t.disjuncts.size() == 1);
  CHECK(t.disjuncts.front().empty());

  Dnf init = v.dnf({"A = 100, B = 0", "A =< 99, 2*A + B = 200", "A >= 101, 2*A - B = 200"});
  Dnf reference = v.dnf({"A = 100, B =< -1", "A = 100, B >= 1", "A =< 99, 2*A + B =< 199",
                         "A =< 99, 2*A + B >= 201", "A >= 101, 2*A - B =< 199",
                         "A >= 101, 2*A - B >= 201"});
  CHECK(equiv_dnf(negate(init), reference));
}

TEST_CASE("simplify") {
  Vars v;
  CHECK(simplify(v("2*X =< 5")) == v("X =< 2"));
  CHECK(simplify(v("X =< 3, X =< 5")) == v("X =< 3"));
  CHECK(simplify(v("X =< 3, X >= 3")) == v("X = 3"));
  CHECK_THROWS_AS(simplify(v("X >= 1, X =< 0")), std::invalid_argument);
  CHECK_THROWS_AS(simplify(v("2*X = 2*Y + 1")), std::invalid_argument);
  // tightening exposes an integer contradiction
  CHECK_THROWS_AS(simplify(v("2*X >= 1, 2*X =< 1")), std::invalid_argument);
}

TEST_CASE("integer satisfiability and dnf equivalence") {
  Vars v;
  CHECK_FALSE(integer_satisfiable(v("2*X >= 1, 2*X =< 1")));
  CHECK(integer_satisfiable(v("3*X + 2*Y = 7, X >= 0, Y >= 0")));
  CHECK_FALSE(integer_satisfiable(v("3*X + 3*Y = 7")));
  CHECK_FALSE(integer_satisfiable(v("4*X - 4*Y >= 1, 4*X - 4*Y =< 3")));
  CHECK(equiv_dnf(v.dnf({"X >= 0"}), v.dnf({"X >= 0", "X >= 5"})));
  CHECK_FALSE(equiv_dnf(v.dnf({"X >= 1"}), v.dnf({"X >= 0"})));
  CHECK(equiv_dnf(v.dnf({"X =< 0", "X >= 1"}), Dnf::verum()));
  CHECK(equiv_dnf(Dnf::falsum(), v.dnf({"2*X = 1"})));
  IntegerOptions tiny;
  tiny.node_budget = 1;
  // the only rational point is fractional, so one branch is needed
  CHECK_THROWS_AS(integer_satisfiable(v("2*X - Y = 0, 2*X + Y = 1"), tiny),
                  Undecided);
}

TEST_CASE("projection cap over-approximates and warns") {
  Vars v;
  std::size_t saved = projection_cap();
  projection_cap() = 3;
  WarningCollector w;
  Conj c = v("X - Y =< 1, X - Z =< 2, X - U =< 3, W - X =< 1, V - X =< 2, T - X =< 5");
  Conj p = project(c, v.set({"Y", "Z", "U", "W", "V", "T"}));
  projection_cap() = saved;
  CHECK(entails(project(c, v.set({"Y", "Z", "U", "W", "V", "T"})), p));
  CHECK_FALSE(w.warnings().empty());
}
