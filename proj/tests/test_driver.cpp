#include "doctest.h"
#include "support.hpp"

#include "chcpre/driver.hpp"

using namespace chcpre;

TEST_CASE("initial-clause precondition") {
  Program p = testing::load("running_example.chc");
  CHECK(extract_swp(p).is_false());  // init(A,B) is unconstrained
  Program q = parse_program(":- initial(init/1).\ninit(X) :- X >= 3.\nfalse :- init(X).");
  testing::Vars v = testing::positional(1);
  CHECK(equiv_dnf(extract_swp(q), v.dnf({"A =< 2"})));
}

TEST_CASE("classification") {
  testing::Vars v = testing::positional(2);
  CHECK(classify(Dnf::falsum(), std::nullopt) == Classification::Trivial);
  CHECK(classify(v.dnf({"A >= 1, A =< 0"}), std::nullopt) == Classification::Trivial);
  CHECK(classify(v.dnf({"A >= 0"}), std::nullopt) == Classification::NonTrivial);
  CHECK(classify(v.dnf({"A >= 0"}), v.dnf({"A >= 5"})) == Classification::MoreGeneral);
  CHECK(classify(v.dnf({"A >= 5"}), v.dnf({"A >= 0"})) == Classification::NonTrivial);
  CHECK(to_string(Classification::MoreGeneral) == "more-general");
}

TEST_CASE("stripping initial constraints") {
  Program p = parse_program(
      ":- initial(init/1).\ninit(X) :- X >= 3.\ninit(X) :- X =< -3.\nfalse :- X > 10, init(X).");
  Program s = strip_init(p);
  REQUIRE(s.original_init);
  testing::Vars v = testing::positional(1);
  CHECK(equiv_dnf(*s.original_init, v.dnf({"A >= 3", "A =< -3"})));
  CHECK(s.initial_clauses().size() == 1);
  CHECK(s.initial_clauses().front()->constr.empty());
}

TEST_CASE("beyer example with one round") {
  Program p = testing::load("beyer.chc");
  DriverOptions opts;
  opts.iterations = 1;
  Report r = analyze_program(p, "beyer.chc", opts);
  REQUIRE(r.rounds.size() == 2);
  CHECK(r.rounds[1].feasible);
  testing::Vars v{{"I", "A", "B", "N"}};
  CHECK(equiv_dnf(r.precondition, v.dnf({"N =< I, A + B = 3*N"})));
  CHECK(r.classification == Classification::NonTrivial);
}

TEST_CASE("strip-init mode reports the original constraint") {
  Program p = parse_program(
      ":- initial(init/1).\ninit(X) :- X >= 0, X =< 5.\nfalse :- X > 10, init(X).");
  DriverOptions opts;
  opts.mode = Mode::StripInit;
  Report r = analyze_program(p, "t.chc", opts);
  REQUIRE(r.original);
  testing::Vars v{{"X"}};
  CHECK(equiv_dnf(r.precondition, v.dnf({"X =< 10"})));
  CHECK(r.classification == Classification::MoreGeneral);
  DriverOptions as_is;
  CHECK_FALSE(analyze_program(p, "t.chc", as_is).original);
}

TEST_CASE("reports are deterministic without timings") {
  Program p = testing::load("running_example.chc");
  DriverOptions opts;
  opts.iterations = 2;
  std::string a = report_json(analyze_program(p, "x", opts), false);
  std::string b = report_json(analyze_program(p, "x", opts), false);
  CHECK(a == b);
  CHECK(a.find("\"timings\"") == std::string::npos);
  CHECK(a.find("\"precondition\"") != std::string::npos);
  CHECK(report_text(analyze_program(p, "x", opts)).find("classification: ") != std::string::npos);
}

TEST_CASE("timeout keeps the last completed round") {
  Program p = testing::load("running_example.chc");
  DriverOptions opts;
  opts.iterations = 1000;
  opts.timeout_secs = 0.2;
  Report r = analyze_program(p, "x", opts);
  CHECK(r.timed_out);
  CHECK_FALSE(r.warnings.empty());
  // still a sound precondition: it implies the round-0 one or is built from it
  CHECK_FALSE(r.rounds.empty());
}

TEST_CASE("uncovered programs are rejected") {
  Program bad = parse_program(":- initial(init/1).\ninit(X).\nfalse :- true.");
  CHECK_THROWS_WITH_AS(analyze_program(bad, "x", {}), "coverage check failed", std::invalid_argument);
}

TEST_CASE("dumps") {
  Program p = testing::load("running_example.chc");
  DriverOptions opts;
  opts.iterations = 0;
  Report r = analyze_program(p, "x", opts);
  CHECK(report_dump(r, "pe").find(":- initial(") != std::string::npos);
  CHECK(report_dump(r, "invariants").find("call=") != std::string::npos);
  CHECK(report_dump(r, "trace").find("-- iteration 0") != std::string::npos);
  CHECK_FALSE(report_dump(r, "cs").empty());
}

TEST_CASE("strip-init on the running example with a fixed initial state") {
  std::string text = testing::read_file(testing::data_path("running_example.chc"));
  std::size_t at = text.find("init(A,B).");
  REQUIRE(at != std::string::npos);
  text.replace(at, 10, "init(A,B) :- A = 100, B = 0.");
  Program p = parse_program(text);
  DriverOptions opts;
  opts.iterations = 0;
  opts.mode = Mode::StripInit;
  Report r = analyze_program(p, "x", opts);
  testing::Vars v{{"A", "B"}};
  Dnf ref = v.dnf({"A = 100, B =< -1", "A = 100, B >= 1", "A =< 99, 2*A + B =< 199",
                   "A =< 99, 2*A + B >= 201", "A >= 101, 2*A - B =< 199", "A >= 101, 2*A - B >= 201"});
  CHECK(equiv_dnf(r.precondition, ref));
  REQUIRE(r.original);
  CHECK(equiv_dnf(*r.original, v.dnf({"A = 100, B = 0"})));
  CHECK(r.classification == Classification::NonTrivial);
}

TEST_CASE("pipeline runs 2+3n steps without early stop") {
  Program p = testing::load("running_example.chc");
  DriverOptions opts;
  opts.iterations = 3;
  Report r = analyze_program(p, "x", opts);
  REQUIRE_FALSE(r.converged);
  CHECK(r.steps.size() - 1 == 2 + 3 * 3);
  CHECK(r.rounds.size() == 4);
}
