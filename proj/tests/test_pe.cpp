#include "doctest.h"
#include "support.hpp"

#include "chcpre/cs.hpp"
#include "chcpre/pe.hpp"

using namespace chcpre;

TEST_CASE("properties of the running example") {
  Program p = testing::load("running_example.chc");
  PropertyMap props = gen_properties(p);
  testing::Vars v = testing::positional(2);
  auto has = [&](const std::string& pred, const std::string& text) {
    Conj want = v(text);
    for (const auto& c : props[pred])
      if (equivalent(c, want)) return true;
    return false;
  };
  CHECK(props["if"].size() == 2);
  CHECK(props["init"].size() == 2);
  CHECK(props["while"].size() == 5);
  CHECK(has("if", "A >= 0"));
  CHECK(has("if", "A >= 1"));
  CHECK(has("init", "A =< 100"));
  CHECK(has("init", "A >= 101"));
  CHECK(has("while", "A >= 0"));
  CHECK(has("while", "A >= 1"));
  CHECK(has("while", "A =< 0, B = 0"));
  CHECK(has("while", "A =< 0"));
  CHECK(has("while", "B = 0"));
}

TEST_CASE("partial evaluation of the running example") {
  Program p = testing::load("running_example.chc");
  PeResult r = partial_evaluate(p);
  const Program& q = r.program;
  CHECK(q.arity.size() == 7);
  REQUIRE(q.initial_versions.size() == 3);
  testing::Vars v = testing::positional(2);
  std::vector<Conj> want{v("A =< 99"), v("A =< 100"), v("A >= 101")};
  for (const auto& name : q.initial_versions) {
    auto cs = q.clauses_of(name);
    REQUIRE(cs.size() == 1);
    Conj got = to_positional(cs.front()->constr, cs.front()->head->args);
    bool matched = false;
    for (const auto& w : want) matched = matched || equivalent(got, w);
    CHECK_MESSAGE(matched, name << ": " << got.to_string(positional_namer()));
  }
  Program expected = parse_program(
      ":- initial(init_1/2).\n:- initial(init_3/2).\n:- initial(init_4/2).\n"
      "false :- A =< 0, B = 0, while_7(A,B).\n"
      "while_7(A,B) :- A =< 0, B = 0, if_6(A,B).\n"
      "while_7(A,B) :- A = 0, B = 0, C = 1, D = 2, while_5(C,D).\n"
      "if_6(A,B) :- A >= 0, A + C = 100, init_4(C,B).\n"
      "if_6(A,B) :- A >= 1, C - A = 100, init_3(C,B).\n"
      "while_5(A,B) :- A >= 1, if_2(A,B).\n"
      "while_5(A,B) :- A >= 1, C - A = 1, D - B = 2, while_5(C,D).\n"
      "if_2(A,B) :- A >= 1, A + C = 100, init_1(C,B).\n"
      "if_2(A,B) :- A >= 1, C - A = 100, init_3(C,B).\n"
      "init_4(A,B) :- A =< 100.\n"
      "init_3(A,B) :- A >= 101.\n"
      "init_1(A,B) :- A =< 99.\n");
  CHECK(testing::equivalent_up_to_renaming(q, expected));
  CHECK(dump_trace(r).find("-- iteration 0") != std::string::npos);
}

TEST_CASE("partial evaluation then specialisation") {
  Program p = testing::load("running_example.chc");
  CsResult r = specialise(partial_evaluate(p).program);
  Program expected = parse_program(
      ":- initial(init_1/2).\n:- initial(init_3/2).\n:- initial(init_4/2).\n"
      "false :- A = 0, B = 0, while_7(A,B).\n"
      "while_7(A,B) :- A = 0, B = 0, if_6(A,B).\n"
      "while_7(A,B) :- A = 0, B = 0, C = 1, D = 2, while_5(C,D).\n"
      "if_6(A,B) :- A = 0, B = 0, C = 100, init_4(C,B).\n"
      "while_5(A,B) :- A >= 1, 2*A - B = 0, if_2(A,B).\n"
      "while_5(A,B) :- A >= 1, 2*A = B, C - A = 1, D - 2*A = 2, while_5(C,D).\n"
      "if_2(A,B) :- A >= 1, 2*A = B, A + C = 100, init_1(C,B).\n"
      "if_2(A,B) :- A >= 1, 2*A = B, C - A = 100, init_3(C,B).\n"
      "init_4(A,B) :- A = 100, B = 0.\n"
      "init_3(A,B) :- A >= 101, 2*A - B = 200.\n"
      "init_1(A,B) :- A =< 99, 2*A + B = 200.\n");
  CHECK(testing::equivalent_up_to_renaming(r.program, expected));
  CHECK(r.deleted.size() == 1);
}

TEST_CASE("goal splitting") {
  Program p = parse_program(
      ":- initial(init/1).\n"
      "init(X).\n"
      "a(X) :- X < 0, init(X).\n"
      "a(X) :- X > 10, init(X).\n"
      "false :- a(X).\n");
  PeOptions off;
  off.split_goal_clauses = false;
  CHECK(partial_evaluate(p, off).program.clauses_of(kFalse).size() == 1);
  PeResult split = partial_evaluate(p);
  CHECK(split.program.initial_versions.size() == 2);
  CHECK(split.program.clauses_of(kFalse).size() == 2);
}
