#include "chcpre/qa.hpp"

namespace chcpre {

std::string query_pred(const std::string& pred) { return pred + "#q"; }
std::string answer_pred(const std::string& pred) { return pred + "#a"; }

namespace {

Atom tagged(const Atom& a, bool query) {
  return Atom{query ? query_pred(a.pred) : answer_pred(a.pred), a.args};
}

Atom head_atom(const Clause& c) { return c.head ? *c.head : Atom{kFalse, {}}; }

}  // namespace

QaProgram qa_transform(const Program& p) {
  if (!check_initial_coverage(p)) throw std::invalid_argument("coverage check failed");
  QaProgram out;
  Program& q = out.program;
  for (const auto& [pred, n] : p.arity) {
    q.arity[query_pred(pred)] = n;
    q.arity[answer_pred(pred)] = n;
  }
  q.arity[query_pred(kFalse)] = 0;
  q.arity[answer_pred(kFalse)] = 0;

  Clause seed;
  seed.id = "seed_q";
  seed.head = Atom{query_pred(kFalse), {}};
  q.clauses.push_back(seed);
  out.source_clause[seed.id] = "";

  for (const auto& c : p.clauses) {
    Atom h = head_atom(c);
    Clause ans;
    ans.id = c.id + "_a";
    ans.head = tagged(h, false);
    ans.constr = c.constr;
    ans.var_names = c.var_names;
    ans.body.push_back(tagged(h, true));
    for (const auto& b : c.body) ans.body.push_back(tagged(b, false));

    for (std::size_t i = 0; i < c.body.size(); ++i) {
      Clause qc;
      qc.id = c.id + "_q" + std::to_string(i + 1);
      qc.head = tagged(c.body[i], true);
      qc.constr = c.constr;
      qc.var_names = c.var_names;
      qc.body.push_back(tagged(h, true));
      for (std::size_t j = 0; j < i; ++j) qc.body.push_back(tagged(c.body[j], false));
      out.source_clause[qc.id] = c.id;
      q.clauses.push_back(std::move(qc));
    }
    out.source_clause[ans.id] = c.id;
    q.clauses.push_back(std::move(ans));
  }
  return out;
}

}  // namespace chcpre
