#pragma once

// Constrained Horn clauses, their textual form and dependency structure.

#include "chcpre/linarith.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace chcpre {

inline const std::string kFalse = "false";

struct Atom {
  std::string pred;
  std::vector<Var> args;  // pairwise distinct

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// `head <- constr, body...`. Variables are clause-local: ids 0..n-1 index
/// `var_names`. An absent head is `false`.
struct Clause {
  std::string id;
  std::optional<Atom> head;
  Conj constr;
  std::vector<Atom> body;
  std::vector<std::string> var_names;

  const std::string& head_pred() const { return head ? head->pred : kFalse; }
  bool is_goal() const { return !head.has_value(); }
  bool is_fact() const { return body.empty(); }
  std::size_t num_vars() const { return var_names.size(); }
  Var fresh_var(const std::string& hint);
  VarNamer namer() const;
  VarSet head_vars() const;
};

class Program {
 public:
  std::vector<Clause> clauses;
  std::map<std::string, std::size_t> arity;  // every predicate except false
  /// Source initial predicate and every predicate standing for a version of it.
  std::string initial;
  std::set<std::string> initial_versions;
  /// Source predicate each predicate was derived from (identity if absent).
  std::map<std::string, std::string> origin;
  /// Argument names of the source initial predicate.
  std::vector<std::string> initial_arg_names;
  /// Disjunction of removed initial constraints, over vars 0..arity-1.
  std::optional<Dnf> original_init;

  bool is_initial(const std::string& pred) const {
    return initial_versions.contains(pred);
  }
  /// Constrained facts of an initial predicate.
  bool is_initial_clause(const Clause& c) const {
    return c.head && c.body.empty() && is_initial(c.head->pred);
  }
  const std::string& origin_of(const std::string& pred) const;
  std::vector<const Clause*> clauses_of(const std::string& pred) const;
  std::vector<const Clause*> initial_clauses() const;
  const Clause* find_clause(const std::string& id) const;
  std::set<std::string> predicates() const;  // includes false
  /// Checks arities, ids and the initial-predicate requirements.
  void validate() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

struct ParseOptions {
  /// `name/arity`; overrides or supplies the initial directive.
  std::optional<std::string> initial;
};

Program parse_program(const std::string& text, const ParseOptions& opts = {});
/// Parses a comma-separated constraint list; names are resolved through
/// (and added to) `names`, whose index is the variable id.
Conj parse_constraints(const std::string& text, std::vector<std::string>& names);

std::string print_clause(const Clause& c);
std::string print_program(const Program& p);

/// Edge q -> p iff q occurs in the body of a clause for p.
struct DependencyGraph {
  std::set<std::string> nodes;
  std::map<std::string, std::set<std::string>> succ;

  bool has_edge(const std::string& from, const std::string& to) const;
  /// Predicates in a cycle (non-trivial SCC or self-loop).
  std::set<std::string> recursive() const;
  /// Strongly connected components in reverse topological order.
  std::vector<std::vector<std::string>> sccs() const;
};

DependencyGraph dependency_graph(const Program& p);

/// True iff every derivation of false uses an initial clause.
bool check_initial_coverage(const Program& p);

/// Names A..Z, then A1..Z1 and so on, for predicate argument positions.
std::string positional_name(std::size_t i);
VarNamer positional_namer();
/// Renames argument i of `args` to variable i; `c` must mention only `args`.
Conj to_positional(const Conj& c, const std::vector<Var>& args);
/// Renames variable i to `args[i]`.
Conj from_positional(const Conj& c, const std::vector<Var>& args);
/// Drops variables not occurring in the clause and renumbers the rest.
void compact(Clause& c);

/// Fresh-predicate naming helper that avoids clashes with existing names.
std::string unique_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace chcpre
