#pragma once

// Query-answer transformation with left-to-right query propagation.

#include "chcpre/chc.hpp"

namespace chcpre {

std::string query_pred(const std::string& pred);
std::string answer_pred(const std::string& pred);

struct QaProgram {
  Program program;
  /// Transformed clause id -> source clause id (the seed maps to "").
  std::map<std::string, std::string> source_clause;
};

/// For `H <- phi, B1..Bk`: `H#a <- phi, H#q, B1#a..Bk#a` and, for each i,
/// `Bi#q <- phi, H#q, B1#a..B(i-1)#a`; plus the seed `false#q <- true`.
/// Throws std::invalid_argument("coverage check failed") when some
/// derivation of false avoids the initial clauses.
QaProgram qa_transform(const Program& p);

}  // namespace chcpre
