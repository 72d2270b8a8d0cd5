#pragma once

// Refinement loop: pe, cs, then rounds of counterexample search, trace
// elimination, pe and cs; reports the resulting precondition.

#include "chcpre/cs.hpp"
#include "chcpre/derivation.hpp"
#include "chcpre/pe.hpp"
#include "chcpre/precond.hpp"

namespace chcpre {

enum class Mode { AsIs, StripInit };

struct DriverOptions {
  std::size_t iterations = 3;
  std::optional<double> timeout_secs = 300.0;
  Mode mode = Mode::AsIs;
  SearchOptions search;
  PeOptions pe;
  CsOptions cs;
};

/// The precondition read off a program after one transformation.
struct StepRecord {
  std::string stage;  // input, pe, cs, te
  std::size_t round = 0;
  bool feasible_elimination = false;  // te only
  Dnf swp;
};

struct Round {
  std::size_t index = 0;  // 0: the initial pe and cs
  std::optional<TraceTree> trace;
  bool feasible = false;
  std::optional<Conj> theta;
  Dnf swp;  // after the round's cs
};

struct Report {
  std::string input;
  Mode mode = Mode::AsIs;
  std::size_t iterations = 0;
  std::vector<std::string> arg_names;
  Dnf precondition;
  Classification classification = Classification::Undecided;
  std::optional<Dnf> original;
  std::vector<Round> rounds;
  std::vector<StepRecord> steps;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::vector<std::string> warnings;
  bool timed_out = false;
  bool converged = false;  // no counterexample left within the bound

  // state of the last completed round
  Program last_pe;
  Program last_cs;
  std::string pe_trace;
  InvariantMap invariants;
};

/// Throws std::invalid_argument("coverage check failed").
Report analyze_program(const Program& p, const std::string& input, const DriverOptions& opts);

std::string report_text(const Report& r);
std::string report_json(const Report& r, bool with_timings = true);
/// `what` is one of pe, cs, invariants, trace.
std::string report_dump(const Report& r, const std::string& what);

}  // namespace chcpre
