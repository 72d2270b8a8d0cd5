#include "chcpre/driver.hpp"

#include "chcpre/deadline.hpp"
#include "chcpre/fta.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>

namespace chcpre {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

  template <class F>
  auto time(const std::string& stage, F&& f) {
    auto start = Clock::now();
    struct Add {
      Stopwatch& w;
      const std::string& stage;
      Clock::time_point start;
      ~Add() { w.add(stage, std::chrono::duration<double>(Clock::now() - start).count()); }
    } add{*this, stage, start};
    return f();
  }

  void add(const std::string& stage, double secs) {
    for (auto& [name, total] : sink_)
      if (name == stage) {
        total += secs;
        return;
      }
    sink_.emplace_back(stage, secs);
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
};

}  // namespace

Report analyze_program(const Program& input, const std::string& name, const DriverOptions& opts) {
  Report r;
  r.input = name;
  r.mode = opts.mode;
  r.iterations = opts.iterations;
  r.arg_names = input.initial_arg_names;
  Program p = opts.mode == Mode::StripInit ? strip_init(input) : input;
  if (opts.mode == Mode::StripInit) r.original = p.original_init;
  if (!check_initial_coverage(p)) throw std::invalid_argument("coverage check failed");

  Stopwatch watch(r.timings);
  auto total_start = Clock::now();
  WarningCollector warnings;
  PrecondState psi;
  std::optional<Program> current;
  {
    std::optional<Clock::time_point> deadline;
    if (opts.timeout_secs)
      deadline = total_start + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(*opts.timeout_secs));
    DeadlineScope scope(deadline);
    try {
      r.steps.push_back({"input", 0, false, extract_swp(p)});
      // one pe+cs pass; results are committed by the caller
      auto specialise_round = [&](const Program& q, std::size_t round, PeResult& pe, CsResult& cs,
                                  std::vector<StepRecord>& steps) {
        pe = watch.time("pe", [&] { return partial_evaluate(q, opts.pe); });
        steps.push_back({"pe", round, false, extract_swp(pe.program)});
        cs = watch.time("cs", [&] { return specialise(pe.program, opts.cs); });
        steps.push_back({"cs", round, false, extract_swp(cs.program)});
      };
      auto commit = [&](Round round, PeResult& pe, CsResult& cs, std::vector<StepRecord>& steps) {
        round.swp = steps.back().swp;
        r.steps.insert(r.steps.end(), steps.begin(), steps.end());
        r.rounds.push_back(std::move(round));
        r.last_pe = std::move(pe.program);
        r.pe_trace = dump_trace(pe);
        r.invariants = std::move(cs.invariants);
        r.last_cs = cs.program;
        current = std::move(cs.program);
      };

      {
        PeResult pe;
        CsResult cs;
        std::vector<StepRecord> steps;
        specialise_round(p, 0, pe, cs, steps);
        commit(Round{}, pe, cs, steps);
      }
      for (std::size_t i = 1; i <= opts.iterations; ++i) {
        auto cex = watch.time("search", [&] { return find_counterexample(*current, opts.search); });
        if (!cex) {
          r.converged = true;
          break;
        }
        TeResult te = watch.time("te", [&] { return eliminate_trace(*current, cex->trace); });
        std::vector<StepRecord> steps;
        steps.push_back({"te", i, te.feasible, extract_swp(te.program)});
        PeResult pe;
        CsResult cs;
        specialise_round(te.program, i, pe, cs, steps);
        Round round;
        round.index = i;
        round.trace = cex->trace;
        round.feasible = te.feasible;
        round.theta = te.theta;
        if (te.feasible && te.theta) psi.add_theta(*te.theta);
        commit(std::move(round), pe, cs, steps);
      }
    } catch (const Timeout&) {
      r.timed_out = true;
      double spent = std::chrono::duration<double>(Clock::now() - total_start).count();
      char buf[96];
      std::snprintf(buf, sizeof buf, "timeout after %.3fs (limit %.3fs): ", spent, *opts.timeout_secs);
      r.warnings.push_back(buf + std::string(current ? "result of the last completed round"
                                                      : "no round completed, precondition from the input"));
    }
  }
  Dnf swp = current ? extract_swp(*current) : extract_swp(p);
  r.precondition = psi.final_precondition(swp);
  r.classification = classify(r.precondition, r.original);
  if (r.classification == Classification::Undecided)
    r.warnings.push_back("classification undecided: integer search budget exhausted");
  watch.add("total", std::chrono::duration<double>(Clock::now() - total_start).count());
  for (const auto& w : warnings.warnings()) r.warnings.push_back(w);
  return r;
}

namespace {

VarNamer arg_namer(const Report& r) {
  return [names = r.arg_names](Var v) {
    return v.id < names.size() ? names[v.id] : positional_name(v.id);
  };
}

std::string dnf_text(const Dnf& d, const VarNamer& names) {
  if (d.is_false()) return "false";
  std::string out;
  for (std::size_t i = 0; i < d.disjuncts.size(); ++i) {
    if (i) out += " or ";
    const Conj& c = d.disjuncts[i];
    out += "(" + (c.empty() ? std::string("true") : c.to_string(names)) + ")";
  }
  return out;
}

nlohmann::ordered_json integer_json(const Integer& k) {
  if (k.fits_slong_p()) return k.get_si();
  return k.get_str();
}

nlohmann::ordered_json conj_json(const Conj& c, const VarNamer& names) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& k : c.constraints()) {
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
    for (const auto& [v, a] : k.terms()) coeffs[names(v)] = integer_json(a);
    out.push_back({{"coeffs", coeffs}, {"rel", k.rel() == Rel::Eq ? "=" : "=<"}, {"const", integer_json(k.rhs())}});
  }
  return out;
}

nlohmann::ordered_json dnf_json(const Dnf& d, const VarNamer& names) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& c : d.disjuncts) out.push_back(conj_json(c, names));
  return out;
}

const char* mode_name(Mode m) { return m == Mode::AsIs ? "as-is" : "strip-init"; }

}  // namespace

std::string report_text(const Report& r) {
  VarNamer names = arg_namer(r);
  std::string out;
  out += "input: " + r.input + "\n";
  out += std::string("mode: ") + mode_name(r.mode) + "\n";
  out += "iterations: " + std::to_string(r.rounds.empty() ? 0 : r.rounds.size() - 1) + " of " +
         std::to_string(r.iterations);
  if (r.converged) out += " (no counterexample left)";
  if (r.timed_out) out += " (timed out)";
  out += "\n";
  for (const auto& round : r.rounds) {
    if (!round.trace) continue;
    out += "round " + std::to_string(round.index) + ": eliminated " +
           (round.feasible ? "feasible" : "infeasible") + " trace " + round.trace->to_string();
    if (round.theta) out += ", excluded " + dnf_text(Dnf{{*round.theta}}, names);
    out += "\n";
  }
  if (r.original) out += "original: " + dnf_text(*r.original, names) + "\n";
  out += "precondition: " + dnf_text(r.precondition, names) + "\n";
  out += "classification: " + to_string(r.classification) + "\n";
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string report_json(const Report& r, bool with_timings) {
  VarNamer names = arg_namer(r);
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["mode"] = mode_name(r.mode);
  j["iterations"] = r.iterations;
  j["variables"] = r.arg_names;
  j["precondition"] = dnf_json(r.precondition, names);
  j["classification"] = to_string(r.classification);
  if (r.original) j["original"] = dnf_json(*r.original, names);
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const auto& round : r.rounds) {
    nlohmann::ordered_json x;
    x["index"] = round.index;
    x["swp"] = dnf_json(round.swp, names);
    if (round.trace) {
      x["eliminated"] = {{"trace", round.trace->to_string()}, {"feasible", round.feasible}};
      if (round.theta) x["eliminated"]["theta"] = conj_json(*round.theta, names);
    }
    rounds.push_back(std::move(x));
  }
  j["rounds"] = std::move(rounds);
  j["converged"] = r.converged;
  j["timed_out"] = r.timed_out;
  if (with_timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [stage, secs] : r.timings) t[stage] = secs;
    j["timings"] = std::move(t);
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_dump(const Report& r, const std::string& what) {
  if (what == "pe") return print_program(r.last_pe);
  if (what == "cs") return print_program(r.last_cs);
  if (what == "invariants") return dump_invariants(r.invariants);
  if (what == "trace") return r.pe_trace;
  throw std::invalid_argument("unknown dump kind " + what);
}

}  // namespace chcpre
