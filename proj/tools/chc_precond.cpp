#include "chcpre/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kTimedOut = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sufficient preconditions for constrained Horn clause programs"};
  app.require_subcommand(1);
  CLI::App* analyze = app.add_subcommand("analyze", "Compute a precondition for a CHC file");

  std::string file;
  std::size_t iterations = 3;
  double timeout = 300.0;
  std::string initial;
  bool strip = false;
  std::size_t max_nodes = 40;
  std::string format = "text";
  std::string dump;
  bool no_timings = false;
  analyze->add_option("file", file, "Input .chc file")->required();
  analyze->add_option("--iterations", iterations, "Refinement rounds")->check(CLI::NonNegativeNumber);
  analyze->add_option("--timeout", timeout, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  analyze->add_option("--initial", initial, "Initial predicate as name/arity");
  analyze->add_flag("--strip-init", strip, "Drop the constraints of the initial clauses first");
  analyze->add_option("--max-cex-nodes", max_nodes, "Counterexample size bound")->check(CLI::PositiveNumber);
  analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--dump", dump, "Also print an intermediate artefact")
      ->check(CLI::IsMember({"pe", "cs", "invariants", "trace"}));
  analyze->add_flag("--no-timings", no_timings, "Leave timings out of the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  std::ifstream in(file);
  if (!in) {
    std::cerr << file << ": error: cannot read file\n";
    return kInputError;
  }
  std::stringstream text;
  text << in.rdbuf();

  chcpre::Program program;
  try {
    chcpre::ParseOptions popts;
    if (!initial.empty()) popts.initial = initial;
    program = chcpre::parse_program(text.str(), popts);
  } catch (const chcpre::ParseError& e) {
    // the message already carries line:col when known
    std::cerr << file << ":" << (e.line() > 0 ? "" : " ") << e.what() << "\n";
    return kInputError;
  }

  chcpre::DriverOptions opts;
  opts.iterations = iterations;
  opts.timeout_secs = timeout;
  opts.mode = strip ? chcpre::Mode::StripInit : chcpre::Mode::AsIs;
  opts.search.max_nodes = max_nodes;

  chcpre::Report report;
  try {
    report = chcpre::analyze_program(program, file, opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << file << ": error: " << e.what() << "\n";
    return kInputError;
  }

  std::string extra = dump.empty() ? std::string() : chcpre::report_dump(report, dump);
  if (format == "json") {
    std::cout << chcpre::report_json(report, !no_timings);
    if (!extra.empty()) std::cerr << extra;
  } else {
    std::cout << chcpre::report_text(report);
    if (!extra.empty()) std::cout << "\n" << extra;
  }
  return report.timed_out ? kTimedOut : kOk;
}
