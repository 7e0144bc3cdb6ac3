#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relog {

enum class Verdict { SAT, UNSAT, UNKNOWN, TIMEOUT, ERROR };

std::string to_string(Verdict v);

struct SolverRun {
  Verdict verdict = Verdict::ERROR;
  int64_t solve_ms = 0;
  std::string detail;  // stderr tail / unrecognized first line on ERROR
};

// Writes the problem to a temporary file, substitutes {file} into the command
// template, runs the process and reads the first stdout line as
// sat/unsat/unknown. The whole process group is killed once timeout_ms
// elapses. Throws std::invalid_argument when the template lacks {file}.
SolverRun run_solver(const std::string& smtlib, const std::string& cmd_template,
                     int64_t timeout_ms);

// Shell-like splitting with single and double quotes.
std::vector<std::string> split_command(const std::string& tmpl);

// --solver-cmd flag value, else RELOG2SMT_SOLVER, else "z3 {file}".
std::string default_solver_command();

}  // namespace relog
