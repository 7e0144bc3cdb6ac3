#include "relog/bench.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "relog/translator.hpp"

namespace relog {

std::vector<Options> all_combos() {
  std::vector<Options> out;
  for (SortMode s : {SortMode::typed, SortMode::untyped})
    for (RelMode r : {RelMode::predicates, RelMode::functions})
      for (ScopeMode m : {ScopeMode::unscoped, ScopeMode::expand, ScopeMode::solver_fmf})
        out.push_back(Options{s, r, m});
  return out;
}

std::vector<Options> interesting_combos() {
  return {
      Options{SortMode::typed, RelMode::functions, ScopeMode::expand},
      Options{SortMode::typed, RelMode::predicates, ScopeMode::unscoped},
      Options{SortMode::untyped, RelMode::predicates, ScopeMode::unscoped},
      Options{SortMode::untyped, RelMode::predicates, ScopeMode::solver_fmf},
  };
}

std::vector<Options> parse_combo_selection(const std::string& sel) {
  if (sel == "all") return all_combos();
  if (sel == "interesting") return interesting_combos();
  std::vector<Options> out;
  std::stringstream ss(sel);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ps(item);
    std::string p;
    while (std::getline(ps, p, '-')) parts.push_back(p);
    if (parts.size() != 3)
      throw std::invalid_argument("combo '" + item +
                                  "' must look like typed-predicates-unscoped");
    out.push_back(Options{parse_sort_mode(parts[0]), parse_rel_mode(parts[1]),
                          parse_scope_mode(parts[2])});
  }
  if (out.empty()) throw std::invalid_argument("empty combo selection");
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string to_csv(const std::vector<SolveRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& r : records) {
    os << csv_field(r.model) << "," << to_string(r.options.sorts) << ","
       << to_string(r.options.rels) << "," << to_string(r.options.scope) << ","
       << r.translate_ms << "," << r.solve_ms << "," << to_string(r.result) << ","
       << csv_field(r.solver_id) << "," << r.timeout_ms << "\n";
  }
  return os.str();
}

Compiled compile_to_smtlib(const std::string& kkir_text, const Options& opts,
                           uint64_t expand_budget) {
  auto start = std::chrono::steady_clock::now();
  RelModel m = parse_model(kkir_text);
  TransResult tr = translate(m, opts);
  ScopedTheory scoped = apply_scope(tr.theory, tr.env, opts.sorts, opts.scope, expand_budget);
  auto diags = tfol::check_well_sorted(scoped.theory);
  if (!diags.empty())
    throw std::logic_error("ill-sorted translation: " + diags.front());
  Compiled c;
  c.smtlib = tfol::emit_smtlib(scoped.theory);
  c.translate_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return c;
}

std::vector<SolveRecord> run_bench(const std::string& dir, const std::vector<Options>& combos,
                                   const BenchConfig& cfg) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".kkir")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct Cell {
    std::string model;
    std::string text;
    Options opts;
  };
  std::vector<Cell> cells;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    for (const auto& o : combos) cells.push_back(Cell{f.stem().string(), text, o});
  }

  std::vector<SolveRecord> records(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      SolveRecord rec;
      rec.model = cell.model;
      rec.options = cell.opts;
      rec.solver_id = cfg.solver_cmd;
      rec.timeout_ms = cfg.timeout_ms;
      try {
        Compiled c = compile_to_smtlib(cell.text, cell.opts, cfg.expand_budget);
        rec.translate_ms = c.translate_ms;
        SolverRun run = run_solver(c.smtlib, cfg.solver_cmd, cfg.timeout_ms);
        rec.result = run.verdict;
        rec.solve_ms = run.solve_ms;
        rec.peak_note = run.detail;
      } catch (const std::exception& e) {
        rec.result = Verdict::ERROR;
        rec.peak_note = e.what();
      }
      records[i] = std::move(rec);
    }
  };

  unsigned n = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                               : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, std::max<size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace relog
