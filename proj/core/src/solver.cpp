#include "relog/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace relog {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SAT: return "SAT";
    case Verdict::UNSAT: return "UNSAT";
    case Verdict::UNKNOWN: return "UNKNOWN";
    case Verdict::TIMEOUT: return "TIMEOUT";
    case Verdict::ERROR: return "ERROR";
  }
  return "ERROR";
}

std::vector<std::string> split_command(const std::string& tmpl) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char c : tmpl) {
    if (quote) {
      if (c == quote)
        quote = 0;
      else
        cur.push_back(c);
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) {
        out.push_back(cur);
        cur.clear();
        in_token = false;
      }
      continue;
    }
    cur.push_back(c);
    in_token = true;
  }
  if (quote) throw std::invalid_argument("unterminated quote in solver command");
  if (in_token) out.push_back(cur);
  return out;
}

std::string default_solver_command() {
  if (const char* env = std::getenv("RELOG2SMT_SOLVER"); env && *env) return env;
  return "z3 {file}";
}

namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    const char* dir = std::getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/relog2smtXXXXXX.smt2";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    fd_ = mkstemps(buf.data(), 5);
    if (fd_ < 0) throw std::runtime_error("mkstemps failed: " + std::string(strerror(errno)));
    path_.assign(buf.data());
    size_t off = 0;
    while (off < contents.size()) {
      ssize_t n = write(fd_, contents.data() + off, contents.size() - off);
      if (n < 0) throw std::runtime_error("write failed: " + std::string(strerror(errno)));
      off += static_cast<size_t>(n);
    }
  }
  ~TempFile() {
    if (fd_ >= 0) close(fd_);
    if (!path_.empty()) unlink(path_.c_str());
  }
  const std::string& path() const { return path_; }

 private:
  int fd_ = -1;
  std::string path_;
};

void drain(int fd, std::string& out) {
  char buf[4096];
  while (true) {
    ssize_t n = read(fd, buf, sizeof buf);
    if (n <= 0) break;
    out.append(buf, static_cast<size_t>(n));
  }
}

std::string first_line(const std::string& s) {
  auto nl = s.find('\n');
  std::string line = nl == std::string::npos ? s : s.substr(0, nl);
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  return line;
}

std::string tail_of(const std::string& s, size_t n = 500) {
  if (s.size() <= n) return s;
  return "..." + s.substr(s.size() - n);
}

}  // namespace

SolverRun run_solver(const std::string& smtlib, const std::string& cmd_template,
                     int64_t timeout_ms) {
  std::vector<std::string> argv = split_command(cmd_template);
  if (argv.empty()) throw std::invalid_argument("empty solver command");
  bool has_placeholder = false;
  TempFile file(smtlib);
  for (auto& tok : argv) {
    size_t pos;
    while ((pos = tok.find("{file}")) != std::string::npos) {
      tok.replace(pos, 6, file.path());
      has_placeholder = true;
    }
  }
  if (!has_placeholder)
    throw std::invalid_argument("solver command template must contain {file}");

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw std::runtime_error("pipe failed: " + std::string(strerror(errno)));

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed: " + std::string(strerror(errno)));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    std::vector<char*> cargv;
    for (auto& tok : argv) cargv.push_back(tok.data());
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    fprintf(stderr, "exec %s: %s\n", cargv[0], strerror(errno));
    _exit(127);
  }
  setpgid(pid, pid);  // best effort; the child does the same
  close(out_pipe[1]);
  close(err_pipe[1]);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

  std::string out, err;
  bool timed_out = false;
  int status = 0;
  while (true) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    if (elapsed >= timeout_ms) {
      timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      break;
    }
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    int wait_ms = static_cast<int>(std::min<int64_t>(50, timeout_ms - elapsed));
    poll(fds, 2, std::max(wait_ms, 1));
    drain(out_pipe[0], out);
    drain(err_pipe[0], err);
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
  }
  drain(out_pipe[0], out);
  drain(err_pipe[0], err);
  close(out_pipe[0]);
  close(err_pipe[0]);

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  SolverRun run;
  if (timed_out) {
    run.verdict = Verdict::TIMEOUT;
    run.solve_ms = std::max<int64_t>(elapsed, timeout_ms);
    return run;
  }
  run.solve_ms = elapsed;
  std::string line = first_line(out);
  if (line == "sat")
    run.verdict = Verdict::SAT;
  else if (line == "unsat")
    run.verdict = Verdict::UNSAT;
  else if (line == "unknown")
    run.verdict = Verdict::UNKNOWN;
  else {
    run.verdict = Verdict::ERROR;
    bool failed = !WIFEXITED(status) || WEXITSTATUS(status) != 0;
    run.detail = failed ? tail_of(err)
                        : (line.empty() ? "no solver output" : "unrecognized output: " + line);
    if (run.detail.empty()) run.detail = "solver exited with a failure and no stderr";
  }
  return run;
}

}  // namespace relog
