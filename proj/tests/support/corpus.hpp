#pragma once

// Corpus files replay ck invocations. Each case is
//
//   $ ck ARGS...
//   [exit N]          (optional, default 0)
//   expected output   (stdout and stderr, byte for byte)
//
// Cases are separated by blank lines; lines before the first case are comments.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ck::testing {

struct CorpusCase {
  int line = 0;
  std::string args;
  int exit_code = 0;
  std::string expected;
};

inline std::vector<CorpusCase> read_corpus(std::istream& in) {
  std::vector<CorpusCase> cases;
  std::vector<std::string> body;
  int n = 0;
  auto flush = [&] {
    if (cases.empty()) return;
    while (!body.empty() && body.back().empty()) body.pop_back();
    for (const auto& l : body) cases.back().expected += l + "\n";
    body.clear();
  };
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (line.rfind("$ ck", 0) == 0) {
      flush();
      cases.push_back({n, line.substr(4), 0, ""});
    } else if (cases.empty()) {
      continue;
    } else if (body.empty() && line.rfind("[exit ", 0) == 0) {
      cases.back().exit_code = std::stoi(line.substr(6));
    } else {
      body.push_back(line);
    }
  }
  flush();
  return cases;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

/// Output (stdout and stderr merged) and exit status of a shell command.
inline std::pair<std::string, int> run_shell(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {"popen failed\n", -1};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

struct CorpusResult {
  std::size_t cases = 0;
  std::size_t failed = 0;
};

/// Runs every case of `file` with `ck` from the file's directory; mismatches
/// are written to `log`.
inline CorpusResult run_corpus(const std::filesystem::path& ck, const std::filesystem::path& file, std::ostream& log) {
  CorpusResult r;
  std::ifstream in(file);
  if (!in) {
    log << "cannot open " << file.string() << "\n";
    r.failed = 1;
    return r;
  }
  const std::string dir = std::filesystem::absolute(file).parent_path().string();
  const std::string exe = std::filesystem::absolute(ck).string();
  for (const auto& c : read_corpus(in)) {
    ++r.cases;
    const auto [out, code] = run_shell("cd " + shell_quote(dir) + " && " + shell_quote(exe) + c.args + " 2>&1");
    if (out == c.expected && code == c.exit_code) continue;
    ++r.failed;
    log << file.filename().string() << ":" << c.line << ": FAIL: ck" << c.args << "\n"
        << "  expected (exit " << c.exit_code << "):\n"
        << c.expected << "  got (exit " << code << "):\n"
        << out;
  }
  return r;
}

}  // namespace ck::testing
