#pragma once

// Line-based definition files.
//
// Algebra:
//   algebra <name>
//   family <tag>                      (one per family, in print order)
//   param <name> [invertible]
//   rule <A> <B> -> <C> : <poly in d, l>
//   window <lo> <hi>                  (axiom check window, default -2 2)
//   restrict <lo> <hi>                (generators exist only for these indices)
//
// Module:
//   module <name>
//   algebra CHV | CW                  (default: CHV if any H action is given)
//   shape rank1 | graded <lo> <hi>
//   generators <lo> <hi>              (default -2 2, or the full span for graded)
//   param <name> [invertible]
//   action <L|H> <i> [<k>] : <poly in d, l>
//   bits <k>:<0|1>
//
// With bits present, L-actions not given explicitly follow the case split
// on (a_k, a_{i+k}) with parameter b.
//
// '#' starts a comment; blank lines are ignored.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/errors.hpp"
#include "ck/modules.hpp"
#include "ck/parser.hpp"

namespace ck {

namespace detail {

struct Line {
  int number = 0;
  std::string text;             // comment stripped
  std::vector<std::string> words;
};

inline std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Line line{n, raw, {}};
    std::istringstream words(raw);
    for (std::string w; words >> w;) line.words.push_back(w);
    if (!line.words.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] inline void line_error(const Line& line, const std::string& msg, int col = 1) {
  throw ParseError(msg, line.number, col);
}

inline int column_of(const Line& line, std::size_t word) {
  std::size_t pos = 0;
  for (std::size_t w = 0; w <= word && w < line.words.size(); ++w) {
    pos = line.text.find(line.words[w], pos);
    if (w < word) pos += line.words[w].size();
  }
  return static_cast<int>(pos) + 1;
}

inline int parse_int(const Line& line, std::size_t word) {
  if (word >= line.words.size()) line_error(line, "missing integer", static_cast<int>(line.text.size()) + 1);
  const std::string& w = line.words[word];
  try {
    std::size_t used = 0;
    const int v = std::stoi(w, &used);
    if (used != w.size()) throw std::invalid_argument(w);
    return v;
  } catch (const std::exception&) {
    line_error(line, "expected an integer, found '" + w + "'", column_of(line, word));
  }
}

/// Text after the first ':' parsed as a polynomial, with line:col positions.
inline Poly poly_after_colon(const Line& line, const EvalContext& ctx) {
  const auto colon = line.text.find(':');
  if (colon == std::string::npos) line_error(line, "expected ':' before the coefficient", static_cast<int>(line.text.size()) + 1);
  return parse_poly(line.text.substr(colon + 1), ctx, {line.number, static_cast<int>(colon) + 2});
}

inline void expect_words(const Line& line, std::size_t n, const std::string& usage) {
  if (line.words.size() != n) line_error(line, "expected '" + usage + "'");
}

inline void declare_param(const Line& line, EvalContext& ctx) {
  if (line.words.size() < 2 || line.words.size() > 3 || (line.words.size() == 3 && line.words[2] != "invertible")) {
    line_error(line, "expected 'param <name> [invertible]'");
  }
  ctx.parameters[line.words[1]] = line.words.size() == 3;
}

}  // namespace detail

/// Parses and validates an algebra definition.
inline StructureTable load_algebra(const std::string& text) {
  using namespace detail;
  std::optional<std::string> name;
  std::vector<std::string> families;
  StructureTable::RuleMap rules;
  IndexRange window{-2, 2};
  std::optional<IndexRange> restriction;
  EvalContext ctx;
  ctx.allow_undeclared = false;
  ctx.parameters.clear();
  std::vector<Line> rule_lines;
  for (const Line& line : split_lines(text)) {
    const std::string& kw = line.words[0];
    if (kw == "algebra") {
      expect_words(line, 2, "algebra <name>");
      if (name) line_error(line, "duplicate 'algebra' line");
      name = line.words[1];
    } else if (kw == "family") {
      expect_words(line, 2, "family <tag>");
      families.push_back(line.words[1]);
    } else if (kw == "param") {
      declare_param(line, ctx);
    } else if (kw == "rule") {
      rule_lines.push_back(line);
    } else if (kw == "window") {
      expect_words(line, 3, "window <lo> <hi>");
      window = {parse_int(line, 1), parse_int(line, 2)};
    } else if (kw == "restrict") {
      expect_words(line, 3, "restrict <lo> <hi>");
      restriction = IndexRange{parse_int(line, 1), parse_int(line, 2)};
    } else {
      line_error(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!name) throw ParseError("missing 'algebra <name>' line", 1, 1);
  for (const Line& line : rule_lines) {
    if (line.words.size() < 6 || line.words[3] != "->" || line.words[5].front() != ':') {
      line_error(line, "expected 'rule <A> <B> -> <C> : <poly>'");
    }
    const Poly p = poly_after_colon(line, ctx);
    if (!rules.emplace(std::make_pair(line.words[1], line.words[2]), Rule{line.words[4], p}).second) {
      line_error(line, "duplicate rule for " + line.words[1] + " " + line.words[2]);
    }
  }
  StructureTable table(*name, families, std::move(rules), window, restriction);
  validate(table);
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Canonical text of an algebra; load_algebra(print_algebra(t)) reproduces t.
inline std::string print_algebra(const StructureTable& t) {
  std::ostringstream out;
  out << "algebra " << t.name() << "\n";
  for (const auto& f : t.families()) out << "family " << f << "\n";
  std::map<std::string, bool> params;
  for (const auto& [key, rule] : t.rules()) {
    for (const auto& v : rule.coefficient.variables()) {
      if (v.name != vars::del.name && v.name != vars::lambda.name) params[v.name] = v.invertible;
    }
  }
  for (const auto& [n, inv] : params) out << "param " << n << (inv ? " invertible" : "") << "\n";
  for (const auto& a : t.families()) {
    for (const auto& b : t.families()) {
      if (const Rule* r = t.rule(a, b)) {
        out << "rule " << a << " " << b << " -> " << r->target << " : " << r->coefficient.to_string() << "\n";
      }
    }
  }
  out << "window " << t.window().lo << " " << t.window().hi << "\n";
  if (t.restriction()) out << "restrict " << t.restriction()->lo << " " << t.restriction()->hi << "\n";
  return out.str();
}

/// Parses a module definition.
inline ModuleSpec load_module(const std::string& text) {
  using namespace detail;
  std::optional<std::string> name, algebra;
  ModuleShape shape = ModuleShape::rank1;
  IndexRange grades{0, 0};
  std::optional<IndexRange> generators;
  std::map<int, int> bits;
  EvalContext ctx;
  ctx.allow_undeclared = true;
  std::vector<Line> action_lines;
  for (const Line& line : split_lines(text)) {
    const std::string& kw = line.words[0];
    if (kw == "module") {
      expect_words(line, 2, "module <name>");
      name = line.words[1];
    } else if (kw == "algebra") {
      expect_words(line, 2, "algebra CHV|CW");
      if (line.words[1] != "CHV" && line.words[1] != "CW") line_error(line, "modules are over CHV or CW", column_of(line, 1));
      algebra = line.words[1];
    } else if (kw == "shape") {
      if (line.words.size() == 2 && line.words[1] == "rank1") {
        shape = ModuleShape::rank1;
      } else if (line.words.size() == 4 && line.words[1] == "graded") {
        shape = ModuleShape::graded;
        grades = {parse_int(line, 2), parse_int(line, 3)};
        if (grades.size() == 0) line_error(line, "empty grade window", column_of(line, 2));
      } else {
        line_error(line, "expected 'shape rank1' or 'shape graded <lo> <hi>'");
      }
    } else if (kw == "generators") {
      expect_words(line, 3, "generators <lo> <hi>");
      generators = IndexRange{parse_int(line, 1), parse_int(line, 2)};
    } else if (kw == "param") {
      declare_param(line, ctx);
    } else if (kw == "action") {
      action_lines.push_back(line);
    } else if (kw == "bits") {
      expect_words(line, 2, "bits <k>:<0|1>");
      const std::string& w = line.words[1];
      const auto colon = w.find(':');
      if (colon == std::string::npos || colon + 2 != w.size() || (w.back() != '0' && w.back() != '1')) {
        line_error(line, "expected 'bits <k>:<0|1>'", column_of(line, 1));
      }
      Line head = line;
      head.words = {w.substr(0, colon)};
      bits[parse_int(head, 0)] = w.back() - '0';
    } else {
      line_error(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!name) throw ParseError("missing 'module <name>' line", 1, 1);
  std::map<std::tuple<std::string, int, int>, Poly> table;
  bool any_h = false;
  for (const Line& line : action_lines) {
    const auto colon = line.text.find(':');
    std::vector<std::string> head;
    {
      std::istringstream ws(line.text.substr(0, colon == std::string::npos ? line.text.size() : colon));
      for (std::string w; ws >> w;) head.push_back(w);
    }
    if (head.size() < 3 || head.size() > 4 || (head[1] != "L" && head[1] != "H")) {
      line_error(line, "expected 'action <L|H> <i> [<k>] : <poly>'");
    }
    Line h = line;
    h.words = head;
    const int i = parse_int(h, 2);
    const int k = head.size() == 4 ? parse_int(h, 3) : 0;
    if (shape == ModuleShape::rank1 && k != 0) line_error(line, "rank-one actions use k = 0", column_of(h, 3));
    if (shape == ModuleShape::graded && (!grades.contains(k) || !grades.contains(i + k))) {
      line_error(line, "action leaves the grade window " + grades.to_string());
    }
    any_h = any_h || head[1] == "H";
    if (!table.emplace(std::make_tuple(head[1], i, k), poly_after_colon(line, ctx)).second) {
      line_error(line, "duplicate action");
    }
  }
  const std::string alg = algebra.value_or(any_h ? "CHV" : "CW");
  if (alg == "CW" && any_h) throw ParseError("H-actions given for a module over CW", 1, 1);
  std::vector<std::string> families{"L"};
  if (alg == "CHV") families.push_back("H");
  const IndexRange gens =
      generators.value_or(shape == ModuleShape::graded ? IndexRange{grades.lo - grades.hi, grades.hi - grades.lo}
                                                       : IndexRange{-2, 2});
  ModuleSpec m = table_module(*name, shape, grades, gens, families, table);
  m.algebra = alg;
  if (!bits.empty()) {
    if (shape != ModuleShape::graded) throw ParseError("bits need a graded module", 1, 1);
    const BitSequenceWindow A(bits);
    m.bits = A;
    const Poly b = Poly::var("b");
    m.action = [table, gens, A, b](const std::string& f, int i, int k) -> std::optional<Poly> {
      if (!gens.contains(i)) return std::nullopt;
      auto it = table.find({f, i, k});
      if (it != table.end()) return it->second;
      if (f != "L") return Poly();
      if (!A.has(k) || !A.has(i + k)) return std::nullopt;
      return detail::bit_action(A.at(k), A.at(i + k), b);
    };
  }
  return m;
}

}  // namespace ck
