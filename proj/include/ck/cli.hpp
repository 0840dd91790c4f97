#pragma once

// Command-line front end. Exit codes: 0 success, 1 a mathematical check
// failed, 2 usage or parse error.

#include <unistd.h>

#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ck/algebra.hpp"
#include "ck/algebra_io.hpp"
#include "ck/derivations.hpp"
#include "ck/errors.hpp"
#include "ck/formal_dist.hpp"
#include "ck/modules.hpp"
#include "ck/parser.hpp"

namespace ck::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

/// Raised for malformed command arguments.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline IndexRange parse_window(const std::string& text) {
  static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("expected a window LO..HI, found '" + text + "'");
  const IndexRange w{std::stoi(m[1]), std::stoi(m[2])};
  if (w.size() == 0) throw UsageError("empty window " + text);
  return w;
}

inline int parse_int_arg(const std::string& text, const std::string& what) {
  static const std::regex re(R"(\s*-?\d{1,9}\s*)");
  if (!std::regex_match(text, re)) throw UsageError("expected an integer " + what + ", found '" + text + "'");
  return std::stoi(text);
}

inline bool is_assignment(const std::string& s) {
  static const std::regex re(R"([A-Za-z][A-Za-z0-9]*=.*)");
  return std::regex_match(s, re);
}

/// Splits `k=v` tokens (and comma-separated lists of them) into a map.
inline std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> out;
  for (const auto& token : tokens) {
    std::stringstream ss(token);
    for (std::string part; std::getline(ss, part, ',');) {
      const auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("expected k=v, found '" + part + "'");
      out[part.substr(0, eq)] = part.substr(eq + 1);
    }
  }
  return out;
}

inline GeneratorId parse_generator(const std::string& text, const StructureTable& table) {
  EvalContext ctx;
  ctx.algebra = &table;
  const Element e = parse_element(text, ctx);
  if (e.size() != 1 || !(e.terms().begin()->second == Poly(1))) {
    throw UsageError("expected a single generator such as L[1], found '" + text + "'");
  }
  return e.terms().begin()->first;
}

inline LoopBasisSymbol parse_loop_symbol(const std::string& text) {
  static const std::regex re(R"(\s*([LH])\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("expected a loop basis element such as L(1,0), found '" + text + "'");
  return {m[1] == "L" ? LoopFamily::L : LoopFamily::H, std::stoi(m[2]), std::stoi(m[3])};
}

inline bool is_builtin_algebra(const std::string& name) { return name == "CHV" || name == "CW" || name == "CVir"; }

/// Builtin name or path to a definition file.
inline StructureTable resolve_algebra(const std::string& name_or_file) {
  if (is_builtin_algebra(name_or_file)) return builtin_algebra(name_or_file);
  return load_algebra(read_file(name_or_file));
}

/// Derivation descriptors:
///   inner:<element>   outer:<c>:<poly>   vector:<c>=<poly>,...   table:<c>:<f1>,<f2>,<f3>,<f4>
inline DerivationDescriptor parse_derivation(const std::string& text, const StructureTable& table) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("derivation must start with inner:, outer:, vector: or table:");
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);
    return parts;
  };
  if (kind == "inner") {
    EvalContext ctx;
    ctx.algebra = &table;
    return InnerDerivation{parse_element(rest, ctx)};
  }
  if (kind == "outer") {
    const auto c = rest.find(':');
    if (c == std::string::npos) throw UsageError("expected outer:<c>:<poly>");
    return OuterScalar{parse_int_arg(rest.substr(0, c), "degree"), parse_poly(rest.substr(c + 1))};
  }
  if (kind == "vector") {
    OuterVector v;
    for (const auto& part : split(rest, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw UsageError("expected vector:<c>=<poly>,...");
      v.a[parse_int_arg(part.substr(0, eq), "degree")] += parse_poly(part.substr(eq + 1));
    }
    return v;
  }
  if (kind == "table") {
    const auto c = rest.find(':');
    if (c == std::string::npos) throw UsageError("expected table:<c>:<f1>,<f2>,<f3>,<f4>");
    const auto fs = split(rest.substr(c + 1), ',');
    if (fs.size() != 4) throw UsageError("a table derivation needs four polynomials");
    return TableDerivation{parse_int_arg(rest.substr(0, c), "degree"), parse_poly(fs[0]), parse_poly(fs[1]),
                           parse_poly(fs[2]), parse_poly(fs[3])};
  }
  throw UsageError("unknown derivation kind '" + kind + "'");
}

/// Single-degree table components of a descriptor.
inline std::vector<TableDerivation> table_components(const StructureTable& table, const DerivationDescriptor& D) {
  std::vector<TableDerivation> out;
  if (const auto* t = std::get_if<TableDerivation>(&D)) {
    out.push_back(*t);
  } else if (const auto* in = std::get_if<InnerDerivation>(&D)) {
    std::map<int, Element> by_grade;
    for (const auto& [g, p] : in->x.terms()) by_grade[g.index].add(g, p);
    for (const auto& [c, x] : by_grade) out.push_back(to_table(table, InnerDerivation{x}, c));
  } else if (const auto* os = std::get_if<OuterScalar>(&D)) {
    out.push_back(to_table(table, *os, os->degree));
  } else if (const auto* ov = std::get_if<OuterVector>(&D)) {
    for (const auto& [c, a] : ov->a) out.push_back(to_table(table, OuterScalar{c, a}, c));
  } else {
    throw UsageError("windowed derivations have no table form");
  }
  return out;
}

inline std::string print_module(const ModuleSpec& m) {
  std::ostringstream out;
  out << "module " << m.name << "\n";
  out << "algebra " << m.algebra << "\n";
  if (m.shape == ModuleShape::rank1) {
    out << "shape rank1\n";
  } else {
    out << "shape graded " << m.grades.lo << " " << m.grades.hi << "\n";
  }
  out << "generators " << m.generators.lo << " " << m.generators.hi << "\n";
  if (m.bits) {
    for (const auto& [k, b] : m.bits->bits()) out << "bits " << k << ":" << b << "\n";
  }
  for (const auto& [f, i, k, p] : action_table(m, m.generators)) {
    out << "action " << f << " " << i;
    if (m.shape == ModuleShape::graded) out << " " << k;
    out << " : " << p.to_string() << "\n";
  }
  return out.str();
}

/// Builtin module families and their parameters:
///   M a b q hc | Mprime a b | Vab a b | Vabc a b hc | VAb bits lo b | VAbc bits lo b hc
/// Unset parameters stay symbolic. `grades` applies to Vab and Vabc.
inline ModuleSpec resolve_module(const std::string& name, const std::map<std::string, std::string>& assignments,
                                 std::optional<IndexRange> grades = std::nullopt) {
  std::map<std::string, std::string> rest = assignments;
  auto take_poly = [&](const std::string& key, Poly fallback) {
    auto it = rest.find(key);
    if (it == rest.end()) return fallback;
    Poly p = parse_poly(it->second);
    rest.erase(it);
    return p;
  };
  auto finish = [&](ModuleSpec m) {
    if (!rest.empty()) throw UsageError("unknown parameter '" + rest.begin()->first + "' for module " + name);
    return m;
  };
  auto bit_window = [&]() {
    auto it = rest.find("bits");
    if (it == rest.end()) throw UsageError("module " + name + " needs bits=<0|1 string>");
    const std::string s = it->second;
    rest.erase(it);
    if (s.empty() || s.find_first_not_of("01") != std::string::npos) throw UsageError("bits must be a 0/1 string");
    int lo = -static_cast<int>(s.size() / 2);
    if (auto l = rest.find("lo"); l != rest.end()) {
      lo = parse_int_arg(l->second, "lo");
      rest.erase(l);
    }
    std::map<int, int> bits;
    for (std::size_t t = 0; t < s.size(); ++t) bits[lo + static_cast<int>(t)] = s[t] - '0';
    return BitSequenceWindow(bits);
  };
  if (name == "M") {
    const Poly a = take_poly("a", params::a()), b = take_poly("b", params::b());
    const Poly q = take_poly("q", params::loop()), hc = take_poly("hc", params::hc());
    if (!q.is_unit()) throw UsageError("q must be invertible, got " + q.to_string());
    return finish(build_M(a, b, q, hc));
  }
  if (name == "Mprime") {
    const Poly a = take_poly("a", params::a()), b = take_poly("b", params::b());
    return finish(build_Mprime(a, b));
  }
  if (name == "Vab") {
    const Poly a = take_poly("a", params::a()), b = take_poly("b", params::b());
    return finish(build_V_ab(a, b, grades.value_or(kDefaultGradeWindow)));
  }
  if (name == "Vabc") {
    const Poly a = take_poly("a", params::a()), b = take_poly("b", params::b()), hc = take_poly("hc", params::hc());
    return finish(build_V_abc(a, b, hc, grades.value_or(kDefaultGradeWindow)));
  }
  if (name == "VAb" || name == "VAbc") {
    const BitSequenceWindow A = bit_window();
    const Poly b = take_poly("b", params::b());
    if (name == "VAb") return finish(build_V_Ab(A, b));
    return finish(build_V_Abc(A, b, take_poly("hc", params::hc())));
  }
  // definition file; assignments substitute parameters
  ModuleSpec m = load_module(read_file(name));
  if (!rest.empty()) {
    std::map<std::string, Poly> values;
    for (const auto& [k, v] : rest) values[k] = parse_poly(v);
    ActionFn inner = m.action;
    m.action = [inner, values](const std::string& f, int i, int k) -> std::optional<Poly> {
      auto p = inner(f, i, k);
      if (p) p = compose(*p, values);
      return p;
    };
  }
  return m;
}

inline std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) out.push_back(cur);
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote) throw UsageError("unterminated quote");
  if (in_word) out.push_back(cur);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

constexpr std::size_t kMaxReportedFailures = 10;

template <class Failures>
int report_failures(std::ostream& out, const Failures& failures, std::size_t checked, const std::string& unit) {
  std::size_t shown = 0;
  for (const auto& f : failures) {
    if (shown++ == kMaxReportedFailures) break;
    out << "FAIL: " << f.describe() << "\n";
  }
  if (failures.size() > kMaxReportedFailures) out << "... " << failures.size() - kMaxReportedFailures << " more\n";
  out << "FAILED: " << failures.size() << " failing identities over " << checked << " " << unit << "\n";
  return kFailed;
}

inline int repl(std::istream& in, std::ostream& out, std::ostream& err) {
  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::string line;
  int last = kOk;
  while (true) {
    if (interactive) out << "ck> " << std::flush;
    if (!std::getline(in, line)) break;
    std::vector<std::string> words;
    try {
      words = split_words(line);
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      last = kUsage;
      continue;
    }
    if (words.empty()) continue;
    if (words[0] == "quit" || words[0] == "exit") break;
    if (words[0] == "repl") {
      err << "error: already in the REPL\n";
      continue;
    }
    last = run(words, out, err);
  }
  return last;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  // hyphenated aliases: deriv-check -> deriv check, module-probe -> module probe, ...
  if (!args.empty()) {
    static const std::regex alias(R"((deriv|module|dist|poly)-([a-z]+))");
    std::smatch m;
    if (std::regex_match(args[0], m, alias)) {
      const std::string group = m[1], verb = m[2];
      args.erase(args.begin());
      args.insert(args.begin(), {group, verb});
    }
  }

  static const std::set<std::string> verbs{"bracket", "skew", "jacobi", "load", "poly", "deriv", "dist", "module", "repl"};
  if (!args.empty() && args[0].rfind("-", 0) != 0 && !verbs.count(args[0])) {
    err << "usage error: unknown command '" << args[0] << "'\n";
    return kUsage;
  }

  CLI::App app{"Lie conformal algebra kernel: brackets, distributions, derivations and modules", "ck"};
  app.require_subcommand(1);
  std::string window_text, algebra_file, module_file;
  std::vector<std::string> global_params;
  app.add_option("--window", window_text, "index window LO..HI");
  app.add_option("--algebra", algebra_file, "algebra definition file");
  app.add_option("--module", module_file, "module definition file");
  app.add_option("--params", global_params, "parameters k=v,...")->delimiter(',');

  auto window = [&]() -> std::optional<IndexRange> {
    if (window_text.empty()) return std::nullopt;
    return parse_window(window_text);
  };
  auto algebra_or = [&](const std::string& name) {
    if (!algebra_file.empty()) return load_algebra(read_file(algebra_file));
    return resolve_algebra(name);
  };
  int code = kOk;
  std::function<int()> action;

  auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // bracket
  std::string alg_name = "CHV", expr_text;
  {
    CLI::App* s = sub(&app, "bracket", "evaluate an expression such as \"[L[1] _l L[2]]\" in an algebra");
    s->add_option("algebra", alg_name, "CHV, CW, CVir or a definition file")->required();
    s->add_option("expr", expr_text, "expression")->required();
    s->callback([&] {
      action = [&] {
        const StructureTable t = algebra_or(alg_name);
        EvalContext ctx;
        ctx.algebra = &t;
        out << format(eval(expr_text, ctx)) << "\n";
        return kOk;
      };
    });
  }

  // skew / jacobi
  std::string window_pos;
  for (const std::string which : {"skew", "jacobi"}) {
    CLI::App* s = sub(&app, which, which == "skew" ? "check skew-symmetry on a window" : "check the Jacobi identity on a window");
    s->add_option("algebra", alg_name, "CHV, CW, CVir or a definition file")->required();
    s->add_option("window", window_pos, "LO..HI");
    s->callback([&, which] {
      action = [&, which] {
        const StructureTable t = algebra_or(alg_name);
        IndexRange w = t.window();
        if (!window_pos.empty()) {
          w = parse_window(window_pos);
        } else if (auto g = window()) {
          w = *g;
        }
        const AxiomReport r = which == "skew" ? verify_skew(t, w) : verify_jacobi(t, w);
        const std::string unit = which == "skew" ? "pairs" : "triples";
        if (!r.ok()) return detail::report_failures(out, r.failures, r.checked, unit);
        out << "OK: " << r.checked << " " << unit << ", all residuals zero\n";
        return kOk;
      };
    });
  }

  // load
  std::string load_target;
  {
    CLI::App* s = sub(&app, "load", "print the canonical form of an algebra or module definition");
    s->add_option("target", load_target, "builtin algebra name or definition file");
    s->callback([&] {
      action = [&] {
        if (load_target.empty()) load_target = !module_file.empty() ? module_file : algebra_file;
        if (load_target.empty()) throw UsageError("load needs a name or file");
        if (is_builtin_algebra(load_target)) {
          out << print_algebra(builtin_algebra(load_target));
          return kOk;
        }
        const std::string text = read_file(load_target);
        std::istringstream first(text);
        std::string word;
        for (std::string line; std::getline(first, line);) {
          if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
          std::istringstream ws(line);
          if (ws >> word) break;
        }
        if (word == "module") {
          out << print_module(load_module(text));
        } else {
          out << print_algebra(load_algebra(text));
        }
        return kOk;
      };
    });
  }

  // poly
  std::vector<std::string> poly_args;
  {
    CLI::App* p = sub(&app, "poly", "polynomial utilities");
    p->require_subcommand(1);
    struct Spec {
      const char* name;
      const char* desc;
    };
    for (const Spec& spec : {Spec{"coeff", "coefficient: EXPR VAR K"}, Spec{"expand", "canonical form: EXPR"},
                             Spec{"subst", "substitute: EXPR VAR=EXPR..."}, Spec{"divide", "division: P D VAR"}}) {
      CLI::App* s = sub(p, spec.name, spec.desc);
      s->add_option("args", poly_args)->required();
      const std::string verb = spec.name;
      s->callback([&, verb] {
        action = [&, verb] {
          auto var_of = [](const std::string& n) { return Var{n, n == "q"}; };
          auto need = [&](std::size_t n, const std::string& usage) {
            if (poly_args.size() != n) throw UsageError("usage: poly " + verb + " " + usage);
          };
          if (verb == "coeff") {
            need(3, "EXPR VAR K");
            out << coeff_of(parse_poly(poly_args[0]), var_of(poly_args[1]), parse_int_arg(poly_args[2], "power"))
                       .to_string()
                << "\n";
          } else if (verb == "expand") {
            need(1, "EXPR");
            out << parse_poly(poly_args[0]).to_string() << "\n";
          } else if (verb == "subst") {
            if (poly_args.size() < 2) throw UsageError("usage: poly subst EXPR VAR=EXPR...");
            std::map<std::string, Poly> values;
            for (const auto& [k, v] : parse_assignments({poly_args.begin() + 1, poly_args.end()})) {
              values[k] = parse_poly(v);
            }
            out << compose(parse_poly(poly_args[0]), values).to_string() << "\n";
          } else {
            need(3, "P D VAR");
            const DivisionResult r = divide_in(parse_poly(poly_args[0]), parse_poly(poly_args[1]), var_of(poly_args[2]));
            out << "quotient: " << r.quotient.to_string() << "\nremainder: " << r.remainder.to_string() << "\n";
          }
          return kOk;
        };
      });
    }
  }

  // deriv
  std::string deriv_text;
  std::vector<std::string> deriv_args;
  {
    CLI::App* p = sub(&app, "deriv", "conformal derivations of CHV");
    p->require_subcommand(1);
    CLI::App* apply_cmd = sub(p, "apply", "image of an element: DESC EXPR");
    apply_cmd->add_option("derivation", deriv_text)->required();
    apply_cmd->add_option("expr", expr_text)->required();
    apply_cmd->callback([&] {
      action = [&] {
        const StructureTable t = algebra_or("CHV");
        EvalContext ctx;
        ctx.algebra = &t;
        const DerivationDescriptor D = parse_derivation(deriv_text, t);
        out << apply(t, D, parse_element(expr_text, ctx)).to_string() << "\n";
        return kOk;
      };
    });
    CLI::App* check_cmd = sub(p, "check", "check the derivation identity: DESC [LO..HI]");
    check_cmd->add_option("derivation", deriv_text)->required();
    check_cmd->add_option("window", window_pos);
    check_cmd->callback([&] {
      action = [&] {
        const StructureTable t = algebra_or("CHV");
        const DerivationDescriptor D = parse_derivation(deriv_text, t);
        const IndexRange w = !window_pos.empty() ? parse_window(window_pos) : window().value_or(IndexRange{-2, 2});
        std::size_t checked = 0;
        const auto failures = verify_derivation(t, D, w, &checked);
        if (!failures.empty()) return detail::report_failures(out, failures, checked, "pairs");
        out << "OK: " << checked << " pairs, all residuals zero\n";
        return kOk;
      };
    });
    CLI::App* dec_cmd = sub(p, "decompose", "split into inner and outer parts: DESC");
    dec_cmd->add_option("derivation", deriv_text)->required();
    dec_cmd->callback([&] {
      action = [&] {
        const StructureTable t = algebra_or("CHV");
        for (const TableDerivation& c : table_components(t, parse_derivation(deriv_text, t))) {
          const DerivationSplit s = decompose_degree_c(t, c);
          out << "degree " << c.degree << ": g = " << s.g.to_string() << ", h = " << s.h.to_string()
              << ", a = " << s.a.to_string() << "\n";
        }
        return kOk;
      };
    });
  }

  // dist
  std::vector<std::string> dist_args;
  {
    CLI::App* p = sub(&app, "dist", "formal distributions of the loop Heisenberg-Virasoro algebra");
    p->require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> verbs{
        {"hv", "loop algebra bracket: X Y, e.g. L(1,0) L(-1,2)"},
        {"series", "generating series: FAM INDEX [EXPONENT]"},
        {"delta", "delta(z,w) coefficients: [M N]"},
        {"commutator", "[X(z), Y(w)]: X Y"},
        {"locality", "locality order: X Y"},
        {"decompose", "delta decomposition coefficients: X Y"},
        {"fourier", "lambda-bracket from distributions: X Y"},
        {"compare", "structure table minus Fourier transform: X Y"},
        {"verify", "commutator against the delta expansion of the table: X Y"}};
    for (const auto& [name, desc] : verbs) {
      CLI::App* s = sub(p, name, desc);
      s->add_option("args", dist_args);
      const std::string verb = name;
      s->callback([&, verb] {
        action = [&, verb] {
          const IndexRange w = window().value_or(kDefaultDistWindow);
          const StructureTable t = builtin_algebra("CHV");
          auto need = [&](std::size_t lo, std::size_t hi, const std::string& usage) {
            if (dist_args.size() < lo || dist_args.size() > hi) throw UsageError("usage: dist " + verb + " " + usage);
          };
          if (verb == "hv") {
            need(2, 2, "X Y");
            out << hv_bracket(parse_loop_symbol(dist_args[0]), parse_loop_symbol(dist_args[1])).to_string() << "\n";
            return kOk;
          }
          if (verb == "series") {
            need(2, 3, "FAM INDEX [EXPONENT]");
            if (dist_args[0] != "L" && dist_args[0] != "H") throw UsageError("family must be L or H");
            const auto s = dist_generator(dist_args[0], parse_int_arg(dist_args[1], "index"), w);
            if (dist_args.size() == 3) {
              const int n = parse_int_arg(dist_args[2], "exponent");
              if (!s.window().contains(n)) throw WindowError("exponent " + std::to_string(n) + " outside " + w.to_string());
              out << s.at(n).to_string() << "\n";
            } else {
              out << s.to_string("z");
            }
            return kOk;
          }
          if (verb == "delta") {
            need(0, 2, "[M N]");
            const auto dl = delta(w);
            if (dist_args.size() == 2) {
              const int m = parse_int_arg(dist_args[0], "z exponent"), n = parse_int_arg(dist_args[1], "w exponent");
              const auto v = dl.known(m, n);
              if (!v) throw WindowError("cell outside the window");
              out << v->to_string() << "\n";
            } else if (dist_args.empty()) {
              out << dl.to_string();
            } else {
              throw UsageError("usage: dist delta [M N]");
            }
            return kOk;
          }
          need(2, 2, "X Y");
          const GeneratorId x = parse_generator(dist_args[0], t), y = parse_generator(dist_args[1], t);
          const auto a = generator_commutator(x, y, w);
          constexpr int kBound = 8;
          // lambda^k vanishes from the locality order on
          auto transform = [&] {
            const auto n = locality_order(a, kBound);
            if (!n) throw DomainError("distribution is not local within order " + std::to_string(kBound));
            return fourier(a, *n - 1);
          };
          if (verb == "commutator") {
            out << a.to_string();
          } else if (verb == "locality") {
            const auto n = locality_order(a, kBound);
            if (!n) {
              out << "not local up to order " << kBound << "\n";
              return kFailed;
            }
            out << *n << "\n";
          } else if (verb == "decompose") {
            const auto parts = delta_decompose(a, kBound);
            out << "[";
            for (std::size_t j = 0; j < parts.size(); ++j) out << (j ? ", " : "") << identify_generators(parts[j]).to_string();
            out << "]\n";
          } else if (verb == "fourier") {
            out << identify_lambda(transform()).to_string() << "\n";
          } else if (verb == "compare") {
            const LambdaElement r = compare_with_structure_table(transform(), t, x, y);
            out << r.to_string() << "\n";
            return r.is_zero() ? kOk : kFailed;
          } else {
            const int span = 4 * std::max(std::abs(w.lo), std::abs(w.hi)) + 4;
            const auto rhs = delta_expansion(bracket_gen(t, x, y), a.z_window(), {-span, span});
            const CellComparison c = compare_on_valid(a, rhs);
            if (c.mismatched != 0) {
              out << "FAIL: " << c.mismatched << " of " << c.compared << " cells differ\n";
              return kFailed;
            }
            out << "OK: " << c.compared << " cells agree\n";
          }
          return kOk;
        };
      });
    }
  }

  // module
  std::vector<std::string> module_args;
  int max_deg = 3;
  {
    CLI::App* p = sub(&app, "module", "conformal modules");
    p->require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> verbs{
        {"act", "MOD [k=v...] EXPR, e.g. \"L[1] _l v[0]\""},
        {"check", "MOD [k=v...]: compatibility identity on the generator window"},
        {"constraints", "MOD [k=v...] LH|HH|LL I J K: residual of one identity"},
        {"probe", "MOD [k=v...] [--max-deg N]: search for a proper submodule"},
        {"submodule", "MOD [k=v...] P: is C[d]P(d)v closed"},
        {"induced", "MOD [k=v...] P X: action of X on P(d)v"},
        {"independence", "MOD [k=v...]: is each H-coefficient free of d"},
        {"table", "MOD [k=v...]: action table"}};
    for (const auto& [name, desc] : verbs) {
      CLI::App* s = sub(p, name, desc);
      s->add_option("args", module_args);
      if (name == "probe") s->add_option("--max-deg", max_deg, "largest degree searched");
      const std::string verb = name;
      s->callback([&, verb] {
        action = [&, verb] {
          std::vector<std::string> rest, assigns = global_params;
          for (const auto& a : module_args) (is_assignment(a) ? assigns : rest).push_back(a);
          std::string source = module_file;
          if (source.empty()) {
            if (rest.empty()) throw UsageError("module " + verb + " needs a module name or --module FILE");
            source = rest.front();
            rest.erase(rest.begin());
          }
          const ModuleSpec m = resolve_module(source, parse_assignments(assigns), window());
          const StructureTable t = builtin_algebra(m.algebra);
          auto need = [&](std::size_t n, const std::string& usage) {
            if (rest.size() != n) throw UsageError("usage: module " + verb + " MOD [k=v...] " + usage);
          };
          EvalContext ctx;
          ctx.algebra = &t;
          ctx.module = &m;
          if (verb == "act") {
            need(1, "EXPR");
            out << format(eval(rest[0], ctx)) << "\n";
          } else if (verb == "check") {
            need(0, "");
            if (m.nontrivial && is_trivial(m)) throw AxiomViolation(m.name + " is trivial");
            const ModuleReport r = check_module(t, m, m.generators);
            if (!r.ok()) return detail::report_failures(out, r.failures, r.checked, "identities");
            out << "OK\n";
          } else if (verb == "constraints") {
            need(4, "LH|HH|LL I J K");
            ConstraintKind kind;
            if (rest[0] == "LH") {
              kind = ConstraintKind::LH;
            } else if (rest[0] == "HH") {
              kind = ConstraintKind::HH;
            } else if (rest[0] == "LL") {
              kind = ConstraintKind::LL;
            } else {
              throw UsageError("constraint kind must be LH, HH or LL");
            }
            out << generate_constraints(t, m, kind, parse_int_arg(rest[1], "i"), parse_int_arg(rest[2], "j"),
                                        parse_int_arg(rest[3], "k"))
                       .to_string()
                << "\n";
          } else if (verb == "probe") {
            need(0, "");
            out << irreducibility_probe(m, max_deg).to_string() << "\n";
          } else if (verb == "submodule") {
            need(1, "P");
            out << (rank1_submodule_closed(parse_poly(rest[0]), m) ? "true" : "false") << "\n";
          } else if (verb == "induced") {
            need(2, "P X");
            const GeneratorId x = parse_generator(rest[1], t);
            out << induced_rank1_action(parse_poly(rest[0]), m, x.family, x.index).to_string() << "\n";
          } else if (verb == "independence") {
            need(0, "");
            for (const auto& [key, ok] : check_partial_independence(m)) {
              out << "H[" << key.first << "] v[" << key.second << "]: " << (ok ? "true" : "false") << "\n";
            }
          } else {
            need(0, "");
            for (const auto& [f, i, k, c] : action_table(m, m.generators)) {
              out << f << "[" << i << "] _l v[" << k << "] = "
                  << ModuleVector::of(BasisVector{m.target(i, k)}, c).to_string() << "\n";
            }
          }
          return kOk;
        };
      });
    }
  }

  // repl
  {
    CLI::App* s = sub(&app, "repl", "read commands from standard input");
    s->callback([&] { action = [&] { return detail::repl(std::cin, out, err); }; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    code = action ? action() : kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const AxiomViolation& e) {
    err << "axiom violation: " << e.what() << "\n";
    return kFailed;
  } catch (const NotADerivation& e) {
    err << "not a derivation: " << e.what() << "\n";
    return kFailed;
  } catch (const Mismatch& e) {
    err << "mismatch: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

}  // namespace ck::cli
