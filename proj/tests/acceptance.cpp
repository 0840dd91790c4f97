// End-to-end acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance CK_BINARY CORPUS_DIR

#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/derivations.hpp"
#include "ck/formal_dist.hpp"
#include "ck/modules.hpp"
#include "ck/parser.hpp"
#include "support/closed_forms.hpp"
#include "support/corpus.hpp"
#include "support/oracle.hpp"

namespace {

using namespace ck;
using testing::Random;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

const StructureTable& chv() {
  static const StructureTable t = builtin_algebra("CHV");
  return t;
}

std::vector<GeneratorId> generators(IndexRange w) {
  std::vector<GeneratorId> out;
  for (const std::string f : {"L", "H"}) {
    for (int i = w.lo; i <= w.hi; ++i) out.push_back({f, i});
  }
  return out;
}

Outcome axioms() {
  Outcome o;
  const AxiomReport skew = verify_skew(chv(), {-3, 3});
  const AxiomReport jac = verify_jacobi(chv(), {-3, 3});
  if (!skew.ok()) o.fail(skew.failures.front().describe());
  if (!jac.ok()) o.fail(jac.failures.front().describe());
  if (skew.checked != 49 || jac.checked != 343) {
    o.fail("checked " + std::to_string(skew.checked) + " pairs and " + std::to_string(jac.checked) + " triples");
  }
  if (o.ok) o.detail = "49 pairs, 343 triples";
  return o;
}

Outcome distributions() {
  Outcome o;
  const IndexRange win{-6, 6};
  std::size_t cells = 0, pairs = 0;
  for (const auto& x : generators({-2, 2})) {
    for (const auto& y : generators({-2, 2})) {
      const std::string pair = x.to_string() + ", " + y.to_string();
      const auto a = generator_commutator(x, y, win);
      for (int m = win.lo; m <= win.hi; ++m) {
        for (int n = win.lo; n <= win.hi; ++n) {
          if (!a.valid(m, n)) continue;
          ++cells;
          if (!(a.at(m, n) == testing::commutator_cell(x, y, m, n))) o.fail("closed form differs for " + pair);
        }
      }
      const auto expansion = delta_expansion(bracket_gen(chv(), x, y), a.z_window(), {-28, 28});
      if (!compare_on_valid(a, expansion).equal()) o.fail("delta expansion differs for " + pair);
      const auto order = locality_order(a, 6);
      if (!order || *order > 2) o.fail("locality order above 2 for " + pair);
      if (!compare_with_structure_table(fourier(a, 2), chv(), x, y).is_zero()) o.fail("Fourier transform differs for " + pair);
      ++pairs;
    }
  }
  if (o.ok) o.detail = std::to_string(pairs) + " pairs, " + std::to_string(cells) + " cells";
  return o;
}

Outcome decomposition_round_trip() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& x : generators({-2, 2})) {
    for (const auto& y : generators({-2, 2})) {
      const auto a = generator_commutator(x, y);
      const auto back = delta_synthesize(delta_decompose(a, 4), a.z_window());
      if (!compare_on_valid(a, back).equal()) o.fail("round trip differs for " + x.to_string() + ", " + y.to_string());
      ++pairs;
    }
  }
  if (o.ok) o.detail = std::to_string(pairs) + " commutators";
  return o;
}

Outcome derivations() {
  Outcome o;
  Random rng(2024);
  auto is_derivation = [](const DerivationDescriptor& D) { return verify_derivation(chv(), D, {-2, 2}).empty(); };
  for (int trial = 0; trial < 50; ++trial) {
    const int c = rng.integer(-2, 2);
    Element x;
    x.add({"L", c}, rng.poly({vars::del}, 3, 3));
    x.add({"H", c}, rng.poly({vars::del}, 3, 3));
    if (x.is_zero()) x = gen("L", c);
    if (!is_derivation(InnerDerivation{x})) o.fail("ad of " + x.to_string() + " fails");
  }
  for (int trial = 0; trial < 20; ++trial) {
    if (!is_derivation(OuterScalar{rng.integer(-3, 3), Poly(rng.scalar())})) o.fail("outer scalar fails");
    OuterVector v;
    for (int k = 0; k < 3; ++k) v.a[rng.integer(-3, 3)] = Poly(rng.scalar());
    if (!is_derivation(v)) o.fail("outer vector fails");
  }
  for (int trial = 0; trial < 50; ++trial) {
    const int c = rng.integer(-2, 2);
    const Poly g = rng.poly({vars::del}), h = rng.poly({vars::del});
    const Poly a = trial % 5 == 0 ? Poly::var("a") : Poly(rng.scalar());
    const TableDerivation input = testing::derivation_table(c, g, h, a);
    const DerivationSplit s = decompose_degree_c(chv(), input);
    const TableDerivation rebuilt = to_table(chv(), s.inner(c), c) + to_table(chv(), OuterScalar{c, s.a}, c);
    if (rebuilt.to_string() != input.to_string()) o.fail("reconstruction differs: " + input.to_string());
    if (!(s.a == a)) o.fail("recovered a = " + s.a.to_string() + ", expected " + a.to_string());
  }
  if (o.ok) o.detail = "50 inner, 20 outer scalar and vector, 50 decompositions";
  return o;
}

Outcome rank_one() {
  Outcome o;
  const ModuleReport r = check_module(build_M(), IndexRange{-2, 2});
  if (!r.ok()) o.fail(r.failures.front().describe());
  const Poly d = del(), l = lam(), b = params::b(), q = params::loop();
  const ModuleSpec M0 = build_M(Poly(), b, q, Poly());
  if (!rank1_submodule_closed(d + b, M0)) o.fail("(d+b) v does not generate a submodule for a = 0");
  for (int i = -2; i <= 2 && o.ok; ++i) {
    const Poly shifted = q.pow(i) * *build_Mprime(Poly(1), b).coefficient("L", i, 0);
    if (!(induced_rank1_action(d + b, M0, "L", i) == shifted)) o.fail("induced L action differs at i = " + std::to_string(i));
    if (!induced_rank1_action(d + b, M0, "H", i).is_zero()) o.fail("induced H action is nonzero");
  }
  Random rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Scalar a, qv;
    while (a.is_zero()) a = Scalar(rng.rational());
    while (qv.is_zero()) qv = Scalar(rng.rational());
    const Poly hc = trial % 2 == 0 ? Poly() : Poly(rng.scalar());
    const ModuleSpec M = build_M(Poly(a), Poly(rng.scalar()), Poly(qv), hc);
    const ProbeResult p = irreducibility_probe(M, 3);
    if (p.verdict != ProbeResult::Verdict::no_witness) o.fail("a = " + a.to_string() + ": " + p.to_string());
  }
  if (o.ok) o.detail = std::to_string(r.checked) + " identities, submodule for a = 0, 5 probes";
  return o;
}

Outcome graded() {
  Outcome o;
  const ModuleReport v = check_module(build_V_abc());
  if (!v.ok()) o.fail("V_{a,b,hc}: " + v.failures.front().describe());
  int failing = 0;
  std::string first;
  for (unsigned mask = 0; mask < 128; ++mask) {
    const BitSequenceWindow A = BitSequenceWindow::from_mask(-3, 7, mask);
    const ModuleReport r = check_module(build_V_Abc(A));
    if (r.ok()) continue;
    if (failing++ == 0) first = "A = " + A.to_string() + ", " + r.failures.front().describe();
  }
  if (failing) o.fail(std::to_string(failing) + " of 128 bit sequences fail with symbolic hc; first: " + first);
  const ModuleSpec G = testing::generic_module({-3, 3});
  int golden = 0;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        golden += 2;
        if (generate_constraints(G, ConstraintKind::LH, i, j, k).to_string() != testing::lh_closed_form(i, j, k).to_string()) {
          o.fail("LH constraint differs at " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k));
        }
        if (generate_constraints(G, ConstraintKind::HH, i, j, k).to_string() != testing::hh_closed_form(i, j, k).to_string()) {
          o.fail("HH constraint differs at " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k));
        }
      }
    }
  }
  if (o.ok) o.detail = "V_{a,b,hc}, 128 bit sequences, " + std::to_string(golden) + " golden constraints";
  return o;
}

Value random_value(Random& rng) {
  const std::vector<Var> vs{vars::del, vars::lambda, vars::mu, Var{"a"}, Var{"b"}, Var{"q", true}};
  switch (rng.integer(0, 2)) {
    case 0: return rng.poly(vs, 5, 3);
    case 1: {
      Element x;
      for (int t = rng.integer(0, 3); t > 0; --t) x.add({rng.coin() ? "L" : "H", rng.integer(-4, 4)}, rng.poly(vs, 3, 2));
      return x;
    }
    default: {
      ModuleVector v;
      for (int t = rng.integer(0, 3); t > 0; --t) v.add(BasisVector{rng.integer(-4, 4)}, rng.poly(vs, 3, 2));
      return v;
    }
  }
}

Outcome parser(const std::string& ck, const std::string& corpus_dir) {
  Outcome o;
  Random rng(500);
  EvalContext ctx;
  ctx.algebra = &chv();
  for (int trial = 0; trial < 500; ++trial) {
    const Value v = random_value(rng);
    const std::string text = format(v);
    const Value back = eval(text, ctx);
    if (!same_value(v, back) || format(back) != text) o.fail("round trip changes " + text);
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir)) {
    if (e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t cases = 0;
  std::ostringstream log;
  for (const auto& f : files) {
    const auto r = testing::run_corpus(ck, f, log);
    cases += r.cases;
    if (r.failed) o.fail(std::to_string(r.failed) + " corpus cases fail in " + f.filename().string() + "\n" + log.str());
  }
  if (cases == 0) o.fail("empty corpus");
  if (o.ok) o.detail = "500 values, " + std::to_string(cases) + " corpus cases";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance CK_BINARY CORPUS_DIR\n";
    return 2;
  }
  const std::string ck = argv[1], corpus = argv[2];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"conformal axioms on [-3,3]", axioms},
      {"commutator distributions on [-6,6]", distributions},
      {"delta decomposition round trip", decomposition_round_trip},
      {"derivations and decomposition", derivations},
      {"rank-one modules", rank_one},
      {"graded modules and constraint forms", graded},
      {"parser round trip and CLI corpus", [&] { return parser(ck, corpus); }},
  };
  int failed = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << n + 1 << ": " << criteria[n].first << " (" << o.detail
              << ")\n";
  }
  return failed == 0 ? 0 : 1;
}
