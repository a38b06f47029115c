// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 1 when any criterion fails, unless every failing criterion
// is listed with --expect-fail (comma-separated numbers). The ctest entry
// lists the two criteria that cannot hold as stated; see the README.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "formula_corpus.hpp"
#include "locapprox/audit.hpp"
#include "locapprox/covering.hpp"
#include "locapprox/groups.hpp"
#include "locapprox/local_metric.hpp"
#include "locapprox/logic/los.hpp"
#include "locapprox/logic/parser.hpp"
#include "locapprox/variety.hpp"

using namespace locapprox;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << "s";
  return os.str();
}

// 1. decode(encode(r)) = r for every reduced rational of height <= 10.
Outcome round_trip() {
  auto t0 = Clock::now();
  Modulus q = field_modulus(1009);
  LocalityScale s(10, 1);
  auto all = enumerate_bounded_rationals(10, 10);
  std::size_t ok = 0;
  for (const auto& r : all) {
    auto d = decode(encode(r, q), s);
    ok += d && *d == r;
  }
  double t = seconds_since(t0);
  return {ok == all.size() && t < 1.0, std::to_string(ok) + "/" + std::to_string(all.size()) + " exact, " + secs(t)};
}

// Exhaustive minimal pair: the k1/k2 with |k1|, k2 <= L and k1 = z k2 mod q.
std::optional<BoundedRational> minimal_pair(std::uint64_t z, std::uint64_t q, std::int64_t L) {
  std::optional<BoundedRational> best;
  for (std::int64_t k2 = 1; k2 <= L; ++k2)
    for (std::int64_t k1 = -L; k1 <= L; ++k1) {
      if (std::gcd(k1, k2) != 1) continue;
      std::int64_t lhs = ((k1 % std::int64_t(q)) + std::int64_t(q)) % std::int64_t(q);
      if (std::uint64_t(lhs) != (z * std::uint64_t(k2)) % q) continue;
      BoundedRational r{k1, k2};
      if (!best || r.height() < best->height()) best = r;
    }
  return best;
}

// 2. Extended Euclid agrees with exhaustive search on all of F_257 at L = 10.
Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  Modulus q = field_modulus(257);
  LocalityScale s(10, 1);
  int agree = 0;
  for (std::uint64_t z = 0; z < 257; ++z) agree += decode(Residue(q, z), s) == minimal_pair(z, 257, 10);
  double t = seconds_since(t0);
  return {agree == 257 && t < 1.0, std::to_string(agree) + "/257 agree, " + secs(t)};
}

// 3. decode(x + y) = x + y and decode(x y) = x y for 10^4 random pairs.
Outcome homomorphism() {
  auto t0 = Clock::now();
  Modulus q = field_modulus((1ULL << 31) - 1);
  LocalityScale s(30, 3);  // L = 27000: sums reach 2*30*30/(30*30), 2 L^2 < q
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<std::int64_t> num(-30, 30), den(1, 30);
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    BoundedRational x = BoundedRational::make(num(gen), den(gen));
    BoundedRational y = BoundedRational::make(num(gen), den(gen));
    Residue ex = encode(x, q), ey = encode(y, q);
    auto sum = decode(ex + ey, s), prod = decode(ex * ey, s);
    if (!sum || sum->value() != x.value() + y.value()) ++failures;
    if (!prod || prod->value() != x.value() * y.value()) ++failures;
  }
  double t = seconds_since(t0);
  return {failures == 0 && t < 5.0, std::to_string(failures) + " failures over 10000 pairs, " + secs(t)};
}

// 4. Triangle inequality, identity of indiscernibles and d <= m, exhaustively.
Outcome metric_axioms() {
  AuditReport rep = audit_metric(LocalityScale(3, 1), field_modulus(257), Exhaustive{});
  bool pass = true;
  std::string detail;
  for (const char* name : {"triangle_inequality", "identity_of_indiscernibles", "diameter_bound"}) {
    const AxiomResult& a = rep.at(name);
    pass = pass && a.failed == 0;
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(a.failed) + "/" +
              std::to_string(a.checked) + " violations";
    if (a.failed) detail += " (e.g. " + a.worst_witness + ")";
  }
  return {pass, detail};
}

// 5. Projection Z_1028 -> F_257 commutes with encoding.
Outcome ring_compatibility() {
  Modulus ring = ring_modulus(1028), field = field_modulus(257);
  LocalityScale s(10, 1);
  int checked = 0, failures = 0;
  for (std::uint64_t k = 0; k < 1028; ++k) {
    ++checked;
    Residue rk(ring, k);
    if (project_ring_to_field(rk, field) != Residue::embed(i128(k), field)) ++failures;
    if (decode_ring(rk, field, s) != decode(Residue(field, k % 257), s)) ++failures;
  }
  for (const auto& r : enumerate_bounded_rationals(10, 10)) {
    if (r.den % 2 == 0) continue;  // 2 is not a unit in Z_1028
    ++checked;
    if (project_ring_to_field(encode(r, ring), field) != encode(r, field)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(checked) + " checks"};
}

// 6. SO(3) and SU(2), 100 pairs each, heights <= 10^4, q = 2^61 - 1.
Outcome group_approximation() {
  auto t0 = Clock::now();
  Modulus q = field_modulus((1ULL << 61) - 1);
  LocalityScale s(10, 9);
  GroupHomReport so3 = group_hom_check(GroupFamily::so(3), 100, 10000, q, s, 6);
  GroupHomReport su2 = group_hom_check(GroupFamily::su(2), 100, 10000, q, s, 6);
  double t = seconds_since(t0);
  auto line = [](const GroupHomReport& r) {
    return r.family + " " + std::to_string(r.membership_failures) + " membership / " +
           std::to_string(r.product_failures) + " product failures over " + std::to_string(r.pairs) + " pairs";
  };
  return {so3.passed() && su2.passed() && so3.pairs == 100 && su2.pairs == 100 && t < 10.0,
          line(so3) + "; " + line(su2) + ", " + secs(t)};
}

// 7. SO(3) covering radius over a 512-point grid at H = 10, 100, 1000.
Outcome density() {
  auto t0 = Clock::now();
  GridSpec grid{GridKind::halton, 512};
  std::vector<double> r;
  for (std::uint64_t h : {10u, 100u, 1000u}) r.push_back(covering_radius(GroupFamily::so(3), h, grid).radius);
  double t = seconds_since(t0);
  bool mono = r[1] <= r[0] && r[2] <= r[1] && r[2] < r[0];
  return {mono && t < 60.0, "radius " + format_radius(r[0]) + ", " + format_radius(r[1]) + ", " +
                                format_radius(r[2]) + ", " + secs(t)};
}

// 8. Unit circle at l = 5, m = 1, q = 1009.
Outcome variety_limit() {
  PolySystem v = parse_poly_system("vars: x y\nx^2 + y^2 - 1\n");
  VarietyReport rep = variety_points(v, field_modulus(1009), LocalityScale(5, 1));
  int inexact = 0;
  for (const auto& p : rep.points)
    if (v.polys[0].eval({p[0].value(), p[1].value()}) != 0) ++inexact;
  auto br = [](std::int64_t a, std::int64_t b) { return BoundedRational::make(a, b); };
  bool has = rep.contains({br(3, 5), br(4, 5)}) && rep.contains({br(0, 1), br(1, 1)}) &&
             rep.contains({br(1, 1), br(0, 1)});
  return {inexact == 0 && rep.spurious == 0 && has,
          std::to_string(rep.points.size()) + " points, " + std::to_string(inexact) + " inexact, " +
              std::to_string(rep.spurious) + " spurious, witnesses " + (has ? "present" : "missing")};
}

// min over x in S_1 at height <= L of |x^2 - 2| / 2.
Rational sqrt2_oracle(std::int64_t L) {
  Rational best = 1;
  for (std::int64_t b = 1; b <= L; ++b)
    for (std::int64_t a = -b; a <= b; ++a) best = std::min(best, std::min(Rational(1), abs(Rational(a * a, b * b) - 2) / 2));
  return best;
}

// 9. Two formulas along prime ladders.
Outcome los_proxy() {
  using namespace locapprox::logic;
  std::string detail;
  bool pass_a = true;
  {
    FormulaPtr f = parse_formula("sup x:S1 . inf y:S1 . d2(y*y, x)");
    LosReport rep = los_scan(*f, PrimeLadder::for_formula(*f, {2, 4, 8}), 8);
    for (const auto& r : rep.rows) pass_a = pass_a && r.value == Rational(1, 2) && r.gap == 0;
    pass_a = pass_a && rep.limit == Rational(1, 2);
    detail = "sup-inf: ";
    for (const auto& r : rep.rows) detail += to_string(r.value) + "@l=" + std::to_string(r.l) + " ";
    detail += "limit " + to_string(rep.limit);
  }
  bool pass_b = true;
  {
    FormulaPtr f = parse_formula("inf x:S1 . d2(x*x, 2)");
    PrimeLadder ladder = PrimeLadder::for_formula(*f, {4, 16, 64});
    detail += "; sqrt2:";
    Rational prev = 2;
    for (const auto& r : ladder.rungs()) {
      Rational v = eval_finite(*f, r.q, r.s.l());
      std::int64_t L = std::int64_t(r.s.L());
      bool oracle = v == sqrt2_oracle(L);
      bool ok = v > 0 && v < prev && v <= Rational(2, L) && oracle;
      pass_b = pass_b && ok;
      detail += " " + to_string(v) + "@l=" + std::to_string(r.s.l()) + (oracle ? "" : "(oracle mismatch)") +
                (v < prev ? "" : "(not decreasing)") + (v <= Rational(2, L) ? "" : "(> 2/L)");
      prev = v;
    }
  }
  return {pass_a && pass_b, detail};
}

// 10. Round trip on 10^3 random ASTs and the malformed corpus.
Outcome parser() {
  using namespace locapprox::logic;
  testing::RandomFormulas gen(10);
  int round = 0;
  for (int i = 0; i < 1000; ++i) {
    FormulaPtr f = gen.formula(6);
    try {
      round += *parse_formula(to_string(*f)) == *f;
    } catch (const Error&) {
    }
  }
  int rejected = 0;
  const auto& corpus = testing::malformed_corpus();
  for (const auto& m : corpus) {
    try {
      parse_formula(m.text);
    } catch (const FormulaParseError& e) {
      rejected += e.kind() == m.kind && e.line() == m.line && e.column() == m.column;
    }
  }
  return {round == 1000 && rejected == int(corpus.size()),
          std::to_string(round) + "/1000 round trips, " + std::to_string(rejected) + "/" +
              std::to_string(corpus.size()) + " malformed rejected at the expected position"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) expected_failures.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N,M,...]\n";
      return 1;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"round-trip exactness", round_trip},        {"decode oracle equivalence", oracle_equivalence},
      {"finite homomorphism", homomorphism},       {"metric axioms", metric_axioms},
      {"ring compatibility", ring_compatibility}, {"group approximation", group_approximation},
      {"density surrogate", density},              {"variety limit", variety_limit},
      {"los proxy", los_proxy},                    {"parser", parser},
  };

  int unexpected = 0, passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int n = int(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    passed += o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << n << " " << criteria[i].first << ": " << o.detail;
    if (!o.pass && expected_failures.count(n)) std::cout << " [expected]";
    std::cout << std::endl;
    if (!o.pass && !expected_failures.count(n)) ++unexpected;
  }
  std::cout << passed << "/" << criteria.size() << " criteria pass" << std::endl;
  return unexpected ? 1 : 0;
}
