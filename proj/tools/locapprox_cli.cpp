// locapprox: command-line front end.
//
// Exit codes: 0 success, 2 well-formed negative result (NotLocal, axiom
// violations, failed hom check, non-convergence), 1 usage or validation error.
//
// --config FILE holds flat `key = value` lines. Each key is spliced in as
// `--key=value` right after the subcommand, so command-line flags (parsed
// later, last one wins) override the file.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locapprox/audit.hpp"
#include "locapprox/covering.hpp"
#include "locapprox/groups.hpp"
#include "locapprox/local_metric.hpp"
#include "locapprox/logic/los.hpp"
#include "locapprox/logic/parser.hpp"
#include "locapprox/report.hpp"
#include "locapprox/variety.hpp"
#include "locapprox/version.hpp"

using namespace locapprox;

namespace {

const std::vector<std::string> subcommands = {"decode",  "encode",   "dist", "audit-metric", "group-hom",
                                              "covering", "variety", "eval", "los"};

struct Params {
  // global
  std::string config, out, format;
  std::uint64_t seed = 0;
  // shared
  std::uint64_t q = 0, l = 0, m = 1;
  std::size_t budget = default_enumeration_budget;
  std::size_t samples = 0;
  std::string mode = "exhaustive";
  // decode / encode / dist
  std::uint64_t z = 0, x = 0, y = 0, ring = 0;
  std::string r;
  // groups
  std::string group = "SO(3)";
  std::size_t pairs = 100;
  std::uint64_t H = 0;
  std::string heights = "10,100,1000";
  std::string grid = "halton";
  std::size_t grid_size = 512;
  // variety
  std::string system;
  // logic
  std::string formula, formula_file, side = "finite", units;
  std::uint64_t start = 2, growth = 2;
  std::size_t count = 3;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::InvalidArgument, path + ":" + std::to_string(no) + ": expected key = value");
    std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (key.empty() || key.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                           std::string::npos)
      fail(ErrorKind::InvalidArgument, path + ":" + std::to_string(no) + ": bad key '" + key + "'");
    if (key == "config") continue;
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

// Splices config entries in after the subcommand token.
std::vector<std::string> expand_args(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty()) return args;
  std::vector<std::string> extra = read_config(config);
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  auto at = sub == args.end() ? args.end() : sub + 1;
  args.insert(at, extra.begin(), extra.end());
  return args;
}

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || item[0] == '-')
      fail(ErrorKind::InvalidArgument, "bad entry '" + item + "' in --" + what);
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::InvalidArgument, "--" + what + " is empty");
  return out;
}

class Runner {
 public:
  Runner(CLI::App& app, CLI::App& sub, Params& p) : app_(app), sub_(sub), p_(p) {}

  bool given(const std::string& name) const {
    const CLI::Option* o = sub_.get_option_no_throw("--" + name);
    if (!o) o = app_.get_option_no_throw("--" + name);
    return o && o->count() > 0;
  }

  std::uint64_t seed(const std::string& why) const {
    if (!given("seed")) fail(ErrorKind::InvalidArgument, "--seed is required for " + why);
    return p_.seed;
  }

  SampleMode sample_mode() const {
    if (p_.mode == "exhaustive") return Exhaustive{};
    if (p_.mode != "sample") fail(ErrorKind::InvalidArgument, "--mode must be exhaustive or sample");
    if (p_.samples == 0) fail(ErrorKind::InvalidArgument, "--samples must be positive in sample mode");
    return RandomSample{p_.samples, seed("sampled mode")};
  }

  Json metadata() const {
    Json cfg = Json::object();
    auto add = [&](const CLI::Option* o) {
      std::string name = o->get_single_name();
      if (name.empty() || name == "help" || name == "version" || name == "config" || name == "out") return;
      cfg[name] = o->count() ? o->results().back() : o->get_default_str();
    };
    for (const CLI::Option* o : app_.get_options()) add(o);
    for (const CLI::Option* o : sub_.get_options()) add(o);
    return {{"command", sub_.get_name()}, {"version", version}, {"config", cfg}};
  }

  void write(const std::string& text) const {
    if (p_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(p_.out, std::ios::binary);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + p_.out);
    f << text;
  }

  // Table commands: CSV by default.
  void report(const Table& rows, const Json& summary) const {
    if (p_.format == "json") {
      Json doc = {{"metadata", metadata()}, {"rows", rows.to_json()}, {"summary", summary}};
      write(doc.dump(2) + "\n");
    } else {
      write(rows.to_csv());
    }
  }

  // Scalar commands: a plain line unless a format is asked for.
  void scalar(const std::string& line, const Table& rows, const Json& summary) const {
    if (p_.format.empty())
      write(line + "\n");
    else
      report(rows, summary);
  }

 private:
  CLI::App& app_;
  CLI::App& sub_;
  Params& p_;
};

logic::FormulaPtr load_formula(const Params& p) {
  if (!p.formula.empty() && !p.formula_file.empty())
    fail(ErrorKind::InvalidArgument, "give either --formula or --formula-file, not both");
  if (!p.formula.empty()) return logic::parse_formula(p.formula);
  if (p.formula_file.empty()) fail(ErrorKind::InvalidArgument, "--formula or --formula-file is required");
  std::ifstream in(p.formula_file);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + p.formula_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return logic::parse_formula(ss.str());
}

int run_decode(const Runner& run, const Params& p) {
  Modulus fq = field_modulus(p.q);
  LocalityScale s(p.l, p.m);
  check_window(s, fq);
  DecodeOutcome d;
  if (p.ring) {
    Modulus n = ring_modulus(p.ring);
    if (p.z >= p.ring) fail(ErrorKind::InvalidArgument, "--z must be below --ring");
    d = decode_ring(Residue(n, p.z), fq, s);
  } else {
    if (p.z >= p.q) fail(ErrorKind::InvalidArgument, "--z must be below --q");
    d = decode(Residue(fq, p.z), s);
  }
  std::string value = d ? to_string(*d) : "NotLocal";
  Table t{{"z", "value"}, {}};
  t.add({std::to_string(p.z), value});
  run.scalar(d ? std::to_string(p.z) + " -> " + value : value, t, {{"local", d.has_value()}});
  return d ? 0 : 2;
}

int run_encode(const Runner& run, const Params& p) {
  Rational r = parse_rational(p.r);
  Residue z = encode_exact(r, field_modulus(p.q));
  Table t{{"r", "z"}, {}};
  t.add({to_string(r), std::to_string(z.value())});
  run.scalar(to_string(r) + " -> " + std::to_string(z.value()), t, Json::object());
  return 0;
}

int run_dist(const Runner& run, const Params& p) {
  Modulus fq = field_modulus(p.q);
  LocalityScale s(p.l, p.m);
  if (p.x >= p.q || p.y >= p.q) fail(ErrorKind::InvalidArgument, "--x and --y must be below --q");
  DecodeOutcome d = decode(Residue(fq, p.x) - Residue(fq, p.y), s);
  std::string value = d ? to_string(abs(d->value())) : "NotLocal";
  Table t{{"x", "y", "dist"}, {}};
  t.add({std::to_string(p.x), std::to_string(p.y), value});
  run.scalar(value, t, {{"local", d.has_value()}});
  return d ? 0 : 2;
}

int run_audit(const Runner& run, const Params& p) {
  AuditReport rep = audit_metric(LocalityScale(p.l, p.m), field_modulus(p.q), run.sample_mode(),
                                 standard_predicates(), p.budget);
  Json summary = {{"passed", rep.passed()},
                  {"violations", rep.violations()},
                  {"sort_size", rep.sort_size},
                  {"axioms", rep.to_json()}};
  run.report(rep.to_table(), summary);
  return rep.passed() ? 0 : 2;
}

int run_group_hom(const Runner& run, const Params& p) {
  GroupFamily g = parse_group_family(p.group);
  if (p.H == 0) fail(ErrorKind::InvalidArgument, "--H is required");
  GroupHomReport rep =
      group_hom_check(g, p.pairs, p.H, field_modulus(p.q), LocalityScale(p.l, p.m), run.seed("random pairs"));
  run.report(rep.rows, rep.summary());
  return rep.passed() ? 0 : 2;
}

int run_covering(const Runner& run, const Params& p) {
  GroupFamily g = parse_group_family(p.group);
  GridSpec grid{parse_grid_kind(p.grid), p.grid_size};
  Table t = covering_table(g, parse_list(p.heights, "heights"), grid, p.seed);
  run.report(t, {{"group", g.name()}, {"grid", p.grid}, {"grid_size", grid.kind == GridKind::identity ? 1 : p.grid_size}});
  return 0;
}

int run_variety(const Runner& run, const Params& p) {
  if (p.system.empty()) fail(ErrorKind::InvalidArgument, "--system is required");
  std::ifstream in(p.system);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + p.system);
  PolySystem v = parse_poly_system(in);
  std::optional<std::uint64_t> seed;
  if (run.given("seed")) seed = p.seed;
  VarietyReport rep = variety_points(v, field_modulus(p.q), LocalityScale(p.l, p.m), p.budget, seed);
  run.report(rep.to_table(), rep.summary());
  return 0;
}

int run_eval(const Runner& run, const Params& p) {
  logic::FormulaPtr f = load_formula(p);
  Rational value;
  Table t{{"formula", "side", "q", "l", "value"}, {}};
  if (p.side == "limit") {
    if (p.H == 0) fail(ErrorKind::InvalidArgument, "--H is required for --side limit");
    value = logic::eval_limit(*f, p.H, p.budget);
    t.add({to_string(*f), "limit", "", "", to_string(value)});
  } else if (p.side == "finite") {
    if (p.l == 0) fail(ErrorKind::InvalidArgument, "--l is required");
    std::uint64_t q = p.q;
    if (q == 0) {
      Integer need = logic::required_modulus(*f, p.l);
      if (need > Integer(std::numeric_limits<std::uint64_t>::max()))
        fail(ErrorKind::RangeExhausted, "formula needs q > " + need.str() + " at l=" + std::to_string(p.l));
      q = next_prime(need.convert_to<std::uint64_t>());
    }
    value = logic::eval_finite(*f, field_modulus(q), p.l, run.sample_mode(), p.budget);
    t.add({to_string(*f), "finite", std::to_string(q), std::to_string(p.l), to_string(value)});
  } else {
    fail(ErrorKind::InvalidArgument, "--side must be finite or limit");
  }
  run.scalar(to_string(value), t, {{"value", to_string(value)}});
  return 0;
}

int run_los(const Runner& run, const Params& p) {
  logic::FormulaPtr f = load_formula(p);
  std::vector<std::uint64_t> units =
      p.units.empty() ? logic::geometric_units(p.start, p.growth, p.count) : parse_list(p.units, "units");
  logic::PrimeLadder ladder = logic::PrimeLadder::for_formula(*f, units);
  std::uint64_t H = p.H ? p.H : ladder.rungs().back().s.L();
  logic::LosReport rep = logic::los_scan(*f, ladder, H, run.sample_mode(), p.budget);
  Json summary = rep.summary();
  summary["final_gap"] = to_string(rep.rows.back().gap);
  run.report(rep.to_table(), summary);
  return rep.non_convergent ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  Params p;
  CLI::App app{"Local approximation experiments over finite fields", "locapprox"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version);
  app.add_option("--config", p.config, "flat key = value file; flags override it");
  app.add_option("--out", p.out, "write the report here instead of stdout");
  app.add_option("--format", p.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", p.seed, "seed for sampled modes (Halton offset for covering)");

  auto field_opts = [&](CLI::App* s, bool need_scale) {
    s->add_option("--q", p.q, "field modulus (prime)")->required();
    if (need_scale) {
      s->add_option("--l", p.l, "feasible unit")->required();
      s->add_option("--m", p.m, "sort level");
    }
  };
  auto sampling_opts = [&](CLI::App* s) {
    s->add_option("--mode", p.mode, "exhaustive or sample");
    s->add_option("--samples", p.samples, "draws per quantifier or tuple count in sample mode");
    s->add_option("--budget", p.budget, "enumeration budget");
  };
  auto formula_opts = [&](CLI::App* s) {
    s->add_option("--formula", p.formula, "formula text");
    s->add_option("--formula-file", p.formula_file, "file holding the formula");
  };

  CLI::App* dec = app.add_subcommand("decode", "rational reconstruction of a residue");
  field_opts(dec, true);
  dec->add_option("--z", p.z, "residue")->required();
  dec->add_option("--ring", p.ring, "read z in Z_ring and project to F_q first");

  CLI::App* enc = app.add_subcommand("encode", "image of a rational in F_q");
  field_opts(enc, false);
  enc->add_option("--r", p.r, "rational p/q")->required();

  CLI::App* dst = app.add_subcommand("dist", "emerging distance of two residues");
  field_opts(dst, true);
  dst->add_option("--x", p.x)->required();
  dst->add_option("--y", p.y)->required();

  CLI::App* aud = app.add_subcommand("audit-metric", "check the metric-structure axioms on S_m(F_q)");
  field_opts(aud, true);
  sampling_opts(aud);

  CLI::App* grp = app.add_subcommand("group-hom", "finite homomorphism check for a matrix group");
  field_opts(grp, true);
  grp->add_option("--group", p.group, "SO(n), SU(n) or SL2");
  grp->add_option("--pairs", p.pairs, "number of random pairs");
  grp->add_option("--H", p.H, "entry height bound");

  CLI::App* cov = app.add_subcommand("covering", "covering radius of height-bounded rational points");
  cov->add_option("--group", p.group, "SO(2), SO(3) or SU(2)");
  cov->add_option("--heights", p.heights, "comma-separated height bounds");
  cov->add_option("--grid", p.grid, "halton or identity");
  cov->add_option("--grid-size", p.grid_size, "Halton grid size");

  CLI::App* var = app.add_subcommand("variety", "rational points of a polynomial system through S_m(F_q)");
  field_opts(var, true);
  var->add_option("--system", p.system, "polynomial system file")->required();
  var->add_option("--budget", p.budget, "tuple budget before sampling");

  CLI::App* ev = app.add_subcommand("eval", "evaluate a closed formula");
  formula_opts(ev);
  ev->add_option("--side", p.side, "finite or limit");
  ev->add_option("--q", p.q, "field modulus; default is the least prime inside the window");
  ev->add_option("--l", p.l, "feasible unit");
  ev->add_option("--H", p.H, "height bound on the limit side");
  sampling_opts(ev);

  CLI::App* los = app.add_subcommand("los", "scan a formula along a ladder of primes");
  formula_opts(los);
  los->add_option("--units", p.units, "comma-separated units l, overrides start/growth/count");
  los->add_option("--start", p.start, "first unit");
  los->add_option("--growth", p.growth, "unit growth factor");
  los->add_option("--count", p.count, "number of rungs");
  los->add_option("--H", p.H, "limit-side height bound (default: L of the last rung)");
  sampling_opts(los);

  try {
    std::vector<std::string> args = expand_args(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  Runner run(app, *sub, p);
  try {
    const std::string name = sub->get_name();
    if (name == "decode") return run_decode(run, p);
    if (name == "encode") return run_encode(run, p);
    if (name == "dist") return run_dist(run, p);
    if (name == "audit-metric") return run_audit(run, p);
    if (name == "group-hom") return run_group_hom(run, p);
    if (name == "covering") return run_covering(run, p);
    if (name == "variety") return run_variety(run, p);
    if (name == "eval") return run_eval(run, p);
    if (name == "los") return run_los(run, p);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
