// Command-line front end.
//   exit 0 ok, 1 infeasible, 2 invalid input, 3 resource limit,
//   4 a checked property failed

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wtap/bundles.hpp"
#include "wtap/decomposition.hpp"
#include "wtap/exact.hpp"
#include "wtap/generators.hpp"
#include "wtap/io.hpp"
#include "wtap/lp.hpp"
#include "wtap/odd_cut.hpp"
#include "wtap/rounding.hpp"

namespace {

using namespace wtap;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInvalid = 2;
constexpr int kResource = 3;
constexpr int kPropertyFailed = 4;

struct PropertyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string format = "text";
  std::string epsilon = "1/2";
  std::string max_cost;
  std::string override_alpha;
  std::string override_heavy;
  std::uint64_t seed = 1;
  bool oracle = false;
  bool debug = false;
  // gen / verify / bench
  std::string family = "random-tree";
  int n = 10;
  std::string density = "3/2";
  std::string costs = "integer";
  int count = 100;
  int jobs = 0;
  // lp / separate
  std::string kind = "odd-cut";
  std::string x;
};

bool json_out(const Options& o) { return o.format == "json"; }

ApproxOptions approx_options(const Options& o) {
  ApproxOptions a;
  a.epsilon = parse_rational(o.epsilon);
  if (!o.max_cost.empty()) a.cost_bound = parse_rational(o.max_cost);
  if (!o.override_alpha.empty()) a.alpha_override = parse_rational(o.override_alpha);
  if (!o.override_heavy.empty()) a.heavy_override = parse_rational(o.override_heavy);
  return a;
}

GeneratorSpec generator_spec(const Options& o, std::uint64_t seed) {
  GeneratorSpec g;
  g.family = parse_family(o.family);
  g.n = o.n;
  g.link_density = parse_rational(o.density);
  g.cost_model = parse_cost_model(o.costs);
  g.max_cost = o.max_cost.empty() ? 3 : static_cast<int>(to_long_checked(parse_rational(o.max_cost)));
  g.seed = seed;
  return g;
}

// "-" reads standard input
WtapInstance load(const std::string& path) {
  if (path != "-") return read_instance_file(path);
  std::string content((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  return parse_instance(content);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw InvalidArgument("cannot write " + o.output);
  f << text;
}

// "3:1/2,7:1" or a JSON object {"3":"1/2"}; values on link ids.
FractionalSolution parse_point(const std::string& spec, int link_count) {
  FractionalSolution x(link_count);
  std::string s = spec;
  if (!s.empty() && s.front() != '{' && s.find(':') == std::string::npos) {
    std::ifstream f(s);
    if (!f) throw InvalidArgument("cannot open point file " + s);
    s.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  auto set = [&](const std::string& k, const std::string& v) {
    int l = std::stoi(k);
    if (l < 0 || l >= link_count) throw InvalidArgument("point names unknown link " + k);
    x[l] = parse_rational(v);
  };
  auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && s[first] == '{') {
    Json j = Json::parse(s);
    for (const auto& [k, v] : j.items()) set(k, v.is_string() ? v.get<std::string>() : v.dump());
    return x;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("point entry '" + item + "' is not link:value");
    set(item.substr(0, colon), item.substr(colon + 1));
  }
  return x;
}

int cmd_gen(const Options& o) {
  WtapInstance inst = generate(generator_spec(o, o.seed));
  emit(o, json_out(o) ? instance_to_json(inst).dump(2) : write_instance_text(inst));
  return kOk;
}

int cmd_solve(const Options& o) {
  WtapInstance inst = load(o.input);
  ApproxResult r = wtap_approx(inst, approx_options(o));
  if (o.oracle) {
    Rational opt = brute_force_wtap(inst).cost;
    r.report.opt_if_known = opt;
    if (opt > 0) r.report.ratio = r.cost / opt;
  }
  Json j = solution_to_json(inst, r.links);
  j["report"] = report_to_json(r.report);
  if (json_out(o)) {
    emit(o, j.dump(2));
  } else {
    std::ostringstream os;
    os << "cost " << to_string(r.cost) << "\nlp " << to_string(r.report.lp_value) << "\nlinks";
    for (LinkId l : r.links) os << " " << l;
    os << "\npairs " << r.report.per_pair.size() << "\ncuts " << r.report.cuts_added << "\nrestarts "
       << r.report.restarts << "\n";
    if (r.report.opt_if_known) os << "opt " << to_string(*r.report.opt_if_known) << "\n";
    emit(o, os.str());
  }
  if (!r.report.feasible || !r.report.all_certified() || !r.report.lp_certificate_ok) {
    throw PropertyFailure("a rounding or LP certificate failed");
  }
  if (r.report.opt_if_known && (r.report.lp_value > *r.report.opt_if_known || r.cost > 2 * *r.report.opt_if_known)) {
    throw PropertyFailure("LP value or output cost out of range against the exact optimum");
  }
  return kOk;
}

int cmd_exact(const Options& o) {
  WtapInstance inst = load(o.input);
  ExactSolution s = brute_force_wtap(inst);
  if (json_out(o)) {
    emit(o, solution_to_json(inst, s.links).dump(2));
  } else {
    std::ostringstream os;
    os << "cost " << to_string(s.cost) << "\nlinks";
    for (LinkId l : s.links) os << " " << l;
    emit(o, os.str() + "\n");
  }
  return kOk;
}

int cmd_lp(const Options& o) {
  WtapInstance inst = load(o.input);
  CutLp lp = build_cut_lp(inst);
  LpModel model = lp.model;
  LpOutcome out;
  int cuts = 0, bundles = 0;
  if (o.kind == "cut") {
    out = solve_lp(model);
  } else if (o.kind == "odd-cut") {
    std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
    SeparationRun run = solve_with_separation(model, oracles);
    for (auto& c : run.added) model.constraints.push_back(std::move(c));
    cuts = run.rounds;
    out = run.outcome;
  } else if (o.kind == "bundle") {
    // the odd-cut LP of the pipeline, including every bundle row it asked for
    ApproxResult r = wtap_approx(inst, approx_options(o));
    cuts = r.report.cuts_added;
    bundles = r.report.bundles_added;
    Json j{{"objective", to_string(r.report.lp_value)},
           {"cuts_added", cuts},
           {"bundles_added", bundles},
           {"certificate_ok", r.report.lp_certificate_ok}};
    emit(o, json_out(o) ? j.dump(2) : "objective " + to_string(r.report.lp_value) + "\n");
    if (!r.report.lp_certificate_ok) throw PropertyFailure(r.report.lp_certificate_failure);
    return kOk;
  } else {
    throw InvalidArgument("--kind must be cut, odd-cut or bundle");
  }
  if (out.status != LpStatus::Optimal) throw InfeasibleError("LP is infeasible");
  CertificateCheck cert = check_certificate(model, out);
  FractionalSolution x = lp.to_solution(out.solution, inst.link_count());
  if (json_out(o)) {
    Json j{{"objective", to_string(out.objective)},
           {"x", solution_to_json(x)},
           {"cuts_added", cuts},
           {"certificate_ok", cert.ok}};
    if (o.debug) j["model"] = dump_model(model);
    emit(o, j.dump(2));
  } else {
    std::ostringstream os;
    os << "objective " << to_string(out.objective) << "\n";
    for (LinkId l = 0; l < x.size(); ++l) {
      if (x[l] != 0) os << "x" << l << " = " << to_string(x[l]) << "\n";
    }
    if (o.debug) os << dump_model(model);
    emit(o, os.str());
  }
  if (!cert.ok) throw PropertyFailure("LP certificate: " + cert.failure);
  return kOk;
}

Json cut_to_json(const OddCutConstraint& c, const FractionalSolution& x) {
  Json mult = Json::object();
  for (const auto& [l, k] : c.multiplicities) mult[std::to_string(l)] = k;
  return Json{{"members", c.source_set.members},
              {"boundary", c.source_set.boundary},
              {"rhs", to_string(c.rhs)},
              {"multiplicities", mult},
              {"violation", to_string(c.violation(x))}};
}

int cmd_separate(const Options& o) {
  WtapInstance inst = load(o.input);
  FractionalSolution x(inst.link_count());
  if (o.x.empty()) {
    CutLp lp = build_cut_lp(inst);
    LpOutcome out = solve_lp(lp.model);
    if (out.status != LpStatus::Optimal) throw InfeasibleError("cut LP is infeasible");
    x = lp.to_solution(out.solution, inst.link_count());
  } else {
    x = parse_point(o.x, inst.link_count());
  }
  auto cut = separate_odd_cut(inst, x);
  Json j{{"x", solution_to_json(x)}, {"cut", cut ? cut_to_json(*cut, x) : Json(nullptr)}};
  bool agree = true;
  if (o.oracle) {
    auto brute = brute_force_separate(inst, x);
    agree = cut.has_value() == brute.has_value() && (!cut || cut->violation(x) == brute->violation(x));
    j["oracle"] = brute ? cut_to_json(*brute, x) : Json(nullptr);
    j["oracle_agrees"] = agree;
  }
  if (o.debug && inst.edge_count() > 0 && !separate_covering(inst, x)) {
    j["gomory_hu"] = dump_gomory_hu(min_odd_cut(build_slack_graph(inst, x)).tree);
  }
  if (json_out(o)) {
    emit(o, j.dump(2));
  } else if (!cut) {
    emit(o, "no violated odd-cut constraint\n");
  } else {
    std::ostringstream os;
    os << "S";
    for (NodeId v : cut->source_set.members) os << " " << v;
    os << "\n|delta| " << cut->source_set.boundary.size() << "\nrhs " << to_string(cut->rhs) << "\nviolation "
       << to_string(cut->violation(x)) << "\n";
    emit(o, os.str());
  }
  if (!agree) throw PropertyFailure("Gomory-Hu separation disagrees with exhaustive separation");
  return kOk;
}

int cmd_decompose(const Options& o) {
  WtapInstance input = load(o.input);
  NormalizedInstance norm = normalize_costs(input);
  WtapInstance working = shadow_complete(norm.instance);
  AlgorithmParams params = params_for(norm.instance, approx_options(o));
  FractionalSolution x(working.link_count());
  if (o.x.empty()) {
    CutLp lp = build_cut_lp(working);
    std::vector<SeparationOracle> oracles{make_odd_cut_oracle(working)};
    SeparationRun run = solve_with_separation(lp.model, oracles);
    if (run.outcome.status != LpStatus::Optimal) throw InfeasibleError("odd-cut LP is infeasible");
    x = lp.to_solution(run.outcome.solution, working.link_count());
  } else {
    x = parse_point(o.x, working.link_count());
  }
  DecompositionResult d = decompose(working, x, params);
  DecompositionReport rep = verify_decomposition(d, params);
  Json j = decomposition_to_json(d);
  j["properties"] = decomposition_report_to_json(rep);
  j["working_instance"] = instance_to_json(working);
  if (json_out(o)) {
    emit(o, j.dump(2));
  } else {
    std::ostringstream os;
    os << "pairs " << d.pairs.size() << "\nheavy edges " << d.heavy_edges.size() << "\nsplit edges "
       << d.split_edges.size() << "\nc.x " << to_string(d.cost_x) << "\nsum c.x^i " << to_string(d.cost_pairs)
       << "\nc(L^h) " << to_string(d.cost_heavy) << "\nc(L^s) " << to_string(d.cost_split) << "\nproperties "
       << (rep.all_ok() ? "ok" : "FAILED") << "\n";
    emit(o, os.str());
  }
  if (!rep.all_ok()) throw PropertyFailure("decomposition property check failed");
  return kOk;
}

// Every checkable property on one instance; returns failure messages.
std::vector<std::string> check_instance(const WtapInstance& inst, const Options& o) {
  std::vector<std::string> fails;
  auto expect = [&fails](bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
  };
  CutLp lp = build_cut_lp(inst);
  LpOutcome cut_lp = solve_lp(lp.model);
  expect(check_certificate(lp.model, cut_lp).ok, "cut LP certificate");
  FractionalSolution xc = lp.to_solution(cut_lp.solution, inst.link_count());
  if (inst.node_count() <= 14) {
    auto a = separate_odd_cut(inst, xc);
    auto b = brute_force_separate(inst, xc);
    expect(a.has_value() == b.has_value() && (!a || a->violation(xc) == b->violation(xc)), "separation agreement");
  }
  ApproxResult r = wtap_approx(inst, approx_options(o));
  expect(r.report.feasible, "output feasible");
  expect(r.report.lp_certificate_ok, "odd-cut LP certificate");
  expect(r.report.all_certified(), "rounding certificates");
  DecompositionReport rep = verify_decomposition(r.decomposition, params_for(normalize_costs(inst).instance,
                                                                            approx_options(o)));
  expect(rep.all_ok(), "decomposition properties");
  if (o.oracle) {
    Rational opt = brute_force_wtap(inst).cost;
    expect(r.report.lp_value <= opt, "LP value <= OPT");
    expect(r.cost <= 2 * opt, "cost <= 2 OPT");
  }
  return fails;
}

int cmd_verify(const Options& o) {
  std::vector<WtapInstance> corpus;
  if (!o.input.empty()) {
    corpus.push_back(load(o.input));
  } else {
    for (int i = 0; i < o.count; ++i) corpus.push_back(generate(generator_spec(o, o.seed + i)));
  }
  int failed = 0;
  Json j = Json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto fails = check_instance(corpus[i], o);
    if (!fails.empty()) ++failed;
    j.push_back({{"index", i}, {"digest", corpus[i].digest()}, {"failures", fails}});
  }
  if (json_out(o)) {
    emit(o, Json{{"instances", corpus.size()}, {"failed", failed}, {"results", j}}.dump(2));
  } else {
    std::ostringstream os;
    for (const auto& e : j) {
      for (const auto& f : e["failures"]) os << "instance " << e["index"] << ": " << f.get<std::string>() << "\n";
    }
    os << corpus.size() - failed << "/" << corpus.size() << " instances pass\n";
    emit(o, os.str());
  }
  if (failed > 0) throw PropertyFailure(std::to_string(failed) + " instances failed verification");
  return kOk;
}

struct BenchRow {
  std::uint64_t seed = 0;
  Rational cost, lp, certified_total;
  std::optional<Rational> opt;
  std::vector<std::string> fails;
};

BenchRow bench_one(const Options& o, std::uint64_t seed) {
  BenchRow row;
  row.seed = seed;
  WtapInstance inst = generate(generator_spec(o, seed));
  ApproxResult r = wtap_approx(inst, approx_options(o));
  row.cost = r.cost;
  row.lp = r.report.lp_value;
  // certificates are in normalized units
  row.certified_total = r.decomposition.cost_heavy + r.decomposition.cost_split;
  for (const auto& p : r.report.per_pair) row.certified_total += p.certificate;
  row.certified_total /= r.report.scale;
  if (!r.report.feasible) row.fails.push_back("infeasible output");
  if (o.oracle) {
    row.opt = brute_force_wtap(inst).cost;
    if (row.cost > 2 * *row.opt) row.fails.push_back("cost > 2 OPT");
    if (row.lp > *row.opt) row.fails.push_back("LP > OPT");
    if (row.cost > row.certified_total) row.fails.push_back("cost above summed certificates");
  }
  return row;
}

int cmd_bench(const Options& o) {
  const int jobs = o.jobs > 0 ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<BenchRow> rows(o.count);
  std::vector<std::future<void>> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < o.count; i += jobs) rows[i] = bench_one(o, o.seed + i);
    }));
  }
  for (auto& f : workers) f.get();
  int failed = 0;
  std::vector<double> ratios;
  Json j = Json::array();
  for (const auto& r : rows) {
    failed += !r.fails.empty();
    Json e{{"seed", r.seed}, {"cost", to_string(r.cost)}, {"lp", to_string(r.lp)}, {"failures", r.fails}};
    if (r.opt) {
      e["opt"] = to_string(*r.opt);
      if (*r.opt > 0) {
        Rational q = r.cost / *r.opt;
        e["ratio"] = to_string(q);
        ratios.push_back(q.get_d());
      }
    }
    j.push_back(e);
  }
  std::sort(ratios.begin(), ratios.end());
  if (json_out(o)) {
    emit(o, Json{{"runs", j}, {"failed", failed}}.dump(2));
  } else {
    std::ostringstream os;
    os << "runs " << rows.size() << " failed " << failed << "\n";
    if (!ratios.empty()) {
      double mean = 0;
      for (double q : ratios) mean += q;
      mean /= static_cast<double>(ratios.size());
      os << "ratio min " << ratios.front() << " median " << ratios[ratios.size() / 2] << " mean " << mean << " max "
         << ratios.back() << "\n";
    }
    for (const auto& r : rows) {
      for (const auto& f : r.fails) os << "seed " << r.seed << ": " << f << "\n";
    }
    emit(o, os.str());
  }
  if (failed > 0) throw PropertyFailure(std::to_string(failed) + " bench runs failed");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted tree augmentation: exact LPs, odd-cut separation and LP-based rounding"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    c->add_option("-o,--output", o.output, "Write output to a file");
    c->add_flag("--oracle", o.oracle, "Cross-check against brute-force oracles");
    c->add_flag("--debug", o.debug, "Include LP and Gomory-Hu dumps");
  };
  auto algorithm = [&o](CLI::App* c) {
    c->add_option("--epsilon", o.epsilon, "Accuracy parameter p/q in (0,1]");
    c->add_option("--max-cost", o.max_cost, "Cost bound M (default: largest normalized cost)");
    c->add_option("--override-alpha", o.override_alpha, "Thin-edge threshold (default 4M/eps^2)");
    c->add_option("--override-heavy", o.override_heavy, "Heavy-coverage threshold (default 2/eps)");
  };
  auto generator = [&o](CLI::App* c) {
    c->add_option("--family", o.family, "random-tree|star|path|caterpillar|up-cross-only|leaf-to-leaf|cycle-on-leaves");
    c->add_option("--n", o.n, "Number of tree nodes");
    c->add_option("--density", o.density, "Links per node");
    c->add_option("--costs", o.costs, "unit|integer|rational");
    c->add_option("--seed", o.seed, "Random seed");
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  common(gen);
  generator(gen);
  gen->add_option("--max-cost", o.max_cost, "Largest link cost");

  auto* solve = app.add_subcommand("solve", "Run the approximation algorithm");
  common(solve);
  algorithm(solve);
  solve->add_option("input", o.input, "Instance file, - for stdin")->required();
  solve->add_option("--seed", o.seed, "Unused; accepted for uniform scripting");

  auto* exact = app.add_subcommand("exact", "Exact optimum by search / branch and bound");
  common(exact);
  exact->add_option("input", o.input, "Instance file, - for stdin")->required();

  auto* lp = app.add_subcommand("lp", "Solve an LP relaxation");
  common(lp);
  algorithm(lp);
  lp->add_option("input", o.input, "Instance file, - for stdin")->required();
  lp->add_option("--kind", o.kind, "cut|odd-cut|bundle")->check(CLI::IsMember({"cut", "odd-cut", "bundle"}));

  auto* sep = app.add_subcommand("separate", "One odd-cut separation call");
  common(sep);
  sep->add_option("input", o.input, "Instance file, - for stdin")->required();
  sep->add_option("--x", o.x, "Point as link:value,... or JSON (default: cut LP optimum)");

  auto* dec = app.add_subcommand("decompose", "Decompose the odd-cut LP solution");
  common(dec);
  algorithm(dec);
  dec->add_option("input", o.input, "Instance file, - for stdin")->required();
  dec->add_option("--x", o.x, "Point on the shadow-complete instance's links (default: odd-cut LP optimum)");

  auto* ver = app.add_subcommand("verify", "Run the property suite");
  common(ver);
  algorithm(ver);
  generator(ver);
  ver->add_option("input", o.input, "Instance file, - for stdin (default: generated corpus)");
  ver->add_option("--count", o.count, "Number of generated instances");

  auto* bench = app.add_subcommand("bench", "Batch ratios over seeds");
  common(bench);
  algorithm(bench);
  generator(bench);
  bench->add_option("--count", o.count, "Number of seeds");
  bench->add_option("--jobs", o.jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*solve) return cmd_solve(o);
    if (*exact) return cmd_exact(o);
    if (*lp) return cmd_lp(o);
    if (*sep) return cmd_separate(o);
    if (*dec) return cmd_decompose(o);
    if (*ver) return cmd_verify(o);
    if (*bench) return cmd_bench(o);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const PropertyFailure& e) {
    std::cerr << "property check failed: " << e.what() << "\n";
    return kPropertyFailed;
  } catch (const InternalError& e) {
    std::cerr << "property check failed: " << e.what() << "\n";
    return kPropertyFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const StateError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
