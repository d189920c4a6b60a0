#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "mixvote/errors.hpp"
#include "mixvote/generate.hpp"
#include "mixvote/io.hpp"
#include "mixvote/oracle.hpp"
#include "mixvote/rules.hpp"
#include "mixvote/verify.hpp"

namespace mixvote::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// --------------------------------------------------------------- reports

Json harmonic_json(const HarmonicValue& h) {
  return {{"value", h.value}, {"abs_error_bound", h.abs_error_bound}};
}

Json trace_json(const GreedyTrace& trace, const Instance& inst) {
  Json rounds = Json::array();
  for (const auto& r : trace.rounds) {
    rounds.push_back({{"t_star", io::rational_json(r.t_star)},
                      {"group", io::agent_set_json(r.group)},
                      {"witness", io::allocation_json(r.witness, inst)}});
  }
  return {{"rounds", rounds}, {"unserved", io::agent_set_json(trace.unserved)}};
}

Json ledger_json(const PaymentLedger& ledger, const Instance& inst) {
  Json purchases = Json::array();
  for (const auto& p : ledger.purchases) {
    Json pay = Json::array();
    for (const auto& x : p.payments) pay.push_back(io::rational_json(x));
    Json entry = {{"rho", io::rational_json(p.rho)},
                  {"cost", io::rational_json(p.cost)},
                  {"payers", io::agent_set_json(p.payers)},
                  {"payments", pay}};
    if (p.kind == Atom::Kind::Good) {
      entry["kind"] = "good";
      entry["good"] = inst.good_names()[p.good];
    } else {
      entry["kind"] = "cake";
      entry["piece"] = {io::rational_json(p.piece.lo), io::rational_json(p.piece.hi)};
    }
    purchases.push_back(std::move(entry));
  }
  Json budgets = Json::array();
  for (const auto& b : ledger.budgets) budgets.push_back(io::rational_json(b));
  return {{"initial_budget", io::rational_json(ledger.initial_budget)},
          {"final_budgets", budgets},
          {"purchases", purchases}};
}

Json pav_json(const PavSolution& sol) {
  Json atoms = Json::array();
  for (const auto& [iv, len] : sol.atom_lengths) {
    atoms.push_back({{"atom", {io::rational_json(iv.lo), io::rational_json(iv.hi)}},
                     {"length", io::rational_json(len)}});
  }
  return {{"score", harmonic_json(sol.score)},
          {"optimality_gap", sol.optimality_gap},
          {"atom_lengths", atoms},
          {"subsets_evaluated", sol.subsets_evaluated}};
}

Json axiom_json(const AxiomReport& r) {
  Json out = {{"axiom", r.axiom}, {"pass", r.pass}, {"profiles_checked", r.profiles_checked}};
  if (r.witness) {
    out["witness"] = {{"group", io::agent_set_json(r.witness->group)},
                      {"t", io::rational_json(r.witness->t)},
                      {"threshold", io::rational_json(r.witness->threshold)},
                      {"max_utility", io::rational_json(r.witness->max_utility)}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json degree_json(const DegreeReport& r) {
  Json out = {{"bound", r.bound}, {"any_group", r.any_group}, {"groups_checked", r.groups_checked}};
  if (r.any_group) {
    out["min_slack"] = io::rational_json(r.min_slack);
    out["group"] = io::agent_set_json(r.group);
    out["t"] = io::rational_json(r.t);
    out["average"] = io::rational_json(r.average);
    out["bound_value"] = io::rational_json(r.bound_value);
  }
  return out;
}

fs::path sidecar(const fs::path& out, const std::string& tag) {
  fs::path p = out;
  p.replace_extension();
  p += "." + tag + ".json";
  return p;
}

// ------------------------------------------------------------ arguments

struct Globals {
  unsigned threads = 1;
  std::string out;
  bool force = false;
  double harmonic_tol = kDefaultHarmonicTol;
};

std::optional<Rational> opt_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_rational(s);
}

std::optional<long> opt_long(long v) { return v < 0 ? std::nullopt : std::optional<long>(v); }

GreedyScript read_script(const fs::path& path, const Instance& inst) {
  const Json doc = io::read_json(path);
  const Json& rounds = doc.is_object() && doc.contains("script") ? doc.at("script") : doc;
  if (!rounds.is_array()) throw ParseError("script must be an array of {group, witness} rounds");
  GreedyScript script;
  for (const auto& r : rounds) {
    if (!r.is_object() || !r.contains("group") || !r.contains("witness")) {
      throw ParseError("script rounds need 'group' and 'witness'");
    }
    AgentSet group;
    for (const auto& i : r.at("group")) {
      if (!i.is_number_unsigned()) throw ParseError("agent indices must be nonnegative integers");
      group.push_back(i.get<AgentId>());
    }
    Bundle witness = io::allocation_from_json(r.at("witness"), inst);
    script.rounds.emplace_back(std::move(group), std::move(witness));
  }
  return script;
}

// ------------------------------------------------------------ subcommands

struct Outcome {
  int code = kOk;
  Json result;
  Json outputs = Json::object();
  std::optional<std::string> digest;
};

Outcome do_run(const Globals& g, const std::string& rule, const std::string& instance_path,
               const std::vector<std::string>& tie_breaker, const std::string& script_path,
               double eps) {
  const Instance inst = io::read_instance(instance_path);
  Outcome o;
  o.digest = io::instance_digest(inst);
  Bundle allocation;
  Json side;
  if (rule == "greedy-ejr-m") {
    GreedyOptions opts;
    opts.force = g.force;
    std::string script_file = script_path;
    if (!tie_breaker.empty()) {
      if (tie_breaker[0] == "script") {
        if (tie_breaker.size() > 1) script_file = tie_breaker[1];
        if (script_file.empty()) throw ParseError("--tie-breaker script needs a script file");
      } else if (tie_breaker[0] != "default" || tie_breaker.size() > 1) {
        throw ParseError("--tie-breaker must be 'default' or 'script FILE'");
      }
    }
    if (!script_file.empty()) opts.script = read_script(script_file, inst);
    auto res = greedy_ejr_m(inst, opts);
    allocation = res.allocation;
    side = trace_json(res.trace, inst);
  } else if (rule == "gmes") {
    auto res = generalized_mes(inst);
    allocation = res.allocation;
    side = ledger_json(res.ledger, inst);
  } else if (rule == "gpav") {
    PavOptions opts;
    opts.eps = eps;
    opts.harmonic_tol = g.harmonic_tol;
    opts.force = g.force;
    opts.threads = g.threads;
    auto sol = generalized_pav(inst, opts);
    allocation = sol.allocation;
    side = pav_json(sol);
  } else if (rule == "mnw") {
    MnwOptions opts;
    opts.force = g.force;
    auto all = mnw_indivisible(inst, opts);
    allocation = all.front();
    Json list = Json::array();
    for (const auto& b : all) list.push_back(io::allocation_json(b, inst));
    side = {{"optimal_allocations", list}};
  } else {
    throw ParseError("unknown rule '" + rule + "' (greedy-ejr-m, gmes, gpav, mnw)");
  }

  o.result = {{"rule", rule},
              {"allocation", io::allocation_json(allocation, inst)},
              {"utilities", Json::array()}};
  for (const auto& u : utilities(inst, allocation)) o.result["utilities"].push_back(io::rational_json(u));
  o.result["details"] = side;
  if (!g.out.empty()) {
    const fs::path tag = sidecar(g.out, rule == "gmes" ? "ledger" : rule == "gpav" ? "solution" : "trace");
    io::write_allocation(g.out, allocation, inst);
    io::write_json(tag, side);
    o.outputs = {{"allocation", g.out}, {"sidecar", tag.string()}};
  }
  return o;
}

Outcome do_verify(const std::string& axiom, const std::string& instance_path,
                  const std::string& allocation_path, const std::string& beta_s,
                  const std::string& mode_s, const std::string& margin_s) {
  const Instance inst = io::read_instance(instance_path);
  const Bundle a = io::read_allocation(allocation_path, inst);
  const Rational margin = margin_s.empty() ? Rational(0) : parse_rational(margin_s);
  Strictness mode = Strictness::Strict;
  if (mode_s == "weak") {
    mode = Strictness::Weak;
  } else if (mode_s != "strict") {
    throw ParseError("--mode must be strict or weak");
  }
  AxiomReport r;
  if (axiom == "ejr-m") {
    r = verify_ejr_m(inst, a);
  } else if (axiom == "ejr-1") {
    r = verify_ejr_1(inst, a, margin);
  } else if (axiom == "ejr-beta") {
    if (beta_s.empty()) throw ParseError("--axiom ejr-beta needs --beta");
    r = verify_ejr_beta(inst, a, parse_rational(beta_s), mode, margin);
  } else if (axiom == "cake-ejr") {
    r = verify_cake_ejr(inst, a);
  } else {
    throw ParseError("unknown axiom '" + axiom + "' (ejr-m, ejr-1, ejr-beta, cake-ejr)");
  }
  Outcome o;
  o.digest = io::instance_digest(inst);
  o.result = axiom_json(r);
  o.code = r.pass ? kOk : kAxiomFail;
  return o;
}

Outcome do_audit(const std::string& bound, const std::string& instance_path,
                 const std::string& allocation_path, const std::string& t_s) {
  const Instance inst = io::read_instance(instance_path);
  const Bundle a = io::read_allocation(allocation_path, inst);
  const DegreeReport r = audit_degree(inst, a, parse_degree_bound(bound), opt_rational(t_s));
  Outcome o;
  o.digest = io::instance_digest(inst);
  o.result = degree_json(r);
  o.code = r.any_group && r.min_slack < 0 ? kAxiomFail : kOk;
  return o;
}

Outcome do_gen(const Globals& g, const ConstructionSpec& spec, const RandomSpec& rnd) {
  Outcome o;
  std::optional<Instance> inst;
  Json meta;
  if (spec.name == "random") {
    inst = gen_random(rnd);
    meta = {{"construction", "random"},
            {"parameters",
             {{"n", rnd.n}, {"m", rnd.m}, {"cake_atoms", rnd.cake_atoms},
              {"density", rnd.density}, {"seed", rnd.seed},
              {"alpha", io::rational_json(inst->alpha())}}}};
  } else {
    Construction c = gen_construction(spec);
    inst = std::move(c.instance);
    meta = std::move(c.metadata);
  }
  o.digest = io::instance_digest(*inst);
  o.result = {{"construction", spec.name},
              {"n", inst->num_agents()},
              {"m", inst->num_goods()},
              {"cake_length", io::rational_json(inst->cake_length())},
              {"alpha", io::rational_json(inst->alpha())},
              {"metadata", meta}};
  if (!g.out.empty()) {
    io::write_instance(g.out, *inst);
    const fs::path tag = sidecar(g.out, "meta");
    io::write_json(tag, meta);
    o.outputs = {{"instance", g.out}, {"sidecar", tag.string()}};
  } else {
    o.result["instance"] = io::instance_json(*inst);
  }
  return o;
}

Outcome do_oracle(const Globals& g, const std::string& check, const std::string& instance_path,
                  std::size_t grid, const std::string& beta_s, const std::string& mode_s,
                  const std::string& t_s, const std::string& objective) {
  const Instance inst = io::read_instance(instance_path);
  EnumerationConfig cfg;
  cfg.grid = grid;
  if (g.force) cfg.limit = std::numeric_limits<std::size_t>::max();
  Outcome o;
  o.digest = io::instance_digest(inst);
  if (check == "no-ejr-beta") {
    if (beta_s.empty()) throw ParseError("--check no-ejr-beta needs --beta");
    const Strictness mode = mode_s == "weak" ? Strictness::Weak : Strictness::Strict;
    const bool impossible = oracle_no_ejr_beta(inst, parse_rational(beta_s), mode, cfg);
    o.result = {{"check", check}, {"impossible", impossible}};
  } else if (check == "min-max-avg") {
    if (t_s.empty()) throw ParseError("--check min-max-avg needs --t");
    const auto v = oracle_min_max_avg(inst, parse_rational(t_s), cfg);
    o.result = {{"check", check}, {"value", v ? io::rational_json(*v) : Json("inf")}};
  } else if (check == "opt") {
    Objective obj = Objective::Gpav;
    if (objective == "nash") {
      obj = Objective::Nash;
    } else if (objective != "gpav") {
      throw ParseError("--objective must be gpav or nash");
    }
    const OracleOptimum best = oracle_discretized_opt(inst, obj, cfg, g.harmonic_tol);
    o.result = {{"check", check},
                {"objective", objective},
                {"allocation", io::allocation_json(best.allocation, inst)},
                {"gpav_score", harmonic_json(best.gpav)},
                {"nash_positive", best.nash_positive},
                {"nash_product", io::rational_json(best.nash_product)},
                {"candidates", best.candidates}};
    if (!g.out.empty()) {
      io::write_allocation(g.out, best.allocation, inst);
      o.outputs = {{"allocation", g.out}};
    }
  } else {
    throw ParseError("unknown check '" + check + "' (no-ejr-beta, min-max-avg, opt)");
  }
  return o;
}

Outcome do_bench(const std::string& sizes, std::uint64_t seed, double density) {
  Outcome o;
  Json rows = Json::array();
  bool ok = true;
  for (const auto& r : bench_mes(parse_bench_sizes(sizes), seed, density)) {
    rows.push_back({{"n", r.size.n},
                    {"m", r.size.m},
                    {"atoms", r.size.atoms},
                    {"millis", r.millis},
                    {"iterations", r.iterations},
                    {"bound", r.bound},
                    {"within_bound", r.within_bound}});
    ok = ok && r.within_bound;
  }
  o.result = {{"bench", "gmes"}, {"seed", seed}, {"rows", rows}};
  o.code = ok ? kOk : kAxiomFail;
  return o;
}

}  // namespace

std::vector<BenchSize> parse_bench_sizes(const std::string& text) {
  std::vector<BenchSize> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    BenchSize s;
    char x1 = 0, x2 = 0;
    std::istringstream is(item);
    if (!(is >> s.n >> x1 >> s.m >> x2 >> s.atoms) || x1 != 'x' || x2 != 'x' || !is.eof()) {
      throw ParseError("bench sizes look like NxMxATOMS[,NxMxATOMS...], got '" + item + "'");
    }
    out.push_back(s);
  }
  if (out.empty()) throw ParseError("no bench sizes given");
  return out;
}

std::vector<BenchRow> bench_mes(const std::vector<BenchSize>& sizes, std::uint64_t seed,
                                double density) {
  std::vector<BenchRow> rows;
  for (const auto& s : sizes) {
    RandomSpec spec;
    spec.n = s.n;
    spec.m = s.m;
    spec.cake_atoms = s.atoms;
    spec.density = density;
    spec.seed = seed;
    BenchRow row;
    row.size = s;
    row.bound = s.m + s.atoms * s.n + s.n;
    if (s.n == 0 || s.m + s.atoms == 0) {
      rows.push_back(row);
      continue;
    }
    const Instance inst = gen_random(spec);
    const auto start = std::chrono::steady_clock::now();
    const MesResult res = generalized_mes(inst);
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
    row.iterations = res.ledger.purchases.size();
    row.within_bound = row.iterations <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approval-based allocation of mixed divisible and indivisible goods", "mixvote"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (allocation or instance)");
  app.add_flag("--force", g.force, "lift exhaustive-search caps");
  app.add_option("--harmonic-tol", g.harmonic_tol, "tolerance for harmonic numbers")
      ->check(CLI::Range(kMinHarmonicTol, 1.0));

  // run
  auto* run = app.add_subcommand("run", "apply an allocation rule");
  std::string rule, instance, script;
  std::vector<std::string> tie;
  double eps = 1e-9;
  run->add_option("--rule", rule)->required()->check(
      CLI::IsMember({"greedy-ejr-m", "gmes", "gpav", "mnw"}));
  run->add_option("--instance", instance)->required();
  run->add_option("--tie-breaker", tie, "default | script FILE")->expected(1, 2);
  run->add_option("--script", script, "tie-breaking script (thm6 metadata works)");
  run->add_option("--eps", eps, "GPAV optimality tolerance")->check(CLI::PositiveNumber);

  // verify
  auto* ver = app.add_subcommand("verify", "check an allocation against an axiom");
  std::string axiom, allocation, beta_s, mode_s = "strict", margin_s;
  ver->add_option("--axiom", axiom)->required()->check(
      CLI::IsMember({"ejr-m", "ejr-1", "ejr-beta", "cake-ejr"}));
  ver->add_option("--instance", instance)->required();
  ver->add_option("--allocation", allocation)->required();
  ver->add_option("--beta", beta_s);
  ver->add_option("--mode", mode_s)->check(CLI::IsMember({"strict", "weak"}));
  ver->add_option("--margin", margin_s, "relax EJR thresholds by this rational");

  // audit
  auto* aud = app.add_subcommand("audit", "minimum proportionality-degree slack");
  std::string bound, t_s;
  aud->add_option("--bound", bound)->required()->check(
      CLI::IsMember({"ejr-m", "ejr-1", "gpav", "mes-upper"}));
  aud->add_option("--instance", instance)->required();
  aud->add_option("--allocation", allocation)->required();
  aud->add_option("--t", t_s, "only groups cohesive at this t, evaluated at f(t)");

  // gen
  auto* gen = app.add_subcommand("gen", "build an instance");
  ConstructionSpec spec;
  RandomSpec rnd;
  std::string eps_s, delta_s, gamma_s, bprime_s, alpha_s, beta_gen;
  long n_gen = -1, q_gen = -1;
  gen->add_option("--construction", spec.name)->required()->check(
      CLI::IsMember({"fig1", "prop1", "prop4", "thm4", "thm6", "appendix", "random"}));
  gen->add_option("--t", t_s);
  gen->add_option("--eps", eps_s);
  gen->add_option("--delta", delta_s);
  gen->add_option("--gamma", gamma_s);
  gen->add_option("--beta", beta_gen);
  gen->add_option("--beta-prime", bprime_s);
  gen->add_option("--n", n_gen);
  gen->add_option("--q", q_gen);
  gen->add_option("--m", rnd.m);
  gen->add_option("--atoms", rnd.cake_atoms);
  gen->add_option("--alpha", alpha_s);
  gen->add_option("--density", rnd.density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", rnd.seed);

  // oracle
  auto* ora = app.add_subcommand("oracle", "brute-force checks");
  std::string check, objective = "gpav";
  std::size_t grid = 1;
  ora->add_option("--check", check)->required()->check(
      CLI::IsMember({"no-ejr-beta", "min-max-avg", "opt"}));
  ora->add_option("--instance", instance)->required();
  ora->add_option("--grid", grid)->check(CLI::PositiveNumber);
  ora->add_option("--beta", beta_s);
  ora->add_option("--mode", mode_s)->check(CLI::IsMember({"strict", "weak"}));
  ora->add_option("--t", t_s);
  ora->add_option("--objective", objective)->check(CLI::IsMember({"gpav", "nash"}));

  // bench
  auto* ben = app.add_subcommand("bench", "time Generalized MES on random instances");
  std::string sizes = "1000x100x100";
  std::uint64_t seed = 1;
  double density = 0.5;
  ben->add_option("--sizes", sizes, "NxMxATOMS[,...]");
  ben->add_option("--seed", seed);
  ben->add_option("--density", density)->check(CLI::Range(0.0, 1.0));

  for (auto* sub : {run, ver, aud, gen, ora, ben}) sub->fallthrough();

  std::vector<const char*> argv{"mixvote"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (run->parsed()) {
      o = do_run(g, rule, instance, tie, script, eps);
    } else if (ver->parsed()) {
      o = do_verify(axiom, instance, allocation, beta_s, mode_s, margin_s);
    } else if (aud->parsed()) {
      o = do_audit(bound, instance, allocation, t_s);
    } else if (gen->parsed()) {
      spec.t = opt_rational(t_s);
      spec.eps = opt_rational(eps_s);
      spec.delta = opt_rational(delta_s);
      spec.gamma = opt_rational(gamma_s);
      spec.beta = opt_rational(beta_gen);
      spec.beta_prime = opt_rational(bprime_s);
      spec.n = opt_long(n_gen);
      spec.q = opt_long(q_gen);
      if (n_gen >= 0) rnd.n = static_cast<std::size_t>(n_gen);
      rnd.alpha = opt_rational(alpha_s);
      o = do_gen(g, spec, rnd);
    } else if (ora->parsed()) {
      o = do_oracle(g, check, instance, grid, beta_s, mode_s, t_s, objective);
    } else {
      o = do_bench(sizes, seed, density);
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const double millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  Json command = Json::array({"mixvote"});
  for (const auto& a : args) command.push_back(a);
  Json report = {{"command", command},
                 {"instance_digest", o.digest ? Json(*o.digest) : Json(nullptr)},
                 {"outputs", o.outputs},
                 {"result", o.result},
                 {"timing_ms", millis},
                 {"version", MIXVOTE_VERSION},
                 {"exit_code", o.code}};
  out << io::dump(report);
  return o.code;
}

}  // namespace mixvote::cli
