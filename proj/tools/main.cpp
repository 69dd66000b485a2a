// Command-line front end for the corelect library.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corelect/analysis.hpp"
#include "corelect/errors.hpp"
#include "corelect/fractional_core.hpp"
#include "corelect/integralization.hpp"
#include "corelect/lp.hpp"
#include "corelect/solver.hpp"

using namespace corelect;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kUsage = 2, kResource = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return json::parse(slurp(path)); }

Instance instance_of(const json& j) { return instance_from_json(j.dump()); }

Committee committee_of(const json& j, int n) {
  Committee x;
  for (const auto& [key, val] : j.items()) {
    Rat v = parse_rat(val.get<std::string>());
    if (v != 0) x.amounts[parse_type(key, n)] = v;
  }
  for (const auto& [r, v] : x.amounts)
    if (!is_integer(v)) x.integral = false;
  x.normalize();
  return x;
}

UtilityVector demands_of(const json& j) {
  UtilityVector u;
  for (const auto& v : j) u.values.push_back(parse_rat(v.get<std::string>()));
  u.integral = true;
  for (const Rat& v : u.values) u.integral = u.integral && is_integer(v);
  return u;
}

json committee_json(const Committee& x) {
  json j = json::object();
  for (const auto& [r, v] : x.amounts) j[type_str(r)] = rat_str(v);
  return j;
}

json utilities_json(const UtilityVector& u) {
  json j = json::array();
  for (const Rat& v : u.values) j.push_back(rat_str(v));
  return j;
}

void print_committee(const Committee& x) {
  if (x.empty()) {
    std::cout << "  (empty committee)\n";
    return;
  }
  for (const auto& [r, v] : x.amounts)
    std::cout << "  type {" << type_str(r) << "}: " << rat_str(v) << "\n";
  std::cout << "  size: " << rat_str(x.size()) << "\n";
}

void print_utilities(const Instance& inst, const Committee& x) {
  auto u = utility(inst, x);
  std::cout << "  utilities: (";
  for (int i = 0; i < inst.n; ++i) std::cout << (i ? ", " : "") << rat_str(u.values[i]);
  std::cout << ")\n";
}

std::string coalition_str(const Coalition& s) {
  std::string out = "{";
  bool first = true;
  for (int i : s.voters()) {
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

struct Options {
  std::string input;
  std::string epsilon;
  std::string order;
  std::string format = "human";
  int jobs = 1;
  long long cap = 10000000;
  unsigned seed = 0;
};

std::vector<int> parse_order(const std::string& text, int n) {
  std::vector<int> order;
  if (text.empty()) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return order;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) order.push_back(std::stoi(item) - 1);
  return order;
}

int with_solver_report(const Options& opt, const Instance& inst, const SolveReport& report) {
  if (opt.format == "json") {
    json j;
    j["committee"] = committee_json(report.committee);
    j["utilities"] = utilities_json(report.utilities);
    j["fractional_point"] = committee_json(report.fractional_point);
    j["epsilon"] = rat_str(report.epsilon);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "committee:\n";
    print_committee(report.committee);
    print_utilities(inst, report.committee);
  }
  return kOk;
}

int cmd_solve(const Options& opt) {
  Instance inst = load_instance(opt.input);
  auto order = parse_order(opt.order, inst.n);
  SolveReport report = solve_core_pareto(inst, order);
  return with_solver_report(opt, inst, report);
}

int cmd_solve_n3(const Options& opt) {
  Instance inst = load_instance(opt.input);
  Committee x = solve_core_n3(inst);
  if (opt.format == "json") {
    json j;
    j["committee"] = committee_json(x);
    j["utilities"] = utilities_json(utility(inst, x));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "committee:\n";
    print_committee(x);
    print_utilities(inst, x);
  }
  return kOk;
}

int cmd_verify_core(const Options& opt) {
  json j = read_json(opt.input);
  Instance inst = instance_of(j);
  Committee x = committee_of(j.at("committee"), inst.n);
  auto cert = verify_core(inst, x);
  if (opt.format == "json") {
    json out;
    out["in_core"] = !cert.has_value();
    if (cert) {
      out["coalition"] = coalition_str(cert->coalition);
      out["deviation"] = committee_json(cert->deviation);
      json gains = json::array();
      for (const Rat& g : cert->utility_gains) gains.push_back(rat_str(g));
      out["utility_gains"] = gains;
    }
    std::cout << out.dump(2) << "\n";
  } else if (cert) {
    std::cout << "blocked by coalition " << coalition_str(cert->coalition) << "\n";
    std::cout << "deviation:\n";
    print_committee(cert->deviation);
  } else {
    std::cout << "in the core\n";
  }
  return cert ? kVerifyFail : kOk;
}

int cmd_verify_pareto(const Options& opt) {
  json j = read_json(opt.input);
  Instance inst = instance_of(j);
  Committee x = committee_of(j.at("committee"), inst.n);
  auto better = verify_pareto(inst, x);
  if (opt.format == "json") {
    json out;
    out["pareto_optimal"] = !better.has_value();
    if (better) out["dominating_committee"] = committee_json(*better);
    std::cout << out.dump(2) << "\n";
  } else if (better) {
    std::cout << "dominated; a better committee:\n";
    print_committee(*better);
    print_utilities(inst, *better);
  } else {
    std::cout << "pareto-optimal\n";
  }
  return better ? kVerifyFail : kOk;
}

int cmd_check_integralizable(const Options& opt) {
  Instance inst = load_instance(opt.input);
  auto report = check_integralizability(inst, opt.cap);
  if (opt.format == "json") {
    json out;
    out["integralizable"] = report.integralizable;
    if (report.counterexample) {
      out["gap_utilities"] = utilities_json(report.counterexample->first);
      out["fractional_witness"] = committee_json(report.counterexample->second);
    }
    std::cout << out.dump(2) << "\n";
  } else if (report.integralizable) {
    std::cout << "integralizable\n";
  } else {
    std::cout << "not integralizable; gap utilities: (";
    const auto& u = report.counterexample->first;
    for (std::size_t i = 0; i < u.values.size(); ++i)
      std::cout << (i ? ", " : "") << rat_str(u.values[i]);
    std::cout << ")\n";
  }
  return report.integralizable ? kOk : kVerifyFail;
}

int cmd_tau(const Options& opt) {
  json j = read_json(opt.input);
  Instance inst = instance_of(j);
  auto u = demands_of(j.at("demands"));
  auto t = tau(inst, u);
  if (opt.format == "json") {
    json out;
    out["feasible"] = t.has_value();
    if (t) {
      out["tau"] = rat_str(t->value);
      out["witness"] = committee_json(t->witness);
    }
    std::cout << out.dump(2) << "\n";
  } else if (t) {
    std::cout << "tau = " << rat_str(t->value) << "\n";
    print_committee(t->witness);
  } else {
    std::cout << "infeasible\n";
  }
  return t ? kOk : kVerifyFail;
}

int cmd_round(const Options& opt) {
  json j = read_json(opt.input);
  Instance inst = instance_of(j);
  Committee x = committee_of(j.at("committee"), inst.n);
  Committee out = round_committee(inst, x);
  if (opt.format == "json") {
    json o;
    o["committee"] = committee_json(out);
    o["utilities"] = utilities_json(utility(inst, out));
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << "rounded committee:\n";
    print_committee(out);
    print_utilities(inst, out);
  }
  return kOk;
}

int cmd_fractional_core(const Options& opt) {
  Instance inst = load_instance(opt.input);
  Rat epsilon = opt.epsilon.empty() ? Rat(Int(1), compute_L(std::min(inst.n, 5)) + 1)
                                    : parse_rat(opt.epsilon);
  auto point = approx_fractional_core(inst, epsilon);
  if (opt.format == "json") {
    json o;
    o["point"] = committee_json(point.x);
    o["utilities"] = utilities_json(utility(inst, point.x));
    o["epsilon"] = rat_str(point.epsilon_used);
    o["verified"] = point.verified;
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << "fractional core point (epsilon " << rat_str(point.epsilon_used) << "):\n";
    print_committee(point.x);
    print_utilities(inst, point.x);
  }
  return kOk;
}

int cmd_rule(const Options& opt, const std::string& rule) {
  Instance inst = load_instance(opt.input);
  Committee x = rule == "pav" ? pav(inst, opt.cap) : mes(inst);
  if (opt.format == "json") {
    json o;
    o["committee"] = committee_json(x);
    o["utilities"] = utilities_json(utility(inst, x));
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << rule << " committee:\n";
    print_committee(x);
    print_utilities(inst, x);
  }
  return kOk;
}

int cmd_search(const Options& opt, int n, long k_max, const std::string& sizes_text,
               long supply_cap) {
  std::set<int> sizes;
  std::stringstream ss(sizes_text);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.insert(std::stoi(item));
  auto hits = search_nonintegralizable(n, k_max, sizes, supply_cap, opt.jobs, opt.cap);
  if (opt.format == "json") {
    json o = json::array();
    for (const auto& [inst, u] : hits) {
      json h;
      h["instance"] = json::parse(instance_to_json(inst));
      h["gap_utilities"] = utilities_json(u);
      o.push_back(h);
    }
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << hits.size() << " non-integralizable instance(s)\n";
    for (const auto& [inst, u] : hits) {
      std::cout << "k=" << inst.k << " supply:";
      for (const auto& [r, c] : inst.supply) std::cout << " {" << type_str(r) << "}x" << c;
      std::cout << " gap u=(";
      for (std::size_t i = 0; i < u.values.size(); ++i)
        std::cout << (i ? "," : "") << rat_str(u.values[i]);
      std::cout << ")\n";
    }
  }
  return kOk;
}

int cmd_gap(const Options& opt) {
  json j = read_json(opt.input);
  GeneralInstance g = general_from_json(j.dump());
  auto u = demands_of(j.at("demands"));
  auto report = feasibility_gap(g, u);
  if (opt.format == "json") {
    json o;
    o["fractional_feasible"] = report.fractional.has_value();
    o["integral_feasible"] = report.integral.has_value();
    if (report.fractional) {
      json f = json::array();
      for (const Rat& v : *report.fractional) f.push_back(rat_str(v));
      o["fractional_solution"] = f;
    }
    if (report.integral) o["integral_solution"] = *report.integral;
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << "fractional: " << (report.fractional ? "feasible" : "infeasible") << "\n";
    std::cout << "integral:   " << (report.integral ? "feasible" : "infeasible") << "\n";
  }
  return kOk;
}

// --- reproduction fixtures -------------------------------------------------

TypeMask mask_of(std::initializer_list<int> voters_1based) {
  TypeMask m = 0;
  for (int v : voters_1based) m |= TypeMask(1) << (v - 1);
  return m;
}

Instance build(int n, long k, std::vector<std::pair<TypeMask, long>> supply) {
  Instance inst;
  inst.n = n;
  inst.k = k;
  for (auto& [r, c] : supply) inst.supply[r] += c;
  Rat share(k, n);
  share.canonicalize();
  inst.budgets.assign(n, share);
  inst.validate();
  return inst;
}

Instance blocked_pav_instance() {
  return build(3, 18,
               {{mask_of({1, 2}), 10}, {mask_of({1}), 1}, {mask_of({2}), 1}, {mask_of({3}), 8}});
}

Instance two_triangles() {
  return build(6, 3,
               {{mask_of({1, 2}), 1},
                {mask_of({1, 3}), 1},
                {mask_of({2, 3}), 1},
                {mask_of({4, 5}), 1},
                {mask_of({4, 6}), 1},
                {mask_of({5, 6}), 1}});
}

Instance four_candidates() {
  return build(6, 2,
               {{mask_of({1, 2, 3}), 1},
                {mask_of({1, 4, 5}), 1},
                {mask_of({2, 4, 6}), 1},
                {mask_of({3, 5, 6}), 1}});
}

Instance mes_dominated_n3() {
  return build(3, 9,
               {{mask_of({1, 2}), 6}, {mask_of({1, 3}), 2}, {mask_of({2, 3}), 2},
                {mask_of({3}), 3}});
}

Instance mes_blocked_n9() {
  Instance inst;
  inst.n = 9;
  inst.k = 27;
  inst.supply[mask_of({1, 2, 3, 4, 5, 6})] = 18;
  inst.supply[mask_of({7, 8})] = 3;
  inst.supply[mask_of({7, 9})] = 3;
  inst.supply[mask_of({8, 9})] = 3;
  inst.supply[mask_of({1, 2, 3, 4, 7})] = 7;
  inst.supply[mask_of({1, 2, 3, 4, 8})] = 7;
  inst.supply[mask_of({1, 2, 3, 4, 9})] = 7;
  inst.budgets.assign(9, Rat(3));
  inst.validate();
  return inst;
}

struct ReproLog {
  bool all_ok = true;
  void check(bool ok, const std::string& what) {
    std::cout << (ok ? "PASS: " : "FAIL: ") << what << "\n";
    all_ok = all_ok && ok;
  }
};

int repro_fig1() {
  ReproLog log;
  Instance inst = blocked_pav_instance();
  Committee w = pav(inst);
  auto u = utility(inst, w);
  log.check(u.values == std::vector<Rat>{Rat(10), Rat(10), Rat(8)}, "PAV utilities (10,10,8)");
  auto cert = verify_core(inst, w);
  log.check(cert && cert->coalition.mask == mask_of({1, 2}), "blocking coalition {1,2} found");
  auto report = solve_core_pareto(inst, {0, 1, 2});
  log.check(!verify_core(inst, report.committee) && !verify_pareto(inst, report.committee),
            "solver output unblocked");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_gap_instance(const Instance& inst, int voters) {
  ReproLog log;
  auto report = check_integralizability(inst);
  log.check(!report.integralizable, "instance is not integralizable");
  log.check(report.counterexample &&
                report.counterexample->first.values == std::vector<Rat>(voters, Rat(1)),
            "all-ones utility vector is the gap");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_gap_general(const GeneralInstance& g, const std::string& what) {
  ReproLog log;
  auto u = UtilityVector::of_longs({1, 1, 1});
  auto report = feasibility_gap(g, u);
  log.check(report.fractional.has_value(), what + ": fractionally feasible");
  log.check(!report.integral.has_value(), what + ": integrally infeasible");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_ex71() {
  GeneralInstance g;
  g.n = 3;
  g.fractional_budget = g.integral_budget = 3;
  g.candidates = {{Rat(2), {Rat(1), Rat(1), Rat(0)}},
                  {Rat(2), {Rat(1), Rat(0), Rat(1)}},
                  {Rat(2), {Rat(0), Rat(1), Rat(1)}}};
  return repro_gap_general(g, "cost-2 candidates");
}

int repro_ex72() {
  GeneralInstance g;
  g.n = 3;
  g.fractional_budget = g.integral_budget = 1;
  g.candidates = {{Rat(1), {Rat(2), Rat(1), Rat(0)}},
                  {Rat(1), {Rat(0), Rat(2), Rat(1)}},
                  {Rat(1), {Rat(1), Rat(0), Rat(2)}}};
  return repro_gap_general(g, "additive valuations");
}

int repro_ex73() {
  GeneralInstance g;
  g.n = 3;
  g.fractional_budget = Rat(2) - Rat(1, 100);
  g.integral_budget = 1;
  g.candidates = {{Rat(1), {Rat(1), Rat(1), Rat(0)}},
                  {Rat(1), {Rat(1), Rat(0), Rat(1)}},
                  {Rat(1), {Rat(0), Rat(1), Rat(1)}}};
  return repro_gap_general(g, "below-droop budget");
}

int repro_exB1() {
  ReproLog log;
  Instance inst = mes_dominated_n3();
  Committee m =
      mes(inst, {mask_of({1, 2}), mask_of({3}), mask_of({1, 3}), mask_of({2, 3})});
  auto um = utility(inst, m);
  log.check(um.values == std::vector<Rat>{Rat(6), Rat(6), Rat(3)}, "MES utilities (6,6,3)");
  auto us = utility(inst, solve_core_n3(inst));
  bool dominates = true;
  for (int i = 0; i < 3; ++i) dominates = dominates && us.values[i] > um.values[i];
  log.check(dominates, "three-voter solver strictly dominates MES");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_exB2() {
  ReproLog log;
  Instance inst = mes_blocked_n9();
  Committee w = mes(inst);
  log.check(w.amount_of(mask_of({1, 2, 3, 4, 5, 6})) == Rat(18) &&
                w.amount_of(mask_of({7, 8})) == Rat(3) &&
                w.amount_of(mask_of({7, 9})) == Rat(3) &&
                w.amount_of(mask_of({8, 9})) == Rat(3),
            "MES type counts {a:18,b:3,c:3,d:3}");
  auto cert = verify_core(inst, w);
  log.check(cert && cert->coalition.mask == mask_of({1, 2, 3, 4, 7, 8, 9}) &&
                cert->deviation.size() == Rat(21),
            "seven-voter blocking coalition with 21 candidates");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_table1() {
  ReproLog log;
  std::vector<long> expect = {1, 1, 2, 6, 60};
  bool ok = true;
  for (int n = 1; n <= 5; ++n) ok = ok && compute_L(n) == expect[n - 1];
  log.check(ok, "L = (1,1,2,6,60)");
  return log.all_ok ? kOk : kVerifyFail;
}

int repro_fig5() {
  ReproLog log;
  std::string text = emit_normaliz(5);
  log.check(text.find("amb_space 37") == 0, "header amb_space 37");
  log.check(text.find("cone 68") != std::string::npos, "header cone 68");
  log.check(monoid_generators(5).size() == 68, "68 generators");
  return log.all_ok ? kOk : kVerifyFail;
}

int cmd_repro(const std::string& id) {
  if (id == "fig1") return repro_fig1();
  if (id == "ex4.6") return repro_gap_instance(two_triangles(), 6);
  if (id == "ex4.7") return repro_gap_instance(four_candidates(), 6);
  if (id == "ex7.1") return repro_ex71();
  if (id == "ex7.2") return repro_ex72();
  if (id == "ex7.3") return repro_ex73();
  if (id == "exB.1") return repro_exB1();
  if (id == "exB.2") return repro_exB2();
  if (id == "table1") return repro_table1();
  if (id == "fig5") return repro_fig5();
  std::cerr << "unknown reproduction id: " << id << "\n";
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Core committee solver and verifiers for approval elections"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", opt.input, "input JSON file");
    if (needs_input) in->required();
    sub->add_option("--format", opt.format, "output format: human|json")
        ->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--cap", opt.cap, "search/enumeration node cap");
    sub->add_option("--seed", opt.seed, "seed for randomized corpora");
  };

  auto* solve = app.add_subcommand("solve", "compute a Pareto-optimal core committee (n <= 5)");
  add_common(solve, true);
  solve->add_option("--epsilon", opt.epsilon, "fractional-core tolerance (p/q)");
  solve->add_option("--order", opt.order, "Pareto-improvement voter order, e.g. 2,1,3");

  auto* solve_n3 = app.add_subcommand("solve-n3", "three-voter direct core solver");
  add_common(solve_n3, true);

  auto* vcore = app.add_subcommand("verify-core", "check a committee for blocking coalitions");
  add_common(vcore, true);
  auto* vpareto = app.add_subcommand("verify-pareto", "check a committee for Pareto-optimality");
  add_common(vpareto, true);
  auto* chk = app.add_subcommand("check-integralizable",
                                 "compare fractional and integral feasible utility vectors");
  add_common(chk, true);

  auto* tau_cmd = app.add_subcommand("tau", "minimum fractional committee size for demands");
  add_common(tau_cmd, true);
  auto* round_cmd = app.add_subcommand("round", "round a fractional committee (n <= 5)");
  add_common(round_cmd, true);
  auto* frac = app.add_subcommand("fractional-core", "approximate fractional core point");
  add_common(frac, true);
  frac->add_option("--epsilon", opt.epsilon, "budget overshoot tolerance (p/q)");

  std::string rule_name;
  auto* rule_cmd = app.add_subcommand("rule", "run a voting rule");
  rule_cmd->add_option("name", rule_name, "pav or mes")
      ->required()
      ->check(CLI::IsMember({"pav", "mes"}));
  add_common(rule_cmd, true);

  int search_n = 0;
  long search_kmax = 0, search_cap_supply = 1;
  std::string search_sizes;
  auto* search = app.add_subcommand("search-nonintegralizable",
                                    "enumerate instances with a fractional/integral gap");
  search->add_option("--voters", search_n, "number of voters")->required();
  search->add_option("--k-max", search_kmax, "largest committee size")->required();
  search->add_option("--sizes", search_sizes, "allowed type cardinalities, e.g. 2,3")->required();
  search->add_option("--supply-cap", search_cap_supply, "largest per-type supply");
  search->add_option("--jobs", opt.jobs, "worker threads");
  add_common(search, false);

  int emit_n = 0;
  auto* emit = app.add_subcommand("emit-normaliz", "print the monoid generators");
  emit->add_option("n", emit_n, "number of voters (1..6)")->required();

  auto* gap = app.add_subcommand("gap", "fractional vs integral feasibility, general model");
  add_common(gap, true);

  std::string repro_id;
  auto* repro = app.add_subcommand("repro", "run a named reproduction");
  repro->add_option("id", repro_id, "fig1 ex4.6 ex4.7 ex7.1 ex7.2 ex7.3 exB.1 exB.2 table1 fig5")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(opt);
    if (*solve_n3) return cmd_solve_n3(opt);
    if (*vcore) return cmd_verify_core(opt);
    if (*vpareto) return cmd_verify_pareto(opt);
    if (*chk) return cmd_check_integralizable(opt);
    if (*tau_cmd) return cmd_tau(opt);
    if (*round_cmd) return cmd_round(opt);
    if (*frac) return cmd_fractional_core(opt);
    if (*rule_cmd) return cmd_rule(opt, rule_name);
    if (*search) return cmd_search(opt, search_n, search_kmax, search_sizes, search_cap_supply);
    if (*emit) {
      std::cout << emit_normaliz(emit_n);
      return kOk;
    }
    if (*gap) return cmd_gap(opt);
    if (*repro) return cmd_repro(repro_id);
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFail;
  }
  return kUsage;
}
