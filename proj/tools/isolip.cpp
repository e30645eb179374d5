// isolip command line: decision procedures, isoperimetric checks, and the
// desk-scale experiment pipelines, driven by JSON configs.
//
// Exit codes: 0 = all assertions pass, 1 = an assertion or decision failed,
// 2 = usage, config, or budget error. ISOLIP_WORKERS is the only
// environment variable read (worker count for data-parallel loops).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isolip/experiments.hpp"
#include "isolip/json_io.hpp"

namespace {

using isolip::json;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<long long> seed;
  std::optional<long long> budget;
};

void add_common(CLI::App* cmd, CommonFlags* flags, const std::string& default_format) {
  flags->format = default_format;
  cmd->add_option("--config", flags->config_path, "JSON config path");
  cmd->add_option("--out", flags->out_path, "output file (defaults to stdout)");
  cmd->add_option("--seed", flags->seed, "overrides the config seed");
  cmd->add_option("--budget", flags->budget, "overrides the dominant size budget");
  cmd->add_option("--format", flags->format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

json load_config(CommonFlags& flags) {
  if (flags.config_path.empty()) return json::object();
  std::ifstream in(flags.config_path);
  if (!in) throw std::invalid_argument("cannot open config file: " + flags.config_path);
  json j;
  in >> j;
  // configs may carry an output path; the --out flag wins
  if (flags.out_path.empty() && j.contains("out"))
    flags.out_path = j.at("out").get<std::string>();
  return j;
}

void emit(const CommonFlags& flags, const std::string& payload) {
  if (flags.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(flags.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + flags.out_path);
  out << payload;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Space specs: a raw {"dist": ...} object or one of the constructors
// {"cube": {...}}, {"torus": {...}}, {"product": {"factors": [...]}}.
isolip::FiniteMMSpace space_from_spec(const json& spec, std::size_t budget) {
  if (spec.contains("dist")) return isolip::space_from_json(spec);
  if (spec.contains("cube")) {
    const auto& c = spec.at("cube");
    return isolip::make_cube(c.at("k").get<int>(), c.at("n").get<int>(),
                             c.value("scale", 1.0), budget);
  }
  if (spec.contains("torus")) {
    const auto& c = spec.at("torus");
    return isolip::make_torus(c.at("k").get<int>(), c.at("n").get<int>(), budget);
  }
  if (spec.contains("product")) {
    std::vector<isolip::Graph> graphs;
    for (const auto& g : spec.at("product").at("factors"))
      graphs.push_back(isolip::graph_from_json(g));
    return isolip::make_product_graph(graphs, budget);
  }
  throw std::invalid_argument(
      "space spec needs \"dist\", \"cube\", \"torus\", or \"product\"");
}

isolip::AtomicMeasure measure_from_spec(const json& spec,
                                        const isolip::FiniteMMSpace* space) {
  if (spec.contains("atoms")) return isolip::measure_from_json(spec);
  if (spec.contains("distance_pushforward")) {
    if (space == nullptr)
      throw std::invalid_argument("distance_pushforward needs a space in the same config");
    return space->distance_pushforward(spec.at("distance_pushforward").get<std::size_t>());
  }
  throw std::invalid_argument("measure spec needs \"atoms\" or \"distance_pushforward\"");
}

// ---- subcommand bodies -----------------------------------------------------

int run_normal_law_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  isolip::NormalLawConfig c;
  c.k = cfg.value("k", 2);
  if (cfg.contains("n_list")) c.n_list = cfg.at("n_list").get<std::vector<int>>();
  if (cfg.contains("grid")) {
    c.grid.half_width = cfg.at("grid").value("half_width", 6.0);
    c.grid.atoms = cfg.at("grid").value("atoms", std::size_t{2401});
  }
  const auto result = isolip::run_normal_law(c);
  for (const auto& row : result.rows)
    std::fprintf(stderr, "normal-law n=%d d_P=%.6g cert_s=%.6g (%.2fs)\n", row.n,
                 row.prohorov_to_gauss, row.cert_min_s, row.runtime_seconds);
  if (flags.format == "csv") {
    emit(flags, isolip::normal_law_csv(result));
  } else {
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back(json{{"n", r.n},
                          {"k", r.k},
                          {"eps", r.eps},
                          {"prohorov_to_gauss", r.prohorov_to_gauss},
                          {"cert_min_s", r.cert_min_s},
                          {"cert_t", r.cert_t}});
    emit(flags, dump(json{{"rows", rows}, {"trend_ok", result.trend_ok}, {"centered", true}}));
  }
  return result.trend_ok ? 0 : 1;
}

int run_cube_stability_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  isolip::CubeStabilityConfig c;
  if (cfg.contains("k_list")) c.k_list = cfg.at("k_list").get<std::vector<int>>();
  c.n = cfg.value("n", 1);
  c.mcshane_fields = cfg.value("mcshane_fields", std::size_t{8});
  c.seed = cfg.value("seed", std::uint64_t{1});
  if (flags.seed) c.seed = static_cast<std::uint64_t>(*flags.seed);
  if (flags.budget) c.decide.cell_budget = static_cast<std::size_t>(*flags.budget);
  const auto result = isolip::run_cube_stability(c);
  for (const auto& row : result.rows)
    std::fprintf(stderr, "cube-stability k=%d min_s=%.6g gap=%.6g (%.2fs)\n", row.k,
                 row.min_s_distance_family, row.prohorov_gap_to_refined,
                 row.runtime_seconds);
  if (flags.format == "csv") {
    emit(flags, isolip::cube_stability_csv(result));
  } else {
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back(json{{"k", r.k},
                          {"target_s", r.target_s},
                          {"dominance_pass", r.dominance_pass},
                          {"min_s_distance_family", r.min_s_distance_family},
                          {"prohorov_gap_to_refined", r.prohorov_gap_to_refined},
                          {"gap_bound", r.gap_bound},
                          {"gap_ok", r.gap_ok}});
    emit(flags, dump(json{{"rows", rows}, {"trend_ok", result.trend_ok}, {"pass", result.pass}}));
  }
  return result.pass ? 0 : 1;
}

int run_torus_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  isolip::TorusConfig c;
  if (cfg.contains("k_list")) c.k_list = cfg.at("k_list").get<std::vector<int>>();
  c.n = cfg.value("n", 1);
  c.mcshane_fields = cfg.value("mcshane_fields", std::size_t{8});
  c.seed = cfg.value("seed", std::uint64_t{1});
  if (flags.seed) c.seed = static_cast<std::uint64_t>(*flags.seed);
  if (flags.budget) c.decide.cell_budget = static_cast<std::size_t>(*flags.budget);
  const auto result = isolip::run_torus(c);
  for (const auto& row : result.rows)
    std::fprintf(stderr, "torus k=%d icl=%s min_s=%.6g (%.2fs)\n", row.k,
                 row.icl_ran ? (row.icl_pass ? "pass" : "FAIL") : "skipped",
                 row.min_s_distance_family, row.runtime_seconds);
  if (flags.format == "csv") {
    emit(flags, isolip::torus_csv(result));
  } else {
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back(json{{"k", r.k},
                          {"target_s", r.target_s},
                          {"icl_ran", r.icl_ran},
                          {"icl_pass", r.icl_pass},
                          {"dominance_pass", r.dominance_pass},
                          {"min_s_distance_family", r.min_s_distance_family}});
    emit(flags, dump(json{{"rows", rows}, {"pass", result.pass}}));
  }
  return result.pass ? 0 : 1;
}

int run_obsdiam_chain_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  isolip::ObsDiamChainConfig c;
  c.k = cfg.value("k", 2);
  c.n = cfg.value("n", 3);
  if (cfg.contains("factors"))
    for (const auto& g : cfg.at("factors")) c.factors.push_back(isolip::graph_from_json(g));
  if (cfg.contains("kappa_list")) c.kappa_list = cfg.at("kappa_list").get<std::vector<double>>();
  c.mcshane_fields = cfg.value("mcshane_fields", std::size_t{32});
  c.seed = cfg.value("seed", std::uint64_t{1});
  if (flags.seed) c.seed = static_cast<std::uint64_t>(*flags.seed);
  if (flags.budget) c.space_budget = static_cast<std::size_t>(*flags.budget);
  const auto result = isolip::run_obsdiam_chain(c);
  if (flags.format == "csv") {
    emit(flags, isolip::obsdiam_chain_csv(result));
  } else {
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back(json{{"kappa", r.kappa},
                          {"diam_nu", r.diam_nu},
                          {"lower_product", r.lower_product},
                          {"lower_cube", r.lower_cube},
                          {"ineq1", r.ineq1},
                          {"ineq2", r.ineq2},
                          {"ineq3", r.ineq3}});
    emit(flags, dump(json{{"eps", result.eps}, {"rows", rows}, {"pass", result.pass}}));
  }
  return result.pass ? 0 : 1;
}

int run_check_icl_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  std::size_t space_budget = isolip::kDefaultSpaceBudget;
  std::size_t subset_budget = cfg.value("budget", isolip::kDefaultSubsetBudget);
  if (flags.budget) subset_budget = static_cast<std::size_t>(*flags.budget);
  const isolip::FiniteMMSpace space = space_from_spec(cfg.at("space"), space_budget);
  const isolip::AtomicMeasure nu = measure_from_spec(cfg.at("nu"), &space);
  const double eps = cfg.value("eps", 0.0);
  const auto report = isolip::check_icl(space, nu, eps, subset_budget);
  if (report.pass) {
    std::fprintf(stderr, "ICL_%g: PASS (%zu support pairs, all subsets)\n", report.eps,
                 report.pairs_checked);
  } else {
    std::string members;
    for (std::size_t idx : report.violation->witness)
      members += (members.empty() ? "" : ",") + std::to_string(idx);
    std::fprintf(stderr,
                 "ICL_%g: FAIL at a=%g b=%g with A={%s}: needs mass %g, neighborhood has %g\n",
                 report.eps, report.violation->a, report.violation->b, members.c_str(),
                 report.violation->required, report.violation->achieved);
  }
  if (flags.format == "csv") {
    std::string out = "# isolip check-icl csv v1\npass,eps,pairs_checked\n";
    out += std::string(report.pass ? "true" : "false") + "," + isolip::fmt_double(report.eps) +
           "," + std::to_string(report.pairs_checked) + "\n";
    emit(flags, out);
  } else {
    emit(flags, dump(isolip::icl_report_to_json(report)));
  }
  return report.pass ? 0 : 1;
}

int run_decide_order_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  const isolip::AtomicMeasure mu = measure_from_spec(cfg.at("mu"), nullptr);
  const isolip::AtomicMeasure nu = measure_from_spec(cfg.at("nu"), nullptr);
  const double s = cfg.at("s").get<double>();
  const double t = cfg.at("t").get<double>();
  isolip::DecideOptions opts;
  const std::string mode = cfg.value("mode", "exact");
  if (mode == "certificate")
    opts.mode = isolip::DecideMode::Certificate;
  else if (mode != "exact")
    throw std::invalid_argument("decide-order: mode must be \"exact\" or \"certificate\"");
  if (cfg.contains("cell_budget")) opts.cell_budget = cfg.at("cell_budget").get<std::size_t>();
  if (flags.budget) opts.cell_budget = static_cast<std::size_t>(*flags.budget);
  const auto decision = isolip::decide_iso_order(mu, nu, s, t, opts);
  if (flags.format == "csv") {
    std::string out = "# isolip decide-order csv v1\nholds,s_achieved,t_achieved\n";
    if (decision.holds)
      out += "true," + isolip::fmt_double(decision.certificate->s_achieved) + "," +
             isolip::fmt_double(decision.certificate->t_achieved) + "\n";
    else
      out += "false,,\n";
    emit(flags, out);
  } else {
    emit(flags, dump(isolip::decision_to_json(decision)));
  }
  return decision.holds ? 0 : 1;
}

int run_prohorov_cmd(CommonFlags flags) {
  const json cfg = load_config(flags);
  const isolip::AtomicMeasure mu = measure_from_spec(cfg.at("mu"), nullptr);
  const isolip::AtomicMeasure nu = measure_from_spec(cfg.at("nu"), nullptr);
  const bool with_plan = cfg.value("with_plan", false);
  if (flags.format == "csv") {
    emit(flags, "# isolip prohorov csv v1\ndistance\n" +
                    isolip::fmt_double(isolip::prohorov(mu, nu)) + "\n");
  } else if (with_plan) {
    const auto res = isolip::prohorov_with_plan(mu, nu);
    emit(flags,
         dump(json{{"distance", res.distance}, {"plan", isolip::plan_to_json(res.plan)}}));
  } else {
    emit(flags, dump(json{{"distance", isolip::prohorov(mu, nu)}}));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iso-Lipschitz order with additive error: decision procedures and experiments"};
  app.require_subcommand(1);

  CommonFlags normal_law, cube, torus, obsdiam, icl, decide, prohorov_flags;
  CLI::App* cmd_normal = app.add_subcommand("normal-law", "Gaussian convergence rows");
  add_common(cmd_normal, &normal_law, "csv");
  CLI::App* cmd_cube = app.add_subcommand("cube-stability", "scaled-cube dominance trend");
  add_common(cmd_cube, &cube, "csv");
  CLI::App* cmd_torus = app.add_subcommand("torus", "discrete torus pipeline");
  add_common(cmd_torus, &torus, "csv");
  CLI::App* cmd_obsdiam = app.add_subcommand("obsdiam-chain", "observable diameter chain");
  add_common(cmd_obsdiam, &obsdiam, "csv");
  CLI::App* cmd_icl = app.add_subcommand("check-icl", "exhaustive ICL check");
  add_common(cmd_icl, &icl, "json");
  CLI::App* cmd_decide = app.add_subcommand("decide-order", "decide the (s,t) iso-order");
  add_common(cmd_decide, &decide, "json");
  CLI::App* cmd_prohorov = app.add_subcommand("prohorov", "Prohorov distance");
  add_common(cmd_prohorov, &prohorov_flags, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_normal->parsed()) return run_normal_law_cmd(normal_law);
    if (cmd_cube->parsed()) return run_cube_stability_cmd(cube);
    if (cmd_torus->parsed()) return run_torus_cmd(torus);
    if (cmd_obsdiam->parsed()) return run_obsdiam_chain_cmd(obsdiam);
    if (cmd_icl->parsed()) return run_check_icl_cmd(icl);
    if (cmd_decide->parsed()) return run_decide_order_cmd(decide);
    if (cmd_prohorov->parsed()) return run_prohorov_cmd(prohorov_flags);
  } catch (const isolip::budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
