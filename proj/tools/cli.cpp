#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blotto/decomposition.hpp"
#include "blotto/discrete_blotto.hpp"
#include "blotto/errors.hpp"
#include "blotto/evaluation.hpp"
#include "blotto/game_io.hpp"
#include "blotto/lotto_solver.hpp"
#include "blotto/mixability.hpp"
#include "blotto/sampler.hpp"

namespace blotto::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Common {
  std::string game;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  std::string player = "both";
};

struct Output {
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw IoError("cannot open output file " + path);
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  void close() {
    if (!file.is_open()) return;
    file.close();
    if (file.fail()) throw IoError("failed writing output file");
  }
  std::ofstream file;
};

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json meta(const GameDatum& d, const Common& c) {
  Json m;
  m["game_hash"] = hex(game_hash(d));
  m["epsilon"] = c.epsilon;
  m["seed"] = c.seed;
  m["swapped"] = d.swapped;
  return m;
}

// Canonical players addressed by an input label, or both.
std::vector<Player> players_for(const GameDatum& d, const std::string& label) {
  if (label == "both") return {Player::A, Player::B};
  if (label == "A") return {canonical_player(d, Player::A)};
  if (label == "B") return {canonical_player(d, Player::B)};
  throw ValidationError("--player must be A, B or both");
}

std::string label_of(const GameDatum& d, Player canonical) {
  const Player input = d.swapped ? opponent(canonical) : canonical;
  return std::string(1, player_name(input));
}

Json specs_json(const std::vector<MarginalSpec>& specs) {
  Json out = Json::array();
  for (const auto& s : specs) out.push_back({{"p", s.p}, {"b", s.b}});
  return out;
}

Json plan_json(const ReductionPlan& plan) {
  Json j;
  j["zero"] = plan.i0;
  j["groups"] = {plan.groups[0], plan.groups[1], plan.groups[2]};
  j["mixture"] = plan.i4;
  j["theta"] = plan.theta;
  j["b_star"] = plan.b_star;
  j["p_star4"] = plan.p_star4;
  return j;
}

Json sinkhorn_json(const ScalingState& s) {
  Json j;
  j["iterations"] = s.iterations;
  j["cap"] = s.cap;
  j["l1_error"] = s.l1_error;
  j["eta"] = s.eta;
  Json trace = Json::array();
  for (const auto& t : s.trace) {
    trace.push_back({{"axis", t.axis + 1}, {"l1_error", t.l1_error}, {"kl", t.kl}});
  }
  j["trace"] = std::move(trace);
  return j;
}

void write_marginals_csv(std::ostream& os, const std::vector<PipelineArtifact>& arts) {
  os << "player,component,axis,index,mass\n";
  os << std::setprecision(17);
  for (const auto& art : arts) {
    const char p = player_name(art.player.role);
    for (std::size_t c = 0; c < art.components.size(); ++c) {
      const auto& m = art.components[c].marginals;
      for (int axis = 0; axis < 3; ++axis) {
        for (std::size_t i = 0; i < m.mu[axis].size(); ++i) {
          os << p << ',' << c << ',' << axis + 1 << ',' << i << ',' << m.mu[axis][i] << '\n';
        }
      }
      for (std::size_t i = 0; i < m.mu4.size(); ++i) {
        os << p << ',' << c << ",4," << m.ell_min + static_cast<long>(i) << ',' << m.mu4[i]
           << '\n';
      }
    }
  }
}

struct SolveFlags {
  std::string format = "json";
  bool explain = false;
  bool sinkhorn_stats = false;
  std::string dump_marginals;
};

int cmd_solve(const Common& c, const SolveFlags& f) {
  const GameDatum d = load_game_file(c.game);
  const auto roots = solve_gamma(d);
  const auto players = players_for(d, c.player);
  Json out;
  out["meta"] = meta(d, c);
  out["game"] = Json::parse(game_to_json(d));
  Json eq = Json::array();
  for (const auto& r : roots) {
    Json e;
    e["gamma"] = r.gamma;
    e["lambda"] = r.lambda;
    e["n_gamma"] = r.n_gamma;
    for (Player p : players) e["marginals"][label_of(d, p)] = specs_json(lotto_marginals(r, d, p));
    e["blotto_condition"] = check_blotto_condition(r, d);
    eq.push_back(std::move(e));
  }
  out["equilibria"] = std::move(eq);

  std::vector<PipelineArtifact> arts;
  if (f.explain || f.sinkhorn_stats || !f.dump_marginals.empty()) {
    PipelineOptions opts;
    opts.record_trace = f.sinkhorn_stats;
    for (Player p : players) arts.push_back(build_pipeline(d, roots.front(), d.role(p), c.epsilon, c.seed, opts));
  }
  for (const auto& art : arts) {
    const std::string who = label_of(d, art.player.role);
    if (f.explain) {
      Json x;
      x["h"] = art.grid.h;
      x["eta"] = art.grid.eta;
      Json comps = Json::array();
      for (std::size_t k = 0; k < art.components.size(); ++k) {
        comps.push_back({{"weight", art.decomposition.weights[k]},
                         {"p", art.decomposition.components[k].dense()},
                         {"reduction", plan_json(art.components[k].plan)}});
      }
      x["components"] = std::move(comps);
      out["explain"][who] = std::move(x);
    }
    if (f.sinkhorn_stats) {
      Json s = Json::array();
      for (const auto& comp : art.components) s.push_back(sinkhorn_json(comp.state));
      out["sinkhorn"][who] = std::move(s);
    }
  }
  if (!f.dump_marginals.empty()) {
    Output csv(f.dump_marginals);
    write_marginals_csv(csv.stream(), arts);
    csv.close();
  }

  if (f.format == "json") {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << std::setprecision(12);
  std::cout << "game " << out["meta"]["game_hash"].get<std::string>() << "  n=" << d.n
            << "  T_A=" << d.t_a << "  T_B=" << d.t_b << "\n";
  for (const auto& r : roots) {
    std::cout << "gamma* = " << r.gamma << "  lambda* = " << r.lambda << "\n";
    std::cout << std::setw(6) << "i";
    for (Player p : players) {
      std::cout << std::setw(18) << "p_" + label_of(d, p) << std::setw(18) << "b_" + label_of(d, p);
    }
    std::cout << "\n";
    std::vector<std::vector<MarginalSpec>> specs;
    for (Player p : players) specs.push_back(lotto_marginals(r, d, p));
    for (std::size_t i = 0; i < d.n; ++i) {
      std::cout << std::setw(6) << i + 1;
      for (const auto& s : specs) std::cout << std::setw(18) << s[i].p << std::setw(18) << s[i].b;
      std::cout << "\n";
    }
  }
  if (out.contains("explain") || out.contains("sinkhorn")) {
    Json extra;
    if (out.contains("explain")) extra["explain"] = out["explain"];
    if (out.contains("sinkhorn")) extra["sinkhorn"] = out["sinkhorn"];
    std::cout << extra.dump(2) << '\n';
  }
  return 0;
}

int cmd_check(const Common& c) {
  const GameDatum d = load_game_file(c.game);
  const auto roots = solve_gamma(d);
  Json out;
  out["meta"] = meta(d, c);
  const auto balanced = sufficient_condition_balanced(d);
  out["balanced_condition"] = {{"holds", balanced.holds}, {"r", balanced.r}};
  if (d.symmetric()) {
    const double m = *std::max_element(d.v_a.begin(), d.v_a.end());
    out["symmetric_condition"] = {{"holds", symmetric_condition(d)},
                                  {"slack", d.t_b / (2.0 * d.t_a) - m}};
  }
  Json eq = Json::array();
  for (const auto& r : roots) {
    Json e;
    e["gamma"] = r.gamma;
    e["lambda"] = r.lambda;
    for (Player p : {Player::A, Player::B}) {
      const auto specs = lotto_marginals(r, d, p);
      e["mixable"][label_of(d, p)] = {{"holds", is_jointly_mixable(specs)},
                                      {"slack", mixability_margin(specs)}};
    }
    e["blotto_condition"] = {{"holds", check_blotto_condition(r, d)},
                             {"slack", blotto_condition_margin(r, d)}};
    eq.push_back(std::move(e));
  }
  out["equilibria"] = std::move(eq);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_sample(const Common& c, std::size_t count, const std::string& out_path) {
  const GameDatum d = load_game_file(c.game);
  if (c.player == "both") throw ValidationError("sample needs --player A or B");
  const Player p = players_for(d, c.player).front();
  const auto roots = solve_gamma(d);
  const auto art = build_pipeline(d, roots.front(), d.role(p), c.epsilon, c.seed);
  Output out(out_path);
  std::ostream& os = out.stream();
  os << std::setprecision(17);
  os << "# game_hash: " << hex(game_hash(d)) << "\n";
  os << "# player: " << c.player << "\n";
  os << "# gamma: " << art.params.gamma << "\n";
  os << "# lambda: " << art.params.lambda << "\n";
  os << "# h: " << art.grid.h << "\n";
  os << "# eta: " << art.grid.eta << "\n";
  os << "# epsilon: " << c.epsilon << "\n";
  os << "# seed: " << c.seed << "\n";
  for (std::size_t i = 0; i < d.n; ++i) os << (i ? "," : "") << "x" << i + 1;
  os << "\n";
  CounterRng rng(c.seed, 0);
  for (std::size_t s = 0; s < count; ++s) {
    const auto a = sample_allocation(art, rng);
    for (std::size_t i = 0; i < d.n; ++i) os << (i ? "," : "") << a.x[i];
    os << "\n";
  }
  out.close();
  return 0;
}

Json player_report(const GameDatum& d, const PlayerGap& g, const PipelineArtifact& art,
                   std::size_t count, std::uint64_t seed) {
  Json j;
  j["utility"] = {{"mean", g.utility.mean}, {"std_error", g.utility.std_error},
                  {"samples", g.utility.samples}};
  j["best_response_value"] = g.best_response;
  j["epsilon_empirical"] = g.gap;
  j["allowance"] = g.allowance;
  j["pass"] = g.pass;
  // Marginal KS table from a dedicated stream.
  CounterRng rng(seed, 1000 + (art.player.role == Player::A ? 0 : 1));
  std::vector<std::vector<double>> samples;
  samples.reserve(count);
  for (std::size_t s = 0; s < count; ++s) samples.push_back(sample_allocation(art, rng).x);
  const auto bounds = displacement_bounds(art);
  Json ks = Json::array();
  bool ks_pass = true;
  for (std::size_t i = 0; i < d.n; ++i) {
    const auto& spec = art.marginals[i];
    const auto dist = marginal_distance(samples, i, spec);
    const double density = spec.b > 0.0 ? spec.p / spec.b : 0.0;
    const double allowance = density * bounds[i] + dist.dkw_band;
    const bool pass = dist.ks <= allowance;
    ks_pass = ks_pass && pass;
    ks.push_back({{"battlefield", i + 1},
                  {"ks", dist.ks},
                  {"dkw_band", dist.dkw_band},
                  {"displacement_bound", bounds[i]},
                  {"allowance", allowance},
                  {"pass", pass}});
  }
  j["ks"] = std::move(ks);
  j["ks_pass"] = ks_pass;
  return j;
}

int cmd_evaluate(const Common& c, std::size_t count, unsigned threads,
                 const std::string& report_path) {
  if (count < 100) throw ValidationError("--samples must be at least 100");
  const GameDatum d = load_game_file(c.game);
  const auto roots = solve_gamma(d);
  auto a = std::make_shared<PipelineArtifact>(
      build_pipeline(d, roots.front(), d.role(Player::A), c.epsilon, c.seed));
  auto b = std::make_shared<PipelineArtifact>(
      build_pipeline(d, roots.front(), d.role(Player::B), c.epsilon, c.seed));
  const GapReport report = evaluate_gaps(a, b, count, c.seed, threads);
  Json out;
  out["meta"] = meta(d, c);
  out["meta"]["samples"] = count;
  out["meta"]["threads"] = threads;
  out["gamma"] = roots.front().gamma;
  out["lambda"] = roots.front().lambda;
  out["h"] = a->grid.h;
  out["eta"] = a->grid.eta;
  out["epsilon_target"] = report.epsilon_target;
  out["players"][label_of(d, Player::A)] = player_report(d, report.a, *a, count, c.seed);
  out["players"][label_of(d, Player::B)] = player_report(d, report.b, *b, count, c.seed);
  out["zero_sum_check"] = {{"sum", report.a.utility.mean + report.b.utility.mean},
                           {"symmetric", d.symmetric()}};
  out["pass"] = report.a.pass && report.b.pass;
  Output os(report_path);
  os.stream() << out.dump(2) << '\n';
  os.close();
  return 0;
}

std::vector<long> parse_lengths(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ValidationError("--lengths expects comma-separated integers, got '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("--lengths is empty");
  return out;
}

int cmd_mix_discrete(const std::string& lengths_text, const std::string& out_path, bool check) {
  const DiscreteMixProblem problem{parse_lengths(lengths_text)};
  const bool mixable = discrete_mixable(problem);
  Json summary;
  summary["lengths"] = problem.lengths;
  summary["mixable"] = mixable;
  int code = 0;
  if (check) {
    double cells = 1.0;
    for (long l : problem.lengths) cells *= static_cast<double>(l + 1);
    if (cells <= 1e6) {
      const bool lp = brute_force_mix_feasible(problem);
      summary["lp_feasible"] = lp;
      summary["oracle_agrees"] = lp == mixable;
      if (lp != mixable) code = 2;
    } else {
      summary["lp_feasible"] = nullptr;
    }
  }
  if (!mixable) {
    if (!check) {
      throw ValidationError("lengths are not jointly mixable: need even sum and 2 max <= sum");
    }
    std::cout << summary.dump(2) << '\n';
    return code;
  }
  const DiscreteCoupling coupling = build_discrete_joint_mix(problem);
  if (check) {
    const CouplingCheck v = verify_coupling(coupling);
    summary["verification"] = {{"weights_stochastic", v.weights_stochastic},
                               {"sums_constant", v.sums_constant},
                               {"marginals_uniform", v.marginals_uniform},
                               {"nodes", v.nodes}};
    if (!v.ok()) code = 2;
  }
  if (!out_path.empty()) {
    Output out(out_path);
    out.stream() << coupling_to_json(coupling) << '\n';
    out.close();
  } else if (!check) {
    std::cout << coupling_to_json(coupling) << '\n';
    return code;
  }
  std::cout << summary.dump(2) << '\n';
  return code;
}

void add_common(CLI::App* sub, Common& c, bool with_player) {
  sub->add_option("--game", c.game, "Game JSON file {n, v_A, v_B, T_A, T_B}")->required();
  sub->add_option("--epsilon", c.epsilon, "Target approximation epsilon")
      ->check(CLI::PositiveNumber)
      ->default_val(0.05);
  sub->add_option("--seed", c.seed, "Random seed")->default_val(0);
  if (with_player) {
    sub->add_option("--player", c.player, "Player label from the game file: A, B or both")
        ->check(CLI::IsMember({"A", "B", "both"}))
        ->default_val("both");
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Approximate Colonel Blotto equilibria from Lotto marginals"};
  app.require_subcommand(1);

  Common solve_c, check_c, sample_c, eval_c;
  SolveFlags solve_f;
  auto* solve = app.add_subcommand("solve", "Equilibrium parameters and marginal tables");
  add_common(solve, solve_c, true);
  solve->add_option("--format", solve_f.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->default_val("json");
  solve->add_flag("--explain", solve_f.explain, "Include decomposition and reduction plans");
  solve->add_flag("--sinkhorn-stats", solve_f.sinkhorn_stats,
                  "Include Sinkhorn iterations, final l1 error and per-axis KL trace");
  solve->add_option("--dump-marginals", solve_f.dump_marginals,
                    "Write discretized marginal vectors as CSV to this file");

  auto* check = app.add_subcommand("check", "Mixability and coupling condition verdicts");
  add_common(check, check_c, false);

  std::size_t sample_count = 1000;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "Draw allocations with the exact budget");
  add_common(sample, sample_c, true);
  sample->add_option("--count", sample_count, "Number of allocations")->default_val(1000);
  sample->add_option("--out", sample_out, "CSV output file (default stdout)");

  std::size_t eval_samples = 100000;
  unsigned threads = 1;
  std::string report;
  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo utilities, gaps and KS tables");
  add_common(evaluate, eval_c, false);
  evaluate->add_option("--samples", eval_samples, "Paired draws")->default_val(100000);
  evaluate->add_option("--threads", threads, "Evaluation workers")
      ->check(CLI::PositiveNumber)
      ->default_val(1);
  evaluate->add_option("--report", report, "JSON report file (default stdout)");

  std::string lengths, mix_out;
  bool mix_check = false;
  auto* mix = app.add_subcommand("mix-discrete", "Exact joint mix of discrete uniforms");
  mix->add_option("--lengths", lengths, "Comma-separated lengths, e.g. 4,4,4")->required();
  mix->add_option("--out", mix_out, "Write the coupling tree as JSON to this file");
  mix->add_flag("--check", mix_check, "Verify exactly and compare with the LP oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) return cmd_solve(solve_c, solve_f);
    if (*check) return cmd_check(check_c);
    if (*sample) {
      if (sample_count == 0) throw ValidationError("--count must be positive");
      return cmd_sample(sample_c, sample_count, sample_out);
    }
    if (*evaluate) return cmd_evaluate(eval_c, eval_samples, threads, report);
    if (*mix) return cmd_mix_discrete(lengths, mix_out, mix_check);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace blotto::cli
