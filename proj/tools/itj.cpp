#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "itjulia/apps.hpp"
#include "itjulia/core.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/error.hpp"
#include "itjulia/geometry.hpp"
#include "itjulia/grid.hpp"
#include "itjulia/io.hpp"
#include "itjulia/plseq.hpp"

using namespace itj;

namespace {

struct Flags {
  std::string seq;
  long time = 0;
  int depth = 40;
  int grid = 512;
  double half_width = 0.0;
  std::string out;
  double B = 4.0;
  double rho = 0.0;
  int horizon = 0;
  std::string n;
  int j = 3;
  std::uint64_t seed = 42;
  int samples = 200;
  std::string method = "escape";
};

// named checks; any false one turns the exit code into 1
class Checks {
 public:
  void add(const std::string& name, bool ok) { items_.emplace_back(name, ok); }
  bool all() const {
    for (const auto& [name, ok] : items_) {
      if (!ok) return false;
    }
    return true;
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [name, ok] : items_) j[name] = ok;
    return j;
  }
  void report_failures() const {
    for (const auto& [name, ok] : items_) {
      if (!ok) std::cerr << "claim failed: " << name << "\n";
    }
  }

 private:
  std::vector<std::pair<std::string, bool>> items_;
};

void validate(const Flags& f) {
  if (f.grid < 128 || f.grid > 4096 || (f.grid & (f.grid - 1)) != 0)
    throw InputError("--grid must be a power of two in [128, 4096]");
  if (f.depth < 1 || f.depth > 500) throw InputError("--depth must be in [1, 500]");
  if (f.time < 0) throw InputError("--time must be >= 0");
}

void require_seq(const Flags& f) {
  if (f.seq.empty()) throw InputError("--seq is required for this command");
}

GridSpec chart_for(const SequenceSpec& seq, const Flags& f) {
  if (f.half_width > 0.0) {
    GridSpec g{cplx{0.0, 0.0}, f.half_width, f.grid};
    g.validate();
    return g;
  }
  return chart_for_radius(escape_radius(seq.bounds()), f.grid);
}

int finish(const Flags& f, json report, const Checks& checks) {
  report["checks"] = checks.to_json();
  report["passed"] = checks.all();
  if (f.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_json(f.out, report);
  }
  checks.report_failures();
  return checks.all() ? 0 : 1;
}

int cmd_render(const Flags& f) {
  require_seq(f);
  if (f.out.empty()) throw InputError("--out is required for render");
  const SequenceSpec seq = read_sequence_file(f.seq);
  JuliaMethod method;
  if (f.method == "escape") {
    method = JuliaMethod::EscapeTime;
  } else if (f.method == "pullback") {
    method = JuliaMethod::Pullback;
  } else {
    throw InputError("--method must be 'escape' or 'pullback'");
  }
  const JuliaApprox ja = filled_julia(seq, f.time, chart_for(seq, f), f.depth, method);
  write_pgm(f.out, ja);
  write_json(f.out + ".components.json", components_to_json(components(ja.k_mask)));
  return 0;
}

int cmd_invariance(const Flags& f) {
  require_seq(f);
  const SequenceSpec seq = read_sequence_file(f.seq);
  const long n = f.n.empty() ? f.time + 3 : std::stol(f.n);
  if (n <= f.time) throw InputError("--n must exceed --time");
  const GridSpec grid = chart_for(seq, f);
  const JuliaApprox ja_m = filled_julia(seq, f.time, grid, f.depth);
  const JuliaApprox ja_n = filled_julia(seq, n, grid, f.depth);
  const InvarianceResult res = invariance_check(seq, f.time, n, ja_m, ja_n, f.samples, f.seed);
  json report = {{"m", f.time},
                 {"n", n},
                 {"resolution", f.grid},
                 {"depth", f.depth},
                 {"samples", res.samples},
                 {"escaped", res.escaped},
                 {"max_cell_deviation", res.max_cell_deviation}};
  Checks checks;
  checks.add("deviation_within_3_cells", res.max_cell_deviation <= 3.0);
  return finish(f, report, checks);
}

struct PLInput {
  SequenceSpec seq;
  double rho = 0.0;
  int horizon = 0;
};

PLInput read_pl_input(const Flags& f, int default_horizon) {
  require_seq(f);
  const json j = read_json_file(f.seq);
  PLInput in{SequenceSpec::constant(Polynomial::monomial(2), Bounds{2, 1.0, 0.0}), 0.0, default_horizon};
  try {
    if (j.is_object() && j.contains("from_sequence")) {
      in.seq = sequence_from_json(j["from_sequence"]);
      if (j.contains("rho")) in.rho = j["rho"].get<double>();
      if (j.contains("horizon")) in.horizon = j["horizon"].get<int>();
    } else {
      in.seq = sequence_from_json(j);
    }
  } catch (const InputError& e) {
    throw InputError(f.seq + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(f.seq + ": " + e.what());
  }
  if (f.rho > 0.0) in.rho = f.rho;
  if (f.horizon > 0) in.horizon = f.horizon;
  if (!(in.rho > 0.0)) throw InputError("--rho is required (or 'rho' in the spec file)");
  if (in.horizon < 1) throw InputError("horizon must be >= 1");
  return in;
}

PLSeq build_pl(const PLInput& in, const Flags& f) {
  PLBuildOptions opt;
  opt.resolution = f.grid;
  opt.half_width = f.half_width;
  return disc_pl_from_polys(in.seq, in.rho, in.horizon, opt);
}

json restriction_to_json(const RestrictionResult& rr) {
  json steps = json::array();
  for (std::size_t m = 0; m < rr.steps.size(); ++m) {
    const RestrictionStep& s = rr.steps[m];
    steps.push_back({{"m", m},
                     {"B", rr.B},
                     {"modulus_of_T", s.T.modulus},
                     {"modulus_of_L", s.L.modulus},
                     {"degrees", {{"original", rr.original_degrees[m]}, {"restricted", rr.restricted_degrees[m]}}},
                     {"containments",
                      {{"U_prime_inside_U", s.U_prime_inside_U},
                       {"V_prime_inside_V", s.V_prime_inside_V},
                       {"U_prime_compact_in_V_prime", s.U_prime_compact_in_V_prime}}},
                     {"separation", {{"Gamma", s.Gamma_separates}, {"gamma", s.gamma_separates}}}});
  }
  return steps;
}

int cmd_plbuild(const Flags& f) {
  const PLInput in = read_pl_input(f, f.depth);
  const PLSeq pl = build_pl(in, f);
  const PLReport rep = verify_pl(pl, 50, f.seed);
  json report = {{"rho", in.rho},
                 {"horizon", in.horizon},
                 {"resolution", f.grid},
                 {"K", pl.K},
                 {"degree_bound", pl.degree_bound},
                 {"pl_report", pl_report_to_json(rep)}};
  Checks checks;
  checks.add("PL1", rep.pl1);
  checks.add("PL2", rep.pl2);
  checks.add("PL3", rep.pl3);
  return finish(f, report, checks);
}

int cmd_restrict(const Flags& f) {
  const PLInput in = read_pl_input(f, f.depth);
  const PLSeq pl = build_pl(in, f);
  const auto [restricted, rr] = restrict_pl(pl, f.B);
  const PLReport rep = verify_pl(restricted, 50, f.seed);
  bool gamma_ok = true, Gamma_ok = true, contain_ok = true;
  for (const RestrictionStep& s : rr.steps) {
    Gamma_ok = Gamma_ok && s.Gamma_separates;
    gamma_ok = gamma_ok && s.gamma_separates;
    contain_ok = contain_ok && s.U_prime_inside_U && s.V_prime_inside_V && s.U_prime_compact_in_V_prime;
  }
  json report = {{"B", rr.B},
                 {"rho", in.rho},
                 {"horizon", in.horizon},
                 {"resolution", f.grid},
                 {"K", pl.K},
                 {"restricted_K", restricted.K},
                 {"steps", restriction_to_json(rr)},
                 {"pl_report", pl_report_to_json(rep)}};
  Checks checks;
  checks.add("Gamma_separates", Gamma_ok);
  checks.add("gamma_separates", gamma_ok);
  checks.add("degrees_preserved", rr.original_degrees == rr.restricted_degrees);
  checks.add("containments", contain_ok);
  checks.add("restricted_pl", rep.ok());
  return finish(f, report, checks);
}

int cmd_lemma51(const Flags& f) {
  const PLInput in = read_pl_input(f, static_cast<int>(f.time) + f.depth + 1);
  if (f.time + f.depth > in.horizon - 1)
    throw InputError("horizon must be at least time + depth + 1");
  const PLSeq pl = build_pl(in, f);
  const auto [restricted, rr] = restrict_pl(pl, f.B);
  const double frac = restriction_preserves_K(pl, restricted, static_cast<int>(f.time), f.depth);
  json report = {{"m", f.time},
                 {"depth", f.depth},
                 {"B", f.B},
                 {"resolution", f.grid},
                 {"symmetric_difference_fraction", frac}};
  Checks checks;
  checks.add("filled_set_preserved", frac <= 0.01);
  return finish(f, report, checks);
}

int cmd_caratheodory(const Flags& f) {
  const PLInput in = read_pl_input(f, static_cast<int>(f.time) + 2);
  if (f.time > in.horizon - 1) throw InputError("--time must be below the horizon");
  const PLSeq pl = build_pl(in, f);
  const auto [restricted, rr] = restrict_pl(pl, f.B);
  const RestrictionStep& s = rr.steps[static_cast<std::size_t>(f.time)];
  const double h = pl.grid().cell_width();
  json report = {{"m", f.time},
                 {"B", f.B},
                 {"resolution", f.grid},
                 {"modulus", s.T.modulus},
                 {"equator_length_cells", s.Gamma.length() / h},
                 {"caratheodory_bound", caratheodory_bound_disc(s.V_prime)}};
  if (!f.out.empty()) write_curve_csv(f.out + ".equator.csv", s.Gamma);
  Checks checks;
  checks.add("equator_separates", s.Gamma_separates);
  return finish(f, report, checks);
}

int cmd_thm71(const Flags& f) {
  require_seq(f);
  const SequenceSpec seq = read_sequence_file(f.seq);
  const TurningReport rep = thm71_quasicircle(seq, chart_for(seq, f), f.depth);
  Checks checks;
  checks.add("finite_turning_constant", std::isfinite(rep.constant));
  return finish(f, turning_to_json(rep), checks);
}

std::optional<int> parse_n(const std::string& s) {
  if (s.empty() || s == "limit") return std::nullopt;
  try {
    std::size_t used = 0;
    const int n = std::stoi(s, &used);
    if (used != s.size() || n < 1) throw InputError("");
    return n;
  } catch (const std::exception&) {
    throw InputError("--n must be a positive integer or 'limit'");
  }
}

int cmd_thm72(const Flags& f) {
  const std::optional<int> n = parse_n(f.n);
  if (f.j < 1) throw InputError("--j must be >= 1");
  if (n && f.j > *n) throw InputError("--j must not exceed --n");
  const GridSpec grid = counterexample_chart(f.grid);
  Checks checks;
  json rows = json::array(), containment = json::array();
  std::vector<int> j_list;
  for (int j = 1; j <= f.j; ++j) {
    j_list.push_back(j);
    const Thm72Row row = thm72_geometry(n, j, grid, f.depth);
    rows.push_back(thm72_row_to_json(row));
    const ContainmentResult c = thm72_containment(n, j, grid, f.depth);
    containment.push_back({{"j", j}, {"pass", c.pass}, {"hits_before", c.hits_before}, {"hits_at", c.hits_at},
                           {"hits_after", c.hits_after}});
    const std::string tag = "j" + std::to_string(j) + "_";
    const double scale = std::ldexp(1.0, -j - 1);
    if (n && j == *n) {
      checks.add(tag + "unit_circle_after_last_cycle", row.component_count == 1);
    } else {
      checks.add(tag + "component_count", row.component_count == (1 << (j + 1)));
      checks.add(tag + "diameter_window", row.max_diameter / scale >= 0.25 && row.max_diameter / scale <= 4.0);
      checks.add(tag + "congruent_pieces", row.min_diameter >= row.max_diameter / 3.0);
    }
    checks.add(tag + "expansion_on_J", row.min_single_step_derivative_on_J > 1.9);
    checks.add(tag + "containment", c.pass);
  }
  const SeparationResult sep =
      z2plus2_separation(chart_for_radius(escape_radius(Bounds{2, 1.0, 2.0}), f.grid), f.depth);
  const std::vector<double> ratios = equiconjugacy_violation(j_list, grid, f.depth);
  bool increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
  checks.add("violation_ratios_increase", increasing);
  if (ratios.size() >= 3) checks.add("violation_growth", ratios.back() / ratios.front() >= 2.0);
  json report = {{"n", n ? json(*n) : json("limit")},
                 {"resolution", f.grid},
                 {"depth", f.depth},
                 {"rows", rows},
                 {"containment", containment},
                 {"z2plus2", {{"R", sep.R}, {"delta", sep.delta}}},
                 {"violation_ratios", ratios}};
  return finish(f, report, checks);
}

int cmd_separation(const Flags& f) {
  const SeparationResult sep =
      z2plus2_separation(chart_for_radius(escape_radius(Bounds{2, 1.0, 2.0}), f.grid), f.depth);
  Checks checks;
  checks.add("circle_escapes", sep.circle_escaped == sep.circle_samples);
  checks.add("delta_positive", sep.delta > 0.0);
  checks.add("two_separated_components", sep.gap_ok);
  json report = separation_to_json(sep);
  report["resolution"] = f.grid;
  report["depth"] = f.depth;
  return finish(f, report, checks);
}

int cmd_convergence(const Flags& f) {
  const int n_max = f.n.empty() ? 4 : std::stoi(f.n);
  if (n_max < 1) throw InputError("--n must be >= 1");
  std::vector<int> n_list;
  for (int k = 1; k <= n_max; ++k) n_list.push_back(k);
  const GridSpec grid = counterexample_chart(f.grid);
  const std::vector<double> d = hausdorff_convergence(n_list, f.time, grid, f.depth);
  const double h = grid.cell_width();
  std::vector<double> cells;
  bool monotone = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    cells.push_back(d[i] / h);
    if (i > 0 && d[i] > d[i - 1]) monotone = false;
  }
  json report = {{"m", f.time},
                 {"resolution", f.grid},
                 {"depth", f.depth},
                 {"n_list", n_list},
                 {"distances", d},
                 {"distances_cells", cells}};
  Checks checks;
  checks.add("non_increasing", monotone);
  checks.add("final_within_5_cells", cells.back() <= 5.0);
  return finish(f, report, checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated Julia sets and polynomial-like sequences"};
  app.require_subcommand(1);
  Flags f;

  auto grid_opts = [&](CLI::App* sub) {
    sub->add_option("--grid", f.grid, "cells per side (power of two, 128..4096)");
    sub->add_option("--depth", f.depth, "iteration depth (1..500)");
  };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", f.out, "output path (default: stdout for JSON)"); };
  auto seq_opt = [&](CLI::App* sub) { sub->add_option("--seq", f.seq, "sequence or PL spec JSON file"); };
  auto chart_opt = [&](CLI::App* sub) { sub->add_option("--half-width", f.half_width, "chart half width about 0"); };
  auto pl_opts = [&](CLI::App* sub) {
    seq_opt(sub);
    sub->add_option("--rho", f.rho, "disc radius for V_m");
    sub->add_option("--horizon", f.horizon, "number of materialized maps");
    chart_opt(sub);
  };

  std::map<std::string, int (*)(const Flags&)> handlers;
  auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Flags&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    handlers[name] = fn;
    grid_opts(sub);
    out_opt(sub);
    sub->add_option("--seed", f.seed, "random seed");
    return sub;
  };

  CLI::App* render = add("render", "filled Julia set image (PGM) and component report", cmd_render);
  seq_opt(render);
  chart_opt(render);
  render->add_option("--time", f.time, "time index m");
  render->add_option("--method", f.method, "escape or pullback");

  CLI::App* inv = add("invariance", "check P_{m+1}..P_n maps J_m onto J_n", cmd_invariance);
  seq_opt(inv);
  chart_opt(inv);
  inv->add_option("--time", f.time, "source time m");
  inv->add_option("--n", f.n, "target time n (default m + 3)");
  inv->add_option("--samples", f.samples, "number of sampled J_m cells");

  CLI::App* plb = add("plbuild", "disc polynomial-like sequence and PL1..PL3 report", cmd_plbuild);
  pl_opts(plb);

  CLI::App* rst = add("restrict", "polynomial-like restriction report", cmd_restrict);
  pl_opts(rst);
  rst->add_option("--B", f.B, "restriction parameter");

  CLI::App* l51 = add("lemma51", "filled Julia set unchanged by restriction", cmd_lemma51);
  pl_opts(l51);
  l51->add_option("--B", f.B, "restriction parameter");
  l51->add_option("--time", f.time, "time index m");

  CLI::App* car = add("caratheodory", "modulus, equator and Caratheodory bound at time m", cmd_caratheodory);
  pl_opts(car);
  car->add_option("--B", f.B, "restriction parameter");
  car->add_option("--time", f.time, "time index m");

  CLI::App* t71 = add("thm71", "bounded-turning constant of J_0 for z^2 + c_m", cmd_thm71);
  seq_opt(t71);
  chart_opt(t71);

  CLI::App* t72 = add("thm72", "counterexample geometry and conjugacy obstruction", cmd_thm72);
  t72->add_option("--n", f.n, "number of cycles or 'limit'");
  t72->add_option("--j", f.j, "rows j = 1..J");

  add("separation", "z^2 + 2 escape and preimage separation", cmd_separation);

  CLI::App* conv = add("convergence", "Hausdorff distance to the limit sequence's J_m", cmd_convergence);
  conv->add_option("--n", f.n, "largest n (default 4)");
  conv->add_option("--time", f.time, "time index m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(f);
    for (CLI::App* sub : app.get_subcommands()) return handlers.at(sub->get_name())(f);
  } catch (const ResolutionError& e) {
    std::cerr << "resolution: " << e.what() << "\n";
    return 1;
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed at m = " << e.time() << ": " << e.what() << "\n";
    return 2;
  } catch (const GridTooSmall& e) {
    std::cerr << "error: " << e.what() << " (half width >= " << e.required_half_width() << " needed)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
