// kfan: command-line front end for the Ky Fan k-norm cone library.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json_io.hpp"
#include "kyfan/harness.hpp"

using namespace kyfan;
using kfan::json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kNumeric = 3 };

struct Common {
  std::uint64_t seed = 0;
  double tol = 0.0;
  int samples = 0;
  std::string out;
  std::string input;
  std::string fixture;
};

void add_common(CLI::App* sub, Common& c, double tol, int samples) {
  c.tol = tol;
  c.samples = samples;
  sub->add_option("--seed", c.seed, "RNG seed")->envname("KFAN_SEED")->capture_default_str();
  sub->add_option("--tol", c.tol, "Tolerance")->envname("KFAN_TOL")->capture_default_str();
  sub->add_option("--samples", c.samples, "Number of samples or starts")->capture_default_str();
  sub->add_option("--out", c.out, "Also write the result to this file");
}

void add_instance(CLI::App* sub, Common& c) {
  auto* in = sub->add_option("--input", c.input, "Instance JSON file ('-' for stdin)");
  sub->add_option("--fixture", c.fixture, "Built-in instance")
      ->check(CLI::IsMember({"scalar", "scalar-duplicated"}))
      ->excludes(in);
}

NlsInstance load_instance(const Common& c) {
  if (c.fixture == "scalar") return scalar_nls_fixture();
  if (c.fixture == "scalar-duplicated") {
    NlsInstance s = scalar_nls_fixture();
    s.E = Mat::Constant(2, 1, 1.0);
    s.d = Vec::Constant(2, 2.0);
    return s;
  }
  if (c.input.empty()) throw kfan::ParseError("one of --input or --fixture is required");
  return kfan::instance_from_json(kfan::read_json(c.input));
}

void emit(const json& j, const Common& c) {
  std::cout << j.dump(2) << "\n";
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw kfan::ParseError("cannot open " + c.out);
    f << j.dump(2) << "\n";
  }
}

// Solves the instance unless a triple is supplied.
struct Solved {
  KktTriple z;
  double residual = 0.0;
  int iters = 0;
  bool diverged = false;
};

Solved solve_or_load(const NlsInstance& s, const std::string& triple_path) {
  Solved r;
  if (!triple_path.empty()) {
    r.z = kfan::triple_from_json(kfan::read_json(triple_path), s);
    r.residual = psi_residual(s.to_problem(), r.z).norm();
    return r;
  }
  const SolveResult sr = solve_nls(s, {200000, 1e-11, 1.0});
  r.z = sr.z;
  r.residual = sr.residual;
  r.iters = sr.iters;
  r.diverged = sr.diverged;
  if (sr.diverged) throw NumericFailure("solver did not converge (residual " + std::to_string(sr.residual) + ")");
  return r;
}

int cmd_project(const Common& c, int k_flag) {
  const json in = kfan::read_json(c.input);
  const json& pj = in.contains("point") ? in.at("point") : in;
  const ConePoint p = kfan::point_from_json(pj, "point");
  int k = k_flag;
  if (k <= 0) {
    if (!in.contains("k") || !in.at("k").is_number_integer()) throw kfan::ParseError("k is required");
    k = in.at("k").get<int>();
  }
  const ProjectionResult r = project_K(p, k, c.tol);
  emit(kfan::projection_to_json(r), c);
  std::cerr << "case " << to_string(r.kase) << ", theta " << r.theta << "\n";
  return kOk;
}

int cmd_dirderiv(const Common& c) {
  const json in = kfan::read_json(c.input);
  if (!in.contains("k") || !in.at("k").is_number_integer()) throw kfan::ParseError("k is required");
  DirDerivRequest req{kfan::point_from_json(in.value("base", json()), "base"),
                      kfan::point_from_json(in.value("direction", json()), "direction"),
                      in.at("k").get<int>()};
  const PointContext ctx = make_context(req.base, req.k);
  const ConePoint d = pi_K_dirderiv(ctx, req.direction);
  const HomogeneityReport h = positive_homogeneity_check(req, c.tol);
  emit({{"case", to_string(ctx.kase())},
        {"derivative", kfan::point_to_json(d)},
        {"homogeneity_error", h.max_error},
        {"homogeneity_ok", h.ok}},
       c);
  std::cerr << "case " << to_string(ctx.kase()) << ", |derivative| " << norm(d) << "\n";
  return kOk;
}

int cmd_gph_check(const Common& c, Index m, Index n, int k) {
  if (!c.input.empty()) {
    const json in = kfan::read_json(c.input);
    if (!in.contains("k") || !in.at("k").is_number_integer()) throw kfan::ParseError("k is required");
    const PointContext ctx = make_context(kfan::point_from_json(in.value("base", json()), "base"),
                                          in.at("k").get<int>());
    const DerivativePair p{kfan::point_from_json(in.value("delta1", json()), "delta1"),
                           kfan::point_from_json(in.value("delta2", json()), "delta2")};
    const bool a = member_via_dirderiv(ctx, p, c.tol);
    const ConditionsReport r = conditions_report(ctx, p, c.tol);
    emit({{"case", to_string(ctx.kase())},
          {"member_via_dirderiv", a},
          {"member_via_conditions", r.holds()},
          {"critical", r.critical},
          {"shifted_polar", r.shifted_polar},
          {"identity_gap", r.identity_gap},
          {"agree", a == r.holds()}},
         c);
    std::cerr << (a == r.holds() ? "characterizations agree" : "characterizations DISAGREE") << "\n";
    return a == r.holds() ? kOk : kNegative;
  }
  if (m < 1 || n < m || k < 1 || k > m) throw InvalidInput("need 1 <= k <= m <= n");
  const ProjCase cases[] = {ProjCase::interior_K, ProjCase::interior_Kpolar, ProjCase::boundary_pos,
                            ProjCase::boundary_zero};
  Rng rng(c.seed);
  int agree = 0, members = 0;
  json per_case = json::object();
  for (int s = 0; s < c.samples; ++s) {
    const ProjCase kase = cases[s % 4];
    const PointContext ctx = make_context(structured_point(rng, m, n, k, kase).point, k);
    DerivativePair p = generate_member_pair(ctx, random_direction(rng, m, n));
    if (s / 4 % 2 == 1) {
      p.delta1 = p.delta1 + 0.2 * random_direction(rng, m, n);
      p.delta2 = p.delta2 + 0.2 * random_direction(rng, m, n);
    }
    const bool a = member_via_dirderiv(ctx, p, c.tol), b = member_via_conditions(ctx, p, c.tol);
    agree += a == b;
    members += a;
    json& e = per_case[to_string(kase)];
    if (e.is_null()) e = {{"samples", 0}, {"agreements", 0}};
    e["samples"] = e["samples"].get<int>() + 1;
    e["agreements"] = e["agreements"].get<int>() + (a == b);
  }
  emit({{"seed", c.seed}, {"samples", c.samples}, {"agreements", agree}, {"members", members}, {"per_case", per_case}}, c);
  std::cerr << agree << "/" << c.samples << " agreements\n";
  return agree == c.samples ? kOk : kNegative;
}

int cmd_kkt(const Common& c, const std::string& triple, bool probe) {
  const NlsInstance s = load_instance(c);
  const ProblemInstance prob = s.to_problem();
  const Solved r = solve_or_load(s, triple);
  const DecomReport dc = decom_check(r.z.X, r.z.Y, prob.k, std::max(c.tol, 1e-9));
  json out = {{"triple", kfan::triple_to_json(r.z)},
              {"residual", r.residual},
              {"iterations", r.iters},
              {"kkt", r.residual <= c.tol},
              {"decom", {{"complementarity", dc.complementarity}, {"projection", dc.projection}}}};
  if (probe) {
    const ProbeReport pr = kkt_isolated_calmness_probe(prob, r.z, c.samples, 1e-8, c.seed);
    out["probe"] = {{"verdict", pr.verdict}, {"min_norm", pr.min_norm}};
  }
  emit(out, c);
  std::cerr << "KKT residual " << r.residual << (r.residual <= c.tol ? " (ok)" : " (above tol)") << "\n";
  return r.residual <= c.tol ? kOk : kNegative;
}

int cmd_sosc(const Common& c, const std::string& triple) {
  const NlsInstance s = load_instance(c);
  const ProblemInstance prob = s.to_problem();
  const Solved r = solve_or_load(s, triple);
  const SoscReport so = sosc_check(prob, r.z.X, {{r.z.lambda, r.z.Y}}, c.samples, c.tol, c.seed);
  emit({{"verdict", so.verdict},
        {"holds", so.holds},
        {"min_value", so.n_samples ? json(so.min_value) : json()},
        {"n_samples", so.n_samples},
        {"witness", so.n_samples ? kfan::point_to_json(so.witness) : json()},
        {"kkt_residual", r.residual}},
       c);
  std::cerr << "SOSC " << so.verdict << " over " << so.n_samples << " critical directions\n";
  return so.holds ? kOk : kNegative;
}

int cmd_srcq(const Common& c, const std::string& triple) {
  const NlsInstance s = load_instance(c);
  const ProblemInstance prob = s.to_problem();
  const Solved r = solve_or_load(s, triple);
  const SrcqReport sr = srcq_check(prob, r.z.X, {r.z.lambda, r.z.Y}, c.samples, c.tol, c.seed);
  json cert;
  if (sr.certificate) cert = {{"lambda", kfan::vec_to_json(sr.certificate->lambda)},
                              {"Y", kfan::point_to_json(sr.certificate->Y)}};
  emit({{"verdict", sr.verdict},
        {"holds", sr.holds},
        {"min_residual", std::isfinite(sr.min_residual) ? json(sr.min_residual) : json()},
        {"certificate", cert},
        {"kkt_residual", r.residual}},
       c);
  std::cerr << "SRCQ " << sr.verdict << "\n";
  return sr.holds ? kOk : kNegative;
}

int cmd_error_bound(const Common& c, const std::vector<double>& scales, const std::string& mode) {
  ExperimentConfig cfg;
  cfg.instance = load_instance(c);
  cfg.seed = c.seed;
  cfg.n_samples = c.samples;
  cfg.scales = scales;
  cfg.delta_max = std::max(cfg.delta_max, scales.empty() ? 0.0 : scales.back());
  cfg.solver.stop_tol = c.tol;
  cfg.mode = mode == "jitter" ? SampleMode::jitter : SampleMode::perturbed;
  cfg.output_path = c.out;
  const ExperimentResult e = run_error_bound_experiment(cfg);
  json summary = json::array();
  for (const ScaleSummary& s : e.summary)
    summary.push_back({{"scale", s.scale},
                       {"max_ratio", s.max_ratio},
                       {"mean_ratio", s.mean_ratio},
                       {"n_ok", s.n_ok},
                       {"n_diverged", s.n_diverged}});
  json modulus;
  try {
    modulus = estimate_modulus(e.records);
  } catch (const InvalidInput&) {
  }
  std::cout << json{{"reference", kfan::triple_to_json(e.reference)},
                    {"reference_residual", e.reference_residual},
                    {"summary", summary},
                    {"modulus", modulus},
                    {"csv", c.out.empty() ? json() : json(c.out)}}
                   .dump(2)
            << "\n";
  for (const ScaleSummary& s : e.summary)
    std::cerr << "scale " << s.scale << ": max ratio " << s.max_ratio << ", " << s.n_ok << " ok, "
              << s.n_diverged << " diverged\n";
  return modulus.is_null() ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ky Fan k-norm cone: projections, derivatives and KKT diagnostics"};
  app.require_subcommand(1);
  int status = kOk;

  Common cp, cd, cg, ck, cs, cr, ce;
  int k_flag = 0;
  auto* project = app.add_subcommand("project", "Project a point onto K and its polar");
  add_common(project, cp, kBoundaryTol, 0);
  project->add_option("--input", cp.input, "Point JSON {t, X, k}")->required();
  project->add_option("--k", k_flag, "Ky Fan order (overrides the file)");

  auto* dirderiv = app.add_subcommand("dirderiv", "Directional derivative of the projection");
  add_common(dirderiv, cd, 1e-9, 0);
  dirderiv->add_option("--input", cd.input, "JSON {base, direction, k}")->required();

  Index gm = 3, gn = 4;
  int gk = 2;
  auto* gph = app.add_subcommand("gph-check", "Compare the two graphical-derivative characterizations");
  add_common(gph, cg, kGphTol, 100);
  gph->add_option("--input", cg.input, "JSON {base, k, delta1, delta2} for a single pair");
  gph->add_option("--m", gm, "Rows of sampled points")->capture_default_str();
  gph->add_option("--n", gn, "Columns of sampled points")->capture_default_str();
  gph->add_option("--k", gk, "Ky Fan order of sampled points")->capture_default_str();

  std::string tk, ts, tr;
  bool probe = false;
  auto* kkt = app.add_subcommand("kkt", "Solve an NLS instance or evaluate a KKT triple");
  add_common(kkt, ck, 1e-8, 50);
  add_instance(kkt, ck);
  kkt->add_option("--triple", tk, "Evaluate this triple instead of solving");
  kkt->add_flag("--probe", probe, "Run the isolated-calmness probe (--samples starts)");

  auto* sosc = app.add_subcommand("sosc", "Sampled second-order sufficient condition");
  add_common(sosc, cs, 1e-8, 200);
  add_instance(sosc, cs);
  sosc->add_option("--triple", ts, "KKT triple to use instead of solving");

  auto* srcq = app.add_subcommand("srcq", "Search for a strict Robinson CQ failure certificate");
  add_common(srcq, cr, 1e-8, 50);
  add_instance(srcq, cr);
  srcq->add_option("--triple", tr, "KKT triple to use instead of solving");

  std::vector<double> scales{1e-4, 1e-3, 1e-2};
  std::string mode = "perturbed";
  auto* eb = app.add_subcommand("error-bound", "Empirical error-bound experiment (CSV via --out)");
  add_common(eb, ce, 1e-12, 50);
  add_instance(eb, ce);
  eb->add_option("--scales", scales, "Perturbation radii, ascending")->capture_default_str();
  eb->add_option("--mode", mode, "perturbed or jitter")
      ->check(CLI::IsMember({"perturbed", "jitter"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*project) status = cmd_project(cp, k_flag);
    else if (*dirderiv) status = cmd_dirderiv(cd);
    else if (*gph) status = cmd_gph_check(cg, gm, gn, gk);
    else if (*kkt) status = cmd_kkt(ck, tk, probe);
    else if (*sosc) status = cmd_sosc(cs, ts);
    else if (*srcq) status = cmd_srcq(cr, tr);
    else if (*eb) status = cmd_error_bound(ce, scales, mode);
  } catch (const kfan::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return status;
}
