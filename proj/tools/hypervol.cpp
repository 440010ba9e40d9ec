#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hypervol/acceptance.hpp"
#include "hypervol/json_io.hpp"

using namespace hypervol;

namespace {

struct Job {
  std::string command;
  std::string input;
  std::string output;
  std::string variant = "face";
  std::uint64_t seed = 2026;
  std::int64_t samples = 200000;
  double spacing = 0.0;
};

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json scaffold(const Job& job, const Json& input_json) {
  Json report;
  report["command"] = job.command;
  report["seed"] = job.seed;
  if (!job.input.empty()) report["input"] = input_json;
  return report;
}

Json run_moore_det(const Job& job, const Json& in) {
  HyperHermitian a = parse_hyperhermitian(field(in, "matrix"));
  double spectral = moore_det_spectral(a);
  double schur = moore_det_schur(a, mix64(job.seed, 1));
  double tol = 1e-8 * (1.0 + std::abs(spectral));
  Json report = scaffold(job, in);
  report["result"] = {{"value", spectral}, {"spectral", spectral}, {"schur", schur},
                      {"route_gap", std::abs(spectral - schur)}};
  report["tolerances"] = {{"route_gap", tol}};
  if (std::abs(spectral - schur) > tol)
    throw CheckFailed("moore-det route disagreement");
  return report;
}

Json run_mixed_disc(const Job& job, const Json& in) {
  std::vector<HyperHermitian> as;
  for (const Json& m : field(in, "matrices")) as.push_back(parse_hyperhermitian(m));
  Json report = scaffold(job, in);
  report["result"] = {{"value", mixed_discriminant(as)}};
  return report;
}

Json run_gram_rank(const Job& job, const Json& in) {
  int n = field(in, "n").get<int>();
  int k = field(in, "k").get<int>();
  long long expected = 1;
  for (int i = 0; i < 2 * k; ++i) expected = expected * (2 * n - i) / (i + 1);
  int count = in.contains("samples") ? in.at("samples").get<int>()
                                     : static_cast<int>(expected) + 6;
  int rank = gram_rank(n, k, count, job.seed);
  Json report = scaffold(job, in);
  report["result"] = {{"rank", rank}, {"samples", count}};
  return report;
}

Json run_positivity(const Job& job, const Json& in) {
  FormClass w = parse_form(field(in, "form"));
  std::int64_t trials = in.contains("trials") ? in.at("trials").get<std::int64_t>() : 0;
  PositivityCertificate cert = certify_positivity(w, trials, job.seed);
  const char* kind = cert.kind == PositivityCertificate::Kind::kStrong      ? "strong"
                     : cert.kind == PositivityCertificate::Kind::kIndefinite ? "indefinite"
                                                                             : "weak";
  Json report = scaffold(job, in);
  report["result"] = {{"kind", kind}, {"violation", cert.violation}};
  return report;
}

Json run_hessian(const Job& job, const Json& in) {
  std::shared_ptr<const PshModel> f = parse_model(field(in, "model"));
  std::vector<double> pt = field(in, "point").get<std::vector<double>>();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(pt.data(), static_cast<int>(pt.size()));
  HyperHermitian h = f->hessian_q(x);
  Json report = scaffold(job, in);
  report["result"] = {{"hessian", dump_hyperhermitian(h)}, {"ma_density", ma_density(*f, x)}};
  return report;
}

Json run_ma_density(const Job& job, const Json& in) {
  std::shared_ptr<const PshModel> f = parse_model(field(in, "model"));
  std::vector<double> pt = field(in, "point").get<std::vector<double>>();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(pt.data(), static_cast<int>(pt.size()));
  Json report = scaffold(job, in);
  report["result"] = {{"value", ma_density(*f, x)}};
  return report;
}

GridSpec grid_for(const Job& job, const Json& in) {
  GridSpec grid = parse_grid(field(in, "grid"));
  if (job.spacing > 0.0) grid.spacing = job.spacing;
  return grid;
}

Json run_current_pair(const Job& job, const Json& in) {
  std::vector<std::shared_ptr<const PshModel>> owned;
  std::vector<const PshModel*> fs;
  for (const Json& m : field(in, "models")) {
    owned.push_back(parse_model(m));
    fs.push_back(owned.back().get());
  }
  if (owned.empty()) throw ParseError("current-pair needs at least one model");
  TestDensity psi = parse_density(field(in, "density"), owned[0]->n());
  GridSpec grid = grid_for(job, in);
  Json report = scaffold(job, in);
  report["result"] = {{"value", current_pair(fs, psi, grid)}};
  report["grid_spacing"] = grid.spacing;
  return report;
}

Json run_blocki(const Job& job, const Json& in) {
  std::shared_ptr<const PshModel> u = parse_model(field(in, "u"));
  std::shared_ptr<const PshModel> v = parse_model(field(in, "v"));
  int p = field(in, "p").get<int>();
  TestDensity psi = parse_density(field(in, "density"), u->n());
  GridSpec grid = grid_for(job, in);
  std::vector<double> js = field(in, "j").get<std::vector<double>>();
  bool valuation = in.contains("mode") && in.at("mode").get<std::string>() == "valuation";
  std::vector<BlockiPoint> pts = valuation
                                     ? blocki_valuation_check(u, v, p, psi, grid, js)
                                     : blocki_numeric_check(u, v, p, psi, grid, js);
  Json rows = Json::array();
  for (const BlockiPoint& pt : pts)
    rows.push_back({{"j", pt.j}, {"lhs", pt.lhs}, {"rhs", pt.rhs}, {"gap", pt.gap}});
  Json report = scaffold(job, in);
  report["result"] = {{"points", rows}};
  report["grid_spacing"] = grid.spacing;
  return report;
}

Json run_pseudovolume(const Job& job, const Json& in) {
  Polytope p = parse_polytope(field(in, "polytope"));
  Json report = scaffold(job, in);
  report["result"] = dump_valuation_report(pseudovolume_q(p, job.samples, job.seed));
  return report;
}

Json run_kazarnovskii(const Job& job, const Json& in) {
  Polytope p = parse_polytope(field(in, "polytope"));
  Json report = scaffold(job, in);
  report["result"] = dump_valuation_report(kazarnovskii(p, job.samples, job.seed));
  return report;
}

Json run_support_measure(const Job& job, const Json& in) {
  Polytope p = parse_polytope(field(in, "polytope"));
  ConePieces m = ma_support_measure(p, job.variant == "zonotope");
  Json report = scaffold(job, in);
  report["variant"] = job.variant;
  report["result"] = dump_cone_pieces(m);
  return report;
}

Json run_additivity(const Job& job, const Json& in) {
  Polytope k1 = parse_polytope(field(in, "k1"));
  Polytope k2 = parse_polytope(field(in, "k2"));
  std::string val = in.contains("valuation") ? in.at("valuation").get<std::string>()
                                             : "pseudovolume";
  std::function<ValuationReport(const Polytope&)> handle;
  if (val == "pseudovolume")
    handle = [&](const Polytope& p) { return pseudovolume_q(p, job.samples, job.seed); };
  else if (val == "kazarnovskii")
    handle = [&](const Polytope& p) { return kazarnovskii(p, job.samples, job.seed); };
  else if (val == "volume")
    handle = [](const Polytope& p) { return volume_valuation(p); };
  else
    throw ParseError("unknown valuation '" + val + "'");
  AdditivityGap gap = valuation_additivity_check(k1, k2, handle, mix64(job.seed, 9));
  Json report = scaffold(job, in);
  report["result"] = {{"gap", gap.gap}, {"stderr", gap.se}};
  return report;
}

// Runs the acceptance criteria in order and stops at the first failure. The
// report file keeps only deterministic fields; timing goes to stdout.
Json run_verify_all(const Job& job, bool& check_failed, std::string& failed_id) {
  Json report;
  report["command"] = job.command;
  report["seed"] = job.seed;
  Json rows = Json::array();
  for (const std::string& id : acceptance_ids()) {
    CriterionResult r = run_criterion(id, job.seed);
    std::printf("%-6s %s  (%.1fs)\n", id.c_str(), r.pass ? "PASS" : "FAIL", r.seconds);
    std::fflush(stdout);
    rows.push_back({{"id", r.id}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) {
      check_failed = true;
      failed_id = id;
      break;
    }
  }
  report["criteria"] = std::move(rows);
  if (check_failed) report["failed"] = failed_id;
  return report;
}

int run(const Job& job) {
  Json in;
  if (!job.input.empty()) in = load_json_file(job.input);
  bool check_failed = false;
  std::string failed_id;
  auto t0 = std::chrono::steady_clock::now();
  Json report;
  if (job.command == "moore-det")
    report = run_moore_det(job, in);
  else if (job.command == "mixed-disc")
    report = run_mixed_disc(job, in);
  else if (job.command == "gram-rank")
    report = run_gram_rank(job, in);
  else if (job.command == "positivity")
    report = run_positivity(job, in);
  else if (job.command == "hessian")
    report = run_hessian(job, in);
  else if (job.command == "ma-density")
    report = run_ma_density(job, in);
  else if (job.command == "current-pair")
    report = run_current_pair(job, in);
  else if (job.command == "blocki")
    report = run_blocki(job, in);
  else if (job.command == "pseudovolume")
    report = run_pseudovolume(job, in);
  else if (job.command == "kazarnovskii")
    report = run_kazarnovskii(job, in);
  else if (job.command == "support-measure")
    report = run_support_measure(job, in);
  else if (job.command == "additivity")
    report = run_additivity(job, in);
  else if (job.command == "verify-all")
    report = run_verify_all(job, check_failed, failed_id);
  else
    throw ValidationError("unknown command '" + job.command + "'");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string text = report.dump(2);
  if (!job.output.empty()) {
    std::ofstream out(job.output);
    if (!out) throw ValidationError("cannot open output file " + job.output);
    out << text << "\n";
  }
  std::cout << text << "\n";
  std::fprintf(stderr, "wall-time %.2fs\n", secs);
  if (check_failed) {
    std::fprintf(stderr, "verify-all failed at %s\n", failed_id.c_str());
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch runner for the hypervol library"};
  Job job;
  app.add_option("--command", job.command, "operation to run")->required();
  app.add_option("--input", job.input, "input JSON file");
  app.add_option("--seed", job.seed, "base seed for all sampling");
  app.add_option("--samples", job.samples, "Monte Carlo samples per cone");
  app.add_option("--grid-spacing", job.spacing, "override the grid spacing");
  app.add_option("--output", job.output, "report file path");
  app.add_option("--variant", job.variant, "support-measure density variant")
      ->check(CLI::IsMember({"face", "zonotope"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run(job);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
