#include "bergdyn/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bergdyn/rng.hpp"

namespace bergdyn::cli {

namespace {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return format_double(v); }

quad::ComplexField evaluator(fn::AnalyticFn f) {
  return [f = std::move(f)](Complex z) { return fn::evaluate_guarded(f, z); };
}

/// Seeded sample points inside the domain, kept away from the origin
/// and from the unit circle (where kernel singularities may sit).
std::vector<Complex> sample_points(const geom::Domain& domain, int count,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && guard++ < 1000000) {
    const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    if (std::abs(z) < 1e-2) continue;
    if (std::abs(std::abs(z) - 1.0) < 1e-3) continue;
    if (!domain.contains(z)) continue;
    pts.push_back(z);
  }
  if (static_cast<int>(pts.size()) < count)
    throw NumericalFailure("could not sample enough points in the domain");
  return pts;
}

struct Outputs {
  std::string csv;
  std::string summary;
};

void norm_summary_block(std::ostringstream& os, const quad::NormEstimate& ne) {
  os << "value = " << fmt(ne.value) << "\n";
  os << "error_estimate = " << fmt(ne.error_estimate) << "\n";
  os << "cells_used = " << ne.cells_used << "\n";
  os << "boundary_cells_discarded = " << ne.boundary_cells_discarded << "\n";
}

/// Members of the space vanish at infinity, so a polynomial part is
/// only admissible over domains bounded in the plane.
void check_vanishing_at_infinity(const fn::AnalyticFn& f,
                                 const geom::Domain& domain) {
  if (domain.contains_infinity() && !f.poly.empty())
    throw ConfigError(
        "function has a polynomial part but the domain contains infinity");
}

Outputs run_norm(const ExperimentConfig& cfg) {
  check_vanishing_at_infinity(*cfg.function, *cfg.domain);
  const quad::NormEstimate ne = quad::ap_norm(
      evaluator(*cfg.function), *cfg.domain, cfg.p, cfg.quadrature);
  if (ne.divergent)
    throw NumericalFailure("norm quadrature did not stabilize (divergent)");
  Outputs out;
  std::ostringstream csv;
  csv << "value,error,cells,boundary_discards\n";
  csv << fmt(ne.value) << "," << fmt(ne.error_estimate) << "," << ne.cells_used
      << "," << ne.boundary_cells_discarded << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = norm\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "p = " << fmt(cfg.p) << "\n";
  norm_summary_block(sum, ne);
  out.summary = sum.str();
  return out;
}

Outputs run_orbit(const ExperimentConfig& cfg, bool forward) {
  // Validates kernel support against Omega*.
  const fn::AnalyticFn f = fn::cauchy_transform(*cfg.measure, *cfg.domain);
  const dyn::OrbitRecord rec =
      forward ? dyn::orbit_decay(f, *cfg.domain, cfg.p, cfg.n_big,
                                 cfg.quadrature)
              : dyn::s_n_decay(*cfg.measure, *cfg.domain, cfg.p, cfg.n_big,
                               cfg.quadrature);
  Outputs out;
  std::ostringstream csv;
  csv << "n,norm,err\n";
  for (const auto& pt : rec.points)
    csv << pt.n << "," << fmt(pt.norm.value) << ","
        << fmt(pt.norm.error_estimate) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = " << (forward ? "orbit" : "sndecay") << "\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "p = " << fmt(cfg.p) << "\n";
  sum << "N = " << cfg.n_big << "\n";
  sum << "non_rajchman = " << (rec.non_rajchman ? "yes" : "no") << "\n";
  if (!rec.points.empty()) {
    sum << "norm_initial = " << fmt(rec.points.front().norm.value) << "\n";
    sum << "norm_final = " << fmt(rec.points.back().norm.value) << "\n";
  }
  out.summary = sum.str();
  return out;
}

Outputs run_kitai(const ExperimentConfig& cfg) {
  const std::vector<Complex> samples =
      sample_points(*cfg.domain, cfg.samples, *cfg.seed);
  const dyn::KitaiReport rep =
      dyn::kitai_identity_check(*cfg.measure, cfg.n_max, samples);
  Outputs out;
  std::ostringstream csv;
  csv << "n,max_dev\n";
  for (const auto& row : rep.rows)
    csv << row.n << "," << fmt(row.max_dev) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = kitai\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "n_max = " << cfg.n_max << "\n";
  sum << "samples = " << samples.size() << "\n";
  sum << "representation_identity_exact = " << (rep.all_exact ? "yes" : "no")
      << "\n";
  sum << "worst_pointwise_deviation = " << fmt(rep.worst_dev) << "\n";
  out.summary = sum.str();
  return out;
}

Outputs run_witness(const ExperimentConfig& cfg) {
  const fn::AnalyticFn f = fn::cauchy_transform(*cfg.measure_f, *cfg.domain);
  const fn::AnalyticFn g = fn::cauchy_transform(*cfg.measure_g, *cfg.domain);
  const dyn::TransitivityWitness w = dyn::transitivity_witness(
      f, g, cfg.n_big, *cfg.domain, cfg.p, cfg.quadrature);
  Outputs out;
  std::ostringstream csv;
  csv << "n,dist_source,dist_target\n";
  for (const auto& row : w.rows)
    csv << row.n << "," << fmt(row.dist_source) << "," << fmt(row.dist_target)
        << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = witness\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "p = " << fmt(cfg.p) << "\n";
  sum << "N = " << cfg.n_big << "\n";
  sum << "norm_f = " << fmt(w.norm_f) << "\n";
  sum << "norm_g = " << fmt(w.norm_g) << "\n";
  if (!w.rows.empty()) {
    sum << "final_dist_source = " << fmt(w.rows.back().dist_source) << "\n";
    sum << "final_dist_target = " << fmt(w.rows.back().dist_target) << "\n";
  }
  out.summary = sum.str();
  return out;
}

Outputs run_span(const ExperimentConfig& cfg) {
  const dyn::SpanResidualCurve curve =
      dyn::span_residual(evaluator(*cfg.target), cfg.node_sets, *cfg.domain,
                         cfg.quadrature);
  Outputs out;
  std::ostringstream csv;
  csv << "nodes,residual\n";
  for (const auto& pt : curve.points)
    csv << pt.node_count << "," << fmt(pt.residual) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = span\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "target_norm = " << fmt(curve.target_norm) << "\n";
  for (const auto& pt : curve.points)
    sum << "residual[" << pt.node_count << " nodes] = " << fmt(pt.residual)
        << " (rank " << pt.rank_kept << ")\n";
  out.summary = sum.str();
  return out;
}

Outputs run_raster(const ExperimentConfig& cfg) {
  check_vanishing_at_infinity(*cfg.function, *cfg.domain);
  dyn::RasterConfig rcfg;
  rcfg.grid_step = cfg.grid_step;
  rcfg.re_min = cfg.re_min;
  rcfg.re_max = cfg.re_max;
  rcfg.im_min = cfg.im_min;
  rcfg.im_max = cfg.im_max;
  rcfg.alpha_samples = cfg.samples;
  rcfg.probe_points = cfg.probes;
  rcfg.seed = *cfg.seed;
  rcfg.p = cfg.p;
  const dyn::SpectrumRaster raster =
      dyn::spectrum_raster(*cfg.domain, *cfg.function, rcfg, cfg.quadrature);
  Outputs out;
  std::ostringstream csv;
  csv << "re,im,in_star,resolvent_residual\n";
  for (const auto& pt : raster.points) {
    csv << fmt(pt.alpha.real()) << "," << fmt(pt.alpha.imag()) << ","
        << (pt.in_star ? 1 : 0) << ",";
    if (pt.resolvent_residual) csv << fmt(*pt.resolvent_residual);
    csv << "\n";
  }
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = raster\n";
  sum << "domain = " << cfg.domain_text << "\n";
  sum << "p = " << fmt(cfg.p) << "\n";
  sum << "grid_points = " << raster.points.size() << "\n";
  sum << "eigen_relation_checked = " << raster.eigen_checked << "\n";
  sum << "eigen_relation_exact = " << (raster.eigen_all_exact ? "yes" : "no")
      << "\n";
  sum << "max_resolvent_residual = " << fmt(raster.max_resolvent_residual)
      << "\n";
  if (!raster.note.empty()) sum << "note = " << raster.note << "\n";
  out.summary = sum.str();
  return out;
}

Outputs run_rajchman(const ExperimentConfig& cfg) {
  const measures::RajchmanReport rep =
      measures::rajchman_decay(*cfg.measure, cfg.k_limit);
  Outputs out;
  std::ostringstream csv;
  csv << "k,abs_coeff\n";
  for (const auto& row : rep.rows)
    csv << row.k << "," << fmt(row.magnitude) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = rajchman\n";
  sum << "K = " << cfg.k_limit << "\n";
  sum << "tail_constant = " << fmt(rep.tail_constant) << "\n";
  sum << "atom_dominated = " << (rep.atom_dominated ? "yes" : "no") << "\n";
  sum << "total_variation = " << fmt(measures::total_variation(*cfg.measure))
      << "\n";
  out.summary = sum.str();
  return out;
}

Outputs run_loggrowth(const ExperimentConfig& cfg) {
  const std::vector<quad::LogGrowthRow> rows =
      quad::log_growth_check(cfg.radii);
  Outputs out;
  std::ostringstream csv;
  csv << "r,h,ratio\n";
  for (const auto& row : rows)
    csv << fmt(row.r) << "," << fmt(row.h) << "," << fmt(row.ratio) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "experiment = loggrowth\n";
  double max_ratio = 0.0;
  for (const auto& row : rows) max_ratio = std::max(max_ratio, row.ratio);
  sum << "max_ratio = " << fmt(max_ratio) << "\n";
  out.summary = sum.str();
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string version() { return "bergdyn 0.1.0"; }

int run(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (const char* env = std::getenv("BERGDYN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n >= 1 && n <= 1024)
      cfg.quadrature.threads = static_cast<int>(n);
  }

  Outputs out;
  try {
    switch (cfg.kind) {
      case ExperimentKind::Norm: out = run_norm(cfg); break;
      case ExperimentKind::Orbit: out = run_orbit(cfg, true); break;
      case ExperimentKind::SnDecay: out = run_orbit(cfg, false); break;
      case ExperimentKind::Kitai: out = run_kitai(cfg); break;
      case ExperimentKind::Witness: out = run_witness(cfg); break;
      case ExperimentKind::Span: out = run_span(cfg); break;
      case ExperimentKind::Raster: out = run_raster(cfg); break;
      case ExperimentKind::Rajchman: out = run_rajchman(cfg); break;
      case ExperimentKind::LogGrowth: out = run_loggrowth(cfg); break;
    }
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fn::SupportError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    // Budget, non-finite samples, divergence, pole proximity, gram
    // breakdown: numerical failures. No partial output survives
    // because files are written only after success.
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  const std::string csv_path = cfg.prefix + ".csv";
  const std::string summary_path = cfg.prefix + ".summary.txt";
  {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) {
      std::cerr << "cannot open " << csv_path << " for writing\n";
      return kExitNumerical;
    }
    csv << out.csv;
    if (!csv.flush()) {
      csv.close();
      std::remove(csv_path.c_str());
      return kExitNumerical;
    }
  }
  {
    std::ofstream sum(summary_path, std::ios::binary | std::ios::trunc);
    if (!sum) {
      std::remove(csv_path.c_str());
      return kExitNumerical;
    }
    sum << out.summary;
  }
  return kExitOk;
}

int run_config_text(const std::string& text) {
  try {
    return run(parse_config(text));
  } catch (const std::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int validate_config_text(const std::string& text) {
  try {
    parse_config(text);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace bergdyn::cli
