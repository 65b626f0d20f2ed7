#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bergdyn/functions.hpp"
#include "bergdyn/quadrature.hpp"

namespace bergdyn::dyn {

/// The majorant integral of the kernel measure is not p-integrable.
struct NotInMpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> geometric_checkpoints(int n_max);

struct OrbitPoint {
  int n = 0;
  quad::NormEstimate norm;
};

struct OrbitRecord {
  std::vector<OrbitPoint> points;
  /// Atoms in the kernel measure: coefficients cannot decay.
  bool non_rajchman = false;
};

/// Norms of the shift iterates T^n f at geometric checkpoints up to N.
/// Atom-bearing kernels are flagged non-Rajchman and processed; an
/// atom-free kernel whose majorant fails to be p-integrable is an
/// error.
OrbitRecord orbit_decay(const fn::AnalyticFn& f, const geom::Domain& domain,
                        double p, int n_max, const quad::QuadratureConfig& cfg);

/// Norms of the right-inverse sequence S_n nu.
OrbitRecord s_n_decay(const measures::CircleMeasure& nu,
                      const geom::Domain& domain, double p, int n_max,
                      const quad::QuadratureConfig& cfg);

struct KitaiRow {
  int n = 0;
  bool repr_exact = false;
  double max_dev = 0.0;
};

struct KitaiReport {
  std::vector<KitaiRow> rows;
  bool all_exact = true;
  double worst_dev = 0.0;
};

/// Verifies T^n S_n nu = C nu for n = 0..n_max, both at representation
/// level (exact) and pointwise at the samples.
KitaiReport kitai_identity_check(const measures::CircleMeasure& nu, int n_max,
                                 const std::vector<Complex>& samples);

struct WitnessRow {
  int n = 0;
  double dist_source = 0.0;  // ||u - f|| = ||S_n mu_g||
  double dist_target = 0.0;  // ||T^n u - g|| = ||T^n f||
};

struct TransitivityWitness {
  std::vector<WitnessRow> rows;
  double norm_f = 0.0;
  double norm_g = 0.0;
  fn::AnalyticFn final_u;  // f + S_N mu_g
};

/// Kitai-style mixing witness u = f + S_n mu_g for arc-built f and g.
/// The cross terms vanish identically, so the two distances reduce to
/// the decay of S_n mu_g and of T^n f.
TransitivityWitness transitivity_witness(const fn::AnalyticFn& f,
                                         const fn::AnalyticFn& g, int n_max,
                                         const geom::Domain& domain, double p,
                                         const quad::QuadratureConfig& cfg);

struct GammaNodeSet {
  std::vector<Complex> nodes;
};
struct ArcFamilySet {
  std::vector<std::pair<double, double>> arcs;
};
using NodeSet = std::variant<GammaNodeSet, ArcFamilySet>;

struct SpanResidualPoint {
  std::size_t node_count = 0;
  double residual = 0.0;
  int rank_kept = 0;
};

struct SpanResidualCurve {
  std::vector<SpanResidualPoint> points;
  double target_norm = 0.0;  // discretized 2-norm of the target
};

/// Least-squares distance from the target to the span of each node
/// set, in the discretized 2-norm. Gram matrices come from
/// inner_product and are solved with spectral truncation (eigenvalues
/// below cutoff_rel of the largest dropped); inner products are cached
/// across node sets.
SpanResidualCurve span_residual(const quad::ComplexField& target,
                                const std::vector<NodeSet>& node_sets,
                                const geom::Domain& domain,
                                const quad::QuadratureConfig& cfg,
                                double cutoff_rel = 1e-10);

struct RasterPoint {
  Complex alpha;
  bool in_star = false;
  std::optional<double> resolvent_residual;
};

struct RasterConfig {
  double grid_step = 0.05;
  double re_min = -2.0, re_max = 2.0;
  double im_min = -2.0, im_max = 2.0;
  int alpha_samples = 16;  // points outside Omega* given a resolvent check
  int probe_points = 50;
  std::uint64_t seed = 1;
  double p = 2.0;
};

struct SpectrumRaster {
  std::vector<RasterPoint> points;
  int eigen_checked = 0;
  bool eigen_all_exact = true;
  double max_resolvent_residual = 0.0;
  std::string note;
};

/// Classifies a grid by membership in Omega*; spot-checks the resolvent
/// identity outside and the eigenfunction relation in the interior.
SpectrumRaster spectrum_raster(const geom::Domain& domain,
                               const fn::AnalyticFn& probe_g,
                               const RasterConfig& rcfg,
                               const quad::QuadratureConfig& qcfg);

}  // namespace bergdyn::dyn
