#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergdyn/dynamics.hpp"

namespace bergdyn::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  Norm,
  Orbit,
  SnDecay,
  Kitai,
  Witness,
  Span,
  Raster,
  Rajchman,
  LogGrowth
};

const char* kind_name(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Norm;
  std::optional<geom::Domain> domain;
  std::string domain_text;
  double p = 2.0;
  std::optional<measures::CircleMeasure> measure;
  std::optional<measures::CircleMeasure> measure_f;
  std::optional<measures::CircleMeasure> measure_g;
  std::optional<fn::AnalyticFn> function;
  std::optional<fn::AnalyticFn> target;
  std::vector<dyn::NodeSet> node_sets;
  int n_big = 128;      // N: orbit / sndecay / witness horizon
  int k_limit = 100;    // K: rajchman coefficient range
  int n_max = 16;       // kitai horizon
  int samples = 200;    // kitai sample points / raster alpha samples
  int probes = 50;      // raster probe points
  double grid_step = 0.05;
  double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
  std::vector<double> radii;
  std::optional<std::uint64_t> seed;
  std::string prefix = "out";
  quad::QuadratureConfig quadrature;
};

/// Strict line-based `key = value` format; # starts a comment. Unknown
/// keys and keys foreign to the chosen experiment are errors.
ExperimentConfig parse_config(const std::string& text);

// Expression sub-parsers, exposed for direct use and tests.
geom::Domain parse_domain(const std::string& text);
measures::CircleMeasure parse_measure(const std::string& text);
fn::AnalyticFn parse_function(const std::string& text);
std::vector<dyn::NodeSet> parse_nodes(const std::string& text);

}  // namespace bergdyn::cli
