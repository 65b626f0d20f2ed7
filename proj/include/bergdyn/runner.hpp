#pragma once

#include <string>

#include "bergdyn/config.hpp"

namespace bergdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the experiment, writing <prefix>.csv and <prefix>.summary.txt.
/// Nothing is written on failure. Honors the BERGDYN_THREADS
/// environment variable; output bytes are independent of it.
int run(const ExperimentConfig& cfg);

/// Parse-and-run with error mapping to exit codes; messages to stderr.
int run_config_text(const std::string& text);

/// Parse and validate only.
int validate_config_text(const std::string& text);

std::string version();

/// Locale-independent formatting used for all CSV output.
std::string format_double(double v);

}  // namespace bergdyn::cli
