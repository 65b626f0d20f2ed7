#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bergdyn/runner.hpp"

namespace {

int usage() {
  std::cerr << "usage: bergdyn run <config-file>\n"
               "       bergdyn validate <config-file>\n"
               "       bergdyn version\n";
  return bergdyn::cli::kExitValidation;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  const std::string cmd = argv[1];

  if (cmd == "version") {
    std::cout << bergdyn::cli::version() << "\n";
    return bergdyn::cli::kExitOk;
  }
  if (cmd == "run" || cmd == "validate") {
    if (argc != 3) return usage();
    std::string text;
    if (!read_file(argv[2], text)) {
      std::cerr << "cannot read config file: " << argv[2] << "\n";
      return bergdyn::cli::kExitValidation;
    }
    return cmd == "run" ? bergdyn::cli::run_config_text(text)
                        : bergdyn::cli::validate_config_text(text);
  }
  return usage();
}
