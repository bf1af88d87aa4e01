#pragma once

#include <string>

#include "horops/config.hpp"

namespace horops {

// Exit codes: 0 success, 1 invariant failure, 2 config error, 3 cap exceeded.
int run_cli(int argc, char** argv);

// individual commands; outputs are buffered and written only on success
int cmd_orbit(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_exponent(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_measure(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_shadow_lemma(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::string& suite);
int cmd_limit_set(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace horops
