#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "horops/matrix.hpp"
#include "horops/orbit.hpp"
#include "horops/weyl.hpp"

namespace horops {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeasureConfig {
  double s = 1.0;
  bool s_auto = false;        // s = estimated exponent + s_offset
  double s_offset = 0.05;
  std::string h_mode = "constant";   // "constant" | "polynomial"
  double h_eps = 0.5;
};

// One experiment: a generated group, a theta choice, a functional, plus
// enumeration / shadow / measure knobs.  JSON schema_version "1".
struct ExperimentConfig {
  std::string schema_version = "1";
  std::string name;
  std::size_t d = 0;
  std::vector<std::string> labels;
  std::vector<Matrix> generators;
  std::vector<std::size_t> theta_ks;
  Vec phi_coeffs;                     // length d-1, fundamental-weight basis
  BallOptions ball;
  std::vector<double> r_grid = {0.5, 1.0, 2.0, 5.0};
  MeasureConfig measure;
  std::uint64_t seed = 12345;
  std::size_t probe_depth = 6;

  ThetaSubset theta() const { return ThetaSubset(d, theta_ks); }
  Functional phi() const { return Functional(d, phi_coeffs); }
  GroupPresentation presentation() const {
    return GroupPresentation(d, labels, generators);
  }
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

// shipped example configurations, by name
std::vector<std::string> builtin_config_names();
ExperimentConfig builtin_config(const std::string& name);

}  // namespace horops
