#include "horops/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace horops {

using nlohmann::json;

namespace {

Matrix matrix_from_flat(std::size_t d, const std::vector<double>& flat) {
  if (flat.size() != d * d) throw ConfigError("config: generator matrix has wrong size");
  Matrix m(d, d);
  m.data() = flat;
  return m;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.schema_version != "1")
    throw ConfigError("config: unsupported schema_version '" + cfg.schema_version + "'");
  if (cfg.d < 2) throw ConfigError("config: need d >= 2");
  if (cfg.generators.empty()) throw ConfigError("config: no generators");
  if (cfg.labels.size() != cfg.generators.size())
    throw ConfigError("config: label/generator count mismatch");
  for (const Matrix& g : cfg.generators) {
    if (g.rows() != cfg.d || g.cols() != cfg.d)
      throw ConfigError("config: generator dimension mismatch");
    if (std::fabs(determinant(g) - 1.0) > 1e-6)
      throw ConfigError("config: generator determinant is not 1");
  }
  if (cfg.theta_ks.empty()) throw ConfigError("config: empty theta");
  for (std::size_t k : cfg.theta_ks)
    if (k < 1 || k >= cfg.d) throw ConfigError("config: theta index out of range");
  if (cfg.phi_coeffs.size() != cfg.d - 1)
    throw ConfigError("config: phi needs d-1 coefficients");
  if (!(cfg.ball.dedup_tol > 0)) throw ConfigError("config: dedup_tol must be positive");
  if (cfg.ball.max_word_length == 0) throw ConfigError("config: max_word_length must be >= 1");
  if (cfg.ball.cap == 0) throw ConfigError("config: cap must be positive");
  for (double r : cfg.r_grid)
    if (!(r > 0)) throw ConfigError("config: R grid entries must be positive");
  if (cfg.measure.h_mode != "constant" && cfg.measure.h_mode != "polynomial")
    throw ConfigError("config: h_mode must be constant or polynomial");
  if (!cfg.measure.s_auto && !(cfg.measure.s > 0))
    throw ConfigError("config: measure.s must be positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.schema_version = j.at("schema_version").get<std::string>();
    cfg.name = j.value("name", std::string("unnamed"));
    const json& grp = j.at("group");
    cfg.d = grp.at("d").get<std::size_t>();
    for (const json& g : grp.at("generators")) {
      cfg.labels.push_back(g.at("label").get<std::string>());
      cfg.generators.push_back(
          matrix_from_flat(cfg.d, g.at("matrix_rowmajor").get<std::vector<double>>()));
    }
    cfg.theta_ks = j.at("theta").get<std::vector<std::size_t>>();
    cfg.phi_coeffs = j.at("phi").get<Vec>();
    const json& ball = j.at("ball");
    cfg.ball.max_word_length = ball.at("max_word_length").get<std::size_t>();
    cfg.ball.dedup_tol = ball.value("dedup_tol", 1e-6);
    cfg.ball.cap = ball.value("cap", std::size_t(5000000));
    cfg.ball.threads = ball.value("threads", 1u);
    if (j.contains("shadows"))
      cfg.r_grid = j["shadows"].value("R_grid", cfg.r_grid);
    if (j.contains("measure")) {
      const json& m = j["measure"];
      cfg.measure.s = m.value("s", 1.0);
      cfg.measure.s_auto = m.value("s_auto", false);
      cfg.measure.s_offset = m.value("s_offset", 0.05);
      cfg.measure.h_mode = m.value("h_mode", std::string("constant"));
      cfg.measure.h_eps = m.value("h_eps", 0.5);
    }
    cfg.seed = j.value("seed", std::uint64_t(12345));
    cfg.probe_depth = j.value("probe_depth", std::size_t(6));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: missing or ill-typed field: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["name"] = cfg.name;
  json gens = json::array();
  for (std::size_t i = 0; i < cfg.generators.size(); ++i) {
    json g;
    g["label"] = cfg.labels[i];
    g["matrix_rowmajor"] = cfg.generators[i].data();
    gens.push_back(g);
  }
  j["group"] = {{"d", cfg.d}, {"generators", gens}};
  j["theta"] = cfg.theta_ks;
  j["phi"] = cfg.phi_coeffs;
  j["ball"] = {{"max_word_length", cfg.ball.max_word_length},
               {"dedup_tol", cfg.ball.dedup_tol},
               {"cap", cfg.ball.cap},
               {"threads", cfg.ball.threads}};
  j["shadows"] = {{"R_grid", cfg.r_grid}};
  j["measure"] = {{"s", cfg.measure.s},
                  {"s_auto", cfg.measure.s_auto},
                  {"s_offset", cfg.measure.s_offset},
                  {"h_mode", cfg.measure.h_mode},
                  {"h_eps", cfg.measure.h_eps}};
  j["seed"] = cfg.seed;
  j["probe_depth"] = cfg.probe_depth;
  return j.dump(2);
}

namespace {

Matrix sl2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

// symmetric square on the orthonormal basis (x^2, sqrt2 xy, y^2); maps
// SO(2) into SO(3) and diag(t, 1/t) to diag(t^2, 1, 1/t^2)
Matrix sym_square(const Matrix& g) {
  double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  const double r2 = std::sqrt(2.0);
  Matrix m(3, 3);
  m(0, 0) = a * a;
  m(1, 0) = r2 * a * c;
  m(2, 0) = c * c;
  m(0, 1) = r2 * a * b;
  m(1, 1) = a * d + b * c;
  m(2, 1) = r2 * c * d;
  m(0, 2) = b * b;
  m(1, 2) = r2 * b * d;
  m(2, 2) = d * d;
  return m;
}

// ping-pong pair: a strong diagonal and its conjugate by a 60 degree
// rotation, far enough apart that products stay uniformly loxodromic
// Contraction strength 4 keeps 2 * omega_1 kappa <= 4 L log 2 well below
// -log(machine eps) at L = 10, so attracting-flag evaluations still
// resolve against rounding noise at the bottom of the ball.
void schottky_pair(Matrix& a_out, Matrix& b_out) {
  const double lambda = 4.0;
  Matrix a = sl2(lambda, 0.0, 0.0, 1.0 / lambda);
  double co = 0.5, si = std::sqrt(3.0) / 2.0;
  Matrix r = sl2(co, -si, si, co);
  a_out = a;
  b_out = r * a * r.transpose();
}

}  // namespace

std::vector<std::string> builtin_config_names() {
  return {"cyclic", "schottky_sl2", "punctured_torus", "example59_sl4", "sym2_schottky_sl3"};
}

ExperimentConfig builtin_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "cyclic") {
    // one loxodromic generator of SL(3,R); linear orbit growth
    cfg.d = 3;
    cfg.labels = {"g"};
    Matrix g = Matrix::diagonal({4.0, 1.0, 0.25});
    cfg.generators = {g};
    cfg.theta_ks = {1, 2};
    cfg.phi_coeffs = {1.0, 0.0};
    cfg.ball.max_word_length = 128;
    cfg.measure.s = 0.3;
  } else if (name == "schottky_sl2") {
    cfg.d = 2;
    cfg.labels = {"a", "b"};
    Matrix a, b;
    schottky_pair(a, b);
    cfg.generators = {a, b};
    cfg.theta_ks = {1};
    cfg.phi_coeffs = {1.0};
    cfg.ball.max_word_length = 10;
    cfg.measure.s_auto = true;
  } else if (name == "punctured_torus") {
    // finite-coarea lattice with a relation visible at short word length;
    // exponent for phi = omega_1 is exactly 2
    cfg.d = 2;
    cfg.labels = {"t", "u"};
    cfg.generators = {sl2(1, 1, 0, 1), sl2(1, 0, 1, 1)};
    cfg.theta_ks = {1};
    cfg.phi_coeffs = {1.0};
    cfg.ball.max_word_length = 14;
    cfg.measure.s_auto = true;
  } else if (name == "example59_sl4") {
    // product embedding Gamma_0 x {id} block-diagonally into SL(4,R);
    // kappa degenerates on the second factor, so the full-theta limit set
    // is empty while conical directions fill the product circle
    cfg.d = 4;
    cfg.labels = {"t", "u"};
    Matrix t = Matrix::identity(4), u = Matrix::identity(4);
    t(0, 0) = 1;
    t(0, 1) = 1;
    t(1, 1) = 1;
    u(0, 0) = 1;
    u(1, 0) = 1;
    u(1, 1) = 1;
    cfg.generators = {t, u};
    cfg.theta_ks = {1, 2, 3};
    cfg.phi_coeffs = {1.0, 0.0, 0.0};
    cfg.ball.max_word_length = 10;
    cfg.r_grid = {1.0, 2.0, 3.0, 5.0};
    cfg.measure.s = 1.0;
  } else if (name == "sym2_schottky_sl3") {
    // irreducible SL(3,R) image of the Schottky pair; theta-regular with
    // growing margins, the transverse-group witness
    cfg.d = 3;
    cfg.labels = {"a", "b"};
    Matrix a, b;
    schottky_pair(a, b);
    cfg.generators = {sym_square(a), sym_square(b)};
    cfg.theta_ks = {1, 2};
    cfg.phi_coeffs = {1.0, 0.0};
    cfg.ball.max_word_length = 10;
    cfg.measure.s_auto = true;
  } else {
    throw ConfigError("config: unknown builtin '" + name + "'");
  }
  validate(cfg);
  return cfg;
}

}  // namespace horops
