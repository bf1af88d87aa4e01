#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "horops/boundary.hpp"
#include "horops/orbit.hpp"
#include "horops/shadows.hpp"
#include "horops/weyl.hpp"

namespace horops {

double phi_length(const Functional& phi, const OrbitElement& el);

struct ExponentEstimate {
  double delta_hat = 0.0;
  double window_lo = 0.0, window_hi = 0.0;   // T-range the fit used
  double formula_cap = 0.0;                  // L * min generator phi-growth
  double saturation_cap = 0.0;               // where outer shells stop adding counts
  double conf_lo = 0.0, conf_hi = 0.0;       // spread of sub-window slopes
  std::vector<double> shell_slopes;          // per-shell incremental growth rates
  std::size_t samples = 0;                   // elements inside the window
};

// Least-squares slope of log N(T).  The fit window is capped both by
// T <= L * (min generator phi-growth) and by the empirical saturation
// radius, the largest T where removing the two outermost shells changes
// the count below T by at most 2%; beyond either cap the truncated ball
// undercounts N(T) and biases the slope low.  Throws when the resulting
// window holds too few elements.
ExponentEstimate critical_exponent(const OrbitBall& ball, const GroupPresentation& pres,
                                   const Functional& phi);

struct PoincareSum {
  double value = 0.0;                 // sum over the ball of h * e^{-s phi kappa}
  std::vector<double> shell_sums;     // indexed by word length
  std::vector<double> tail_ratios;    // shell_sums[l] / shell_sums[l-1]
};

PoincareSum poincare_partial_sum(const OrbitBall& ball, const Functional& phi, double s);

// Abscissa estimate by bisecting s on the divergence heuristic "geometric
// mean of the last three shell ratios >= 1".  Independent of the counting
// regression; used to cross-check it.
double poincare_abscissa(const OrbitBall& ball, const Functional& phi,
                         double tol = 1e-3);

enum class HMode { kConstant, kPolynomial };

// Orbit-atom measure: weight of gamma o proportional to
// h(phi kappa(gamma)) e^{-s phi kappa(gamma)}.  Weights stay aligned with
// ball.elements; summation order is fixed so reruns are bitwise equal.
struct AtomicMeasure {
  double s = 0.0;
  Functional phi;
  HMode h_mode = HMode::kConstant;
  double h_eps = 0.0;                 // exponent of the polynomial h
  bool normalized = true;
  std::vector<double> weights;
  double log_total_raw = 0.0;         // log of the pre-normalization mass
};

AtomicMeasure patterson_measure(const OrbitBall& ball, const Functional& phi, double s,
                                HMode h_mode = HMode::kConstant, double h_eps = 0.5);

struct QuasiShellRow {
  std::size_t shell = 0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  double max_deviation = 0.0;         // only over matched atoms
  double lost_mass_fraction = 0.0;    // shell mass mapped outside the ball
};

struct QuasiInvarianceResult {
  std::string gamma_label;
  std::vector<QuasiShellRow> shells;
  double max_deviation = 0.0;
  bool ball_too_small = false;        // outer shell lost more than half its mass
};

// Compare the push-forward weight ratio against the cocycle density
// e^{-s phi B(gamma^{-1}, atom)} shell by shell.  Atoms pushed outside the
// enumerated ball are excluded and their mass is accounted, never ignored.
std::vector<QuasiInvarianceResult> quasi_invariance_report(
    const AtomicMeasure& mu, const OrbitBall& ball, const GroupPresentation& pres,
    const OrbitLookup& lookup, const ThetaSubset& theta, const std::vector<Word>& tests);

struct ShadowLemmaRow {
  std::string gamma_word;
  double phi_len = 0.0;
  double shadow_mass = 0.0;
  double ratio = 0.0;                 // mass / e^{-delta phi_len}
  std::size_t members = 0;
};

struct ShadowLemmaReport {
  std::vector<ShadowLemmaRow> rows;
  double min_ratio = 0.0, max_ratio = 0.0, median_ratio = 0.0;
  double implied_c = 0.0;             // max(max_ratio, 1/min_ratio) over nonempty rows
  std::size_t empty_shadows = 0;
};

// mu(O_R(gamma)) against e^{-delta ||gamma||_phi} for the chosen test
// elements (ball indices).  Membership of an atom gamma' o unwinds to
// omega_k kappa(gamma') > omega_k kappa(gamma) + omega_k kappa(gamma^{-1}
// gamma') - R for every k in theta, the same predicate shadow_membership
// applies through the cocycle.
ShadowLemmaReport shadow_lemma_report(const AtomicMeasure& mu, const OrbitBall& ball,
                                      const GroupPresentation& pres, const ThetaSubset& theta,
                                      double radius, double delta,
                                      const std::vector<std::size_t>& test_indices);

void write_shadow_lemma_csv(const std::string& path, const ShadowLemmaReport& report);

struct AxiomCheck {
  std::string axiom;
  std::string verdict;                // "pass" | "fail" | "not-machine-checkable" | ...
  std::size_t evidence_count = 0;
  std::vector<std::pair<std::string, double>> constants;
  std::string note;
};

struct PsAxiomOptions {
  std::vector<double> r_grid = {0.5, 1.0, 2.0, 5.0};
  std::size_t test_count = 24;        // orbit elements exercised per axiom
  std::size_t atom_sample = 3000;     // atom subsample for the sweeps
  std::size_t transport_checks = 100;
  std::size_t chain_targets = 12;     // contracting chains sought for the diameter axiom
  double chain_radius = 2.0;
  std::uint64_t seed = 4242;
};

std::vector<AxiomCheck> ps_axiom_report(const OrbitBall& ball, const GroupPresentation& pres,
                                        const AtomicMeasure& mu, const ThetaSubset& theta,
                                        const std::vector<HorofunctionPoint>& boundary_candidates,
                                        const PsAxiomOptions& opt = {});

std::string axiom_report_to_json(const std::vector<AxiomCheck>& checks);

}  // namespace horops
