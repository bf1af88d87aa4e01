#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "horops/lie.hpp"
#include "horops/matrix.hpp"
#include "horops/weyl.hpp"

namespace horops {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generators with their inverses adjoined: slot 2i is the i-th configured
// generator, slot 2i+1 its inverse ("label~").  Words are strings of slot
// indices; a word is reduced iff no slot is followed by its partner.
class GroupPresentation {
 public:
  GroupPresentation(std::size_t d, const std::vector<std::string>& labels,
                    const std::vector<Matrix>& generators, double det_tol = 1e-9);

  std::size_t dim() const { return d_; }
  std::size_t slots() const { return gens_.size(); }
  const Matrix& gen(std::size_t slot) const { return gens_[slot]; }
  const std::string& label(std::size_t slot) const { return labels_[slot]; }
  static std::size_t inverse_slot(std::size_t slot) { return slot ^ 1; }

  // cached exterior powers of the generator slots
  const std::vector<Matrix>& exterior_gens(std::size_t k) const;

 private:
  std::size_t d_;
  std::vector<std::string> labels_;
  std::vector<Matrix> gens_;
  mutable std::mutex cache_mu_;
  mutable std::unordered_map<std::size_t, std::vector<Matrix>> ext_cache_;
};

using Word = std::string;  // bytes are generator slots; SSO keeps short words inline

std::string word_label(const GroupPresentation& pres, const Word& w);  // "a.b~", "e" for empty
Word word_inverse(const Word& w);
Word word_reduced_concat(const Word& a, const Word& b);  // cancels slot/inverse pairs at the seam
Matrix word_matrix(const GroupPresentation& pres, const Word& w);

// product of exterior powers along the word; inverted=true gives the
// exterior power of the inverse element.  Multiplying in the exterior
// representation keeps the top singular value accurate for long words,
// where minors of the assembled d x d product would cancel badly.
Matrix word_exterior(const GroupPresentation& pres, const Word& w, std::size_t k,
                     bool inverted);

struct OrbitElement {
  Word word;
  Matrix mat;   // det-renormalized product
  Matrix inv;   // product of inverse generators, reversed
  Vec kappa;    // dominant, trace zero; top-weight route, see enumerate_ball

  std::size_t length() const { return word.size(); }
};

struct BallOptions {
  std::size_t max_word_length = 8;
  double dedup_tol = 1e-6;
  std::size_t cap = 5000000;
  unsigned threads = 1;
};

struct OrbitBall {
  std::size_t d = 0;
  BallOptions opts;
  std::vector<OrbitElement> elements;  // sorted by (length, word lex); identity first
  std::vector<std::size_t> shell_start;  // index of first element of each length
};

// Breadth-first enumeration over reduced words with matrix deduplication
// (quantized-entry hash, exact tolerance compare inside buckets).  The
// first representative in BFS order wins, so every element keeps a
// shortest witness word.  Throws CapExceeded past opts.cap elements.
OrbitBall enumerate_ball(const GroupPresentation& pres, const BallOptions& opts);

// hash lookup from matrices back to ball indices (same quantization as the
// dedup pass)
class OrbitLookup {
 public:
  OrbitLookup(const OrbitBall& ball);
  std::optional<std::size_t> find(const Matrix& m) const;

 private:
  const OrbitBall& ball_;
  double tol_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> map_;
};

struct RegularityRow {
  std::size_t length = 0;
  std::size_t count = 0;
  double min_margin = 0.0;
  double mean_margin = 0.0;
};

struct RegularityReport {
  std::vector<RegularityRow> rows;
  double slope_last_half = 0.0;  // least-squares slope of min margin, outer shells
  std::string verdict;           // "growing" | "bounded"
};

RegularityReport regularity_report(const OrbitBall& ball, const ThetaSubset& theta);

struct LimitFlagSample {
  PartialFlag flag;
  Word word;
  double margin = 0.0;
};

// theta-flags of the elements whose chamber margin clears the floor,
// merged at flag-distance merge_tol; shortest-word representatives kept
std::vector<LimitFlagSample> limit_set_sample(const OrbitBall& ball,
                                              const GroupPresentation& pres,
                                              const ThetaSubset& theta,
                                              double margin_floor,
                                              double merge_tol = 1e-6);

void write_orbit_csv(const std::string& path, const OrbitBall& ball,
                     const GroupPresentation& pres, const ThetaSubset& theta,
                     const Functional& phi);

}  // namespace horops
