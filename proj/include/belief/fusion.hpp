#pragma once

// One-vs-one classifier scores to mass functions, and their fusion.
//
// Pairs (i, j) with i < j are numbered lexicographically. A positive score
// f_ij favors class i.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "belief/mass.hpp"
#include "belief/mass_io.hpp"
#include "belief/texture.hpp"

namespace belief::fusion {

std::size_t pair_count(int n);
/// Position of (i, j), i < j, in lexicographic pair order.
std::size_t pair_index(int n, int i, int j);
std::vector<std::pair<int, int>> class_pairs(int n);

/// How the λ averages are divided.
enum class LambdaDivisor {
  all_samples,  // 1/l over every training score
  per_sign,     // 1/(number of scores on that side)
};

/// Shape of the score-to-mass model.
enum class MassModelVariant {
  verbatim,    // printed form: jumps at f = 0
  continuous,  // half the committed mass on each class at f = 0
};

struct LambdaFit {
  double lambda_p;
  double lambda_n;
  std::size_t l;
};

/// λ_p = Σ max(f,0) / l, λ_n = Σ min(f,0) / l (or per-sign counts). Throws
/// unless at least one score is strictly positive and one strictly negative.
LambdaFit fit_lambdas(std::span<const double> scores,
                      LambdaDivisor divisor = LambdaDivisor::all_samples);

struct PairParams {
  int i = 0;
  int j = 1;
  double alpha = 0.95;
  double lambda_p = 1.0;
  double lambda_n = -1.0;
  std::size_t l = 0;

  void validate() const;
};

struct MassModelParams {
  double alpha = 0.95;
  MassModelVariant variant = MassModelVariant::verbatim;
  LambdaDivisor divisor = LambdaDivisor::all_samples;
  /// One entry per class pair, in pair order.
  std::vector<PairParams> pairs;

  const PairParams& pair(int n, int i, int j) const;
  void validate(int n) const;
};

struct PairMasses {
  double on_i;
  double on_j;
  double on_theta;
};

/// m(C_i), m(C_j), m(Θ) for one binary score.
PairMasses pairwise_masses(double f, const PairParams& p,
                           MassModelVariant variant = MassModelVariant::verbatim);

PowerMass pairwise_mass(const Frame& frame, double f, const PairParams& p,
                        MassModelVariant variant = MassModelVariant::verbatim);

/// All n(n-1)/2 scores of one observation, f[pair_index(n, i, j)].
struct PairwiseScores {
  std::string obs_id;
  std::vector<double> f;
};

/// Dempster combination of the pairwise masses. Throws TotalConflict.
PowerMass fuse_power(const Frame& frame, const PairwiseScores& scores,
                     const MassModelParams& params);
/// Conjunctive combination in D^Θ, intersections retained.
HyperMass fuse_hyper(const Frame& frame, const PairwiseScores& scores,
                     const MassModelParams& params);
AnyMass fuse_observation(const Frame& frame, const PairwiseScores& scores,
                         const MassModelParams& params, Algebra algebra);

/// Fits λ for every pair from training scores, sharing params.alpha.
MassModelParams fit_mass_model(const Frame& frame,
                               std::span<const PairwiseScores> training,
                               double alpha = 0.95,
                               LambdaDivisor divisor = LambdaDivisor::all_samples,
                               MassModelVariant variant = MassModelVariant::verbatim);

/// Linear one-vs-one discriminant standing in for an external classifier.
/// Features are z-scored with the training mean and deviation; each pair uses
/// w = (μ_i − μ_j) / s² (pooled per-dimension variance) and a bias putting
/// f = 0 at the midpoint of the two class means.
class LinearPairwiseScorer {
 public:
  struct Line {
    int i;
    int j;
    std::array<double, 6> w;
    double b;
  };

  /// Rows must carry frame labels; each class needs at least two rows.
  static LinearPairwiseScorer fit(const Frame& frame,
                                  std::span<const texture::FeatureRow> rows);

  PairwiseScores score(const std::string& obs_id,
                       const texture::FeatureVector& x) const;

  const Frame& frame() const noexcept { return frame_; }
  std::span<const Line> lines() const noexcept { return lines_; }

  std::string to_json() const;
  static LinearPairwiseScorer from_json(std::string_view text);

 private:
  LinearPairwiseScorer(Frame frame, std::array<double, 6> mean,
                       std::array<double, 6> scale, std::vector<Line> lines)
      : frame_(std::move(frame)), mean_(mean), scale_(scale),
        lines_(std::move(lines)) {}

  Frame frame_;
  std::array<double, 6> mean_;
  std::array<double, 6> scale_;
  std::vector<Line> lines_;
};

// --- files -------------------------------------------------------------------

/// obs_id,i,j,f with 1-based class indices.
void write_score_csv(std::ostream& out, int n,
                     std::span<const PairwiseScores> scores);
/// Groups rows by obs_id in first-appearance order; every pair must be present.
std::vector<PairwiseScores> read_score_csv(std::istream& in, int n);

/// {"alpha":..,"variant":..,"divisor":..,"pairs":[{"i":..,"j":..,
/// "lambda_p":..,"lambda_n":..,"alpha":..,"l":..}]} with 1-based indices.
std::string params_to_json(const MassModelParams& params);
MassModelParams params_from_json(std::string_view text, int n);

std::string to_string(MassModelVariant variant);
MassModelVariant variant_from_string(const std::string& name);
std::string to_string(LambdaDivisor divisor);
LambdaDivisor divisor_from_string(const std::string& name);

}  // namespace belief::fusion
