#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "belief/decision.hpp"
#include "belief/fusion.hpp"
#include "belief/texture.hpp"

namespace belief::experiment {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class TextureKind { fine, dark, blobs, ripple };

/// Band-limited noise texture, or a sinusoidal ripple plus noise.
struct TextureParams {
  TextureKind kind = TextureKind::fine;
  double mean = 128.0;
  double amplitude = 20.0;    // std of the main component
  double correlation = 1.0;   // Gaussian smoothing σ in pixels
  double detail = 0.0;        // std of an extra fine noise layer
  double period = 6.0;        // ripple only
  double noise = 0.0;         // ripple only: std of a layer smoothed by `correlation`
  double jitter = 0.0;        // per-imagette log-normal spread of `amplitude`
  std::vector<double> orientations = {90.0};  // ripple crest angles, degrees
};

struct ClassSpec {
  std::string name;
  TextureParams texture;
  bool learned = true;
};

struct DatasetSpec {
  std::uint64_t seed = 2008;
  int side = texture::kDefaultSide;
  std::vector<ClassSpec> classes;
  int train_per_class = 200;
  int test_per_class = 100;
  int hetero_per_pair = 100;
  /// Left half from the first class, right half from the second.
  std::vector<std::pair<std::string, std::string>> hetero_pairs;

  const ClassSpec& find(const std::string& name) const;
  ClassSpec& find(const std::string& name);
};

/// rock (blobs), sand (fine), silt (dark) learned; ripple unlearned; the four
/// two-texture mixes sand+rock, sand+silt, silt+ripple, sand+ripple.
DatasetSpec default_dataset();

struct Dataset {
  std::vector<texture::Imagette> train;  // learned classes only
  std::vector<texture::Imagette> test;   // homogeneous, then heterogeneous
};

/// Deterministic in spec.seed. Each imagette draws from its own stream.
Dataset generate(const DatasetSpec& spec);
texture::Imagette render(const TextureParams& params, int side,
                         std::uint64_t stream_seed, std::string id);
/// Left half of `left`, right half of `right`.
texture::Imagette split_imagette(const texture::Imagette& left,
                                 const texture::Imagette& right, std::string id);

struct RunConfig {
  std::vector<std::string> frame = {"rock", "sand", "silt"};
  double alpha = 0.95;
  fusion::MassModelVariant variant = fusion::MassModelVariant::verbatim;
  fusion::LambdaDivisor divisor = fusion::LambdaDivisor::all_samples;
  int levels = texture::kDefaultLevels;
  int distance = texture::kDefaultDistance;
  DatasetSpec dataset = default_dataset();

  /// Settings for the standalone `decide` stage.
  std::string rule = "two-step";
  DecisionConfig decision;

  void validate() const;
};

/// Reads a JSON run configuration; keys absent from the document keep their
/// defaults. Throws ConfigError.
RunConfig config_from_json(std::string_view text);

struct ConfusionReport {
  std::string name;
  std::string title;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::size_t>> counts;

  ConfusionReport(std::string name, std::string title,
                  std::vector<std::string> rows, std::vector<std::string> columns);

  void add(const std::string& row, const std::string& column);
  std::size_t count(const std::string& row, const std::string& column) const;
  std::size_t row_total(const std::string& row) const;
  bool has_reject() const;

  void write_csv(std::ostream& out) const;
  void write_text(std::ostream& out) const;
};

inline constexpr const char* kReject = "REJECT";

struct ObservationRecord {
  std::string id;
  std::string truth;
  fusion::PairwiseScores scores;
  std::string power_mass_json;
  std::string hyper_mass_json;
  /// Verdict string per report name.
  std::map<std::string, std::string> verdicts;
  bool card4_agrees = false;
};

struct ExperimentResult {
  std::vector<texture::FeatureRow> train_features;
  std::vector<texture::FeatureRow> test_features;
  std::string scorer_json;
  fusion::MassModelParams params;
  std::vector<ObservationRecord> observations;  // ordered by id
  std::vector<ConfusionReport> reports;
  double agreement_homogeneous = 0.0;
  double agreement_heterogeneous = 0.0;
  /// Agreement rate per report row.
  std::vector<std::pair<std::string, double>> agreement_by_row;

  const ConfusionReport& report(const std::string& name) const;
  std::string summary_json() const;
};

/// Verdict of every table rule for one observation. Three-class frames only.
ObservationRecord evaluate_observation(const Frame& frame, std::string id,
                                       std::string truth, const PowerMass& power,
                                       const HyperMass& hyper);
/// Sorts result.observations by id and builds the reports and agreement rates.
/// Every test imagette lands in exactly one cell of each report.
void assemble_reports(const RunConfig& config, ExperimentResult& result);

/// Features, scorer fit, λ fit, fusion in both algebras, and the decision
/// tables: pignistic and reject on singletons, two-step with unions (r=0.5),
/// GPT on cardinality 4, GPT on cardinality 2 with and
/// without reject, weighted credibility on cardinalities [2,6] (r=0.7).
ExperimentResult run_experiment(const RunConfig& config, const Dataset& data);
ExperimentResult run_experiment(const RunConfig& config);

/// Feature rows for imagettes, computed in parallel, order preserved.
std::vector<texture::FeatureRow> extract_features(
    std::span<const texture::Imagette> imagettes, int levels, int distance);

/// count of D^Θ elements per DSm cardinality 1..2^n-1.
std::vector<std::pair<int, std::size_t>> lattice_stats(int n);
void write_lattice_csv(std::ostream& out,
                       const std::vector<std::pair<int, std::size_t>>& stats);

}  // namespace belief::experiment
