#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "belief/mass.hpp"

namespace belief {

enum class DecisionFunction { credibility, plausibility, pignistic };

/// Order of the two stages in decide_two_step.
enum class StepOrder {
  reject_then_weighted,  // max-credibility reject, then weighted decision
  weighted_then_reject,  // weighted decision, then reject test on unions
};

struct DecisionConfig {
  /// Specificity exponent of the decision weight 1/|X|^r, in [0,1].
  double r = 0.5;
  DecisionFunction function = DecisionFunction::plausibility;
  /// Cardinality band of candidates; unset means the whole algebra.
  std::optional<SpecificityWindow> window;
  /// λ_X keyed by canonical element string. Missing elements weigh 1.
  std::map<std::string, double> element_weights;
  StepOrder order = StepOrder::reject_then_weighted;

  void validate() const;
};

template <typename Element>
struct DecisionOutcome {
  /// Chosen element; empty means REJECT.
  std::optional<Element> verdict;
  /// Score of every candidate, in canonical order. For weighted rules the
  /// scores are λ_X f_d(X) / |X|^r, i.e. m_d(X) f_d(X) without K_d.
  std::vector<std::pair<Element, double>> scores;
  /// K_d: normalizer of the decision weights over the candidate set.
  double normalizer = 1.0;

  bool rejected() const noexcept { return !verdict.has_value(); }
};

using PowerDecision = DecisionOutcome<PowerElement>;
using HyperDecision = DecisionOutcome<HyperElement>;

/// Relative slack under which two scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Index of the best score. Ties go to the larger cardinality, then to the
/// canonically smaller element.
std::size_t select_best(const Frame& frame,
                        const std::vector<std::pair<PowerElement, double>>& scores);
std::size_t select_best(const Frame& frame,
                        const std::vector<std::pair<HyperElement, double>>& scores);

/// Maximum of betP over the singletons (closed world, never rejects).
PowerDecision decide_pignistic(const PowerMass& m);

/// Maximum credibility over singletons; rejects when bel(C_k) < bel(C_k^c).
PowerDecision decide_maxbel_reject(const PowerMass& m);

/// argmax over nonempty X ∈ 2^Θ of f_d(X) λ_X / |X|^r.
PowerDecision decide_weighted_power(const PowerMass& m, const DecisionConfig& cfg);

/// Reject test and weighted decision chained in cfg.order.
PowerDecision decide_two_step(const PowerMass& m, const DecisionConfig& cfg);

/// argmax over D^Θ (or the cfg window) of f_d(X) λ_X / C_M(X)^r. A window of a
/// single cardinality ranks the raw f_d. Plausibility is refused: it is
/// identically 1 in the free model.
HyperDecision decide_hyper_weighted(const HyperMass& m, const DecisionConfig& cfg);

/// Reject in 2^Θ with max-credibility, then decide in D^Θ on the rest.
HyperDecision decide_reject_then_hyper(const PowerMass& m_power,
                                       const HyperMass& m_hyper,
                                       const DecisionConfig& cfg);

struct Cardinality4Outcome {
  HyperDecision hyper;      // GPT argmax over {C1, C2, C3, I2}
  PowerDecision reference;  // decide_maxbel_reject on the power mass
  bool agrees;              // same singleton, or I2 against REJECT
};

/// Three-class frames only.
Cardinality4Outcome decide_cardinality4(const HyperMass& m_hyper,
                                        const PowerMass& m_power);

/// (C1∩C2) ∪ (C1∩C3) ∪ (C2∩C3) for a three-class frame.
HyperElement pairwise_overlap(const Frame& frame);

std::string to_string(DecisionFunction function);
DecisionFunction decision_function_from_string(const std::string& name);

/// {"verdict":...,"scores":{...},"rule":...,"r":...,"window":[min,max]}
/// "window" is null when unset.
std::string decision_report_json(const Frame& frame, const PowerDecision& d,
                                 const std::string& rule,
                                 const DecisionConfig& cfg);
std::string decision_report_json(const Frame& frame, const HyperDecision& d,
                                 const std::string& rule,
                                 const DecisionConfig& cfg);

}  // namespace belief
