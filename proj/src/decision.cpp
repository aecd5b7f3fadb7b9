#include "belief/decision.hpp"

#include <algorithm>
#include <cmath>

#include "belief/mass_io.hpp"

namespace belief {
namespace {

template <typename Element>
using Scores = std::vector<std::pair<Element, double>>;

template <typename Element>
std::size_t select_best_impl(const Frame& frame, const Scores<Element>& scores) {
  if (scores.empty()) throw std::invalid_argument("no decision candidates");
  double best = scores.front().second;
  for (const auto& [x, s] : scores) best = std::max(best, s);
  const double slack = kTieTolerance * std::max(1.0, std::abs(best));
  std::size_t chosen = scores.size();
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k].second < best - slack) continue;
    if (chosen == scores.size()) {
      chosen = k;
      continue;
    }
    const auto& a = scores[k].first;
    const auto& b = scores[chosen].first;
    if (a.cardinality() != b.cardinality()) {
      if (a.cardinality() > b.cardinality()) chosen = k;
    } else if (canonical_less(frame, a, b)) {
      chosen = k;
    }
  }
  return chosen;
}

template <typename Element>
void sort_canonical(const Frame& frame, Scores<Element>& scores) {
  std::stable_sort(scores.begin(), scores.end(),
                   [&](const auto& a, const auto& b) {
                     return canonical_less(frame, a.first, b.first);
                   });
}

double element_weight(const Frame& frame, const DecisionConfig& cfg,
                      const auto& x) {
  if (cfg.element_weights.empty()) return 1.0;
  const auto it = cfg.element_weights.find(format_element(frame, x));
  return it == cfg.element_weights.end() ? 1.0 : it->second;
}

double specificity_weight(int cardinality, double r) {
  return 1.0 / std::pow(static_cast<double>(cardinality), r);
}

}  // namespace

void DecisionConfig::validate() const {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("decision parameter r must lie in [0,1]");
  }
  for (const auto& [element, weight] : element_weights) {
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument("element weight for '" + element +
                                  "' must be positive");
    }
  }
  if (window && (window->min_s < 1 || window->min_s > window->max_s)) {
    throw std::invalid_argument("invalid specificity window");
  }
}

std::size_t select_best(const Frame& frame, const Scores<PowerElement>& scores) {
  return select_best_impl(frame, scores);
}

std::size_t select_best(const Frame& frame, const Scores<HyperElement>& scores) {
  return select_best_impl(frame, scores);
}

PowerDecision decide_pignistic(const PowerMass& m) {
  const Frame& frame = m.frame();
  PowerDecision out;
  for (int i = 0; i < frame.size(); ++i) {
    const auto x = frame.power_singleton(i);
    out.scores.emplace_back(x, betp(m, x));
  }
  sort_canonical(frame, out.scores);
  out.verdict = out.scores[select_best(frame, out.scores)].first;
  return out;
}

PowerDecision decide_maxbel_reject(const PowerMass& m) {
  const Frame& frame = m.frame();
  PowerDecision out;
  for (int i = 0; i < frame.size(); ++i) {
    const auto x = frame.power_singleton(i);
    out.scores.emplace_back(x, bel(m, x));
  }
  sort_canonical(frame, out.scores);
  const auto& [best, best_bel] = out.scores[select_best(frame, out.scores)];
  if (best_bel >= bel(m, best.complement())) out.verdict = best;
  return out;
}

PowerDecision decide_weighted_power(const PowerMass& m, const DecisionConfig& cfg) {
  cfg.validate();
  const Frame& frame = m.frame();
  const int n = frame.size();
  PowerDecision out;
  double weight_sum = 0.0;
  for (std::uint32_t bits = 1; bits < (std::uint32_t{1} << n); ++bits) {
    const PowerElement x(n, bits);
    if (cfg.window && !cfg.window->contains(x.cardinality())) continue;
    double f = 0.0;
    switch (cfg.function) {
      case DecisionFunction::credibility: f = bel(m, x); break;
      case DecisionFunction::plausibility: f = pl(m, x); break;
      case DecisionFunction::pignistic: f = betp(m, x); break;
    }
    const double w =
        element_weight(frame, cfg, x) * specificity_weight(x.cardinality(), cfg.r);
    weight_sum += w;
    out.scores.emplace_back(x, w * f);
  }
  if (out.scores.empty()) throw std::invalid_argument("empty candidate set");
  out.normalizer = 1.0 / weight_sum;
  sort_canonical(frame, out.scores);
  out.verdict = out.scores[select_best(frame, out.scores)].first;
  return out;
}

PowerDecision decide_two_step(const PowerMass& m, const DecisionConfig& cfg) {
  if (cfg.order == StepOrder::reject_then_weighted) {
    auto screen = decide_maxbel_reject(m);
    if (screen.rejected()) return screen;
    return decide_weighted_power(m, cfg);
  }
  auto weighted = decide_weighted_power(m, cfg);
  if (weighted.verdict->cardinality() == 1) return weighted;
  return decide_maxbel_reject(m);
}

HyperDecision decide_hyper_weighted(const HyperMass& m, const DecisionConfig& cfg) {
  cfg.validate();
  if (cfg.function == DecisionFunction::plausibility) {
    throw std::invalid_argument(
        "plausibility is constant in the free hyper-power set; use "
        "credibility or pignistic");
  }
  const Frame& frame = m.frame();
  std::vector<HyperElement> candidates;
  if (cfg.window) {
    candidates = elements_in_window(frame, *cfg.window);
  } else {
    const auto all = frame.hyper_elements();
    candidates.assign(all.begin(), all.end());
  }
  if (candidates.empty()) throw std::invalid_argument("empty candidate set");
  const bool weighted = !cfg.window || cfg.window->min_s != cfg.window->max_s;

  HyperDecision out;
  out.scores.reserve(candidates.size());
  double weight_sum = 0.0;
  for (const auto& x : candidates) {
    const double f = cfg.function == DecisionFunction::credibility ? bel(m, x)
                                                                    : gpt(m, x);
    double w = element_weight(frame, cfg, x);
    if (weighted) w *= specificity_weight(x.cardinality(), cfg.r);
    weight_sum += w;
    out.scores.emplace_back(x, w * f);
  }
  out.normalizer = 1.0 / weight_sum;
  out.verdict = out.scores[select_best(frame, out.scores)].first;
  // Full enumerations are already in cardinality order; canonical sorting of
  // thousands of candidates is only worth it for listings.
  if (out.scores.size() <= 64) sort_canonical(frame, out.scores);
  return out;
}

HyperDecision decide_reject_then_hyper(const PowerMass& m_power,
                                       const HyperMass& m_hyper,
                                       const DecisionConfig& cfg) {
  if (!(m_power.frame() == m_hyper.frame())) throw FrameMismatch();
  if (decide_maxbel_reject(m_power).rejected()) return {};
  return decide_hyper_weighted(m_hyper, cfg);
}

HyperElement pairwise_overlap(const Frame& frame) {
  if (frame.size() != 3) {
    throw std::invalid_argument("pairwise overlap is defined for three classes");
  }
  const auto c1 = frame.singleton(0);
  const auto c2 = frame.singleton(1);
  const auto c3 = frame.singleton(2);
  return (c1 & c2) | (c1 & c3) | (c2 & c3);
}

Cardinality4Outcome decide_cardinality4(const HyperMass& m_hyper,
                                        const PowerMass& m_power) {
  const Frame& frame = m_hyper.frame();
  if (frame.size() != 3) {
    throw std::invalid_argument("cardinality-4 decision needs three classes");
  }
  if (!(m_power.frame() == frame)) throw FrameMismatch();
  DecisionConfig cfg;
  cfg.function = DecisionFunction::pignistic;
  cfg.window = SpecificityWindow{4, 4};
  Cardinality4Outcome out{decide_hyper_weighted(m_hyper, cfg),
                          decide_maxbel_reject(m_power), false};
  const auto overlap = pairwise_overlap(frame);
  if (out.reference.rejected()) {
    out.agrees = *out.hyper.verdict == overlap;
  } else {
    out.agrees = *out.hyper.verdict == embed_power(*out.reference.verdict);
  }
  return out;
}

std::string to_string(DecisionFunction function) {
  switch (function) {
    case DecisionFunction::credibility: return "credibility";
    case DecisionFunction::plausibility: return "plausibility";
    case DecisionFunction::pignistic: return "pignistic";
  }
  return "?";
}

DecisionFunction decision_function_from_string(const std::string& name) {
  if (name == "credibility") return DecisionFunction::credibility;
  if (name == "plausibility") return DecisionFunction::plausibility;
  if (name == "pignistic") return DecisionFunction::pignistic;
  throw std::invalid_argument("unknown decision function '" + name + "'");
}

namespace {

template <typename Element>
std::string report_json(const Frame& frame, const DecisionOutcome<Element>& d,
                        const std::string& rule, const DecisionConfig& cfg) {
  std::string out = "{\"verdict\":";
  out += json_quote(d.verdict ? format_element(frame, *d.verdict) : "REJECT");
  out += ",\"scores\":{";
  for (std::size_t k = 0; k < d.scores.size(); ++k) {
    if (k) out += ',';
    out += json_quote(format_element(frame, d.scores[k].first));
    out += ':';
    out += format_real(d.scores[k].second);
  }
  out += "},\"rule\":" + json_quote(rule);
  out += ",\"r\":" + format_real(cfg.r);
  out += ",\"window\":";
  if (cfg.window) {
    out += '[' + std::to_string(cfg.window->min_s) + ',' +
           std::to_string(cfg.window->max_s) + ']';
  } else {
    out += "null";
  }
  out += '}';
  return out;
}

}  // namespace

std::string decision_report_json(const Frame& frame, const PowerDecision& d,
                                 const std::string& rule,
                                 const DecisionConfig& cfg) {
  return report_json(frame, d, rule, cfg);
}

std::string decision_report_json(const Frame& frame, const HyperDecision& d,
                                 const std::string& rule,
                                 const DecisionConfig& cfg) {
  return report_json(frame, d, rule, cfg);
}

}  // namespace belief
