#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "belief/decision.hpp"
#include "oracles.hpp"

namespace {

using belief::DecisionConfig;
using belief::DecisionFunction;
using belief::Frame;
using belief::HyperElement;
using belief::HyperMass;
using belief::PowerElement;
using belief::PowerMass;

PowerElement P(const Frame& f, std::string_view s) { return belief::parse_power(f, s); }
HyperElement H(const Frame& f, std::string_view s) { return belief::parse_hyper(f, s); }

PowerMass power_mass(const Frame& f,
                     std::initializer_list<std::pair<const char*, double>> items) {
  std::vector<PowerMass::Focal> focal;
  for (auto [s, m] : items) focal.emplace_back(P(f, s), m);
  return PowerMass(f, std::move(focal));
}

HyperMass hyper_mass(const Frame& f,
                     std::initializer_list<std::pair<const char*, double>> items) {
  std::vector<HyperMass::Focal> focal;
  for (auto [s, m] : items) focal.emplace_back(H(f, s), m);
  return HyperMass(f, std::move(focal));
}

std::string verdict(const Frame& f, const belief::PowerDecision& d) {
  return d.rejected() ? "REJECT" : belief::format_element(f, *d.verdict);
}
std::string verdict(const Frame& f, const belief::HyperDecision& d) {
  return d.rejected() ? "REJECT" : belief::format_element(f, *d.verdict);
}

double score_of(const auto& d, const auto& x) {
  for (const auto& [y, s] : d.scores) {
    if (y == x) return s;
  }
  ADD_FAILURE() << "element not scored";
  return NAN;
}

TEST(MaxBelReject, BayesianExamples) {
  const auto f = oracle::numbered_frame(3);
  const auto a = power_mass(f, {{"C1", 0.4}, {"C2", 0.35}, {"C3", 0.25}});
  const auto b = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  EXPECT_TRUE(belief::decide_maxbel_reject(a).rejected());
  EXPECT_EQ(verdict(f, belief::decide_maxbel_reject(b)), "C1");
  EXPECT_EQ(verdict(f, belief::decide_pignistic(a)), "C1");
}

TEST(Weighted, TwoClassPlausibility) {
  const auto f = oracle::numbered_frame(2);
  const auto m = power_mass(f, {{"C1", 0.3}, {"C1|C2", 0.7}});
  DecisionConfig cfg{.r = 0.5, .function = DecisionFunction::plausibility};
  const auto d = belief::decide_weighted_power(m, cfg);
  EXPECT_NEAR(score_of(d, P(f, "C1")), 1.0, 1e-12);
  EXPECT_NEAR(score_of(d, P(f, "C2")), 0.7, 1e-12);
  EXPECT_NEAR(score_of(d, P(f, "C1|C2")), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(verdict(f, d), "C1");
  EXPECT_NEAR(d.normalizer, 1.0 / (2.0 + 1.0 / std::sqrt(2.0)), 1e-12);
}

TEST(Weighted, BayesianUnionWins) {
  const auto f = oracle::numbered_frame(3);
  const auto m = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  DecisionConfig cfg{.r = 0.5, .function = DecisionFunction::plausibility};
  const auto d = belief::decide_weighted_power(m, cfg);
  EXPECT_NEAR(score_of(d, P(f, "C1|C2")), 0.9 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(verdict(f, d), "C1|C2");
  cfg.r = 1.0;
  EXPECT_EQ(verdict(f, belief::decide_weighted_power(m, cfg)), "C1");
}

TEST(Weighted, ElementWeightsScaleScores) {
  const auto f = oracle::numbered_frame(3);
  const auto m = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  DecisionConfig cfg{.r = 1.0, .function = DecisionFunction::credibility,
                     .element_weights = {{"C2", 3.0}}};
  const auto d = belief::decide_weighted_power(m, cfg);
  EXPECT_NEAR(score_of(d, P(f, "C2")), 0.9, 1e-12);
  EXPECT_EQ(verdict(f, d), "C2");
}

TEST(Weighted, InvalidConfigurationsThrow) {
  const auto f = oracle::numbered_frame(3);
  const auto m = power_mass(f, {{"C1", 1.0}});
  EXPECT_THROW(belief::decide_weighted_power(m, {.r = 1.5}), std::invalid_argument);
  EXPECT_THROW(belief::decide_weighted_power(m, {.element_weights = {{"C1", 0.0}}}),
               std::invalid_argument);
  const auto hm = belief::embed(m);
  EXPECT_THROW(belief::decide_hyper_weighted(hm, {.function = DecisionFunction::plausibility}),
               std::invalid_argument);
}

TEST(TwoStep, Examples) {
  const auto f = oracle::numbered_frame(3);
  DecisionConfig cfg{.r = 0.5, .function = DecisionFunction::plausibility};
  EXPECT_EQ(verdict(f, belief::decide_two_step(
                           power_mass(f, {{"C1", 0.4}, {"C2", 0.35}, {"C3", 0.25}}), cfg)),
            "REJECT");
  EXPECT_EQ(verdict(f, belief::decide_two_step(
                           power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}}), cfg)),
            "C1|C2");
  EXPECT_EQ(verdict(f, belief::decide_two_step(
                           power_mass(f, {{"C1", 0.9}, {"C1|C2|C3", 0.1}}), cfg)),
            "C1");
}

TEST(TwoStep, AlternativeOrderRejectsOnlyUnions) {
  const auto f = oracle::numbered_frame(3);
  DecisionConfig cfg{.r = 0.5, .function = DecisionFunction::plausibility,
                     .order = belief::StepOrder::weighted_then_reject};
  // The weighted stage keeps a singleton here even though max-bel would reject.
  const auto m = power_mass(f, {{"C1", 0.45}, {"C2", 0.3}, {"C3", 0.25}});
  EXPECT_TRUE(belief::decide_maxbel_reject(m).rejected());
  cfg.r = 1.0;
  EXPECT_EQ(verdict(f, belief::decide_two_step(m, cfg)), "C1");
  // A union from the weighted stage falls back to the reject test.
  cfg.r = 0.5;
  const auto u = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  EXPECT_EQ(verdict(f, belief::decide_two_step(u, cfg)), "C1");
}

TEST(HyperWeighted, WindowedGptExamples) {
  const auto f = oracle::numbered_frame(3);
  const auto m = hyper_mass(f, {{"C1&C2", 0.3}, {"C1", 0.4}, {"C1|C2|C3", 0.3}});
  DecisionConfig cfg{.function = DecisionFunction::pignistic,
                     .window = belief::SpecificityWindow{2, 2}};
  const auto d2 = belief::decide_hyper_weighted(m, cfg);
  EXPECT_EQ(d2.scores.size(), 3u);
  EXPECT_NEAR(score_of(d2, H(f, "C1&C2")), 0.3 + 0.2 + 0.6 / 7.0, 1e-12);
  EXPECT_NEAR(score_of(d2, H(f, "C1&C3")), 0.15 + 0.2 + 0.6 / 7.0, 1e-12);
  EXPECT_NEAR(score_of(d2, H(f, "C2&C3")), 0.15 + 0.1 + 0.6 / 7.0, 1e-12);
  EXPECT_NEAR(score_of(d2, H(f, "C1&C3")), 0.4357, 5e-5);
  EXPECT_NEAR(score_of(d2, H(f, "C2&C3")), 0.3357, 5e-5);
  EXPECT_EQ(verdict(f, d2), "C1&C2");

  cfg.window = belief::SpecificityWindow{4, 4};
  const auto d4 = belief::decide_hyper_weighted(m, cfg);
  EXPECT_EQ(d4.scores.size(), 4u);
  EXPECT_EQ(verdict(f, d4), "C1");
  EXPECT_NEAR(score_of(d4, H(f, "C1")), 0.3 + 0.4 + 1.2 / 7.0, 1e-12);
  // I2 shares 2 of 2 parts with C1&C2, 3 of 4 with C1 and 4 of 7 with Θ.
  EXPECT_NEAR(score_of(d4, belief::pairwise_overlap(f)), 0.3 + 0.3 + 1.2 / 7.0, 1e-12);
}

TEST(HyperWeighted, WholeLatticeCredibility) {
  const auto f = oracle::numbered_frame(3);
  const auto m = hyper_mass(f, {{"C1&C2", 0.3}, {"C1", 0.4}, {"C1|C2|C3", 0.3}});
  DecisionConfig cfg{.r = 0.0, .function = DecisionFunction::credibility};
  const auto d = belief::decide_hyper_weighted(m, cfg);
  EXPECT_EQ(d.scores.size(), 18u);
  EXPECT_EQ(verdict(f, d), "C1|C2|C3");
  cfg.r = 1.0;
  // bel/C_M: C1&C2 gives 0.15, C1 gives 0.175, C1&C2&C3 gives 0.
  EXPECT_EQ(verdict(f, belief::decide_hyper_weighted(m, cfg)), "C1");
}

TEST(Cardinality4, BayesianExamples) {
  const auto f = oracle::numbered_frame(3);
  const auto a = power_mass(f, {{"C1", 0.4}, {"C2", 0.35}, {"C3", 0.25}});
  const auto oa = belief::decide_cardinality4(belief::embed(a), a);
  EXPECT_EQ(*oa.hyper.verdict, belief::pairwise_overlap(f));
  EXPECT_NEAR(score_of(oa.hyper, belief::pairwise_overlap(f)), 0.75, 1e-12);
  EXPECT_NEAR(score_of(oa.hyper, f.singleton(0)), 0.70, 1e-12);
  EXPECT_TRUE(oa.reference.rejected());
  EXPECT_TRUE(oa.agrees);

  const auto b = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  const auto ob = belief::decide_cardinality4(belief::embed(b), b);
  EXPECT_EQ(*ob.hyper.verdict, f.singleton(0));
  EXPECT_NEAR(score_of(ob.hyper, f.singleton(0)), 0.8, 1e-12);
  EXPECT_TRUE(ob.agrees);
}

TEST(Cardinality4Property, RestrictedFocalMassesAlwaysAgree) {
  std::mt19937_64 rng(23);
  const auto f = oracle::numbered_frame(3);
  int compared = 0;
  for (int t = 0; t < 3000; ++t) {
    const auto w = oracle::simplex(rng, 4, 0.25);
    std::vector<PowerMass::Focal> focal;
    for (int i = 0; i < 3; ++i) {
      if (w[static_cast<std::size_t>(i)] > 0) {
        focal.emplace_back(f.power_singleton(i), w[static_cast<std::size_t>(i)]);
      }
    }
    if (w[3] > 0) focal.emplace_back(PowerElement::whole(3), w[3]);
    const PowerMass m(f, focal);
    // a_k = a_rest is the only tie in either rule.
    bool tie = false;
    for (int k = 0; k < 3; ++k) {
      const double a = m.mass(f.power_singleton(k));
      tie |= std::abs(2 * a - (1.0 - m.mass(PowerElement::whole(3)))) < 1e-9;
    }
    if (tie) continue;
    ++compared;
    ASSERT_TRUE(belief::decide_cardinality4(belief::embed(m), m).agrees);
  }
  EXPECT_GT(compared, 2500);
}

TEST(Cardinality4, RequiresThreeClasses) {
  const auto f = oracle::numbered_frame(4);
  const auto m = PowerMass::vacuous(f);
  EXPECT_THROW(belief::decide_cardinality4(belief::embed(m), m), std::invalid_argument);
  EXPECT_THROW(belief::pairwise_overlap(f), std::invalid_argument);
}

TEST(RejectThenHyper, RejectsBeforeTheHyperStage) {
  const auto f = oracle::numbered_frame(3);
  const auto a = power_mass(f, {{"C1", 0.4}, {"C2", 0.35}, {"C3", 0.25}});
  DecisionConfig cfg{.function = DecisionFunction::pignistic,
                     .window = belief::SpecificityWindow{2, 2}};
  EXPECT_TRUE(belief::decide_reject_then_hyper(a, belief::embed(a), cfg).rejected());
  const auto b = power_mass(f, {{"C1", 0.6}, {"C2", 0.3}, {"C3", 0.1}});
  EXPECT_EQ(verdict(f, belief::decide_reject_then_hyper(b, belief::embed(b), cfg)),
            "C1&C2");
}

TEST(Ties, LargerCardinalityThenCanonicalOrder) {
  const auto f = oracle::numbered_frame(3);
  const std::vector<std::pair<PowerElement, double>> scores = {
      {P(f, "C2"), 0.5}, {P(f, "C1"), 0.5}, {P(f, "C3"), 0.2}};
  EXPECT_EQ(belief::select_best(f, scores), 1u);
  const std::vector<std::pair<PowerElement, double>> with_union = {
      {P(f, "C1"), 0.5}, {P(f, "C1|C2"), 0.5 * (1 + 1e-14)}};
  EXPECT_EQ(belief::select_best(f, with_union), 1u);
  const std::vector<std::pair<PowerElement, double>> clear = {
      {P(f, "C1"), 0.5}, {P(f, "C1|C2"), 0.5 - 1e-9}};
  EXPECT_EQ(belief::select_best(f, clear), 0u);
}

TEST(DecisionProperty, EndpointsOfTheSpecificityExponent) {
  std::mt19937_64 rng(29);
  DecisionConfig cfg{.function = DecisionFunction::credibility};
  for (int n = 2; n <= 5; ++n) {
    const auto f = oracle::numbered_frame(n);
    for (int t = 0; t < 200; ++t) {
      const auto m = oracle::random_power_mass(f, rng);
      cfg.r = 0.0;
      ASSERT_EQ(*belief::decide_weighted_power(m, cfg).verdict, PowerElement::whole(n));
      const auto b = oracle::bayesian_mass(f, rng);
      cfg.r = 1.0;
      ASSERT_EQ(belief::decide_weighted_power(b, cfg).verdict->cardinality(), 1);
    }
  }
}

TEST(DecisionReport, JsonShape) {
  const auto f = oracle::numbered_frame(3);
  const auto m = power_mass(f, {{"C1", 0.4}, {"C2", 0.35}, {"C3", 0.25}});
  DecisionConfig cfg;
  const auto json = belief::decision_report_json(f, belief::decide_maxbel_reject(m),
                                                 "max-bel-reject", cfg);
  EXPECT_NE(json.find("\"verdict\":\"REJECT\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"window\":null"), std::string::npos) << json;
  EXPECT_EQ(belief::decision_function_from_string("credibility"),
            DecisionFunction::credibility);
  EXPECT_THROW(belief::decision_function_from_string("mystery"), std::invalid_argument);
}

}  // namespace
