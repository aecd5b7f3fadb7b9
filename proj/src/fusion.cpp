#include "belief/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace belief::fusion {

std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

std::size_t pair_index(int n, int i, int j) {
  if (i < 0 || j >= n || i >= j) {
    throw std::out_of_range("invalid class pair");
  }
  // Pairs starting with a < i come first: Σ_{a<i} (n-1-a).
  const std::size_t before =
      static_cast<std::size_t>(i) * (2 * n - i - 1) / 2;
  return before + static_cast<std::size_t>(j - i - 1);
}

std::vector<std::pair<int, int>> class_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

LambdaFit fit_lambdas(std::span<const double> scores, LambdaDivisor divisor) {
  if (scores.empty()) throw std::invalid_argument("no training scores");
  double positive = 0.0;
  double negative = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  for (double f : scores) {
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite score");
    if (f >= 0.0) {
      positive += f;
      if (f > 0.0) ++n_positive;
    } else {
      negative += f;
      ++n_negative;
    }
  }
  if (n_positive == 0 || n_negative == 0) {
    throw NumericError(
        "λ fit needs strictly positive and strictly negative training scores");
  }
  const std::size_t l = scores.size();
  if (divisor == LambdaDivisor::all_samples) {
    return {positive / static_cast<double>(l), negative / static_cast<double>(l), l};
  }
  // Zero scores belong to the nonnegative side of the indicator.
  const auto n_nonnegative = l - n_negative;
  return {positive / static_cast<double>(n_nonnegative),
          negative / static_cast<double>(n_negative), l};
}

void PairParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1]");
  }
  if (!(lambda_p > 0.0) || !std::isfinite(lambda_p)) {
    throw std::invalid_argument("lambda_p must be positive");
  }
  if (!(lambda_n < 0.0) || !std::isfinite(lambda_n)) {
    throw std::invalid_argument("lambda_n must be negative");
  }
}

const PairParams& MassModelParams::pair(int n, int i, int j) const {
  const auto k = pair_index(n, i, j);
  if (k >= pairs.size() || pairs[k].i != i || pairs[k].j != j) {
    throw std::invalid_argument("mass model has no parameters for pair (" +
                                std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
  }
  return pairs[k];
}

void MassModelParams::validate(int n) const {
  if (pairs.size() != pair_count(n)) {
    throw std::invalid_argument("mass model needs one entry per class pair");
  }
  for (const auto& [i, j] : class_pairs(n)) pair(n, i, j).validate();
}

PairMasses pairwise_masses(double f, const PairParams& p,
                           MassModelVariant variant) {
  if (std::isnan(f)) throw std::invalid_argument("score is NaN");
  const double a = p.alpha;
  // Both exponents are ≤ 0 on their branch, so the exponentials are in (0,1].
  if (variant == MassModelVariant::verbatim) {
    if (f >= 0.0) {
      const double e = std::exp(-f / p.lambda_p);
      return {a * (1.0 - e), a * e, 1.0 - a};
    }
    const double e = std::exp(-f / p.lambda_n);
    return {a * e, a * (1.0 - e), 1.0 - a};
  }
  if (f >= 0.0) {
    const double e = 0.5 * std::exp(-f / p.lambda_p);
    return {a * (1.0 - e), a * e, 1.0 - a};
  }
  const double e = 0.5 * std::exp(-f / p.lambda_n);
  return {a * e, a * (1.0 - e), 1.0 - a};
}

PowerMass pairwise_mass(const Frame& frame, double f, const PairParams& p,
                        MassModelVariant variant) {
  p.validate();
  const int n = frame.size();
  if (p.i < 0 || p.j >= n || p.i >= p.j) {
    throw std::invalid_argument("pair indices outside the frame");
  }
  const auto masses = pairwise_masses(f, p, variant);
  return PowerMass(frame, {{frame.power_singleton(p.i), masses.on_i},
                           {frame.power_singleton(p.j), masses.on_j},
                           {PowerElement::whole(n), masses.on_theta}});
}

namespace {

std::vector<PowerMass> pair_masses(const Frame& frame,
                                   const PairwiseScores& scores,
                                   const MassModelParams& params) {
  const int n = frame.size();
  if (scores.f.size() != pair_count(n)) {
    throw std::invalid_argument("observation '" + scores.obs_id +
                                "' lacks some pairwise scores");
  }
  std::vector<PowerMass> masses;
  for (const auto& [i, j] : class_pairs(n)) {
    masses.push_back(pairwise_mass(frame, scores.f[pair_index(n, i, j)],
                                   params.pair(n, i, j), params.variant));
  }
  return masses;
}

}  // namespace

PowerMass fuse_power(const Frame& frame, const PairwiseScores& scores,
                     const MassModelParams& params) {
  return dempster(pair_masses(frame, scores, params));
}

HyperMass fuse_hyper(const Frame& frame, const PairwiseScores& scores,
                     const MassModelParams& params) {
  std::vector<HyperMass> masses;
  for (const auto& m : pair_masses(frame, scores, params)) {
    masses.push_back(embed(m));
  }
  return conjunctive_combine(masses);
}

AnyMass fuse_observation(const Frame& frame, const PairwiseScores& scores,
                         const MassModelParams& params, Algebra algebra) {
  if (algebra == Algebra::power) return fuse_power(frame, scores, params);
  return fuse_hyper(frame, scores, params);
}

MassModelParams fit_mass_model(const Frame& frame,
                               std::span<const PairwiseScores> training,
                               double alpha, LambdaDivisor divisor,
                               MassModelVariant variant) {
  const int n = frame.size();
  MassModelParams params;
  params.alpha = alpha;
  params.variant = variant;
  params.divisor = divisor;
  for (const auto& [i, j] : class_pairs(n)) {
    std::vector<double> column;
    column.reserve(training.size());
    for (const auto& obs : training) {
      if (obs.f.size() != pair_count(n)) {
        throw std::invalid_argument("training observation lacks pair scores");
      }
      column.push_back(obs.f[pair_index(n, i, j)]);
    }
    const auto fit = fit_lambdas(column, divisor);
    params.pairs.push_back({i, j, alpha, fit.lambda_p, fit.lambda_n, fit.l});
  }
  params.validate(n);
  return params;
}

// ---------------------------------------------------------------------------
// Linear scorer

LinearPairwiseScorer LinearPairwiseScorer::fit(
    const Frame& frame, std::span<const texture::FeatureRow> rows) {
  const int n = frame.size();
  constexpr std::size_t d = 6;
  // Accumulation runs over rows sorted by value so the fit does not depend on
  // the order of the training set.
  std::vector<std::vector<std::array<double, d>>> by_class(n);
  for (const auto& row : rows) {
    const int c = frame.index_of(row.label);
    if (c < 0) {
      throw std::invalid_argument("training label '" + row.label +
                                  "' is not in the frame");
    }
    by_class[c].push_back(row.features.values());
  }
  std::vector<std::array<double, d>> all;
  for (int c = 0; c < n; ++c) {
    if (by_class[c].size() < 2) {
      throw std::invalid_argument("class '" + frame.label(c) +
                                  "' needs at least two training rows");
    }
    std::sort(by_class[c].begin(), by_class[c].end());
    all.insert(all.end(), by_class[c].begin(), by_class[c].end());
  }
  std::sort(all.begin(), all.end());

  std::array<double, d> mean{};
  std::array<double, d> scale{};
  for (const auto& x : all) {
    for (std::size_t k = 0; k < d; ++k) mean[k] += x[k];
  }
  for (auto& v : mean) v /= static_cast<double>(all.size());
  for (const auto& x : all) {
    for (std::size_t k = 0; k < d; ++k) {
      scale[k] += (x[k] - mean[k]) * (x[k] - mean[k]);
    }
  }
  for (auto& v : scale) {
    v = std::sqrt(v / static_cast<double>(all.size()));
    if (!(v > 0.0)) v = 1.0;
  }

  std::vector<std::array<double, d>> class_mean(n);
  std::vector<std::array<double, d>> class_ss(n);
  for (int c = 0; c < n; ++c) {
    class_mean[c] = {};
    class_ss[c] = {};
    for (const auto& x : by_class[c]) {
      for (std::size_t k = 0; k < d; ++k) {
        class_mean[c][k] += (x[k] - mean[k]) / scale[k];
      }
    }
    for (auto& v : class_mean[c]) v /= static_cast<double>(by_class[c].size());
    for (const auto& x : by_class[c]) {
      for (std::size_t k = 0; k < d; ++k) {
        const double z = (x[k] - mean[k]) / scale[k] - class_mean[c][k];
        class_ss[c][k] += z * z;
      }
    }
  }

  std::vector<Line> lines;
  for (const auto& [i, j] : class_pairs(n)) {
    const double dof =
        static_cast<double>(by_class[i].size() + by_class[j].size() - 2);
    Line line{i, j, {}, 0.0};
    bool any_variance = false;
    for (std::size_t k = 0; k < d; ++k) {
      const double pooled = (class_ss[i][k] + class_ss[j][k]) / dof;
      if (pooled > 1e-12) {
        any_variance = true;
        line.w[k] = (class_mean[i][k] - class_mean[j][k]) / pooled;
      }
      line.b -= line.w[k] * 0.5 * (class_mean[i][k] + class_mean[j][k]);
    }
    if (!any_variance) {
      throw NumericError("classes '" + frame.label(i) + "' and '" +
                         frame.label(j) + "' have zero variance in every feature");
    }
    lines.push_back(line);
  }
  return LinearPairwiseScorer(frame, mean, scale, std::move(lines));
}

PairwiseScores LinearPairwiseScorer::score(const std::string& obs_id,
                                           const texture::FeatureVector& x) const {
  const auto v = x.values();
  std::array<double, 6> z{};
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = (v[k] - mean_[k]) / scale_[k];
  PairwiseScores out{obs_id, {}};
  out.f.reserve(lines_.size());
  for (const auto& line : lines_) {
    double f = line.b;
    for (std::size_t k = 0; k < z.size(); ++k) f += line.w[k] * z[k];
    out.f.push_back(f);
  }
  return out;
}

namespace {

std::string real_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format_real(values[k]);
  }
  return out + ']';
}

std::array<double, 6> six(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 6) throw Error("expected 6 feature coefficients");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

}  // namespace

std::string LinearPairwiseScorer::to_json() const {
  std::string out = "{\"frame\":[";
  for (int i = 0; i < frame_.size(); ++i) {
    if (i) out += ',';
    out += json_quote(frame_.label(i));
  }
  out += "],\"mean\":" + real_array(mean_);
  out += ",\"scale\":" + real_array(scale_);
  out += ",\"pairs\":[";
  for (std::size_t k = 0; k < lines_.size(); ++k) {
    if (k) out += ',';
    out += "{\"i\":" + std::to_string(lines_[k].i + 1);
    out += ",\"j\":" + std::to_string(lines_[k].j + 1);
    out += ",\"w\":" + real_array(lines_[k].w);
    out += ",\"b\":" + format_real(lines_[k].b) + '}';
  }
  return out + "]}";
}

LinearPairwiseScorer LinearPairwiseScorer::from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Frame frame(doc.at("frame").get<std::vector<std::string>>());
    const int n = frame.size();
    std::vector<Line> lines;
    for (const auto& p : doc.at("pairs")) {
      lines.push_back({p.at("i").get<int>() - 1, p.at("j").get<int>() - 1,
                       six(p.at("w")), p.at("b").get<double>()});
    }
    if (lines.size() != pair_count(n)) throw Error("scorer lacks some pairs");
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (pair_index(n, lines[k].i, lines[k].j) != k) {
        throw Error("scorer pairs out of order");
      }
    }
    return LinearPairwiseScorer(frame, six(doc.at("mean")), six(doc.at("scale")),
                                std::move(lines));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid scorer JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(std::string("invalid scorer JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Files

void write_score_csv(std::ostream& out, int n,
                     std::span<const PairwiseScores> scores) {
  out << "obs_id,i,j,f\n";
  for (const auto& obs : scores) {
    for (const auto& [i, j] : class_pairs(n)) {
      out << obs.obs_id << ',' << i + 1 << ',' << j + 1 << ','
          << format_real(obs.f.at(pair_index(n, i, j))) << '\n';
    }
  }
}

std::vector<PairwiseScores> read_score_csv(std::istream& in, int n) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty score CSV");
  std::vector<PairwiseScores> out;
  std::vector<std::vector<bool>> seen;
  std::map<std::string, std::size_t> position;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const std::string where = "score CSV line " + std::to_string(line_no);
    if (fields.size() != 4) throw Error(where + ": expected 4 fields");
    int i = 0;
    int j = 0;
    double f = 0.0;
    try {
      i = std::stoi(fields[1]) - 1;
      j = std::stoi(fields[2]) - 1;
      f = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw Error(where + ": bad number");
    }
    if (i < 0 || j >= n || i >= j) throw Error(where + ": invalid pair");
    auto [it, inserted] = position.try_emplace(fields[0], out.size());
    if (inserted) {
      out.push_back({fields[0], std::vector<double>(pair_count(n), 0.0)});
      seen.emplace_back(pair_count(n), false);
    }
    const auto k = pair_index(n, i, j);
    if (seen[it->second][k]) throw Error(where + ": duplicate pair");
    seen[it->second][k] = true;
    out[it->second].f[k] = f;
  }
  for (std::size_t o = 0; o < out.size(); ++o) {
    if (std::find(seen[o].begin(), seen[o].end(), false) != seen[o].end()) {
      throw Error("observation '" + out[o].obs_id + "' lacks some pairs");
    }
  }
  return out;
}

std::string params_to_json(const MassModelParams& params) {
  std::string out = "{\"alpha\":" + format_real(params.alpha);
  out += ",\"variant\":" + json_quote(to_string(params.variant));
  out += ",\"divisor\":" + json_quote(to_string(params.divisor));
  out += ",\"pairs\":[";
  for (std::size_t k = 0; k < params.pairs.size(); ++k) {
    const auto& p = params.pairs[k];
    if (k) out += ',';
    out += "{\"i\":" + std::to_string(p.i + 1);
    out += ",\"j\":" + std::to_string(p.j + 1);
    out += ",\"lambda_p\":" + format_real(p.lambda_p);
    out += ",\"lambda_n\":" + format_real(p.lambda_n);
    out += ",\"alpha\":" + format_real(p.alpha);
    out += ",\"l\":" + std::to_string(p.l) + '}';
  }
  return out + "]}";
}

MassModelParams params_from_json(std::string_view text, int n) {
  try {
    const auto doc = nlohmann::json::parse(text);
    MassModelParams params;
    params.alpha = doc.at("alpha").get<double>();
    params.variant = variant_from_string(doc.value("variant", "verbatim"));
    params.divisor = divisor_from_string(doc.value("divisor", "all"));
    std::vector<PairParams> pairs(pair_count(n));
    std::vector<bool> seen(pairs.size(), false);
    for (const auto& p : doc.at("pairs")) {
      PairParams pp;
      pp.i = p.at("i").get<int>() - 1;
      pp.j = p.at("j").get<int>() - 1;
      pp.alpha = p.value("alpha", params.alpha);
      pp.lambda_p = p.at("lambda_p").get<double>();
      pp.lambda_n = p.at("lambda_n").get<double>();
      pp.l = p.value("l", std::size_t{0});
      const auto k = pair_index(n, pp.i, pp.j);
      if (seen[k]) throw Error("duplicate pair in params");
      seen[k] = true;
      pairs[k] = pp;
    }
    params.pairs = std::move(pairs);
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw Error("params lack some class pairs");
    }
    params.validate(n);
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid params JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(std::string("invalid params JSON: ") + e.what());
  }
}

std::string to_string(MassModelVariant variant) {
  return variant == MassModelVariant::verbatim ? "verbatim" : "continuous";
}

MassModelVariant variant_from_string(const std::string& name) {
  if (name == "verbatim") return MassModelVariant::verbatim;
  if (name == "continuous") return MassModelVariant::continuous;
  throw std::invalid_argument("unknown mass model variant '" + name + "'");
}

std::string to_string(LambdaDivisor divisor) {
  return divisor == LambdaDivisor::all_samples ? "all" : "per_sign";
}

LambdaDivisor divisor_from_string(const std::string& name) {
  if (name == "all") return LambdaDivisor::all_samples;
  if (name == "per_sign") return LambdaDivisor::per_sign;
  throw std::invalid_argument("unknown lambda divisor '" + name + "'");
}

}  // namespace belief::fusion
