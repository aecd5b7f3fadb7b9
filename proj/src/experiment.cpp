#include "belief/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"

namespace belief::experiment {

// ---------------------------------------------------------------------------
// Synthetic textures

const ClassSpec& DatasetSpec::find(const std::string& name) const {
  for (const auto& c : classes) {
    if (c.name == name) return c;
  }
  throw ConfigError("dataset has no class '" + name + "'");
}

ClassSpec& DatasetSpec::find(const std::string& name) {
  return const_cast<ClassSpec&>(std::as_const(*this).find(name));
}

DatasetSpec default_dataset() {
  DatasetSpec spec;
  // Sand and silt are close in brightness and differ mostly in roughness;
  // their amplitude jitter makes a few imagettes ambiguous between them.
  spec.classes = {
      {"rock",
       {.kind = TextureKind::blobs, .mean = 120, .amplitude = 56,
        .correlation = 2.75, .detail = 5.5}},
      {"sand",
       {.kind = TextureKind::fine, .mean = 124, .amplitude = 24,
        .correlation = 0.8, .jitter = 0.08}},
      {"silt",
       {.kind = TextureKind::dark, .mean = 118, .amplitude = 15,
        .correlation = 1.05, .jitter = 0.08}},
      {"ripple",
       {.kind = TextureKind::ripple, .mean = 130, .amplitude = 21,
        .correlation = 2.4, .detail = 5, .period = 6, .noise = 18.5,
        .orientations = {90}},
       false},
  };
  spec.hetero_pairs = {
      {"sand", "rock"}, {"sand", "silt"}, {"silt", "ripple"}, {"sand", "ripple"}};
  return spec;
}

namespace {

/// Zero-mean, unit-variance Gaussian-smoothed white noise.
std::vector<double> smooth_noise(std::mt19937_64& rng, int side, double sigma) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t cells = static_cast<std::size_t>(side) * side;
  if (sigma <= 0.0) {
    std::vector<double> out(cells);
    for (double& v : out) v = normal(rng);
    return out;
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += kernel[k + radius];
  }
  double energy = 0.0;
  for (double& w : kernel) {
    w /= sum;
    energy += w * w;
  }
  const int wide = side + 2 * radius;
  std::vector<double> white(static_cast<std::size_t>(wide) * wide);
  for (double& v : white) v = normal(rng);
  std::vector<double> rows(static_cast<std::size_t>(wide) * side, 0.0);
  for (int r = 0; r < wide; ++r) {
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * radius; ++k) {
        acc += kernel[k] * white[static_cast<std::size_t>(r) * wide + c + k];
      }
      rows[static_cast<std::size_t>(r) * side + c] = acc;
    }
  }
  std::vector<double> out(cells, 0.0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * radius; ++k) {
        acc += kernel[k] * rows[static_cast<std::size_t>(r + k) * side + c];
      }
      // Separable smoothing scales the variance by energy².
      out[static_cast<std::size_t>(r) * side + c] = acc / energy;
    }
  }
  return out;
}

std::uint8_t to_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
                          std::uint32_t c, std::uint32_t d) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), a, b, c, d};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string padded(int k) {
  std::ostringstream ss;
  ss << std::setw(4) << std::setfill('0') << k;
  return ss.str();
}

}  // namespace

texture::Imagette render(const TextureParams& p, int side,
                         std::uint64_t seed, std::string id) {
  std::mt19937_64 rng(seed);
  texture::Imagette img{std::move(id), std::nullopt, side, {}};
  img.pixels.resize(static_cast<std::size_t>(side) * side);
  std::vector<double> field(img.pixels.size(), p.mean);
  double amplitude = p.amplitude;
  if (p.jitter > 0.0) {
    std::normal_distribution<double> normal(0.0, p.jitter);
    amplitude *= std::exp(normal(rng));
  }

  switch (p.kind) {
    case TextureKind::fine:
    case TextureKind::dark: {
      const auto noise = smooth_noise(rng, side, p.correlation);
      for (std::size_t k = 0; k < field.size(); ++k) {
        field[k] += amplitude * noise[k];
      }
      break;
    }
    case TextureKind::blobs: {
      // Soft-thresholded low-frequency noise gives plateaus with edges.
      const auto low = smooth_noise(rng, side, p.correlation);
      for (std::size_t k = 0; k < field.size(); ++k) {
        field[k] += amplitude * std::tanh(1.5 * low[k]);
      }
      break;
    }
    case TextureKind::ripple: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double phase = 2.0 * std::numbers::pi * unit(rng);
      double angle = p.orientations.empty() ? 90.0 : p.orientations.front();
      if (p.orientations.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, p.orientations.size() - 1);
        angle = p.orientations[pick(rng)];
      }
      // Crests along `angle`; intensity varies across them.
      const double across = (angle - 90.0) * std::numbers::pi / 180.0;
      const double dx = std::cos(across);
      const double dy = std::sin(across);
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          const double s = c * dx + r * dy;
          field[static_cast<std::size_t>(r) * side + c] +=
              amplitude * std::sin(2.0 * std::numbers::pi * s / p.period + phase);
        }
      }
      if (p.noise > 0.0) {
        const auto layer = smooth_noise(rng, side, p.correlation);
        for (std::size_t k = 0; k < field.size(); ++k) field[k] += p.noise * layer[k];
      }
      break;
    }
  }
  if (p.detail > 0.0) {
    const auto fine = smooth_noise(rng, side, 0.0);
    for (std::size_t k = 0; k < field.size(); ++k) field[k] += p.detail * fine[k];
  }
  for (std::size_t k = 0; k < field.size(); ++k) img.pixels[k] = to_pixel(field[k]);
  return img;
}

texture::Imagette split_imagette(const texture::Imagette& left,
                                 const texture::Imagette& right, std::string id) {
  left.validate();
  right.validate();
  if (left.side != right.side) {
    throw std::invalid_argument("split halves differ in size");
  }
  texture::Imagette out{std::move(id), std::nullopt, left.side, left.pixels};
  const int half = left.side / 2;
  for (int r = 0; r < left.side; ++r) {
    for (int c = half; c < left.side; ++c) {
      const auto k = static_cast<std::size_t>(r) * left.side + c;
      out.pixels[k] = right.pixels[k];
    }
  }
  return out;
}

Dataset generate(const DatasetSpec& spec) {
  struct Job {
    std::string id;
    std::string label;
    const TextureParams* first;
    std::uint64_t first_seed;
    const TextureParams* second;  // null for homogeneous imagettes
    std::uint64_t second_seed;
    bool train;
  };
  std::vector<Job> jobs;
  for (std::uint32_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    if (cls.learned) {
      for (int k = 0; k < spec.train_per_class; ++k) {
        jobs.push_back({"train-" + cls.name + "-" + padded(k), cls.name,
                        &cls.texture, stream_seed(spec.seed, 0, c, k, 0), nullptr,
                        0, true});
      }
    }
    for (int k = 0; k < spec.test_per_class; ++k) {
      jobs.push_back({"test-" + cls.name + "-" + padded(k), cls.name, &cls.texture,
                      stream_seed(spec.seed, 1, c, k, 0), nullptr, 0, false});
    }
  }
  for (std::uint32_t p = 0; p < spec.hetero_pairs.size(); ++p) {
    const auto& [a, b] = spec.hetero_pairs[p];
    const auto& first = spec.find(a);
    const auto& second = spec.find(b);
    const std::string label = a + "+" + b;
    for (int k = 0; k < spec.hetero_per_pair; ++k) {
      jobs.push_back({"test-" + label + "-" + padded(k), label, &first.texture,
                      stream_seed(spec.seed, 2, p, k, 0), &second.texture,
                      stream_seed(spec.seed, 2, p, k, 1), false});
    }
  }

  std::vector<texture::Imagette> images(jobs.size());
  detail::parallel_for(jobs.size(), [&](std::size_t k) {
    const auto& job = jobs[k];
    auto img = render(*job.first, spec.side, job.first_seed, job.id);
    if (job.second) {
      const auto other = render(*job.second, spec.side, job.second_seed, job.id);
      img = split_imagette(img, other, job.id);
    }
    img.label = job.label;
    images[k] = std::move(img);
  });

  Dataset data;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    (jobs[k].train ? data.train : data.test).push_back(std::move(images[k]));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  try {
    Frame f(frame);
    for (const auto& label : frame) {
      if (!dataset.find(label).learned) {
        throw ConfigError("frame class '" + label + "' is marked unlearned");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // The cardinality-4 rule and the report columns assume three classes.
  if (frame.size() != 3) throw ConfigError("the frame must name exactly three classes");
  for (const auto& spec : dataset.classes) {
    if (spec.learned && std::find(frame.begin(), frame.end(), spec.name) == frame.end()) {
      throw ConfigError("learned class '" + spec.name + "' is missing from the frame");
    }
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
  if (levels != 4 && levels != 8 && levels != 16 && levels != 32) {
    throw ConfigError("q must be 4, 8, 16 or 32");
  }
  if (distance < 1 || distance >= dataset.side) {
    throw ConfigError("distance must be in [1, side)");
  }
  if (dataset.side < 4) throw ConfigError("side too small");
  if (dataset.train_per_class < 2 || dataset.test_per_class < 0 ||
      dataset.hetero_per_pair < 0) {
    throw ConfigError("invalid imagette counts");
  }
  try {
    decision.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig config_from_json(std::string_view text) {
  RunConfig cfg;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (doc.contains("frame")) cfg.frame = doc["frame"].get<std::vector<std::string>>();
    cfg.alpha = doc.value("alpha", cfg.alpha);
    if (doc.contains("mass_model")) {
      cfg.variant = fusion::variant_from_string(doc["mass_model"].get<std::string>());
    }
    if (doc.contains("lambda_divisor")) {
      cfg.divisor =
          fusion::divisor_from_string(doc["lambda_divisor"].get<std::string>());
    }
    cfg.levels = doc.value("q", cfg.levels);
    cfg.distance = doc.value("distance", cfg.distance);
    cfg.dataset.side = doc.value("side", cfg.dataset.side);
    cfg.dataset.seed = doc.value("seed", cfg.dataset.seed);
    if (doc.contains("counts")) {
      const auto& counts = doc["counts"];
      cfg.dataset.train_per_class = counts.value("train", cfg.dataset.train_per_class);
      cfg.dataset.test_per_class = counts.value("test", cfg.dataset.test_per_class);
      cfg.dataset.hetero_per_pair = counts.value("hetero", cfg.dataset.hetero_per_pair);
    }
    if (doc.contains("hetero_pairs")) {
      cfg.dataset.hetero_pairs.clear();
      for (const auto& p : doc["hetero_pairs"]) {
        cfg.dataset.hetero_pairs.emplace_back(p.at(0).get<std::string>(),
                                              p.at(1).get<std::string>());
      }
    }
    if (doc.contains("textures")) {
      for (const auto& [name, t] : doc["textures"].items()) {
        auto& cls = cfg.dataset.find(name);
        auto& p = cls.texture;
        p.mean = t.value("mean", p.mean);
        p.amplitude = t.value("amplitude", p.amplitude);
        p.correlation = t.value("correlation", p.correlation);
        p.detail = t.value("detail", p.detail);
        p.period = t.value("period", p.period);
        p.noise = t.value("noise", p.noise);
        p.jitter = t.value("jitter", p.jitter);
        if (t.contains("orientations")) {
          p.orientations = t["orientations"].get<std::vector<double>>();
        }
      }
    }
    for (auto& cls : cfg.dataset.classes) {
      cls.learned = std::find(cfg.frame.begin(), cfg.frame.end(), cls.name) !=
                    cfg.frame.end();
    }
    cfg.rule = doc.value("rule", cfg.rule);
    cfg.decision.r = doc.value("r", cfg.decision.r);
    if (doc.contains("decision_function")) {
      cfg.decision.function = decision_function_from_string(
          doc["decision_function"].get<std::string>());
    }
    if (doc.contains("window") && !doc["window"].is_null()) {
      const auto w = doc["window"].get<std::vector<int>>();
      if (w.size() != 2) throw ConfigError("window must be [min,max]");
      cfg.decision.window = SpecificityWindow{w[0], w[1]};
    }
    if (doc.contains("step_order")) {
      const auto order = doc["step_order"].get<std::string>();
      if (order == "reject_first") {
        cfg.decision.order = StepOrder::reject_then_weighted;
      } else if (order == "weighted_first") {
        cfg.decision.order = StepOrder::weighted_then_reject;
      } else {
        throw ConfigError("unknown step_order '" + order + "'");
      }
    }
    if (doc.contains("weights")) {
      cfg.decision.element_weights =
          doc["weights"].get<std::map<std::string, double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  for (const auto& [a, b] : cfg.dataset.hetero_pairs) {
    cfg.dataset.find(a);
    cfg.dataset.find(b);
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Reports

ConfusionReport::ConfusionReport(std::string name, std::string title,
                                 std::vector<std::string> rows,
                                 std::vector<std::string> columns)
    : name(std::move(name)), title(std::move(title)), rows(std::move(rows)),
      columns(std::move(columns)),
      counts(this->rows.size(), std::vector<std::size_t>(this->columns.size(), 0)) {}

namespace {

std::size_t position(const std::vector<std::string>& items,
                     const std::string& value, const char* what) {
  const auto it = std::find(items.begin(), items.end(), value);
  if (it == items.end()) {
    throw std::out_of_range(std::string("report has no ") + what + " '" +
                            value + "'");
  }
  return static_cast<std::size_t>(it - items.begin());
}

}  // namespace

void ConfusionReport::add(const std::string& row, const std::string& column) {
  ++counts[position(rows, row, "row")][position(columns, column, "column")];
}

std::size_t ConfusionReport::count(const std::string& row,
                                   const std::string& column) const {
  return counts[position(rows, row, "row")][position(columns, column, "column")];
}

std::size_t ConfusionReport::row_total(const std::string& row) const {
  const auto& r = counts[position(rows, row, "row")];
  std::size_t total = 0;
  for (auto v : r) total += v;
  return total;
}

bool ConfusionReport::has_reject() const {
  return std::find(columns.begin(), columns.end(), kReject) != columns.end();
}

void ConfusionReport::write_csv(std::ostream& out) const {
  out << "truth";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r];
    for (auto v : counts[r]) out << ',' << v;
    out << '\n';
  }
}

void ConfusionReport::write_text(std::ostream& out) const {
  std::size_t first = 5;
  for (const auto& r : rows) first = std::max(first, r.size());
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(std::max<std::size_t>(c.size(), 5));
  out << title << '\n';
  out << std::left << std::setw(static_cast<int>(first)) << "truth";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << "  " << std::right << std::setw(static_cast<int>(width[c])) << columns[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(first)) << rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << "  " << std::right << std::setw(static_cast<int>(width[c]))
          << counts[r][c];
    }
    out << '\n';
  }
}

const ConfusionReport& ExperimentResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named '" + name + "'");
}

std::string ExperimentResult::summary_json() const {
  std::string out = "{\"agreement_homogeneous\":" + format_real(agreement_homogeneous);
  out += ",\"agreement_heterogeneous\":" + format_real(agreement_heterogeneous);
  out += ",\"reject_rate\":{";
  const auto& table = report("max_bel_reject");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r) out += ',';
    const auto total = table.row_total(table.rows[r]);
    const double rate =
        total == 0 ? 0.0
                   : static_cast<double>(table.count(table.rows[r], kReject)) / total;
    out += json_quote(table.rows[r]) + ':' + format_real(rate);
  }
  out += "},\"agreement_by_row\":{";
  for (std::size_t r = 0; r < agreement_by_row.size(); ++r) {
    if (r) out += ',';
    out += json_quote(agreement_by_row[r].first) + ':' +
           format_real(agreement_by_row[r].second);
  }
  out += "},\"observations\":" + std::to_string(observations.size()) + '}';
  return out;
}

// ---------------------------------------------------------------------------
// Experiment

std::vector<texture::FeatureRow> extract_features(
    std::span<const texture::Imagette> imagettes, int levels, int distance) {
  std::vector<texture::FeatureRow> rows(imagettes.size());
  detail::parallel_for(imagettes.size(), [&](std::size_t k) {
    const auto& img = imagettes[k];
    rows[k] = {img.id, img.label.value_or(""),
               texture::describe(img, levels, distance)};
  });
  return rows;
}

namespace {

template <typename Element>
std::vector<std::string> column_names(const Frame& frame,
                                      std::vector<Element> elements,
                                      bool with_reject) {
  std::sort(elements.begin(), elements.end(), [&](const auto& a, const auto& b) {
    return canonical_less(frame, a, b);
  });
  std::vector<std::string> out;
  for (const auto& x : elements) out.push_back(format_element(frame, x));
  if (with_reject) out.emplace_back(kReject);
  return out;
}

template <typename Element>
std::string verdict_name(const Frame& frame, const DecisionOutcome<Element>& d) {
  return d.verdict ? format_element(frame, *d.verdict) : kReject;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  return run_experiment(config, generate(config.dataset));
}

ExperimentResult run_experiment(const RunConfig& config, const Dataset& data) {
  config.validate();
  const Frame frame(config.frame);
  ExperimentResult result;
  result.train_features = extract_features(data.train, config.levels, config.distance);
  result.test_features = extract_features(data.test, config.levels, config.distance);

  const auto scorer =
      fusion::LinearPairwiseScorer::fit(frame, result.train_features);
  result.scorer_json = scorer.to_json();
  std::vector<fusion::PairwiseScores> train_scores;
  for (const auto& row : result.train_features) {
    train_scores.push_back(scorer.score(row.id, row.features));
  }
  result.params = fusion::fit_mass_model(frame, train_scores, config.alpha,
                                         config.divisor, config.variant);

  result.observations.resize(result.test_features.size());
  detail::parallel_for(result.test_features.size(), [&](std::size_t k) {
    const auto& row = result.test_features[k];
    auto scores = scorer.score(row.id, row.features);
    const auto power = fusion::fuse_power(frame, scores, result.params);
    const auto hyper = fusion::fuse_hyper(frame, scores, result.params);
    auto rec = evaluate_observation(frame, row.id, row.label, power, hyper);
    rec.scores = std::move(scores);
    result.observations[k] = std::move(rec);
  });
  assemble_reports(config, result);
  return result;
}

ObservationRecord evaluate_observation(const Frame& frame, std::string id,
                                       std::string truth, const PowerMass& power,
                                       const HyperMass& hyper) {
  if (frame.size() != 3) {
    throw ConfigError("the experiment tables need exactly three learned classes");
  }
  DecisionConfig two_step;
  two_step.r = 0.5;
  two_step.function = DecisionFunction::plausibility;
  DecisionConfig card2;
  card2.function = DecisionFunction::pignistic;
  card2.window = SpecificityWindow{2, 2};
  DecisionConfig weighted_cred;
  weighted_cred.r = 0.7;
  weighted_cred.function = DecisionFunction::credibility;
  weighted_cred.window = SpecificityWindow{2, 6};

  ObservationRecord rec;
  rec.id = std::move(id);
  rec.truth = std::move(truth);
  rec.power_mass_json = to_json(power);
  rec.hyper_mass_json = to_json(hyper);
  auto& v = rec.verdicts;
  v["pignistic"] = verdict_name(frame, decide_pignistic(power));
  v["max_bel_reject"] = verdict_name(frame, decide_maxbel_reject(power));
  v["two_step"] = verdict_name(frame, decide_two_step(power, two_step));
  const auto c4 = decide_cardinality4(hyper, power);
  v["gpt_card4"] = verdict_name(frame, c4.hyper);
  rec.card4_agrees = c4.agrees;
  v["gpt_card2"] = verdict_name(frame, decide_hyper_weighted(hyper, card2));
  v["gpt_card2_reject"] =
      verdict_name(frame, decide_reject_then_hyper(power, hyper, card2));
  v["weighted_credibility"] =
      verdict_name(frame, decide_hyper_weighted(hyper, weighted_cred));
  return rec;
}

void assemble_reports(const RunConfig& config, ExperimentResult& result) {
  const Frame frame(config.frame);
  std::sort(result.observations.begin(), result.observations.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  // Row sets: homogeneous test classes in dataset order, then the mixes.
  std::vector<std::string> homogeneous;
  for (const auto& cls : config.dataset.classes) {
    if (config.dataset.test_per_class > 0) homogeneous.push_back(cls.name);
  }
  std::vector<std::string> mixed;
  for (const auto& [a, b] : config.dataset.hetero_pairs) {
    if (config.dataset.hetero_per_pair > 0) mixed.push_back(a + "+" + b);
  }
  std::vector<std::string> all_rows = homogeneous;
  all_rows.insert(all_rows.end(), mixed.begin(), mixed.end());

  std::vector<PowerElement> singletons;
  std::vector<PowerElement> all_power;
  for (int i = 0; i < 3; ++i) singletons.push_back(frame.power_singleton(i));
  for (std::uint32_t bits = 1; bits < 8; ++bits) all_power.emplace_back(3, bits);
  std::vector<HyperElement> card4 = elements_in_window(frame, {4, 4});
  std::vector<HyperElement> pairs2 = elements_in_window(frame, {2, 2});
  std::vector<HyperElement> card2to6 = elements_in_window(frame, {2, 6});

  struct Table {
    const char* name;
    const char* verdict_key;
    const char* title;
    std::vector<std::string> columns;
  };
  const std::vector<Table> tables = {
      {"pignistic", "pignistic",
       "Pignistic decision on singletons",
       column_names(frame, singletons, false)},
      {"max_bel_reject", "max_bel_reject",
       "Maximum credibility with reject on singletons",
       column_names(frame, singletons, true)},
      {"two_step", "two_step",
       "Reject, then weighted plausibility over 2^Θ (r=0.5)",
       column_names(frame, all_power, true)},
      {"gpt_card4", "gpt_card4",
       "GPT decision on cardinality-4 elements of D^Θ",
       column_names(frame, card4, false)},
      {"gpt_card2", "gpt_card2",
       "GPT decision on cardinality-2 elements of D^Θ",
       column_names(frame, pairs2, false)},
      {"gpt_card2_reject", "gpt_card2_reject",
       "Reject, then GPT on cardinality-2 elements",
       column_names(frame, pairs2, true)},
      {"weighted_credibility", "weighted_credibility",
       "Weighted credibility on cardinalities [2,6] (r=0.7)",
       column_names(frame, card2to6, false)},
  };

  std::size_t agree_homogeneous = 0;
  std::size_t total_homogeneous = 0;
  std::size_t agree_mixed = 0;
  std::size_t total_mixed = 0;
  for (const auto& table : tables) {
    ConfusionReport report(table.name, table.title, all_rows, table.columns);
    for (const auto& rec : result.observations) {
      report.add(rec.truth, rec.verdicts.at(table.verdict_key));
    }
    result.reports.push_back(std::move(report));
  }
  for (const auto& rec : result.observations) {
    const bool is_mixed =
        std::find(mixed.begin(), mixed.end(), rec.truth) != mixed.end();
    (is_mixed ? total_mixed : total_homogeneous) += 1;
    if (rec.card4_agrees) (is_mixed ? agree_mixed : agree_homogeneous) += 1;
  }
  result.agreement_by_row.clear();
  for (const auto& row : all_rows) {
    std::size_t agree = 0;
    std::size_t total = 0;
    for (const auto& rec : result.observations) {
      if (rec.truth != row) continue;
      ++total;
      if (rec.card4_agrees) ++agree;
    }
    result.agreement_by_row.emplace_back(
        row, total ? static_cast<double>(agree) / total : 0.0);
  }
  result.agreement_homogeneous =
      total_homogeneous ? static_cast<double>(agree_homogeneous) / total_homogeneous
                        : 0.0;
  result.agreement_heterogeneous =
      total_mixed ? static_cast<double>(agree_mixed) / total_mixed : 0.0;
}

// ---------------------------------------------------------------------------
// Lattice statistics

std::vector<std::pair<int, std::size_t>> lattice_stats(int n) {
  if (n < 1 || n > kMaxEnumerableClasses) {
    throw std::invalid_argument("lattice statistics need 1..6 classes");
  }
  const auto elements = enumerate_upsets(n);
  std::vector<std::pair<int, std::size_t>> out;
  const int max_card = static_cast<int>(part_count(n));
  for (int c = 1; c <= max_card; ++c) out.emplace_back(c, 0);
  for (const auto& x : elements) ++out[x.cardinality() - 1].second;
  return out;
}

void write_lattice_csv(std::ostream& out,
                       const std::vector<std::pair<int, std::size_t>>& stats) {
  out << "cardinality,count\n";
  for (const auto& [c, count] : stats) out << c << ',' << count << '\n';
}

}  // namespace belief::experiment
