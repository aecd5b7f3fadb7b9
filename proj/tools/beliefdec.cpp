// Command-line driver for the synthetic texture experiment.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "belief/decision.hpp"
#include "belief/experiment.hpp"
#include "belief/fusion.hpp"
#include "belief/mass_io.hpp"
#include "belief/texture.hpp"

namespace fs = std::filesystem;
using namespace belief;
using experiment::ConfigError;
using experiment::RunConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

const std::vector<std::string> kRules = {
    "pignistic",         "max-bel-reject", "weighted",  "two-step",
    "hyper-weighted",    "reject-then-hyper", "gpt-card4"};

struct Context {
  RunConfig config;
  fs::path out;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

/// Prefixes a JSON object with an "id" member.
std::string with_id(const std::string& id, const std::string& object) {
  return "{\"id\":" + json_quote(id) + "," + object.substr(1);
}

// --- stages ------------------------------------------------------------------

void stage_gen(const Context& ctx) {
  const auto data = experiment::generate(ctx.config.dataset);
  const fs::path dir = ctx.out / "imagettes";
  fs::create_directories(dir);
  auto manifest = open_out(ctx.out / "manifest.csv");
  manifest << "id,label,split,path\n";
  const auto emit = [&](const std::vector<texture::Imagette>& set,
                        const char* split) {
    for (const auto& img : set) {
      const std::string name = img.id + ".pgm";
      texture::write_pgm(dir / name, img);
      manifest << img.id << ',' << img.label.value_or("") << ',' << split
               << ",imagettes/" << name << '\n';
    }
  };
  emit(data.train, "train");
  emit(data.test, "test");
  std::cout << "gen: " << data.train.size() << " training and "
            << data.test.size() << " test imagettes\n";
}

void stage_features(const Context& ctx) {
  auto in = open_in(ctx.out / "manifest.csv");
  std::string line;
  std::getline(in, line);
  if (line != "id,label,split,path") throw ConfigError("bad manifest header");
  std::vector<texture::Imagette> train;
  std::vector<texture::Imagette> test;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw ConfigError("bad manifest row: " + line);
    auto img = texture::read_pgm(ctx.out / cells[3]);
    img.id = cells[0];
    img.label = cells[1];
    (cells[2] == "train" ? train : test).push_back(std::move(img));
  }
  const auto& cfg = ctx.config;
  const auto train_rows = experiment::extract_features(train, cfg.levels, cfg.distance);
  const auto test_rows = experiment::extract_features(test, cfg.levels, cfg.distance);
  auto a = open_out(ctx.out / "features_train.csv");
  texture::write_feature_csv(a, train_rows);
  auto b = open_out(ctx.out / "features_test.csv");
  texture::write_feature_csv(b, test_rows);
  std::cout << "features: " << train_rows.size() + test_rows.size() << " rows\n";
}

std::vector<texture::FeatureRow> load_features(const fs::path& path) {
  auto in = open_in(path);
  return texture::read_feature_csv(in);
}

void stage_fit(const Context& ctx) {
  const Frame frame(ctx.config.frame);
  const auto rows = load_features(ctx.out / "features_train.csv");
  const auto scorer = fusion::LinearPairwiseScorer::fit(frame, rows);
  std::vector<fusion::PairwiseScores> scores;
  for (const auto& row : rows) scores.push_back(scorer.score(row.id, row.features));
  const auto params = fusion::fit_mass_model(frame, scores, ctx.config.alpha,
                                             ctx.config.divisor, ctx.config.variant);
  open_out(ctx.out / "scorer.json") << scorer.to_json() << '\n';
  open_out(ctx.out / "params.json") << fusion::params_to_json(params) << '\n';
  std::cout << "fit: " << rows.size() << " training rows, "
            << params.pairs.size() << " pairs\n";
}

void stage_score(const Context& ctx) {
  const auto scorer =
      fusion::LinearPairwiseScorer::from_json(slurp(ctx.out / "scorer.json"));
  if (!(scorer.frame() == Frame(ctx.config.frame))) {
    throw ConfigError("scorer.json was fitted on a different frame");
  }
  const auto rows = load_features(ctx.out / "features_test.csv");
  std::vector<fusion::PairwiseScores> scores;
  for (const auto& row : rows) scores.push_back(scorer.score(row.id, row.features));
  auto out = open_out(ctx.out / "scores.csv");
  fusion::write_score_csv(out, scorer.frame().size(), scores);
  std::cout << "score: " << scores.size() << " observations\n";
}

void stage_fuse(const Context& ctx) {
  const Frame frame(ctx.config.frame);
  const auto params =
      fusion::params_from_json(slurp(ctx.out / "params.json"), frame.size());
  auto in = open_in(ctx.out / "scores.csv");
  const auto scores = fusion::read_score_csv(in, frame.size());
  auto power = open_out(ctx.out / "masses_power.jsonl");
  auto hyper = open_out(ctx.out / "masses_hyper.jsonl");
  for (const auto& s : scores) {
    power << with_id(s.obs_id, to_json(fusion::fuse_power(frame, s, params))) << '\n';
    hyper << with_id(s.obs_id, to_json(fusion::fuse_hyper(frame, s, params))) << '\n';
  }
  std::cout << "fuse: " << scores.size() << " observations\n";
}

struct MassLine {
  std::string id;
  AnyMass mass;
};

std::vector<MassLine> load_masses(const fs::path& path, const Frame& frame) {
  auto in = open_in(path);
  std::vector<MassLine> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string id;
    try {
      id = nlohmann::json::parse(line).at("id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    auto mass = mass_from_json(line);
    const Frame& f = std::visit([](const auto& m) -> const Frame& { return m.frame(); },
                                mass);
    if (!(f == frame)) throw ConfigError(path.string() + ": frame differs from config");
    out.push_back({std::move(id), std::move(mass)});
  }
  return out;
}

void stage_decide(const Context& ctx, const std::string& rule) {
  const Frame frame(ctx.config.frame);
  const auto& cfg = ctx.config.decision;
  const auto power = load_masses(ctx.out / "masses_power.jsonl", frame);
  const auto hyper = load_masses(ctx.out / "masses_hyper.jsonl", frame);
  if (power.size() != hyper.size()) {
    throw ConfigError("power and hyper mass files differ in length");
  }
  auto out = open_out(ctx.out / ("decisions_" + rule + ".jsonl"));
  for (std::size_t k = 0; k < power.size(); ++k) {
    if (power[k].id != hyper[k].id) throw ConfigError("mass files out of step");
    const auto& mp = std::get<PowerMass>(power[k].mass);
    const auto& mh = std::get<HyperMass>(hyper[k].mass);
    std::string doc;
    if (rule == "pignistic") {
      doc = decision_report_json(frame, decide_pignistic(mp), rule, cfg);
    } else if (rule == "max-bel-reject") {
      doc = decision_report_json(frame, decide_maxbel_reject(mp), rule, cfg);
    } else if (rule == "weighted") {
      doc = decision_report_json(frame, decide_weighted_power(mp, cfg), rule, cfg);
    } else if (rule == "two-step") {
      doc = decision_report_json(frame, decide_two_step(mp, cfg), rule, cfg);
    } else if (rule == "hyper-weighted") {
      doc = decision_report_json(frame, decide_hyper_weighted(mh, cfg), rule, cfg);
    } else if (rule == "reject-then-hyper") {
      doc = decision_report_json(frame, decide_reject_then_hyper(mp, mh, cfg), rule,
                                 cfg);
    } else if (rule == "gpt-card4") {
      doc = decision_report_json(frame, decide_cardinality4(mh, mp).hyper, rule, cfg);
    } else {
      throw ConfigError("unknown rule '" + rule + "'");
    }
    out << with_id(power[k].id, doc) << '\n';
  }
  std::cout << "decide: " << power.size() << " verdicts with rule " << rule << '\n';
}

void stage_report(const Context& ctx) {
  const Frame frame(ctx.config.frame);
  const auto power = load_masses(ctx.out / "masses_power.jsonl", frame);
  const auto hyper = load_masses(ctx.out / "masses_hyper.jsonl", frame);
  const auto rows = load_features(ctx.out / "features_test.csv");
  std::map<std::string, std::string> truth;
  for (const auto& row : rows) truth[row.id] = row.label;
  if (power.size() != hyper.size()) {
    throw ConfigError("power and hyper mass files differ in length");
  }
  experiment::ExperimentResult result;
  for (std::size_t k = 0; k < power.size(); ++k) {
    if (power[k].id != hyper[k].id) throw ConfigError("mass files out of step");
    const auto it = truth.find(power[k].id);
    if (it == truth.end()) throw ConfigError("no label for " + power[k].id);
    result.observations.push_back(experiment::evaluate_observation(
        frame, power[k].id, it->second, std::get<PowerMass>(power[k].mass),
        std::get<HyperMass>(hyper[k].mass)));
  }
  experiment::assemble_reports(ctx.config, result);
  auto text = open_out(ctx.out / "tables.txt");
  for (const auto& report : result.reports) {
    auto csv = open_out(ctx.out / ("report_" + report.name + ".csv"));
    report.write_csv(csv);
    report.write_text(text);
    text << '\n';
  }
  text << "GPT cardinality-4 vs credibility-with-reject agreement: homogeneous "
       << format_real(result.agreement_homogeneous) << ", two-texture "
       << format_real(result.agreement_heterogeneous) << '\n';
  open_out(ctx.out / "summary.json") << result.summary_json() << '\n';
  std::cout << "report: " << result.reports.size() << " tables, agreement "
            << result.agreement_homogeneous << " / "
            << result.agreement_heterogeneous << '\n';
}

void stage_lattice(const Context& ctx, int n) {
  const auto stats = experiment::lattice_stats(n);
  auto out = open_out(ctx.out / ("lattice_n" + std::to_string(n) + ".csv"));
  experiment::write_lattice_csv(out, stats);
  experiment::write_lattice_csv(std::cout, stats);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief-function classifier fusion on synthetic seabed textures"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "Dataset seed, overrides the config");
  app.add_option("--out-dir", out_dir, "Directory for every stage's files");
  app.fallthrough();

  std::string rule;
  int lattice_n = 5;
  auto* gen = app.add_subcommand("gen", "Render the synthetic imagettes");
  auto* features = app.add_subcommand("features", "Texture features per imagette");
  auto* fit = app.add_subcommand("fit", "Fit the scorer and the mass model");
  auto* score = app.add_subcommand("score", "Pairwise scores of the test rows");
  auto* fuse = app.add_subcommand("fuse", "Fuse scores into masses");
  auto* decide = app.add_subcommand("decide", "Apply one decision rule");
  decide->add_option("--rule", rule, "Decision rule, default from the config")
      ->check(CLI::IsMember(kRules));
  auto* report = app.add_subcommand("report", "Confusion tables and summary");
  auto* lattice = app.add_subcommand("lattice-stats", "D^Θ sizes per cardinality");
  lattice->add_option("--n", lattice_n, "Number of classes, 1..6");
  auto* pipeline = app.add_subcommand("pipeline", "Every stage in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.config = experiment::config_from_json(slurp(config_path));
    if (seed) ctx.config.dataset.seed = *seed;
    ctx.out = out_dir;
    if (rule.empty()) rule = ctx.config.rule;
    if (std::find(kRules.begin(), kRules.end(), rule) == kRules.end()) {
      throw ConfigError("unknown rule '" + rule + "'");
    }

    if (gen->parsed()) stage_gen(ctx);
    if (features->parsed()) stage_features(ctx);
    if (fit->parsed()) stage_fit(ctx);
    if (score->parsed()) stage_score(ctx);
    if (fuse->parsed()) stage_fuse(ctx);
    if (decide->parsed()) stage_decide(ctx, rule);
    if (report->parsed()) stage_report(ctx);
    if (lattice->parsed()) stage_lattice(ctx, lattice_n);
    if (pipeline->parsed()) {
      stage_gen(ctx);
      stage_features(ctx);
      stage_fit(ctx);
      stage_score(ctx);
      stage_fuse(ctx);
      stage_decide(ctx, rule);
      stage_report(ctx);
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
