#include "belief/texture.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "belief/frame.hpp"
#include "belief/mass_io.hpp"

namespace belief::texture {

void Imagette::validate() const {
  if (side < 1) throw std::invalid_argument("imagette side must be positive");
  if (pixels.size() != static_cast<std::size_t>(side) * side) {
    throw std::invalid_argument("imagette '" + id + "' is not " +
                                std::to_string(side) + "x" +
                                std::to_string(side));
  }
}

QuantizedGrid quantize(const Imagette& img, int levels) {
  if (levels != 4 && levels != 8 && levels != 16 && levels != 32) {
    throw std::invalid_argument("quantization levels must be 4, 8, 16 or 32");
  }
  img.validate();
  QuantizedGrid grid{img.side, levels, {}};
  grid.cells.reserve(img.pixels.size());
  for (std::uint8_t v : img.pixels) {
    grid.cells.push_back(static_cast<std::uint8_t>(v * levels / 256));
  }
  return grid;
}

std::array<int, 2> displacement(int angle_degrees, int distance) {
  switch (angle_degrees) {
    case 0: return {0, distance};
    case 45: return {-distance, distance};
    case 90: return {-distance, 0};
    case 135: return {-distance, -distance};
    default:
      throw std::invalid_argument("angle must be 0, 45, 90 or 135 degrees");
  }
}

CooccurrenceMatrix cooccurrence(const QuantizedGrid& grid, int distance,
                                int angle_degrees) {
  if (grid.levels < 1 ||
      grid.cells.size() != static_cast<std::size_t>(grid.side) * grid.side) {
    throw std::invalid_argument("malformed quantized grid");
  }
  const auto [dr, dc] = displacement(angle_degrees, distance);
  if (distance < 1 || distance >= grid.side) {
    throw std::invalid_argument("co-occurrence distance must be in [1, side)");
  }
  const int q = grid.levels;
  std::vector<double> counts(static_cast<std::size_t>(q) * q, 0.0);
  double pairs = 0.0;
  for (int r = 0; r < grid.side; ++r) {
    const int r2 = r + dr;
    if (r2 < 0 || r2 >= grid.side) continue;
    for (int c = 0; c < grid.side; ++c) {
      const int c2 = c + dc;
      if (c2 < 0 || c2 >= grid.side) continue;
      const int a = grid.at(r, c);
      const int b = grid.at(r2, c2);
      counts[static_cast<std::size_t>(a) * q + b] += 1.0;
      counts[static_cast<std::size_t>(b) * q + a] += 1.0;
      pairs += 2.0;
    }
  }
  for (double& v : counts) v /= pairs;
  return {q, std::move(counts)};
}

FeatureVector haralick(const CooccurrenceMatrix& m) {
  const int q = m.levels;
  FeatureVector f;
  double mu_i = 0.0;
  double mu_j = 0.0;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      const double p = m.at(i, j);
      mu_i += i * p;
      mu_j += j * p;
    }
  }
  double var_i = 0.0;
  double var_j = 0.0;
  double cov = 0.0;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      const double p = m.at(i, j);
      const int d = i - j;
      f.homogeneity += p / (1.0 + std::abs(d));
      f.contrast += static_cast<double>(d) * d * p;
      if (p > 0.0) f.entropy -= p * std::log(p);
      if (i == j) f.directivity += p;
      f.uniformity += p * p;
      var_i += (i - mu_i) * (i - mu_i) * p;
      var_j += (j - mu_j) * (j - mu_j) * p;
      cov += (i - mu_i) * (j - mu_j) * p;
    }
  }
  // Degenerate marginals have no defined correlation; pinned to 0.
  constexpr double kMinVariance = 1e-12;
  f.correlation = (var_i > kMinVariance && var_j > kMinVariance)
                      ? cov / std::sqrt(var_i * var_j)
                      : 0.0;
  return f;
}

FeatureVector haralick6(std::span<const CooccurrenceMatrix> matrices) {
  if (matrices.empty()) {
    throw std::invalid_argument("no co-occurrence matrices to average");
  }
  std::array<double, 6> sum{};
  for (const auto& m : matrices) {
    if (m.levels != matrices.front().levels) {
      throw std::invalid_argument("co-occurrence matrices differ in levels");
    }
    const auto v = haralick(m).values();
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
  }
  for (double& v : sum) v /= static_cast<double>(matrices.size());
  return FeatureVector::from_values(sum);
}

FeatureVector describe(const Imagette& img, int levels, int distance) {
  const auto grid = quantize(img, levels);
  std::vector<CooccurrenceMatrix> matrices;
  for (int angle : kAngles) {
    matrices.push_back(cooccurrence(grid, distance, angle));
  }
  return haralick6(matrices);
}

// ---------------------------------------------------------------------------
// PGM

namespace {

std::string next_token(std::istream& in) {
  std::string token;
  char c = 0;
  while (in.get(c)) {
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token += c;
  }
  return token;
}

int header_int(std::istream& in, const char* what) {
  const std::string token = next_token(in);
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw Error(std::string("PGM header: bad ") + what + " '" + token + "'");
  }
}

}  // namespace

Imagette read_pgm(std::istream& in, std::string id) {
  if (next_token(in) != "P5") throw Error("not a binary PGM (P5) file");
  const int width = header_int(in, "width");
  const int height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (width < 1 || width != height) {
    throw Error("PGM imagettes must be square");
  }
  if (maxval < 1 || maxval > 255) throw Error("PGM maxval must be 1..255");
  Imagette img{std::move(id), std::nullopt, width, {}};
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw Error("PGM pixel data truncated");
  }
  return img;
}

Imagette read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_pgm(in, path.stem().string());
}

void write_pgm(std::ostream& out, const Imagette& img) {
  img.validate();
  out << "P5\n" << img.side << ' ' << img.side << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const Imagette& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_pgm(out, img);
}

// ---------------------------------------------------------------------------
// CSV

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  out << "id,label";
  for (const char* name : FeatureVector::kNames) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.id << ',' << row.label;
    for (double v : row.features.values()) out << ',' << format_real(v);
    out << '\n';
  }
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty feature CSV");
  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw Error("feature CSV line " + std::to_string(line_no) +
                  ": expected 8 fields");
    }
    std::array<double, 6> values{};
    try {
      for (std::size_t k = 0; k < 6; ++k) values[k] = std::stod(fields[k + 2]);
    } catch (const std::exception&) {
      throw Error("feature CSV line " + std::to_string(line_no) +
                  ": bad number");
    }
    rows.push_back({fields[0], fields[1], FeatureVector::from_values(values)});
  }
  return rows;
}

}  // namespace belief::texture
