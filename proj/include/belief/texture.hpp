#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace belief::texture {

inline constexpr int kDefaultSide = 32;
inline constexpr int kDefaultLevels = 16;
inline constexpr int kDefaultDistance = 2;
inline constexpr std::array<int, 4> kAngles = {0, 45, 90, 135};

/// Square 8-bit tile, row-major.
struct Imagette {
  std::string id;
  std::optional<std::string> label;
  int side = kDefaultSide;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * side + col];
  }
  void validate() const;
};

/// Gray levels reduced to [0, levels).
struct QuantizedGrid {
  int side = 0;
  int levels = 0;
  std::vector<std::uint8_t> cells;

  int at(int row, int col) const {
    return cells[static_cast<std::size_t>(row) * side + col];
  }
};

/// Symmetric, normalized gray-level co-occurrence matrix.
struct CooccurrenceMatrix {
  int levels = 0;
  std::vector<double> p;  // levels x levels, row-major

  double at(int i, int j) const {
    return p[static_cast<std::size_t>(i) * levels + j];
  }
};

struct FeatureVector {
  double homogeneity = 0.0;
  double contrast = 0.0;
  double entropy = 0.0;
  double correlation = 0.0;
  double directivity = 0.0;
  double uniformity = 0.0;

  static constexpr std::array<const char*, 6> kNames = {
      "homogeneity", "contrast",    "entropy",
      "correlation", "directivity", "uniformity"};
  std::array<double, 6> values() const {
    return {homogeneity, contrast, entropy, correlation, directivity, uniformity};
  }
  static FeatureVector from_values(const std::array<double, 6>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// level = floor(pixel * levels / 256); levels ∈ {4, 8, 16, 32}.
QuantizedGrid quantize(const Imagette& img, int levels);

/// (Δrow, Δcol) for an angle: 0°→(0,+d), 45°→(−d,+d), 90°→(−d,0),
/// 135°→(−d,−d).
std::array<int, 2> displacement(int angle_degrees, int distance);

/// Counts every in-range pixel pair at the displacement in both orders.
/// Throws when the angle is not one of 0/45/90/135 or no pair fits.
CooccurrenceMatrix cooccurrence(const QuantizedGrid& grid, int distance,
                                int angle_degrees);

/// The six descriptors of one matrix.
FeatureVector haralick(const CooccurrenceMatrix& m);
/// Per-matrix descriptors averaged over the given matrices (same levels).
FeatureVector haralick6(std::span<const CooccurrenceMatrix> matrices);

/// Quantize, build the four direction matrices, average the descriptors.
FeatureVector describe(const Imagette& img, int levels = kDefaultLevels,
                       int distance = kDefaultDistance);

// --- files -------------------------------------------------------------------

/// Binary PGM (P5), maxval <= 255, square images only.
Imagette read_pgm(const std::filesystem::path& path);
Imagette read_pgm(std::istream& in, std::string id);
void write_pgm(const std::filesystem::path& path, const Imagette& img);
void write_pgm(std::ostream& out, const Imagette& img);

struct FeatureRow {
  std::string id;
  std::string label;
  FeatureVector features;
};

/// id,label,homogeneity,contrast,entropy,correlation,directivity,uniformity
void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_feature_csv(std::istream& in);

}  // namespace belief::texture
