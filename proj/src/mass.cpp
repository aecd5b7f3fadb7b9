#include "belief/mass.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace belief {
namespace {

template <typename Element>
int element_n(const Element& x) {
  return x.n();
}

template <typename Element>
void require_frame(const MassFunction<Element>& m, const Element& x) {
  if (x.n() != m.frame().size()) throw FrameMismatch();
}

template <typename Mass>
void require_same_frame(std::span<const Mass> masses) {
  if (masses.empty()) {
    throw std::invalid_argument("combination needs at least one mass");
  }
  for (const auto& m : masses) {
    if (!(m.frame() == masses.front().frame())) throw FrameMismatch();
  }
}

/// Sparse product-sum over focal tuples with the given meet operation.
template <typename Element>
std::vector<std::pair<Element, double>> combine_focal(
    std::span<const MassFunction<Element>> masses) {
  std::map<Element, double> acc;
  for (const auto& [x, v] : masses.front().focal()) acc[x] += v;
  for (std::size_t k = 1; k < masses.size(); ++k) {
    std::map<Element, double> next;
    for (const auto& [x, vx] : acc) {
      for (const auto& [y, vy] : masses[k].focal()) next[x & y] += vx * vy;
    }
    acc = std::move(next);
  }
  return {acc.begin(), acc.end()};
}

}  // namespace

template <typename Element>
MassFunction<Element>::MassFunction(Frame frame, std::vector<Focal> focal,
                                    MassOptions options)
    : frame_(std::move(frame)) {
  if (!(options.tolerance >= 0.0)) {
    throw std::invalid_argument("mass tolerance must be nonnegative");
  }
  std::map<Element, double> merged;
  for (const auto& [x, v] : focal) {
    if (element_n(x) != frame_.size()) throw FrameMismatch();
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("mass values must be finite and nonnegative");
    }
    if constexpr (std::is_same_v<Element, PowerElement>) {
      if (x.empty() && !options.allow_conflict) {
        throw std::invalid_argument("mass on ∅ is not allowed here");
      }
    }
    if (v > 0.0) merged[x] += v;
  }
  double sum = 0.0;
  for (const auto& [x, v] : merged) sum += v;
  if (options.renormalize) {
    if (!(sum > 0.0)) {
      throw std::invalid_argument("cannot renormalize an all-zero mass");
    }
    for (auto& [x, v] : merged) v /= sum;
  } else if (std::abs(sum - 1.0) > options.tolerance) {
    throw std::invalid_argument("masses sum to " + std::to_string(sum) +
                                ", not 1");
  }
  for (const auto& [x, v] : merged) {
    if (v > 1.0 + options.tolerance) {
      throw std::invalid_argument("mass value above 1");
    }
  }
  focal_.assign(merged.begin(), merged.end());
}

template <typename Element>
MassFunction<Element> MassFunction<Element>::vacuous(Frame frame) {
  const int n = frame.size();
  if constexpr (std::is_same_v<Element, PowerElement>) {
    return MassFunction(std::move(frame), {{PowerElement::whole(n), 1.0}});
  } else {
    return MassFunction(std::move(frame), {{HyperElement::whole(n), 1.0}});
  }
}

template <typename Element>
double MassFunction<Element>::mass(const Element& x) const noexcept {
  const auto it = std::lower_bound(
      focal_.begin(), focal_.end(), x,
      [](const Focal& f, const Element& e) { return f.first < e; });
  return it != focal_.end() && it->first == x ? it->second : 0.0;
}

template <typename Element>
double MassFunction<Element>::total() const noexcept {
  double sum = 0.0;
  for (const auto& [x, v] : focal_) sum += v;
  return sum;
}

template class MassFunction<PowerElement>;
template class MassFunction<HyperElement>;

// ---------------------------------------------------------------------------
// 2^Θ

double bel(const PowerMass& m, const PowerElement& x) {
  require_frame(m, x);
  if (x.empty()) throw std::invalid_argument("bel of ∅ is undefined here");
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    if (!y.empty() && y.subset_of(x)) sum += v;
  }
  return sum;
}

double pl(const PowerMass& m, const PowerElement& x) {
  require_frame(m, x);
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    if (y.intersects(x)) sum += v;
  }
  return sum;
}

double betp(const PowerMass& m, const PowerElement& x) {
  require_frame(m, x);
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    if (y.empty()) {
      throw std::invalid_argument(
          "pignistic transform needs a mass without ∅; normalize first");
    }
    sum += static_cast<double>((x & y).cardinality()) / y.cardinality() * v;
  }
  return sum;
}

CombinationReport conjunctive_combine(std::span<const PowerMass> masses) {
  require_same_frame(masses);
  const Frame& frame = masses.front().frame();
  auto focal = combine_focal(masses);
  double conflict = 0.0;
  for (const auto& [x, v] : focal) {
    if (x.empty()) conflict += v;
  }
  MassOptions options;
  options.allow_conflict = true;
  options.tolerance = 1e-6;
  return {PowerMass(frame, std::move(focal), options), conflict};
}

PowerMass dempster(std::span<const PowerMass> masses) {
  require_same_frame(masses);
  auto focal = combine_focal(masses);
  std::erase_if(focal, [](const auto& f) { return f.first.empty(); });
  double kept = 0.0;
  for (const auto& [x, v] : focal) kept += v;
  if (!(kept > 0.0)) throw TotalConflict();
  // Dividing by the surviving mass equals dividing by 1 - m(∅) but avoids
  // cancellation when the conflict is large.
  for (auto& [x, v] : focal) v /= kept;
  return PowerMass(masses.front().frame(), std::move(focal));
}

// ---------------------------------------------------------------------------
// D^Θ

double bel(const HyperMass& m, const HyperElement& x) {
  require_frame(m, x);
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    if (y.subset_of(x)) sum += v;
  }
  return sum;
}

double pl(const HyperMass& m, const HyperElement& x) {
  require_frame(m, x);
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    if (y.intersects(x)) sum += v;
  }
  return sum;
}

double gpt(const HyperMass& m, const HyperElement& x) {
  require_frame(m, x);
  double sum = 0.0;
  for (const auto& [y, v] : m.focal()) {
    sum += static_cast<double>((x & y).cardinality()) / y.cardinality() * v;
  }
  return sum;
}

HyperMass conjunctive_combine(std::span<const HyperMass> masses) {
  require_same_frame(masses);
  MassOptions options;
  options.tolerance = 1e-6;
  return HyperMass(masses.front().frame(), combine_focal(masses), options);
}

HyperMass embed(const PowerMass& m) {
  std::vector<HyperMass::Focal> focal;
  for (const auto& [x, v] : m.focal()) focal.emplace_back(embed_power(x), v);
  MassOptions options;
  options.tolerance = 1e-6;
  return HyperMass(m.frame(), std::move(focal), options);
}

}  // namespace belief
