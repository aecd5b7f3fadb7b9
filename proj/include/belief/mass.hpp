#pragma once

#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "belief/frame.hpp"

namespace belief {

class NumericError : public Error {
 public:
  using Error::Error;
};

class TotalConflict : public NumericError {
 public:
  TotalConflict() : NumericError("total conflict: combined mass is all on ∅") {}
};

enum class Algebra { power, hyper };

struct MassOptions {
  /// Allowed |Σm - 1| before the constructor rejects the masses.
  double tolerance = 1e-9;
  /// Divide by Σm instead of rejecting a non-normal input.
  bool renormalize = false;
  /// Power algebra only: accept mass on ∅ (conjunctive by-products).
  bool allow_conflict = false;
};

/// Immutable sparse basic belief assignment over one of the two algebras.
/// Focal elements are kept sorted by element order with strictly positive
/// masses.
template <typename Element>
class MassFunction {
 public:
  using Focal = std::pair<Element, double>;

  MassFunction(Frame frame, std::vector<Focal> focal, MassOptions options = {});

  static MassFunction vacuous(Frame frame);

  static constexpr Algebra algebra() noexcept {
    return std::is_same_v<Element, PowerElement> ? Algebra::power
                                                 : Algebra::hyper;
  }
  const Frame& frame() const noexcept { return frame_; }
  std::span<const Focal> focal() const noexcept { return focal_; }
  /// m(x); zero for non-focal elements.
  double mass(const Element& x) const noexcept;
  double total() const noexcept;

 private:
  Frame frame_;
  std::vector<Focal> focal_;
};

using PowerMass = MassFunction<PowerElement>;
using HyperMass = MassFunction<HyperElement>;

extern template class MassFunction<PowerElement>;
extern template class MassFunction<HyperElement>;

/// Outcome of the unnormalized conjunctive rule in 2^Θ.
struct CombinationReport {
  PowerMass result;  // may carry mass on ∅
  double conflict;   // = result.mass(∅)
};

// --- 2^Θ --------------------------------------------------------------------

double bel(const PowerMass& m, const PowerElement& x);
double pl(const PowerMass& m, const PowerElement& x);
/// Pignistic probability. Throws if m carries mass on ∅.
double betp(const PowerMass& m, const PowerElement& x);

CombinationReport conjunctive_combine(std::span<const PowerMass> masses);
/// Normalized conjunctive rule. Throws TotalConflict when nothing survives.
PowerMass dempster(std::span<const PowerMass> masses);

// --- D^Θ, free model ----------------------------------------------------------

double bel(const HyperMass& m, const HyperElement& x);
/// Equals Σm = 1 for every element: all of D^Θ shares the total intersection.
double pl(const HyperMass& m, const HyperElement& x);
/// Generalized pignistic transformation, Σ C_M(X∩Y)/C_M(Y) m(Y).
double gpt(const HyperMass& m, const HyperElement& x);

/// Conjunctive rule in D^Θ. Intersections are kept as focal elements so no
/// conflict arises.
HyperMass conjunctive_combine(std::span<const HyperMass> masses);

/// Re-expresses a 2^Θ mass in D^Θ through embed_power. Rejects ∅ mass.
HyperMass embed(const PowerMass& m);

}  // namespace belief
