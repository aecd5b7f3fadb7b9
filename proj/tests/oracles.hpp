#pragma once

// Reference computations written without the library's lattice code, plus
// seeded generators for random masses.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "belief/mass.hpp"

namespace oracle {

/// Antichains of nonempty subsets of {0..n-1} (as class bit masks), by
/// backtracking over the subsets in increasing order. A nonempty antichain A
/// describes the up-set of signatures containing some member of A.
inline void for_each_antichain(int n, auto&& visit) {
  const std::uint32_t top = (1u << n) - 1;
  std::vector<std::uint32_t> chosen;
  auto comparable = [](std::uint32_t a, std::uint32_t b) {
    return (a & b) == a || (a & b) == b;
  };
  auto recurse = [&](auto&& self, std::uint32_t next) -> void {
    if (next > top) {
      if (!chosen.empty()) visit(chosen);
      return;
    }
    self(self, next + 1);
    if (std::none_of(chosen.begin(), chosen.end(),
                     [&](std::uint32_t c) { return comparable(c, next); })) {
      chosen.push_back(next);
      self(self, next + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 1);
}

/// Number of signatures that contain at least one antichain member.
inline int upset_size(int n, const std::vector<std::uint32_t>& antichain) {
  int count = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    for (auto a : antichain) {
      if ((a & s) == a) {
        ++count;
        break;
      }
    }
  }
  return count;
}

/// Histogram of upset sizes over every nonempty antichain.
inline std::map<int, std::size_t> antichain_histogram(int n) {
  std::map<int, std::size_t> hist;
  for_each_antichain(n, [&](const auto& a) { ++hist[upset_size(n, a)]; });
  return hist;
}

/// Part mask of class i: bit (s-1) for every signature s containing i.
inline std::uint64_t venn_singleton(int n, int i) {
  std::uint64_t parts = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    if ((s >> i) & 1u) parts |= std::uint64_t{1} << (s - 1);
  }
  return parts;
}

/// Closure of the singletons under bitwise OR/AND, iterated to a fixpoint.
inline std::set<std::uint64_t> closure(int n) {
  std::set<std::uint64_t> all;
  for (int i = 0; i < n; ++i) all.insert(venn_singleton(n, i));
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::uint64_t> snapshot(all.begin(), all.end());
    for (auto a : snapshot) {
      for (auto b : snapshot) {
        grew |= all.insert(a | b).second;
        grew |= all.insert(a & b).second;
      }
    }
  }
  all.erase(0);
  return all;
}

/// Nonnegative weights on `count` slots summing to 1, each slot zeroed with
/// probability `sparsity`; at least one slot stays positive.
inline std::vector<double> simplex(std::mt19937_64& rng, std::size_t count,
                                   double sparsity = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(count);
  double sum = 0.0;
  for (auto& x : w) {
    x = u(rng) < sparsity ? 0.0 : -std::log(1.0 - u(rng));
    sum += x;
  }
  if (sum == 0.0) {
    w[std::uniform_int_distribution<std::size_t>(0, count - 1)(rng)] = 1.0;
    return w;
  }
  for (auto& x : w) x /= sum;
  return w;
}

/// Random mass on a random handful of nonempty subsets of an n-frame.
inline belief::PowerMass random_power_mass(const belief::Frame& frame,
                                           std::mt19937_64& rng,
                                           int max_focal = 6) {
  const int n = frame.size();
  const std::uint32_t top = (1u << n) - 1;
  std::uniform_int_distribution<std::uint32_t> pick(1, top);
  const int k = std::uniform_int_distribution<int>(1, max_focal)(rng);
  std::map<std::uint32_t, double> acc;
  const auto w = simplex(rng, static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) acc[pick(rng)] += w[static_cast<std::size_t>(t)];
  std::vector<belief::PowerMass::Focal> focal;
  for (auto [bits, m] : acc) focal.emplace_back(belief::PowerElement(n, bits), m);
  return belief::PowerMass(frame, std::move(focal),
                           {.tolerance = 1e-9, .renormalize = true});
}

inline belief::PowerMass bayesian_mass(const belief::Frame& frame,
                                       std::mt19937_64& rng) {
  const auto w = simplex(rng, static_cast<std::size_t>(frame.size()), 0.2);
  std::vector<belief::PowerMass::Focal> focal;
  for (int i = 0; i < frame.size(); ++i) {
    if (w[static_cast<std::size_t>(i)] > 0.0) {
      focal.emplace_back(frame.power_singleton(i), w[static_cast<std::size_t>(i)]);
    }
  }
  return belief::PowerMass(frame, std::move(focal),
                           {.tolerance = 1e-9, .renormalize = true});
}

/// Random mass over the listed hyper elements.
inline belief::HyperMass random_hyper_mass(
    const belief::Frame& frame, const std::vector<belief::HyperElement>& pool,
    std::mt19937_64& rng, int max_focal = 6) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const int k = std::uniform_int_distribution<int>(1, max_focal)(rng);
  const auto w = simplex(rng, static_cast<std::size_t>(k));
  std::map<std::uint64_t, double> acc;
  for (int t = 0; t < k; ++t) acc[pool[pick(rng)].parts()] += w[static_cast<std::size_t>(t)];
  std::vector<belief::HyperMass::Focal> focal;
  for (auto [parts, m] : acc) {
    focal.emplace_back(belief::HyperElement(frame.size(), parts), m);
  }
  return belief::HyperMass(frame, std::move(focal),
                           {.tolerance = 1e-9, .renormalize = true});
}

/// Frame with labels C1..Cn.
inline belief::Frame numbered_frame(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("C" + std::to_string(i));
  return belief::Frame(std::move(labels));
}

}  // namespace oracle
