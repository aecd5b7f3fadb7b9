#pragma once

// Frames of discernment, the power set 2^Θ and the free hyper-power set D^Θ.
//
// A HyperElement is stored as a bit mask over the 2^n - 1 parts of the
// n-class Venn diagram. Part with signature S (nonempty subset of classes,
// encoded as bit mask s) lives at bit s - 1. Valid elements are exactly the
// nonempty up-sets of that part poset, which makes union/intersection bitwise
// and the DSm cardinality a popcount.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace belief {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameMismatch : public Error {
 public:
  FrameMismatch() : Error("elements belong to different frames") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Largest frame for which D^Θ may be enumerated (Dedekind(6) - 2 elements).
inline constexpr int kMaxEnumerableClasses = 6;
/// Largest frame accepted at all; power elements are 32-bit masks.
inline constexpr int kMaxClasses = 16;

class PowerElement {
 public:
  /// Nonempty subset; throws on empty or out-of-range bits.
  PowerElement(int n, std::uint32_t bits);

  /// The conflict element ∅. Only combination results may carry it.
  static PowerElement conflict(int n) { return PowerElement(n); }
  static PowerElement singleton(int n, int index);
  static PowerElement whole(int n);

  int n() const noexcept { return n_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool empty() const noexcept { return bits_ == 0; }
  int cardinality() const noexcept;
  bool contains(int index) const noexcept { return (bits_ >> index) & 1u; }
  bool subset_of(const PowerElement& other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  bool intersects(const PowerElement& other) const noexcept {
    return (bits_ & other.bits_) != 0;
  }
  /// Complement within Θ; may be the conflict element.
  PowerElement complement() const noexcept;
  PowerElement operator|(const PowerElement& other) const;
  /// May return the conflict element.
  PowerElement operator&(const PowerElement& other) const;

  friend bool operator==(const PowerElement&, const PowerElement&) = default;
  friend auto operator<=>(const PowerElement&, const PowerElement&) = default;

 private:
  explicit PowerElement(int n) : n_(n), bits_(0) {}
  int n_;
  std::uint32_t bits_;
};

class HyperElement {
 public:
  /// Throws unless `parts` is a nonempty up-set over the parts of an n-frame.
  HyperElement(int n, std::uint64_t parts);

  static HyperElement singleton(int n, int index);
  static HyperElement whole(int n);
  /// Intersection of all classes: the single part with full signature.
  static HyperElement total_intersection(int n);

  int n() const noexcept { return n_; }
  std::uint64_t parts() const noexcept { return parts_; }
  /// DSm cardinality C_M.
  int cardinality() const noexcept;
  bool subset_of(const HyperElement& other) const noexcept {
    return (parts_ & ~other.parts_) == 0;
  }
  bool intersects(const HyperElement& other) const noexcept {
    return (parts_ & other.parts_) != 0;
  }
  /// Minimal signatures of the up-set, each a class bit mask, ascending.
  std::vector<std::uint32_t> antichain() const;

  HyperElement operator|(const HyperElement& other) const;
  HyperElement operator&(const HyperElement& other) const;

  friend bool operator==(const HyperElement&, const HyperElement&) = default;
  friend auto operator<=>(const HyperElement&, const HyperElement&) = default;

 private:
  struct Unchecked {};
  HyperElement(int n, std::uint64_t parts, Unchecked) : n_(n), parts_(parts) {}
  friend std::vector<HyperElement> enumerate_upsets(int n);
  int n_;
  std::uint64_t parts_;
};

/// Number of Venn parts of an n-class frame: 2^n - 1.
std::uint64_t part_count(int n);
/// Mask with every part of an n-class frame set.
std::uint64_t all_parts(int n);
/// True when `parts` is a nonempty up-set, i.e. an element of D^Θ.
bool is_upset(int n, std::uint64_t parts) noexcept;

/// Inclusive DSm-cardinality band of admissible decisions.
struct SpecificityWindow {
  int min_s;
  int max_s;

  /// Throws unless 1 <= min_s <= max_s <= 2^n - 1.
  void validate(int n) const;
  bool contains(int cardinality) const noexcept {
    return min_s <= cardinality && cardinality <= max_s;
  }
};

/// Ordered, immutable set of class labels. Copies share the same lattice cache.
class Frame {
 public:
  explicit Frame(std::vector<std::string> labels);

  int size() const noexcept;
  const std::vector<std::string>& labels() const noexcept;
  const std::string& label(int index) const;
  /// Index of `label`, or -1.
  int index_of(std::string_view label) const noexcept;

  PowerElement power_singleton(int index) const;
  HyperElement singleton(int index) const;
  HyperElement whole() const;

  /// All nonempty elements of D^Θ ordered by ascending C_M, then part mask.
  /// Computed once per frame and shared by copies. Throws above 6 classes.
  std::span<const HyperElement> hyper_elements() const;

  friend bool operator==(const Frame& a, const Frame& b) noexcept;

 private:
  struct Data;
  std::shared_ptr<Data> data_;
};

/// Generates D^Θ \ {∅} for an n-class frame as nonempty up-sets of parts.
std::vector<HyperElement> enumerate_upsets(int n);

/// Views the frame's cached lattice; keep the frame alive while iterating.
std::span<const HyperElement> enumerate_hyper(const Frame& frame);
std::vector<HyperElement> elements_in_window(const Frame& frame,
                                             SpecificityWindow window);

HyperElement embed_power(const PowerElement& x);

/// Grammar: expr := term ('|' term)*; term := atom ('&' atom)*;
/// atom := label | '(' expr ')'. '&' binds tighter than '|'.
HyperElement parse_hyper(const Frame& frame, std::string_view text);
/// Same grammar evaluated with ordinary set operations. The literal "{}"
/// denotes the conflict element; any other expression must be nonempty.
PowerElement parse_power(const Frame& frame, std::string_view text);

/// Canonical antichain form, e.g. "C1&C3|C2&C3".
std::string format_element(const Frame& frame, const HyperElement& x);
/// Canonical union form, e.g. "C1|C2"; the conflict element prints as "{}".
std::string format_element(const Frame& frame, const PowerElement& x);

/// Strict weak order used for deterministic listings and tie-breaking:
/// ascending cardinality, then lexicographic canonical string.
bool canonical_less(const Frame& frame, const HyperElement& a,
                    const HyperElement& b);
bool canonical_less(const Frame& frame, const PowerElement& a,
                    const PowerElement& b);

}  // namespace belief
