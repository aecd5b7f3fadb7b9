#include "belief/frame.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <mutex>
#include <unordered_set>

namespace belief {
namespace {

void check_power_n(int n) {
  if (n < 1 || n > kMaxClasses) {
    throw std::invalid_argument("frame size out of range: " + std::to_string(n));
  }
}

void check_hyper_n(int n) {
  if (n < 1 || n > kMaxEnumerableClasses) {
    throw std::invalid_argument("hyper-power set needs 1..6 classes, got " +
                                std::to_string(n));
  }
}

std::uint64_t bit_of_signature(std::uint32_t signature) {
  return std::uint64_t{1} << (signature - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PowerElement

PowerElement::PowerElement(int n, std::uint32_t bits) : n_(n), bits_(bits) {
  check_power_n(n);
  if (bits == 0) {
    throw std::invalid_argument("power element must be nonempty");
  }
  if (n < 32 && (bits >> n) != 0) {
    throw std::invalid_argument("power element has bits outside the frame");
  }
}

PowerElement PowerElement::singleton(int n, int index) {
  check_power_n(n);
  if (index < 0 || index >= n) {
    throw std::out_of_range("class index out of range");
  }
  return PowerElement(n, std::uint32_t{1} << index);
}

PowerElement PowerElement::whole(int n) {
  check_power_n(n);
  return PowerElement(n, (std::uint32_t{1} << n) - 1);
}

int PowerElement::cardinality() const noexcept { return std::popcount(bits_); }

PowerElement PowerElement::complement() const noexcept {
  PowerElement out(n_);
  out.bits_ = ~bits_ & ((std::uint32_t{1} << n_) - 1);
  return out;
}

PowerElement PowerElement::operator|(const PowerElement& other) const {
  if (n_ != other.n_) throw FrameMismatch();
  PowerElement out(n_);
  out.bits_ = bits_ | other.bits_;
  return out;
}

PowerElement PowerElement::operator&(const PowerElement& other) const {
  if (n_ != other.n_) throw FrameMismatch();
  PowerElement out(n_);
  out.bits_ = bits_ & other.bits_;
  return out;
}

// ---------------------------------------------------------------------------
// HyperElement

std::uint64_t part_count(int n) { return (std::uint64_t{1} << n) - 1; }

std::uint64_t all_parts(int n) {
  check_hyper_n(n);
  const std::uint64_t count = part_count(n);
  return count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
}

bool is_upset(int n, std::uint64_t parts) noexcept {
  if (n < 1 || n > kMaxEnumerableClasses || parts == 0) return false;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  if (parts & ~all_parts(n)) return false;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (!(parts & bit_of_signature(s))) continue;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t t = s | (std::uint32_t{1} << i);
      if (!(parts & bit_of_signature(t))) return false;
    }
  }
  return true;
}

HyperElement::HyperElement(int n, std::uint64_t parts) : n_(n), parts_(parts) {
  check_hyper_n(n);
  if (!is_upset(n, parts)) {
    throw std::invalid_argument("part mask is not an element of D^Θ");
  }
}

HyperElement HyperElement::singleton(int n, int index) {
  check_hyper_n(n);
  if (index < 0 || index >= n) {
    throw std::out_of_range("class index out of range");
  }
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::uint64_t parts = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if ((s >> index) & 1u) parts |= bit_of_signature(s);
  }
  return HyperElement(n, parts, Unchecked{});
}

HyperElement HyperElement::whole(int n) {
  return HyperElement(n, all_parts(n), Unchecked{});
}

HyperElement HyperElement::total_intersection(int n) {
  check_hyper_n(n);
  return HyperElement(n, bit_of_signature((std::uint32_t{1} << n) - 1),
                      Unchecked{});
}

int HyperElement::cardinality() const noexcept { return std::popcount(parts_); }

std::vector<std::uint32_t> HyperElement::antichain() const {
  // A present part is minimal iff no immediate sub-signature is present;
  // up-closure makes that test sufficient.
  std::vector<std::uint32_t> minimal;
  const std::uint32_t full = (std::uint32_t{1} << n_) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (!(parts_ & bit_of_signature(s))) continue;
    bool is_minimal = true;
    for (int i = 0; i < n_ && is_minimal; ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if ((s & bit) && s != bit && (parts_ & bit_of_signature(s & ~bit))) {
        is_minimal = false;
      }
    }
    if (is_minimal) minimal.push_back(s);
  }
  return minimal;
}

HyperElement HyperElement::operator|(const HyperElement& other) const {
  if (n_ != other.n_) throw FrameMismatch();
  return HyperElement(n_, parts_ | other.parts_, Unchecked{});
}

HyperElement HyperElement::operator&(const HyperElement& other) const {
  if (n_ != other.n_) throw FrameMismatch();
  // Both contain the total-intersection part, so the AND is never empty.
  return HyperElement(n_, parts_ & other.parts_, Unchecked{});
}

void SpecificityWindow::validate(int n) const {
  if (min_s < 1 || min_s > max_s ||
      static_cast<std::uint64_t>(max_s) > part_count(n)) {
    throw std::invalid_argument("invalid specificity window [" +
                                std::to_string(min_s) + "," +
                                std::to_string(max_s) + "]");
  }
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<HyperElement> enumerate_upsets(int n) {
  check_hyper_n(n);
  // Up-sets of the full Boolean lattice 2^[k] as 2^k-bit masks. An up-set U of
  // 2^[k+1] splits into U0 (sets without class k) and U1 (sets with it, class
  // removed), both up-sets of 2^[k] with U0 ⊆ U1; every such pair occurs.
  std::vector<std::uint64_t> level = {0, 1};
  for (int k = 0; k < n; ++k) {
    const unsigned shift = 1u << k;
    std::vector<std::uint64_t> next;
    next.reserve(level.size() * level.size() / 2);
    for (std::uint64_t low : level) {
      for (std::uint64_t high : level) {
        if ((low & ~high) == 0) next.push_back(low | (high << shift));
      }
    }
    level = std::move(next);
  }

  std::vector<HyperElement> out;
  out.reserve(level.size());
  for (std::uint64_t mask : level) {
    // Drop the empty up-set and the one containing ∅ (all of 2^[n]).
    if (mask == 0 || (mask & 1u)) continue;
    out.push_back(HyperElement(n, mask >> 1, HyperElement::Unchecked{}));
  }
  std::sort(out.begin(), out.end(),
            [](const HyperElement& a, const HyperElement& b) {
              const int ca = a.cardinality();
              const int cb = b.cardinality();
              return ca != cb ? ca < cb : a.parts() < b.parts();
            });
  return out;
}

// ---------------------------------------------------------------------------
// Frame

struct Frame::Data {
  std::vector<std::string> labels;
  std::once_flag enumerated;
  std::vector<HyperElement> hyper;
};

namespace {

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
  });
}

}  // namespace

Frame::Frame(std::vector<std::string> labels) : data_(std::make_shared<Data>()) {
  if (labels.size() < 2) {
    throw std::invalid_argument("a frame needs at least two classes");
  }
  if (labels.size() > static_cast<std::size_t>(kMaxClasses)) {
    throw std::invalid_argument("frame has too many classes");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!valid_label(label)) {
      throw std::invalid_argument("invalid class label '" + label + "'");
    }
    if (!seen.insert(label).second) {
      throw std::invalid_argument("duplicate class label '" + label + "'");
    }
  }
  data_->labels = std::move(labels);
}

int Frame::size() const noexcept {
  return static_cast<int>(data_->labels.size());
}

const std::vector<std::string>& Frame::labels() const noexcept {
  return data_->labels;
}

const std::string& Frame::label(int index) const {
  return data_->labels.at(static_cast<std::size_t>(index));
}

int Frame::index_of(std::string_view label) const noexcept {
  const auto& labels = data_->labels;
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

PowerElement Frame::power_singleton(int index) const {
  return PowerElement::singleton(size(), index);
}

HyperElement Frame::singleton(int index) const {
  return HyperElement::singleton(size(), index);
}

HyperElement Frame::whole() const { return HyperElement::whole(size()); }

std::span<const HyperElement> Frame::hyper_elements() const {
  if (size() > kMaxEnumerableClasses) {
    throw std::invalid_argument("D^Θ enumeration is limited to 6 classes");
  }
  std::call_once(data_->enumerated,
                 [this] { data_->hyper = enumerate_upsets(size()); });
  return data_->hyper;
}

bool operator==(const Frame& a, const Frame& b) noexcept {
  return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
}

std::span<const HyperElement> enumerate_hyper(const Frame& frame) {
  return frame.hyper_elements();
}

std::vector<HyperElement> elements_in_window(const Frame& frame,
                                             SpecificityWindow window) {
  window.validate(frame.size());
  const auto all = frame.hyper_elements();
  // `all` is sorted by cardinality, so the window is a contiguous run.
  const auto first = std::partition_point(
      all.begin(), all.end(),
      [&](const HyperElement& x) { return x.cardinality() < window.min_s; });
  const auto last = std::partition_point(
      first, all.end(),
      [&](const HyperElement& x) { return x.cardinality() <= window.max_s; });
  return {first, last};
}

HyperElement embed_power(const PowerElement& x) {
  if (x.empty()) {
    throw std::invalid_argument("cannot embed the conflict element");
  }
  std::uint64_t parts = 0;
  for (int i = 0; i < x.n(); ++i) {
    if (x.contains(i)) parts |= HyperElement::singleton(x.n(), i).parts();
  }
  return HyperElement(x.n(), parts);
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

template <typename Value, typename Ops>
class ExpressionParser {
 public:
  ExpressionParser(const Frame& frame, std::string_view text, Ops ops)
      : frame_(frame), text_(text), ops_(ops) {}

  Value parse() {
    Value value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return value;
  }

 private:
  Value expr() {
    Value value = term();
    while (accept('|')) value = ops_.join(value, term());
    return value;
  }

  Value term() {
    Value value = atom();
    while (accept('&')) value = ops_.meet(value, atom());
    return value;
  }

  Value atom() {
    skip_space();
    if (accept('(')) {
      Value value = expr();
      if (!accept(')')) fail("expected ')'");
      return value;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    if (start == pos_) {
      fail(pos_ == text_.size() ? "unexpected end of input"
                                : "expected a class label");
    }
    const std::string_view label = text_.substr(start, pos_ - start);
    const int index = frame_.index_of(label);
    if (index < 0) {
      throw ParseError("unknown label '" + std::string(label) + "'", start);
    }
    return ops_.leaf(index);
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  static bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  const Frame& frame_;
  std::string_view text_;
  Ops ops_;
  std::size_t pos_ = 0;
};

struct HyperOps {
  int n;
  std::uint64_t leaf(int index) const {
    return HyperElement::singleton(n, index).parts();
  }
  std::uint64_t join(std::uint64_t a, std::uint64_t b) const { return a | b; }
  std::uint64_t meet(std::uint64_t a, std::uint64_t b) const { return a & b; }
};

struct PowerOps {
  std::uint32_t leaf(int index) const { return std::uint32_t{1} << index; }
  std::uint32_t join(std::uint32_t a, std::uint32_t b) const { return a | b; }
  std::uint32_t meet(std::uint32_t a, std::uint32_t b) const { return a & b; }
};

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

std::string join_sorted(std::vector<std::string> items, char separator) {
  std::sort(items.begin(), items.end());
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += separator;
    out += items[k];
  }
  return out;
}

std::string signature_term(const Frame& frame, std::uint32_t signature) {
  std::vector<std::string> labels;
  for (int i = 0; i < frame.size(); ++i) {
    if ((signature >> i) & 1u) labels.push_back(frame.label(i));
  }
  return join_sorted(std::move(labels), '&');
}

}  // namespace

HyperElement parse_hyper(const Frame& frame, std::string_view text) {
  const int n = frame.size();
  check_hyper_n(n);
  ExpressionParser<std::uint64_t, HyperOps> parser(frame, text, HyperOps{n});
  return HyperElement(n, parser.parse());
}

PowerElement parse_power(const Frame& frame, std::string_view text) {
  if (trim(text) == "{}") return PowerElement::conflict(frame.size());
  ExpressionParser<std::uint32_t, PowerOps> parser(frame, text, PowerOps{});
  const std::uint32_t bits = parser.parse();
  if (bits == 0) {
    throw ParseError("expression denotes the empty set", 0);
  }
  return PowerElement(frame.size(), bits);
}

std::string format_element(const Frame& frame, const HyperElement& x) {
  if (x.n() != frame.size()) throw FrameMismatch();
  std::vector<std::string> terms;
  for (std::uint32_t signature : x.antichain()) {
    terms.push_back(signature_term(frame, signature));
  }
  return join_sorted(std::move(terms), '|');
}

std::string format_element(const Frame& frame, const PowerElement& x) {
  if (x.n() != frame.size()) throw FrameMismatch();
  if (x.empty()) return "{}";
  std::vector<std::string> labels;
  for (int i = 0; i < frame.size(); ++i) {
    if (x.contains(i)) labels.push_back(frame.label(i));
  }
  return join_sorted(std::move(labels), '|');
}

bool canonical_less(const Frame& frame, const HyperElement& a,
                    const HyperElement& b) {
  if (a.cardinality() != b.cardinality()) {
    return a.cardinality() < b.cardinality();
  }
  if (a == b) return false;
  return format_element(frame, a) < format_element(frame, b);
}

bool canonical_less(const Frame& frame, const PowerElement& a,
                    const PowerElement& b) {
  if (a.cardinality() != b.cardinality()) {
    return a.cardinality() < b.cardinality();
  }
  if (a == b) return false;
  return format_element(frame, a) < format_element(frame, b);
}

}  // namespace belief
