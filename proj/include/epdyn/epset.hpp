#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epdyn {

using Bits = std::vector<bool>;

/// Least common multiple with an overflow guard (throws resource_error
/// beyond 2^24, which is far past anything enumerable here).
std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b);

/// An eventually periodic binary sequence u = preperiod . period^omega.
///
/// Always held in canonical form: the period is primitive and the
/// preperiod is as short as possible, so two sequences are equal iff
/// their representations are equal.
class EpSequence {
 public:
  /// The constant sequence 0^omega.
  EpSequence();

  /// Canonicalises an arbitrary (preperiod, period) pair.
  /// Throws input_error on an empty period.
  static EpSequence normalize(Bits preperiod, Bits period);

  /// The purely periodic sequence word^omega.
  static EpSequence periodic(Bits word) { return normalize({}, std::move(word)); }
  static EpSequence constant(bool bit) { return periodic(Bits{bit}); }

  [[nodiscard]] bool at(std::uint64_t n) const;

  [[nodiscard]] const Bits& preperiod() const { return pre_; }
  [[nodiscard]] const Bits& period() const { return per_; }
  [[nodiscard]] std::uint64_t preperiod_length() const { return pre_.size(); }
  [[nodiscard]] std::uint64_t period_length() const { return per_.size(); }
  [[nodiscard]] bool purely_periodic() const { return pre_.empty(); }

  /// k -> u(k + n).
  [[nodiscard]] EpSequence shifted(std::uint64_t n) const;
  [[nodiscard]] EpSequence complemented() const;

  /// Extends the periodic tail backwards over the preperiod.
  [[nodiscard]] EpSequence periodic_part() const;

  /// `pre(per)` literal, e.g. `01(10)`.
  [[nodiscard]] std::string literal() const;

  friend bool operator==(const EpSequence&, const EpSequence&) = default;

 private:
  EpSequence(Bits pre, Bits per) : pre_(std::move(pre)), per_(std::move(per)) {}

  Bits pre_;
  Bits per_;
};

/// First position where two sequences differ, or nullopt when equal.
std::optional<std::uint64_t> first_disagreement(const EpSequence& a, const EpSequence& b);

/// Pointwise combination. The raw result has preperiod max(pre) and period
/// lcm(per) before canonicalisation.
template <class Op>
EpSequence combine(const EpSequence& a, const EpSequence& b, Op op) {
  const std::uint64_t pre = std::max(a.preperiod_length(), b.preperiod_length());
  const std::uint64_t per = checked_lcm(a.period_length(), b.period_length());
  Bits raw_pre(pre), raw_per(per);
  for (std::uint64_t n = 0; n < pre; ++n) raw_pre[n] = op(a.at(n), b.at(n));
  for (std::uint64_t r = 0; r < per; ++r) raw_per[r] = op(a.at(pre + r), b.at(pre + r));
  return EpSequence::normalize(std::move(raw_pre), std::move(raw_per));
}

/// Parses `bits(bits)`; the period must be nonempty.
EpSequence parse_sequence(std::string_view text);

/// A subset of N given by its eventually periodic indicator (bit 1 = member).
class EpSet {
 public:
  EpSet() = default;  // the empty set
  explicit EpSet(EpSequence indicator) : ind_(std::move(indicator)) {}

  static EpSet normalize(Bits preperiod, Bits period) {
    return EpSet(EpSequence::normalize(std::move(preperiod), std::move(period)));
  }
  static EpSet empty() { return EpSet(EpSequence::constant(false)); }
  static EpSet naturals() { return EpSet(EpSequence::constant(true)); }
  /// {n : n = residue mod modulus}.
  static EpSet residue_class(std::uint64_t residue, std::uint64_t modulus);

  [[nodiscard]] bool contains(std::uint64_t n) const { return ind_.at(n); }
  [[nodiscard]] const EpSequence& indicator() const { return ind_; }
  [[nodiscard]] std::uint64_t preperiod_length() const { return ind_.preperiod_length(); }
  [[nodiscard]] std::uint64_t period_length() const { return ind_.period_length(); }
  [[nodiscard]] std::string literal() const { return ind_.literal(); }

  friend bool operator==(const EpSet&, const EpSet&) = default;

 private:
  EpSequence ind_;
};

/// Orders by canonical literal; the ordering used for algebra members.
struct LiteralLess {
  bool operator()(const EpSet& a, const EpSet& b) const { return a.literal() < b.literal(); }
};

EpSet parse_epset(std::string_view text);

inline bool member(const EpSet& x, std::uint64_t n) { return x.contains(n); }
EpSet complement(const EpSet& x);
EpSet unite(const EpSet& x, const EpSet& y);
EpSet intersect(const EpSet& x, const EpSet& y);
/// X - n = {k : k + n in X}.
EpSet translate_down(const EpSet& x, std::uint64_t n);
bool is_subset(const EpSet& x, const EpSet& y);
bool is_infinite(const EpSet& x);

/// Syndeticity verdict. `bound` is the least m with X meeting every window
/// [x, x+m]; when absent, no member lies at or beyond `misses_from`.
struct GapCertificate {
  std::optional<std::uint64_t> bound;
  std::uint64_t misses_from = 0;
};

GapCertificate is_syndetic(const EpSet& x);

/// Positions 0..max preperiod + lcm period - 1, enough to distinguish any
/// two sets with those parameters.
std::uint64_t distinguishing_horizon(const EpSet& x, const EpSet& y);

}  // namespace epdyn
