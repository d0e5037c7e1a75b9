#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epdyn/algebra.hpp"
#include "epdyn/epset.hpp"

namespace epdyn {

/// A point of the shift system on (2^N)^C: a stack of C eventually
/// periodic binary sequences. Bits are raw symbols, not membership.
class SymbolicPoint {
 public:
  explicit SymbolicPoint(std::vector<EpSequence> coords);

  [[nodiscard]] std::size_t coordinate_count() const { return coords_.size(); }
  [[nodiscard]] const std::vector<EpSequence>& coords() const { return coords_; }
  [[nodiscard]] const EpSequence& coord(std::size_t i) const { return coords_[i]; }
  [[nodiscard]] bool at(std::size_t i, std::uint64_t n) const { return coords_[i].at(n); }

  /// Largest canonical preperiod over all coordinates.
  [[nodiscard]] std::uint64_t preperiod_bound() const;
  /// lcm of the coordinate periods; the exact period of a purely periodic stack.
  [[nodiscard]] std::uint64_t period_lcm() const;

  /// Semicolon-separated coordinate literals, e.g. `1(10);(0011)`.
  [[nodiscard]] std::string literal() const;

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;

 private:
  std::vector<EpSequence> coords_;
};

SymbolicPoint parse_point(std::string_view text);

/// Concatenation of two stacks (the product system).
SymbolicPoint stack(const SymbolicPoint& top, const SymbolicPoint& bottom);

/// Characteristic-function encoding, symbol 0 <=> membership.
SymbolicPoint encode_point(std::span<const EpSet> sets);
SymbolicPoint encode_point(const Algebra& algebra);
/// Inverse of the encoding for a single coordinate.
EpSet decode_coordinate(const SymbolicPoint& x, std::size_t i);

SymbolicPoint shift(const SymbolicPoint& x, std::uint64_t n);

/// nullopt stands for an infinite exponent (equal points).
using Exponent = std::optional<std::uint64_t>;

/// e(x, y) = min over coordinates i of (i + first disagreement of x_i, y_i);
/// the metric is d = 2^-e.
Exponent distance_exponent(const SymbolicPoint& x, const SymbolicPoint& y);

/// Return-gap data at resolution k: times n with d(T^n x, x) < 2^-k.
struct ResolutionGap {
  std::uint64_t resolution = 0;
  std::uint64_t max_return_gap = 0;
};

struct RecurrenceCertificate {
  bool uniformly_recurrent = false;
  /// Resolutions checked: 0 .. checked_up_to.
  std::uint64_t checked_up_to = 0;
  /// Positive case: gaps for resolutions 0..gaps.back().resolution; every
  /// higher resolution has the same gap as the last entry.
  std::vector<ResolutionGap> gaps;
  /// Negative case: at this resolution the return-time set is finite.
  std::optional<std::uint64_t> refuting_resolution;
  std::vector<std::uint64_t> return_times;
  /// The word of x seen at the refuting resolution, one string per coordinate
  /// i <= resolution (positions 0 .. resolution - i).
  std::vector<std::string> witness_word;
};

RecurrenceCertificate is_uniformly_recurrent(const SymbolicPoint& x);

struct ProximalityCertificate {
  bool proximal = false;
  /// Preperiod join: T^n x = T^n y for all n >= asymptotic_from iff proximal.
  std::uint64_t asymptotic_from = 0;
  /// Refutation: d(T^n x, T^n y) >= 2^-e for all n >= asymptotic_from.
  std::optional<std::uint64_t> separation_exponent;
};

/// Requires equal coordinate counts.
ProximalityCertificate are_proximal(const SymbolicPoint& x, const SymbolicPoint& y);

/// Empty when (x, y) is an AET pair; otherwise names the failed check.
std::optional<std::string> aet_pair_failure(const SymbolicPoint& x, const SymbolicPoint& y);

/// A uniformly recurrent point proximal (in fact asymptotic) to x.
SymbolicPoint ae_solve(const SymbolicPoint& x);

/// Given an AET pair (x1, y1), a y2 with (y1, y2) uniformly recurrent and
/// proximal to (x1, x2). Throws precondition_error if (x1, y1) fails.
SymbolicPoint eaet_extend(const SymbolicPoint& x1, const SymbolicPoint& y1, const SymbolicPoint& x2);

/// A sliding block code of window w from `arity` stacked inputs of
/// `coords` coordinates to one output stack of `coords` coordinates.
///
/// Input bit (a, c, k) - input a, coordinate c, offset k - sits at index
/// (a * coords + c) * window + k of the table row number; each output
/// coordinate has its own table of 2^(arity*coords*window) bits.
class BlockCode {
 public:
  BlockCode(std::size_t arity, std::size_t coords, std::size_t window, std::vector<Bits> tables);

  static BlockCode identity(std::size_t coords);
  static BlockCode negation(std::size_t coords);

  [[nodiscard]] std::size_t arity() const { return arity_; }
  [[nodiscard]] std::size_t coords() const { return coords_; }
  [[nodiscard]] std::size_t window() const { return window_; }
  [[nodiscard]] const std::vector<Bits>& tables() const { return tables_; }
  [[nodiscard]] bool output(std::size_t coord, std::uint64_t row) const { return tables_[coord][row]; }

  /// `arity,coords,window:table;table;...`
  [[nodiscard]] std::string literal() const;

 private:
  std::size_t arity_, coords_, window_;
  std::vector<Bits> tables_;
};

inline constexpr std::size_t kMaxBlockInputBits = 20;

BlockCode parse_block_code(std::string_view text);

SymbolicPoint apply_block_code(const BlockCode& code, std::span<const SymbolicPoint> inputs);

/// Iterated extension: y_0 = ae_solve(t0), then each y_i extends the
/// solution to the point t_i(y_0, ..., y_{i-1}).
struct EaetPrimeResult {
  std::vector<SymbolicPoint> targets;    // t0, t1(y0), t2(y0, y1), ...
  std::vector<SymbolicPoint> solutions;  // y0, y1, ...
};

EaetPrimeResult eaet_prime(const SymbolicPoint& t0, std::span<const BlockCode> codes);

/// {z : z_i(n) = reference_i(n) for i < coord_depth, n < pos_depth}.
class Cylinder {
 public:
  Cylinder(SymbolicPoint reference, std::size_t coord_depth, std::uint64_t pos_depth);

  [[nodiscard]] const SymbolicPoint& reference() const { return ref_; }
  [[nodiscard]] std::size_t coord_depth() const { return coord_depth_; }
  [[nodiscard]] std::uint64_t pos_depth() const { return pos_depth_; }
  [[nodiscard]] bool constrains(std::size_t i, std::uint64_t n) const { return i < coord_depth_ && n < pos_depth_; }

  [[nodiscard]] bool contains(const SymbolicPoint& z) const;
  /// this is a subset of other.
  [[nodiscard]] bool subset_of(const Cylinder& other) const;
  /// T^n(this) is a subset of other.
  [[nodiscard]] bool shift_image_within(std::uint64_t n, const Cylinder& other) const;
  /// this is a subset of the open ball B(y, 2^-radius_exponent).
  [[nodiscard]] bool within_ball(const SymbolicPoint& y, std::uint64_t radius_exponent) const;

  /// `coord_depth,pos_depth@point`
  [[nodiscard]] std::string literal() const;

 private:
  SymbolicPoint ref_;
  std::size_t coord_depth_;
  std::uint64_t pos_depth_;
};

Cylinder parse_cylinder(std::string_view text);

/// Orbit closure of an eventually periodic point: all distinct shifts, in
/// order of first appearance.
std::vector<SymbolicPoint> orbit_closure(const SymbolicPoint& y);

/// Least m such that every point of the orbit closure of the uniformly
/// recurrent y enters U within m shifts.
std::uint64_t covering_bound(const SymbolicPoint& y, const Cylinder& u);

}  // namespace epdyn
