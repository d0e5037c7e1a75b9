#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epdyn/dynamics.hpp"
#include "epdyn/epset.hpp"

namespace epdyn {

/// A strictly increasing sequence n_0 < n_1 < ... : explicit head terms,
/// then n_{i+1} = n_i + tail_diffs[(i - (|head| - 1)) mod |tail_diffs|].
///
/// Literal form `h0,h1,...+(d0,d1,...)`, e.g. `1,2+(3,1)` = 1,2,5,6,9,10,...
class IpGenerator {
 public:
  IpGenerator(std::vector<std::uint64_t> head, std::vector<std::uint64_t> tail_diffs);

  [[nodiscard]] const std::vector<std::uint64_t>& head() const { return head_; }
  [[nodiscard]] const std::vector<std::uint64_t>& tail_diffs() const { return diffs_; }

  [[nodiscard]] std::uint64_t term(std::size_t i) const;
  [[nodiscard]] std::vector<std::uint64_t> terms(std::size_t count) const;

  /// From this index on, (n_i mod p) is purely periodic for every p.
  [[nodiscard]] std::size_t residue_phase_start() const { return head_.size() - 1; }
  /// A period of (n_i mod p) from residue_phase_start() on.
  [[nodiscard]] std::uint64_t residue_period(std::uint64_t modulus) const;

  [[nodiscard]] std::string literal() const;

  friend bool operator==(const IpGenerator&, const IpGenerator&) = default;

 private:
  std::vector<std::uint64_t> head_;
  std::vector<std::uint64_t> diffs_;
  std::uint64_t cycle_sum_ = 0;
};

IpGenerator parse_generator(std::string_view text);

/// All sums of 1..max_terms distinct-index terms n_i, i >= from_index,
/// that are <= bound. Sorted, deduplicated.
std::vector<std::uint64_t> fs_enumerate(const IpGenerator& g, std::size_t from_index, std::size_t max_terms,
                                        std::uint64_t bound);

/// The neighbourhood chain behind an IP-limit T^n x -> y along FS((n_i)).
/// neighborhoods[i] is U_i, i = 0 .. terms; generator.head() holds n_0..n_{terms-1}.
struct IpConstructionCertificate {
  IpGenerator generator;
  std::vector<Cylinder> neighborhoods;
  SymbolicPoint target;  // y
  SymbolicPoint source;  // x
};

/// Builds `count` terms (count >= 1) for an AET pair (x, y).
/// Throws precondition_error if (x, y) is not an AET pair.
IpConstructionCertificate ip_sequence_construct(const SymbolicPoint& x, const SymbolicPoint& y, std::size_t count);

/// Re-checks every chain condition from scratch; empty when all hold,
/// otherwise the first failure.
std::optional<std::string> certificate_failure(const IpConstructionCertificate& cert);

struct IpLimitCounterexample {
  std::uint64_t reference_sum = 0;  // the sum that fixed the candidate limit
  std::uint64_t sum = 0;
  std::vector<std::size_t> indices;
  Exponent exponent;  // e(T^sum x, limit)
};

/// Bounded check of iplim T^n x along FS((n_i)). Always a semidecision.
struct IpLimitVerdict {
  bool pass = false;
  std::optional<std::size_t> offset;  // tail index m that passed
  std::optional<SymbolicPoint> limit;
  std::optional<IpLimitCounterexample> counterexample;
};

IpLimitVerdict ip_limit_check(const SymbolicPoint& x, const IpGenerator& g, std::uint64_t resolution,
                              std::size_t sum_terms, std::size_t witness_count);

/// A finite coloring of N by eventually periodic classes.
class Coloring {
 public:
  /// Throws input_error with a position witness unless the classes
  /// partition N; at most kMaxColors classes.
  explicit Coloring(std::vector<EpSet> classes);
  /// Two-class coloring {set, complement(set)}.
  static Coloring two_class(const EpSet& color_zero);

  [[nodiscard]] const std::vector<EpSet>& classes() const { return classes_; }
  [[nodiscard]] std::size_t color(std::uint64_t n) const;
  /// Classes separated by '|', e.g. `(10)|(01)`.
  [[nodiscard]] std::string literal() const;

  static constexpr std::size_t kMaxColors = 8;

 private:
  std::vector<EpSet> classes_;
};

Coloring parse_coloring(std::string_view text);

/// Largest sum bound the searches accept; they keep a table of all sums.
inline constexpr std::uint64_t kMaxSearchBound = std::uint64_t{1} << 24;

struct SearchResult {
  std::optional<std::vector<std::uint64_t>> witness;
  std::uint64_t bound = 0;
  [[nodiscard]] bool exhausted() const { return !witness; }
};

/// First failing (suffix index j, sum) of the IHT homogeneity property:
/// FS(seq[j..]) monochromatic for colorings[j]. Empty when it holds.
std::optional<std::pair<std::size_t, std::uint64_t>> iht_violation(std::span<const Coloring> colorings,
                                                                   std::span<const std::uint64_t> seq);

/// Lexicographically least x_1 < ... < x_k of positive integers whose
/// 2^k - 1 finite sums are pairwise distinct, all <= bound, and
/// monochromatic. `jobs` only affects speed.
SearchResult hindman_search(const Coloring& c, std::size_t terms, std::uint64_t bound, std::size_t jobs = 1);

/// Least x_1 < ... < x_k (same sum-distinctness and bound rules) with
/// every finite sum in x.
SearchResult fs_subset_search(const EpSet& x, std::size_t terms, std::uint64_t bound, std::size_t jobs = 1);

/// Least sequence of length terms + |colorings| - 1 (same sum-distinctness
/// and bound rules) whose suffix from j has monochromatic FS under
/// colorings[j].
SearchResult iht_search(std::span<const Coloring> colorings, std::size_t terms, std::uint64_t bound,
                        std::size_t jobs = 1);

struct PipelineColoringVerdict {
  std::size_t coloring = 0;
  bool homogeneous = false;
  std::optional<std::size_t> color;  // common color of the checked sums
  std::optional<std::uint64_t> failing_sum;
};

/// Colorings -> point -> AET solution -> IP sequence -> IHT witness.
struct PipelineResult {
  SymbolicPoint point;
  SymbolicPoint solution;
  IpConstructionCertificate certificate;
  std::vector<std::uint64_t> terms;
  std::vector<PipelineColoringVerdict> verdicts;
  [[nodiscard]] bool all_homogeneous() const;
};

/// Each coloring is given by its color-0 class.
PipelineResult aet_to_iht_pipeline(std::span<const EpSet> colorings, std::size_t terms);

}  // namespace epdyn
