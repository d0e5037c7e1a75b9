#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epdyn/algebra.hpp"
#include "epdyn/dynamics.hpp"
#include "epdyn/epset.hpp"
#include "epdyn/ipcore.hpp"

namespace epdyn {

/// Least subset of Z_p containing `residues` and closed under addition,
/// as a sorted list.
std::vector<std::uint64_t> subsemigroup_closure(const std::vector<std::uint64_t>& residues, std::uint64_t modulus);

/// Residues r mod period(X) such that X contains every large n = r (mod p).
std::vector<std::uint64_t> eventual_residues(const EpSet& x);

struct MembershipCertificate {
  bool member = false;
  std::uint64_t modulus = 1;
  /// Tail index: FS((n_i)_{i>=tail}) is inside X when member.
  std::size_t tail = 0;
  std::vector<std::uint64_t> tail_residues;
  std::vector<std::uint64_t> closure;
  /// Non-member: distinct indices >= tail whose sum lies outside X.
  std::vector<std::size_t> witness_indices;
  std::optional<std::uint64_t> witness_sum;
};

/// Exact decision of "some m has FS((n_i)_{i>=m}) inside X".
MembershipCertificate filter_member(const IpGenerator& g, const EpSet& x);

/// F((n_i)) restricted to the algebra it was built for. Copies share one
/// decision cache; lookups are safe from several threads.
class PartialUltrafilter {
 public:
  PartialUltrafilter(IpGenerator generator, Algebra scope);

  [[nodiscard]] const IpGenerator& generator() const { return generator_; }
  [[nodiscard]] const Algebra& scope() const { return *scope_; }
  [[nodiscard]] bool contains(const EpSet& x) const;

 private:
  struct Cache;
  IpGenerator generator_;
  std::shared_ptr<const Algebra> scope_;
  std::shared_ptr<Cache> cache_;
};

/// D(X) = {n : X - n in F}.
EpSet translate_membership_set(const PartialUltrafilter& f, const EpSet& x);

/// One law quantified over the audited algebra; witnesses are the sets
/// that break it (empty on PASS).
struct LawVerdict {
  bool pass = true;
  std::vector<EpSet> witness;
};

struct MemberAudit {
  EpSet set;
  EpSet dset;                                // D(X)
  bool idempotent = false;                   // D(X) in F
  std::optional<std::uint64_t> gap;          // syndeticity bound of D(X)
  std::optional<std::uint64_t> hirst;        // least n with X - n in F
  [[nodiscard]] bool pass() const { return idempotent && gap && hirst; }
};

struct FilterReport {
  std::string generator;
  std::size_t algebra_size = 0;
  LawVerdict upward_closure;
  LawVerdict intersection;
  LawVerdict non_principal;
  LawVerdict dichotomy;
  std::vector<MemberAudit> members;  // one per X in F within the algebra
  [[nodiscard]] bool all_pass() const;
  /// Name and witness of the first failing check, for error messages.
  [[nodiscard]] std::optional<std::string> first_failure() const;
};

FilterReport verify_filter(const PartialUltrafilter& f, const Algebra& a);

struct BuiltFilter {
  PartialUltrafilter filter;
  SymbolicPoint point;
  SymbolicPoint solution;
  IpConstructionCertificate certificate;
  FilterReport report;
};

inline constexpr std::size_t kFilterTerms = 4;

/// Encode, solve, construct, verify. Throws precondition_error unless `a`
/// is downward closed and construction_error if the result fails an audit.
BuiltFilter build_partial_ultrafilter(const Algebra& a);

/// y_i(k) = 0 iff A_i - k in F, where x_i encodes A_i. Throws scope_error
/// when a coordinate decodes to a set outside the filter's scope.
SymbolicPoint ultralimit(const PartialUltrafilter& f, const SymbolicPoint& x);

struct RefinementCheck {
  EpSet set;
  bool before = false;
  bool after = false;
};

struct ExtendedFilter {
  PartialUltrafilter filter;
  SymbolicPoint point;     // encoded old scope stacked on encoded new scope
  SymbolicPoint solution;  // ultralimit stacked on its eAET extension
  IpConstructionCertificate certificate;
  FilterReport report;
  std::vector<RefinementCheck> refinement;  // every member of the old scope
  [[nodiscard]] bool agrees() const;
};

/// Throws input_error unless `wider` is downward closed and contains the
/// old scope.
ExtendedFilter extend_filter(const PartialUltrafilter& f, const Algebra& wider);

struct CentralReport {
  GapCertificate syndetic;
  /// Exact: X contains FS of an infinite sequence iff it contains all
  /// large multiples of its period.
  bool ip = false;
  SearchResult ip_search;  // least 4 terms with FS inside X, sums <= bound
  bool filter_member = false;
  std::string filter_generator;
};

inline constexpr std::size_t kCentralSearchTerms = 4;

CentralReport central_check(const EpSet& x, std::uint64_t bound, std::size_t jobs = 1,
                            std::size_t cap = kDefaultAlgebraCap);

}  // namespace epdyn
