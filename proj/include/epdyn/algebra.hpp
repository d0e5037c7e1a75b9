#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "epdyn/epset.hpp"

namespace epdyn {

inline constexpr std::size_t kDefaultAlgebraCap = 65536;

/// A finite Boolean algebra of eventually periodic sets, optionally closed
/// under downward translation.
///
/// Every member is a union of atoms; member i carries the bitmask of its
/// atoms, which makes subset and intersection tests within the algebra
/// plain bit operations. Members are sorted by canonical literal.
class Algebra {
 public:
  [[nodiscard]] const std::vector<EpSet>& members() const { return members_; }
  [[nodiscard]] const std::vector<EpSet>& generators() const { return generators_; }
  [[nodiscard]] const std::vector<EpSet>& atoms() const { return atoms_; }
  [[nodiscard]] bool downward_closed() const { return downward_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }

  [[nodiscard]] std::uint32_t mask(std::size_t member_index) const { return masks_[member_index]; }
  [[nodiscard]] std::size_t index_of_mask(std::uint32_t m) const { return by_mask_[m]; }
  [[nodiscard]] std::uint32_t full_mask() const {
    return static_cast<std::uint32_t>((std::uint64_t{1} << atoms_.size()) - 1);
  }
  [[nodiscard]] std::optional<std::size_t> index_of(const EpSet& x) const;
  [[nodiscard]] bool contains(const EpSet& x) const { return index_of(x).has_value(); }

 private:
  friend Algebra generate_algebra(std::span<const EpSet>, bool, std::size_t);

  std::vector<EpSet> members_;
  std::vector<EpSet> generators_;
  std::vector<EpSet> atoms_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::uint32_t> by_mask_;
  std::unordered_map<std::string, std::size_t> index_;
  bool downward_ = false;
};

/// Least algebra containing `generators` (and, if `downward`, every
/// translation X - n). Throws resource_error when it would exceed `cap`
/// members, input_error on an empty generator list.
Algebra generate_algebra(std::span<const EpSet> generators, bool downward,
                         std::size_t cap = kDefaultAlgebraCap);

/// True when every member of `small` is a member of `large`.
bool is_subalgebra(const Algebra& small, const Algebra& large);

}  // namespace epdyn
