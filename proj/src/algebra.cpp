#include "epdyn/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "epdyn/errors.hpp"

namespace epdyn {

std::optional<std::size_t> Algebra::index_of(const EpSet& x) const {
  const auto it = index_.find(x.literal());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Algebra generate_algebra(std::span<const EpSet> generators, bool downward, std::size_t cap) {
  if (generators.empty()) throw input_error("generate_algebra needs at least one generator");

  std::vector<EpSet> family(generators.begin(), generators.end());
  if (downward) {
    for (const EpSet& g : generators) {
      // X - n for n >= |pre| cycles with period |per|.
      const std::uint64_t distinct = g.preperiod_length() + g.period_length();
      for (std::uint64_t n = 1; n < distinct; ++n) family.push_back(translate_down(g, n));
    }
  }

  std::uint64_t pre = 0, per = 1;
  for (const EpSet& f : family) {
    pre = std::max(pre, f.preperiod_length());
    per = checked_lcm(per, f.period_length());
  }

  // Cells: positions n < pre individually, then one cell per residue of the
  // periodic part. Every family member is constant on each cell.
  const std::uint64_t cells = pre + per;
  std::vector<std::uint32_t> atom_of(cells);
  std::map<Bits, std::uint32_t> by_signature;
  std::vector<Bits> signatures;
  for (std::uint64_t c = 0; c < cells; ++c) {
    Bits sig(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) sig[j] = family[j].contains(c);
    auto [it, inserted] = by_signature.try_emplace(sig, static_cast<std::uint32_t>(signatures.size()));
    if (inserted) signatures.push_back(sig);
    atom_of[c] = it->second;
  }

  const std::size_t atom_count = signatures.size();
  if (atom_count >= 32 || (std::uint64_t{1} << atom_count) > cap)
    throw resource_error("algebra closure has " + std::to_string(atom_count) + " atoms, exceeding the cap of " +
                         std::to_string(cap) + " members");

  auto union_of = [&](std::uint32_t m) {
    Bits raw_pre(pre), raw_per(per);
    for (std::uint64_t c = 0; c < pre; ++c) raw_pre[c] = (m >> atom_of[c]) & 1U;
    for (std::uint64_t r = 0; r < per; ++r) raw_per[r] = (m >> atom_of[pre + r]) & 1U;
    return EpSet::normalize(std::move(raw_pre), std::move(raw_per));
  };

  Algebra a;
  a.downward_ = downward;
  a.generators_.assign(generators.begin(), generators.end());
  for (std::size_t k = 0; k < atom_count; ++k) a.atoms_.push_back(union_of(std::uint32_t{1} << k));

  const std::uint32_t total = std::uint32_t{1} << atom_count;
  std::vector<std::pair<EpSet, std::uint32_t>> entries;
  entries.reserve(total);
  for (std::uint32_t m = 0; m < total; ++m) entries.emplace_back(union_of(m), m);
  std::vector<std::string> literals(total);
  for (std::uint32_t m = 0; m < total; ++m) literals[m] = entries[m].first.literal();
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t l, std::uint32_t r) { return literals[l] < literals[r]; });

  a.members_.reserve(total);
  a.masks_.reserve(total);
  a.by_mask_.resize(total);
  for (std::uint32_t m : order) {
    a.by_mask_[m] = static_cast<std::uint32_t>(a.members_.size());
    a.index_.emplace(literals[m], a.members_.size());
    a.members_.push_back(std::move(entries[m].first));
    a.masks_.push_back(m);
  }
  return a;
}

bool is_subalgebra(const Algebra& small, const Algebra& large) {
  return std::all_of(small.members().begin(), small.members().end(),
                     [&](const EpSet& x) { return large.contains(x); });
}

}  // namespace epdyn
