#include "epdyn/filters.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "epdyn/errors.hpp"

namespace epdyn {

std::vector<std::uint64_t> subsemigroup_closure(const std::vector<std::uint64_t>& residues, std::uint64_t modulus) {
  if (modulus == 0) throw input_error("subsemigroup_closure needs a positive modulus");
  if (residues.empty()) throw input_error("subsemigroup_closure needs at least one residue");
  std::vector<bool> seen(modulus, false);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t r : residues) {
    if (r >= modulus) throw input_error("residue " + std::to_string(r) + " is not below " + std::to_string(modulus));
    if (!seen[r]) {
      seen[r] = true;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    const std::uint64_t u = queue.front();
    queue.pop_front();
    for (std::uint64_t r : residues) {
      const std::uint64_t v = (u + r) % modulus;
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < modulus; ++r)
    if (seen[r]) out.push_back(r);
  return out;
}

std::vector<std::uint64_t> eventual_residues(const EpSet& x) {
  const std::uint64_t p = x.period_length(), pre = x.preperiod_length();
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < p; ++r)
    if (x.contains(pre + (r + p - pre % p) % p)) out.push_back(r);
  return out;
}

MembershipCertificate filter_member(const IpGenerator& g, const EpSet& x) {
  MembershipCertificate cert;
  const std::uint64_t p = x.period_length();
  cert.modulus = p;
  std::size_t m = g.residue_phase_start();
  while (g.term(m) < x.preperiod_length()) ++m;
  cert.tail = m;

  const std::uint64_t cycle = g.residue_period(p);
  std::vector<bool> in_tail(p, false);
  for (std::uint64_t i = 0; i < cycle; ++i) in_tail[g.term(m + i) % p] = true;
  for (std::uint64_t r = 0; r < p; ++r)
    if (in_tail[r]) cert.tail_residues.push_back(r);
  cert.closure = subsemigroup_closure(cert.tail_residues, p);

  const auto good = eventual_residues(x);
  std::vector<bool> allowed(p, false);
  for (std::uint64_t r : good) allowed[r] = true;
  cert.member = std::all_of(cert.closure.begin(), cert.closure.end(), [&](std::uint64_t r) { return allowed[r]; });
  if (cert.member) return cert;

  // Shortest residue word reaching a forbidden residue.
  const auto& tail = cert.tail_residues;
  std::vector<std::optional<std::uint64_t>> parent(p);
  std::vector<std::uint64_t> via(p, 0);
  std::vector<bool> seen(p, false);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t r : tail) {
    seen[r] = true;
    via[r] = r;
    queue.push_back(r);
  }
  std::optional<std::uint64_t> bad;
  while (!queue.empty() && !bad) {
    const std::uint64_t u = queue.front();
    queue.pop_front();
    if (!allowed[u]) {
      bad = u;
      break;
    }
    for (std::uint64_t r : tail) {
      const std::uint64_t v = (u + r) % p;
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        via[v] = r;
        queue.push_back(v);
      }
    }
  }
  if (!bad) throw construction_error("filter_member: closure left the allowed residues but no path was found");

  std::vector<std::uint64_t> word;
  for (std::optional<std::uint64_t> at = *bad; at; at = parent[*at]) word.push_back(via[*at]);

  // Each tail residue recurs once per cycle, so distinct indices exist.
  std::uint64_t sum = 0;
  for (std::uint64_t r : word) {
    std::size_t i = m;
    while (std::find(cert.witness_indices.begin(), cert.witness_indices.end(), i) != cert.witness_indices.end() ||
           g.term(i) % p != r)
      ++i;
    cert.witness_indices.push_back(i);
    sum += g.term(i);
  }
  std::sort(cert.witness_indices.begin(), cert.witness_indices.end());
  if (x.contains(sum)) throw construction_error("filter_member: witness sum " + std::to_string(sum) + " lies in the set");
  cert.witness_sum = sum;
  return cert;
}

struct PartialUltrafilter::Cache {
  std::mutex mutex;
  std::unordered_map<std::string, bool> decided;
};

PartialUltrafilter::PartialUltrafilter(IpGenerator generator, Algebra scope)
    : generator_(std::move(generator)),
      scope_(std::make_shared<const Algebra>(std::move(scope))),
      cache_(std::make_shared<Cache>()) {}

bool PartialUltrafilter::contains(const EpSet& x) const {
  const std::string key = x.literal();
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->decided.find(key); it != cache_->decided.end()) return it->second;
  }
  const bool member = filter_member(generator_, x).member;
  std::lock_guard lock(cache_->mutex);
  cache_->decided.emplace(key, member);
  return member;
}

EpSet translate_membership_set(const PartialUltrafilter& f, const EpSet& x) {
  // Past the preperiod, X - n depends only on n mod period(X).
  const std::uint64_t pre = x.preperiod_length(), per = x.period_length();
  Bits head(pre), cycle(per);
  for (std::uint64_t n = 0; n < pre; ++n) head[n] = f.contains(translate_down(x, n));
  for (std::uint64_t r = 0; r < per; ++r) cycle[r] = f.contains(translate_down(x, pre + r));
  return EpSet::normalize(std::move(head), std::move(cycle));
}

bool FilterReport::all_pass() const {
  return upward_closure.pass && intersection.pass && non_principal.pass && dichotomy.pass &&
         std::all_of(members.begin(), members.end(), [](const MemberAudit& m) { return m.pass(); });
}

std::optional<std::string> FilterReport::first_failure() const {
  auto sets = [](const LawVerdict& v) {
    std::string s;
    for (const auto& w : v.witness) s += " " + w.literal();
    return s;
  };
  if (!upward_closure.pass) return "upward closure:" + sets(upward_closure);
  if (!intersection.pass) return "intersection:" + sets(intersection);
  if (!non_principal.pass) return "non-principality:" + sets(non_principal);
  if (!dichotomy.pass) return "dichotomy:" + sets(dichotomy);
  for (const auto& m : members) {
    if (!m.idempotent) return "idempotency: D(" + m.set.literal() + ") = " + m.dset.literal() + " is not a member";
    if (!m.gap) return "minimality: D(" + m.set.literal() + ") = " + m.dset.literal() + " is not syndetic";
    if (!m.hirst) return "Hirst: no n with " + m.set.literal() + " - n a member";
  }
  return std::nullopt;
}

FilterReport verify_filter(const PartialUltrafilter& f, const Algebra& a) {
  FilterReport report;
  report.generator = f.generator().literal();
  report.algebra_size = a.size();

  const std::uint32_t full = a.full_mask();
  std::vector<bool> in(std::size_t{full} + 1, false);
  std::vector<std::uint32_t> in_masks;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (f.contains(a.members()[i])) {
      in[a.mask(i)] = true;
      in_masks.push_back(a.mask(i));
    }
  }
  std::sort(in_masks.begin(), in_masks.end());
  auto set_of = [&](std::uint32_t m) { return a.members()[a.index_of_mask(m)]; };

  for (std::uint32_t x : in_masks) {
    const std::uint32_t rest = full & ~x;
    bool ok = true;
    for (std::uint32_t sub = rest; sub != 0 && ok; sub = (sub - 1) & rest) {
      if (!in[x | sub]) {
        report.upward_closure = {false, {set_of(x), set_of(x | sub)}};
        ok = false;
      }
    }
    if (!ok) break;
  }

  for (std::size_t i = 0; i < in_masks.size() && report.intersection.pass; ++i)
    for (std::size_t j = i + 1; j < in_masks.size(); ++j)
      if (!in[in_masks[i] & in_masks[j]]) {
        report.intersection = {false, {set_of(in_masks[i]), set_of(in_masks[j])}};
        break;
      }

  for (std::uint32_t x : in_masks)
    if (!is_infinite(set_of(x))) {
      report.non_principal = {false, {set_of(x)}};
      break;
    }

  for (std::uint32_t x = 0; x <= full; ++x)
    if (in[x] == in[full & ~x]) {
      report.dichotomy = {false, {set_of(x)}};
      break;
    }

  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!in[a.mask(i)]) continue;
    const EpSet& x = a.members()[i];
    MemberAudit audit{x, translate_membership_set(f, x), false, std::nullopt, std::nullopt};
    audit.idempotent = f.contains(audit.dset);
    audit.gap = is_syndetic(audit.dset).bound;
    const std::uint64_t horizon = audit.dset.preperiod_length() + audit.dset.period_length();
    for (std::uint64_t n = 0; n < horizon; ++n)
      if (audit.dset.contains(n)) {
        audit.hirst = n;
        break;
      }
    report.members.push_back(std::move(audit));
  }
  return report;
}

BuiltFilter build_partial_ultrafilter(const Algebra& a) {
  if (!a.downward_closed())
    throw precondition_error("build_partial_ultrafilter needs an algebra closed under downward translation");
  SymbolicPoint x = encode_point(a);
  SymbolicPoint y = ae_solve(x);
  IpConstructionCertificate cert = ip_sequence_construct(x, y, kFilterTerms);
  PartialUltrafilter f(cert.generator, a);
  FilterReport report = verify_filter(f, a);
  if (auto failure = report.first_failure())
    throw construction_error("built filter " + report.generator + " fails " + *failure);
  return BuiltFilter{std::move(f), std::move(x), std::move(y), std::move(cert), std::move(report)};
}

SymbolicPoint ultralimit(const PartialUltrafilter& f, const SymbolicPoint& x) {
  std::vector<EpSet> dsets;
  for (std::size_t i = 0; i < x.coordinate_count(); ++i) {
    const EpSet a = decode_coordinate(x, i);
    if (!f.scope().contains(a))
      throw scope_error("ultralimit: coordinate " + std::to_string(i) + " encodes " + a.literal() +
                        ", which is outside the filter's algebra");
    dsets.push_back(translate_membership_set(f, a));
  }
  SymbolicPoint y = encode_point(dsets);
  if (!is_uniformly_recurrent(y).uniformly_recurrent)
    throw construction_error("ultralimit " + y.literal() + " is not uniformly recurrent");
  if (!are_proximal(x, y).proximal) throw construction_error("ultralimit " + y.literal() + " is not proximal to x");
  return y;
}

bool ExtendedFilter::agrees() const {
  return std::all_of(refinement.begin(), refinement.end(), [](const RefinementCheck& r) { return r.before == r.after; });
}

ExtendedFilter extend_filter(const PartialUltrafilter& f, const Algebra& wider) {
  if (!wider.downward_closed()) throw input_error("extend_filter needs a downward-closed algebra");
  for (const EpSet& x : f.scope().members())
    if (!wider.contains(x)) throw input_error("extend_filter: new algebra is missing " + x.literal());

  const SymbolicPoint x1 = encode_point(f.scope());
  const SymbolicPoint y1 = ultralimit(f, x1);
  const SymbolicPoint x2 = encode_point(wider);
  const SymbolicPoint y2 = eaet_extend(x1, y1, x2);
  SymbolicPoint x = stack(x1, x2);
  SymbolicPoint y = stack(y1, y2);
  IpConstructionCertificate cert = ip_sequence_construct(x, y, kFilterTerms);
  PartialUltrafilter g(cert.generator, wider);
  FilterReport report = verify_filter(g, wider);
  if (auto failure = report.first_failure())
    throw construction_error("extended filter " + report.generator + " fails " + *failure);

  std::vector<RefinementCheck> refinement;
  for (const EpSet& a : f.scope().members()) refinement.push_back({a, f.contains(a), g.contains(a)});
  ExtendedFilter out{std::move(g), std::move(x), std::move(y), std::move(cert), std::move(report),
                     std::move(refinement)};
  if (!out.agrees()) throw construction_error("extended filter disagrees with its predecessor on the old algebra");
  return out;
}

CentralReport central_check(const EpSet& x, std::uint64_t bound, std::size_t jobs, std::size_t cap) {
  CentralReport report;
  report.syndetic = is_syndetic(x);
  const auto residues = eventual_residues(x);
  report.ip = !residues.empty() && residues.front() == 0;
  report.ip_search = fs_subset_search(x, kCentralSearchTerms, bound, jobs);
  const EpSet generators[] = {x};
  const BuiltFilter built = build_partial_ultrafilter(generate_algebra(generators, true, cap));
  report.filter_member = built.filter.contains(x);
  report.filter_generator = built.filter.generator().literal();
  return report;
}

}  // namespace epdyn
