#include "epdyn/ipcore.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <numeric>

#include "epdyn/errors.hpp"

namespace epdyn {

namespace {

std::vector<std::uint64_t> parse_number_list(std::string_view text, std::string_view whole) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto part = text.substr(start, comma - start);
    std::uint64_t v = 0;
    const auto* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (part.empty() || ec != std::errc{} || ptr != end)
      throw parse_error("bad number '" + std::string(part) + "' in generator '" + std::string(whole) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(v[i]);
  }
  return s;
}

// Calls f(indices, sum) for every nonempty subset of `idx` of size <= max_terms,
// smaller subsets first, each size in lexicographic order. Stops when f returns false.
template <class F>
bool for_each_small_subset(const std::vector<std::size_t>& idx, const std::vector<std::uint64_t>& value,
                           std::size_t max_terms, F&& f) {
  std::vector<std::size_t> pick;
  for (std::size_t size = 1; size <= std::min(max_terms, idx.size()); ++size) {
    pick.resize(size);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      std::vector<std::size_t> chosen;
      std::uint64_t sum = 0;
      for (std::size_t p : pick) {
        chosen.push_back(idx[p]);
        sum += value[p];
      }
      if (!f(chosen, sum)) return false;
      std::size_t k = size;
      while (k > 0 && pick[k - 1] == idx.size() - size + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return true;
}

// Depth-first lexicographic search shared by the Hindman and IHT searches.
class FsSearch {
 public:
  FsSearch(std::span<const Coloring> colorings, std::size_t length, std::uint64_t bound,
           std::optional<std::size_t> first_color)
      : colorings_(colorings), length_(length), bound_(bound), first_color_(first_color), used_(bound + 1, false) {}

  std::optional<std::vector<std::uint64_t>> run_from(std::uint64_t first) {
    if (try_push(first) && dfs()) return seq_;
    return std::nullopt;
  }

 private:
  struct Frame {
    std::vector<std::uint64_t> added;  // sums marked in used_
    std::vector<std::vector<std::uint64_t>> suffix_added;
  };

  bool fits(std::uint64_t x) const {
    // Remaining terms must each exceed the previous one.
    const std::size_t remaining = length_ - seq_.size();
    const std::uint64_t need = total_ + remaining * x + remaining * (remaining - 1) / 2;
    return need <= bound_;
  }

  bool try_push(std::uint64_t x) {
    if (!fits(x)) return false;
    const std::size_t pos = seq_.size();
    // Every new finite sum: x, and x + s for each existing sum s.
    std::vector<std::uint64_t> fresh{x};
    for (std::uint64_t s : all_sums_) fresh.push_back(x + s);
    for (std::uint64_t s : fresh)
      if (s > bound_ || used_[s]) return false;
    const std::size_t active = std::min(pos + 1, colorings_.size());
    std::vector<std::vector<std::uint64_t>> suffix_fresh(active);
    for (std::size_t j = 0; j < active; ++j) {
      const std::size_t want = (j == pos) ? colorings_[j].color(x) : suffix_color_[j];
      if (j == 0 && first_color_ && want != *first_color_) return false;
      suffix_fresh[j].push_back(x);
      if (j < pos)
        for (std::uint64_t s : suffix_sums_[j]) suffix_fresh[j].push_back(x + s);
      for (std::uint64_t s : suffix_fresh[j])
        if (colorings_[j].color(s) != want) return false;
    }
    seq_.push_back(x);
    total_ += x;
    for (std::uint64_t s : fresh) used_[s] = true;
    all_sums_.insert(all_sums_.end(), fresh.begin(), fresh.end());
    frames_.push_back({std::move(fresh), {}});
    if (pos < colorings_.size()) {
      suffix_color_.push_back(colorings_[pos].color(x));
      suffix_sums_.emplace_back();
    }
    for (std::size_t j = 0; j < active; ++j)
      suffix_sums_[j].insert(suffix_sums_[j].end(), suffix_fresh[j].begin(), suffix_fresh[j].end());
    frames_.back().suffix_added = std::move(suffix_fresh);
    return true;
  }

  void pop() {
    Frame f = std::move(frames_.back());
    frames_.pop_back();
    for (std::uint64_t s : f.added) used_[s] = false;
    all_sums_.resize(all_sums_.size() - f.added.size());
    for (std::size_t j = 0; j < f.suffix_added.size(); ++j)
      suffix_sums_[j].resize(suffix_sums_[j].size() - f.suffix_added[j].size());
    const std::size_t pos = seq_.size() - 1;
    if (pos < colorings_.size()) {
      suffix_color_.pop_back();
      suffix_sums_.pop_back();
    }
    total_ -= seq_.back();
    seq_.pop_back();
  }

  bool dfs() {
    if (seq_.size() == length_) return true;
    for (std::uint64_t x = seq_.back() + 1; fits(x); ++x) {
      if (!try_push(x)) continue;
      if (dfs()) return true;
      pop();
    }
    return false;
  }

  std::span<const Coloring> colorings_;
  std::size_t length_;
  std::uint64_t bound_;
  std::optional<std::size_t> first_color_;
  std::vector<bool> used_;
  std::vector<std::uint64_t> seq_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> all_sums_;
  std::vector<std::size_t> suffix_color_;
  std::vector<std::vector<std::uint64_t>> suffix_sums_;
  std::vector<Frame> frames_;
};

SearchResult lexicographic_search(std::span<const Coloring> colorings, std::size_t length, std::uint64_t bound,
                                  std::size_t jobs, std::optional<std::size_t> first_color = std::nullopt) {
  SearchResult result;
  result.bound = bound;
  if (length == 0) throw input_error("search needs at least one term");
  if (bound > kMaxSearchBound) throw resource_error("search bound exceeds " + std::to_string(kMaxSearchBound));
  jobs = std::max<std::size_t>(jobs, 1);
  // First terms are tried in blocks of `jobs`; the least successful first
  // term wins, so the answer does not depend on scheduling.
  for (std::uint64_t block = 1; block <= bound; block += jobs) {
    std::vector<std::future<std::optional<std::vector<std::uint64_t>>>> tasks;
    for (std::uint64_t first = block; first < block + jobs && first <= bound; ++first) {
      tasks.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async,
                                 [=] { return FsSearch(colorings, length, bound, first_color).run_from(first); }));
    }
    for (auto& t : tasks) {
      auto found = t.get();
      if (found && !result.witness) result.witness = std::move(found);
    }
    if (result.witness) break;
  }
  return result;
}

}  // namespace

IpGenerator::IpGenerator(std::vector<std::uint64_t> head, std::vector<std::uint64_t> tail_diffs)
    : head_(std::move(head)), diffs_(std::move(tail_diffs)) {
  if (head_.empty()) throw input_error("generator needs at least one head term");
  if (diffs_.empty()) throw input_error("generator needs a nonempty difference cycle");
  if (head_.front() == 0) throw input_error("generator terms must be positive");
  for (std::size_t i = 1; i < head_.size(); ++i)
    if (head_[i] <= head_[i - 1]) throw input_error("generator head must be strictly increasing");
  for (std::uint64_t d : diffs_) {
    if (d == 0) throw input_error("generator differences must be positive");
    cycle_sum_ += d;
  }
}

std::uint64_t IpGenerator::term(std::size_t i) const {
  if (i < head_.size()) return head_[i];
  const std::uint64_t steps = i - (head_.size() - 1);
  const std::uint64_t q = diffs_.size();
  std::uint64_t v = head_.back() + (steps / q) * cycle_sum_;
  for (std::uint64_t j = 0; j < steps % q; ++j) v += diffs_[j];
  return v;
}

std::vector<std::uint64_t> IpGenerator::terms(std::size_t count) const {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(term(i));
  return out;
}

std::uint64_t IpGenerator::residue_period(std::uint64_t modulus) const {
  return diffs_.size() * (modulus / std::gcd(cycle_sum_ % modulus, modulus));
}

std::string IpGenerator::literal() const { return join(head_) + "+(" + join(diffs_) + ")"; }

IpGenerator parse_generator(std::string_view text) {
  const auto plus = text.find("+(");
  if (plus == std::string_view::npos || text.back() != ')')
    throw parse_error("expected generator 'h0,h1,...+(d0,...)', got '" + std::string(text) + "'");
  auto head = parse_number_list(text.substr(0, plus), text);
  auto diffs = parse_number_list(text.substr(plus + 2, text.size() - plus - 3), text);
  try {
    return IpGenerator(std::move(head), std::move(diffs));
  } catch (const input_error& e) {
    throw parse_error(std::string(e.what()) + " in '" + std::string(text) + "'");
  }
}

std::vector<std::uint64_t> fs_enumerate(const IpGenerator& g, std::size_t from_index, std::size_t max_terms,
                                        std::uint64_t bound) {
  if (max_terms == 0 || bound == 0) throw input_error("fs_enumerate needs max_terms >= 1 and bound >= 1");
  // reach[j][s]: s is a sum of exactly j terms seen so far.
  std::vector<std::vector<bool>> reach(max_terms + 1, std::vector<bool>(bound + 1, false));
  reach[0][0] = true;
  for (std::size_t i = from_index;; ++i) {
    const std::uint64_t v = g.term(i);
    if (v > bound) break;
    for (std::size_t j = max_terms; j-- > 0;)
      for (std::uint64_t s = bound - v + 1; s-- > 0;)
        if (reach[j][s]) reach[j + 1][s + v] = true;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 1; s <= bound; ++s)
    for (std::size_t j = 1; j <= max_terms; ++j)
      if (reach[j][s]) {
        out.push_back(s);
        break;
      }
  return out;
}

IpConstructionCertificate ip_sequence_construct(const SymbolicPoint& x, const SymbolicPoint& y, std::size_t count) {
  if (count == 0) throw input_error("ip_sequence_construct needs at least one term");
  if (auto failure = aet_pair_failure(x, y))
    throw precondition_error("ip_sequence_construct: (x, y) is not an AET pair: " + *failure);

  // Past the preperiod join, T^n x = T^n y, and T^n y = y exactly when the
  // stack period divides n; such n land in every neighbourhood of y.
  const std::uint64_t join_at = std::max(x.preperiod_bound(), y.preperiod_bound());
  const std::uint64_t period = y.period_lcm();
  const std::uint64_t first = std::max<std::uint64_t>(1, (join_at + period - 1) / period) * period;

  std::vector<std::uint64_t> head;
  const std::size_t coords = y.coordinate_count();
  std::vector<Cylinder> hoods{Cylinder(y, coords, 1)};
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t n = first + i * period;
    head.push_back(n);
    // U_{i+1} sits inside B(y, 2^-(i+1)), U_i and T^-n_i U_i.
    const std::uint64_t depth = std::max<std::uint64_t>(hoods.back().pos_depth() + n, i + 2);
    hoods.emplace_back(y, coords, depth);
  }

  IpConstructionCertificate cert{IpGenerator(std::move(head), {period}), std::move(hoods), y, x};
  if (auto failure = certificate_failure(cert)) throw construction_error("ip_sequence_construct: " + *failure);
  return cert;
}

std::optional<std::string> certificate_failure(const IpConstructionCertificate& cert) {
  const auto& u = cert.neighborhoods;
  const auto& head = cert.generator.head();
  if (u.size() != head.size() + 1) return "certificate needs one more neighbourhood than terms";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i].contains(cert.target)) return "U_" + std::to_string(i) + " does not contain y";
    if (!u[i].within_ball(cert.target, i)) return "U_" + std::to_string(i) + " is not inside B(y, 2^-" + std::to_string(i) + ")";
  }
  for (std::size_t i = 0; i < head.size(); ++i) {
    const std::uint64_t n = head[i];
    const std::string at = "at i = " + std::to_string(i);
    if (!u[i + 1].subset_of(u[i])) return "U_{i+1} is not inside U_i " + at;
    if (!u[i + 1].shift_image_within(n, u[i])) return "T^n_i U_{i+1} is not inside U_i " + at;
    if (!u[i + 1].contains(shift(cert.source, n))) return "T^n_i x is not in U_{i+1} " + at;
    if (!u[i + 1].contains(shift(cert.target, n))) return "T^n_i y is not in U_{i+1} " + at;
  }
  return std::nullopt;
}

IpLimitVerdict ip_limit_check(const SymbolicPoint& x, const IpGenerator& g, std::uint64_t resolution,
                              std::size_t sum_terms, std::size_t witness_count) {
  if (sum_terms == 0 || witness_count == 0) throw input_error("ip_limit_check needs sum_terms, witness_count >= 1");
  IpLimitVerdict verdict;
  for (std::size_t m = 0; m < witness_count; ++m) {
    std::vector<std::size_t> idx(witness_count);
    std::iota(idx.begin(), idx.end(), m);
    std::vector<std::uint64_t> value;
    for (std::size_t i : idx) value.push_back(g.term(i));
    const std::uint64_t reference = value.front();
    const SymbolicPoint limit = ae_solve(shift(x, reference));
    std::optional<IpLimitCounterexample> bad;
    for_each_small_subset(idx, value, sum_terms, [&](const std::vector<std::size_t>& chosen, std::uint64_t s) {
      const Exponent e = distance_exponent(shift(x, s), limit);
      if (e && *e < resolution) {
        bad = IpLimitCounterexample{reference, s, chosen, e};
        return false;
      }
      return true;
    });
    if (!bad) {
      verdict.pass = true;
      verdict.offset = m;
      verdict.limit = limit;
      verdict.counterexample.reset();
      return verdict;
    }
    if (!verdict.counterexample) {
      verdict.counterexample = bad;
      verdict.limit = limit;
    }
  }
  return verdict;
}

Coloring::Coloring(std::vector<EpSet> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw input_error("a coloring needs at least one class");
  if (classes_.size() > kMaxColors) throw input_error("colorings are limited to 8 classes");
  std::uint64_t pre = 0, per = 1;
  for (const auto& c : classes_) {
    pre = std::max(pre, c.preperiod_length());
    per = checked_lcm(per, c.period_length());
  }
  for (std::uint64_t n = 0; n < pre + per; ++n) {
    std::size_t hits = 0;
    for (const auto& c : classes_) hits += c.contains(n);
    if (hits != 1)
      throw input_error("color classes do not partition N: position " + std::to_string(n) + " lies in " +
                        std::to_string(hits) + " classes");
  }
}

Coloring Coloring::two_class(const EpSet& color_zero) { return Coloring({color_zero, complement(color_zero)}); }

std::size_t Coloring::color(std::uint64_t n) const {
  for (std::size_t c = 0; c < classes_.size(); ++c)
    if (classes_[c].contains(n)) return c;
  throw construction_error("coloring lost its partition property");
}

std::string Coloring::literal() const {
  std::string s;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (c) s.push_back('|');
    s += classes_[c].literal();
  }
  return s;
}

Coloring parse_coloring(std::string_view text) {
  std::vector<EpSet> classes;
  std::size_t start = 0;
  for (;;) {
    const auto bar = text.find('|', start);
    classes.push_back(parse_epset(text.substr(start, bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return Coloring(std::move(classes));
}

std::optional<std::pair<std::size_t, std::uint64_t>> iht_violation(std::span<const Coloring> colorings,
                                                                   std::span<const std::uint64_t> seq) {
  for (std::size_t j = 0; j < colorings.size() && j < seq.size(); ++j) {
    const std::size_t want = colorings[j].color(seq[j]);
    std::vector<std::uint64_t> sums;
    for (std::size_t i = j; i < seq.size(); ++i) {
      const std::size_t before = sums.size();
      sums.push_back(seq[i]);
      for (std::size_t k = 0; k < before; ++k) sums.push_back(sums[k] + seq[i]);
    }
    for (std::uint64_t s : sums)
      if (colorings[j].color(s) != want) return std::pair{j, s};
  }
  return std::nullopt;
}

SearchResult hindman_search(const Coloring& c, std::size_t terms, std::uint64_t bound, std::size_t jobs) {
  if (terms < 2) throw input_error("hindman_search needs at least two terms");
  return lexicographic_search(std::span(&c, 1), terms, bound, jobs);
}

SearchResult iht_search(std::span<const Coloring> colorings, std::size_t terms, std::uint64_t bound,
                        std::size_t jobs) {
  if (colorings.empty()) throw input_error("iht_search needs at least one coloring");
  if (terms == 0) throw input_error("iht_search needs at least one term");
  return lexicographic_search(colorings, terms + colorings.size() - 1, bound, jobs);
}

SearchResult fs_subset_search(const EpSet& x, std::size_t terms, std::uint64_t bound, std::size_t jobs) {
  if (terms == 0) throw input_error("fs_subset_search needs at least one term");
  const Coloring c = Coloring::two_class(x);
  return lexicographic_search(std::span(&c, 1), terms, bound, jobs, 0);
}

bool PipelineResult::all_homogeneous() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.homogeneous; });
}

PipelineResult aet_to_iht_pipeline(std::span<const EpSet> colorings, std::size_t terms) {
  if (colorings.empty()) throw input_error("pipeline needs at least one coloring");
  if (terms == 0) throw input_error("pipeline needs at least one term");
  SymbolicPoint x = encode_point(colorings);
  SymbolicPoint y = ae_solve(x);
  IpConstructionCertificate cert = ip_sequence_construct(x, y, terms);
  std::vector<std::uint64_t> seq = cert.generator.terms(terms);

  std::vector<PipelineColoringVerdict> verdicts;
  for (std::size_t j = 0; j < colorings.size(); ++j) {
    PipelineColoringVerdict v{j, true, std::nullopt, std::nullopt};
    if (j < seq.size()) {
      const Coloring c = Coloring::two_class(colorings[j]);
      const std::size_t want = c.color(seq[j]);
      v.color = want;
      if (auto bad = iht_violation(std::span(&c, 1), std::span(seq).subspan(j))) {
        v.homogeneous = false;
        v.failing_sum = bad->second;
      }
    }
    verdicts.push_back(v);
  }
  return PipelineResult{std::move(x), std::move(y), std::move(cert), std::move(seq), std::move(verdicts)};
}

}  // namespace epdyn
