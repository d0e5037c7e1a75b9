#include "epdyn/epset.hpp"

#include <algorithm>
#include <numeric>

#include "epdyn/errors.hpp"

namespace epdyn {

namespace {

constexpr std::uint64_t kMaxPeriod = std::uint64_t{1} << 24;

std::uint64_t primitive_root_length(const Bits& word) {
  const std::size_t n = word.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = word[i] == word[i - d];
    if (ok) return d;
  }
  return n;
}

Bits parse_bits(std::string_view text, std::string_view whole) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw parse_error("bad symbol '" + std::string(1, c) + "' in literal '" + std::string(whole) + "'");
    out.push_back(c == '1');
  }
  return out;
}

void append_bits(std::string& s, const Bits& b) {
  for (bool bit : b) s.push_back(bit ? '1' : '0');
}

}  // namespace

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t l = std::lcm(a, b);
  if (l > kMaxPeriod) throw resource_error("period lcm " + std::to_string(l) + " exceeds 2^24");
  return l;
}

EpSequence::EpSequence() : per_{false} {}

EpSequence EpSequence::normalize(Bits pre, Bits per) {
  if (per.empty()) throw input_error("eventually periodic word needs a nonempty period");
  per.resize(primitive_root_length(per));
  // Absorb the preperiod tail into the period: pre.b . (w.b)^omega == pre . (b.w)^omega.
  while (!pre.empty() && pre.back() == per.back()) {
    pre.pop_back();
    std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
  }
  return EpSequence(std::move(pre), std::move(per));
}

bool EpSequence::at(std::uint64_t n) const {
  if (n < pre_.size()) return pre_[n];
  return per_[(n - pre_.size()) % per_.size()];
}

EpSequence EpSequence::shifted(std::uint64_t n) const {
  if (n <= pre_.size()) return normalize(Bits(pre_.begin() + static_cast<std::ptrdiff_t>(n), pre_.end()), per_);
  Bits per = per_;
  const auto phase = static_cast<std::ptrdiff_t>((n - pre_.size()) % per_.size());
  std::rotate(per.begin(), per.begin() + phase, per.end());
  return EpSequence({}, std::move(per));
}

EpSequence EpSequence::complemented() const {
  Bits pre = pre_, per = per_;
  pre.flip();
  per.flip();
  return EpSequence(std::move(pre), std::move(per));
}

EpSequence EpSequence::periodic_part() const {
  if (pre_.empty()) return *this;
  Bits per(per_.size());
  const std::uint64_t p = per_.size();
  const std::uint64_t offset = p - pre_.size() % p;  // phase of position 0
  for (std::uint64_t n = 0; n < p; ++n) per[n] = per_[(n + offset) % p];
  return EpSequence({}, std::move(per));
}

std::string EpSequence::literal() const {
  std::string s;
  s.reserve(pre_.size() + per_.size() + 2);
  append_bits(s, pre_);
  s.push_back('(');
  append_bits(s, per_);
  s.push_back(')');
  return s;
}

std::optional<std::uint64_t> first_disagreement(const EpSequence& a, const EpSequence& b) {
  if (a == b) return std::nullopt;
  const std::uint64_t horizon = std::max(a.preperiod_length(), b.preperiod_length()) +
                                checked_lcm(a.period_length(), b.period_length());
  for (std::uint64_t n = 0; n < horizon; ++n)
    if (a.at(n) != b.at(n)) return n;
  throw construction_error("distinct canonical sequences agree on their whole horizon");
}

EpSequence parse_sequence(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')')
    throw parse_error("expected bits(bits), got '" + std::string(text) + "'");
  const auto pre = text.substr(0, open);
  const auto per = text.substr(open + 1, text.size() - open - 2);
  if (per.find_first_of("()") != std::string_view::npos || pre.find(')') != std::string_view::npos)
    throw parse_error("unbalanced parentheses in '" + std::string(text) + "'");
  if (per.empty()) throw parse_error("empty period in '" + std::string(text) + "'");
  return EpSequence::normalize(parse_bits(pre, text), parse_bits(per, text));
}

EpSet EpSet::residue_class(std::uint64_t residue, std::uint64_t modulus) {
  if (modulus == 0 || residue >= modulus) throw input_error("residue class needs 0 <= r < p");
  Bits per(modulus);
  per[residue] = true;
  return normalize({}, std::move(per));
}

EpSet parse_epset(std::string_view text) { return EpSet(parse_sequence(text)); }

EpSet complement(const EpSet& x) { return EpSet(x.indicator().complemented()); }

EpSet unite(const EpSet& x, const EpSet& y) {
  return EpSet(combine(x.indicator(), y.indicator(), [](bool a, bool b) { return a || b; }));
}

EpSet intersect(const EpSet& x, const EpSet& y) {
  return EpSet(combine(x.indicator(), y.indicator(), [](bool a, bool b) { return a && b; }));
}

EpSet translate_down(const EpSet& x, std::uint64_t n) { return EpSet(x.indicator().shifted(n)); }

bool is_subset(const EpSet& x, const EpSet& y) {
  const std::uint64_t horizon = distinguishing_horizon(x, y);
  for (std::uint64_t n = 0; n < horizon; ++n)
    if (x.contains(n) && !y.contains(n)) return false;
  return true;
}

bool is_infinite(const EpSet& x) {
  const Bits& per = x.indicator().period();
  return std::find(per.begin(), per.end(), true) != per.end();
}

GapCertificate is_syndetic(const EpSet& x) {
  GapCertificate cert;
  if (!is_infinite(x)) {
    cert.misses_from = x.preperiod_length();
    return cert;
  }
  // Distance from each window start to the next member. Starts beyond
  // pre + per repeat, and a member always appears within one more period.
  const std::uint64_t pre = x.preperiod_length(), per = x.period_length();
  const std::uint64_t end = pre + 2 * per;
  std::uint64_t next = end;  // sentinel, overwritten before any use below
  std::uint64_t worst = 0;
  for (std::uint64_t pos = end; pos-- > 0;) {
    if (x.contains(pos)) next = pos;
    if (pos < pre + per) worst = std::max(worst, next - pos);
  }
  cert.bound = worst;
  return cert;
}

std::uint64_t distinguishing_horizon(const EpSet& x, const EpSet& y) {
  return std::max(x.preperiod_length(), y.preperiod_length()) +
         checked_lcm(x.period_length(), y.period_length());
}

}  // namespace epdyn
