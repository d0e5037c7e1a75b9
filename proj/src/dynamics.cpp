#include "epdyn/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "epdyn/errors.hpp"

namespace epdyn {

namespace {

void require_same_count(const SymbolicPoint& x, const SymbolicPoint& y, const char* op) {
  if (x.coordinate_count() != y.coordinate_count())
    throw input_error(std::string(op) + ": coordinate counts differ (" + std::to_string(x.coordinate_count()) +
                      " vs " + std::to_string(y.coordinate_count()) + ")");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_natural(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw parse_error("bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

// Exponent-limited distance: stops scanning once no coordinate can beat `cap`.
std::uint64_t exponent_or(const SymbolicPoint& x, const SymbolicPoint& y, std::uint64_t infinity) {
  std::uint64_t best = infinity;
  for (std::size_t i = 0; i < x.coordinate_count() && i < best; ++i) {
    if (auto d = first_disagreement(x.coord(i), y.coord(i))) best = std::min(best, i + *d);
  }
  return best;
}

constexpr std::uint64_t kInfinite = ~std::uint64_t{0};

}  // namespace

SymbolicPoint::SymbolicPoint(std::vector<EpSequence> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw input_error("a symbolic point needs at least one coordinate");
}

std::uint64_t SymbolicPoint::preperiod_bound() const {
  std::uint64_t p = 0;
  for (const auto& c : coords_) p = std::max(p, c.preperiod_length());
  return p;
}

std::uint64_t SymbolicPoint::period_lcm() const {
  std::uint64_t l = 1;
  for (const auto& c : coords_) l = checked_lcm(l, c.period_length());
  return l;
}

std::string SymbolicPoint::literal() const {
  std::string s;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s.push_back(';');
    s += coords_[i].literal();
  }
  return s;
}

SymbolicPoint parse_point(std::string_view text) {
  std::vector<EpSequence> coords;
  for (auto part : split(text, ';')) coords.push_back(parse_sequence(part));
  return SymbolicPoint(std::move(coords));
}

SymbolicPoint stack(const SymbolicPoint& top, const SymbolicPoint& bottom) {
  std::vector<EpSequence> coords = top.coords();
  coords.insert(coords.end(), bottom.coords().begin(), bottom.coords().end());
  return SymbolicPoint(std::move(coords));
}

SymbolicPoint encode_point(std::span<const EpSet> sets) {
  std::vector<EpSequence> coords;
  coords.reserve(sets.size());
  for (const EpSet& s : sets) coords.push_back(s.indicator().complemented());
  return SymbolicPoint(std::move(coords));
}

SymbolicPoint encode_point(const Algebra& algebra) { return encode_point(std::span(algebra.members())); }

EpSet decode_coordinate(const SymbolicPoint& x, std::size_t i) { return EpSet(x.coord(i).complemented()); }

SymbolicPoint shift(const SymbolicPoint& x, std::uint64_t n) {
  std::vector<EpSequence> coords;
  coords.reserve(x.coordinate_count());
  for (const auto& c : x.coords()) coords.push_back(c.shifted(n));
  return SymbolicPoint(std::move(coords));
}

Exponent distance_exponent(const SymbolicPoint& x, const SymbolicPoint& y) {
  require_same_count(x, y, "distance_exponent");
  const std::uint64_t e = exponent_or(x, y, kInfinite);
  if (e == kInfinite) return std::nullopt;
  return e;
}

RecurrenceCertificate is_uniformly_recurrent(const SymbolicPoint& x) {
  RecurrenceCertificate cert;
  const std::uint64_t pre = x.preperiod_bound();
  const std::uint64_t per = x.period_lcm();
  cert.checked_up_to = x.coordinate_count() + pre + per;

  // e_n = e(T^n x, x) for the shifts that determine every return set.
  std::vector<std::uint64_t> e(pre + per + 1);
  for (std::uint64_t n = 0; n <= pre + per; ++n) e[n] = exponent_or(shift(x, n), x, kInfinite);

  if (pre == 0) {
    cert.uniformly_recurrent = true;
    // Return set at resolution k is {n : e_n > k}, periodic with period per
    // and containing 0; gaps stabilise once k passes every finite e_n.
    std::uint64_t top = 0;
    for (std::uint64_t n = 1; n < per; ++n) top = std::max(top, e[n]);
    for (std::uint64_t k = 0; k <= top; ++k) {
      std::uint64_t last = 0, gap = 0;
      for (std::uint64_t n = 1; n <= per; ++n) {
        if (e[n] > k) {
          gap = std::max(gap, n - last);
          last = n;
        }
      }
      cert.gaps.push_back({k, gap});
    }
    return cert;
  }

  // Not purely periodic: the shifts past the preperiod never reproduce x,
  // so some resolution sees only finitely many returns.
  std::uint64_t k = 0;
  for (std::uint64_t n = pre; n < pre + per; ++n) k = std::max(k, e[n]);
  cert.refuting_resolution = k;
  for (std::uint64_t n = 0; n < pre; ++n)
    if (e[n] > k) cert.return_times.push_back(n);
  for (std::size_t i = 0; i < x.coordinate_count() && i <= k; ++i) {
    std::string w;
    for (std::uint64_t n = 0; n + i <= k; ++n) w.push_back(x.at(i, n) ? '1' : '0');
    cert.witness_word.push_back(std::move(w));
  }
  return cert;
}

ProximalityCertificate are_proximal(const SymbolicPoint& x, const SymbolicPoint& y) {
  require_same_count(x, y, "are_proximal");
  ProximalityCertificate cert;
  cert.asymptotic_from = std::max(x.preperiod_bound(), y.preperiod_bound());
  const SymbolicPoint xs = shift(x, cert.asymptotic_from), ys = shift(y, cert.asymptotic_from);
  if (xs == ys) {
    cert.proximal = true;
    return cert;
  }
  // Past the preperiods the pair cycles with period lcm; distinct pairs stay distinct.
  const std::uint64_t per = checked_lcm(x.period_lcm(), y.period_lcm());
  std::uint64_t worst = 0;
  for (std::uint64_t n = 0; n < per; ++n) worst = std::max(worst, exponent_or(shift(xs, n), shift(ys, n), kInfinite));
  cert.separation_exponent = worst;
  return cert;
}

std::optional<std::string> aet_pair_failure(const SymbolicPoint& x, const SymbolicPoint& y) {
  if (x.coordinate_count() != y.coordinate_count()) return "coordinate counts differ";
  if (!is_uniformly_recurrent(y).uniformly_recurrent) return "y is not uniformly recurrent";
  if (!are_proximal(x, y).proximal) return "x and y are not proximal";
  return std::nullopt;
}

SymbolicPoint ae_solve(const SymbolicPoint& x) {
  std::vector<EpSequence> coords;
  coords.reserve(x.coordinate_count());
  for (const auto& c : x.coords()) coords.push_back(c.periodic_part());
  return SymbolicPoint(std::move(coords));
}

SymbolicPoint eaet_extend(const SymbolicPoint& x1, const SymbolicPoint& y1, const SymbolicPoint& x2) {
  if (auto failure = aet_pair_failure(x1, y1)) throw precondition_error("eaet_extend: (x1, y1) is not an AET pair: " + *failure);
  SymbolicPoint y2 = ae_solve(x2);
  const SymbolicPoint x = stack(x1, x2), y = stack(y1, y2);
  if (auto failure = aet_pair_failure(x, y)) throw construction_error("eaet_extend produced a bad extension: " + *failure);
  return y2;
}

BlockCode::BlockCode(std::size_t arity, std::size_t coords, std::size_t window, std::vector<Bits> tables)
    : arity_(arity), coords_(coords), window_(window), tables_(std::move(tables)) {
  if (arity_ == 0 || coords_ == 0 || window_ == 0) throw input_error("block code needs arity, coords, window >= 1");
  const std::size_t bits = arity_ * coords_ * window_;
  if (bits > kMaxBlockInputBits)
    throw resource_error("block code reads " + std::to_string(bits) + " input bits, above the limit of " +
                         std::to_string(kMaxBlockInputBits));
  if (tables_.size() != coords_) throw input_error("block code needs one table per output coordinate");
  const std::size_t rows = std::size_t{1} << bits;
  for (const auto& t : tables_)
    if (t.size() != rows) throw input_error("block code table needs " + std::to_string(rows) + " rows");
}

BlockCode BlockCode::identity(std::size_t coords) {
  std::vector<Bits> tables(coords, Bits(std::size_t{1} << coords));
  for (std::size_t c = 0; c < coords; ++c)
    for (std::size_t row = 0; row < tables[c].size(); ++row) tables[c][row] = (row >> c) & 1U;
  return BlockCode(1, coords, 1, std::move(tables));
}

BlockCode BlockCode::negation(std::size_t coords) {
  BlockCode id = identity(coords);
  std::vector<Bits> tables = id.tables();
  for (auto& t : tables) t.flip();
  return BlockCode(1, coords, 1, std::move(tables));
}

std::string BlockCode::literal() const {
  std::string s = std::to_string(arity_) + "," + std::to_string(coords_) + "," + std::to_string(window_) + ":";
  for (std::size_t c = 0; c < tables_.size(); ++c) {
    if (c) s.push_back(';');
    for (bool b : tables_[c]) s.push_back(b ? '1' : '0');
  }
  return s;
}

BlockCode parse_block_code(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw parse_error("block code literal needs 'arity,coords,window:tables'");
  const auto head = split(text.substr(0, colon), ',');
  if (head.size() != 3) throw parse_error("block code header needs three numbers, got '" + std::string(text.substr(0, colon)) + "'");
  const auto arity = parse_natural(head[0], "arity");
  const auto coords = parse_natural(head[1], "coordinate count");
  const auto window = parse_natural(head[2], "window");
  std::vector<Bits> tables;
  for (auto part : split(text.substr(colon + 1), ';')) {
    Bits t;
    for (char c : part) {
      if (c != '0' && c != '1') throw parse_error("bad truth-table symbol in '" + std::string(part) + "'");
      t.push_back(c == '1');
    }
    tables.push_back(std::move(t));
  }
  try {
    return BlockCode(arity, coords, window, std::move(tables));
  } catch (const input_error& e) {
    throw parse_error(e.what());
  }
}

SymbolicPoint apply_block_code(const BlockCode& code, std::span<const SymbolicPoint> inputs) {
  if (inputs.size() != code.arity())
    throw input_error("block code of arity " + std::to_string(code.arity()) + " applied to " +
                      std::to_string(inputs.size()) + " inputs");
  std::uint64_t pre = 0, per = 1;
  for (const auto& in : inputs) {
    if (in.coordinate_count() != code.coords())
      throw input_error("block code expects " + std::to_string(code.coords()) + " coordinates, input has " +
                        std::to_string(in.coordinate_count()));
    pre = std::max(pre, in.preperiod_bound());
    per = checked_lcm(per, in.period_lcm());
  }
  const std::size_t w = code.window(), cs = code.coords();
  auto row_at = [&](std::uint64_t n) {
    std::uint64_t row = 0;
    for (std::size_t a = 0; a < inputs.size(); ++a)
      for (std::size_t c = 0; c < cs; ++c)
        for (std::size_t k = 0; k < w; ++k)
          if (inputs[a].at(c, n + k)) row |= std::uint64_t{1} << ((a * cs + c) * w + k);
    return row;
  };
  std::vector<Bits> raw_pre(cs, Bits(pre)), raw_per(cs, Bits(per));
  for (std::uint64_t n = 0; n < pre + per; ++n) {
    const auto row = row_at(n);
    for (std::size_t c = 0; c < cs; ++c) {
      if (n < pre)
        raw_pre[c][n] = code.output(c, row);
      else
        raw_per[c][n - pre] = code.output(c, row);
    }
  }
  std::vector<EpSequence> coords;
  for (std::size_t c = 0; c < cs; ++c) coords.push_back(EpSequence::normalize(raw_pre[c], raw_per[c]));
  return SymbolicPoint(std::move(coords));
}

EaetPrimeResult eaet_prime(const SymbolicPoint& t0, std::span<const BlockCode> codes) {
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i].arity() != i + 1)
      throw input_error("code " + std::to_string(i) + " must have arity " + std::to_string(i + 1) + ", has " +
                        std::to_string(codes[i].arity()));
    if (codes[i].coords() != t0.coordinate_count())
      throw input_error("code " + std::to_string(i) + " coordinate count does not match t0");
  }
  EaetPrimeResult r;
  r.targets.push_back(t0);
  r.solutions.push_back(ae_solve(t0));
  SymbolicPoint xs = t0, ys = r.solutions.front();
  for (const BlockCode& code : codes) {
    SymbolicPoint target = apply_block_code(code, r.solutions);
    SymbolicPoint next = eaet_extend(xs, ys, target);
    xs = stack(xs, target);
    ys = stack(ys, next);
    r.targets.push_back(std::move(target));
    r.solutions.push_back(std::move(next));
  }
  return r;
}

Cylinder::Cylinder(SymbolicPoint reference, std::size_t coord_depth, std::uint64_t pos_depth)
    : ref_(std::move(reference)), coord_depth_(coord_depth), pos_depth_(pos_depth) {
  if (coord_depth_ > ref_.coordinate_count())
    throw input_error("cylinder constrains " + std::to_string(coord_depth_) + " coordinates but its reference has " +
                      std::to_string(ref_.coordinate_count()));
}

bool Cylinder::contains(const SymbolicPoint& z) const {
  if (z.coordinate_count() < coord_depth_) return false;
  for (std::size_t i = 0; i < coord_depth_; ++i)
    for (std::uint64_t n = 0; n < pos_depth_; ++n)
      if (z.at(i, n) != ref_.at(i, n)) return false;
  return true;
}

bool Cylinder::subset_of(const Cylinder& other) const {
  for (std::size_t i = 0; i < other.coord_depth_; ++i)
    for (std::uint64_t n = 0; n < other.pos_depth_; ++n)
      if (!constrains(i, n) || ref_.at(i, n) != other.ref_.at(i, n)) return false;
  return true;
}

bool Cylinder::shift_image_within(std::uint64_t shift_by, const Cylinder& other) const {
  for (std::size_t i = 0; i < other.coord_depth_; ++i)
    for (std::uint64_t n = 0; n < other.pos_depth_; ++n)
      if (!constrains(i, n + shift_by) || ref_.at(i, n + shift_by) != other.ref_.at(i, n)) return false;
  return true;
}

bool Cylinder::within_ball(const SymbolicPoint& y, std::uint64_t radius_exponent) const {
  // B(y, 2^-r) = {z : e(z, y) > r}: agreement on every (i, n) with i + n <= r.
  for (std::size_t i = 0; i < y.coordinate_count() && i <= radius_exponent; ++i)
    for (std::uint64_t n = 0; i + n <= radius_exponent; ++n)
      if (!constrains(i, n) || ref_.at(i, n) != y.at(i, n)) return false;
  return true;
}

std::string Cylinder::literal() const {
  return std::to_string(coord_depth_) + "," + std::to_string(pos_depth_) + "@" + ref_.literal();
}

Cylinder parse_cylinder(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos) throw parse_error("cylinder literal needs 'coords,positions@point'");
  const auto head = split(text.substr(0, at), ',');
  if (head.size() != 2) throw parse_error("cylinder header needs two numbers");
  auto ref = parse_point(text.substr(at + 1));
  const auto depth = parse_natural(head[0], "coordinate depth");
  if (depth > ref.coordinate_count()) throw parse_error("cylinder coordinate depth exceeds its reference");
  return Cylinder(std::move(ref), depth, parse_natural(head[1], "position depth"));
}

std::vector<SymbolicPoint> orbit_closure(const SymbolicPoint& y) {
  const std::uint64_t total = y.preperiod_bound() + y.period_lcm();
  std::vector<SymbolicPoint> out;
  std::unordered_set<std::string> seen;
  for (std::uint64_t n = 0; n < total; ++n) {
    SymbolicPoint z = shift(y, n);
    if (seen.insert(z.literal()).second) out.push_back(std::move(z));
  }
  return out;
}

std::uint64_t covering_bound(const SymbolicPoint& y, const Cylinder& u) {
  if (y.preperiod_bound() != 0) throw precondition_error("covering_bound: y is not uniformly recurrent");
  const std::uint64_t per = y.period_lcm();
  // Closure is the cycle T^0 y .. T^(per-1) y; hits[n] says T^n y is in U.
  std::vector<bool> hits(per);
  bool any = false;
  for (std::uint64_t n = 0; n < per; ++n) any |= (hits[n] = u.contains(shift(y, n)));
  if (!any) {
    std::string listing;
    for (std::uint64_t n = 0; n < per; ++n) listing += (n ? ", " : "") + shift(y, n).literal();
    throw precondition_error("covering_bound: cylinder misses the orbit closure {" + listing + "}");
  }
  std::uint64_t worst = 0;
  for (std::uint64_t start = 0; start < per; ++start) {
    std::uint64_t j = 0;
    while (!hits[(start + j) % per]) ++j;
    worst = std::max(worst, j);
  }
  return worst;
}

}  // namespace epdyn
