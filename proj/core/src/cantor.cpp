#include "mcduff/cantor.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mcduff::cantor {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

}  // namespace

Substitution::Substitution(std::map<char, std::string> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) throw std::invalid_argument("substitution has no rules");
  for (const auto& [a, image] : rules_) {
    if (image.empty()) throw std::invalid_argument(std::string("image of '") + a + "' is empty");
    for (char c : image) {
      if (!rules_.contains(c)) throw std::invalid_argument(std::string("letter '") + c + "' has no rule");
    }
  }
  // Wielandt: a primitive n x n matrix has a positive power at (n-1)^2 + 1.
  const std::string letters = alphabet();
  const std::size_t n = letters.size();
  BoolMatrix m(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (char c : rules_.at(letters[i])) m[i][letters.find(c)] = true;
  }
  BoolMatrix power = m;
  for (std::size_t k = 1; k < (n - 1) * (n - 1) + 1; ++k) power = bool_product(power, m);
  for (const auto& row : power) {
    if (std::find(row.begin(), row.end(), false) != row.end()) throw std::invalid_argument("substitution is not primitive");
  }
}

Substitution Substitution::parse(std::string_view text) {
  std::map<char, std::string> rules;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string rule = trim(text.substr(start, end - start));
    const std::size_t arrow = rule.find("->");
    if (arrow == std::string::npos) throw std::invalid_argument("substitution rule '" + rule + "' lacks '->'");
    const std::string lhs = trim(std::string_view(rule).substr(0, arrow));
    const std::string rhs = trim(std::string_view(rule).substr(arrow + 2));
    if (lhs.size() != 1) throw std::invalid_argument("rule '" + rule + "' must rewrite a single letter");
    if (!rules.emplace(lhs[0], rhs).second) throw std::invalid_argument("letter '" + lhs + "' has two rules");
    start = end + 1;
  }
  return Substitution(std::move(rules));
}

Substitution Substitution::fibonacci() { return Substitution({{'a', "ab"}, {'b', "a"}}); }
Substitution Substitution::thue_morse() { return Substitution({{'a', "ab"}, {'b', "ba"}}); }

std::string Substitution::alphabet() const {
  std::string s;
  for (const auto& [a, image] : rules_) s += a;
  return s;
}

std::string Substitution::apply(std::string_view word, int times) const {
  std::string cur(word);
  for (int k = 0; k < times; ++k) {
    std::string next;
    for (char c : cur) next += rules_.at(c);
    cur = std::move(next);
  }
  return cur;
}

std::string Substitution::to_string() const {
  std::string s;
  for (const auto& [a, image] : rules_) {
    if (!s.empty()) s += ", ";
    s += std::string(1, a) + "->" + image;
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxSeedPower = 64;

/// Smallest p with sub^p(right) starting with right and sub^p(left) ending with left.
std::optional<int> fixing_power(const Substitution& sub, char left, char right) {
  std::string l(1, left);
  std::string r(1, right);
  for (int p = 1; p <= kMaxSeedPower; ++p) {
    l = sub.apply(l);
    r = sub.apply(r);
    if (r.front() == right && l.back() == left) return p;
    // keep the strings short: only the relevant end letter matters
    l = l.substr(l.size() - 1);
    r = r.substr(0, 1);
  }
  return std::nullopt;
}

}  // namespace

Subshift::Subshift(Substitution sub, std::string_view seed) : sub_(std::move(sub)) {
  const std::string letters = sub_.alphabet();
  if (!seed.empty()) {
    const std::string s = trim(seed);
    if (s.size() != 3 || s[1] != '.' || letters.find(s[0]) == std::string::npos || letters.find(s[2]) == std::string::npos) {
      throw std::invalid_argument("seed must look like 'a.b' with letters of the alphabet");
    }
    if (!is_legal(std::string{s[0], s[2]})) throw std::invalid_argument("seed pair '" + s + "' is not a legal word");
    auto p = fixing_power(sub_, s[0], s[2]);
    if (!p) throw std::invalid_argument("no power of the substitution fixes seed '" + s + "'");
    left_seed_ = s[0];
    right_seed_ = s[2];
    power_ = *p;
  } else {
    for (char l : letters) {
      for (char r : letters) {
        if (left_seed_ != 0) break;
        if (!is_legal(std::string{l, r})) continue;
        if (auto p = fixing_power(sub_, l, r)) {
          left_seed_ = l;
          right_seed_ = r;
          power_ = *p;
        }
      }
    }
    if (left_seed_ == 0) throw std::invalid_argument("no legal seed pair is fixed by a power of the substitution");
  }
  right_ = std::string(1, right_seed_);
  left_ = std::string(1, left_seed_);
  if (sub_.apply(right_, power_).size() < 2 || sub_.apply(left_, power_).size() < 2) {
    throw std::invalid_argument("substitution does not grow the seed");
  }
}

void Subshift::ensure(long lo, long hi) const {
  while (static_cast<long>(right_.size()) < hi) right_ = sub_.apply(right_, power_);
  while (static_cast<long>(left_.size()) < -lo) left_ = sub_.apply(left_, power_);
}

char Subshift::at(long i) const { return window(i, 1)[0]; }

std::string Subshift::window(long from, std::size_t length) const {
  const long to = from + static_cast<long>(length);
  std::lock_guard lock(mutex_);
  ensure(std::min(from, 0L), std::max(to, 0L));
  std::string out;
  out.reserve(length);
  if (from < 0) {
    const long stop = std::min(to, 0L);
    out.append(left_, static_cast<std::size_t>(static_cast<long>(left_.size()) + from), static_cast<std::size_t>(stop - from));
  }
  if (to > 0) {
    const long begin = std::max(from, 0L);
    out.append(right_, static_cast<std::size_t>(begin), static_cast<std::size_t>(to - begin));
  }
  return out;
}

const std::set<std::string>& Subshift::language(std::size_t length) const {
  std::lock_guard lock(mutex_);
  if (auto it = languages_.find(length); it != languages_.end()) return it->second;
  // Every legal word occurs in sub^k(a) for k large, a any letter.
  std::string source(1, sub_.alphabet().front());
  std::set<std::string> words;
  std::size_t stable = 0;
  while (stable < 2) {
    source = sub_.apply(source);
    if (source.size() < 8 * length + 64) continue;
    const std::size_t before = words.size();
    for (std::size_t i = 0; i + length <= source.size(); ++i) words.insert(source.substr(i, length));
    stable = (words.size() == before) ? stable + 1 : 0;
  }
  return languages_.emplace(length, std::move(words)).first->second;
}

bool Subshift::is_legal(std::string_view word) const { return language(word.size()).contains(std::string(word)); }

std::optional<long> Subshift::find_period(long max_period, std::size_t length) const {
  const std::string w = window(0, length);
  for (long p = 1; p <= max_period && static_cast<std::size_t>(p) < w.size(); ++p) {
    bool periodic = true;
    for (std::size_t i = 0; i + static_cast<std::size_t>(p) < w.size(); ++i) {
      if (w[i] != w[i + static_cast<std::size_t>(p)]) {
        periodic = false;
        break;
      }
    }
    if (periodic) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ClopenSet::ClopenSet(std::shared_ptr<const Subshift> shift, long lo, std::size_t len, std::set<std::string> words)
    : shift_(std::move(shift)), lo_(lo), len_(len) {
  if (!shift_) throw std::invalid_argument("clopen set needs a subshift");
  const auto& legal = shift_->language(len);
  for (auto& w : words) {
    if (w.size() != len) throw std::invalid_argument("word '" + w + "' does not fit the window length");
    if (legal.contains(w)) words_.insert(w);
  }
}

ClopenSet ClopenSet::cylinder(std::shared_ptr<const Subshift> shift, std::string word, long anchor) {
  const std::size_t len = word.size();
  return ClopenSet(std::move(shift), anchor, len, {std::move(word)});
}

ClopenSet ClopenSet::around_base_point(std::shared_ptr<const Subshift> shift, long lo, std::size_t len) {
  ClopenSet c;
  c.words_.insert(shift->window(lo, len));
  c.shift_ = std::move(shift);
  c.lo_ = lo;
  c.len_ = len;
  return c;
}

ClopenSet ClopenSet::everything(std::shared_ptr<const Subshift> shift) { return ClopenSet(std::move(shift), 0, 0, {""}); }
ClopenSet ClopenSet::nothing(std::shared_ptr<const Subshift> shift) { return ClopenSet(std::move(shift), 0, 0, {}); }

bool ClopenSet::contains(long offset) const { return words_.contains(shift_->window(offset + lo_, len_)); }

ClopenSet ClopenSet::extended(long lo, std::size_t len) const {
  const long hi = lo + static_cast<long>(len);
  const long my_hi = lo_ + static_cast<long>(len_);
  if (lo > lo_ || hi < my_hi) throw std::invalid_argument("extension window must contain the current window");
  if (len_ == 0 && words_.empty()) return ClopenSet(shift_, lo, len, {});
  if (lo == lo_ && len == len_) return *this;
  ClopenSet r;
  r.shift_ = shift_;
  r.lo_ = lo;
  r.len_ = len;
  const auto offset = static_cast<std::size_t>(lo_ - lo);
  for (const auto& u : shift_->language(len)) {
    if (words_.contains(u.substr(offset, len_))) r.words_.insert(u);
  }
  return r;
}

namespace {

std::pair<long, std::size_t> hull(const ClopenSet& a, const ClopenSet& b) {
  // an empty window imposes nothing, so it does not widen the hull
  if (a.len() == 0) return {b.lo(), b.len()};
  if (b.len() == 0) return {a.lo(), a.len()};
  const long lo = std::min(a.lo(), b.lo());
  const long hi = std::max(a.lo() + static_cast<long>(a.len()), b.lo() + static_cast<long>(b.len()));
  return {lo, static_cast<std::size_t>(hi - lo)};
}

}  // namespace

ClopenSet ClopenSet::unite(const ClopenSet& o) const {
  const auto [lo, len] = hull(*this, o);
  ClopenSet r = extended(lo, len);
  const ClopenSet b = o.extended(lo, len);
  r.words_.insert(b.words_.begin(), b.words_.end());
  return r;
}

ClopenSet ClopenSet::intersect(const ClopenSet& o) const {
  const auto [lo, len] = hull(*this, o);
  ClopenSet r = extended(lo, len);
  const ClopenSet b = o.extended(lo, len);
  std::erase_if(r.words_, [&](const std::string& w) { return !b.words_.contains(w); });
  return r;
}

ClopenSet ClopenSet::minus(const ClopenSet& o) const {
  const auto [lo, len] = hull(*this, o);
  ClopenSet r = extended(lo, len);
  const ClopenSet b = o.extended(lo, len);
  std::erase_if(r.words_, [&](const std::string& w) { return b.words_.contains(w); });
  return r;
}

ClopenSet ClopenSet::complement() const { return everything(shift_).extended(lo_, len_).minus(*this); }

ClopenSet ClopenSet::shifted(long n) const {
  ClopenSet r = *this;
  r.lo_ = lo_ - n;
  return r;
}

bool ClopenSet::same_set(const ClopenSet& o) const {
  const auto [lo, len] = hull(*this, o);
  return extended(lo, len).words_ == o.extended(lo, len).words_;
}

std::string ClopenSet::to_string() const {
  if (words_.empty()) return "{}";
  if (len_ == 0) return "X";
  std::string s = "{";
  bool first = true;
  for (const auto& w : words_) {
    if (!first) s += ",";
    s += w;
    first = false;
  }
  return s + "}@" + std::to_string(lo_);
}

// ---------------------------------------------------------------------------

namespace {

void require_partition(const std::vector<ClopenSet>& parts, const char* what) {
  if (parts.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  ClopenSet all = ClopenSet::nothing(parts.front().shift());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (!parts[i].disjoint(parts[j])) throw std::invalid_argument(std::string(what) + " overlap: " + parts[i].to_string() + " and " + parts[j].to_string());
    }
    all = all.unite(parts[i]);
  }
  if (!all.same_set(ClopenSet::everything(parts.front().shift()))) throw std::invalid_argument(std::string(what) + " do not cover X");
}

}  // namespace

FullGroupElement::FullGroupElement(std::vector<Piece> pieces, std::string name) : pieces_(std::move(pieces)), name_(std::move(name)) {
  std::erase_if(pieces_, [](const Piece& p) { return p.domain.is_empty(); });
  std::vector<ClopenSet> domains;
  std::vector<ClopenSet> images;
  for (const auto& p : pieces_) {
    domains.push_back(p.domain);
    images.push_back(p.domain.shifted(p.shift));
  }
  require_partition(domains, "domains");
  require_partition(images, "images");
}

FullGroupElement FullGroupElement::identity(std::shared_ptr<const Subshift> shift) {
  return FullGroupElement({{ClopenSet::everything(std::move(shift)), 0}}, "id");
}

FullGroupElement FullGroupElement::swap(std::shared_ptr<const Subshift> shift, const std::string& word, long anchor, long k) {
  if (k == 0) throw std::invalid_argument("swap needs a nonzero shift");
  const ClopenSet c1 = ClopenSet::cylinder(shift, word, anchor);
  if (c1.is_empty()) throw std::invalid_argument("cylinder word '" + word + "' is not legal");
  const ClopenSet c2 = c1.shifted(k);
  if (!c1.disjoint(c2)) throw std::invalid_argument("cylinder and its " + std::to_string(k) + "-translate overlap");
  const ClopenSet rest = c1.unite(c2).complement();
  return FullGroupElement({{c1, k}, {c2, -k}, {rest, 0}}, "swap(" + word + "@" + std::to_string(anchor) + "," + std::to_string(k) + ")");
}

long FullGroupElement::shift_at(long offset) const {
  for (const auto& p : pieces_) {
    if (p.domain.contains(offset)) return p.shift;
  }
  throw std::logic_error("point lies in no piece");
}

FullGroupElement FullGroupElement::inverse() const {
  std::vector<Piece> inv;
  for (const auto& p : pieces_) inv.push_back({p.domain.shifted(p.shift), -p.shift});
  return FullGroupElement(std::move(inv), name_.empty() ? "" : name_ + "^-1");
}

bool FullGroupElement::same_map(const FullGroupElement& o) const {
  for (const auto& a : pieces_) {
    for (const auto& b : o.pieces_) {
      if (a.shift != b.shift && !a.domain.disjoint(b.domain)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::size_t Partition::cell_of(long offset) const {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].contains(offset)) return c;
  }
  throw std::logic_error("point lies in no partition cell");
}

Partition refine_partition(const std::vector<FullGroupElement>& omega) {
  if (omega.empty()) throw std::invalid_argument("Omega is empty");
  for (const auto& h : omega) {
    const FullGroupElement inv = h.inverse();
    if (std::none_of(omega.begin(), omega.end(), [&](const FullGroupElement& g) { return g.same_map(inv); })) {
      throw std::invalid_argument("Omega is not symmetric: missing the inverse of " + h.name());
    }
  }
  const auto shift = omega.front().pieces().front().domain.shift();
  long lo = 0;
  long hi = 0;
  bool any = false;
  for (const auto& h : omega) {
    for (const auto& p : h.pieces()) {
      if (p.domain.len() == 0) continue;
      const long plo = p.domain.lo();
      const long phi = plo + static_cast<long>(p.domain.len());
      lo = any ? std::min(lo, plo) : plo;
      hi = any ? std::max(hi, phi) : phi;
      any = true;
    }
  }
  const auto len = static_cast<std::size_t>(hi - lo);
  std::vector<std::vector<ClopenSet>> domains;
  for (const auto& h : omega) {
    std::vector<ClopenSet> ext;
    for (const auto& p : h.pieces()) ext.push_back(p.domain.extended(lo, len));
    domains.push_back(std::move(ext));
  }
  std::map<std::vector<long>, std::set<std::string>> cells;
  for (const auto& u : shift->language(len)) {
    std::vector<long> sig;
    for (std::size_t h = 0; h < omega.size(); ++h) {
      for (std::size_t i = 0; i < domains[h].size(); ++i) {
        if (domains[h][i].words().contains(u)) {
          sig.push_back(omega[h].pieces()[i].shift);
          break;
        }
      }
    }
    cells[sig].insert(u);
  }
  Partition P;
  P.K.insert(0);
  for (auto& [sig, words] : cells) {
    P.cells.emplace_back(shift, lo, len, std::move(words));
    P.shifts.push_back(sig);
    P.K.insert(sig.begin(), sig.end());
  }
  return P;
}

// ---------------------------------------------------------------------------

namespace {

bool has_period(const std::string& w, std::size_t p) {
  for (std::size_t i = 0; i + p < w.size(); ++i) {
    if (w[i] != w[i + p]) return false;
  }
  return true;
}

std::vector<long> positions(const std::vector<long>& T, const std::vector<long>& D) {
  std::vector<long> out;
  for (long t : T) {
    for (long d : D) out.push_back(t + d);
  }
  return out;
}

}  // namespace

TowerData find_tower(std::shared_ptr<const Subshift> shift, const std::vector<FullGroupElement>& omega, const Partition& P,
                     const std::vector<long>& T, std::size_t d_target, std::size_t search_bound, const std::optional<Rational>& delta_cap) {
  if (T.empty()) throw std::invalid_argument("T is empty");
  if (d_target == 0) throw std::invalid_argument("|D| must be positive");
  if (std::set<long>(T.begin(), T.end()).size() != T.size()) throw std::invalid_argument("T has repeated points");
  if (P.cells.empty()) throw std::invalid_argument("partition has no cells");

  TowerData tw;
  tw.shift = shift;
  tw.T = T;
  std::sort(tw.T.begin(), tw.T.end());
  tw.partition = P;
  const std::set<long> members(tw.T.begin(), tw.T.end());
  for (long t : tw.T) {
    if (std::all_of(P.K.begin(), P.K.end(), [&](long k) { return members.contains(t + k); })) tw.core.push_back(t);
  }
  const Rational defect = Rational(1) - Rational(static_cast<long>(tw.core.size()), static_cast<long>(tw.T.size()));
  if (delta_cap && defect > *delta_cap) {
    throw std::invalid_argument("T has invariance defect " + to_string(defect) + " above " + to_string(*delta_cap));
  }

  const long span = tw.T.back() - tw.T.front() + 1;
  const long check = std::max<long>(10000, span);
  if (auto p = shift->find_period(check, static_cast<std::size_t>(4 * check))) {
    throw std::invalid_argument("base point looks periodic with period " + std::to_string(*p));
  }

  // Pigeonhole over the profile t -> cell(t + d).
  std::map<std::vector<std::size_t>, std::vector<long>> buckets;
  for (std::size_t j = 1; j <= search_bound && tw.D.empty(); ++j) {
    const long d = static_cast<long>(j) * span;
    std::vector<std::size_t> profile;
    for (long t : tw.T) profile.push_back(P.cell_of(t + d));
    auto& bucket = buckets[profile];
    bucket.push_back(d);
    if (bucket.size() == d_target) tw.D = bucket;
  }
  if (tw.D.empty()) throw std::runtime_error("search bound " + std::to_string(search_bound) + " exhausted before |D| = " + std::to_string(d_target));

  const auto pos = positions(tw.T, tw.D);
  std::set<long> deltas;
  for (long a : pos) {
    for (long b : pos) {
      if (a > b) deltas.insert(a - b);
    }
  }
  const long wlo = P.cells.front().lo();
  const long whi = wlo + static_cast<long>(P.cells.front().len()) - 1;
  long r = deltas.empty() ? 0 : (*deltas.rbegin() + 1) / 2;
  for (long p : pos) r = std::max({r, std::abs(wlo + p), std::abs(whi + p)});
  const long r_cap = 64 * (r + 16);
  while (true) {
    const std::string w = shift->window(-r, static_cast<std::size_t>(2 * r + 1));
    const bool clear = std::none_of(deltas.begin(), deltas.end(), [&](long dl) { return has_period(w, static_cast<std::size_t>(dl)); });
    if (clear) break;
    r *= 2;
    if (r > r_cap) throw std::runtime_error("central cylinder radius exceeded " + std::to_string(r_cap));
  }
  tw.radius = r;
  tw.B = ClopenSet::around_base_point(shift, -r, static_cast<std::size_t>(2 * r + 1));

  for (const auto& h : omega) {
    std::map<long, long> theta;
    for (long t : tw.T) theta[t] = h.shift_at(t + tw.D.front());
    std::map<long, long> sigma;
    std::set<long> image;
    for (long t : tw.core) {
      const long s = t + theta[t];
      if (!members.contains(s)) throw std::logic_error("core point leaves T");
      sigma[t] = s;
      image.insert(s);
    }
    std::vector<long> free_targets;
    for (long t : tw.T) {
      if (!image.contains(t)) free_targets.push_back(t);
    }
    std::size_t k = 0;
    for (long t : tw.T) {
      if (!sigma.contains(t)) sigma[t] = free_targets.at(k++);
    }
    tw.theta.push_back(std::move(theta));
    tw.sigma.push_back(std::move(sigma));
  }
  return tw;
}

TowerReport verify_tower(const TowerData& tower, const std::vector<FullGroupElement>& omega, std::size_t samples) {
  TowerReport rep;
  auto fail = [&](std::string msg) {
    rep.pass = false;
    rep.failures.push_back(std::move(msg));
  };
  if (omega.size() != tower.theta.size() || omega.size() != tower.sigma.size()) {
    fail("tower has data for " + std::to_string(tower.theta.size()) + " elements, Omega has " + std::to_string(omega.size()));
    return rep;
  }
  const auto& shift = *tower.shift;
  const long r = tower.radius;
  const std::string w = *tower.B.words().begin();

  // Disjointness of the tdB: every nonzero difference of positions is at
  // most 2r and is not a period of the central word.
  const auto pos = positions(tower.T, tower.D);
  std::set<long> seen;
  for (long p : pos) {
    if (!seen.insert(p).second) fail("two (t,d) pairs give the same position " + std::to_string(p));
  }
  std::set<long> deltas;
  for (long a : pos) {
    for (long b : pos) {
      if (a > b) deltas.insert(a - b);
    }
  }
  for (long dl : deltas) {
    if (dl > 2 * r) {
      fail("difference " + std::to_string(dl) + " exceeds the cylinder width");
    } else if (has_period(w, static_cast<std::size_t>(dl))) {
      fail("central word has period " + std::to_string(dl));
    }
  }

  // Each t sees a single partition cell across D.
  const auto& P = tower.partition;
  const long wlo = P.cells.front().lo();
  const long whi = wlo + static_cast<long>(P.cells.front().len()) - 1;
  for (long t : tower.T) {
    std::set<std::size_t> cells;
    for (long d : tower.D) {
      if (std::abs(wlo + t + d) > r || std::abs(whi + t + d) > r) fail("cell window of t=" + std::to_string(t) + " leaves B");
      cells.insert(P.cell_of(t + d));
    }
    if (cells.size() != 1) fail("t=" + std::to_string(t) + " meets " + std::to_string(cells.size()) + " cells");
  }

  // sigma: a permutation of T extending t -> theta(h,t) t on the core.
  const std::set<long> members(tower.T.begin(), tower.T.end());
  for (std::size_t h = 0; h < omega.size(); ++h) {
    std::set<long> image;
    for (long t : tower.T) {
      auto it = tower.sigma[h].find(t);
      if (it == tower.sigma[h].end() || !members.contains(it->second)) {
        fail("sigma[" + std::to_string(h) + "] is not defined into T at " + std::to_string(t));
        continue;
      }
      image.insert(it->second);
    }
    if (image.size() != members.size()) fail("sigma[" + std::to_string(h) + "] is not a bijection");
    for (long t : tower.core) {
      if (tower.sigma[h].at(t) != t + tower.theta[h].at(t)) fail("sigma[" + std::to_string(h) + "] disagrees with theta at " + std::to_string(t));
    }
  }

  // Sample points of B: occurrences of the central word along the orbit.
  std::vector<long> xs;
  const auto wlen = static_cast<std::size_t>(2 * r + 1);
  std::size_t scan = std::max<std::size_t>(64 * wlen, 4096);
  while (xs.size() < samples) {
    xs.clear();
    const std::string hay = shift.window(-r, scan);
    for (std::size_t at = hay.find(w); at != std::string::npos && xs.size() < samples; at = hay.find(w, at + 1)) {
      xs.push_back(static_cast<long>(at));
    }
    if (xs.size() >= samples || scan > (std::size_t{1} << 26)) break;
    scan *= 2;
  }
  if (xs.size() < samples) fail("found only " + std::to_string(xs.size()) + " points of B");
  rep.sample_points = xs.size();
  for (long x : xs) {
    for (std::size_t h = 0; h < omega.size(); ++h) {
      for (long t : tower.T) {
        for (long d : tower.D) {
          ++rep.point_checks;
          const long got = omega[h].shift_at(x + t + d);
          const long want = tower.theta[h].at(t);
          if (got != want) {
            fail("h=" + std::to_string(h) + " t=" + std::to_string(t) + " d=" + std::to_string(d) + " x=" + std::to_string(x) +
                 ": shift " + std::to_string(got) + " but theta says " + std::to_string(want));
          }
        }
      }
    }
  }
  return rep;
}

std::size_t displaced(const std::map<long, long>& sigma, const std::set<long>& S) {
  std::size_t n = 0;
  for (long s : S) {
    if (!S.contains(sigma.at(s))) ++n;
  }
  return n;
}

}  // namespace mcduff::cantor
