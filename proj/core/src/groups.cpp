#include "mcduff/groups.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcduff::groups {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::vector<long> parse_list(std::string_view text, char open, char close) {
  const std::string t = trim(text);
  if (t.size() < 2 || t.front() != open || t.back() != close) {
    throw std::invalid_argument("expected " + std::string(1, open) + "..." + std::string(1, close) + ", got '" + t + "'");
  }
  const std::string body = trim(std::string_view(t).substr(1, t.size() - 2));
  std::vector<long> out;
  if (body.empty()) return out;
  for (const auto& piece : split(body, ',')) out.push_back(parse_long(piece));
  return out;
}

void reduce_append(std::vector<long>& word, long letter) {
  if (!word.empty() && word.back() == -letter) {
    word.pop_back();
  } else {
    word.push_back(letter);
  }
}

int permutation_parity(const std::vector<long>& images) {
  std::vector<bool> seen(images.size(), false);
  int transpositions = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (auto j = i; !seen[j]; j = static_cast<std::size_t>(images[j])) {
      seen[j] = true;
      ++len;
    }
    transpositions += static_cast<int>(len - 1);
  }
  return transpositions % 2;
}

}  // namespace

Group Group::free_abelian(int rank) {
  if (rank < 1) throw std::invalid_argument("free abelian rank must be positive");
  Group g;
  g.family_ = Family::FreeAbelian;
  g.parameter_ = rank;
  return g;
}

Group Group::symmetric(int n) {
  if (n < 1) throw std::invalid_argument("symmetric group needs n >= 1");
  Group g;
  g.family_ = Family::Symmetric;
  g.parameter_ = n;
  return g;
}

Group Group::alternating(int n) {
  if (n < 1) throw std::invalid_argument("alternating group needs n >= 1");
  Group g;
  g.family_ = Family::Alternating;
  g.parameter_ = n;
  return g;
}

Group Group::free(int rank) {
  if (rank < 1 || rank > 26) throw std::invalid_argument("free group rank must lie in [1, 26]");
  Group g;
  g.family_ = Family::Free;
  g.parameter_ = rank;
  return g;
}

Group Group::product(std::vector<Group> factors) {
  if (factors.empty()) throw std::invalid_argument("empty direct product");
  Group g;
  g.family_ = Family::Product;
  g.parameter_ = static_cast<int>(factors.size());
  g.factors_ = std::move(factors);
  return g;
}

Group Group::parse(std::string_view spec) {
  std::vector<std::string> parts;
  {
    std::istringstream in{std::string(spec)};
    std::string tok;
    std::string current;
    while (in >> tok) {
      if (tok == "x") {
        parts.push_back(current);
        current.clear();
      } else {
        current += tok;
      }
    }
    parts.push_back(current);
  }
  std::vector<Group> groups;
  for (const auto& p : parts) {
    if (p.empty()) throw std::invalid_argument("malformed group spec '" + std::string(spec) + "'");
    if (p == "Z") {
      groups.push_back(free_abelian(1));
    } else if (p.rfind("Z^", 0) == 0) {
      groups.push_back(free_abelian(static_cast<int>(parse_long(p.substr(2)))));
    } else if (p[0] == 'S' || p[0] == 'A' || p[0] == 'F') {
      const int n = static_cast<int>(parse_long(p.substr(1)));
      groups.push_back(p[0] == 'S' ? symmetric(n) : p[0] == 'A' ? alternating(n) : free(n));
    } else {
      throw std::invalid_argument("unknown group family '" + p + "'");
    }
  }
  if (groups.size() == 1) return groups.front();
  return product(std::move(groups));
}

std::string Group::name() const {
  switch (family_) {
    case Family::FreeAbelian:
      return parameter_ == 1 ? "Z" : "Z^" + std::to_string(parameter_);
    case Family::Symmetric:
      return "S" + std::to_string(parameter_);
    case Family::Alternating:
      return "A" + std::to_string(parameter_);
    case Family::Free:
      return "F" + std::to_string(parameter_);
    case Family::Product: {
      std::string out;
      for (const auto& f : factors_) out += (out.empty() ? "" : " x ") + f.name();
      return out;
    }
  }
  return {};
}

Element Group::identity() const {
  Element e;
  switch (family_) {
    case Family::FreeAbelian:
      e.code.assign(static_cast<std::size_t>(parameter_), 0);
      break;
    case Family::Symmetric:
    case Family::Alternating:
      e.code.resize(static_cast<std::size_t>(parameter_));
      std::iota(e.code.begin(), e.code.end(), 0L);
      break;
    case Family::Free:
      break;
    case Family::Product:
      for (const auto& f : factors_) e.factors.push_back(f.identity());
      break;
  }
  return e;
}

Element Group::multiply(const Element& a, const Element& b) const {
  Element r;
  switch (family_) {
    case Family::FreeAbelian:
      r.code.resize(a.code.size());
      for (std::size_t i = 0; i < a.code.size(); ++i) r.code[i] = a.code[i] + b.code[i];
      break;
    case Family::Symmetric:
    case Family::Alternating:
      r.code.resize(a.code.size());
      for (std::size_t i = 0; i < a.code.size(); ++i) r.code[i] = a.code[static_cast<std::size_t>(b.code[i])];
      break;
    case Family::Free:
      r.code = a.code;
      for (long l : b.code) reduce_append(r.code, l);
      break;
    case Family::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) r.factors.push_back(factors_[i].multiply(a.factors[i], b.factors[i]));
      break;
  }
  return r;
}

Element Group::inverse(const Element& a) const {
  Element r;
  switch (family_) {
    case Family::FreeAbelian:
      for (long c : a.code) r.code.push_back(-c);
      break;
    case Family::Symmetric:
    case Family::Alternating:
      r.code.resize(a.code.size());
      for (std::size_t i = 0; i < a.code.size(); ++i) r.code[static_cast<std::size_t>(a.code[i])] = static_cast<long>(i);
      break;
    case Family::Free:
      for (auto it = a.code.rbegin(); it != a.code.rend(); ++it) r.code.push_back(-*it);
      break;
    case Family::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) r.factors.push_back(factors_[i].inverse(a.factors[i]));
      break;
  }
  return r;
}

Element Group::commutator(const Element& a, const Element& b) const {
  return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

Element Group::power(const Element& a, long n) const {
  Element base = n < 0 ? inverse(a) : a;
  Element r = identity();
  for (long i = 0; i < (n < 0 ? -n : n); ++i) r = multiply(r, base);
  return r;
}

void Group::validate(const Element& a) const {
  switch (family_) {
    case Family::FreeAbelian:
      if (a.code.size() != static_cast<std::size_t>(parameter_) || !a.factors.empty()) {
        throw std::invalid_argument("element is not a vector of length " + std::to_string(parameter_));
      }
      return;
    case Family::Symmetric:
    case Family::Alternating: {
      if (a.code.size() != static_cast<std::size_t>(parameter_) || !a.factors.empty()) {
        throw std::invalid_argument("permutation must list " + std::to_string(parameter_) + " images");
      }
      std::vector<bool> hit(a.code.size(), false);
      for (long v : a.code) {
        if (v < 0 || v >= parameter_ || hit[static_cast<std::size_t>(v)]) throw std::invalid_argument("image list is not a bijection");
        hit[static_cast<std::size_t>(v)] = true;
      }
      if (family_ == Family::Alternating && permutation_parity(a.code) != 0) {
        throw std::invalid_argument("odd permutation is not in " + name());
      }
      return;
    }
    case Family::Free:
      for (std::size_t i = 0; i < a.code.size(); ++i) {
        const long l = a.code[i];
        if (l == 0 || l > parameter_ || l < -parameter_) throw std::invalid_argument("letter out of range");
        if (i > 0 && a.code[i - 1] == -l) throw std::invalid_argument("free word is not reduced");
      }
      if (!a.factors.empty()) throw std::invalid_argument("free word with factors");
      return;
    case Family::Product:
      if (a.factors.size() != factors_.size() || !a.code.empty()) throw std::invalid_argument("wrong number of factors");
      for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i].validate(a.factors[i]);
      return;
  }
}

Element Group::parse_element(std::string_view text) const {
  const std::string t = trim(text);
  Element r;
  switch (family_) {
    case Family::FreeAbelian:
      if (!t.empty() && t.front() == '(') {
        r.code = parse_list(t, '(', ')');
      } else if (parameter_ == 1) {
        r.code = {parse_long(t)};
      } else {
        throw std::invalid_argument("expected (x1,...,xd), got '" + t + "'");
      }
      break;
    case Family::Symmetric:
    case Family::Alternating:
      if (t == "e") return identity();
      r.code = parse_list(t, '[', ']');
      break;
    case Family::Free:
      if (t == "e" || t.empty()) return identity();
      for (char ch : t) {
        if (!std::isalpha(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad letter in word '" + t + "'");
        const bool inv = std::isupper(static_cast<unsigned char>(ch)) != 0;
        const long idx = std::tolower(static_cast<unsigned char>(ch)) - 'a' + 1;
        reduce_append(r.code, inv ? -idx : idx);
      }
      break;
    case Family::Product: {
      const auto parts = split(t, '|');
      if (parts.size() != factors_.size()) throw std::invalid_argument("expected " + std::to_string(factors_.size()) + " '|'-separated factors");
      for (std::size_t i = 0; i < parts.size(); ++i) r.factors.push_back(factors_[i].parse_element(parts[i]));
      break;
    }
  }
  validate(r);
  return r;
}

std::string Group::format(const Element& a) const {
  std::string out;
  switch (family_) {
    case Family::FreeAbelian:
      if (parameter_ == 1) return std::to_string(a.code[0]);
      out = "(";
      for (std::size_t i = 0; i < a.code.size(); ++i) out += (i ? "," : "") + std::to_string(a.code[i]);
      return out + ")";
    case Family::Symmetric:
    case Family::Alternating:
      out = "[";
      for (std::size_t i = 0; i < a.code.size(); ++i) out += (i ? "," : "") + std::to_string(a.code[i]);
      return out + "]";
    case Family::Free:
      if (a.code.empty()) return "e";
      for (long l : a.code) out += static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
      return out;
    case Family::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? " | " : "") + factors_[i].format(a.factors[i]);
      return out;
  }
  return out;
}

Element Group::vector(std::vector<long> coords) const {
  Element r{std::move(coords), {}};
  validate(r);
  return r;
}

Element Group::word(std::vector<long> letters) const {
  Element r;
  for (long l : letters) reduce_append(r.code, l);
  validate(r);
  return r;
}

Element Group::permutation(std::vector<long> images) const {
  Element r{std::move(images), {}};
  validate(r);
  return r;
}

Element Group::tuple(std::vector<Element> parts) const {
  Element r{{}, std::move(parts)};
  validate(r);
  return r;
}

Element Group::generator(int i) const {
  switch (family_) {
    case Family::FreeAbelian: {
      Element r = identity();
      r.code.at(static_cast<std::size_t>(i)) = 1;
      return r;
    }
    case Family::Free:
      return word({i + 1});
    case Family::Symmetric: {
      Element r = identity();
      std::swap(r.code.at(0), r.code.at(static_cast<std::size_t>(i) + 1));
      return r;
    }
    case Family::Alternating: {
      Element r = identity();
      const auto k = static_cast<std::size_t>(i) + 2;
      r.code.at(0) = 1;
      r.code.at(1) = static_cast<long>(k);
      r.code.at(k) = 0;
      return r;
    }
    case Family::Product:
      break;
  }
  throw std::invalid_argument("direct products have no standard generator list");
}

// ---------------------------------------------------------------------------

std::optional<std::vector<Point>> Action::exhaustion(std::size_t) const { return std::nullopt; }

std::optional<Element> Action::separating_shift(std::span<const Point>, std::span<const Point>) const {
  return std::nullopt;
}

std::optional<std::vector<Point>> LeftTranslation::exhaustion(std::size_t n) const {
  if (group_.family() != Family::FreeAbelian || n == 0) return std::nullopt;
  const auto d = static_cast<std::size_t>(group_.parameter());
  std::vector<Point> out;
  std::vector<long> idx(d, 0);
  while (true) {
    out.push_back(Element{idx, {}});
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < static_cast<long>(n)) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::optional<Element> LeftTranslation::separating_shift(std::span<const Point> T, std::span<const Point> Y) const {
  if (group_.family() != Family::FreeAbelian) return std::nullopt;
  const std::set<Point> ys(Y.begin(), Y.end());
  const bool hits = std::any_of(T.begin(), T.end(), [&](const Point& p) { return ys.count(p) > 0; });
  if (!hits) return group_.identity();
  long max_y = Y.front().code[0];
  for (const auto& y : Y) max_y = std::max(max_y, y.code[0]);
  long min_t = T.front().code[0];
  for (const auto& t : T) min_t = std::min(min_t, t.code[0]);
  Element shift = group_.identity();
  shift.code[0] = max_y - min_t + 1;
  return shift;
}

PermutationAction::PermutationAction(Group g) : group_(std::move(g)) {
  if (group_.family() != Family::Symmetric && group_.family() != Family::Alternating) {
    throw std::invalid_argument("permutation action needs S_n or A_n");
  }
}

Point PermutationAction::act(const Element& g, const Point& x) const {
  return Point{{g.code.at(static_cast<std::size_t>(x.code.at(0)))}, {}};
}

std::string PermutationAction::format_point(const Point& x) const { return std::to_string(x.code.at(0)); }

Point PermutationAction::parse_point(std::string_view text) const {
  const long v = parse_long(trim(text));
  if (v < 0 || v >= group_.parameter()) throw std::invalid_argument("letter out of range");
  return Point{{v}, {}};
}

BilateralShiftAction::BilateralShiftAction(std::vector<long> coordinates)
    : coordinates_(std::move(coordinates)), free2_(Group::free(2)), group_(Group::free(2)) {
  std::sort(coordinates_.begin(), coordinates_.end());
  coordinates_.erase(std::unique(coordinates_.begin(), coordinates_.end()), coordinates_.end());
  std::vector<Group> parts(coordinates_.size() + 1, free2_);
  group_ = Group::product(std::move(parts));
}

std::size_t BilateralShiftAction::slot(long n) const {
  auto it = std::lower_bound(coordinates_.begin(), coordinates_.end(), n);
  if (it == coordinates_.end() || *it != n) return 0;
  return static_cast<std::size_t>(it - coordinates_.begin()) + 1;
}

Point BilateralShiftAction::act(const Element& g, const Point& x) const {
  const long n = x.factors.at(1).code.at(0);
  const std::size_t k = slot(n);
  const Element t_n = k == 0 ? free2_.identity() : g.factors.at(k);
  Element r = free2_.multiply(free2_.multiply(g.factors.at(0), x.factors.at(0)), free2_.inverse(t_n));
  return Point{{}, {std::move(r), x.factors.at(1)}};
}

std::string BilateralShiftAction::format_point(const Point& x) const {
  return "(" + free2_.format(x.factors.at(0)) + "," + std::to_string(x.factors.at(1).code.at(0)) + ")";
}

Point BilateralShiftAction::parse_point(std::string_view text) const {
  const std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw std::invalid_argument("expected (word,n)");
  const auto parts = split(std::string_view(t).substr(1, t.size() - 2), ',');
  if (parts.size() != 2) throw std::invalid_argument("expected (word,n)");
  return point(free2_.parse_element(parts[0]), parse_long(parts[1]));
}

Element BilateralShiftAction::coordinate_element(const Element& s, long n) const {
  return element(free2_.identity(), {{n, s}});
}

Element BilateralShiftAction::element(const Element& s, const std::map<long, Element>& t) const {
  Element g = group_.identity();
  g.factors[0] = s;
  for (const auto& [n, tn] : t) {
    const std::size_t k = slot(n);
    if (k == 0) {
      if (tn == free2_.identity()) continue;
      throw std::out_of_range("coordinate " + std::to_string(n) + " is outside the truncation");
    }
    g.factors[k] = tn;
  }
  group_.validate(g);
  return g;
}

Point BilateralShiftAction::point(const Element& r, long n) const {
  free2_.validate(r);
  return Point{{}, {r, Element{{n}, {}}}};
}

std::vector<long> BilateralShiftAction::support(const Element& g) const {
  std::vector<long> out;
  for (std::size_t k = 0; k < coordinates_.size(); ++k) {
    if (!free2_.is_identity(g.factors.at(k + 1))) out.push_back(coordinates_[k]);
  }
  return out;
}

std::unique_ptr<Action> make_translation_action(const Group& g) { return std::make_unique<LeftTranslation>(g); }

// ---------------------------------------------------------------------------

std::vector<Point> invariance_core(const Action& action, std::span<const Point> T, std::span<const Element> K) {
  if (T.empty()) throw std::invalid_argument("invariance defect of an empty set");
  const auto& G = action.group();
  if (std::none_of(K.begin(), K.end(), [&](const Element& s) { return G.is_identity(s); })) {
    throw std::invalid_argument("K must contain the identity");
  }
  const std::set<Point> members(T.begin(), T.end());
  std::vector<Point> core;
  for (const auto& x : T) {
    const bool inside = std::all_of(K.begin(), K.end(), [&](const Element& s) { return members.count(action.act(s, x)) > 0; });
    if (inside) core.push_back(x);
  }
  return core;
}

Rational invariance_defect(const Action& action, std::span<const Point> T, std::span<const Element> K) {
  const auto core = invariance_core(action, T, K);
  const std::set<Point> distinct(T.begin(), T.end());
  Rational d = Rational(1) - Rational(static_cast<long>(core.size()), static_cast<long>(distinct.size()));
  d.canonicalize();
  return d;
}

FolnerCertificate folner_search(const Action& action, std::span<const Element> K, const Rational& delta,
                                std::size_t size_cap, std::span<const Point> forbidden) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  for (std::size_t n = 1;; ++n) {
    auto T = action.exhaustion(n);
    if (!T) throw std::invalid_argument("action '" + action.name() + "' has no Folner exhaustion");
    if (T->size() > size_cap) {
      throw std::runtime_error("Folner search exhausted size cap " + std::to_string(size_cap) + " before reaching defect " +
                               to_string(delta));
    }
    const Rational defect = invariance_defect(action, *T, K);
    if (defect > delta) continue;
    FolnerCertificate cert;
    cert.K.assign(K.begin(), K.end());
    cert.T = std::move(*T);
    if (!forbidden.empty()) {
      auto shift = action.separating_shift(cert.T, forbidden);
      if (!shift) throw std::invalid_argument("action '" + action.name() + "' cannot separate Folner sets from a finite set");
      for (auto& x : cert.T) x = action.act(*shift, x);
    }
    cert.core = invariance_core(action, cert.T, K);
    cert.defect = invariance_defect(action, cert.T, K);
    return cert;
  }
}

// ---------------------------------------------------------------------------

GroupRingElement GroupRingElement::unit(const Group& g, const Element& x) {
  GroupRingElement r(g);
  r.add(x, GaussianRational(1L));
  return r;
}

void GroupRingElement::add(const Element& x, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(x, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (const auto& [x, c] : o.coeffs_) r.add(x, c);
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (const auto& [x, c] : o.coeffs_) r.add(x, -c);
  return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  GroupRingElement r(*group_);
  for (const auto& [x, c] : coeffs_) {
    for (const auto& [y, d] : o.coeffs_) r.add(group_->multiply(x, y), c * d);
  }
  return r;
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement r(*group_);
  for (const auto& [x, c] : coeffs_) r.add(group_->inverse(x), c.conj());
  return r;
}

GaussianRational GroupRingElement::trace() const {
  auto it = coeffs_.find(group_->identity());
  return it == coeffs_.end() ? GaussianRational() : it->second;
}

Rational GroupRingElement::norm_squared() const {
  Rational s(0);
  for (const auto& [x, c] : coeffs_) s += c.norm_squared();
  return s;
}

TwoNorm ring_commutator_two_norm(const Group& group, const Element& g, const Element& h) {
  group.validate(g);
  group.validate(h);
  const auto ug = GroupRingElement::unit(group, g);
  const auto uh = GroupRingElement::unit(group, h);
  const auto c = ug * uh - uh * ug;
  const GaussianRational sq = (c.adjoint() * c).trace();
  return TwoNorm::from_square(ExactScalar(sq.re));
}

}  // namespace mcduff::groups
