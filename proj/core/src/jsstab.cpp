#include "mcduff/jsstab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mcduff::jsstab {

namespace {

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

std::vector<Element> omega_coords(const groups::Group& H, const Element& h) {
  std::vector<Element> out{H.identity()};
  push_unique(out, h);
  push_unique(out, H.inverse(h));
  return out;
}

/// omega on a column given its cells: h^-1 on Z = {z_e in U0, z_h in U1},
/// h on gamma_{h^-1} Z = {z_{h^-1} in U0, z_e in U1}, e elsewhere.
template <class Cell>
Element omega(const groups::Group& H, const Element& h, const Element& h_inv, Cell&& u0) {
  const bool e0 = u0(H.identity());
  if (e0 && !u0(h)) return h_inv;
  if (!e0 && u0(h_inv)) return h;
  return H.identity();
}

std::size_t index_of(const std::vector<Element>& v, const Element& x) {
  const auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw std::logic_error("coordinate outside the footprint");
  return static_cast<std::size_t>(it - v.begin());
}

template <class Cell>
bool column_holds(const ColumnEvent& c, Cell&& u0) {
  std::size_t mask = 0;
  for (std::size_t i = 0; i < c.footprint.size(); ++i) {
    if (u0(c.footprint[i])) mask |= std::size_t{1} << i;
  }
  return c.table[mask];
}

void check_arity(std::size_t k) {
  if (k > RectangleEvent::kFootprintCap) {
    throw std::runtime_error("column footprint of " + std::to_string(k) + " coordinates exceeds the cap of " +
                             std::to_string(RectangleEvent::kFootprintCap));
  }
}

/// Builds a column event over `footprint` from a predicate on cell masks.
template <class Pred>
ColumnEvent tabulate(std::vector<Element> footprint, Pred&& pred) {
  check_arity(footprint.size());
  ColumnEvent c;
  c.table.assign(std::size_t{1} << footprint.size(), false);
  for (std::size_t mask = 0; mask < c.table.size(); ++mask) {
    auto u0 = [&](const Element& s) { return ((mask >> index_of(footprint, s)) & 1U) != 0; };
    c.table[mask] = pred(u0);
  }
  c.footprint = std::move(footprint);
  return c;
}

std::set<Point> as_set(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

std::vector<Point> symmetric_difference_with_preimage(const groups::Action& act, const std::vector<Point>& E, const Element& g) {
  const std::set<Point> Es = as_set(E);
  const Element gi = act.group().inverse(g);
  std::set<Point> pre;
  for (const auto& x : E) pre.insert(act.act(gi, x));
  std::vector<Point> out;
  std::set_symmetric_difference(Es.begin(), Es.end(), pre.begin(), pre.end(), std::back_inserter(out));
  return out;
}

// Keyed coordinate sampler.

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_element(const Element& a) {
  std::uint64_t h = 0x51ed270b27b3a1c3ULL ^ a.code.size();
  for (long c : a.code) h = mix(h ^ static_cast<std::uint64_t>(c));
  for (const auto& f : a.factors) h = mix(h ^ hash_element(f) ^ 0xa5a5a5a5ULL);
  return h;
}

struct Sampler {
  std::uint64_t seed;
  std::uint64_t threshold;

  bool u0(std::uint64_t sample, const Element& s, const Point& x) const {
    const std::uint64_t k = mix(mix(seed ^ mix(sample)) ^ hash_element(s)) ^ (hash_element(x) * 0x9e3779b97f4a7c15ULL);
    return mix(k) < threshold;
  }
};

std::uint64_t grid_threshold(const ExactScalar& t) {
  const Integer two64 = Integer(1) << 64;
  const Integer n = certified_floor(t * ExactScalar(Rational(two64)));
  if (n <= 0 || n >= two64) throw std::logic_error("threshold outside (0, 2^64)");
  Integer hi = n >> 32;
  Integer lo = n - (hi << 32);
  return (static_cast<std::uint64_t>(hi.get_ui()) << 32) | static_cast<std::uint64_t>(lo.get_ui());
}

McResult wilson(long n, long k, std::uint64_t seed) {
  constexpr double z = 2.5758293035489004;
  McResult r;
  r.samples = n;
  r.successes = k;
  r.seed = seed;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1 + z * z / nn;
  const double centre = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  r.estimate = p;
  r.lo = std::max(0.0, centre - half);
  r.hi = std::min(1.0, centre + half);
  r.half_width = half;
  return r;
}

/// Runs `trial(sample) -> {success, involution_ok}` over [0, samples) in
/// deterministic chunks.
template <class Trial>
McResult run_trials(long samples, std::uint64_t seed, Trial trial) {
  if (samples < 1000) throw std::invalid_argument("at least 1000 samples are required");
  const long chunks = std::clamp<long>(static_cast<long>(std::thread::hardware_concurrency()), 1, 8);
  std::vector<std::future<std::pair<long, long>>> jobs;
  for (long c = 0; c < chunks; ++c) {
    const long from = samples * c / chunks;
    const long to = samples * (c + 1) / chunks;
    jobs.push_back(std::async(std::launch::async, [from, to, &trial] {
      long hits = 0;
      long bad = 0;
      for (long i = from; i < to; ++i) {
        const auto [ok, inv] = trial(static_cast<std::uint64_t>(i));
        hits += ok ? 1 : 0;
        bad += inv ? 0 : 1;
      }
      return std::pair{hits, bad};
    }));
  }
  long hits = 0;
  long bad = 0;
  for (auto& j : jobs) {
    const auto [a, b] = j.get();
    hits += a;
    bad += b;
  }
  McResult r = wilson(samples, hits, seed);
  r.involution_failures = bad;
  return r;
}

/// Evaluation context for one sampled y.
struct Context {
  const WreathModel& model;
  const StabilityWitness& w;
  Sampler sampler;
  std::set<Point> E;
  Element h;
  Element h_inv;

  Context(const WreathModel& m, const StabilityWitness& wit, std::uint64_t seed)
      : model(m), w(wit), sampler{seed, grid_threshold(wit.t)}, E(as_set(wit.E)), h(m.h()), h_inv(m.H().inverse(m.h())) {}

  bool y(std::uint64_t i, const Element& s, const Point& x) const { return sampler.u0(i, s, x); }

  Element omega_of(std::uint64_t i, const Point& x) const {
    return omega(model.H(), h, h_inv, [&](const Element& s) { return y(i, s, x); });
  }

  /// (T0 y)_{s,x}
  bool t0(std::uint64_t i, const Element& s, const Point& x) const {
    if (!E.contains(x)) return y(i, s, x);
    const Element k = model.H().inverse(omega_of(i, x));
    return y(i, model.H().multiply(k, s), x);
  }

  /// T0 applied twice returns y on the omega coordinates of every column of E.
  bool involution_ok(std::uint64_t i) const {
    const auto& H = model.H();
    for (const auto& x : E) {
      auto once = [&](const Element& s) { return t0(i, s, x); };
      const Element k = H.inverse(omega(H, h, h_inv, once));
      for (const auto& s : omega_coords(H, h)) {
        if (once(H.multiply(k, s)) != y(i, s, x)) return false;
      }
    }
    return true;
  }

  /// (alpha_f y)_{s,x}
  bool alpha(std::uint64_t i, const WreathElement& f, const Element& s, const Point& x) const {
    const auto& G = model.G();
    const auto it = f.ht.find(x);
    const Element s2 = it == f.ht.end() ? s : model.H().multiply(model.H().inverse(it->second), s);
    return y(i, s2, model.action().act(G.inverse(f.g), x));
  }

  bool in_A(const std::function<bool(const Element&, const Point&)>& cell) const {
    const Element e = model.H().identity();
    return std::all_of(E.begin(), E.end(), [&](const Point& x) { return cell(e, x); });
  }

  bool holds(const RectangleEvent& p, const std::function<bool(const Element&, const Point&)>& cell) const {
    if (p.is_empty()) return false;
    for (const auto& [x, c] : p.columns()) {
      if (!column_holds(c, [&](const Element& s) { return cell(s, x); })) return false;
    }
    return true;
  }
};

double approx(const ExactScalar& x) { return x.enclose(128).mid_double(); }

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::string describe(const McResult& r) {
  return "estimate " + fmt_double(r.estimate) + ", 99% CI [" + fmt_double(r.lo) + ", " + fmt_double(r.hi) + "], " +
         std::to_string(r.successes) + "/" + std::to_string(r.samples);
}

}  // namespace

// ---------------------------------------------------------------------------

WreathModel::WreathModel(groups::Group H, std::shared_ptr<const groups::Action> action, Element h, std::vector<WreathElement> F)
    : H_(std::move(H)), action_(std::move(action)), h_(std::move(h)), F_(std::move(F)) {
  if (!action_) throw std::invalid_argument("missing G-action");
  H_.validate(h_);
  if (H_.is_identity(h_)) throw std::invalid_argument("h must not be the identity");
  if (F_.empty()) throw std::invalid_argument("F must be nonempty");
  for (auto& f : F_) {
    G().validate(f.g);
    for (auto it = f.ht.begin(); it != f.ht.end();) {
      H_.validate(it->second);
      if (H_.is_identity(it->second)) {
        it = f.ht.erase(it);
      } else {
        push_unique(W_, it->first);
        ++it;
      }
    }
  }
  std::sort(W_.begin(), W_.end());
}

std::vector<Element> WreathModel::K() const {
  std::vector<Element> out;
  for (const auto& f : F_) push_unique(out, f.g);
  return out;
}

std::vector<Point> WreathModel::forbidden() const {
  std::vector<Point> out = W_;
  for (const auto& f : F_) {
    const Element gi = G().inverse(f.g);
    for (const auto& w : W_) push_unique(out, action_->act(gi, w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string WreathModel::format(const WreathElement& f) const {
  std::string out;
  bool first = true;
  for (const auto& [x, v] : f.ht) {
    out += (first ? "" : "&") + action_->format_point(x) + "->" + H_.format(v);
    first = false;
  }
  return out + "@" + G().format(f.g);
}

WreathElement WreathModel::parse_element(std::string_view text) const {
  const auto at = text.rfind('@');
  if (at == std::string_view::npos) throw std::invalid_argument("wreath element '" + std::string(text) + "' lacks '@g'");
  WreathElement f;
  f.g = G().parse_element(text.substr(at + 1));
  std::string_view rest = text.substr(0, at);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view entry = rest.substr(0, amp);
    const auto arrow = entry.find("->");
    if (arrow == std::string_view::npos) throw std::invalid_argument("expected x->a in '" + std::string(entry) + "'");
    const Element v = H_.parse_element(entry.substr(arrow + 2));
    H_.validate(v);
    if (!H_.is_identity(v)) f.ht[action_->parse_point(entry.substr(0, arrow))] = v;
    rest = amp == std::string_view::npos ? std::string_view{} : rest.substr(amp + 1);
  }
  return f;
}

WreathElement WreathModel::inverse(const WreathElement& f) const {
  WreathElement out;
  out.g = G().inverse(f.g);
  for (const auto& [x, v] : f.ht) out.ht[action_->act(out.g, x)] = H_.inverse(v);
  return out;
}

EpsChoice choose_eps_js(long F_size) {
  if (F_size < 1) throw std::invalid_argument("|F| must be at least 1");
  // 2^(-k/b) > (c/d)  <=>  d^b > 2^k c^b
  auto smallest_b = [&](unsigned k) -> long {
    const Integer c = F_size - 1;
    const Integer d = F_size;
    if (c == 0) return 1;
    Integer cb = c;
    Integer db = d;
    for (long b = 1;; ++b) {
      if (db > (cb << k)) return b;
      cb *= c;
      db *= d;
    }
  };
  return {Rational(1, smallest_b(3)), Rational(1, smallest_b(6))};
}

StabilityWitness build_witness(const WreathModel& model, const WitnessOptions& options) {
  const EpsChoice choice = choose_eps_js(static_cast<long>(model.F().size()));
  StabilityWitness w;
  w.epsilon = options.conservative ? choice.eps_safe : choice.eps;
  const auto forbidden = model.forbidden();
  if (options.E_override) {
    w.E = *options.E_override;
    std::sort(w.E.begin(), w.E.end());
    w.E.erase(std::unique(w.E.begin(), w.E.end()), w.E.end());
    if (w.E.empty()) throw std::invalid_argument("E must be nonempty");
    for (const auto& x : w.E) {
      if (std::binary_search(forbidden.begin(), forbidden.end(), x)) {
        throw std::invalid_argument("E meets W or some g^-1 W at " + model.action().format_point(x));
      }
    }
  } else {
    std::vector<Element> K{model.G().identity()};
    for (const auto& g : model.K()) push_unique(K, g);
    w.E = groups::folner_search(model.action(), K, w.epsilon, options.size_cap, forbidden).T;
  }
  w.t = ExactScalar::dyadic(Rational(-1, static_cast<long>(w.E.size())));
  const std::string hs = model.H().format(model.h());
  w.omega_rule = "x in E: h^-1 on {y_e in U0, y_h in U1}, h on {y_h^-1 in U0, y_e in U1}, e otherwise; h = " + hs;
  w.A_rule = "y_{e,x} in U0 for all x in E";
  return w;
}

// ---------------------------------------------------------------------------

ColumnEvent ColumnEvent::all_in_U0(std::vector<Element> coords) {
  check_arity(coords.size());
  ColumnEvent c;
  c.table.assign(std::size_t{1} << coords.size(), false);
  c.table.back() = true;
  c.footprint = std::move(coords);
  return c;
}

bool ColumnEvent::full() const { return std::all_of(table.begin(), table.end(), [](bool b) { return b; }); }
bool ColumnEvent::empty() const { return std::none_of(table.begin(), table.end(), [](bool b) { return b; }); }

RectangleEvent RectangleEvent::nothing() {
  RectangleEvent r;
  r.empty_ = true;
  return r;
}

void RectangleEvent::set(const Point& x, ColumnEvent c) {
  if (c.table.size() != (std::size_t{1} << c.footprint.size())) throw std::invalid_argument("truth table size mismatch");
  check_arity(c.footprint.size());
  if (c.empty()) {
    columns_.clear();
    empty_ = true;
    return;
  }
  if (empty_) return;
  if (c.full()) {
    columns_.erase(x);
  } else {
    columns_[x] = std::move(c);
  }
}

RectangleEvent RectangleEvent::intersect(const RectangleEvent& other) const {
  if (empty_ || other.empty_) return nothing();
  RectangleEvent out = *this;
  for (const auto& [x, b] : other.columns_) {
    const auto it = out.columns_.find(x);
    if (it == out.columns_.end()) {
      out.columns_[x] = b;
      continue;
    }
    const ColumnEvent a = it->second;
    std::vector<Element> fp = a.footprint;
    for (const auto& s : b.footprint) push_unique(fp, s);
    out.set(x, tabulate(fp, [&](auto&& u0) { return column_holds(a, u0) && column_holds(b, u0); }));
    if (out.empty_) return out;
  }
  return out;
}

ExactScalar exact_measure(const RectangleEvent& event, const ExactScalar& t) {
  if (event.is_empty()) return ExactScalar();
  const ExactScalar s = ExactScalar(1L) - t;
  ExactScalar total(1L);
  for (const auto& [x, c] : event.columns()) {
    const std::size_t k = c.arity();
    std::vector<long> count(k + 1, 0);
    for (std::size_t mask = 0; mask < c.table.size(); ++mask) {
      if (c.table[mask]) ++count[static_cast<std::size_t>(__builtin_popcountll(mask))];
    }
    ExactScalar col;
    for (std::size_t j = 0; j <= k; ++j) {
      if (count[j] != 0) col += ExactScalar(count[j]) * t.pow(static_cast<long>(j)) * s.pow(static_cast<long>(k - j));
    }
    total *= col;
  }
  return total;
}

ExactScalar symmetric_difference_measure(const RectangleEvent& p, const RectangleEvent& q, const ExactScalar& t) {
  return exact_measure(p, t) + exact_measure(q, t) - ExactScalar(2L) * exact_measure(p.intersect(q), t);
}

RectangleEvent event_A(const WreathModel& model, const StabilityWitness& w) {
  RectangleEvent a;
  for (const auto& x : w.E) a.set(x, ColumnEvent::all_in_U0({model.H().identity()}));
  return a;
}

RectangleEvent t0_preimage(const WreathModel& model, const StabilityWitness& w, const RectangleEvent& p) {
  if (p.is_empty()) return p;
  const auto& H = model.H();
  const Element& h = model.h();
  const Element h_inv = H.inverse(h);
  const std::set<Point> E = as_set(w.E);
  RectangleEvent out;
  for (const auto& [x, c] : p.columns()) {
    if (!E.contains(x)) {
      out.set(x, c);
      continue;
    }
    std::vector<Element> fp = omega_coords(H, h);
    for (const auto& s : c.footprint) {
      push_unique(fp, s);
      push_unique(fp, H.multiply(h, s));
      push_unique(fp, H.multiply(h_inv, s));
    }
    out.set(x, tabulate(fp, [&](auto&& u0) {
      const Element k = H.inverse(omega(H, h, h_inv, u0));
      return column_holds(c, [&](const Element& s) { return u0(H.multiply(k, s)); });
    }));
  }
  return out;
}

RectangleEvent alpha_preimage(const WreathModel& model, const WreathElement& f, const RectangleEvent& p) {
  if (p.is_empty()) return p;
  const auto& H = model.H();
  const Element gi = model.G().inverse(f.g);
  RectangleEvent out;
  for (const auto& [x, c] : p.columns()) {
    ColumnEvent moved = c;
    const auto it = f.ht.find(x);
    if (it != f.ht.end()) {
      const Element k = H.inverse(it->second);
      for (auto& s : moved.footprint) s = H.multiply(k, s);
    }
    out.set(model.action().act(gi, x), std::move(moved));
  }
  return out;
}

RectangleEvent event_Yg(const WreathModel& model, const StabilityWitness& w, const WreathElement& f) {
  const auto& H = model.H();
  const Element h_inv = H.inverse(model.h());
  RectangleEvent out;
  for (const auto& z : symmetric_difference_with_preimage(model.action(), w.E, f.g)) {
    out.set(z, tabulate(omega_coords(H, model.h()), [&](auto&& u0) { return H.is_identity(omega(H, model.h(), h_inv, u0)); }));
  }
  return out;
}

RectangleEvent event_C(const WreathModel& model, const StabilityWitness& w, const WreathElement& f) {
  RectangleEvent out;
  for (const auto& z : symmetric_difference_with_preimage(model.action(), w.E, f.g)) {
    out.set(z, ColumnEvent::all_in_U0(omega_coords(model.H(), model.h())));
  }
  return out;
}

// ---------------------------------------------------------------------------

McResult mc_estimate(const WreathModel& model, const StabilityWitness& w, int condition, long samples, std::uint64_t seed,
                     std::size_t index, const RectangleEvent* rect) {
  const Context ctx(model, w, seed);
  const auto& H = model.H();
  using Cell = std::function<bool(const Element&, const Point&)>;
  switch (condition) {
    case 1: {
      const WreathElement& f = model.F().at(index);
      const auto& act = model.action();
      const Element gi = model.G().inverse(f.g);
      std::vector<Point> probe = w.E;
      for (const auto& x : w.E) push_unique(probe, act.act(f.g, x));
      return run_trials(samples, seed, [&](std::uint64_t i) {
        bool same = true;
        for (const auto& x : probe) {
          // T(alpha_f y)(x)
          Element lhs = H.identity();
          if (ctx.E.contains(x)) lhs = omega(H, ctx.h, ctx.h_inv, [&](const Element& s) { return ctx.alpha(i, f, s, x); });
          // (f T(y) f^-1)(x) = ht(x) T(y)(g^-1 x) ht(x)^-1
          const Point src = act.act(gi, x);
          Element rhs = ctx.E.contains(src) ? ctx.omega_of(i, src) : H.identity();
          if (const auto it = f.ht.find(x); it != f.ht.end()) rhs = H.multiply(H.multiply(it->second, rhs), H.inverse(it->second));
          if (!(lhs == rhs)) {
            same = false;
            break;
          }
        }
        return std::pair{same, true};
      });
    }
    case 2: {
      if (rect == nullptr) throw std::invalid_argument("condition 2 needs a rectangle");
      for (const auto& x : w.E) {
        if (rect->columns().contains(x)) throw std::invalid_argument("the rectangle must leave E-columns unconstrained");
      }
      return run_trials(samples, seed, [&](std::uint64_t i) {
        const bool before = ctx.holds(*rect, [&](const Element& s, const Point& x) { return ctx.y(i, s, x); });
        const bool after = ctx.holds(*rect, [&](const Element& s, const Point& x) { return ctx.t0(i, s, x); });
        return std::pair{before == after, true};
      });
    }
    case 3: {
      const WreathElement finv = model.inverse(model.F().at(index));
      return run_trials(samples, seed, [&](std::uint64_t i) {
        const bool in_a = ctx.in_A([&](const Element& s, const Point& x) { return ctx.y(i, s, x); });
        // y in alpha_f(A)  <=>  alpha_f^-1(y) in A
        const bool in_fa = ctx.in_A([&](const Element& s, const Point& x) { return ctx.alpha(i, finv, s, x); });
        return std::pair{in_a != in_fa, true};
      });
    }
    case 4:
      return run_trials(samples, seed, [&](std::uint64_t i) {
        const Cell plain = [&](const Element& s, const Point& x) { return ctx.y(i, s, x); };
        const Cell moved = [&](const Element& s, const Point& x) { return ctx.t0(i, s, x); };
        return std::pair{ctx.in_A(plain) != ctx.in_A(moved), ctx.involution_ok(i)};
      });
    default:
      throw std::invalid_argument("condition must be 1, 2, 3 or 4");
  }
}

McResult mc_pushforward(const WreathModel& model, const StabilityWitness& w, const RectangleEvent& p, long samples, std::uint64_t seed) {
  const Context ctx(model, w, seed);
  return run_trials(samples, seed, [&](std::uint64_t i) {
    return std::pair{ctx.holds(p, [&](const Element& s, const Point& x) { return ctx.t0(i, s, x); }), true};
  });
}

// ---------------------------------------------------------------------------

namespace {

RectangleEvent random_rectangle(const WreathModel& model, const std::vector<Point>& columns, std::mt19937_64& rng) {
  const auto& H = model.H();
  const Element& h = model.h();
  std::vector<Element> pool = omega_coords(H, h);
  push_unique(pool, H.multiply(h, h));
  RectangleEvent r;
  const std::size_t ncols = 1 + rng() % std::min<std::size_t>(3, columns.size());
  for (std::size_t c = 0; c < ncols; ++c) {
    const Point& x = columns[rng() % columns.size()];
    std::vector<Element> fp;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t j = 0; j < k; ++j) push_unique(fp, pool[rng() % pool.size()]);
    ColumnEvent col;
    col.table.resize(std::size_t{1} << fp.size());
    do {
      for (std::size_t m = 0; m < col.table.size(); ++m) col.table[m] = (rng() & 1U) != 0;
    } while (std::none_of(col.table.begin(), col.table.end(), [](bool b) { return b; }));
    col.footprint = std::move(fp);
    r = r.intersect([&] {
      RectangleEvent one;
      one.set(x, col);
      return one;
    }());
  }
  return r;
}

}  // namespace

Certificate stability_report(const WreathModel& model, const ReportOptions& options) {
  const StabilityWitness w = build_witness(model, options.witness);
  const long nF = static_cast<long>(model.F().size());
  const long nE = static_cast<long>(w.E.size());
  const Rational& eps = w.epsilon;
  const ExactScalar& t = w.t;
  const ExactScalar target(Rational(1) - Rational(1, nF));
  const auto& act = model.action();
  const long mc_small = std::max(1000L, options.samples / 10);

  Certificate cert;
  cert.theorem = "js-stability";
  cert.mode = "exact+montecarlo";
  cert.seed = options.seed;
  cert.param("H", model.H().name());
  cert.param("h", model.H().format(model.h()));
  cert.param("action", act.name());
  std::string flist;
  for (const auto& f : model.F()) flist += (flist.empty() ? "" : ",") + model.format(f);
  cert.param("F", flist);
  cert.param("epsilon", to_string(eps));
  cert.param("epsilon_rule", options.witness.conservative ? "2^(-6 eps) > 1 - 1/|F|" : "2^(-3 eps) > 1 - 1/|F|");
  cert.param("E_size", std::to_string(nE));
  cert.param("E_first", act.format_point(w.E.front()));
  cert.param("E_last", act.format_point(w.E.back()));
  cert.param("t", t.to_string());
  cert.param("omega", w.omega_rule);
  cert.param("samples", std::to_string(options.samples));

  auto record = [&](const std::string& name, const McResult& r) {
    if (options.tallies != nullptr) options.tallies->emplace_back(name, r);
  };
  auto mc_item = [&](const std::string& name, const McResult& r, double exact, const std::string& exact_text) {
    record(name, r);
    auto item = holds_item(name, r.covers(exact), describe(r) + "; exact " + exact_text);
    item.approx = fmt_double(r.estimate);
    return item;
  };

  const int k = options.witness.conservative ? 6 : 3;
  cert.add(exact_item("epsilon_choice", ExactScalar::dyadic(Rational(-k) * eps), Relation::Greater, target));
  std::vector<Element> K{model.G().identity()};
  for (const auto& g : model.K()) push_unique(K, g);
  cert.add(exact_item("E_invariance", ExactScalar(groups::invariance_defect(act, w.E, K)), Relation::LessEq, ExactScalar(eps)));
  {
    const auto forb = model.forbidden();
    const bool apart = std::none_of(w.E.begin(), w.E.end(), [&](const Point& x) { return std::binary_search(forb.begin(), forb.end(), x); });
    cert.add(holds_item("E_avoids_W", apart));
  }
  const RectangleEvent A = event_A(model, w);
  const ExactScalar half(Rational(1, 2));
  cert.add(exact_item("measure_A", exact_measure(A, t), Relation::Equal, half));

  // (1) near-equivariance of T
  for (std::size_t i = 0; i < model.F().size(); ++i) {
    const auto& f = model.F()[i];
    const std::string tag = "[" + model.format(f) + "]";
    const RectangleEvent Yg = event_Yg(model, w, f);
    const RectangleEvent C = event_C(model, w, f);
    const ExactScalar nu_Y = exact_measure(Yg, t);
    const ExactScalar nu_C = exact_measure(C, t);
    cert.add(exact_item("c1_measure_C" + tag, nu_C, Relation::GreaterEq, target));
    cert.add(exact_item("c1_C_inside_Yg" + tag, exact_measure(C.intersect(Yg), t), Relation::Equal, nu_C));
    cert.add(exact_item("c1_measure_Yg" + tag, nu_Y, Relation::GreaterEq, target));
    const McResult r = mc_estimate(model, w, 1, options.samples, options.seed + 100 + i, i);
    auto agree = mc_item("c1_mc_Yg" + tag, r, approx(nu_Y), nu_Y.decimal(8));
    agree.advisory = true;
    cert.add(std::move(agree));
    cert.add(holds_item("c1_mc_above_C" + tag, r.hi >= approx(nu_C), "CI upper end vs nu(C) = " + nu_C.decimal(8)));
    const long moved = static_cast<long>(symmetric_difference_with_preimage(act, w.E, f.g).size());
    auto lit = exact_item("literal_invariance" + tag, ExactScalar(moved), Relation::LessEq, ExactScalar(Rational(eps * nE)));
    lit.advisory = true;
    lit.note = "|E delta g^-1 E| <= eps |E|; the guaranteed bound is 2 eps |E|";
    cert.add(std::move(lit));
  }

  // (2) T0 fixes rectangles that leave the E-columns free
  {
    const std::set<Point> Es = as_set(w.E);
    std::vector<Point> outside;
    for (const auto& x : model.forbidden()) push_unique(outside, x);
    for (const auto& f : model.F()) {
      for (const auto& x : w.E) {
        push_unique(outside, act.act(f.g, x));
        push_unique(outside, act.act(model.G().inverse(f.g), x));
      }
    }
    std::erase_if(outside, [&](const Point& x) { return Es.contains(x); });
    std::vector<Point> anywhere = outside;
    for (const auto& x : w.E) push_unique(anywhere, x);
    std::mt19937_64 rng(options.seed);
    long fixed = 0;
    long mc_fixed = 0;
    long preserved = 0;
    long mc_agree = 0;
    const int n = options.random_rectangles;
    for (int j = 0; j < n; ++j) {
      if (!outside.empty()) {
        const RectangleEvent B = random_rectangle(model, outside, rng);
        if (symmetric_difference_measure(t0_preimage(model, w, B), B, t).is_zero()) ++fixed;
        const McResult r = mc_estimate(model, w, 2, mc_small, options.seed + 1000 + static_cast<std::uint64_t>(j), 0, &B);
        record("c2_rectangle_" + std::to_string(j), r);
        if (r.successes == r.samples) ++mc_fixed;
      } else {
        ++fixed;
        ++mc_fixed;
      }
      const RectangleEvent R = random_rectangle(model, anywhere, rng);
      const ExactScalar nu_R = exact_measure(R, t);
      if (exact_measure(t0_preimage(model, w, R), t) == nu_R) ++preserved;
      const McResult p = mc_pushforward(model, w, R, mc_small, options.seed + 2000 + static_cast<std::uint64_t>(j));
      record("pushforward_" + std::to_string(j), p);
      if (p.covers(approx(nu_R))) ++mc_agree;
    }
    const std::string of = " of " + std::to_string(n);
    cert.add(holds_item("c2_rectangles_fixed", fixed == n, std::to_string(fixed) + of + " with nu(T0 B delta B) = 0"));
    cert.add(holds_item("c2_mc_rectangles_fixed", mc_fixed == n, std::to_string(mc_fixed) + of + " with every sample fixed"));
    cert.add(holds_item("measure_preservation", preserved == n, std::to_string(preserved) + of + " with nu(T0^-1 R) = nu(R)"));
    auto adv = holds_item("mc_measure_preservation", mc_agree == n, std::to_string(mc_agree) + of + " inside the 99% CI");
    adv.advisory = true;
    cert.add(std::move(adv));
  }

  // (3) A is almost invariant under F
  const ExactScalar c3_bound = ExactScalar(2L) * (half - ExactScalar::dyadic(Rational(-1) - eps));
  cert.add(exact_item("c3_bound_vs_F", c3_bound, Relation::LessEq, ExactScalar(Rational(1, nF))));
  for (std::size_t i = 0; i < model.F().size(); ++i) {
    const auto& f = model.F()[i];
    const std::string tag = "[" + model.format(f) + "]";
    const RectangleEvent fA = alpha_preimage(model, model.inverse(f), A);
    const ExactScalar nu = symmetric_difference_measure(fA, A, t);
    cert.add(exact_item("c3_alpha_shift" + tag, nu, Relation::LessEq, c3_bound));
    const McResult r = mc_estimate(model, w, 3, options.samples, options.seed + 300 + i, i);
    auto agree = mc_item("c3_mc" + tag, r, approx(nu), nu.decimal(8));
    agree.advisory = true;
    cert.add(std::move(agree));
  }

  // (4) T0 moves A by a fixed amount
  const RectangleEvent TA = t0_preimage(model, w, A);
  cert.add(exact_item("c4_measure_T0A", exact_measure(TA, t), Relation::Equal, half));
  cert.add(exact_item("c4_symmetric_difference", symmetric_difference_measure(TA, A, t), Relation::Equal, half));
  const McResult r4 = mc_estimate(model, w, 4, options.samples, options.seed + 400);
  cert.add(mc_item("c4_mc", r4, 0.5, "1/2"));
  cert.add(holds_item("t0_involution", r4.involution_failures == 0,
                      std::to_string(r4.involution_failures) + " of " + std::to_string(r4.samples) + " samples violated T0 T0 = id"));
  return cert;
}

std::string mc_tally_csv(const std::vector<std::pair<std::string, McResult>>& rows) {
  std::string out = "condition,samples,successes,seed\n";
  for (const auto& [name, r] : rows) {
    std::string quoted;
    for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    out += "\"" + quoted + "\"," + std::to_string(r.samples) + "," + std::to_string(r.successes) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace mcduff::jsstab
