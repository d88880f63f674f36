#pragma once

// Stability witness for a generalized wreath product H wr_X G acting on
// Y = ([0,1]^H)^X with product Lebesgue measure nu.
//
// Conventions. gamma_k (k in H) shifts a column: (gamma_k z)_s = z_{k^-1 s}.
// A wreath element f = (ht, g) maps the coordinate (s, x) to (ht(gx) s, gx),
// so (alpha_f y)_{s,x} = y_{ht(x)^-1 s, g^-1 x}. Every coordinate is sampled
// only through its cell: U0 = [0, t] or U1 = (t, 1], t = 2^(-1/|E|).

#include "mcduff/certificate.hpp"
#include "mcduff/groups.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcduff::jsstab {

using groups::Element;
using groups::Point;

/// f = (ht, g) with ht finitely supported; entries equal to e are dropped.
struct WreathElement {
  std::map<Point, Element> ht;
  Element g;
};

class WreathModel {
 public:
  WreathModel(groups::Group H, std::shared_ptr<const groups::Action> action, Element h, std::vector<WreathElement> F);

  const groups::Group& H() const { return H_; }
  const groups::Action& action() const { return *action_; }
  const groups::Group& G() const { return action_->group(); }
  const Element& h() const { return h_; }
  const std::vector<WreathElement>& F() const { return F_; }
  /// Union of the supports of the ht.
  const std::vector<Point>& W() const { return W_; }
  /// {g_i}
  std::vector<Element> K() const;
  /// W together with every g_i^-1 W.
  std::vector<Point> forbidden() const;

  /// "x->a&y->b@g", the syntax read by parse_element.
  std::string format(const WreathElement& f) const;
  WreathElement parse_element(std::string_view text) const;
  WreathElement inverse(const WreathElement& f) const;

 private:
  groups::Group H_;
  std::shared_ptr<const groups::Action> action_;
  Element h_;
  std::vector<WreathElement> F_;
  std::vector<Point> W_;
};

struct EpsChoice {
  /// largest 1/b with 2^(-3/b) > 1 - 1/|F|
  Rational eps;
  /// largest 1/b with 2^(-6/b) > 1 - 1/|F|
  Rational eps_safe;
};

EpsChoice choose_eps_js(long F_size);

struct StabilityWitness {
  Rational epsilon;
  std::vector<Point> E;
  /// t = 2^(-1/|E|)
  ExactScalar t;
  std::string omega_rule;
  std::string A_rule;
};

struct WitnessOptions {
  bool conservative = true;
  std::size_t size_cap = 1 << 16;
  /// Use this E instead of searching (it must still avoid the forbidden set).
  std::optional<std::vector<Point>> E_override;
};

StabilityWitness build_witness(const WreathModel& model, const WitnessOptions& options = {});

/// Event on the coordinates of one column: a truth table over the U0/U1
/// cells of the listed H-coordinates (bit i of the index set means
/// footprint[i] lies in U0).
struct ColumnEvent {
  std::vector<Element> footprint;
  std::vector<bool> table;

  static ColumnEvent all_in_U0(std::vector<Element> coords);
  bool full() const;
  bool empty() const;
  std::size_t arity() const { return footprint.size(); }
};

/// Product of column events; missing columns are unconstrained.
class RectangleEvent {
 public:
  static constexpr std::size_t kFootprintCap = 16;

  RectangleEvent() = default;
  static RectangleEvent nothing();

  void set(const Point& x, ColumnEvent c);
  const std::map<Point, ColumnEvent>& columns() const { return columns_; }
  bool is_empty() const { return empty_; }

  RectangleEvent intersect(const RectangleEvent& other) const;

 private:
  std::map<Point, ColumnEvent> columns_;
  bool empty_ = false;
};

/// Exact measure as a polynomial in t and 1 - t.
ExactScalar exact_measure(const RectangleEvent& event, const ExactScalar& t);
/// nu(P delta Q) = nu(P) + nu(Q) - 2 nu(P n Q)
ExactScalar symmetric_difference_measure(const RectangleEvent& p, const RectangleEvent& q, const ExactScalar& t);

/// The set A = {y : y_{e,x} in U0 for all x in E}.
RectangleEvent event_A(const WreathModel& model, const StabilityWitness& w);
/// {y : T0(y) in P}. T0 is an involution, so this is also T0(P).
RectangleEvent t0_preimage(const WreathModel& model, const StabilityWitness& w, const RectangleEvent& p);
/// {y : alpha_f(y) in P}
RectangleEvent alpha_preimage(const WreathModel& model, const WreathElement& f, const RectangleEvent& p);
/// Y_g = {omega(y_z) = e for z in E delta g^-1 E}
RectangleEvent event_Yg(const WreathModel& model, const StabilityWitness& w, const WreathElement& f);
/// C = {y_{s,z} in U0 for s in {e, h, h^-1}, z in E delta g^-1 E}
RectangleEvent event_C(const WreathModel& model, const StabilityWitness& w, const WreathElement& f);

struct McResult {
  long samples = 0;
  long successes = 0;
  double estimate = 0;
  /// 99% Wilson interval
  double lo = 0;
  double hi = 0;
  double half_width = 0;
  std::uint64_t seed = 0;
  /// samples where T0(T0 y) differed from y on the inspected coordinates
  long involution_failures = 0;

  bool covers(double p) const { return lo <= p && p <= hi; }
};

/// Monte Carlo frequency of the condition's defining event:
///   1: T(alpha_f y) = f T(y) f^-1 for f = F[index]
///   2: B(T0 y) = B(y) for the rectangle `rect` (empty E-columns)
///   3: y in alpha_f(A) delta A for f = F[index]
///   4: y in T0(A) delta A
/// Throws std::invalid_argument when samples < 1000 or the condition is unknown.
McResult mc_estimate(const WreathModel& model, const StabilityWitness& w, int condition, long samples, std::uint64_t seed,
                     std::size_t index = 0, const RectangleEvent* rect = nullptr);

/// Frequency of {y : T0(y) in P}, for measure-preservation checks.
McResult mc_pushforward(const WreathModel& model, const StabilityWitness& w, const RectangleEvent& p, long samples, std::uint64_t seed);

struct ReportOptions {
  WitnessOptions witness;
  long samples = 100000;
  std::uint64_t seed = 1;
  int random_rectangles = 20;
  /// Receives the raw Monte Carlo tallies when set.
  std::vector<std::pair<std::string, McResult>>* tallies = nullptr;
};

Certificate stability_report(const WreathModel& model, const ReportOptions& options = {});

/// Rows "condition,samples,successes,seed".
std::string mc_tally_csv(const std::vector<std::pair<std::string, McResult>>& rows);

}  // namespace mcduff::jsstab
