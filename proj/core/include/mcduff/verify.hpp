#pragma once

#include "mcduff/cantor.hpp"
#include "mcduff/certificate.hpp"
#include "mcduff/groups.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcduff::verify {

enum class TraceMode { Enumerated, Bounded };

std::string to_string(TraceMode m);
TraceMode parse_trace_mode(std::string_view text);

/// Largest delta = 1/b (b <= max_denominator) with 4^(-delta/(1-delta)) >= 1 - eps/32.
/// Throws std::invalid_argument for eps outside (0, 32) or when no b fits.
Rational choose_delta(const Rational& epsilon, long max_denominator = 1000000);

/// Largest delta = 1/b with 1 - 2^(-2 delta/(1-delta)) <= eps/8; 1/2 when eps >= 8.
Rational choose_shift_delta(const Rational& epsilon, long max_denominator = 1000000);

/// The window condition |(2*2^(-1/r) - 1)^(theta r) - 4^(-theta)| <= eps/32
/// for theta in {1, delta/(1-delta)}, at r = |T| and at r = (1-delta)|T|,
/// plus the ceiling condition (2^(-1/m))^ceil(m) >= 1/2 - eps/8, m = (1-delta)|T|.
std::vector<CertificateItem> check_size_conditions(long T_size, const Rational& delta, const Rational& epsilon,
                                                   const PrecisionPolicy& policy = {});

struct Displacement {
  std::string label;
  long moved = 0;
};

struct McDuffParams {
  Rational epsilon;
  Rational delta;
  long T_size = 0;
  /// |D|, the degree of the alternating group.
  long D_size = 0;
  TraceMode mode = TraceMode::Bounded;
  /// |sigma_h S \ S| per h; ignored when a tower is supplied.
  std::vector<Displacement> displacements;
  /// Tower from the Cantor pipeline, with the Omega it was built for.
  const cantor::TowerData* tower = nullptr;
  PrecisionPolicy policy;
};

/// Throws std::invalid_argument on inconsistent parameters; failed
/// inequalities are recorded in the certificate instead.
Certificate mcduff_certificate(const McDuffParams& params);

/// Independent-projection construction on an action: picks delta, finds an
/// (F, delta)-invariant T avoiding Y, and certifies the commutator and
/// centrality estimates for S = core of T.
Certificate shift_certificate(const groups::Action& action, std::span<const groups::Point> Y, std::span<const groups::Element> F,
                              const Rational& epsilon, std::size_t size_cap = 1 << 16);

/// (s, (t_k)) in F2 x F2^(+)N.
struct BilateralElement {
  groups::Element s;
  std::map<long, groups::Element> t;
};

/// Checks that g_{a,n}, g_{b,n} commute with F and fix the listed tensor
/// supports, and that ||[u_{g_{a,n}}, u_{g_{b,n}}]||_2^2 = 2.
/// Throws std::invalid_argument when n lies in K = K1 u K2.
Certificate free_example_check(long n, const std::vector<std::pair<groups::Element, long>>& omega1_support,
                               const std::vector<BilateralElement>& F);

}  // namespace mcduff::verify
