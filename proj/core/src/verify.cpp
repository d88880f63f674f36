#include "mcduff/verify.hpp"

#include "mcduff/blockop.hpp"
#include "mcduff/repalg.hpp"
#include "mcduff/tensortrace.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <stdexcept>

namespace mcduff::verify {

std::string to_string(TraceMode m) { return m == TraceMode::Enumerated ? "enumerated" : "bounded"; }

TraceMode parse_trace_mode(std::string_view text) {
  if (text == "enumerated") return TraceMode::Enumerated;
  if (text == "bounded") return TraceMode::Bounded;
  throw std::invalid_argument("mode must be 'enumerated' or 'bounded', got '" + std::string(text) + "'");
}

namespace {

/// Smallest e >= 1 with q^e <= 1/4, or nullopt past `cap`. Needs 0 < q < 1.
std::optional<long> quarter_exponent(const Rational& q, long cap) {
  const Integer num = q.get_num();
  const Integer den = q.get_den();
  // q^e <= 1/4  <=>  4 num^e <= den^e
  auto ok = [&](long e) { return 4 * pow(num, static_cast<unsigned long>(e)) <= pow(den, static_cast<unsigned long>(e)); };
  if (!ok(cap)) return std::nullopt;
  long lo = 1;
  long hi = cap;
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Rational unit_fraction_delta(const Rational& q, long max_denominator, const std::string& what) {
  if (q <= 0) return Rational(1, 2);
  const auto e = quarter_exponent(q, max_denominator - 1);
  if (!e) throw std::invalid_argument("no delta = 1/b with b <= " + std::to_string(max_denominator) + " satisfies the " + what);
  return Rational(1, std::max(*e + 1, 2L));
}

ExactScalar half() { return ExactScalar(Rational(1, 2)); }

std::string rstr(const Rational& q) { return mcduff::to_string(q); }

/// Exact forms longer than this are decided and reported through intervals.
constexpr std::size_t kCompactLength = 600;

bool compact(const ExactScalar& v) { return v.to_string().size() <= kCompactLength; }

/// value rel bound, exactly when the value has a short exact form.
CertificateItem scalar_item(std::string name, const ExactScalar& value, Relation rel, const ExactScalar& bound, const PrecisionPolicy& policy) {
  if (compact(value)) return exact_item(std::move(name), value, rel, bound, policy);
  return interval_item(std::move(name), [&](mpfr_prec_t prec) { return value.enclose(prec); }, rel, bound, policy);
}

void scalar_param(Certificate& cert, const std::string& key, const ExactScalar& v) {
  if (compact(v)) {
    cert.param(key, v.to_string());
  } else {
    cert.param(key + " (approx)", v.decimal(30));
  }
}

/// base^exponent rel bound, exactly when the result stays short.
CertificateItem power_item(std::string name, const ExactScalar& base, const Rational& exponent, Relation rel, const ExactScalar& bound,
                           const PrecisionPolicy& policy) {
  const bool integral = exponent.get_den() == 1;
  if (integral && compact(base) && (base.term_count() <= 1 || exponent <= 8)) {
    const ExactScalar v = base.pow(to_long(exponent.get_num()));
    if (compact(v)) return exact_item(std::move(name), v, rel, bound, policy);
  }
  if (!integral && base.term_count() == 1 && !base.as_rational()) {
    try {
      return exact_item(std::move(name), base.pow(exponent), rel, bound, policy);
    } catch (const std::domain_error&) {
      // coefficient is not a perfect power: fall through to intervals
    }
  }
  return interval_item(
      std::move(name),
      [&](mpfr_prec_t prec) {
        const Interval b = base.enclose(prec);
        return integral ? b.pow(static_cast<unsigned long>(to_long(exponent.get_num()))) : b.pow(exponent);
      },
      rel, bound, policy);
}

CertificateItem theta_item(const Rational& r, const Rational& theta, const Rational& epsilon, const std::string& label,
                           const PrecisionPolicy& policy) {
  const ExactScalar base = ExactScalar(2L) * ExactScalar::dyadic(Rational(-1) / r) - ExactScalar(1L);
  const Rational exponent = theta * r;
  const ExactScalar target = ExactScalar::dyadic(Rational(-2) * theta);
  return interval_item(
      "theta_window(r=" + label + ",theta=" + rstr(theta) + ")",
      [&](mpfr_prec_t prec) {
        const Interval b = base.enclose(prec);
        const Interval p = exponent.get_den() == 1 ? b.pow(static_cast<unsigned long>(to_long(exponent.get_num()))) : b.pow(exponent);
        return (p - target.enclose(prec)).abs();
      },
      Relation::LessEq, ExactScalar(Rational(epsilon / 32)), policy);
}

Integer ceil_of(const Rational& q) { return ceil(q); }

}  // namespace

Rational choose_delta(const Rational& epsilon, long max_denominator) {
  if (epsilon <= 0 || epsilon >= 32) throw std::invalid_argument("epsilon must lie in (0, 32)");
  return unit_fraction_delta(Rational(1) - epsilon / 32, max_denominator, "delta condition");
}

Rational choose_shift_delta(const Rational& epsilon, long max_denominator) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  return unit_fraction_delta(Rational(1) - epsilon / 8, max_denominator, "shift delta condition");
}

std::vector<CertificateItem> check_size_conditions(long T_size, const Rational& delta, const Rational& epsilon, const PrecisionPolicy& policy) {
  if (T_size < 1) throw std::invalid_argument("|T| must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0, 1)");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  const Rational m = (Rational(1) - delta) * T_size;
  if (m < 2) throw std::invalid_argument("(1 - delta)|T| must be at least 2");
  const Rational theta_small = delta / (Rational(1) - delta);
  std::vector<std::future<CertificateItem>> jobs;
  for (const auto& [r, label] : {std::pair{Rational(T_size), std::string("|T|")}, std::pair{m, std::string("(1-delta)|T|")}}) {
    for (const Rational& theta : {Rational(1), theta_small}) {
      jobs.push_back(std::async(std::launch::async, [=, &policy] { return theta_item(r, theta, epsilon, label, policy); }));
    }
  }
  std::vector<CertificateItem> items;
  for (auto& j : jobs) items.push_back(j.get());
  const Integer s = ceil_of(m);
  items.push_back(exact_item("ceil_condition", ExactScalar::dyadic(Rational(-Rational(s) / m)), Relation::GreaterEq,
                             ExactScalar(Rational(Rational(1, 2) - epsilon / 8)), policy));
  return items;
}

// ---------------------------------------------------------------------------

Certificate mcduff_certificate(const McDuffParams& params) {
  const Rational& eps = params.epsilon;
  const Rational& delta = params.delta;
  const PrecisionPolicy& policy = params.policy;
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0, 1)");
  if (params.D_size < 5) throw std::invalid_argument("|D| must be at least 5");
  const Rational m = (Rational(1) - delta) * params.T_size;
  if (m < 2) throw std::invalid_argument("(1 - delta)|T| must be at least 2");
  const long S_size = to_long(ceil(m));
  const Rational small_exp = delta * params.T_size;

  std::vector<Displacement> moves = params.displacements;
  std::vector<long> S;
  if (params.tower != nullptr) {
    const auto& tw = *params.tower;
    if (static_cast<long>(tw.T.size()) != params.T_size) throw std::invalid_argument("|T| disagrees with the tower");
    if (static_cast<long>(tw.core.size()) < S_size) {
      throw std::invalid_argument("T' has " + std::to_string(tw.core.size()) + " points, fewer than ceil((1-delta)|T|) = " + std::to_string(S_size));
    }
    S.assign(tw.core.begin(), tw.core.begin() + S_size);
    const std::set<long> Sset(S.begin(), S.end());
    moves.clear();
    for (std::size_t h = 0; h < tw.sigma.size(); ++h) {
      moves.push_back({"h" + std::to_string(h), static_cast<long>(cantor::displaced(tw.sigma[h], Sset))});
    }
  }
  for (const auto& d : moves) {
    if (d.moved < 0 || d.moved > S_size) throw std::invalid_argument("displacement of " + d.label + " must lie in [0, |S|]");
  }

  Certificate cert;
  cert.theorem = "mcduff-alternating";
  cert.mode = to_string(params.mode);
  cert.precision_bits = policy.max_bits;
  cert.param("epsilon", rstr(eps));
  cert.param("delta", rstr(delta));
  cert.param("T", std::to_string(params.T_size));
  cert.param("D", std::to_string(params.D_size));
  cert.param("S", std::to_string(S_size));
  const ExactScalar x = blockop::shrink_factor(delta, params.T_size);
  cert.param("x", x.to_string());
  std::string moved_list;
  for (const auto& d : moves) moved_list += (moved_list.empty() ? "" : ",") + d.label + ":" + std::to_string(d.moved);
  cert.param("displacements", moved_list);
  if (params.tower != nullptr) cert.param("tower_radius", std::to_string(params.tower->radius));

  cert.add(exact_item("delta_condition", ExactScalar::dyadic(Rational(-2) * delta / (Rational(1) - delta)), Relation::GreaterEq,
                      ExactScalar(Rational(Rational(1) - eps / 32)), policy));
  for (auto& item : check_size_conditions(params.T_size, delta, eps, policy)) cert.add(std::move(item));
  if (params.tower != nullptr) {
    cert.add(holds_item("tower_core_size", static_cast<long>(params.tower->core.size()) >= S_size,
                        std::to_string(params.tower->core.size()) + " >= " + std::to_string(S_size)));
  }

  // Lower bounds for tau(p), tau(pq); upper bound for tau(pq).
  ExactScalar low_p;
  ExactScalar low_pq;
  ExactScalar up_pq;
  bool exact_traces = false;
  if (params.mode == TraceMode::Enumerated) {
    const auto data = repalg::alternating_wedderburn(static_cast<int>(params.D_size), repalg::WedderburnMode::Enumerated);
    const auto c = blockop::build_pqv_alternating(data, delta, params.T_size);
    cert.add(holds_item("pqv_identities", true, "v*v = p, vv* = q, vpq = pq checked exactly"));
    cert.add(exact_item("trace_v_equals_trace_pq", c.tau_v.re, Relation::Equal, c.tau_pq, policy));
    low_p = c.tau_p;
    low_pq = c.tau_pq;
    up_pq = c.tau_pq;
    exact_traces = true;
    cert.param("tau_p", c.tau_p.to_string());
    cert.param("tau_pq", c.tau_pq.to_string());
    if (params.D_size >= 6) {
      const auto b = blockop::pqv_trace_bounds(static_cast<int>(params.D_size), delta, params.T_size);
      cert.add(exact_item("bounded_consistency(tau_p>=lower)", c.tau_p, Relation::GreaterEq, b.lower_tau_p, policy));
      cert.add(exact_item("bounded_consistency(tau_p<=x)", c.tau_p, Relation::LessEq, x, policy));
      cert.add(exact_item("bounded_consistency(tau_pq>=lower)", c.tau_pq, Relation::GreaterEq, b.lower_tau_pq, policy));
      cert.add(exact_item("bounded_consistency(tau_pq<=upper)", c.tau_pq, Relation::LessEq, b.upper_tau_pq, policy));
    }
  } else {
    const auto b = blockop::pqv_trace_bounds(static_cast<int>(params.D_size), delta, params.T_size);
    low_p = b.lower_tau_p;
    low_pq = b.lower_tau_pq;
    up_pq = b.upper_tau_pq;
    scalar_param(cert, "tau_p_lower", low_p);
    scalar_param(cert, "tau_pq_lower", low_pq);
    scalar_param(cert, "tau_pq_upper", up_pq);
  }
  cert.add(scalar_item("tau_pq_lower_nonnegative", low_pq, Relation::GreaterEq, ExactScalar(), policy));
  if (sign(low_pq, policy) < 0) low_pq = ExactScalar();

  const ExactScalar one(1L);
  cert.add(power_item("p_power", low_p, Rational(S_size), Relation::GreaterEq, ExactScalar(Rational(Rational(1, 2) - eps / 4)), policy));
  cert.add(power_item("pq_power_small", low_pq, small_exp, Relation::GreaterEq, ExactScalar(Rational(Rational(1) - eps / 8)), policy));
  cert.add(power_item("pq_power_large", up_pq, m, Relation::LessEq, ExactScalar(Rational(Rational(1, 4) + eps / 4)), policy));

  const ExactScalar noncomm_bound(Rational(Rational(1, 2) - eps));
  if (exact_traces) {
    cert.add(scalar_item("noncommutation", tensortrace::noncommutation_defect(low_p, up_pq, S_size), Relation::GreaterEq, noncomm_bound, policy));
  } else {
    cert.add(interval_item(
        "noncommutation",
        [&](mpfr_prec_t prec) {
          const auto n = static_cast<unsigned long>(S_size);
          return Interval::exact(Rational(2), prec) * (low_p.enclose(prec).pow(n) - up_pq.enclose(prec).pow(n));
        },
        Relation::GreaterEq, noncomm_bound, policy));
  }

  // Uniform centrality bound 8(1 - tau(pq)^(delta|T|)) over all h.
  const ExactScalar eps_s(eps);
  cert.add(interval_item(
      "centrality_uniform",
      [&](mpfr_prec_t prec) {
        const Interval b = low_pq.enclose(prec);
        const Interval p = small_exp.get_den() == 1 ? b.pow(static_cast<unsigned long>(to_long(small_exp.get_num()))) : b.pow(small_exp);
        return Interval::exact(Rational(8), prec) * (Interval::exact(Rational(1), prec) - p);
      },
      Relation::LessEq, eps_s, policy));

  for (const auto& d : moves) {
    if (params.tower != nullptr) {
      const long boundary = static_cast<long>(params.tower->T.size() - params.tower->core.size());
      cert.add(exact_item("tower_displacement[" + d.label + "]", ExactScalar(d.moved), Relation::LessEq, ExactScalar(boundary), policy));
    }
    cert.add(exact_item("displacement[" + d.label + "]", ExactScalar(d.moved), Relation::LessEq, ExactScalar(small_exp), policy));
    if (exact_traces) {
      const ExactScalar defect = tensortrace::centrality_defect(low_p, up_pq, S_size, d.moved);
      const ExactScalar estimate = ExactScalar(8L) * (one - low_pq.pow(d.moved));
      cert.add(scalar_item("centrality[" + d.label + "]", defect, Relation::LessEq, eps_s, policy));
      cert.add(scalar_item("centrality_vs_estimate[" + d.label + "]", estimate - defect, Relation::GreaterEq, ExactScalar(), policy));
    } else {
      // the defect is at most 8(1 - tau(pq)^moved) <= 8(1 - lower^moved)
      const auto moved = static_cast<unsigned long>(d.moved);
      cert.add(interval_item(
          "centrality[" + d.label + "]",
          [&](mpfr_prec_t prec) {
            return Interval::exact(Rational(8), prec) * (Interval::exact(Rational(1), prec) - low_pq.enclose(prec).pow(moved));
          },
          Relation::LessEq, eps_s, policy));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------

Certificate shift_certificate(const groups::Action& action, std::span<const groups::Point> Y, std::span<const groups::Element> F,
                              const Rational& epsilon, std::size_t size_cap) {
  const auto& G = action.group();
  if (std::none_of(F.begin(), F.end(), [&](const groups::Element& g) { return G.is_identity(g); })) {
    throw std::invalid_argument("F must contain the identity");
  }
  const Rational delta = choose_shift_delta(epsilon);
  const auto fc = groups::folner_search(action, F, delta, size_cap, Y);
  const long m = static_cast<long>(fc.core.size());
  if (m < 1) throw std::runtime_error("invariant set has an empty core");
  const long T_size = static_cast<long>(fc.T.size());
  const auto c = blockop::build_pqv_independent(m);
  const ExactScalar& t = c.tau_p;
  const ExactScalar one(1L);
  const ExactScalar eps_s(epsilon);

  Certificate cert;
  cert.theorem = "mcduff-shift";
  cert.mode = "exact";
  cert.param("action", action.name());
  cert.param("epsilon", rstr(epsilon));
  cert.param("delta", rstr(delta));
  cert.param("T", std::to_string(T_size));
  cert.param("S", std::to_string(m));
  cert.param("T_first", action.format_point(fc.T.front()));
  cert.param("T_last", action.format_point(fc.T.back()));
  cert.param("invariance_defect", rstr(fc.defect));

  const ExactScalar uniform = ExactScalar(8L) * (one - ExactScalar::dyadic(Rational(-2) * delta / (Rational(1) - delta)));
  cert.add(exact_item("delta_condition", uniform, Relation::LessEq, eps_s));
  cert.add(holds_item("T_avoids_Y", std::none_of(fc.T.begin(), fc.T.end(), [&](const groups::Point& p) {
                        return std::find(Y.begin(), Y.end(), p) != Y.end();
                      })));
  cert.add(holds_item("pqv_identities", true, "v*v = p, vv* = q, vpq = pq checked exactly"));
  cert.add(exact_item("trace_p", c.tau_p, Relation::Equal, ExactScalar::dyadic(Rational(-1, m))));
  cert.add(exact_item("independence", c.tau_pq, Relation::Equal, c.tau_p * c.tau_q));
  cert.add(exact_item("trace_v_equals_trace_pq", c.tau_v.re, Relation::Equal, c.tau_pq));
  cert.add(exact_item("trace_p_tilde", t.pow(m), Relation::Equal, half()));
  cert.add(exact_item("commutator_norm_sq", tensortrace::noncommutation_defect(t, c.tau_pq, m), Relation::Equal, half()));

  std::map<groups::Point, long> index;
  for (std::size_t i = 0; i < fc.T.size(); ++i) index[fc.T[i]] = static_cast<long>(i);
  std::set<long> T_idx;
  for (long i = 0; i < T_size; ++i) T_idx.insert(i);
  std::set<long> S_idx;
  for (const auto& p : fc.core) S_idx.insert(index.at(p));
  const bool words = T_size <= 64;
  if (words) cert.add(exact_item("commutator_norm_sq_words", tensortrace::word_noncommutation_defect(c, T_idx, S_idx), Relation::Equal, half()));

  for (const auto& g : F) {
    const std::string label = G.format(g);
    std::map<long, long> sigma;
    std::set<long> image;
    long moved = 0;
    for (const auto& p : fc.core) {
      const auto q = action.act(g, p);
      auto it = index.find(q);
      if (it == index.end()) throw std::logic_error("core point leaves T");
      sigma[index.at(p)] = it->second;
      image.insert(it->second);
      if (!S_idx.contains(it->second)) ++moved;
    }
    const ExactScalar defect = tensortrace::centrality_defect(t, c.tau_pq, m, moved);
    cert.add(exact_item("displacement[" + label + "]", ExactScalar(moved), Relation::LessEq, ExactScalar(Rational(delta * T_size))));
    cert.add(exact_item("centrality[" + label + "]", defect, Relation::LessEq, tensortrace::centrality_bound(c.tau_pq, moved)));
    cert.add(exact_item("centrality_bound[" + label + "]", defect, Relation::LessEq,
                        ExactScalar(8L) * (one - ExactScalar::dyadic(Rational(-2) * delta * T_size / m))));
    cert.add(exact_item("centrality_uniform[" + label + "]", defect, Relation::LessEq, uniform));
    if (words) {
      std::vector<long> free_targets;
      for (long i : T_idx) {
        if (!image.contains(i)) free_targets.push_back(i);
      }
      std::size_t k = 0;
      for (long i : T_idx) {
        if (!sigma.contains(i)) sigma[i] = free_targets.at(k++);
      }
      cert.add(exact_item("centrality_words[" + label + "]", tensortrace::word_centrality_defect(c, T_idx, S_idx, sigma), Relation::Equal, defect));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------

Certificate free_example_check(long n, const std::vector<std::pair<groups::Element, long>>& omega1_support,
                               const std::vector<BilateralElement>& F) {
  const groups::Group F2 = groups::Group::free(2);
  std::set<long> K1;
  for (const auto& [r, k] : omega1_support) K1.insert(k);
  std::set<long> K2;
  for (const auto& f : F) {
    for (const auto& [k, tk] : f.t) {
      if (!F2.is_identity(tk)) K2.insert(k);
    }
  }
  if (K1.contains(n) || K2.contains(n)) throw std::invalid_argument("n = " + std::to_string(n) + " lies in K");
  std::vector<long> coords(K1.begin(), K1.end());
  coords.insert(coords.end(), K2.begin(), K2.end());
  coords.push_back(n);
  const groups::BilateralShiftAction action(coords);
  const auto& G = action.group();
  const groups::Element ga = action.coordinate_element(F2.generator(0), n);
  const groups::Element gb = action.coordinate_element(F2.generator(1), n);

  Certificate cert;
  cert.theorem = "free-example";
  cert.mode = "exact";
  cert.param("n", std::to_string(n));
  std::string klist;
  for (long k : K1) klist += (klist.empty() ? "" : ",") + std::to_string(k);
  cert.param("K1", klist);
  klist.clear();
  for (long k : K2) klist += (klist.empty() ? "" : ",") + std::to_string(k);
  cert.param("K2", klist);

  for (const auto& f : F) {
    const groups::Element g = action.element(f.s, f.t);
    for (const auto& [gs, name] : {std::pair{ga, "a"}, std::pair{gb, "b"}}) {
      const groups::Element conj = G.multiply(G.multiply(g, gs), G.inverse(g));
      cert.add(holds_item("conjugation_fixed[" + G.format(g) + "," + name + "]", conj == gs));
    }
  }
  for (const auto& [r, k] : omega1_support) {
    const groups::Point x = action.point(r, k);
    for (const auto& [gs, name] : {std::pair{ga, "a"}, std::pair{gb, "b"}}) {
      cert.add(holds_item("tensor_fixed[" + action.format_point(x) + "," + name + "]", action.act(gs, x) == x));
    }
  }
  const TwoNorm norm = groups::ring_commutator_two_norm(G, ga, gb);
  auto item = exact_item("commutator_norm_sq", norm.square, Relation::Equal, ExactScalar(2L));
  item.note = "norm = " + norm.to_string();
  cert.add(std::move(item));
  return cert;
}

}  // namespace mcduff::verify
