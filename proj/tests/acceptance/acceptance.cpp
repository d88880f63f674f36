// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "mcduff/blockop.hpp"
#include "mcduff/cantor.hpp"
#include "mcduff/jsstab.hpp"
#include "mcduff/repalg.hpp"
#include "mcduff/tensortrace.hpp"
#include "mcduff/verify.hpp"
#include "oracles/comparisons.hpp"
#include "oracles/dense.hpp"
#include "oracles/random_tensor.hpp"
#include "oracles/young.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace mcduff;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what;
    ok = ok && cond;
  }
};

using Check = std::function<void(Outcome&)>;

bool run_criterion(int id, const std::string& title, double time_limit, const Check& check) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    check(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0 && secs >= time_limit) {
    out.ok = false;
    out.detail << " runtime " << secs << " s over " << time_limit << " s";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", secs);
  std::cout << (out.ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " [" << buf << "]";
  if (!out.detail.str().empty()) std::cout << "  " << out.detail.str();
  std::cout << std::endl;
  return out.ok;
}

bool item_ok(const Certificate& c, const std::string& name) {
  const auto* it = c.find(name);
  return it != nullptr && it->pass;
}

void wedderburn_consistency(Outcome& out) {
  for (int n = 5; n <= 12; ++n) {
    const auto w = repalg::alternating_wedderburn(n, repalg::WedderburnMode::Enumerated);
    Integer sum = 1;
    std::vector<mpz_class> degrees;
    for (const auto& b : w.blocks) {
      sum += b.degree * b.degree;
      degrees.push_back(b.degree);
    }
    out.require(sum == factorial(static_cast<unsigned long>(n)) / 2, "1 + sum k^2 = n!/2 at n = " + std::to_string(n));
    out.require(degrees == oracle::alternating_nontrivial(n), "degrees match the branching-rule oracle at n = " + std::to_string(n));
  }
  const auto a5 = repalg::alternating_wedderburn(5, repalg::WedderburnMode::Enumerated);
  std::vector<long> degrees;
  std::vector<Rational> weights;
  for (const auto& b : a5.blocks) {
    degrees.push_back(to_long(b.degree));
    weights.push_back(b.weight);
  }
  out.require(degrees == std::vector<long>{3, 3, 4, 5}, "A5 degrees {3,3,4,5}");
  out.require(weights == std::vector<Rational>{make_rational(9, 60), make_rational(9, 60), make_rational(16, 60), make_rational(25, 60)},
              "A5 weights");
  out.require(a5.trivial_weight == make_rational(1, 60), "A5 trivial weight 1/60");
  out.detail << "n = 5..12 enumerated";
}

void degree_bound(Outcome& out) {
  for (int n = 6; n <= 12; ++n) {
    const auto w = repalg::alternating_wedderburn(n, repalg::WedderburnMode::Enumerated);
    out.require(w.min_degree() >= n - 1, "min degree >= n - 1 at n = " + std::to_string(n));
  }
  // expected failure at n = 5
  const auto a5 = repalg::alternating_wedderburn(5, repalg::WedderburnMode::Enumerated);
  out.require(a5.min_degree() == 3 && a5.min_degree() < 4, "n = 5 exception (degree 3 < 4) observed");
  out.detail << "n = 6..12 hold; n = 5 fails as expected";
}

bool identities(const blockop::PqvConstruction& c) {
  return c.v.adjoint() * c.v == c.p && c.v * c.v.adjoint() == c.q && c.v * c.p * c.q == c.p * c.q;
}

void pqv_identities(Outcome& out) {
  for (int n : {7, 9}) {
    const auto w = repalg::alternating_wedderburn(n, repalg::WedderburnMode::Enumerated);
    const auto c = blockop::build_pqv_alternating(w, make_rational(1, 20), 40);
    out.require(identities(c), "alternating identities at n = " + std::to_string(n));
  }
  for (long m : {1L, 2L, 5L, 50L}) {
    const auto c = blockop::build_pqv_independent(m);
    out.require(identities(c), "independent identities at m = " + std::to_string(m));
    out.require(c.tau_pq == c.tau_p * c.tau_q, "tau(pq) = tau(p) tau(q) at m = " + std::to_string(m));
    out.require(c.tau_v == ExactComplex(c.tau_pq), "tau(v) = tau(pq) at m = " + std::to_string(m));
  }
  out.detail << "(n, delta, |T|) in {(7,1/20,40), (9,1/20,40)}; m in {1,2,5,50}";
}

void oracle_equivalence(Outcome& out) {
  std::mt19937_64 rng(20240601);
  int cases = 0;
  for (; cases < 600; ++cases) {
    const auto x = oracle::random_case(rng);
    const auto ref = oracle::expand(x);
    const ExactComplex trace(ExactScalar(ref.trace.re), ExactScalar(ref.trace.im));
    out.require(x.trace() == trace, "trace, case " + std::to_string(cases));
    out.require(x.norm_squared() == ExactScalar(ref.norm_squared), "norm^2, case " + std::to_string(cases));
    if (!out.ok) break;
  }
  out.detail << cases << " random tensor sums";
}

void shift_construction(Outcome& out) {
  for (long s : {1L, 2L, 5L, 50L}) {
    const auto c = blockop::build_pqv_independent(s);
    std::set<long> S;
    for (long i = 0; i < s; ++i) S.insert(i);
    out.require(tensortrace::word_noncommutation_defect(c, S, S) == ExactScalar(make_rational(1, 2)),
                "||[v_S, v_S*]||^2 = 1/2 at |S| = " + std::to_string(s));
  }
  const auto Z = groups::Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<groups::Element> F{Z.identity(), Z.vector({1}), Z.vector({-1})};
  const auto cert = verify::shift_certificate(*act, {}, F, make_rational(1, 10));
  out.require(cert.pass(), "shift certificate passes");
  out.require(item_ok(cert, "delta_condition"), "8(1 - 2^(-2 delta/(1-delta))) <= eps");
  for (const auto& g : F) {
    out.require(item_ok(cert, "centrality_uniform[" + Z.format(g) + "]"), "centrality defect within the uniform bound");
  }
  for (const auto& it : cert.items) out.require(it.value.empty() || it.value.front() != '[', "exact comparison for " + it.name);
  out.detail << "shift: " << cert.params.size() << " params, " << cert.items.size() << " exact items";
}

void bounded_certificate(Outcome& out) {
  verify::McDuffParams p;
  p.epsilon = make_rational(1, 4);
  p.delta = make_rational(1, 200);
  p.T_size = 400;
  p.D_size = 10000;
  p.mode = verify::TraceMode::Bounded;
  p.displacements = {{"h0", 2}, {"h1", 2}, {"h2", 1}};
  const auto cert = verify::mcduff_certificate(p);
  out.require(cert.pass(), "certificate passes");
  const auto* nc = cert.find("noncommutation");
  out.require(nc != nullptr && nc->pass && nc->relation == Relation::GreaterEq &&
                  ExactScalar::parse(nc->bound) == ExactScalar(make_rational(1, 4)),
              "noncommutation >= 1/4");
  for (const auto& d : p.displacements) {
    const auto* c = cert.find("centrality[" + d.label + "]");
    out.require(c != nullptr && c->pass && ExactScalar::parse(c->bound) == ExactScalar(make_rational(1, 4)), "centrality <= 1/4");
  }
  for (const auto& it : cert.items) out.require(!it.undecided, "decided: " + it.name);
  out.require(cert.revalidate().empty(), "serialized certificate re-decides");
  out.detail << cert.items.size() << " items";
}

void cantor_pipeline(Outcome& out) {
  auto shift = std::make_shared<const cantor::Subshift>(cantor::Substitution::fibonacci());
  const std::vector<cantor::FullGroupElement> omega{cantor::FullGroupElement::swap(shift, "aa", 0, 1)};
  const auto P = cantor::refine_partition(omega);
  std::vector<long> T;
  for (long i = 0; i < 40; ++i) T.push_back(i);
  const auto tower = cantor::find_tower(shift, omega, P, T, 3, 1000000);
  const auto report = cantor::verify_tower(tower, omega, 10);
  out.require(report.pass, "verify_tower passes");
  out.require(report.sample_points >= 10, "at least 10 sampled points");
  const std::set<long> core(tower.core.begin(), tower.core.end());
  for (const auto& sigma : tower.sigma) {
    out.require(cantor::displaced(sigma, core) <= tower.T.size() - tower.core.size(), "|sigma S \\ S| <= |T \\ T'|");
  }
  out.detail << report.sample_points << " points, " << report.point_checks << " point checks";
}

void free_example(Outcome& out) {
  const auto F2 = groups::Group::free(2);
  const auto a = F2.parse_element("a");
  const auto b = F2.parse_element("b");
  const std::vector<std::pair<groups::Element, long>> supports{{a, 1}, {b, 2}};
  const std::vector<verify::BilateralElement> F{{a, {{1, b}}}, {F2.parse_element("ab"), {{2, a}}}, {F2.parse_element("B"), {}}};
  const auto cert = verify::free_example_check(3, supports, F);
  const auto* norm = cert.find("commutator_norm_sq");
  out.require(norm != nullptr && norm->pass && norm->value == "2", "||[u_a, u_b]||^2 = 2");
  out.require(cert.pass(), "commutes with every tested element of Omega");
  out.detail << "n = 3, K = {1,2}";
}

void js_stability(Outcome& out) {
  using namespace jsstab;
  const auto Z = groups::Group::free_abelian(1);
  const auto act = std::shared_ptr<const groups::Action>(groups::make_translation_action(Z).release());
  const std::vector<WreathElement> F{{{}, Z.vector({0})}, {{{Z.vector({0}), Z.vector({1})}}, Z.vector({1})}, {{}, Z.vector({-1})}};
  const WreathModel model(Z, act, Z.vector({1}), F);
  const auto w = build_witness(model);
  const auto A = event_A(model, w);
  out.require(exact_measure(A, w.t) == ExactScalar(make_rational(1, 2)), "nu(A) = 1/2");
  const auto swap = symmetric_difference_measure(t0_preimage(model, w, A), A, w.t);
  out.require(swap == ExactScalar(make_rational(1, 2)), "nu(T0(A) delta A) = 1/2");
  const auto mc = mc_estimate(model, w, 4, 100000, 1);
  out.require(mc.covers(0.5), "Monte Carlo 99% interval covers 1/2");
  const ExactScalar third(make_rational(1, 3));
  const ExactScalar two_thirds(make_rational(2, 3));
  for (const auto& f : F) {
    const auto shifted = symmetric_difference_measure(alpha_preimage(model, model.inverse(f), A), A, w.t);
    out.require(sign(shifted - third) <= 0, "nu(alpha_f(A) delta A) <= 1/|F| for " + model.format(f));
    out.require(sign(exact_measure(event_C(model, w, f), w.t) - two_thirds) >= 0, "nu(C) >= 1 - 1/|F| for " + model.format(f));
  }
  out.detail << "eps = " << to_string(w.epsilon) << ", |E| = " << w.E.size() << ", MC " << mc.estimate << " +- " << mc.half_width;
}

void scalar_soundness(Outcome& out) {
  const auto tally = oracle::run_comparisons(10000, 777);
  out.require(tally.contradictions == 0, "no contradicted order: " + tally.first_problem);
  out.detail << tally.total << " comparisons, " << tally.decided_by_oracle << " resolved by the 256-bit reference";
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, "Wedderburn consistency for A_n, 5 <= n <= 12", 5, wedderburn_consistency);
  all &= run_criterion(2, "nontrivial degree bound n-1 for 6 <= n <= 12", 0, degree_bound);
  all &= run_criterion(3, "p/q/v identities, alternating and independent", 0, pqv_identities);
  all &= run_criterion(4, "factorized traces equal the dense Kronecker oracle", 30, oracle_equivalence);
  all &= run_criterion(5, "commutator norm 1/2 and shift certificate", 0, shift_construction);
  all &= run_criterion(6, "bounded certificate at eps=1/4, delta=1/200, |T|=400, n=10^4", 60, bounded_certificate);
  all &= run_criterion(7, "Cantor tower on the Fibonacci subshift", 60, cantor_pipeline);
  all &= run_criterion(8, "free group example, commutator norm^2 = 2", 0, free_example);
  all &= run_criterion(9, "JS-stability witness for Z wr Z, |F| = 3", 120, js_stability);
  all &= run_criterion(10, "ExactScalar comparisons against a 256-bit reference", 0, scalar_soundness);
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
