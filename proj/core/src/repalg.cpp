#include "mcduff/repalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mcduff::repalg {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
    size_ += parts_[i];
  }
}

Partition Partition::conjugate() const {
  std::vector<int> conj;
  if (!parts_.empty()) {
    conj.assign(static_cast<std::size_t>(parts_.front()), 0);
    for (int p : parts_) {
      for (int j = 0; j < p; ++j) ++conj[static_cast<std::size_t>(j)];
    }
  }
  return Partition(std::move(conj));
}

Integer Partition::degree() const {
  const Partition conj = conjugate();
  Integer hooks = 1;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    for (int j = 0; j < parts_[i]; ++j) {
      const int arm = parts_[i] - j - 1;
      const int leg = conj.parts_[static_cast<std::size_t>(j)] - static_cast<int>(i) - 1;
      hooks *= arm + leg + 1;
    }
  }
  return factorial(static_cast<unsigned long>(size_)) / hooks;
}

std::string Partition::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? "," : "") + std::to_string(parts_[i]);
  return out + ")";
}

std::vector<Partition> partitions(int n) {
  if (n < 1) throw std::invalid_argument("partitions need n >= 1");
  if (n > kEnumerationCap) throw std::invalid_argument("n = " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(kEnumerationCap));
  std::vector<Partition> out;
  std::vector<int> cur{n};
  while (true) {
    out.emplace_back(cur);
    // next partition in reverse lexicographic order
    int rem = 0;
    while (!cur.empty() && cur.back() == 1) {
      cur.pop_back();
      ++rem;
    }
    if (cur.empty()) break;
    const int v = --cur.back();
    ++rem;
    while (rem > v) {
      cur.push_back(v);
      rem -= v;
    }
    if (rem > 0) cur.push_back(rem);
  }
  return out;
}

std::vector<Integer> symmetric_degrees(int n) {
  std::vector<Integer> out;
  for (const auto& p : partitions(n)) out.push_back(p.degree());
  return out;
}

Integer WedderburnData::min_degree() const {
  if (blocks.empty()) throw std::logic_error("no enumerated blocks");
  return blocks.front().degree;
}

WedderburnData alternating_wedderburn(int n, WedderburnMode mode) {
  if (n < 5) throw std::invalid_argument("alternating Wedderburn data needs n >= 5");
  WedderburnData w;
  w.n = n;
  w.mode = mode;
  w.group_order = factorial(static_cast<unsigned long>(n)) / 2;
  w.trivial_weight = Rational(Integer(1), w.group_order);
  w.degree_lower_bound = n == 5 ? Integer(3) : Integer(n - 1);
  if (mode == WedderburnMode::Bounded) return w;

  const Partition trivial({n});
  const auto all = partitions(n);
  std::vector<Integer> degrees;
  for (const auto& p : all) {
    const Partition c = p.conjugate();
    if (p == c) {
      const Integer f = p.degree();
      if (f % 2 != 0) throw std::logic_error("self-conjugate partition " + p.to_string() + " has odd degree");
      degrees.push_back(f / 2);
      degrees.push_back(f / 2);
    } else if (p > c && p != trivial) {
      // one representative per conjugate pair; (n) and (1^n) give the trivial summand
      degrees.push_back(p.degree());
    }
  }
  std::sort(degrees.begin(), degrees.end());
  for (auto& k : degrees) {
    Rational weight(k * k, w.group_order);
    weight.canonicalize();
    w.blocks.push_back({std::move(k), std::move(weight)});
  }
  return w;
}

}  // namespace mcduff::repalg
