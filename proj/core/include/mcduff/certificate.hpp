#pragma once

#include "mcduff/exact_scalar.hpp"
#include "mcduff/interval.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcduff {

enum class Relation { GreaterEq, LessEq, Equal, Greater, Less, Holds };

std::string to_string(Relation r);
/// ">=", "<=", "=", ">", "<", "holds".
Relation parse_relation(std::string_view text);

/// One checked quantity. `value` is a canonical ExactScalar string, an
/// outward-rounded decimal interval "[lo, hi]", or "true"/"false" for
/// Holds items. Advisory items are reported but do not affect the verdict.
struct CertificateItem {
  std::string name;
  std::string value;
  std::string bound;
  Relation relation = Relation::Holds;
  bool pass = false;
  bool undecided = false;
  bool advisory = false;
  std::string approx;
  std::string note;
};

struct Certificate {
  std::string theorem;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CertificateItem> items;
  std::string mode;
  long precision_bits = 0;
  std::uint64_t seed = 0;

  bool pass() const;
  const CertificateItem* find(std::string_view name) const;
  void add(CertificateItem item) { items.push_back(std::move(item)); }
  void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

  std::string to_json(int indent = 2) const;
  /// Throws std::invalid_argument on malformed input.
  static Certificate from_json(std::string_view text);
  /// Re-decides every item from its serialized fields; returns the problems found.
  std::vector<std::string> revalidate(const PrecisionPolicy& policy = {}) const;
};

/// Decides value `rel` bound exactly; an UndecidedError yields a failed,
/// undecided item.
CertificateItem exact_item(std::string name, const ExactScalar& value, Relation rel, const ExactScalar& bound,
                           const PrecisionPolicy& policy = {});

/// Encloses the value with eval(precision), doubling the precision until the
/// relation against `bound` is certain either way.
CertificateItem interval_item(std::string name, const std::function<Interval(mpfr_prec_t)>& eval, Relation rel,
                              const ExactScalar& bound, const PrecisionPolicy& policy = {});

CertificateItem holds_item(std::string name, bool ok, std::string note = "");

/// Exact decimal value of strings like "-2.5e-3".
Rational parse_decimal(std::string_view text);

}  // namespace mcduff
