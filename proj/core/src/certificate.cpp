#include "mcduff/certificate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mcduff {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::GreaterEq: return ">=";
    case Relation::LessEq: return "<=";
    case Relation::Equal: return "=";
    case Relation::Greater: return ">";
    case Relation::Less: return "<";
    case Relation::Holds: return "holds";
  }
  return "?";
}

Relation parse_relation(std::string_view text) {
  if (text == ">=") return Relation::GreaterEq;
  if (text == "<=") return Relation::LessEq;
  if (text == "=") return Relation::Equal;
  if (text == ">") return Relation::Greater;
  if (text == "<") return Relation::Less;
  if (text == "holds") return Relation::Holds;
  throw std::invalid_argument("unknown relation '" + std::string(text) + "'");
}

namespace {

bool satisfied(std::strong_ordering c, Relation rel) {
  switch (rel) {
    case Relation::GreaterEq: return c >= 0;
    case Relation::LessEq: return c <= 0;
    case Relation::Equal: return c == 0;
    case Relation::Greater: return c > 0;
    case Relation::Less: return c < 0;
    case Relation::Holds: break;
  }
  throw std::invalid_argument("relation needs a boolean value");
}

/// Three-valued decision of [lo, hi] rel [blo, bhi]: 1 certainly true,
/// 0 certainly false, -1 unknown.
int decide(const Interval& v, const Interval& b, Relation rel) {
  const bool v_above = mpfr_cmp(v.lo(), b.hi()) > 0;   // v > b surely
  const bool v_below = mpfr_cmp(v.hi(), b.lo()) < 0;   // v < b surely
  const bool v_atleast = mpfr_cmp(v.lo(), b.hi()) >= 0;
  const bool v_atmost = mpfr_cmp(v.hi(), b.lo()) <= 0;
  switch (rel) {
    case Relation::GreaterEq: return v_atleast ? 1 : v_below ? 0 : -1;
    case Relation::Greater: return v_above ? 1 : v_atmost ? 0 : -1;
    case Relation::LessEq: return v_atmost ? 1 : v_above ? 0 : -1;
    case Relation::Less: return v_below ? 1 : v_atleast ? 0 : -1;
    case Relation::Equal: return (v_above || v_below) ? 0 : -1;
    case Relation::Holds: break;
  }
  throw std::invalid_argument("relation needs a numeric value");
}

int decimal_digits(mpfr_prec_t prec) { return static_cast<int>(static_cast<double>(prec) * 0.30103) + 3; }

std::string interval_string(const Interval& v) {
  const int digits = decimal_digits(v.precision());
  return "[" + v.lower_string(digits) + ", " + v.upper_string(digits) + "]";
}

std::string mid_string(const Interval& v) {
  mpfr_t m;
  mpfr_init2(m, v.precision() + 1);
  mpfr_add(m, v.lo(), v.hi(), MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.12Rg", m);
  mpfr_clear(m);
  return buf;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty decimal");
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1) throw std::invalid_argument("bad exponent");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed decimal '" + s + "'");
    }
    s.erase(e);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  std::string digits;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point) --exp10;
    } else {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
  Rational q{Integer(digits)};
  const Integer scale = pow(Integer(10), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) {
    q /= Rational(scale);
  } else {
    q *= Rational(scale);
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

CertificateItem exact_item(std::string name, const ExactScalar& value, Relation rel, const ExactScalar& bound,
                           const PrecisionPolicy& policy) {
  CertificateItem item;
  item.name = std::move(name);
  item.value = value.to_string();
  item.bound = bound.to_string();
  item.relation = rel;
  try {
    item.pass = satisfied(compare(value, bound, policy), rel);
  } catch (const UndecidedError& e) {
    item.pass = false;
    item.undecided = true;
    item.note = e.what();
  }
  try {
    item.approx = value.decimal(12);
  } catch (const std::exception&) {
    item.approx.clear();
  }
  return item;
}

CertificateItem interval_item(std::string name, const std::function<Interval(mpfr_prec_t)>& eval, Relation rel,
                              const ExactScalar& bound, const PrecisionPolicy& policy) {
  CertificateItem item;
  item.name = std::move(name);
  item.bound = bound.to_string();
  item.relation = rel;
  for (mpfr_prec_t prec = policy.initial_bits;; prec *= 2) {
    const Interval v = eval(prec);
    const int verdict = decide(v, bound.enclose(prec), rel);
    if (verdict >= 0 || prec * 2 > policy.max_bits) {
      item.value = interval_string(v);
      item.approx = mid_string(v);
      item.pass = verdict == 1;
      if (verdict < 0) {
        item.undecided = true;
        item.note = "undecided at " + std::to_string(prec) + " bits";
      }
      return item;
    }
  }
}

CertificateItem holds_item(std::string name, bool ok, std::string note) {
  CertificateItem item;
  item.name = std::move(name);
  item.value = ok ? "true" : "false";
  item.bound = "true";
  item.relation = Relation::Holds;
  item.pass = ok;
  item.note = std::move(note);
  return item;
}

bool Certificate::pass() const {
  return std::all_of(items.begin(), items.end(), [](const CertificateItem& i) { return i.advisory || i.pass; });
}

const CertificateItem* Certificate::find(std::string_view name) const {
  for (const auto& i : items) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

std::string Certificate::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["theorem"] = theorem;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& i : items) {
    nlohmann::ordered_json o;
    o["name"] = i.name;
    o["value"] = i.value;
    o["bound"] = i.bound;
    o["relation"] = to_string(i.relation);
    o["pass"] = i.pass;
    if (!i.approx.empty()) o["approx"] = i.approx;
    if (i.undecided) o["undecided"] = true;
    if (i.advisory) o["advisory"] = true;
    if (!i.note.empty()) o["note"] = i.note;
    arr.push_back(std::move(o));
  }
  j["items"] = std::move(arr);
  j["pass"] = pass();
  j["engine"] = {{"mode", mode}, {"precision_bits", precision_bits}, {"seed", seed}};
  return j.dump(indent);
}

Certificate Certificate::from_json(std::string_view text) {
  Certificate c;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    c.theorem = j.at("theorem").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) c.params.emplace_back(k, v.get<std::string>());
    for (const auto& o : j.at("items")) {
      CertificateItem i;
      i.name = o.at("name").get<std::string>();
      i.value = o.at("value").get<std::string>();
      i.bound = o.at("bound").get<std::string>();
      i.relation = parse_relation(o.at("relation").get<std::string>());
      i.pass = o.at("pass").get<bool>();
      i.approx = o.value("approx", std::string());
      i.undecided = o.value("undecided", false);
      i.advisory = o.value("advisory", false);
      i.note = o.value("note", std::string());
      c.items.push_back(std::move(i));
    }
    const auto& e = j.at("engine");
    c.mode = e.at("mode").get<std::string>();
    c.precision_bits = e.at("precision_bits").get<long>();
    c.seed = e.at("seed").get<std::uint64_t>();
    if (j.at("pass").get<bool>() != c.pass()) throw std::invalid_argument("overall verdict disagrees with the items");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
  return c;
}

std::vector<std::string> Certificate::revalidate(const PrecisionPolicy& policy) const {
  std::vector<std::string> problems;
  for (const auto& i : items) {
    const std::string where = "item '" + i.name + "': ";
    try {
      if (i.relation == Relation::Holds) {
        if (i.value != "true" && i.value != "false") problems.push_back(where + "boolean value expected");
        if ((i.value == "true") != i.pass) problems.push_back(where + "pass flag disagrees with value");
        continue;
      }
      if (i.undecided) {
        if (i.pass) problems.push_back(where + "undecided item marked as passing");
        continue;
      }
      const ExactScalar bound = ExactScalar::parse(i.bound);
      bool ok = false;
      if (!i.value.empty() && i.value.front() == '[') {
        const auto comma = i.value.find(',');
        if (comma == std::string::npos || i.value.back() != ']') throw std::invalid_argument("malformed interval");
        const Rational lo = parse_decimal(i.value.substr(1, comma - 1));
        std::string hi_text = i.value.substr(comma + 1, i.value.size() - comma - 2);
        hi_text.erase(0, hi_text.find_first_not_of(' '));
        const Rational hi = parse_decimal(hi_text);
        int verdict = -1;
        for (mpfr_prec_t prec = policy.initial_bits; verdict < 0 && prec <= policy.max_bits; prec *= 2) {
          verdict = decide(Interval::hull(lo, hi, prec), bound.enclose(prec), i.relation);
        }
        if (verdict < 0) {
          problems.push_back(where + "interval does not decide the relation");
          continue;
        }
        ok = verdict == 1;
      } else {
        ok = satisfied(compare(ExactScalar::parse(i.value), bound, policy), i.relation);
      }
      if (ok != i.pass) problems.push_back(where + "pass flag disagrees with re-evaluation");
    } catch (const std::exception& e) {
      problems.push_back(where + e.what());
    }
  }
  return problems;
}

}  // namespace mcduff
