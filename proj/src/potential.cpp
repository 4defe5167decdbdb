#include "gtr/potential.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace gtr {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "N/A";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["curve"] = r.curve;
  j["params"] = r.params;
  j["verdict"] = verdict_name(r.verdict);
  j["witnesses"] = r.witnesses;
  return j;
}

namespace {

PMonomial monomial_of(const std::vector<int>& ks) {
  PMonomial m;
  for (int k : ks) {
    if (!m.empty() && m.back().first == k) ++m.back().second;
    else m.emplace_back(k, 1);
  }
  return m;
}

std::vector<int> expand(const PMonomial& m) {
  std::vector<int> ks;
  for (auto [k, e] : m) ks.insert(ks.end(), e, k);
  return ks;
}

// More factors first, then lexicographic in the sorted k's.
bool render_before(const PMonomial& a, const PMonomial& b) {
  std::vector<int> ka = expand(a), kb = expand(b);
  if (ka.size() != kb.size()) return ka.size() > kb.size();
  return ka < kb;
}

}  // namespace

std::string monomial_str(const PMonomial& m) {
  std::string s;
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    if (!s.empty()) s += " ";
    s += "p" + std::to_string(it->first);
    if (it->second > 1) s += "^" + std::to_string(it->second);
  }
  return s.empty() ? "1" : s;
}

std::map<std::pair<int, PMonomial>, Rational> Potential::F() const {
  std::map<std::pair<int, PMonomial>, Rational> out;
  for (const auto& [key, v] : f) {
    const auto& [g, ks] = key;
    PMonomial m = monomial_of(ks);
    Rational c = v;
    for (auto [k, e] : m)
      for (int i = 2; i <= e; ++i) c /= i;
    out[{2 * g - 2 + static_cast<int>(ks.size()), m}] = c;
  }
  return out;
}

Potential extract_potential(const std::map<std::pair<int, int>, MultiDifferential>& cells, int chi_max,
                            const std::string& label) {
  Potential p;
  p.chi_max = chi_max;
  p.label = label;
  const Point zero = Point::finite(0);
  for (const auto& [gn, w] : cells) {
    if (2 * gn.first - 2 + gn.second > chi_max) continue;
    for (const Point& s : w.support())
      if (s != zero) fail(ErrorKind::MultiPointUnsupported, "differential has poles away from 0");
    for (const auto& [idx, c] : w.sorted_terms()) {
      std::vector<int> ks;
      for (const PoleIndex& i : idx) ks.push_back(i.k);
      p.f[{gn.first, ks}] = c;
    }
  }
  return p;
}

std::string render_F(const Potential& p, int hmax) {
  std::map<int, std::vector<std::pair<PMonomial, Rational>>> by_h;
  for (const auto& [key, c] : p.F())
    if (key.first <= hmax) by_h[key.first].emplace_back(key.second, c);
  if (by_h.empty()) return "0";
  std::ostringstream os;
  bool first_group = true;
  for (auto& [h, terms] : by_h) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return render_before(a.first, b.first); });
    auto term = [](const Rational& a, const PMonomial& m) {
      return (a == 1 ? "" : a.get_str() + " ") + monomial_str(m);
    };
    std::string hs = h == 1 ? "h" : "h^" + std::to_string(h);
    if (terms.size() == 1) {
      const Rational& c = terms[0].second;
      if (!first_group) os << (sgn(c) < 0 ? " - " : " + ");
      else if (sgn(c) < 0) os << "-";
      os << term(abs(c), terms[0].first) << " " << hs;
    } else {
      if (!first_group) os << " + ";
      os << "(";
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const Rational& c = terms[i].second;
        if (i) os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0) os << "-";
        os << term(abs(c), terms[i].first);
      }
      os << ") " << hs;
    }
    first_group = false;
  }
  return os.str();
}

std::string default_data_dir() {
  const char* env = std::getenv("GTR_DATA_DIR");
  return env && *env ? env : GTR_DATA_DIR;
}

std::map<std::string, GoldenRow> load_golden(const std::string& dir) {
  auto read = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::ParseError, path + ": " + e.what());
    }
  };
  nlohmann::json terms = read(dir + "/golden_rs.json");
  nlohmann::json curves = read(dir + "/golden_curves.json");
  std::map<std::string, GoldenRow> rows;
  for (const auto& [label, c] : curves.items()) {
    GoldenRow& r = rows[label];
    r.label = label;
    r.curve = c.at("curve").get<std::string>();
    r.hbar_max = c.at("hbar_max").get<int>();
  }
  for (const auto& t : terms) {
    std::string label = t.at("curve").get<std::string>();
    auto it = rows.find(label);
    if (it == rows.end()) fail(ErrorKind::ParseError, "fixture term for unknown curve " + label);
    PMonomial m;
    for (const auto& km : t.at("monomial")) m.emplace_back(km.at(0).get<int>(), km.at(1).get<int>());
    it->second.terms[{t.at("hbar_order").get<int>(), m}] = parse_rational(t.at("coeff").get<std::string>());
  }
  return rows;
}

VerificationReport golden_compare(const Potential& p, const GoldenRow& row, int hmax) {
  VerificationReport rep;
  rep.check = "golden";
  rep.curve = row.label;
  int upto = std::min({row.hbar_max, p.chi_max, hmax});
  rep.params["hbar_max"] = upto;
  auto F = p.F();
  auto keys = [&](const auto& m) {
    std::set<std::pair<int, PMonomial>> s;
    for (const auto& [k, v] : m)
      if (k.first <= upto) s.insert(k);
    return s;
  };
  std::set<std::pair<int, PMonomial>> all = keys(F);
  for (const auto& k : keys(row.terms)) all.insert(k);
  for (const auto& k : all) {
    auto a = F.find(k);
    auto e = row.terms.find(k);
    Rational got = a == F.end() ? Rational(0) : a->second;
    Rational want = e == row.terms.end() ? Rational(0) : e->second;
    if (got != want)
      rep.fail_with({{"hbar", k.first}, {"monomial", monomial_str(k.second)}, {"expected", want.get_str()},
                     {"actual", got.get_str()}});
  }
  return rep;
}

}  // namespace gtr
