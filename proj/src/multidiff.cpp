#include "gtr/multidiff.hpp"

#include <algorithm>
#include <set>

#include "gtr/forms.hpp"

namespace gtr {

SlotKey make_key(const std::vector<PoleIndex>& idx) {
  if (idx.size() > static_cast<std::size_t>(kMaxSlots)) fail(ErrorKind::InvalidArgument, "too many slots");
  SlotKey k{};
  for (std::size_t i = 0; i < idx.size(); ++i) k[i] = to_index(idx[i]);
  return k;
}

std::vector<PoleIndex> key_indices(const SlotKey& k, int n) {
  std::vector<PoleIndex> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(to_pole(k[i]));
  return out;
}

void MultiDifferential::add(const std::vector<PoleIndex>& idx, const Rational& c) {
  if (static_cast<int>(idx.size()) != n_) fail(ErrorKind::InvalidArgument, "arity mismatch");
  t_.add(make_key(idx), c);
}

void MultiDifferential::add_symmetric(const std::vector<PoleIndex>& idx, const Rational& c) {
  std::vector<PoleIndex> p = idx;
  std::sort(p.begin(), p.end());
  do add(p, c);
  while (std::next_permutation(p.begin(), p.end()));
}

Rational MultiDifferential::coefficient(const std::vector<PoleIndex>& idx) const {
  if (static_cast<int>(idx.size()) != n_) fail(ErrorKind::InvalidArgument, "arity mismatch");
  auto it = t_.terms.find(make_key(idx));
  return it == t_.terms.end() ? Rational(0) : it->second;
}

std::vector<std::pair<std::vector<PoleIndex>, Rational>> MultiDifferential::sorted_terms() const {
  std::vector<std::pair<std::vector<PoleIndex>, Rational>> out;
  for (const auto& [k, c] : t_.terms) {
    std::vector<PoleIndex> idx = key_indices(k, n_);
    if (std::is_sorted(idx.begin(), idx.end())) out.emplace_back(std::move(idx), c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<Point> MultiDifferential::support() const {
  std::set<Point> pts;
  for (const auto& [k, c] : t_.terms)
    for (int i = 0; i < n_; ++i) pts.insert(point_of(index_point(k[i])));
  return {pts.begin(), pts.end()};
}

Rational symmetry_defect(const MultiDifferential& w) {
  Rational worst = 0;
  const auto& terms = w.tensor().terms;
  int n = w.arity();
  for (const auto& [k, c] : terms)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (k[i] == k[j]) continue;
        SlotKey s = k;
        std::swap(s[i], s[j]);
        auto it = terms.find(s);
        Rational other = it == terms.end() ? Rational(0) : it->second;
        Rational d = abs(c - other);
        if (d > worst) worst = d;
      }
  return worst;
}

nlohmann::ordered_json to_json(const MultiDifferential& w) {
  nlohmann::ordered_json j;
  j["g"] = w.genus();
  j["n"] = w.arity();
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  std::vector<std::pair<std::vector<PoleIndex>, Rational>> all;
  for (const auto& [k, c] : w.tensor().terms) all.emplace_back(key_indices(k, w.arity()), c);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [idx, c] : all) {
    nlohmann::ordered_json e;
    nlohmann::ordered_json ij = nlohmann::ordered_json::array();
    for (const PoleIndex& p : idx) ij.push_back(nlohmann::ordered_json::array({p.q.str(), p.k}));
    e["idx"] = ij;
    e["coeff"] = c.get_str();
    terms.push_back(e);
  }
  j["terms"] = terms;
  return j;
}

MultiDifferential multidiff_from_json(const nlohmann::json& j) {
  try {
    MultiDifferential w(j.at("g").get<int>(), j.at("n").get<int>());
    for (const auto& e : j.at("terms")) {
      std::vector<PoleIndex> idx;
      for (const auto& p : e.at("idx")) {
        const auto& q = p.at(0);
        Point pt = q.is_string() ? parse_point(q.get<std::string>()) : Point::finite(Rational(q.get<long>()));
        idx.push_back(PoleIndex{pt, p.at(1).get<int>()});
      }
      w.add(idx, parse_rational(e.at("coeff").get<std::string>()));
    }
    return w;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::ParseError, std::string("bad differential JSON: ") + ex.what());
  }
}

TensorJet expand_slot(const SpecTensor& t, int arity, int slot, const Point& q, int order, const std::vector<int>& dest) {
  if (slot < 0 || slot >= arity) fail(ErrorKind::InvalidArgument, "slot out of range");
  std::map<Index, SpecTensor> groups;
  for (const auto& [k, c] : t.terms) {
    SlotKey rest{};
    for (int i = 0, o = 0; i < arity; ++i) {
      if (i == slot) continue;
      rest[dest.empty() ? o : dest[i]] = k[i];
      ++o;
    }
    groups[k[slot]].add(rest, c);
  }
  TensorJet out;
  for (const auto& [idx, rest] : groups) {
    ScalarJet b = pole_basis_jet(point_of(index_point(idx)), index_order(idx), q, order);
    out += outer(b, rest);
  }
  return out;
}

TensorJet expand_slot(const MultiDifferential& w, int slot, const Point& q, int order) {
  return expand_slot(w.tensor(), w.arity(), slot, q, order);
}

TensorJet kernel_jet(const Point& q, int order, int pos) {
  TensorJet out(order);
  for (int m = 0; m < order; ++m) {
    SlotKey k{};
    k[pos] = make_index(q, m + 1);
    SpecTensor t;
    t.add(k, Rational(-1));
    out.add_term(m, std::move(t));
  }
  return out;
}

TensorJet pull_back(const TensorJet& density, const ScalarJet& sigma, int cap) {
  return mul(compose(density, sigma, cap), sigma.derivative(), cap);
}

TensorJet substitute_jet(const MultiDifferential& w, int slot, const Point& q, const ScalarJet& sigma, int order) {
  return pull_back(expand_slot(w, slot, q, order), sigma, order);
}

// ---- bivariate series ----

namespace {

void badd(Bivariate& a, int i, int j, const ScalarJet& v) {
  auto it = a.find({i, j});
  if (it == a.end()) a.emplace(std::make_pair(i, j), v);
  else it->second += v;
}

Bivariate bmul(const Bivariate& a, const Bivariate& b, int degree) {
  Bivariate r;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      int i = ka.first + kb.first, j = ka.second + kb.second;
      if (i + j > degree) continue;
      badd(r, i, j, mul(va, vb));
    }
  return r;
}

// X(s) = x'(z+s) coefficients: (1/m!) d^m x' / dzeta^m.
std::vector<ScalarJet> shift_coefficients(const ScalarJet& xd, int count) {
  std::vector<ScalarJet> out;
  ScalarJet d = xd;
  Rational f = 1;
  for (int m = 0; m <= count; ++m) {
    if (m > 0) {
      d = d.derivative();
      f /= m;
    }
    out.push_back(d.scaled(f));
  }
  return out;
}

}  // namespace

Bivariate regularized_kernel_over_dx(const ScalarJet& xd, int degree) {
  int D = degree + 2;
  std::vector<ScalarJet> X = shift_coefficients(xd, D);
  ScalarJet c0 = inverse(xd);
  // 1/X(s)
  std::vector<ScalarJet> c(D + 1);
  c[0] = c0;
  for (int m = 1; m <= D; ++m) {
    ScalarJet s(kExactOrder);
    for (int i = 1; i <= m; ++i) s += mul(X[i], c[m - i]);
    c[m] = -mul(c0, s);
  }
  Bivariate num;
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) badd(num, i, j, mul(c[i], c[j]));
  // 1/Q^2 with Q = sum_k x^{(k)}/k! h_{k-1}(s,t) = x' (1 + R).
  Bivariate R;
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j)
      if (i + j > 0) badd(R, i, j, mul(X[i + j], c0).scaled(Rational(1, i + j + 1)));
  Bivariate geo;  // sum (n+1)(-R)^n
  geo[{0, 0}] = ScalarJet::monomial(0, Rational(1));
  Bivariate p = geo;
  for (int n = 1; n <= D; ++n) {
    p = bmul(p, R, D);
    for (const auto& [k, v] : p) badd(geo, k.first, k.second, v.scaled(Rational(n % 2 ? -(n + 1) : (n + 1))));
  }
  ScalarJet c02 = mul(c0, c0);
  for (const auto& [k, v] : geo) badd(num, k.first, k.second, -mul(c02, v));
  // Divide each homogeneous part by (s - t)^2.
  Bivariate out;
  for (int d = 2; d <= D; ++d) {
    std::vector<ScalarJet> a(d + 1), b(d + 1);
    for (int i = 0; i <= d; ++i) {
      auto it = num.find({i, d - i});
      if (it != num.end()) a[i] = it->second;
    }
    for (int i = d; i >= 2; --i) {
      ScalarJet v = a[i];
      if (i - 1 <= d - 2) v += b[i - 1].scaled(Rational(2));
      if (i <= d - 2) v -= b[i];
      b[i - 2] = v;
    }
    ScalarJet r1 = a[1] - (b[1] - b[0].scaled(Rational(2)));
    ScalarJet r0 = a[0] - b[0];
    if (!r1.empty() || !r0.empty()) fail(ErrorKind::Internal, "regularized kernel is not divisible by (s-t)^2");
    for (int i = 0; i <= d - 2; ++i) badd(out, i, d - 2 - i, b[i]);
  }
  return out;
}

Bivariate regularized_diagonal(const ScalarJet& xd, int degree) {
  std::vector<ScalarJet> X = shift_coefficients(xd, degree);
  Bivariate xs, xt;
  for (int i = 0; i <= degree; ++i) {
    xs[{i, 0}] = X[i];
    xt[{0, i}] = X[i];
  }
  return bmul(bmul(regularized_kernel_over_dx(xd, degree), xs, degree), xt, degree);
}

}  // namespace gtr
