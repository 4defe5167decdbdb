#include "gtr/ceo.hpp"

#include <future>

namespace gtr {

DeckJet deck(const SpectralCurve& c, const Point& q, int order) {
  ScalarJet X = local_expand(c.dx, q, order + 2).density.truncated(order + 2);
  if (X.empty() || X.valuation() != 1) fail(ErrorKind::NotSimpleZero, "dx has no simple zero at " + q.str());
  ScalarJet x = X.primitive();
  Rational u0 = x.coeff(2);
  // x = u0 t^2 with t = zeta sqrt(x / (u0 zeta^2)); sigma is t -> -t.
  ScalarJet t = unit_power(x.shifted(-2).scaled(1 / u0), Rational(1, 2)).shifted(1);
  ScalarJet sigma = compose(reverse(t), -t);
  sigma.limit(order);
  return {q, sigma};
}

void check_ceo_admissible(const SpectralCurve& c) {
  for (const Point& k : c.keys) {
    PointClassification p = classify(c, k);
    if (p.r != 2) fail(ErrorKind::NotSimpleZero, "key " + k.str() + " is not a simple zero of dx");
    if (p.s != 1) fail(ErrorKind::HypothesisViolated, "dy is singular or vanishes at key " + k.str());
  }
}

CEORecursion::CEORecursion(SpectralCurve curve, EngineOptions opt) : curve_(std::move(curve)), opt_(opt) {
  check_ceo_admissible(curve_);
}

const SpecTensor& CEORecursion::stored(int g, int n) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find({g, n});
  if (it == memo_.end()) fail(ErrorKind::MissingDependency, "cell not computed yet");
  return it->second.tensor();
}

// omega^{(g)}_{|pos|+1}(zeta, ...) expanded in slot 0, the other slots sent to pos.
TensorJet CEORecursion::factor(const Point& q, int g, const std::vector<int>& pos, int order) const {
  int n = static_cast<int>(pos.size()) + 1;
  if (g == 0 && n == 2) return kernel_jet(q, order, pos[0]);
  std::vector<int> dest(n, 0);
  for (int i = 1; i < n; ++i) dest[i] = pos[i - 1];
  return expand_slot(stored(g, n), n, 0, q, order, dest);
}

TensorJet CEORecursion::germ(const Point& q, int g, int n, int order) {
  ensure_level(2 * g - 3 + n);
  int N = n - 1;
  ScalarJet sigma = deck(curve_, q, order).sigma;
  ScalarJet dsigma = sigma.derivative();
  ScalarJet X = local_expand(curve_.dx, q, order).density.truncated(order);
  ScalarJet Y = local_expand(curve_.dy, q, order).density.truncated(order).primitive();
  ScalarJet pref = inverse(mul(Y - compose(Y, sigma, order), X), order);

  TensorJet sum(order);
  if (g >= 1) {
    if (g == 1 && N == 0) {
      ScalarJet diff = ScalarJet::monomial(1, Rational(1)) - sigma;
      sum += outer(mul(dsigma, inverse(mul(diff, diff), order)), SpecTensor::unit());
    } else {
      // Group omega^{(g-1)}_{N+2} by its first two indices.
      std::map<std::pair<Index, Index>, SpecTensor> groups;
      for (const auto& [k, c] : stored(g - 1, N + 2).terms) {
        SlotKey rest{};
        for (int i = 0; i < N; ++i) rest[i + 1] = k[i + 2];
        groups[{k[0], k[1]}].add(rest, c);
      }
      std::map<Index, ScalarJet> near, far;
      auto jet_of = [&](std::map<Index, ScalarJet>& cache, Index idx, bool pulled) -> const ScalarJet& {
        auto it = cache.find(idx);
        if (it != cache.end()) return it->second;
        ScalarJet b = pole_basis_jet(point_of(index_point(idx)), index_order(idx), q, order);
        if (pulled) b = mul(compose(b, sigma, order), dsigma, order);
        return cache.emplace(idx, std::move(b)).first->second;
      };
      for (const auto& [ij, rest] : groups)
        sum += outer(mul(jet_of(near, ij.first, false), jet_of(far, ij.second, true), order), rest);
    }
  }
  for (unsigned m = 0; m < (1u << N); ++m) {
    std::vector<int> p1, p2;
    for (int i = 0; i < N; ++i) (m >> i & 1 ? p1 : p2).push_back(i + 1);
    for (int g1 = 0; g1 <= g; ++g1) {
      int g2 = g - g1;
      if ((g1 == 0 && p1.empty()) || (g2 == 0 && p2.empty())) continue;
      TensorJet a = factor(q, g1, p1, order);
      TensorJet b = pull_back(factor(q, g2, p2, order), sigma, order);
      sum += mul(a, b, order);
    }
  }
  return mul(sum, pref, order);
}

MultiDifferential CEORecursion::compute(int g, int n) {
  MultiDifferential w(g, n);
  for (const Point& k : curve_.keys) {
    int start = opt_.initial_order > 0 ? opt_.initial_order : initial_order(g, n, 2, 1);
    SpecTensor part = with_escalation(start, [&](int order) {
      TensorJet bar = germ(k, g, n, order);
      if (bar.trunc() < 0) fail(ErrorKind::PrecisionError, "working order too low at " + k.str());
      return principal_part(bar, k, 0);
    });
    coeff_add(w.tensor(), part);
  }
  return w;
}

void CEORecursion::ensure_level(int chi) {
  while (done_level_ < chi) {
    int level = done_level_ + 1;
    std::vector<std::pair<int, int>> cells;
    for (int g = 0; 2 * g - 1 <= level; ++g) {
      int n = level + 2 - 2 * g;
      if (n >= 1 && n <= kMaxSlots) cells.emplace_back(g, n);
    }
    std::vector<MultiDifferential> out(cells.size());
    if (opt_.jobs > 1) {
      std::vector<std::future<MultiDifferential>> fut;
      for (auto [g, n] : cells) fut.push_back(std::async(std::launch::async, [this, g = g, n = n] { return compute(g, n); }));
      for (std::size_t i = 0; i < cells.size(); ++i) out[i] = fut[i].get();
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) out[i] = compute(cells[i].first, cells[i].second);
    }
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < cells.size(); ++i) memo_[cells[i]] = std::move(out[i]);
    done_level_ = level;
  }
}

const MultiDifferential& CEORecursion::get(int g, int n) {
  if (g < 0 || n < 1 || 2 * g - 2 + n < 1) fail(ErrorKind::InvalidArgument, "only stable cells are computed");
  ensure_level(2 * g - 2 + n);
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.at({g, n});
}

std::map<std::pair<int, int>, MultiDifferential> CEORecursion::all(int chi_max) {
  ensure_level(chi_max);
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::pair<int, int>, MultiDifferential> out;
  for (const auto& [k, v] : memo_)
    if (2 * k.first - 2 + k.second <= chi_max) out.emplace(k, v);
  return out;
}

MultiDifferential compute_ceo(const SpectralCurve& c, int g, int n, const EngineOptions& opt) {
  CEORecursion e(c, opt);
  return e.get(g, n);
}

std::map<std::pair<int, int>, MultiDifferential> ceo_all(const SpectralCurve& c, int chi_max,
                                                         const EngineOptions& opt) {
  CEORecursion e(c, opt);
  return e.all(chi_max);
}

}  // namespace gtr
