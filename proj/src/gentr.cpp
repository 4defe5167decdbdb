#include "gtr/gentr.hpp"

#include <future>

namespace gtr {

int initial_order(int g, int n, int r, int s) {
  int ar = std::abs(r), as = std::abs(s);
  return std::max(4, (2 * g - 2 + n) * (ar + as + 2) + ar + as + 4);
}

GeneralizedTR::GeneralizedTR(SpectralCurve curve, EngineOptions opt) : curve_(std::move(curve)), opt_(opt) {
  for (const Point& k : curve_.keys) keys_.push_back(classify(curve_, k));
}

const SpecTensor* GeneralizedTR::cell(int g, int a, unsigned bmask) const {
  if (bmask != 0) return nullptr;
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find({g, a});
  return it == memo_.end() ? nullptr : &it->second.tensor();
}

std::vector<TensorJet> GeneralizedTR::W_at(const Point& q, int g, int n, int order) {
  ensure_level(2 * g - 3 + n);
  LocalContext ctx(curve_.dx, curve_.dy, q, order);
  WRequest req;
  req.g = g;
  req.a = n - 1;
  for (int i = 0; i < n - 1; ++i) req.pos_a.push_back(i + 1);
  return build_W(ctx, *this, req);
}

TensorJet GeneralizedTR::omega_bar(const Point& q, int g, int n, int order) {
  ensure_level(2 * g - 3 + n);
  LocalContext ctx(curve_.dx, curve_.dy, q, order);
  WRequest req;
  req.g = g;
  req.a = n - 1;
  for (int i = 0; i < n - 1; ++i) req.pos_a.push_back(i + 1);
  return -output_operator(build_W(ctx, *this, req), ctx.inv_db(), 1);
}

SpecTensor GeneralizedTR::project_at(const Point& q, int g, int n, int order) {
  LocalContext ctx(curve_.dx, curve_.dy, q, order);
  WRequest req;
  req.g = g;
  req.a = n - 1;
  for (int i = 0; i < n - 1; ++i) req.pos_a.push_back(i + 1);
  req.output_trunc = 0;
  TensorJet bar = -output_operator(build_W(ctx, *this, req), ctx.inv_db(), 1);
  if (bar.trunc() < 0) fail(ErrorKind::PrecisionError, "working order too low at " + q.str());
  return principal_part(bar, q, 0);
}

MultiDifferential GeneralizedTR::compute(int g, int n) {
  MultiDifferential w(g, n);
  for (const PointClassification& k : keys_) {
    int start = opt_.initial_order > 0 ? opt_.initial_order : initial_order(g, n, k.r, k.s);
    int used = start;
    SpecTensor part = with_escalation(start, [&](int order) {
      used = order;
      return project_at(k.point, g, n, order);
    });
    if (opt_.audit && !(project_at(k.point, g, n, used + 4) == part))
      fail(ErrorKind::OrderDivergence, "projection changed at a higher working order");
    coeff_add(w.tensor(), part);
  }
  return w;
}

void GeneralizedTR::ensure_level(int chi) {
  while (done_level_ < chi) {
    int level = done_level_ + 1;
    std::vector<std::pair<int, int>> cells;
    for (int g = 0; 2 * g - 1 <= level; ++g) {
      int n = level + 2 - 2 * g;
      if (n >= 1 && n <= kMaxSlots) cells.emplace_back(g, n);
    }
    std::vector<MultiDifferential> out(cells.size());
    if (opt_.jobs > 1 && cells.size() > 1) {
      std::vector<std::future<MultiDifferential>> fut;
      std::size_t next = 0;
      while (next < cells.size() || !fut.empty()) {
        // Keep at most `jobs` tasks in flight; results are collected in order.
        std::size_t base = next - fut.size();
        while (next < cells.size() && static_cast<int>(fut.size()) < opt_.jobs) {
          auto [g, n] = cells[next++];
          fut.push_back(std::async(std::launch::async, [this, g = g, n = n] { return compute(g, n); }));
        }
        out[base] = fut.front().get();
        fut.erase(fut.begin());
      }
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) out[i] = compute(cells[i].first, cells[i].second);
    }
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < cells.size(); ++i) memo_[cells[i]] = std::move(out[i]);
    done_level_ = level;
  }
}

const MultiDifferential& GeneralizedTR::get(int g, int n) {
  int chi = 2 * g - 2 + n;
  if (g < 0 || n < 1 || chi < 1) fail(ErrorKind::InvalidArgument, "only stable cells are computed");
  if (n > kMaxSlots) fail(ErrorKind::InvalidArgument, "arity exceeds the slot limit");
  ensure_level(chi);
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.at({g, n});
}

std::map<std::pair<int, int>, MultiDifferential> GeneralizedTR::all(int chi_max) {
  ensure_level(chi_max);
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::pair<int, int>, MultiDifferential> out;
  for (const auto& [k, v] : memo_)
    if (2 * k.first - 2 + k.second <= chi_max) out.emplace(k, v);
  return out;
}

std::map<std::pair<int, int>, MultiDifferential> generalized_tr(const SpectralCurve& c, int chi_max,
                                                                const EngineOptions& opt) {
  GeneralizedTR e(c, opt);
  return e.all(chi_max);
}

}  // namespace gtr
