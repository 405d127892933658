// Adaptive Gauss-Kronrod quadrature for small complex vector integrands and
// Wynn's epsilon acceleration of partial-sum sequences.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include "slabrad/types.hpp"

namespace slabrad::quad {

namespace detail {
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

template <typename Value>
double max_norm(const Value& v) {
  return v.cwiseAbs().maxCoeff();
}

template <typename Value>
struct Panel {
  double a, b;
  Value value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

/// One 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
template <typename Value, typename F>
Panel<Value> kronrod_panel(F& f, double a, double b) {
  using namespace detail;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Value fc = f(c);
  Value k15 = fc * kKronrodWeights[7];
  Value g7 = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const Value fs = f(c - dx) + f(c + dx);
    k15 += fs * kKronrodWeights[i];
    if (i % 2 == 1) g7 += fs * kGaussWeights[i / 2];
  }
  k15 *= h;
  g7 *= h;
  return {a, b, k15, max_norm<Value>(k15 - g7)};
}

template <typename Value>
struct Result {
  Value value;
  double error;
  int panels;
};

/// Globally adaptive integration of f over [a, b]. Refines the worst panel until
/// the summed error estimate is below max(abs_tol, rel_tol * |I|). Throws
/// ConvergenceError once max_panels is exhausted.
template <typename Value, typename F>
Result<Value> integrate(F&& f, double a, double b, int initial_panels, double rel_tol,
                        double abs_tol, int max_panels = 4000) {
  std::priority_queue<Panel<Value>> heap;
  initial_panels = std::max(1, initial_panels);
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    heap.push(kronrod_panel<Value>(f, lo, hi));
  }
  auto totals = [&heap]() {
    auto copy = heap;
    Value sum = copy.top().value * 0.0;
    double err = 0.0;
    while (!copy.empty()) {
      sum += copy.top().value;
      err += copy.top().error;
      copy.pop();
    }
    return std::pair{sum, err};
  };
  auto [sum, err] = totals();
  while (err > std::max(abs_tol, rel_tol * max_norm<Value>(sum))) {
    if (int(heap.size()) >= max_panels) {
      throw ConvergenceError("adaptive quadrature exhausted its panel budget",
                             err / std::max(max_norm<Value>(sum), 1e-300));
    }
    const Panel<Value> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = kronrod_panel<Value>(f, worst.a, mid);
    const auto right = kronrod_panel<Value>(f, mid, worst.b);
    sum += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  std::tie(sum, err) = totals();
  return {sum, err, int(heap.size())};
}

/// Wynn's epsilon algorithm: accelerated limit of the partial sums s[0..n).
inline cplx wynn_epsilon(std::span<const cplx> s) {
  const std::size_t n = s.size();
  if (n < 3) return n ? s.back() : cplx{};
  std::vector<cplx> prev(n, 0.0);  // column k-1
  std::vector<cplx> cur(s.begin(), s.end());  // column k
  cplx best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<cplx> next(n - k);
    for (std::size_t j = 0; j + k < n; ++j) {
      const cplx diff = cur[j + 1] - cur[j];
      if (std::abs(diff) <= 1e-300 + 1e-15 * std::abs(cur[j + 1])) {
        return k % 2 == 1 ? cur[j + 1] : best;
      }
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

}  // namespace slabrad::quad
