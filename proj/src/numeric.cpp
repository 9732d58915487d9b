#include "ckpt/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ckpt::numeric {

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double abs_tol, int max_iterations) {
  if (!(lo < hi)) throw NonConvergence("golden section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < max_iterations && (b - a) > abs_tol; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  if ((b - a) > abs_tol) throw NonConvergence("golden section: iteration limit reached");
  return 0.5 * (a + b);
}

double bracketed_root(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo, double hi,
                      double rel_tol, int max_iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NonConvergence("bracketed_root: no sign change");
  // Orient so that f(a) < 0 < f(b).
  double a = lo;
  double b = hi;
  if (flo > 0.0) std::swap(a, b);

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iterations; ++i) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) a = x; else b = x;

    const double width = std::abs(b - a);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (width <= rel_tol * scale || width <= std::numeric_limits<double>::min()) return 0.5 * (a + b);

    const double slope = df(x);
    double next = slope != 0.0 ? x - fx / slope : std::numeric_limits<double>::quiet_NaN();
    const double left = std::min(a, b);
    const double right = std::max(a, b);
    if (!(next > left && next < right)) next = 0.5 * (a + b);
    if (next == x) return x;
    x = next;
  }
  throw NonConvergence("bracketed_root: iteration limit reached");
}

namespace {

// Roots of a*x^2 + b*x + c, ascending.
std::vector<double> quadratic_real_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  // Cancellation-free form.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace

std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
  if (a == 0.0) return quadratic_real_roots(b, c, d);

  auto poly = [=](double x) { return ((a * x + b) * x + c) * x + d; };
  auto deriv = [=](double x) { return (3.0 * a * x + 2.0 * b) * x + c; };

  // Cauchy bound on root magnitudes.
  const double bound = 1.0 + std::max({std::abs(b / a), std::abs(c / a), std::abs(d / a)});

  std::vector<double> breaks{-bound};
  for (double crit : quadratic_real_roots(3.0 * a, 2.0 * b, c)) {
    if (crit > -bound && crit < bound) breaks.push_back(crit);
  }
  breaks.push_back(bound);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    const double flo = poly(lo);
    const double fhi = poly(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if (fhi != 0.0 && (flo > 0.0) != (fhi > 0.0)) {
      roots.push_back(bracketed_root(poly, deriv, lo, hi, 1e-15));
    }
    if (i + 2 == breaks.size() && fhi == 0.0) roots.push_back(hi);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

double lambert_w0(double z) {
  const double branch = -1.0 / std::numbers::e;
  if (z < branch) throw std::domain_error("lambert_w0: argument below -1/e");
  if (z == 0.0) return 0.0;

  double w;
  const double near = 2.0 * (std::numbers::e * z + 1.0);
  if (near < 0.25) {
    // Series about the branch point.
    const double p = std::sqrt(std::max(near, 0.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (z < 3.0) {
    w = std::log1p(z);
  } else {
    const double l1 = std::log(z);
    w = l1 - std::log(l1);
  }
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double residual = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace ckpt::numeric
