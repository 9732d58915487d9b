#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace ckpt::numeric {

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Golden-section search for the minimizer of a unimodal `f` on [lo, hi].
// Stops when the bracket is narrower than `abs_tol`.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double abs_tol, int max_iterations = 500);

// Root of `f` in [lo, hi], where f(lo) and f(hi) have opposite signs (or one is 0).
// Newton steps from `df` are taken when they stay inside the bracket, bisection
// otherwise. Converges when the bracket width is below rel_tol * |x|.
double bracketed_root(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo, double hi,
                      double rel_tol = 1e-12, int max_iterations = 300);

// All real roots of a*x^3 + b*x^2 + c*x + d, sorted ascending, repeated roots
// reported once. The real line is split at the critical points into monotone
// pieces, each bracketed and solved with bracketed_root. Degree drops when
// leading coefficients are exactly zero.
std::vector<double> cubic_real_roots(double a, double b, double c, double d);

// Principal branch W0 of the Lambert function, z >= -1/e.
double lambert_w0(double z);

}  // namespace ckpt::numeric
