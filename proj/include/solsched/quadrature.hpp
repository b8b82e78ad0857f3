#pragma once

#include <functional>

namespace solsched {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// Numerical-quadrature reference for one transition mass: the defining
/// double integral of "next event is the mu-stream, at a time that lands the
/// battery on m_next", discounted by exp(-alpha t) (alpha = 0 gives the
/// embedded probability). Computed from the exponential densities alone —
/// independent of the closed forms in kernel.cpp, so it can arbitrate them.
///
///   mu:        rate of the event stream that fires
///   gamma:     total event rate (mu + all competing rates)
///   unit_time: T_r, seconds per battery unit (+inf = no charging)
///   m0:        battery right after the action
///   max_units: M
///   m_next:    successor battery level
double quadrature_transition_mass(double mu, double gamma, double unit_time, int m0,
                                  int max_units, int m_next, double alpha);

}  // namespace solsched
