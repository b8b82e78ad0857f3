#include "solsched/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace solsched {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

double quadrature_transition_mass(double mu, double gamma, double unit_time, int m0,
                                  int max_units, int m_next, double alpha) {
    if (m_next < m0 || m_next > max_units) return 0.0;
    const double nu = gamma - mu;  // competing-event rate
    if (nu < 0.0) throw std::invalid_argument("mu exceeds gamma");

    // Survival of the competing streams past x, itself by quadrature.
    const auto competing_survival = [&](double x) {
        if (nu == 0.0) return 1.0;
        const double span = 40.0 / nu;
        return integrate([&](double y) { return nu * std::exp(-nu * y); }, x, x + span, 1e-13);
    };
    const auto integrand = [&](double x) {
        return std::exp(-alpha * x) * mu * std::exp(-mu * x) * competing_survival(x);
    };

    const bool no_charging = m0 == max_units || !std::isfinite(unit_time);
    double lo, hi;
    if (no_charging) {
        if (m_next != m0) return 0.0;
        lo = 0.0;
        hi = 40.0 / (gamma + alpha);
    } else if (m_next < max_units) {
        lo = (m_next - m0) * unit_time;
        hi = lo + unit_time;
    } else {
        lo = (max_units - m0) * unit_time;
        hi = lo + 40.0 / (gamma + alpha);
    }
    return integrate(integrand, lo, hi, 1e-12);
}

}  // namespace solsched
