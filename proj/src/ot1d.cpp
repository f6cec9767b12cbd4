#include "sot/ot1d.hpp"

#include <cmath>
#include <stdexcept>

#include "sot/quadrature.hpp"

namespace sot {

W1Result w1_cdf(const StepCDF& a, const StepCDF& b) {
    std::size_t ia = 0, ib = 0;
    double fa = 0.0, fb = 0.0;
    double prev_x = 0.0;
    bool started = false;
    KahanSum acc;
    while (ia < a.breakpoints.size() || ib < b.breakpoints.size()) {
        double xa = ia < a.breakpoints.size() ? a.breakpoints[ia] : 0.0;
        double xb = ib < b.breakpoints.size() ? b.breakpoints[ib] : 0.0;
        double x;
        if (ia >= a.breakpoints.size()) x = xb;
        else if (ib >= b.breakpoints.size()) x = xa;
        else x = std::min(xa, xb);
        if (started) acc.add(std::abs(fa - fb) * (x - prev_x));
        if (ia < a.breakpoints.size() && a.breakpoints[ia] == x) fa = a.cumulative[ia++];
        if (ib < b.breakpoints.size() && b.breakpoints[ib] == x) fb = b.cumulative[ib++];
        prev_x = x;
        started = true;
    }
    return {acc.value(), "cdf-l1"};
}

double wp_quantile(const StepCDF& a, const StepCDF& b, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("wp_quantile: p must be >= 1");
    std::size_t ia = 0, ib = 0;
    double la = 0.0, lb = 0.0;  // cumulative level consumed on each side
    KahanSum acc;
    while (ia < a.breakpoints.size() && ib < b.breakpoints.size()) {
        double ca = a.cumulative[ia], cb = b.cumulative[ib];
        double level = std::min(ca, cb);
        double mass = level - std::max(la, lb);
        if (mass > 0.0)
            acc.add(mass * std::pow(std::abs(a.breakpoints[ia] - b.breakpoints[ib]), p));
        if (ca <= level) {
            la = ca;
            ++ia;
        }
        if (cb <= level) {
            lb = cb;
            ++ib;
        }
    }
    return std::pow(acc.value(), 1.0 / p);
}

double expected_abs_normal() {
    // int |z| phi(z) dz = 2 int_0^inf z phi(z) dz, integrated far into the tail
    static const double value = [] {
        auto f = [](double z) {
            return 2.0 * z * std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
        };
        return integrate_adaptive(f, 0.0, 42.0, 48, 8, 1e-14, 30);
    }();
    return value;
}

double w1_gaussian_1d(double sigma1, double sigma2) {
    if (sigma1 < 0.0 || sigma2 < 0.0)
        throw std::invalid_argument("w1_gaussian_1d: negative standard deviation");
    return std::abs(sigma1 - sigma2) * expected_abs_normal();
}

}  // namespace sot
