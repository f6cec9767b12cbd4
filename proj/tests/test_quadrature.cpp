#include "sot/quadrature.hpp"

#include <cmath>

#include "oracles.hpp"
#include "sot/fft.hpp"
#include "test_util.hpp"

using namespace sot;
using testutil::check;
using testutil::check_near;
using testutil::check_throws;

int main() {
    // GL exactness on polynomials of degree 2n-1
    {
        auto f = [](double x) { return 5 * x * x * x * x * x * x * x - 3 * x * x + 1; };
        check_near(integrate_gl(f, -1, 1, 4), -2.0 + 2.0, 1e-14, "gl-4 exact on degree 7");
        check_near(integrate_gl(f, 0, 2, 8), 5 * 256.0 / 8 - 8 + 2, 1e-10, "gl-8 shifted interval");
    }
    check_near(integrate_adaptive([](double x) { return std::exp(-x * x); }, -10, 10, 32, 4, 1e-12, 20),
               std::sqrt(3.14159265358979323846), 1e-12, "adaptive gaussian integral");
    check_near(integrate_adaptive([](double x) { return std::abs(x); }, -1, 2, 16, 2, 1e-9, 24),
               2.5, 1e-7, "adaptive handles a kink");
    check_throws([] {
        integrate_adaptive([](double x) { return x > 0 ? 1.0 / std::sqrt(x) : 0.0; }, 0, 1, 4, 1,
                           1e-14, 3);
    }, "budget exhaustion throws");

    // Legendre values and coefficient evaluation
    check_near(legendre_p(2, 0.5), 0.5 * (3 * 0.25 - 1), 1e-15, "P2(0.5)");
    check_near(legendre_p(5, 1.0), 1.0, 1e-13, "P5(1)");
    check_near(legendre_eval({1.0, 2.0, 3.0}, 0.3), 1 + 2 * 0.3 + 3 * 0.5 * (3 * 0.09 - 1), 1e-14,
               "coefficient evaluation");

    // incomplete beta against Simpson on the raw integrand
    {
        double a = 5.5, b = 5.5, x = 0.37;
        auto raw = [&](double t) {
            return std::pow(t, a - 1) * std::pow(1 - t, b - 1);
        };
        double want = oracle::simpson(raw, 0, x, 40000) / std::exp(log_beta(a, b));
        check_near(incomplete_beta(a, b, x), want, 1e-10, "incomplete beta vs simpson");
        check_near(incomplete_beta(a, b, 0.5), 0.5, 1e-14, "symmetric case at midpoint");
        check_near(incomplete_beta(2.0, 7.0, 1.0), 1.0, 0.0, "right endpoint");
    }

    // linear solver on a known system
    {
        auto x = solve_dense({{2, 1}, {1, 3}}, {5, 10});
        check_near(x[0], 1.0, 1e-12, "solve_dense x0");
        check_near(x[1], 3.0, 1e-12, "solve_dense x1");
        check_throws([] { solve_dense({{1, 1}, {1, 1}}, {1, 2}); }, "singular matrix throws");
    }

    // log-log fitter identity
    {
        std::vector<double> xs = {0.3, 0.2, 0.1, 0.05};
        std::vector<double> vs;
        for (double x : xs) vs.push_back(7.0 * x * x);
        auto fit = fit_loglog(xs, vs);
        check_near(fit.slope, 2.0, 1e-12, "fitter recovers exact slope");
        check_near(fit.max_residual, 0.0, 1e-12, "fitter zero residual on exact powers");
    }

    // FFT inverts itself and matches a direct DFT coefficient
    {
        std::vector<std::complex<double>> v(8);
        for (int i = 0; i < 8; ++i) v[i] = std::complex<double>(i * 0.37, -0.1 * i * i);
        auto w = v;
        fft(w, false);
        std::complex<double> direct = 0.0;
        for (int i = 0; i < 8; ++i)
            direct += v[i] * std::exp(std::complex<double>(0, -2 * 3.14159265358979323846 * 3 * i / 8.0));
        check_near(std::abs(w[3] - direct), 0.0, 1e-12, "fft matches direct dft");
        fft(w, true);
        double err = 0.0;
        for (int i = 0; i < 8; ++i) err = std::max(err, std::abs(w[i] - v[i]));
        check_near(err, 0.0, 1e-13, "fft round trip");
    }

    return testutil::summary("test_quadrature");
}
