#include "sot/counterexample.hpp"

#include <cmath>

#include "oracles.hpp"
#include "sot/ot1d.hpp"
#include "sot/ot_exact.hpp"
#include "sot/quadrature.hpp"
#include "sot/rng.hpp"
#include "sot/slicing.hpp"
#include "test_util.hpp"

using namespace sot;
using testutil::check;
using testutil::check_in;
using testutil::check_near;
using testutil::check_throws;

namespace {

constexpr double kPi = 3.14159265358979323846;

double poly_moment(const MomentWeight& g, int k) {
    const auto& gl = gauss_legendre(64);
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
        acc += gl.weights[q] * std::pow(gl.nodes[q], k) * g.eval(gl.nodes[q]);
    return acc;
}

// sup over a window of the 5th CDF derivative (= 4th density derivative) by
// central finite differences of the density
double sup_f4(const CounterexampleFamily& fam, double lo, double hi) {
    const double h = 5e-3;
    double sup = 0.0;
    for (int i = 0; i <= 50; ++i) {
        double x = lo + (hi - lo) * i / 50.0;
        double v = (fam.density(x - 2 * h) - 4 * fam.density(x - h) + 6 * fam.density(x) -
                    4 * fam.density(x + h) + fam.density(x + 2 * h)) /
                   (h * h * h * h);
        sup = std::max(sup, std::abs(v));
    }
    return sup;
}

}  // namespace

int main() {
    // moment weight: defining property at d=2
    {
        auto g2 = build_weight(2);
        check_near(poly_moment(g2, 0), 1.0, 1e-12, "d=2 mass moment");
        for (int k = 1; k <= 3; ++k)
            check_near(poly_moment(g2, k), 0.0, 1e-12,
                       "d=2 vanishing moment order " + std::to_string(k));
    }

    auto fam = CounterexampleFamily::make(3);
    const auto& g = fam.g();

    // d=3: parity, all moments, dual-quadrature |s| moment, frozen value
    {
        check_near(g.coeffs[1], 0.0, 1e-14, "odd coefficient P1 vanishes");
        check_near(g.coeffs[3], 0.0, 1e-14, "odd coefficient P3 vanishes");
        check_near(poly_moment(g, 0), 1.0, 1e-12, "d=3 mass moment");
        for (int k = 1; k <= 4; ++k)
            check_near(poly_moment(g, k), 0.0, 1e-12,
                       "d=3 vanishing moment order " + std::to_string(k));
        // second quadrature route for the |s| moment: adaptive on each half
        double left = integrate_adaptive([&](double s) { return -s * g.eval(s); }, -1.0, 0.0, 32,
                                         4, 1e-12, 20);
        double right = integrate_adaptive([&](double s) { return s * g.eval(s); }, 0.0, 1.0, 32, 4,
                                          1e-12, 20);
        check_near(g.abs_first_moment, left + right, 1e-10, "dual quadrature |s| moment");
        check_near(g.abs_first_moment, 15.0 / 128.0, 1e-12, "frozen |s| moment for d=3");
        check_throws([] { build_weight(1); }, "d < 2 rejected");
    }

    // projected density: closed-form exponent against the slice integral
    {
        check_near(fam.f_exponent(), 4.5, 0.0, "exponent is 3d/2");
        double ref_ratio = 0.0;
        bool constant = true;
        for (double t : {0.0, 0.2, 0.45, 0.7, 0.9}) {
            double direct = integrate_adaptive(
                [&](double r) {
                    return std::pow(1.0 - t * t - r * r, 4.0) * 1.0;  // (d+1)=4, r^{d-3}=1
                },
                0.0, std::sqrt(1.0 - t * t), 32, 4, 1e-12, 20);
            double ratio = fam.density(t) / direct;
            if (ref_ratio == 0.0)
                ref_ratio = ratio;
            else
                constant = constant && std::abs(ratio / ref_ratio - 1.0) <= 1e-8;
        }
        check(constant, "closed form matches the slice integral up to one constant");

        check_near(integrate_adaptive([&](double t) { return fam.density(t); }, -1.0, 1.0, 32, 8,
                                      1e-12, 20),
                   1.0, 1e-10, "density integrates to 1");
        validate_analytic(fam.analytic_f());
        check(true, "cdf endpoints and monotonicity");
        validate_analytic(fam.analytic_f_theta(0.4));
        check(true, "projected analytic measure validates");

        // pointwise bound f <= c (1-t^2)^{d+1}
        double worst = 0.0;
        for (int i = 1; i < 400; ++i) {
            double t = -1.0 + 2.0 * i / 400.0;
            worst = std::max(worst, fam.density(t) / std::pow(1.0 - t * t, 4.0));
        }
        check(worst <= fam.f_norm() + 1e-12, "density dominated by (1-t^2)^{d+1} profile");

        // cached cdf against the direct incomplete-beta evaluation
        double cache_err = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            double t = -1.0 + 2.0 * i / 2000.0 + 3.7e-5;
            if (t > 1) break;
            cache_err = std::max(cache_err, std::abs(fam.cdf_fast(t) - fam.cdf(t)));
        }
        check(cache_err <= 1e-11, "hermite cache within 1e-11 of the beta cdf");
        check_throws([] { CounterexampleFamily::make(2); }, "d=2 construction rejected");
    }

    // projected cdf branches
    {
        check_near(projected_cdf(fam, 0.0, 1.5), 1.0, 0.0, "horizontal, t past support");
        check_near(projected_cdf(fam, 0.0, 0.0), 0.5, 1e-14, "horizontal, symmetry midpoint");
        check_near(projected_cdf(fam, kPi, 0.0), 0.5, 1e-14, "flipped branch midpoint");
        check_throws([&] { projected_cdf(fam, 0.5 * kPi, 0.1); }, "degenerate angle rejected");
    }

    // translate kernel collapsed to a point mass at 0: nothing moves
    {
        double v = sw1_mu_mueps_kernel(fam, 0.2, {0.0}, {1.0});
        check_near(v, 0.0, 1e-10, "point-mass shift kernel gives zero distance");
    }

    QuadSpec quad;

    // self-convergence at eps = 0.2 under order doubling
    {
        double base = sw1_mu_mueps(fam, 0.2, quad);
        QuadSpec finer = quad;
        finer.outer_nodes *= 2;
        finer.t_nodes *= 2;
        finer.s_nodes *= 2;
        finer.t_tol *= 0.1;
        finer.cache_points *= 2;
        auto fam2 = CounterexampleFamily::make(3, finer.cache_points);
        double refined = sw1_mu_mueps(fam2, 0.2, finer);
        check_near(refined / base, 1.0, 1e-3, "order doubling moves the value < 1e-3 relative");
    }

    // reduction-independent oracle: plain Monte Carlo over sphere directions
    {
        double analytic = sw1_mu_mueps(fam, 0.2, quad);
        auto dirs = sample_sphere(3, 3000, 2024);
        std::vector<double> vals(dirs.size());
        parallel_for(dirs.size(), [&](std::size_t i) {
            double Theta = std::asin(std::max(-1.0, std::min(1.0, dirs[i][2])));
            vals[i] = w1_projected_at_angle(fam, 0.2, Theta, quad);
        });
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        double se = std::sqrt(var / (vals.size() - 1.0) / vals.size());
        check(std::abs(mean - analytic) <= 0.05 * analytic + 3.0 * se,
              "sphere Monte Carlo agrees with the angle reduction within 5%");
    }

    // literal point-cloud pipeline: signed split + sliced estimator ladder
    {
        double analytic = sw1_mu_mueps(fam, 0.2, quad);
        double coarse = 0.0, fine = 0.0;
        {
            auto split = discretize_family(fam, 0.2, 8, 16, 8);
            auto est = sw(split.positive, split.negative, 1.0, 1500, 77);
            coarse = split.mass * est.value;
        }
        {
            auto split = discretize_family(fam, 0.2, 16, 64, 12);
            auto est = sw(split.positive, split.negative, 1.0, 1500, 77);
            fine = split.mass * est.value;
        }
        check(analytic < fine && fine < coarse,
              "quantization bias is positive and shrinks along the ladder");
        check(fine <= 12.0 * analytic, "fine-level estimate within the calibrated envelope");
    }

    // duality lower bound
    {
        check_near(w1_lower_bound(fam, 0.2), 2.0 * w1_lower_bound(fam, 0.1), 1e-15,
                   "lower bound exactly linear");
        check_near(w1_lower_bound(fam, 0.1), 0.1 * 15.0 / 128.0, 1e-15, "value at eps=0.1");
        auto split = discretize_family(fam, 0.2, 10, 14, 12);
        double discrete = w1_signed(split);
        check(discrete >= 0.95 * w1_lower_bound(fam, 0.2),
              "discrete signed distance clears 95% of the bound");
        check(discrete <= 3.0 * w1_lower_bound(fam, 0.2), "and stays within a small factor");
    }

    // mass of the positive part
    {
        double mass = m_eps(fam);
        double int_abs_g = integrate_adaptive([&](double s) { return std::abs(g.eval(s)); }, -1.0,
                                              1.0, 32, 16, 1e-10, 22);
        check_in(mass, 1.0, 1.0 + int_abs_g, "m_eps within [1, 1 + int|g|]");
        check_near(mass, 1.2520458116754427, 1e-9, "m_eps against the root-split value");
        auto split = discretize_family(fam, 0.2, 32, 32, 16);
        check_in(split.mass, 1.0, 1.0 + int_abs_g, "discretized mass in the same band");
        check_near(split.mass, mass, 5e-2, "discretized mass near the analytic value");
    }

    // max-sliced on the discretization: the vertical direction is near-optimal
    {
        auto split = discretize_family(fam, 0.1, 8, 16, 8);
        auto est = msw(split.positive, split.negative, 256, 40, 11);
        double bound = 0.9 * 0.1 * std::abs(g.abs_first_moment);
        check(split.mass * est.value >= bound, "msw clears 90% of the vertical lower bound");
        double sw_analytic = sw1_mu_mueps(fam, 0.1, QuadSpec{});
        check(sw_analytic <= 0.1 * split.mass * est.value, "mean slicing is far below the max");
    }

    // scan: fitter identities, zone split, slope, normalization
    {
        check_throws([&] { scaling_scan(fam, {0.1, 0.2}, quad); }, "increasing grid rejected");
        check_throws([&] { scaling_scan(fam, {0.7, 0.3}, quad); }, "eps > 0.5 rejected");

        auto synth = fit_scaling({0.3, 0.2, 0.1}, {0.09, 0.04, 0.01});
        check_near(synth.slope, 2.0, 1e-12, "fitter identity on exact squares");

        std::vector<double> grid = {0.3, 0.25, 0.2, 0.15, 0.1, 0.07, 0.05};
        auto scan = scaling_scan(fam, grid, quad);
        check_near(scan.w_fit.slope, 1.0, 1e-12, "lower-bound slope exactly 1");
        check_near(scan.w_fit_normalized.slope, 1.0, 1e-12, "normalized lower-bound slope");
        check_in(scan.sw_fit.slope, 2.7, 3.3, "sliced-distance slope near d");
        check_in(scan.sw_fit_normalized.slope, 2.7, 3.3, "normalized slope in the same band");

        double vratio_min = 1e300, vratio_max = 0.0;
        bool split_consistent = true;
        for (const auto& r : scan.rows) {
            split_consistent = split_consistent &&
                               std::abs(r.sw1 - (r.sw1_vertical + r.sw1_generic)) <=
                                   1e-12 * (1.0 + r.sw1);
            double vr = r.sw1_vertical / std::pow(r.eps, 3.0);
            vratio_min = std::min(vratio_min, vr);
            vratio_max = std::max(vratio_max, vr);
        }
        check(split_consistent, "zone contributions add up to the total");
        check(vratio_max / vratio_min <= 1.5, "vertical-zone constant stable across the grid");

        double lr_min = 1e300, lr_max = -1e300;
        for (const auto& r : scan.rows) {
            double lr = std::log(r.w1_lower) - std::log(r.sw1) / 3.0;
            lr_min = std::min(lr_min, lr);
            lr_max = std::max(lr_max, lr);
        }
        check(lr_max - lr_min <= 0.2, "log(W1) - log(SW1)/d varies slowly across the grid");
    }

    // order-(d+2) cancellation: Taylor remainder bound with finite differences
    {
        double eps = 0.1;
        double m5_abs = integrate_adaptive(
            [&](double s) { return std::pow(std::abs(s), 5.0) * std::abs(g.eval(s)); }, -1.0, 1.0,
            32, 8, 1e-10, 20);
        bool bounded = true;
        double worst_ratio = 0.0;
        for (double Theta : {0.6, 0.9, 1.1}) {
            double c = std::cos(Theta), z = std::sin(Theta);
            for (double t : {-0.3, 0.05, 0.2, 0.4}) {
                double inner = inner_signed_integral(fam, eps, Theta, t);
                double window = std::abs(eps * z) + 1e-3;
                double sup5 = sup_f4(fam, (t - window) / c, (t + window) / c) / std::pow(c, 5.0);
                double remainder = sup5 * std::pow(eps * z, 5.0) * m5_abs / 120.0;
                bounded = bounded && std::abs(inner) <= remainder + 1e-15;
                if (remainder > 0)
                    worst_ratio = std::max(worst_ratio, std::abs(inner) / remainder);
            }
        }
        check(bounded, "inner integral within the order-5 Taylor remainder bound");
        check(worst_ratio <= 1.0, "remainder bound is never exceeded");
    }

    // planar Gaussian pair closed form
    {
        double at_one = gaussian_example_sw_closed_form(1.0);
        check_near(at_one, expected_abs_normal() * (1.0 - 2.0 / kPi), 1e-10,
                   "eps=1 closed form");
        check_near(gaussian_example_sw_quarter(0.37), gaussian_example_sw_closed_form(0.37), 1e-12,
                   "quarter-range symmetry");
        check_near(gaussian_example_w1(0.25), 0.25 * expected_abs_normal(), 1e-15, "w1 companion");
        check_throws([] { gaussian_example_sw_closed_form(0.0); }, "eps=0 rejected");
        check_throws([] { gaussian_example_sw_closed_form(1.5); }, "eps>1 rejected");

        double rmin = 1e300, rmax = 0.0;
        for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
            double r = gaussian_example_sw_closed_form(eps) / (eps * eps * std::abs(std::log(eps)));
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        check(rmax / rmin <= 1.25, "ratio to eps^2|log eps| flat at small eps");
    }

    return testutil::summary("test_counterexample");
}
