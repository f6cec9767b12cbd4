#include "sot/slicing.hpp"

#include <cmath>

#include "oracles.hpp"
#include "sot/measures.hpp"
#include "sot/ot1d.hpp"
#include "sot/quadrature.hpp"
#include "sot/rng.hpp"
#include "test_util.hpp"

using namespace sot;
using testutil::check;
using testutil::check_in;
using testutil::check_near;
using testutil::check_throws;

namespace {

constexpr double kPi = 3.14159265358979323846;

DiscreteMeasure random_cloud(int d, int atoms, std::uint64_t seed) {
    auto g = substream(seed, "slice-test", 0);
    std::vector<std::vector<double>> pts(atoms, std::vector<double>(d));
    std::vector<double> w(atoms);
    for (int i = 0; i < atoms; ++i) {
        for (int c = 0; c < d; ++c) pts[i][c] = g.gaussian();
        w[i] = g.uniform() + 0.05;
    }
    return make_discrete(pts, w);
}

double frame_orthonormality_error(const Frame& f) {
    double worst = 0.0;
    for (int a = 0; a < f.k; ++a)
        for (int b = 0; b < f.k; ++b) {
            double dot = 0.0;
            for (int r = 0; r < f.d; ++r) dot += f.entry(r, a) * f.entry(r, b);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

int main() {
    // sphere sampling invariants
    {
        auto dirs = sample_sphere(2, 100000, 11);
        double norm_err = 0.0, mx = 0.0, my = 0.0;
        for (const auto& th : dirs) {
            norm_err = std::max(norm_err, std::abs(std::hypot(th[0], th[1]) - 1.0));
            mx += th[0];
            my += th[1];
        }
        mx /= dirs.size();
        my /= dirs.size();
        check(norm_err <= 1e-12, "all sphere samples unit within 1e-12");
        check(std::hypot(mx, my) <= 0.02, "d=2 empirical mean vector small");

        auto dirs3 = sample_sphere(3, 100000, 12);
        double z2 = 0.0;
        for (const auto& th : dirs3) z2 += th[2] * th[2];
        check_near(z2 / dirs3.size(), 1.0 / 3.0, 0.01, "d=3 second moment of z");
        check_throws([] { sample_sphere(1, 10, 1); }, "d < 2 rejected");
    }

    // grassmannian sampling invariants
    {
        auto frames = sample_grassmannian(4, 2, 200, 13);
        double worst = 0.0;
        for (const auto& f : frames) worst = std::max(worst, frame_orthonormality_error(f));
        check(worst <= 1e-10, "frames orthonormal within 1e-10");
        check_throws([] { sample_grassmannian(3, 3, 5, 1); }, "k out of range rejected");

        // k=1 marginal distribution vs the sphere sampler (different seeds)
        auto f1 = sample_grassmannian(3, 1, 10000, 21);
        auto s1 = sample_sphere(3, 10000, 22);
        std::vector<double> xa, xb;
        for (const auto& f : f1) xa.push_back(f.cols[0]);
        for (const auto& th : s1) xb.push_back(th[0]);
        double p = oracle::ks_two_sample_p(xa, xb);
        check(p > 0.01, "k=1 first coordinate matches sphere law (KS)");

        // rotation invariance of a 2x2 minor determinant, d=3 k=2
        double angle = 0.83;
        auto fa = sample_grassmannian(3, 2, 4000, 31);
        auto fb = sample_grassmannian(3, 2, 4000, 32);
        std::vector<double> da, db;
        for (const auto& f : fa)
            da.push_back(std::abs(f.entry(0, 0) * f.entry(1, 1) - f.entry(1, 0) * f.entry(0, 1)));
        for (const auto& f : fb) {
            Frame r = f;
            for (int c = 0; c < f.k; ++c) {
                double x = f.entry(0, c), y = f.entry(1, c);
                r.cols[std::size_t(c) * f.d + 0] = std::cos(angle) * x - std::sin(angle) * y;
                r.cols[std::size_t(c) * f.d + 1] = std::sin(angle) * x + std::cos(angle) * y;
            }
            db.push_back(std::abs(r.entry(0, 0) * r.entry(1, 1) - r.entry(1, 0) * r.entry(0, 1)));
        }
        check(oracle::ks_two_sample_p(da, db) > 0.01, "minor determinant rotation-invariant (KS)");
    }

    // sw basics
    {
        auto mu = random_cloud(3, 15, 41);
        auto est = sw(mu, mu, 1.0, 64, 7);
        check_near(est.value, 0.0, 0.0, "sw of identical measures is exactly 0");

        auto a = make_discrete({{0, 0}}, {1});
        auto b = make_discrete({{1, 0}}, {1});
        auto e = sw(a, b, 1.0, 20000, 17);
        double want = oracle::simpson([](double t) { return std::abs(std::cos(t)) / (2 * kPi); },
                                      0.0, 2 * kPi, 20000);
        check_near(want, 2.0 / kPi, 1e-10, "quadrature oracle equals 2/pi");
        check(std::abs(e.value - want) <= 3.0 * e.std_error, "dirac pair sw within 3 sigma of 2/pi");
        check_throws([&] { sw(a, random_cloud(3, 4, 1), 1.0, 8, 1); }, "dimension mismatch");
    }

    // determinism and per-direction domination
    {
        auto mu = random_cloud(3, 12, 51);
        auto nu = random_cloud(3, 14, 52);
        auto e1 = sw(mu, nu, 1.0, 128, 99);
        auto e2 = sw(mu, nu, 1.0, 128, 99);
        check(e1.value == e2.value && e1.std_error == e2.std_error, "identical seeds bitwise equal");
        double ambient = w1_exact(mu, nu).cost;
        auto dirs = sample_sphere(3, 128, 99);
        bool dominated = true;
        for (const auto& th : dirs)
            dominated = dominated &&
                        w1_cdf(project_1d(mu, th), project_1d(nu, th)).value <= ambient + 1e-9;
        check(dominated, "every sampled direction respects the projection bound");
        check(e1.value <= ambient + 1e-9, "sw below ambient W1");
    }

    // rotation equivariance in law (fixed rotation, 3 sigma band)
    {
        auto mu = random_cloud(2, 18, 61);
        auto nu = random_cloud(2, 16, 62);
        double angle = 1.1517;
        auto rotate = [&](const DiscreteMeasure& m) {
            std::vector<std::vector<double>> pts;
            for (std::size_t i = 0; i < m.size(); ++i) {
                double x = m.point(i)[0], y = m.point(i)[1];
                pts.push_back({std::cos(angle) * x - std::sin(angle) * y,
                               std::sin(angle) * x + std::cos(angle) * y});
            }
            return make_discrete(pts, m.weights());
        };
        auto e = sw(mu, nu, 1.0, 3000, 5);
        auto er = sw(rotate(mu), rotate(nu), 1.0, 3000, 6);
        double sigma = std::sqrt(e.std_error * e.std_error + er.std_error * er.std_error);
        check(std::abs(e.value - er.value) <= 3.0 * sigma, "rotation equivariance within 3 sigma");
    }

    // msw
    {
        auto mu = random_cloud(3, 10, 71);
        check_near(msw(mu, mu, 32, 8, 3).value, 0.0, 0.0, "msw of identical measures");
        auto a = make_discrete({{0, 0}}, {1});
        auto b = make_discrete({{1, 0}}, {1});
        auto e = msw(a, b, 64, 80, 5);
        check_near(e.value, 1.0, 1e-6, "dirac pair msw reaches 1 after refinement");
        auto swe = sw(a, b, 1.0, 500, 5);
        check(e.value >= swe.value - 3.0 * swe.std_error, "max dominates mean");
    }

    // sw_k consistency and per-sample monotonicity
    {
        auto mu = random_cloud(3, 12, 81);
        auto nu = random_cloud(3, 11, 82);
        check_near(sw_k(mu, nu, 1, 32, 9).value, sw(mu, nu, 1.0, 32, 9).value, 1e-9,
                   "k=1 equals sw on shared directions");
        check_near(sw_k(mu, mu, 2, 16, 9).value, 0.0, 0.0, "identical measures");

        int d = 4;
        auto mu4 = random_cloud(d, 13, 83);
        auto nu4 = random_cloud(d, 12, 84);
        double ambient = w1_exact(mu4, nu4).cost;
        bool chain = true;
        for (int k = 2; k <= 3; ++k) {
            auto frames = sample_grassmannian(d, k, 25, 90 + k);
            auto g = substream(91, "nested-dir", k);
            for (const auto& f : frames) {
                auto pm = project_frame(mu4, f);
                auto pn = project_frame(nu4, f);
                double plane = w1_exact(pm, pn).cost;
                std::vector<double> u(k);
                double un = 0.0;
                for (int c = 0; c < k; ++c) {
                    u[c] = g.gaussian();
                    un += u[c] * u[c];
                }
                un = std::sqrt(un);
                std::vector<double> theta(d, 0.0);
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < k; ++c) theta[r] += f.entry(r, c) * u[c] / un;
                double line = w1_cdf(project_1d(mu4, theta), project_1d(nu4, theta)).value;
                chain = chain && line <= plane + 1e-9 && plane <= ambient + 1e-9;
            }
        }
        check(chain, "nested line <= plane <= ambient chain");
    }

    // empirical_sw
    {
        auto a = make_discrete({{0, 0}}, {1});
        auto b = make_discrete({{1, 0}}, {1});
        check_near(empirical_sw(a, b, {{1, 0}}), 1.0, 1e-15, "single direction");
        check_near(empirical_sw(a, b, {{1, 0}, {0, 1}}), 0.5, 1e-15, "two orthogonal directions");
        check_throws([&] { empirical_sw(a, b, {{0.5, 0.5}}); }, "non-unit direction rejected");
    }

    // quantification error
    {
        auto ref = sample_sphere(3, 300, 123);
        check_near(quantification_error(ref, 300, 123), 0.0, 1e-12,
                   "reference against itself is 0");

        std::vector<std::vector<double>> single = {{1.0, 0.0}};
        double est = quantification_error(single, 4096, 7, SphereReference::grid);
        check_near(est, 4.0 / kPi, 3e-3, "single direction mean chord distance");

        std::vector<double> ns = {4, 8, 16, 32, 64};
        std::vector<double> deltas;
        bool pointwise = true;
        for (double nd : ns) {
            int N = int(nd);
            std::vector<std::vector<double>> dirs;
            for (int i = 0; i < N; ++i) {
                double ang = 2 * kPi * i / N;
                dirs.push_back({std::cos(ang), std::sin(ang)});
            }
            double delta = quantification_error(dirs, 4096, 7, SphereReference::grid);
            double exact = (4.0 * N / kPi) * (1.0 - std::cos(kPi / (2.0 * N)));
            pointwise = pointwise && std::abs(delta - exact) <= 2e-3 + 0.01 * exact;
            deltas.push_back(delta);
        }
        check(pointwise, "circle estimates match the analytic nearest-arc transport");
        auto fit = fit_loglog(ns, deltas);
        check_in(fit.slope, -1.15, -0.85, "equally spaced direction error decays like 1/N");
    }

    // corollary bound formula
    {
        double limit = corollary_bound(0.9999999999, 1.0, 1.0, 1.0, 3);
        check_near(limit, 1.0, 1e-4, "log term vanishes as sw1 approaches m_alpha");
        double frozen = 1e-3 + std::pow(2.0, 1.0 / 3.0) * 0.1 *
                                   std::pow(std::log(1000.0), 2.0 / 3.0);
        check_near(corollary_bound(1e-3, 1.0, 1.0, 1.0, 3), frozen, 1e-12, "d=3 spot value");
        check_near(frozen, 0.45798431506547066, 1e-12, "frozen spot value cross-check");
        bool monotone = true;
        double prev = corollary_bound(1e-3, 0.25, 1.0, 1.0, 3);
        for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            double cur = corollary_bound(1e-3, alpha, 1.0, 1.0, 3);
            monotone = monotone && cur <= prev + 1e-12;
            prev = cur;
        }
        check(monotone, "bound nonincreasing in alpha");
        check_throws([] { corollary_bound(2.0, 1.0, 1.0, 1.0, 3); }, "sw1 > m_alpha rejected");
        check_throws([] { corollary_bound(0.0, 1.0, 1.0, 1.0, 3); }, "sw1 = 0 rejected");
    }

    return testutil::summary("test_slicing");
}
