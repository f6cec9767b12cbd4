#include "sot/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sot/ot1d.hpp"
#include "sot/rng.hpp"

namespace sot {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double MomentWeight::eval(double s) const { return legendre_eval(coeffs, s); }

MomentWeight build_weight(int d) {
    if (d < 2) throw std::invalid_argument("build_weight: need d >= 2");
    const int n = d + 2;  // moments 0..d+1, degree <= d+1
    const auto& gl = gauss_legendre(n + 8);
    std::vector<std::vector<double>> moment(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q)
                acc += gl.weights[q] * std::pow(gl.nodes[q], k) * legendre_p(j, gl.nodes[q]);
            moment[k][j] = acc;
        }
    }
    std::vector<double> rhs(n, 0.0);
    rhs[0] = 1.0;
    MomentWeight g;
    g.coeffs = solve_dense(moment, rhs);
    g.degree = d + 1;
    // |s| has a kink at 0: split so each half is a polynomial integral
    const auto& half = gauss_legendre(d + 6);
    double acc = 0.0;
    for (std::size_t q = 0; q < half.nodes.size(); ++q) {
        double s = 0.5 * (half.nodes[q] + 1.0);  // (0,1)
        double w = 0.5 * half.weights[q];
        acc += w * s * (g.eval(s) + g.eval(-s));
    }
    g.abs_first_moment = acc;
    if (std::abs(g.abs_first_moment) <= 1e-6)
        throw std::runtime_error("build_weight: |s|-moment degenerated");
    return g;
}

CounterexampleFamily CounterexampleFamily::make(int d, int cache_points) {
    if (d < 3) throw std::invalid_argument("counterexample family: needs d >= 3");
    if (cache_points < 64) cache_points = 64;
    CounterexampleFamily fam;
    fam.d_ = d;
    fam.g_ = build_weight(d);
    fam.f_exp_ = 1.5 * d;
    fam.beta_a_ = fam.f_exp_ + 1.0;
    // 1 / int_{-1}^{1} (1-t^2)^alpha dt = 1 / (2^{2a-1} B(a,a)),  a = alpha+1
    fam.f_norm_ = std::exp(-((2.0 * fam.beta_a_ - 1.0) * std::log(2.0) +
                             log_beta(fam.beta_a_, fam.beta_a_)));
    const int m = cache_points;
    fam.cache_h_ = 2.0 / double(m);
    fam.cache_f_.resize(m + 1);
    fam.cache_fp_.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        double t = -1.0 + fam.cache_h_ * double(i);
        fam.cache_f_[i] = incomplete_beta(fam.beta_a_, fam.beta_a_, 0.5 * (1.0 + t));
        fam.cache_fp_[i] = fam.density(t);
    }
    fam.cache_f_[0] = 0.0;
    fam.cache_f_[m] = 1.0;
    return fam;
}

double CounterexampleFamily::density(double t) const {
    double u = 1.0 - t * t;
    if (u <= 0.0) return 0.0;
    return f_norm_ * std::pow(u, f_exp_);
}

double CounterexampleFamily::cdf(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return incomplete_beta(beta_a_, beta_a_, 0.5 * (1.0 + t));
}

double CounterexampleFamily::cdf_fast(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double x = (t + 1.0) / cache_h_;
    int i = int(x);
    if (i >= int(cache_f_.size()) - 1) i = int(cache_f_.size()) - 2;
    double u = x - double(i);
    double h = cache_h_;
    double f0 = cache_f_[i], f1 = cache_f_[i + 1];
    double d0 = cache_fp_[i] * h, d1 = cache_fp_[i + 1] * h;
    double u2 = u * u, u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * f0 + (u3 - 2.0 * u2 + u) * d0 +
           (-2.0 * u3 + 3.0 * u2) * f1 + (u3 - u2) * d1;
}

Analytic1DMeasure CounterexampleFamily::analytic_f() const {
    Analytic1DMeasure m;
    m.density = [this](double t) { return density(t); };
    m.cdf = [this](double t) { return cdf(t); };
    m.support_lo = -1.0;
    m.support_hi = 1.0;
    return m;
}

Analytic1DMeasure CounterexampleFamily::analytic_f_theta(double Theta) const {
    double c = std::cos(Theta);
    if (std::abs(c) < 1e-12)
        throw std::invalid_argument("analytic_f_theta: degenerate at cos Theta = 0");
    Analytic1DMeasure m;
    double ac = std::abs(c);
    m.density = [this, c, ac](double t) { return density(t / c) / ac; };
    m.cdf = [this, Theta](double t) { return projected_cdf(*this, Theta, t); };
    m.support_lo = -ac;
    m.support_hi = ac;
    return m;
}

double projected_cdf(const CounterexampleFamily& fam, double Theta, double t) {
    double c = std::cos(Theta);
    // cos of a float near pi/2 lands at ~1e-17, so test against roundoff
    if (std::abs(c) < 1e-12)
        throw std::invalid_argument("projected_cdf: direction orthogonal to the disk plane");
    return c > 0.0 ? fam.cdf(t / c) : 1.0 - fam.cdf(t / c);
}

QuadSpec QuadSpec::refined() const {
    QuadSpec r = *this;
    r.outer_nodes *= 2;
    r.outer_panels *= 2;
    r.vertical_panels *= 2;
    r.outer_tol *= 0.1;
    r.t_nodes *= 2;
    r.t_panels *= 2;
    r.t_tol *= 0.1;
    r.max_depth += 2;
    r.s_nodes *= 2;
    r.cache_points *= 2;
    return r;
}

namespace {

// W1 between the projection at angle Theta and its shifted mixture, as the L1
// norm of the signed CDF mixture over the widened support. Near the vertical
// direction the mixture terms are near-steps of width ~|cos Theta| centered
// at the shifts, so those centers seed the panel edges.
double w1_at_angle(const CounterexampleFamily& fam, double eps, double Theta,
                   const std::vector<double>& s_nodes, const std::vector<double>& s_coefs,
                   const QuadSpec& quad) {
    const double c = std::cos(Theta);
    const double z = std::sin(Theta);
    const double lim = std::abs(c) + eps;
    auto integrand = [&](double t) {
        double base = fam.cdf_fast(t / c);
        double acc = 0.0;
        for (std::size_t q = 0; q < s_nodes.size(); ++q)
            acc += s_coefs[q] * fam.cdf_fast((t + eps * z * s_nodes[q]) / c);
        return std::abs(acc - base);
    };
    std::vector<double> edges;
    for (int i = 0; i <= quad.t_panels; ++i)
        edges.push_back(-lim + 2.0 * lim * double(i) / double(quad.t_panels));
    if (std::abs(c) < 0.5 * eps) {
        edges.push_back(0.0);
        for (double s : s_nodes) {
            double a = -eps * z * s;
            if (a > -lim && a < lim) edges.push_back(a);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // cancellation noise floor: the signed mixture is evaluated from O(1)
    // CDF values, so differences below ~1e-15 are roundoff, not signal
    double coef_scale = 1.0;
    for (double w : s_coefs) coef_scale += std::abs(w);
    const double noise_floor = 1e-15 * coef_scale * (1.0 + 2.0 * lim);
    return integrate_adaptive_edges(integrand, edges, quad.t_nodes, quad.t_tol, quad.max_depth,
                                    noise_floor);
}

ZoneSplit zones_impl(const CounterexampleFamily& fam, double eps,
                     const std::vector<double>& s_nodes, const std::vector<double>& s_coefs,
                     const QuadSpec& quad) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("sw1_mu_mueps: need 0 < eps < 1");
    const int d = fam.d();
    const double theta_split = std::acos(eps);  // |cos| = eps boundary
    auto weighted = [&](double Theta) {
        return w1_at_angle(fam, eps, Theta, s_nodes, s_coefs, quad) *
               std::pow(std::cos(Theta), double(d - 2));
    };
    double generic = integrate_adaptive(weighted, -theta_split, theta_split, quad.outer_nodes,
                                        quad.outer_panels, quad.outer_tol, quad.max_depth);
    double cap_hi = integrate_adaptive(weighted, theta_split, 0.5 * kPi, quad.outer_nodes,
                                       quad.vertical_panels, quad.outer_tol, quad.max_depth);
    double cap_lo = integrate_adaptive(weighted, -0.5 * kPi, -theta_split, quad.outer_nodes,
                                       quad.vertical_panels, quad.outer_tol, quad.max_depth);
    const double zd = std::sqrt(kPi) * std::exp(std::lgamma(0.5 * (d - 1)) - std::lgamma(0.5 * d));
    ZoneSplit out;
    out.generic = generic / zd;
    out.vertical = (cap_hi + cap_lo) / zd;
    out.total = out.generic + out.vertical;
    return out;
}

void gauss_kernel(const CounterexampleFamily& fam, int n, std::vector<double>& nodes,
                  std::vector<double>& coefs) {
    const auto& gl = gauss_legendre(n);
    nodes = gl.nodes;
    coefs.resize(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q)
        coefs[q] = gl.weights[q] * fam.g().eval(nodes[q]);
}

}  // namespace

ZoneSplit sw1_mu_mueps_zones(const CounterexampleFamily& fam, double eps, const QuadSpec& quad) {
    std::vector<double> nodes, coefs;
    gauss_kernel(fam, quad.s_nodes, nodes, coefs);
    return zones_impl(fam, eps, nodes, coefs, quad);
}

double sw1_mu_mueps(const CounterexampleFamily& fam, double eps, const QuadSpec& quad) {
    return sw1_mu_mueps_zones(fam, eps, quad).total;
}

double sw1_mu_mueps_kernel(const CounterexampleFamily& fam, double eps,
                           const std::vector<double>& s_nodes, const std::vector<double>& s_coefs,
                           const QuadSpec& quad) {
    if (s_nodes.size() != s_coefs.size() || s_nodes.empty())
        throw std::invalid_argument("sw1_mu_mueps_kernel: bad kernel");
    return zones_impl(fam, eps, s_nodes, s_coefs, quad).total;
}

double w1_projected_at_angle(const CounterexampleFamily& fam, double eps, double Theta,
                             const QuadSpec& quad) {
    std::vector<double> nodes, coefs;
    gauss_kernel(fam, quad.s_nodes, nodes, coefs);
    return w1_at_angle(fam, eps, Theta, nodes, coefs, quad);
}

double inner_signed_integral(const CounterexampleFamily& fam, double eps, double Theta, double t,
                             int s_nodes) {
    const double c = std::cos(Theta);
    if (c == 0.0) throw std::invalid_argument("inner_signed_integral: degenerate angle");
    const double z = std::sin(Theta);
    const auto& gl = gauss_legendre(s_nodes);
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
        acc += gl.weights[q] * fam.g().eval(gl.nodes[q]) *
               (fam.cdf((t + eps * z * gl.nodes[q]) / c) - fam.cdf(t / c));
    return acc;
}

double w1_lower_bound(const CounterexampleFamily& fam, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("w1_lower_bound: need 0 < eps < 1");
    return eps * std::abs(fam.g().abs_first_moment);
}

double m_eps(const CounterexampleFamily& fam) {
    auto gneg = [&](double s) { return std::max(-fam.g().eval(s), 0.0); };
    return 1.0 + integrate_adaptive(gneg, -1.0, 1.0, 32, 16, 1e-10, 20);
}

ScalingFit fit_scaling(const std::vector<double>& eps_grid, const std::vector<double>& values) {
    auto fit = fit_loglog(eps_grid, values);
    ScalingFit out;
    out.eps_grid = eps_grid;
    out.values = values;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.max_residual = fit.max_residual;
    return out;
}

ScalingScan scaling_scan(const CounterexampleFamily& fam, const std::vector<double>& eps_grid,
                         const QuadSpec& quad) {
    if (eps_grid.empty()) throw std::invalid_argument("scaling_scan: empty grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 0.5))
            throw std::invalid_argument("scaling_scan: eps must lie in (0, 0.5]");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("scaling_scan: eps grid must be strictly decreasing");
    }
    const double mass = m_eps(fam);
    ScalingScan scan;
    scan.rows.resize(eps_grid.size());
    std::vector<double> nodes, coefs;
    gauss_kernel(fam, quad.s_nodes, nodes, coefs);
    parallel_for(eps_grid.size(), [&](std::size_t i) {
        ZoneSplit zs = zones_impl(fam, eps_grid[i], nodes, coefs, quad);
        ScanRow row;
        row.eps = eps_grid[i];
        row.sw1 = zs.total;
        row.sw1_vertical = zs.vertical;
        row.sw1_generic = zs.generic;
        row.w1_lower = w1_lower_bound(fam, eps_grid[i]);
        row.m_eps = mass;
        row.sw1_normalized = zs.total / mass;
        row.w1_normalized = row.w1_lower / mass;
        scan.rows[i] = row;
    });
    std::vector<double> sw_vals, w_vals, swn, wn;
    for (const auto& r : scan.rows) {
        sw_vals.push_back(r.sw1);
        w_vals.push_back(r.w1_lower);
        swn.push_back(r.sw1_normalized);
        wn.push_back(r.w1_normalized);
    }
    scan.sw_fit = fit_scaling(eps_grid, sw_vals);
    scan.w_fit = fit_scaling(eps_grid, w_vals);
    scan.sw_fit_normalized = fit_scaling(eps_grid, swn);
    scan.w_fit_normalized = fit_scaling(eps_grid, wn);
    return scan;
}

double gaussian_example_sw_closed_form(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("gaussian_example: need eps in (0, 1]");
    auto f = [eps](double a) {
        double ca = std::cos(a), sa = std::sin(a);
        return std::sqrt(ca * ca + eps * eps * sa * sa) - std::abs(ca);
    };
    double integral = integrate_adaptive(f, 0.0, 2.0 * kPi, 32, 16, 1e-12, 20);
    return expected_abs_normal() / (2.0 * kPi) * integral;
}

double gaussian_example_sw_quarter(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("gaussian_example: need eps in (0, 1]");
    auto f = [eps](double a) {
        double ca = std::cos(a), sa = std::sin(a);
        return std::sqrt(ca * ca + eps * eps * sa * sa) - std::abs(ca);
    };
    double integral = 4.0 * integrate_adaptive(f, 0.0, 0.5 * kPi, 32, 8, 1e-12, 20);
    return expected_abs_normal() / (2.0 * kPi) * integral;
}

double gaussian_example_w1(double eps) { return eps * expected_abs_normal(); }

SignedDiscreteMeasure discretize_family(const CounterexampleFamily& fam, double eps, int n_radial,
                                        int n_angular, int n_shift) {
    if (fam.d() != 3)
        throw std::invalid_argument("discretize_family: point-cloud form implemented for d=3");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("discretize_family: bad eps");
    const int d = fam.d();
    // ring masses: density (1-r^2)^{d+1} r dr on [0,1]
    const auto& glr = gauss_legendre(n_radial);
    std::vector<double> radii(n_radial), ring_mass(n_radial);
    double total = 0.0;
    for (int i = 0; i < n_radial; ++i) {
        double r = 0.5 * (glr.nodes[i] + 1.0);
        radii[i] = r;
        ring_mass[i] = glr.weights[i] * std::pow(1.0 - r * r, double(d + 1)) * r;
        total += ring_mass[i];
    }
    for (double& w : ring_mass) w /= total;

    const auto& gls = gauss_legendre(n_shift);
    std::vector<std::pair<std::vector<double>, double>> atoms;
    atoms.reserve(std::size_t(n_radial) * n_angular * (n_shift + 1));
    for (int i = 0; i < n_radial; ++i) {
        double offset = 2.0 * kPi * std::fmod(0.61803398874989484 * double(i), 1.0) / n_angular;
        double w_atom = ring_mass[i] / double(n_angular);
        for (int aidx = 0; aidx < n_angular; ++aidx) {
            double ang = 2.0 * kPi * double(aidx) / double(n_angular) + offset;
            double x = radii[i] * std::cos(ang), y = radii[i] * std::sin(ang);
            atoms.push_back({{x, y, 0.0}, w_atom});
            for (int q = 0; q < n_shift; ++q) {
                double gw = gls.weights[q] * fam.g().eval(gls.nodes[q]);
                atoms.push_back({{x, y, eps * gls.nodes[q]}, -w_atom * gw});
            }
        }
    }
    return signed_split(atoms);
}

}  // namespace sot
