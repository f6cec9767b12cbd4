#include "sot/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "sot/fft.hpp"
#include "sot/quadrature.hpp"

namespace sot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// q(u) * (1-u^2)^e with q in monomial coefficients; closed under d/du
struct PolyBumpForm {
    std::vector<double> q;
    int e = 0;

    double eval(double u) const {
        double acc = 0.0;
        for (std::size_t i = q.size(); i-- > 0;) acc = acc * u + q[i];
        double base = 1.0 - u * u;
        return base <= 0.0 ? 0.0 : acc * std::pow(base, double(e));
    }

    PolyBumpForm derivative() const {
        if (e < 1) throw std::invalid_argument("bump derivative order exceeds smoothness");
        // q'(u)(1-u^2) - 2 e u q(u), exponent drops by one
        std::vector<double> qp(q.size() > 1 ? q.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < q.size(); ++i) qp[i - 1] = double(i) * q[i];
        std::vector<double> out(std::max(q.size() + 1, qp.size() + 2), 0.0);
        for (std::size_t i = 0; i < qp.size(); ++i) {
            out[i] += qp[i];
            out[i + 2] -= qp[i];
        }
        for (std::size_t i = 0; i < q.size(); ++i) out[i + 1] -= 2.0 * double(e) * q[i];
        while (out.size() > 1 && out.back() == 0.0) out.pop_back();
        return {std::move(out), e - 1};
    }
};

}  // namespace

TestFunction1D bump_derivative_1d(int order, int k, double radius) {
    if (order < 1 || k < 0 || k > order - 1)
        throw std::invalid_argument("bump_derivative_1d: need 0 <= k <= order-1");
    if (!(radius > 0.0)) throw std::invalid_argument("bump_derivative_1d: bad radius");
    PolyBumpForm form{{1.0}, order};
    for (int i = 0; i < k; ++i) form = form.derivative();
    double scale = std::pow(radius, double(-k));
    TestFunction1D f;
    f.support_radius = radius;
    f.moment_order = k;
    f.evaluate = [form = std::move(form), radius, scale](double x) {
        return scale * form.eval(x / radius);
    };
    return f;
}

double BumpND::eval(std::span<const double> x) const {
    double u = 1.0;
    for (double c : x) u -= (c / radius_) * (c / radius_);
    return u <= 0.0 ? 0.0 : std::pow(u, double(order_));
}

double BumpND::partial(int j, std::span<const double> x) const {
    double u = 1.0;
    for (double c : x) u -= (c / radius_) * (c / radius_);
    if (u <= 0.0) return 0.0;
    return -2.0 * order_ * x[j] / (radius_ * radius_) * std::pow(u, double(order_ - 1));
}

double BumpND::second_partial(int i, int j, std::span<const double> x) const {
    double u = 1.0;
    for (double c : x) u -= (c / radius_) * (c / radius_);
    if (u <= 0.0) return 0.0;
    double r2 = radius_ * radius_;
    double term = 4.0 * order_ * (order_ - 1) * x[i] * x[j] / (r2 * r2) *
                  std::pow(u, double(order_ - 2));
    if (i == j) term += -2.0 * order_ / r2 * std::pow(u, double(order_ - 1));
    return term;
}

double radon_gaussian(std::span<const double> theta, double t) {
    double n2 = 0.0;
    for (double c : theta) n2 += c * c;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
        throw std::invalid_argument("radon_gaussian: direction is not unit length");
    return std::exp(-kPi * t * t);
}

double radon_gaussian_direct(int d, const std::vector<double>& theta, double t) {
    if (int(theta.size()) != d || (d != 2 && d != 3))
        throw std::invalid_argument("radon_gaussian_direct: d must be 2 or 3");
    // orthonormal basis of theta-perp by Gram-Schmidt over coordinate axes
    std::vector<std::vector<double>> basis;
    for (int axis = 0; axis < d && int(basis.size()) < d - 1; ++axis) {
        std::vector<double> v(d, 0.0);
        v[axis] = 1.0;
        double dt = 0.0;
        for (int c = 0; c < d; ++c) dt += v[c] * theta[c];
        for (int c = 0; c < d; ++c) v[c] -= dt * theta[c];
        for (const auto& b : basis) {
            double db = 0.0;
            for (int c = 0; c < d; ++c) db += v[c] * b[c];
            for (int c = 0; c < d; ++c) v[c] -= db * b[c];
        }
        double n2 = 0.0;
        for (double c : v) n2 += c * c;
        if (n2 > 1e-12) {
            double n = std::sqrt(n2);
            for (double& c : v) c /= n;
            basis.push_back(v);
        }
    }
    auto point_value = [&](double s1, double s2) {
        double n2 = 0.0;
        for (int c = 0; c < d; ++c) {
            double xc = t * theta[c] + s1 * basis[0][c] + (d == 3 ? s2 * basis[1][c] : 0.0);
            n2 += xc * xc;
        }
        return std::exp(-kPi * n2);
    };
    const double lim = 7.0;
    if (d == 2) return integrate_adaptive([&](double s) { return point_value(s, 0.0); }, -lim, lim,
                                          32, 8, 1e-12, 20);
    auto inner = [&](double s1) {
        return integrate_adaptive([&](double s2) { return point_value(s1, s2); }, -lim, lim, 32, 8,
                                  1e-11, 16);
    };
    return integrate_adaptive(inner, -lim, lim, 32, 8, 1e-11, 16);
}

namespace {

double hilbert_excised(const TestFunction1D& f, double t, double h, const HilbertOptions& opts) {
    const double r = f.support_radius;
    auto integrand = [&](double u) { return f.evaluate(u) / (t - u); };
    double acc = 0.0;
    if (t - h > -r)
        acc += integrate_adaptive(integrand, -r, t - h, opts.gl_nodes, opts.panels, opts.tol,
                                  opts.max_depth);
    if (t + h < r)
        acc += integrate_adaptive(integrand, t + h, r, opts.gl_nodes, opts.panels, opts.tol,
                                  opts.max_depth);
    return acc / kPi;
}

}  // namespace

double hilbert(const TestFunction1D& f, double t, const HilbertOptions& opts) {
    const double r = f.support_radius;
    if (std::abs(t) > r) {
        auto integrand = [&](double u) { return f.evaluate(u) / (t - u); };
        return integrate_adaptive(integrand, -r, r, opts.gl_nodes, opts.panels, opts.tol,
                                  opts.max_depth) /
               kPi;
    }
    double h = opts.excision_factor * r;
    double coarse = hilbert_excised(f, t, h, opts);
    double fine = hilbert_excised(f, t, 0.5 * h, opts);
    return 2.0 * fine - coarse;
}

GridFunction hilbert_fft_grid(const TestFunction1D& f, double half_length, int n) {
    if (!is_pow2(std::size_t(n))) throw std::invalid_argument("hilbert_fft_grid: n must be 2^k");
    GridFunction out;
    out.x0 = -half_length;
    out.dx = 2.0 * half_length / double(n);
    std::vector<std::complex<double>> buf(n);
    for (int i = 0; i < n; ++i) buf[i] = f.evaluate(out.x_at(i));
    fft(buf, false);
    for (int m = 0; m < n; ++m) {
        int freq = (m <= n / 2) ? m : m - n;
        if (freq == 0 || m == n / 2)
            buf[m] = 0.0;
        else
            buf[m] *= std::complex<double>(0.0, freq > 0 ? -1.0 : 1.0);
    }
    fft(buf, true);
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = buf[i].real();
    return out;
}

DecayFit hilbert_decay_check(int k, const std::vector<double>& t_grid, int bump_order) {
    TestFunction1D f = bump_derivative_1d(bump_order, k);
    DecayFit fit;
    for (double t : t_grid) {
        double v = std::abs(hilbert(f, t));
        if (v < 1e-250) {
            ++fit.trimmed;
            continue;
        }
        fit.grid.push_back(t);
        fit.values.push_back(v);
        fit.sup_weighted = std::max(fit.sup_weighted,
                                    v * (1.0 + std::pow(std::abs(t), double(k + 1))));
    }
    if (fit.grid.size() < 2) throw std::runtime_error("hilbert_decay_check: grid underflowed");
    fit.slope = fit_loglog(fit.grid, fit.values).slope;
    return fit;
}

namespace {

double riesz_normalization(int k) {
    return std::exp(std::lgamma(0.5 * (k + 1)) - 0.5 * (k + 1) * std::log(kPi));
}

// antipodal-paired radial integral along a fixed unit direction
double riesz_ray(const TestFunctionND& f, std::span<const double> x,
                 std::span<const double> omega, const RieszOptions& opts) {
    double xn = 0.0;
    for (double c : x) xn += c * c;
    double rho_max = std::sqrt(xn) + f.support_radius;
    std::vector<double> plus(x.size()), minus(x.size());
    auto integrand = [&](double rho) {
        for (std::size_t c = 0; c < x.size(); ++c) {
            plus[c] = x[c] + rho * omega[c];
            minus[c] = x[c] - rho * omega[c];
        }
        return (f.evaluate(minus) - f.evaluate(plus)) / rho;
    };
    return integrate_adaptive(integrand, 0.0, rho_max, opts.radial_nodes, opts.radial_panels,
                              opts.tol, opts.max_depth);
}

double riesz_far_field(const TestFunctionND& f, int j, std::span<const double> x,
                       const RieszOptions& opts) {
    const int k = f.dim;
    const double r = f.support_radius;
    const double ck = riesz_normalization(k);
    auto kernel = [&](std::span<const double> y) {
        double d2 = 0.0;
        for (int c = 0; c < k; ++c) d2 += (x[c] - y[c]) * (x[c] - y[c]);
        return (x[j] - y[j]) / std::pow(std::sqrt(d2), double(k + 1)) * f.evaluate(y);
    };
    if (k == 1) {
        return ck * integrate_adaptive([&](double y) { return kernel(std::span(&y, 1)); }, -r, r,
                                       opts.radial_nodes, opts.radial_panels, opts.tol,
                                       opts.max_depth);
    }
    if (k == 2) {
        auto inner = [&](double y1) {
            return integrate_adaptive(
                [&](double y2) {
                    double y[2] = {y1, y2};
                    return kernel(y);
                },
                -r, r, opts.radial_nodes, 4, opts.tol, opts.max_depth);
        };
        return ck * integrate_adaptive(inner, -r, r, opts.radial_nodes, 4, opts.tol, opts.max_depth);
    }
    auto inner2 = [&](double y1) {
        auto inner1 = [&](double y2) {
            return integrate_adaptive(
                [&](double y3) {
                    double y[3] = {y1, y2, y3};
                    return kernel(y);
                },
                -r, r, 16, 2, opts.tol, opts.max_depth);
        };
        return integrate_adaptive(inner1, -r, r, 16, 2, opts.tol, opts.max_depth);
    };
    return ck * integrate_adaptive(inner2, -r, r, 16, 2, opts.tol, opts.max_depth);
}

}  // namespace

double riesz(const TestFunctionND& f, int j, std::span<const double> x, const RieszOptions& opts) {
    const int k = f.dim;
    if (k < 1 || k > 3) throw std::invalid_argument("riesz: k must be 1, 2 or 3");
    if (j < 0 || j >= k) throw std::invalid_argument("riesz: component out of range");
    if (int(x.size()) != k) throw std::invalid_argument("riesz: point dimension mismatch");
    double xn = 0.0;
    for (double c : x) xn += c * c;
    xn = std::sqrt(xn);
    if (xn > 1.5 * f.support_radius) return riesz_far_field(f, j, x, opts);

    const double ck = riesz_normalization(k);
    if (k == 1) {
        // the two antipodal rays contribute equally
        double omega = 1.0;
        return ck * riesz_ray(f, x, std::span(&omega, 1), opts);
    }
    if (k == 2) {
        // trapezoid over the circle is spectrally accurate for this kernel
        const int na = opts.angular_nodes;
        double acc = 0.0;
        for (int a = 0; a < na; ++a) {
            double ang = 2.0 * kPi * (a + 0.5) / na;
            double omega[2] = {std::cos(ang), std::sin(ang)};
            acc += omega[j] * riesz_ray(f, x, omega, opts);
        }
        return 0.5 * ck * acc * (2.0 * kPi / na);
    }
    // k == 3: product rule, GL in the polar component x trapezoid azimuth
    const int nz = std::max(8, opts.angular_nodes / 4);
    const int na = std::max(8, opts.angular_nodes / 2);
    const auto& gl = gauss_legendre(nz);
    double acc = 0.0;
    for (int zi = 0; zi < nz; ++zi) {
        double z = gl.nodes[zi];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        double inner = 0.0;
        for (int a = 0; a < na; ++a) {
            double ang = 2.0 * kPi * (a + 0.5) / na;
            double omega[3] = {s * std::cos(ang), s * std::sin(ang), z};
            inner += omega[j] * riesz_ray(f, x, omega, opts);
        }
        acc += gl.weights[zi] * inner * (2.0 * kPi / na);
    }
    return 0.5 * ck * acc;
}

DecayFit riesz_decay_check(int k, const std::vector<double>& x_norms, bool zero_mean,
                           int bump_order) {
    if (k < 1 || k > 3) throw std::invalid_argument("riesz_decay_check: k must be 1, 2 or 3");
    BumpND bump(k, bump_order);
    TestFunctionND f;
    f.dim = k;
    f.support_radius = bump.radius();
    if (zero_mean)
        f.evaluate = [bump](std::span<const double> x) { return bump.partial(0, x); };
    else
        f.evaluate = [bump](std::span<const double> x) { return bump.eval(x); };

    std::vector<double> w(k, 0.0);
    if (k == 1) w = {1.0};
    if (k == 2) w = {0.8, 0.6};
    if (k == 3) w = {0.72, 0.54, 0.43629091872559816};
    double wn = 0.0;
    for (double c : w) wn += c * c;
    wn = std::sqrt(wn);
    for (double& c : w) c /= wn;

    DecayFit fit;
    std::vector<double> x(k);
    for (double r : x_norms) {
        for (int c = 0; c < k; ++c) x[c] = r * w[c];
        double v = std::abs(riesz(f, 0, x));
        if (v < 1e-250) {
            ++fit.trimmed;
            continue;
        }
        fit.grid.push_back(r);
        fit.values.push_back(v);
        fit.sup_weighted =
            std::max(fit.sup_weighted, v * (1.0 + std::pow(r, double(k + 1))));
    }
    if (fit.grid.size() < 2) throw std::runtime_error("riesz_decay_check: grid underflowed");
    fit.slope = fit_loglog(fit.grid, fit.values).slope;
    return fit;
}

RepresentationResult representation_check(int d, const std::vector<double>& x_norms,
                                          int sphere_nodes) {
    if (d != 2 && d != 3) throw std::invalid_argument("representation_check: d must be 2 or 3");
    RepresentationResult res;
    if (d == 3) {
        const double c3 = -1.0 / (8.0 * kPi * kPi);
        auto profile = [&](double t) {
            return c3 * (4.0 * kPi * kPi * t * t - 2.0 * kPi) * std::exp(-kPi * t * t);
        };
        const auto& gl = gauss_legendre(sphere_nodes);
        const int na = sphere_nodes;
        for (double r : x_norms) {
            double acc = 0.0;
            for (int zi = 0; zi < sphere_nodes; ++zi) {
                double z = gl.nodes[zi];
                double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                double inner = 0.0;
                for (int a = 0; a < na; ++a) {
                    double ang = 2.0 * kPi * (a + 0.5) / na;
                    double dot = r * s * std::cos(ang);  // x = r e_1
                    inner += profile(dot);
                }
                acc += gl.weights[zi] * inner * (2.0 * kPi / na);
            }
            res.errors.push_back(std::abs(acc - std::exp(-kPi * r * r)));
        }
        res.resolved_sign = 0;
    } else {
        TestFunction1D gauss;
        gauss.support_radius = 7.0;  // exp(-pi t^2) < 1e-66 beyond; effectively compact
        gauss.moment_order = 0;
        gauss.evaluate = [](double t) { return std::exp(-kPi * t * t); };
        auto hg_prime = [&](double t) {
            const double delta = 1e-4;
            return (hilbert(gauss, t + delta) - hilbert(gauss, t - delta)) / (2.0 * delta);
        };
        auto recon = [&](double r, double sign) {
            const int na = sphere_nodes;
            double acc = 0.0;
            for (int a = 0; a < na; ++a) {
                double ang = 2.0 * kPi * (a + 0.5) / na;
                acc += hg_prime(r * std::cos(ang));
            }
            return sign / (4.0 * kPi) * acc * (2.0 * kPi / na);
        };
        double plus = recon(0.0, 1.0);
        res.resolved_sign = std::abs(plus - 1.0) < std::abs(-plus - 1.0) ? 1 : -1;
        for (double r : x_norms) {
            double v = recon(r, double(res.resolved_sign));
            res.errors.push_back(std::abs(v - std::exp(-kPi * r * r)));
        }
    }
    for (double e : res.errors) res.max_error = std::max(res.max_error, e);
    return res;
}

GridFunction half_laplacian_1d_grid(const std::function<double(double)>& g, double half_length,
                                    int n) {
    if (!is_pow2(std::size_t(n))) throw std::invalid_argument("half_laplacian: n must be 2^k");
    GridFunction out;
    out.x0 = -half_length;
    out.dx = 2.0 * half_length / double(n);
    std::vector<std::complex<double>> buf(n);
    for (int i = 0; i < n; ++i) buf[i] = g(out.x_at(i));
    fft(buf, false);
    for (int m = 0; m < n; ++m) {
        int freq = (m <= n / 2) ? m : m - n;
        buf[m] *= std::abs(double(freq)) / (2.0 * half_length);
    }
    fft(buf, true);
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = buf[i].real();
    return out;
}

std::vector<double> half_laplacian_2d_at(const std::function<double(double, double)>& g,
                                         double half_length, int n,
                                         const std::vector<std::pair<double, double>>& points) {
    if (!is_pow2(std::size_t(n))) throw std::invalid_argument("half_laplacian: n must be 2^k");
    const double dx = 2.0 * half_length / double(n);
    std::vector<std::vector<std::complex<double>>> grid(n, std::vector<std::complex<double>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid[i][j] = g(-half_length + dx * i, -half_length + dx * j);
    // row-column transform
    for (int i = 0; i < n; ++i) fft(grid[i], false);
    std::vector<std::complex<double>> col(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = grid[i][j];
        fft(col, false);
        for (int i = 0; i < n; ++i) grid[i][j] = col[i];
    }
    for (int i = 0; i < n; ++i) {
        int fi = (i <= n / 2) ? i : i - n;
        for (int j = 0; j < n; ++j) {
            int fj = (j <= n / 2) ? j : j - n;
            double y1 = fi / (2.0 * half_length), y2 = fj / (2.0 * half_length);
            grid[i][j] *= std::sqrt(y1 * y1 + y2 * y2);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = grid[i][j];
        fft(col, true);
        for (int i = 0; i < n; ++i) grid[i][j] = col[i];
    }
    for (int i = 0; i < n; ++i) fft(grid[i], true);
    std::vector<double> out;
    out.reserve(points.size());
    for (auto [x, y] : points) {
        int i = int(std::llround((x + half_length) / dx));
        int j = int(std::llround((y + half_length) / dx));
        if (i < 0 || i >= n || j < 0 || j >= n ||
            std::abs((-half_length + dx * i) - x) > 1e-9 ||
            std::abs((-half_length + dx * j) - y) > 1e-9)
            throw std::invalid_argument("half_laplacian_2d_at: points must be grid-aligned");
        out.push_back(grid[i][j].real());
    }
    return out;
}

double riesz_decomposition_check(int k) {
    if (k == 1) {
        // g = b', zero mean; compare |y|-multiplier route against (1/2pi) H g'
        const int order = 8;
        TestFunction1D g1 = bump_derivative_1d(order, 1);
        TestFunction1D g2 = bump_derivative_1d(order, 2);
        auto grid = half_laplacian_1d_grid(g1.evaluate, 64.0, 1 << 15);
        double worst = 0.0;
        for (double x : {0.0, 0.25, -0.5, 0.5, 0.75, -0.25}) {
            std::size_t idx = std::size_t(std::llround((x - grid.x0) / grid.dx));
            double lhs = grid.values[idx];
            // (-i sgn y)(2 pi i y) = 2 pi |y|, so (1/2pi) H(g') carries |y|
            double rhs = hilbert(g2, grid.x_at(idx)) / (2.0 * kPi);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return worst;
    }
    if (k == 2) {
        const int order = 8;
        BumpND bump(2, order);
        auto g = [&](double x, double y) {
            double p[2] = {x, y};
            return bump.partial(0, p);
        };
        const double L = 32.0;
        const int n = 2048;
        std::vector<std::pair<double, double>> pts = {
            {0.0, 0.0}, {0.25, 0.0}, {0.0, 0.25}, {-0.5, 0.25}, {0.5, -0.25}, {0.25, 0.5}};
        auto lhs = half_laplacian_2d_at(g, L, n, pts);
        TestFunctionND d1, d2;
        d1.dim = d2.dim = 2;
        d1.support_radius = d2.support_radius = bump.radius();
        d1.evaluate = [&bump](std::span<const double> x) { return bump.second_partial(0, 0, x); };
        d2.evaluate = [&bump](std::span<const double> x) { return bump.second_partial(1, 0, x); };
        double worst = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double x[2] = {pts[p].first, pts[p].second};
            double rhs = (riesz(d1, 0, x) + riesz(d2, 1, x)) / (2.0 * kPi);
            worst = std::max(worst, std::abs(lhs[p] - rhs));
        }
        return worst;
    }
    throw std::invalid_argument("riesz_decomposition_check: k must be 1 or 2");
}

double fuglede_constant(int d, int k) {
    if (k < 1 || k >= d) throw std::invalid_argument("fuglede_constant: need 1 <= k < d");
    return std::exp(0.5 * (d - k) * std::log(kPi) + std::lgamma(0.5 * k) - std::lgamma(0.5 * d));
}

}  // namespace sot
