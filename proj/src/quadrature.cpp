#include "sot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace sot {

static GaussLegendre compute_gl(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        gl.weights[i] = gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return gl;
}

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const auto& gl = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return half * acc;
}

double integrate_adaptive_edges(const std::function<double(double)>& f,
                                const std::vector<double>& edges, int n, double rel_tol,
                                int max_depth, double abs_tol) {
    if (edges.size() < 2) throw std::invalid_argument("integrate_adaptive_edges: need >= 2 edges");
    struct Panel {
        double a, b, value;
        int depth;
    };
    const double span = std::abs(edges.back() - edges.front());
    std::vector<Panel> work;
    double pending_abs = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double v = integrate_gl(f, edges[i], edges[i + 1], n);
        work.push_back({edges[i], edges[i + 1], v, 0});
        pending_abs += std::abs(v);
    }
    // tolerance scale is the accumulated |panel| mass, so integrals that
    // cancel to ~0 are still judged against the integrand's magnitude
    double resolved = 0.0, resolved_abs = 0.0;
    while (!work.empty()) {
        Panel p = work.back();
        work.pop_back();
        pending_abs -= std::abs(p.value);
        double m = 0.5 * (p.a + p.b);
        double v1 = integrate_gl(f, p.a, m, n);
        double v2 = integrate_gl(f, m, p.b, n);
        double err = std::abs(v1 + v2 - p.value);
        double scale = pending_abs + resolved_abs + std::abs(v1) + std::abs(v2) + 1e-300;
        if (err <= rel_tol * scale + abs_tol || (p.b - p.a) < 1e-14 * (span + 1.0)) {
            resolved += v1 + v2;
            resolved_abs += std::abs(v1) + std::abs(v2);
            continue;
        }
        if (p.depth >= max_depth)
            throw QuadratureError("integrate_adaptive: refinement budget exceeded");
        work.push_back({p.a, m, v1, p.depth + 1});
        work.push_back({m, p.b, v2, p.depth + 1});
        pending_abs += std::abs(v1) + std::abs(v2);
    }
    return resolved;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          int n, int panels, double rel_tol, int max_depth, double abs_tol) {
    std::vector<double> edges(panels + 1);
    for (int i = 0; i <= panels; ++i) edges[i] = a + (b - a) * double(i) / double(panels);
    edges.back() = b;
    return integrate_adaptive_edges(f, edges, n, rel_tol, max_depth, abs_tol);
}

double legendre_p(int k, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int j = 1; j < k; ++j) {
        double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_eval(const std::vector<double>& coeffs, double x) {
    if (coeffs.empty()) return 0.0;
    double acc = coeffs[0];
    if (coeffs.size() == 1) return acc;
    double pkm1 = 1.0, pk = x;
    acc += coeffs[1] * x;
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
        double pkp1 = ((2.0 * k - 1.0) * x * pk - (k - 1.0) * pkm1) / double(k);
        pkm1 = pk;
        pk = pkp1;
        acc += coeffs[k] * pk;
    }
    return acc;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Lentz continued fraction for I_x(a,b)
static double betacf(double a, double b, double x) {
    const int max_it = 300;
    const double eps = 3e-16, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_it; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw QuadratureError("incomplete_beta: continued fraction did not converge");
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n) throw std::invalid_argument("solve_dense: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("solve_dense: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri][c] * x[c];
        x[ri] = acc / a[ri][ri];
    }
    return x;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& v) {
    if (x.size() != v.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog: need >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    std::vector<double> lx(x.size()), lv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(v[i] > 0.0))
            throw std::invalid_argument("fit_loglog: values must be positive");
        lx[i] = std::log(x[i]);
        lv[i] = std::log(v[i]);
        sx += lx[i];
        sy += lv[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * lv[i];
    }
    LogLogFit fit;
    double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(lv[i] - (fit.slope * lx[i] + fit.intercept)));
    return fit;
}

}  // namespace sot
