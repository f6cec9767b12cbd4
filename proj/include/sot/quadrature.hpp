#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sot {

// Thrown when an adaptive rule exhausts its refinement budget without
// meeting the requested tolerance. Callers must not truncate silently.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GaussLegendre {
    std::vector<double> nodes;    // on (-1,1)
    std::vector<double> weights;
};

// Nodes/weights for n-point Gauss-Legendre, cached per n. Thread-safe.
const GaussLegendre& gauss_legendre(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Panel-bisecting adaptive rule: starts from `panels` uniform panels of
// n-point GL, bisects any panel whose two-half refinement moves its
// contribution by more than rel_tol * |total estimate| + abs_tol. The
// absolute floor keeps noise-level integrands (pure cancellation residue)
// from exhausting the budget.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          int n = 32, int panels = 4, double rel_tol = 1e-10,
                          int max_depth = 24, double abs_tol = 0.0);

// Same rule but starting from explicit panel edges (sorted, deduplicated by
// the caller); lets integrands with known sharp features start resolved.
double integrate_adaptive_edges(const std::function<double(double)>& f,
                                const std::vector<double>& edges, int n, double rel_tol,
                                int max_depth, double abs_tol = 0.0);

// Legendre polynomial P_k on [-1,1] and evaluation of a coefficient vector.
double legendre_p(int k, double x);
double legendre_eval(const std::vector<double>& coeffs, double x);

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b) by continued fraction; ~1e-15 accurate.
double incomplete_beta(double a, double b, double x);

// Compensated (Kahan) accumulator for long weight sums.
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Dense Ax=b with partial pivoting; for the small moment systems.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |log v - (slope*log x + intercept)|
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& v);

}  // namespace sot
