#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sot {

// Lipschitz compactly supported 1D test input with a known number of
// vanishing moments (orders 0..moment_order-1 integrate to zero).
struct TestFunction1D {
    std::function<double(double)> evaluate;
    double support_radius = 1.0;
    int moment_order = 0;
};

// k-th derivative of the polynomial bump (1-(x/radius)^2)^order; derivatives
// of a compactly supported function have vanishing moments up to order k-1.
TestFunction1D bump_derivative_1d(int order, int k, double radius = 1.0);

// Polynomial bump (1-|x/radius|^2)^order in R^dim with first and second
// partials in closed form.
class BumpND {
public:
    BumpND(int dim, int order, double radius = 1.0) : dim_(dim), order_(order), radius_(radius) {}

    int dim() const { return dim_; }
    double radius() const { return radius_; }
    double eval(std::span<const double> x) const;
    double partial(int j, std::span<const double> x) const;
    double second_partial(int i, int j, std::span<const double> x) const;

private:
    int dim_;
    int order_;
    double radius_;
};

struct TestFunctionND {
    std::function<double(std::span<const double>)> evaluate;
    int dim = 1;
    double support_radius = 1.0;
};

// Hyperplane integral of exp(-pi |x|^2) at offset t: equals exp(-pi t^2) for
// every direction. The closed form; the direct-quadrature validator lives in
// radon_gaussian_direct.
double radon_gaussian(std::span<const double> theta, double t);
double radon_gaussian_direct(int d, const std::vector<double>& theta, double t);

struct HilbertOptions {
    // excision radius as a fraction of the support radius; the leading
    // excision bias after one h, h/2 Richardson step scales like h^3 f''',
    // and 1e-3 is too coarse for wide or oscillatory inputs
    double excision_factor = 1e-4;
    int gl_nodes = 32;
    int panels = 8;
    double tol = 1e-11;
    int max_depth = 26;
};

// Principal-value Hilbert transform (1/pi) pv int f(t-s)/s ds by symmetric
// excision with one h, h/2 Richardson step; plain quadrature off-support.
double hilbert(const TestFunction1D& f, double t, const HilbertOptions& opts = {});

struct GridFunction {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;

    double x_at(std::size_t i) const { return x0 + dx * double(i); }
};

// Fourier-multiplier route: -i sgn on a periodized grid of half-length L.
GridFunction hilbert_fft_grid(const TestFunction1D& f, double half_length, int n);

struct DecayFit {
    double slope = 0.0;
    double sup_weighted = 0.0;          // sup |T f| * (1 + |t|^{k+1})
    std::vector<double> grid;           // points actually used (underflow-trimmed)
    std::vector<double> values;         // |T f| there
    std::size_t trimmed = 0;
};

// Tail decay of H(d^k bump): fitted log-log slope over t_grid, expected
// -(k+1). Points with underflowing magnitudes are trimmed and counted.
DecayFit hilbert_decay_check(int k, const std::vector<double>& t_grid, int bump_order = 10);

struct RieszOptions {
    int angular_nodes = 128;
    int radial_nodes = 32;
    int radial_panels = 8;
    double tol = 1e-11;
    int max_depth = 20;
};

// j-th Riesz transform in R^k, k in {1,2,3}, Gamma((k+1)/2)/pi^{(k+1)/2}
// normalization; principal value by antipodal pairing (no excision needed).
double riesz(const TestFunctionND& f, int j, std::span<const double> x,
             const RieszOptions& opts = {});

// Tail decay of R_j applied to a zero-mean input (partial derivative of a
// bump) or, with zero_mean = false, the bump itself (kernel-only decay -k).
DecayFit riesz_decay_check(int k, const std::vector<double>& x_norms, bool zero_mean,
                           int bump_order = 8);

struct RepresentationResult {
    double max_error = 0.0;
    int resolved_sign = 0;  // even d only: sign of the Hilbert-branch prefactor that reconstructs
    std::vector<double> errors;
};

// Reconstruction of exp(-pi |x|^2) from its direction profiles:
// d=3 uses the second Radon derivative with prefactor -1/(8 pi^2); d=2 uses
// the Hilbert branch, whose prefactor sign is resolved empirically at x=0.
RepresentationResult representation_check(int d, const std::vector<double>& x_norms,
                                          int sphere_nodes = 96);

// Half Laplacian as the |y| Fourier multiplier on a padded periodic grid.
GridFunction half_laplacian_1d_grid(const std::function<double(double)>& g, double half_length,
                                    int n);
std::vector<double> half_laplacian_2d_at(const std::function<double(double, double)>& g,
                                         double half_length, int n,
                                         const std::vector<std::pair<double, double>>& points);

// Max spatial mismatch between the |y|-multiplier half Laplacian and the
// (1/2pi) sum_j R_j d_j route, k in {1,2}, on interior sample points.
double riesz_decomposition_check(int k);

// pi^{(d-k)/2} Gamma(k/2) / Gamma(d/2); the plane-average normalizing
// constant from integral geometry. Exposed for reference, drives nothing.
double fuglede_constant(int d, int k);

}  // namespace sot
