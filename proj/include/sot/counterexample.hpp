#pragma once

#include <vector>

#include "sot/measures.hpp"
#include "sot/quadrature.hpp"

namespace sot {

// Signed polynomial weight on [-1,1] with unit mass and vanishing moments of
// orders 1..d+1; the moment cancellation is what drives the eps^d decay of
// the sliced distance in the translated-family construction.
struct MomentWeight {
    std::vector<double> coeffs;  // Legendre basis
    int degree = 0;
    double abs_first_moment = 0.0;  // int |s| g(s) ds

    double eval(double s) const;
};

// Unique weight of degree <= d+1 solving the moment system; even by parity.
MomentWeight build_weight(int d);

// Radial measure on the unit ball of the horizontal hyperplane with density
// proportional to (1-|x|^2)^{d+1}, plus its vertically translated family.
// The 1D projected density onto any horizontal line is
// f(t) = f_norm * (1-t^2)^{3d/2}; its CDF is a regularized incomplete beta
// with parameters (3d/2+1, 3d/2+1). A uniform-grid cubic Hermite cache of the
// CDF (exact density slopes) backs the inner quadrature loops.
class CounterexampleFamily {
public:
    static CounterexampleFamily make(int d, int cache_points = 8192);

    int d() const { return d_; }
    const MomentWeight& g() const { return g_; }
    double f_exponent() const { return f_exp_; }
    double f_norm() const { return f_norm_; }

    double density(double t) const;    // f
    double cdf(double t) const;        // F, regularized incomplete beta
    double cdf_fast(double t) const;   // cached Hermite evaluation

    Analytic1DMeasure analytic_f() const;
    Analytic1DMeasure analytic_f_theta(double Theta) const;

private:
    int d_ = 0;
    MomentWeight g_;
    double f_exp_ = 0.0;
    double f_norm_ = 0.0;
    double beta_a_ = 0.0;  // = f_exp_ + 1
    std::vector<double> cache_f_, cache_fp_;
    double cache_h_ = 0.0;
};

// CDF of the projection onto a direction at angle Theta from the horizontal:
// F(./cos) on the positive branch, 1 - F(./cos) on the negative one.
// Degenerate at cos Theta = 0.
double projected_cdf(const CounterexampleFamily& fam, double Theta, double t);

struct QuadSpec {
    int outer_nodes = 32;      // GL order per outer panel (angle integral)
    int outer_panels = 8;      // initial panels on the generic zone
    int vertical_panels = 4;   // initial panels on each near-vertical cap
    double outer_tol = 1e-6;
    int t_nodes = 64;          // GL order per offset panel
    int t_panels = 8;
    double t_tol = 1e-5;
    int max_depth = 12;
    int s_nodes = 64;
    int cache_points = 8192;

    QuadSpec refined() const;  // everything doubled, tolerances tightened
};

// SW1 between the base measure and its eps-translated family, reduced by
// rotational symmetry to an angle integral with weight cos^{d-2}; the
// near-vertical caps |cos| <= eps get their own refined panels. Throws
// QuadratureError instead of truncating.
double sw1_mu_mueps(const CounterexampleFamily& fam, double eps, const QuadSpec& quad = {});

struct ZoneSplit {
    double total = 0.0;
    double generic = 0.0;
    double vertical = 0.0;
};
ZoneSplit sw1_mu_mueps_zones(const CounterexampleFamily& fam, double eps,
                             const QuadSpec& quad = {});

// Same integral with an explicit shift kernel (nodes/signed coefficients)
// replacing the Gauss-Legendre discretization of g.
double sw1_mu_mueps_kernel(const CounterexampleFamily& fam, double eps,
                           const std::vector<double>& s_nodes,
                           const std::vector<double>& s_coefs, const QuadSpec& quad = {});

// Inner signed integral  int (F_Theta(t + eps s sinTheta) - F_Theta(t)) g(s) ds,
// exposed for the order-(d+2) cancellation diagnostics.
double inner_signed_integral(const CounterexampleFamily& fam, double eps, double Theta, double t,
                             int s_nodes = 64);

// W1 between the projections of the base measure and its shifted mixture at
// a single angle from the horizontal; the outer sphere average of this is
// sw1_mu_mueps, so it doubles as a reduction-independent per-direction probe.
double w1_projected_at_angle(const CounterexampleFamily& fam, double eps, double Theta,
                             const QuadSpec& quad = {});

// Exact duality lower bound eps * |int |s| g(s) ds| on W1(mu, mu_eps).
double w1_lower_bound(const CounterexampleFamily& fam, double eps);

// Total mass of (mu - mu_eps)^+ = 1 + int g^-; constant in eps since the
// translated copies are mutually singular with the base hyperplane.
double m_eps(const CounterexampleFamily& fam);

struct ScalingFit {
    std::vector<double> eps_grid;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

ScalingFit fit_scaling(const std::vector<double>& eps_grid, const std::vector<double>& values);

struct ScanRow {
    double eps = 0.0;
    double sw1 = 0.0;
    double w1_lower = 0.0;
    double m_eps = 0.0;
    double sw1_normalized = 0.0;
    double w1_normalized = 0.0;
    double sw1_vertical = 0.0;
    double sw1_generic = 0.0;
};

struct ScalingScan {
    std::vector<ScanRow> rows;
    ScalingFit sw_fit, w_fit, sw_fit_normalized, w_fit_normalized;
};

// eps grid must be strictly decreasing within (0, 0.5].
ScalingScan scaling_scan(const CounterexampleFamily& fam, const std::vector<double>& eps_grid,
                         const QuadSpec& quad = {});

// Closed-form SW1 of the planar Gaussian pair (law of (X,0) vs (X, eps Y)):
//   (E|Z| / 2pi) * int_0^{2pi} ( sqrt(cos^2 a + eps^2 sin^2 a) - |cos a| ) da
// for eps in (0, 1]. Companion exact W1 is eps * E|Z|.
double gaussian_example_sw_closed_form(double eps);
double gaussian_example_sw_quarter(double eps);  // 4x quadrature on [0, pi/2]
double gaussian_example_w1(double eps);

// Point-cloud discretization of the signed pair (d=3 only): polar rings x
// equally spaced angles on the horizontal disk, Gauss-Legendre shift levels.
SignedDiscreteMeasure discretize_family(const CounterexampleFamily& fam, double eps, int n_radial,
                                        int n_angular, int n_shift);

}  // namespace sot
