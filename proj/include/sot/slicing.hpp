#pragma once

#include <cstdint>
#include <vector>

#include "sot/measures.hpp"
#include "sot/ot_exact.hpp"

namespace sot {

// Orthonormal d x k frame (column-major). A point of G(d,k); k=1 columns are
// sphere directions.
struct Frame {
    int d = 0;
    int k = 0;
    std::vector<double> cols;  // d*k, column-major

    double entry(int row, int col) const { return cols[std::size_t(col) * d + row]; }
};

struct SlicedEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int n_directions = 0;
    std::uint64_t seed = 0;
};

// i.i.d. uniform directions on S^{d-1} (normalized Gaussians). Direction i is
// a pure function of (seed, d, i): parallel evaluation and other estimators
// cannot perturb the stream.
std::vector<std::vector<double>> sample_sphere(int d, int n, std::uint64_t seed);

// Haar frames on G(d,k) by Gram-Schmidt of Gaussian d x k matrices with the
// positive-diagonal sign convention. k=1 reuses the sphere stream, so sw and
// sw_k see identical directions for the same seed.
std::vector<Frame> sample_grassmannian(int d, int k, int n, std::uint64_t seed);

DiscreteMeasure project_frame(const DiscreteMeasure& mu, const Frame& f);
Frame frame_from_direction(const std::vector<double>& theta);

// Monte Carlo SW_p: mean of per-direction W_p^p over sampled directions, then
// the p-th root (plain estimator, no bias correction). For p=1 this is the
// mean of w1_cdf values; std_error is the standard error of that mean (delta
// method through the root for p>1).
SlicedEstimate sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                  int n_directions, std::uint64_t seed);

// Certified lower bound on the max-sliced distance: best of n_candidates
// random directions refined by accept-if-better tangent perturbations with a
// shrinking step. Returned value is the best projected W1 found.
SlicedEstimate msw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n_candidates,
                   int n_refine, std::uint64_t seed);
SlicedEstimate msw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n_candidates,
                   int n_refine, std::uint64_t seed, std::vector<double>* best_direction);

// Monte Carlo k-plane sliced distance: mean over Haar frames of the exact W1
// between the k-dimensional projections.
SlicedEstimate sw_k(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int k, int n_frames,
                    std::uint64_t seed, const ExactOTOptions& opts = {});

// Exact average of w1_cdf over a fixed direction list; no randomness.
double empirical_sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const std::vector<std::vector<double>>& directions);

enum class SphereReference {
    iid,         // normalized Gaussian sample
    stratified,  // d=2 only: one jittered point per arc (error <= 2*pi/n)
    grid,        // d=2 only: equally spaced, offset by half a spacing
};

// W1 (Euclidean chord cost) between the empirical direction measure and the
// uniform sphere, estimated against an n_reference-point sphere sample. The
// result is itself a Monte Carlo estimate of the quantification error; for
// d=2 the stratified/grid references keep the reference error O(1/n) instead
// of O(1/sqrt(n)).
double quantification_error(const std::vector<std::vector<double>>& directions, int n_reference,
                            std::uint64_t seed, SphereReference ref = SphereReference::iid,
                            const ExactOTOptions& opts = {});

// Right-hand side of the exponential-moment comparison bound:
//   sw1 + 2^{1/d} c_d sw1^{1/d} [ (1/alpha) log(m_alpha / sw1) ]^{(d-1)/d}
// The bound is derived under an odd-dimension hypothesis; the evaluator
// accepts any d >= 1 and leaves that restriction to the caller.
double corollary_bound(double sw1, double alpha, double m_alpha, double c_d, int d);

}  // namespace sot
