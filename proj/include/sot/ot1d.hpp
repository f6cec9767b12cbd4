#pragma once

#include <string>

#include "sot/measures.hpp"

namespace sot {

struct W1Result {
    double value = 0.0;
    std::string meta;
};

// Exact 1D Wasserstein-1: L1 distance between the two step CDFs, computed on
// the merged breakpoint partition. No quadrature error, deterministic.
W1Result w1_cdf(const StepCDF& a, const StepCDF& b);

// Exact 1D W_p via the monotone (quantile) coupling, p >= 1. Walks the two
// sorted atom lists north-west-corner style; agrees with w1_cdf at p=1.
double wp_quantile(const StepCDF& a, const StepCDF& b, double p);

// W1 between centered 1D Gaussians with the given standard deviations:
// |sigma1 - sigma2| * E|Z|.
double w1_gaussian_1d(double sigma1, double sigma2);

// E|Z| for a standard normal, computed once by quadrature at first use.
double expected_abs_normal();

}  // namespace sot
