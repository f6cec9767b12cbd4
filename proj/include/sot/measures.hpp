#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sot {

// Weighted point cloud in R^d. Immutable after construction: weights sum to 1
// (compensated summation, tolerance 1e-12 up to ~1e6 atoms), no negative or
// zero weights, atoms sorted lexicographically with exact duplicates merged.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * dim_, std::size_t(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& flat_points() const { return points_; }

    // first absolute moment, int |x| dmu
    double first_moment() const;
    // support radius, max |x|
    double radius() const;

private:
    friend DiscreteMeasure make_discrete(const std::vector<std::vector<double>>&,
                                         const std::vector<double>&);
    friend DiscreteMeasure make_discrete_flat(int, std::vector<double>, std::vector<double>);
    int dim_ = 0;
    std::vector<double> points_;  // row-major, size() * dim_
    std::vector<double> weights_;
};

// Validating constructor: renormalizes, merges duplicate points (weights
// added), prunes zero-weight atoms, canonicalizes order lexicographically.
DiscreteMeasure make_discrete(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights);
DiscreteMeasure make_discrete_flat(int dim, std::vector<double> flat_points,
                                   std::vector<double> weights);

// M*(p - q): positive/negative probability parts plus the common mass M.
struct SignedDiscreteMeasure {
    DiscreteMeasure positive;
    DiscreteMeasure negative;
    double mass = 0.0;
};

// Split signed atoms into normalized parts. Signed weights must balance to
// zero within 1e-10 and both signs must be present.
SignedDiscreteMeasure signed_split(const std::vector<std::pair<std::vector<double>, double>>& atoms);

// CDF of a 1D discrete measure: strictly increasing breakpoints, cumulative
// values in [0,1] ending at exactly 1. cumulative[i] = measure of (-inf, b_i].
struct StepCDF {
    std::vector<double> breakpoints;
    std::vector<double> cumulative;
};

StepCDF make_step_cdf(std::vector<double> values, std::vector<double> weights);

// Pushforward CDF under x -> <theta, x>. theta must be unit within 1e-10.
// Projected atoms are merged on exact float equality only.
StepCDF project_1d(const DiscreteMeasure& mu, std::span<const double> theta);

// 1D measure given in closed form; density and cdf both kept because callers
// evaluate the cdf in tight loops.
struct Analytic1DMeasure {
    std::function<double(double)> density;
    std::function<double(double)> cdf;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Checks cdf(a) ~ 0, cdf(b) ~ 1 within 1e-10 and monotonicity on a grid of
// >= 1000 points; throws on violation.
void validate_analytic(const Analytic1DMeasure& m, std::size_t grid = 1000);

// JSON schema: {"dim": d, "points": [[..],..], "weights": [..]}
std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);
DiscreteMeasure load_measure_json(const std::string& path);
void save_measure_json(const DiscreteMeasure& mu, const std::string& path);

// CSV: one row per atom, coordinates then weight in the last column.
DiscreteMeasure load_measure_csv(const std::string& path);

}  // namespace sot
