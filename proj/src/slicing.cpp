#include "sot/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sot/ot1d.hpp"
#include "sot/quadrature.hpp"
#include "sot/rng.hpp"

namespace sot {

namespace {

std::vector<double> gaussian_vector(SplitMix64& g, int d) {
    std::vector<double> v(d);
    for (int i = 0; i < d; ++i) v[i] = g.gaussian();
    return v;
}

void normalize(std::vector<double>& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    double n = std::sqrt(n2);
    for (double& x : v) x /= n;
}

double norm(const std::vector<double>& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    return std::sqrt(n2);
}

void check_direction(const std::vector<double>& theta, int dim) {
    if (int(theta.size()) != dim)
        throw std::invalid_argument("direction dimension mismatch");
    if (std::abs(norm(theta) - 1.0) > 1e-10)
        throw std::invalid_argument("direction is not unit length");
}

// mean + standard error with a compensated sum
std::pair<double, double> mean_se(const std::vector<double>& xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    double mean = s.value() / double(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    KahanSum q;
    for (double x : xs) q.add((x - mean) * (x - mean));
    double var = q.value() / double(xs.size() - 1);
    return {mean, std::sqrt(var / double(xs.size()))};
}

}  // namespace

std::vector<std::vector<double>> sample_sphere(int d, int n, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("sample_sphere: need d >= 2");
    if (n < 1) throw std::invalid_argument("sample_sphere: need n >= 1");
    std::vector<std::vector<double>> out(n);
    parallel_for(std::size_t(n), [&](std::size_t i) {
        auto g = substream(seed, "sphere", (std::uint64_t(d) << 32) ^ i);
        auto v = gaussian_vector(g, d);
        double n2 = norm(v);
        while (n2 < 1e-12) {  // astronomically unlikely; redraw
            v = gaussian_vector(g, d);
            n2 = norm(v);
        }
        for (double& x : v) x /= n2;
        out[i] = std::move(v);
    });
    return out;
}

std::vector<Frame> sample_grassmannian(int d, int k, int n, std::uint64_t seed) {
    if (k < 1 || k > d - 1) throw std::invalid_argument("sample_grassmannian: need 1 <= k <= d-1");
    std::vector<Frame> out(n);
    if (k == 1) {
        auto dirs = sample_sphere(d, n, seed);
        for (int i = 0; i < n; ++i) out[i] = Frame{d, 1, dirs[i]};
        return out;
    }
    parallel_for(std::size_t(n), [&](std::size_t i) {
        auto g = substream(seed, "grassmann", (std::uint64_t(d) << 40) ^ (std::uint64_t(k) << 32) ^ i);
        Frame f;
        f.d = d;
        f.k = k;
        f.cols.resize(std::size_t(d) * k);
        // modified Gram-Schmidt; the normalizing pivot is positive, which is
        // exactly the positive-diagonal-R convention
        for (int c = 0; c < k; ++c) {
            std::vector<double> a = gaussian_vector(g, d);
            for (int prev = 0; prev < c; ++prev) {
                double dot = 0.0;
                for (int r = 0; r < d; ++r) dot += a[r] * f.cols[std::size_t(prev) * d + r];
                for (int r = 0; r < d; ++r) a[r] -= dot * f.cols[std::size_t(prev) * d + r];
            }
            double nr = norm(a);
            while (nr < 1e-10) {
                a = gaussian_vector(g, d);
                for (int prev = 0; prev < c; ++prev) {
                    double dot = 0.0;
                    for (int r = 0; r < d; ++r) dot += a[r] * f.cols[std::size_t(prev) * d + r];
                    for (int r = 0; r < d; ++r) a[r] -= dot * f.cols[std::size_t(prev) * d + r];
                }
                nr = norm(a);
            }
            for (int r = 0; r < d; ++r) f.cols[std::size_t(c) * d + r] = a[r] / nr;
        }
        out[i] = std::move(f);
    });
    return out;
}

Frame frame_from_direction(const std::vector<double>& theta) {
    Frame f;
    f.d = int(theta.size());
    f.k = 1;
    f.cols = theta;
    return f;
}

DiscreteMeasure project_frame(const DiscreteMeasure& mu, const Frame& f) {
    if (f.d != mu.dim()) throw std::invalid_argument("project_frame: dimension mismatch");
    std::vector<double> flat(mu.size() * std::size_t(f.k));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto p = mu.point(i);
        for (int c = 0; c < f.k; ++c) {
            double dot = 0.0;
            for (int r = 0; r < f.d; ++r) dot += p[r] * f.entry(r, c);
            flat[i * f.k + c] = dot;
        }
    }
    return make_discrete_flat(f.k, std::move(flat), mu.weights());
}

SlicedEstimate sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                  int n_directions, std::uint64_t seed) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("sw: dimension mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("sw: p must be >= 1");
    if (n_directions < 2) throw std::invalid_argument("sw: need n_directions >= 2");
    auto dirs = sample_sphere(mu.dim(), n_directions, seed);
    std::vector<double> vals(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) {
        StepCDF a = project_1d(mu, dirs[i]);
        StepCDF b = project_1d(nu, dirs[i]);
        vals[i] = (p == 1.0) ? w1_cdf(a, b).value : std::pow(wp_quantile(a, b, p), p);
    });
    auto [mean, se] = mean_se(vals);
    SlicedEstimate est;
    est.n_directions = n_directions;
    est.seed = seed;
    if (p == 1.0) {
        est.value = mean;
        est.std_error = se;
    } else {
        est.value = std::pow(std::max(mean, 0.0), 1.0 / p);
        est.std_error = est.value > 0.0 ? se / (p * std::pow(est.value, p - 1.0)) : 0.0;
    }
    return est;
}

SlicedEstimate msw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n_candidates,
                   int n_refine, std::uint64_t seed, std::vector<double>* best_direction) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("msw: dimension mismatch");
    if (n_candidates < 1) throw std::invalid_argument("msw: need candidates");
    const int d = mu.dim();
    auto objective = [&](const std::vector<double>& th) {
        return w1_cdf(project_1d(mu, th), project_1d(nu, th)).value;
    };
    auto cands = sample_sphere(d, n_candidates, seed);
    std::vector<double> vals(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) { vals[i] = objective(cands[i]); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (vals[i] > vals[best]) best = i;
    std::vector<double> theta = cands[best];
    double value = vals[best];

    auto g = substream(seed, "msw-refine", 0);
    double step = 0.5;
    const int tries_per_round = 6;
    for (int round = 0; round < n_refine; ++round) {
        bool improved = false;
        for (int t = 0; t < tries_per_round; ++t) {
            auto dir = gaussian_vector(g, d);
            // tangent component only
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += dir[c] * theta[c];
            for (int c = 0; c < d; ++c) dir[c] -= dot * theta[c];
            double nr = norm(dir);
            if (nr < 1e-14) continue;
            std::vector<double> cand(d);
            for (int c = 0; c < d; ++c) cand[c] = theta[c] + step * dir[c] / nr;
            normalize(cand);
            double v = objective(cand);
            if (v > value) {
                value = v;
                theta = cand;
                improved = true;
            }
        }
        if (!improved) step *= 0.6;
    }
    if (best_direction) *best_direction = theta;
    SlicedEstimate est;
    est.value = value;
    est.std_error = 0.0;
    est.n_directions = n_candidates;
    est.seed = seed;
    return est;
}

SlicedEstimate msw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n_candidates,
                   int n_refine, std::uint64_t seed) {
    return msw(mu, nu, n_candidates, n_refine, seed, nullptr);
}

SlicedEstimate sw_k(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int k, int n_frames,
                    std::uint64_t seed, const ExactOTOptions& opts) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("sw_k: dimension mismatch");
    auto frames = sample_grassmannian(mu.dim(), k, n_frames, seed);
    std::vector<double> vals(frames.size());
    parallel_for(frames.size(), [&](std::size_t i) {
        vals[i] = w1_exact(project_frame(mu, frames[i]), project_frame(nu, frames[i]), opts).cost;
    });
    auto [mean, se] = mean_se(vals);
    return {mean, se, n_frames, seed};
}

double empirical_sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const std::vector<std::vector<double>>& directions) {
    if (directions.empty()) throw std::invalid_argument("empirical_sw: no directions");
    KahanSum acc;
    for (const auto& th : directions) {
        check_direction(th, mu.dim());
        acc.add(w1_cdf(project_1d(mu, th), project_1d(nu, th)).value);
    }
    return acc.value() / double(directions.size());
}

double quantification_error(const std::vector<std::vector<double>>& directions, int n_reference,
                            std::uint64_t seed, SphereReference ref, const ExactOTOptions& opts) {
    if (directions.empty()) throw std::invalid_argument("quantification_error: no directions");
    const int d = int(directions[0].size());
    for (const auto& th : directions) check_direction(th, d);
    std::vector<std::vector<double>> reference;
    if (ref == SphereReference::iid) {
        reference = sample_sphere(d, n_reference, seed);
    } else {
        if (d != 2)
            throw std::invalid_argument("quantification_error: stratified/grid reference is d=2 only");
        const double two_pi = 6.283185307179586476925286766559;
        reference.reserve(n_reference);
        auto g = substream(seed, "circle-strata", 0);
        for (int i = 0; i < n_reference; ++i) {
            double u = (ref == SphereReference::stratified) ? g.uniform() : 0.5;
            double a = two_pi * (double(i) + u) / double(n_reference);
            reference.push_back({std::cos(a), std::sin(a)});
        }
    }
    std::vector<double> uw(directions.size(), 1.0);
    std::vector<double> rw(reference.size(), 1.0);
    DiscreteMeasure emp = make_discrete(directions, uw);
    DiscreteMeasure uni = make_discrete(reference, rw);
    return w1_exact(emp, uni, opts).cost;
}

double corollary_bound(double sw1, double alpha, double m_alpha, double c_d, int d) {
    if (!(sw1 > 0.0)) throw std::invalid_argument("corollary_bound: sw1 must be positive");
    if (!(sw1 <= m_alpha)) throw std::invalid_argument("corollary_bound: need sw1 <= m_alpha");
    if (!(alpha > 0.0) || !(c_d > 0.0) || d < 1)
        throw std::invalid_argument("corollary_bound: bad parameters");
    double logterm = std::log(m_alpha / sw1) / alpha;
    return sw1 + std::pow(2.0, 1.0 / d) * c_d * std::pow(sw1, 1.0 / d) *
                     std::pow(logterm, double(d - 1) / double(d));
}

}  // namespace sot
