#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sot/measures.hpp"

namespace sot {

struct PlanEntry {
    int source = 0;
    int target = 0;
    double mass = 0.0;
};

// Optimal transport plan with dual certificate. Marginal weights are kept so
// the plan is self-contained for validation and serialization.
struct TransportPlan {
    std::vector<PlanEntry> entries;
    double cost = 0.0;
    std::vector<double> dual_source;   // potentials u_i (empty if absent)
    std::vector<double> dual_target;   // potentials v_j
    std::vector<double> source_weights;
    std::vector<double> target_weights;

    bool has_duals() const { return !dual_source.empty(); }
};

struct ExactOTOptions {
    // dense cost matrix bound, n*m entries
    std::uint64_t max_cost_entries = 10'000'000ULL;
};

// Exact W1 between discrete measures, Euclidean ground cost, solved by a
// bipartite network simplex with deterministic (lowest-index) tie-breaking.
// Optimality is certified by the returned dual potentials.
TransportPlan w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const ExactOTOptions& opts = {});

// W1 of M*(p - q) via homogeneity: mass * w1_exact(positive, negative).
double w1_signed(const SignedDiscreteMeasure& s, const ExactOTOptions& opts = {});

// Primal cost minus dual objective. Throws if the plan carries no duals.
double dual_gap(const TransportPlan& plan);

// Checks marginal sums (1e-9) and complementary slackness against the stored
// cost geometry; returns the worst violation found (for tests).
std::string plan_to_json(const TransportPlan& plan);

}  // namespace sot
