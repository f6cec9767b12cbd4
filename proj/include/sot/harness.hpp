#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sot/counterexample.hpp"
#include "sot/measures.hpp"
#include "sot/slicing.hpp"

namespace sot {

// One experiment = one config. Seeds are always explicit; grids nonempty;
// the JSON form round-trips losslessly and its FNV hash stamps every CSV row.
struct ExperimentConfig {
    std::string experiment = "scan";  // scan | audit | gaussian
    int d = 3;
    int k = 2;  // k-plane column in audits
    std::vector<double> eps_grid = {0.3, 0.25, 0.2, 0.15, 0.1, 0.07, 0.05};
    std::uint64_t seed = 1;
    int n_instances = 50;
    int n_directions = 512;
    int n_atoms = 100000;
    int msw_candidates = 128;
    int msw_refine = 48;
    double radius = 1.0;
    QuadSpec quad;
    std::string out_csv;
    std::string out_json;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct AuditRecord {
    std::string instance;
    int d = 0;
    double radius = 0.0;
    double w1 = 0.0;       // exact W1 (analytic lower bound on family rows)
    double sw1 = 0.0;
    double sw1_se = 0.0;
    double msw1 = 0.0;
    double swk = 0.0;
    double swk_se = 0.0;
    double ratio_thm = 0.0;       // w1 / (R^{(d-1)/d} sw1^{1/d})
    double ratio_thm_k = 0.0;     // w1 / (R^{(d-k)/(d-k+1)} swk^{1/(d-k+1)})
    double ratio_bonnotte = 0.0;  // w1 / (R^{d/(d+1)} sw1^{1/(d+1)})
    double ratio_bobkov = 0.0;    // w1 / (R^{d/(d+2)} msw1^{2/(d+2)})
};

struct BoundAudit {
    std::vector<AuditRecord> records;
    bool inequalities_hold = true;
    std::string violation;
};

// Random measure pairs in B_R (Gaussian mixtures clipped to the ball, uniform
// clouds, near-degenerate weight perturbations), built to stress SW << W.
std::pair<DiscreteMeasure, DiscreteMeasure> corpus_pair(int d, double radius, int atoms, int kind,
                                                        std::uint64_t seed);

// Tabulates distances and implied constants over the corpus plus the
// translated-family rows across the eps grid. Asserts only the unconditional
// inequalities (projected <= ambient, mean <= max + 3 sigma); the constants
// are reported, never asserted.
BoundAudit run_bound_audit(const ExperimentConfig& cfg);

struct ExponentScanReport {
    ScalingScan scan;
    std::string table;  // plain-text headline table
};

ExponentScanReport run_exponent_scan(const ExperimentConfig& cfg);

struct GaussianReproRow {
    double eps = 0.0;
    double sw_closed = 0.0;
    double w1_closed = 0.0;
    double sw_mc = 0.0;
    double sw_mc_se = 0.0;
    double sw_atoms_se = 0.0;  // quarter-sample replicate spread / 2
    double ratio = 0.0;        // sw_closed / (eps^2 |log eps|)
};

struct GaussianRepro {
    std::vector<GaussianReproRow> rows;
    double ratio_max = 0.0;  // over the dense closed-form grid [1e-3, 0.3]
    double ratio_min = 0.0;
};

GaussianRepro run_gaussian_repro(const ExperimentConfig& cfg);

// Coupled sampler for the planar pair: nu reuses mu's horizontal draws, so
// both marginals are exact and the difference field has low variance.
std::pair<DiscreteMeasure, DiscreteMeasure> sample_gaussian_pair(int n_atoms, double eps,
                                                                 std::uint64_t seed);

// Pinned %.17g formatting; every row carries the config hash.
void write_scan_csv(const std::string& path, const ScalingScan& scan, std::uint64_t cfg_hash);
void write_audit_csv(const std::string& path, const BoundAudit& audit, std::uint64_t cfg_hash);
void write_gaussian_csv(const std::string& path, const GaussianRepro& rep, std::uint64_t cfg_hash);
std::string scan_to_json(const ScalingScan& scan, const ExperimentConfig& cfg);
std::string audit_to_json(const BoundAudit& audit, const ExperimentConfig& cfg);
std::string gaussian_to_json(const GaussianRepro& rep, const ExperimentConfig& cfg);

}  // namespace sot
