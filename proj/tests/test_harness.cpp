#include "sot/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sot/ot_exact.hpp"
#include "test_util.hpp"

using namespace sot;
using testutil::check;
using testutil::check_in;
using testutil::check_near;
using testutil::check_throws;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    // config round trip is lossless and hash-stable
    {
        ExperimentConfig cfg;
        cfg.experiment = "audit";
        cfg.d = 4;
        cfg.eps_grid = {0.25, 0.125};
        cfg.seed = 99;
        cfg.quad.t_tol = 3.5e-6;
        cfg.out_csv = "x.csv";
        auto back = config_from_json(config_to_json(cfg));
        check(config_to_json(back) == config_to_json(cfg), "config round trip");
        check(config_hash(back) == config_hash(cfg), "config hash stable");
        check_throws([] { config_from_json("{\"experiment\":\"scan\"}"); },
                     "seed must be explicit");
        check_throws([] { config_from_json("{\"seed\":1,\"eps_grid\":[]}"); },
                     "empty grid rejected");
    }

    // corpus pairs live in the ball and stress distinct regimes
    {
        bool in_ball = true;
        for (int kind = 0; kind < 6; ++kind) {
            auto [mu, nu] = corpus_pair(3, 1.0, 30, kind, 5);
            in_ball = in_ball && mu.radius() <= 1.0 + 1e-12 && nu.radius() <= 1.0 + 1e-12;
        }
        check(in_ball, "corpus measures supported in the ball");
        auto [mu, nu] = corpus_pair(3, 1.0, 30, 2, 5);
        check(mu.size() == nu.size(), "near-degenerate pair shares its support");
    }

    // audit: inequalities hold, ratios populated, zero-distance rows guarded
    {
        ExperimentConfig cfg;
        cfg.experiment = "audit";
        cfg.d = 3;
        cfg.k = 2;
        cfg.seed = 7;
        cfg.n_instances = 12;
        cfg.n_directions = 256;
        cfg.msw_candidates = 64;
        cfg.msw_refine = 24;
        cfg.eps_grid = {0.3, 0.2, 0.1};
        auto audit = run_bound_audit(cfg);
        check(audit.inequalities_hold, "projection inequalities hold on the corpus");
        check(audit.records.size() == 15, "corpus rows plus family rows");
        bool finite = true;
        double family_thm_min = 1e300, family_thm_max = 0.0;
        double bonnotte_first = 0.0, bonnotte_last = 0.0;
        for (const auto& r : audit.records) {
            if (r.sw1 > 0 && r.w1 > 0) finite = finite && std::isfinite(r.ratio_thm);
            if (r.instance.rfind("family", 0) == 0) {
                family_thm_min = std::min(family_thm_min, r.ratio_thm);
                family_thm_max = std::max(family_thm_max, r.ratio_thm);
                if (bonnotte_first == 0.0) bonnotte_first = r.ratio_bonnotte;
                bonnotte_last = r.ratio_bonnotte;
            }
        }
        check(finite, "implied constants finite");
        check(family_thm_max / family_thm_min <= 2.0, "family implied constant stable");
        check(bonnotte_last < bonnotte_first, "weaker-exponent constant decays along the grid");

        // identical measures: distances zero, no ratio blowup
        auto [mu, nu] = corpus_pair(3, 1.0, 20, 0, 3);
        auto plan = w1_exact(mu, mu);
        check_near(plan.cost, 0.0, 1e-12, "identical corpus measure has zero distance");
    }

    // exponent scan report
    {
        ExperimentConfig cfg;
        cfg.experiment = "scan";
        cfg.d = 3;
        cfg.seed = 1;
        cfg.eps_grid = {0.3, 0.2, 0.1};
        auto rep = run_exponent_scan(cfg);
        check(rep.scan.rows.size() == 3, "scan row per grid point");
        check_near(rep.scan.w_fit.slope, 1.0, 1e-12, "lower bound slope in report");
        check(rep.table.find("sw slope") != std::string::npos, "headline table rendered");
        ExperimentConfig bad = cfg;
        bad.d = 2;
        check_throws([&] { run_exponent_scan(bad); }, "scan requires d >= 3");
    }

    // gaussian reproduction at reduced scale
    {
        ExperimentConfig cfg;
        cfg.experiment = "gaussian";
        cfg.eps_grid = {0.2};
        cfg.seed = 11;
        cfg.n_atoms = 20000;
        cfg.n_directions = 500;
        auto rep = run_gaussian_repro(cfg);
        const auto& row = rep.rows[0];
        check_near(row.w1_closed, 0.2 * 0.7978845608028654, 1e-12, "w1 column exact");
        double combined = std::sqrt(row.sw_mc_se * row.sw_mc_se + row.sw_atoms_se * row.sw_atoms_se);
        check(std::abs(row.sw_mc - row.sw_closed) <= 3.0 * combined,
              "sampled estimate within three combined errors");
        check(rep.ratio_max / rep.ratio_min <= 3.0, "closed-form ratio bounded by 3");
        check(rep.ratio_min > 0.0, "ratio bounded away from zero");
    }

    // byte-identical reruns and config-hash-stamped outputs
    {
        ExperimentConfig cfg;
        cfg.experiment = "scan";
        cfg.d = 3;
        cfg.seed = 4;
        cfg.eps_grid = {0.3, 0.2};
        auto rep1 = run_exponent_scan(cfg);
        auto rep2 = run_exponent_scan(cfg);
        check(scan_to_json(rep1.scan, cfg) == scan_to_json(rep2.scan, cfg),
              "rerun json byte-identical");

        // worker count must not leak into results
        setenv("SOT_THREADS", "2", 1);
        auto rep_mt = run_exponent_scan(cfg);
        auto [mu, nu] = corpus_pair(3, 1.0, 24, 0, 9);
        auto sw_mt = sw(mu, nu, 1.0, 256, 12);
        setenv("SOT_THREADS", "1", 1);
        auto sw_st = sw(mu, nu, 1.0, 256, 12);
        check(scan_to_json(rep_mt.scan, cfg) == scan_to_json(rep1.scan, cfg),
              "threaded scan bitwise equals serial");
        check(sw_mt.value == sw_st.value && sw_mt.std_error == sw_st.std_error,
              "threaded estimator bitwise equals serial");
        write_scan_csv("scan_a.csv", rep1.scan, config_hash(cfg));
        write_scan_csv("scan_b.csv", rep2.scan, config_hash(cfg));
        std::string a = slurp("scan_a.csv"), b = slurp("scan_b.csv");
        std::remove("scan_a.csv");
        std::remove("scan_b.csv");
        check(!a.empty() && a == b, "rerun csv byte-identical");
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        check(a.find(hash) != std::string::npos, "csv rows carry the config hash");
    }

    return testutil::summary("test_harness");
}
