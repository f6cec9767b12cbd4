#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sot/counterexample.hpp"
#include "sot/harness.hpp"
#include "sot/measures.hpp"
#include "sot/ot1d.hpp"
#include "sot/ot_exact.hpp"
#include "sot/quadrature.hpp"
#include "sot/slicing.hpp"
#include "sot/transforms.hpp"

namespace {

constexpr int kExitInequality = 2;
constexpr int kExitNonConvergence = 3;

void emit(const nlohmann::ordered_json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump() << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump() << "\n";
    }
}

nlohmann::ordered_json estimate_json(const sot::SlicedEstimate& est) {
    return {{"value", est.value},
            {"std_error", est.std_error},
            {"n", est.n_directions},
            {"seed", est.seed}};
}

std::vector<std::vector<double>> load_directions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j.at("directions").get<std::vector<std::vector<double>>>();
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sliced and exact Wasserstein-1 toolkit"};
    app.require_subcommand(1);

    std::string mu_path, nu_path, out_path, dirs_path, plan_path, config_path, which;
    std::string eps_csv = "0.3,0.25,0.2,0.15,0.1,0.07,0.05";
    double p = 1.0;
    int n_directions = 512, n_candidates = 128, n_refine = 48, k = 2, d = 3;
    std::uint64_t seed = 1;

    auto add_pair = [&](CLI::App* cmd) {
        cmd->add_option("--mu", mu_path, "measure JSON")->required();
        cmd->add_option("--nu", nu_path, "measure JSON")->required();
        cmd->add_option("--out", out_path, "result JSON path (stdout if omitted)");
    };

    auto* sw_cmd = app.add_subcommand("sw", "Monte Carlo sliced distance");
    add_pair(sw_cmd);
    sw_cmd->add_option("--p", p);
    sw_cmd->add_option("--n-directions", n_directions);
    sw_cmd->add_option("--seed", seed)->required();

    auto* msw_cmd = app.add_subcommand("msw", "max-sliced lower bound");
    add_pair(msw_cmd);
    msw_cmd->add_option("--n-candidates", n_candidates);
    msw_cmd->add_option("--n-refine", n_refine);
    msw_cmd->add_option("--seed", seed)->required();

    auto* swk_cmd = app.add_subcommand("swk", "k-plane sliced distance");
    add_pair(swk_cmd);
    swk_cmd->add_option("--k", k)->required();
    swk_cmd->add_option("--n-directions", n_directions);
    swk_cmd->add_option("--seed", seed)->required();

    auto* w1_cmd = app.add_subcommand("w1", "exact Wasserstein-1");
    add_pair(w1_cmd);
    w1_cmd->add_option("--plan-out", plan_path, "dump the optimal plan + duals");

    auto* esw_cmd = app.add_subcommand("empirical-sw", "fixed-direction sliced distance");
    add_pair(esw_cmd);
    esw_cmd->add_option("--directions", dirs_path, "JSON {\"directions\": [[...],...]}")->required();

    auto* ce_cmd = app.add_subcommand("counterexample", "translated-family experiments");
    ce_cmd->require_subcommand(1);
    auto* scan_cmd = ce_cmd->add_subcommand("scan", "eps scan of SW1 and the W1 lower bound");
    scan_cmd->add_option("--d", d);
    scan_cmd->add_option("--eps", eps_csv);
    scan_cmd->add_option("--out", out_path, "CSV path")->required();
    std::string json_path;
    scan_cmd->add_option("--json", json_path, "summary JSON path");
    auto* gauss_cmd = ce_cmd->add_subcommand("gaussian", "planar Gaussian pair reproduction");
    gauss_cmd->add_option("--eps", eps_csv);
    gauss_cmd->add_option("--seed", seed);
    gauss_cmd->add_option("--out", out_path, "CSV path");
    gauss_cmd->add_option("--json", json_path, "summary JSON path");

    auto* tc_cmd = app.add_subcommand("transform-checks", "transform verification battery");
    tc_cmd->add_option("--which", which, "hilbert-decay|riesz-decay|representation|riesz-decomp")
        ->required();
    tc_cmd->add_option("--d", d);
    tc_cmd->add_option("--k", k);
    tc_cmd->add_option("--out", out_path);

    auto* audit_cmd = app.add_subcommand("audit", "bound-ratio audit over a random corpus");
    audit_cmd->add_option("--config", config_path, "experiment config JSON");
    audit_cmd->add_option("--d", d);
    audit_cmd->add_option("--seed", seed);
    audit_cmd->add_option("--out", out_path, "CSV path");
    audit_cmd->add_option("--json", json_path, "summary JSON path");

    auto* xscan_cmd = app.add_subcommand("scan", "exponent scan (headline table)");
    xscan_cmd->add_option("--config", config_path, "experiment config JSON");
    xscan_cmd->add_option("--d", d);
    xscan_cmd->add_option("--eps", eps_csv);
    xscan_cmd->add_option("--out", out_path, "CSV path");
    xscan_cmd->add_option("--json", json_path, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sw_cmd->parsed()) {
            auto mu = sot::load_measure_json(mu_path);
            auto nu = sot::load_measure_json(nu_path);
            emit(estimate_json(sot::sw(mu, nu, p, n_directions, seed)), out_path);
        } else if (msw_cmd->parsed()) {
            auto mu = sot::load_measure_json(mu_path);
            auto nu = sot::load_measure_json(nu_path);
            std::vector<double> best;
            auto est = sot::msw(mu, nu, n_candidates, n_refine, seed, &best);
            auto j = estimate_json(est);
            j["direction"] = best;
            emit(j, out_path);
        } else if (swk_cmd->parsed()) {
            auto mu = sot::load_measure_json(mu_path);
            auto nu = sot::load_measure_json(nu_path);
            emit(estimate_json(sot::sw_k(mu, nu, k, n_directions, seed)), out_path);
        } else if (w1_cmd->parsed()) {
            auto mu = sot::load_measure_json(mu_path);
            auto nu = sot::load_measure_json(nu_path);
            auto plan = sot::w1_exact(mu, nu);
            if (!plan_path.empty()) {
                std::ofstream out(plan_path);
                out << sot::plan_to_json(plan) << "\n";
            }
            emit({{"value", plan.cost}, {"dual_gap", sot::dual_gap(plan)}}, out_path);
        } else if (esw_cmd->parsed()) {
            auto mu = sot::load_measure_json(mu_path);
            auto nu = sot::load_measure_json(nu_path);
            emit({{"value", sot::empirical_sw(mu, nu, load_directions(dirs_path))}}, out_path);
        } else if (scan_cmd->parsed()) {
            sot::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = sot::load_config(config_path);
            cfg.experiment = "scan";
            if (scan_cmd->count("--d")) cfg.d = d;
            if (scan_cmd->count("--eps")) cfg.eps_grid = parse_grid(eps_csv);
            auto rep = sot::run_exponent_scan(cfg);
            sot::write_scan_csv(out_path, rep.scan, sot::config_hash(cfg));
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << sot::scan_to_json(rep.scan, cfg) << "\n";
            }
            std::cout << rep.table;
        } else if (gauss_cmd->parsed()) {
            sot::ExperimentConfig cfg;
            cfg.experiment = "gaussian";
            cfg.eps_grid = parse_grid(eps_csv);
            cfg.seed = seed;
            cfg.n_atoms = 100000;
            cfg.n_directions = 2000;
            auto rep = sot::run_gaussian_repro(cfg);
            if (!out_path.empty()) sot::write_gaussian_csv(out_path, rep, sot::config_hash(cfg));
            std::string js = sot::gaussian_to_json(rep, cfg);
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << js << "\n";
            } else {
                std::cout << js << "\n";
            }
        } else if (tc_cmd->parsed()) {
            nlohmann::ordered_json j;
            if (which == "hilbert-decay") {
                std::vector<double> grid;
                for (int i = 0; i < 12; ++i) grid.push_back(4.0 * std::pow(16.0, i / 11.0));
                auto fit = sot::hilbert_decay_check(k, grid);
                j["which"] = which;
                j["k"] = k;
                j["slope"] = fit.slope;
                j["sup_weighted"] = fit.sup_weighted;
                j["grid"] = fit.grid;
            } else if (which == "riesz-decay") {
                std::vector<double> grid;
                for (int i = 0; i < 10; ++i) grid.push_back(4.0 * std::pow(8.0, i / 9.0));
                auto fit = sot::riesz_decay_check(k, grid, true);
                j["which"] = which;
                j["k"] = k;
                j["slope"] = fit.slope;
                j["sup_weighted"] = fit.sup_weighted;
                j["grid"] = fit.grid;
            } else if (which == "representation") {
                auto res = sot::representation_check(d, {0.0, 0.5, 1.0});
                j["which"] = which;
                j["d"] = d;
                j["max_error"] = res.max_error;
                j["resolved_sign"] = res.resolved_sign;
                j["errors"] = res.errors;
            } else if (which == "riesz-decomp") {
                j["which"] = which;
                j["k"] = k;
                j["max_error"] = sot::riesz_decomposition_check(k);
            } else {
                throw CLI::ValidationError("--which", "unknown check");
            }
            emit(j, out_path);
        } else if (audit_cmd->parsed()) {
            sot::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = sot::load_config(config_path);
            cfg.experiment = "audit";
            if (audit_cmd->count("--d")) cfg.d = d;
            if (audit_cmd->count("--seed")) cfg.seed = seed;
            auto audit = sot::run_bound_audit(cfg);
            if (!out_path.empty()) sot::write_audit_csv(out_path, audit, sot::config_hash(cfg));
            std::string js = sot::audit_to_json(audit, cfg);
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << js << "\n";
            } else {
                std::cout << js << "\n";
            }
            if (!audit.inequalities_hold) {
                std::cerr << "inequality violation: " << audit.violation << "\n";
                return kExitInequality;
            }
        } else if (xscan_cmd->parsed()) {
            sot::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = sot::load_config(config_path);
            cfg.experiment = "scan";
            if (xscan_cmd->count("--d")) cfg.d = d;
            if (xscan_cmd->count("--eps")) cfg.eps_grid = parse_grid(eps_csv);
            auto rep = sot::run_exponent_scan(cfg);
            if (!out_path.empty()) sot::write_scan_csv(out_path, rep.scan, sot::config_hash(cfg));
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << sot::scan_to_json(rep.scan, cfg) << "\n";
            }
            std::cout << rep.table;
        }
    } catch (const sot::QuadratureError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
