#include "sot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sot/ot1d.hpp"
#include "sot/ot_exact.hpp"
#include "sot/rng.hpp"

namespace sot {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json quad_to_json(const QuadSpec& q) {
    return {{"outer_nodes", q.outer_nodes},   {"outer_panels", q.outer_panels},
            {"vertical_panels", q.vertical_panels}, {"outer_tol", q.outer_tol},
            {"t_nodes", q.t_nodes},           {"t_panels", q.t_panels},
            {"t_tol", q.t_tol},               {"max_depth", q.max_depth},
            {"s_nodes", q.s_nodes},           {"cache_points", q.cache_points}};
}

QuadSpec quad_from_json(const nlohmann::json& j) {
    QuadSpec q;
    q.outer_nodes = j.value("outer_nodes", q.outer_nodes);
    q.outer_panels = j.value("outer_panels", q.outer_panels);
    q.vertical_panels = j.value("vertical_panels", q.vertical_panels);
    q.outer_tol = j.value("outer_tol", q.outer_tol);
    q.t_nodes = j.value("t_nodes", q.t_nodes);
    q.t_panels = j.value("t_panels", q.t_panels);
    q.t_tol = j.value("t_tol", q.t_tol);
    q.max_depth = j.value("max_depth", q.max_depth);
    q.s_nodes = j.value("s_nodes", q.s_nodes);
    q.cache_points = j.value("cache_points", q.cache_points);
    return q;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = cfg.experiment;
    j["d"] = cfg.d;
    j["k"] = cfg.k;
    j["eps_grid"] = cfg.eps_grid;
    j["seed"] = cfg.seed;
    j["n_instances"] = cfg.n_instances;
    j["n_directions"] = cfg.n_directions;
    j["n_atoms"] = cfg.n_atoms;
    j["msw_candidates"] = cfg.msw_candidates;
    j["msw_refine"] = cfg.msw_refine;
    j["radius"] = cfg.radius;
    j["quad"] = quad_to_json(cfg.quad);
    j["out_csv"] = cfg.out_csv;
    j["out_json"] = cfg.out_json;
    return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    cfg.experiment = j.value("experiment", cfg.experiment);
    cfg.d = j.value("d", cfg.d);
    cfg.k = j.value("k", cfg.k);
    cfg.eps_grid = j.value("eps_grid", cfg.eps_grid);
    if (!j.contains("seed")) throw std::invalid_argument("config: explicit seed required");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.n_instances = j.value("n_instances", cfg.n_instances);
    cfg.n_directions = j.value("n_directions", cfg.n_directions);
    cfg.n_atoms = j.value("n_atoms", cfg.n_atoms);
    cfg.msw_candidates = j.value("msw_candidates", cfg.msw_candidates);
    cfg.msw_refine = j.value("msw_refine", cfg.msw_refine);
    cfg.radius = j.value("radius", cfg.radius);
    if (j.contains("quad")) cfg.quad = quad_from_json(j["quad"]);
    cfg.out_csv = j.value("out_csv", cfg.out_csv);
    cfg.out_json = j.value("out_json", cfg.out_json);
    if (cfg.eps_grid.empty()) throw std::invalid_argument("config: empty eps grid");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a64(config_to_json(cfg)); }

std::pair<DiscreteMeasure, DiscreteMeasure> corpus_pair(int d, double radius, int atoms, int kind,
                                                        std::uint64_t seed) {
    auto g = substream(seed, "corpus", std::uint64_t(kind) << 32);
    auto clip = [&](std::vector<double>& x) {
        double n2 = 0.0;
        for (double c : x) n2 += c * c;
        double n = std::sqrt(n2);
        if (n > radius)
            for (double& c : x) c *= radius / n;
    };
    auto gauss_mixture = [&](int modes) {
        std::vector<std::vector<double>> centers(modes, std::vector<double>(d));
        for (auto& c : centers)
            for (double& v : c) v = 0.5 * radius * g.gaussian();
        std::vector<std::vector<double>> pts(atoms);
        std::vector<double> w(atoms, 1.0);
        for (int i = 0; i < atoms; ++i) {
            const auto& c = centers[std::size_t(g.uniform() * modes) % modes];
            std::vector<double> x(d);
            for (int q = 0; q < d; ++q) x[q] = c[q] + 0.2 * radius * g.gaussian();
            clip(x);
            pts[i] = std::move(x);
        }
        return make_discrete(pts, w);
    };
    auto uniform_cloud = [&]() {
        std::vector<std::vector<double>> pts(atoms);
        std::vector<double> w(atoms, 1.0);
        for (int i = 0; i < atoms; ++i) {
            std::vector<double> x(d);
            for (int q = 0; q < d; ++q) x[q] = radius * (2.0 * g.uniform() - 1.0);
            clip(x);
            pts[i] = std::move(x);
        }
        return make_discrete(pts, w);
    };
    switch (kind % 3) {
        case 0:
            return {gauss_mixture(2), gauss_mixture(3)};
        case 1:
            return {uniform_cloud(), gauss_mixture(1)};
        default: {
            // near-degenerate: shared support, perturbed weights
            DiscreteMeasure base = uniform_cloud();
            std::vector<std::vector<double>> pts;
            std::vector<double> w1v, w2v;
            for (std::size_t i = 0; i < base.size(); ++i) {
                pts.emplace_back(base.point(i).begin(), base.point(i).end());
                double wi = base.weight(i);
                w1v.push_back(wi);
                w2v.push_back(wi * (1.0 + 0.5 * (g.uniform() - 0.5)));
            }
            return {make_discrete(pts, w1v), make_discrete(pts, w2v)};
        }
    }
}

BoundAudit run_bound_audit(const ExperimentConfig& cfg) {
    BoundAudit audit;
    const double tiny = 1e-30;
    auto push_ratios = [&](AuditRecord& r) {
        const int d = r.d, k = cfg.k;
        if (r.sw1 > tiny && r.w1 > tiny) {
            r.ratio_thm = r.w1 / (std::pow(r.radius, double(d - 1) / d) * std::pow(r.sw1, 1.0 / d));
            r.ratio_bonnotte =
                r.w1 / (std::pow(r.radius, double(d) / (d + 1)) * std::pow(r.sw1, 1.0 / (d + 1)));
        }
        if (r.msw1 > tiny && r.w1 > tiny)
            r.ratio_bobkov =
                r.w1 / (std::pow(r.radius, double(d) / (d + 2)) * std::pow(r.msw1, 2.0 / (d + 2)));
        if (r.swk > tiny && r.w1 > tiny)
            r.ratio_thm_k = r.w1 / (std::pow(r.radius, double(d - k) / (d - k + 1)) *
                                    std::pow(r.swk, 1.0 / (d - k + 1)));
    };

    for (int inst = 0; inst < cfg.n_instances; ++inst) {
        auto [mu, nu] = corpus_pair(cfg.d, cfg.radius, 24, inst, cfg.seed + inst);
        AuditRecord r;
        r.instance = "corpus-" + std::to_string(inst);
        r.d = cfg.d;
        r.radius = cfg.radius;
        r.w1 = w1_exact(mu, nu).cost;
        auto sw_est = sw(mu, nu, 1.0, cfg.n_directions, cfg.seed + inst);
        r.sw1 = sw_est.value;
        r.sw1_se = sw_est.std_error;
        auto msw_est = msw(mu, nu, cfg.msw_candidates, cfg.msw_refine, cfg.seed + inst);
        r.msw1 = msw_est.value;
        if (cfg.k >= 1 && cfg.k <= cfg.d - 1) {
            auto swk_est = sw_k(mu, nu, cfg.k, std::max(16, cfg.n_directions / 8), cfg.seed + inst);
            r.swk = swk_est.value;
            r.swk_se = swk_est.std_error;
        }
        push_ratios(r);
        if (r.sw1 > r.w1 + 1e-9) {
            audit.inequalities_hold = false;
            audit.violation = r.instance + ": mean sliced distance exceeds ambient W1";
        }
        if (r.sw1 > r.msw1 + 3.0 * r.sw1_se + 1e-9) {
            audit.inequalities_hold = false;
            audit.violation = r.instance + ": mean sliced distance exceeds max-sliced estimate";
        }
        audit.records.push_back(std::move(r));
    }

    // analytic family rows: implied-constant stability across eps is the
    // sharpness signature; the bonnotte column decays toward zero instead
    if (cfg.d >= 3) {
        auto fam = CounterexampleFamily::make(cfg.d, cfg.quad.cache_points);
        for (double eps : cfg.eps_grid) {
            AuditRecord r;
            r.instance = "family-eps-" + fmt17(eps);
            r.d = cfg.d;
            r.radius = 1.0;
            r.w1 = w1_lower_bound(fam, eps);
            r.sw1 = sw1_mu_mueps(fam, eps, cfg.quad);
            push_ratios(r);
            audit.records.push_back(std::move(r));
        }
    }
    return audit;
}

ExponentScanReport run_exponent_scan(const ExperimentConfig& cfg) {
    if (cfg.d < 3) throw std::invalid_argument("exponent scan: needs d >= 3");
    auto fam = CounterexampleFamily::make(cfg.d, cfg.quad.cache_points);
    ExponentScanReport rep;
    rep.scan = scaling_scan(fam, cfg.eps_grid, cfg.quad);
    std::ostringstream os;
    os << "eps          sw1               w1_lower          m_eps\n";
    for (const auto& r : rep.scan.rows)
        os << fmt17(r.eps) << "  " << fmt17(r.sw1) << "  " << fmt17(r.w1_lower) << "  "
           << fmt17(r.m_eps) << "\n";
    os << "sw slope = " << fmt17(rep.scan.sw_fit.slope)
       << " (max residual " << fmt17(rep.scan.sw_fit.max_residual) << ")\n";
    os << "w1 lower-bound slope = " << fmt17(rep.scan.w_fit.slope) << "\n";
    rep.table = os.str();
    return rep;
}

std::pair<DiscreteMeasure, DiscreteMeasure> sample_gaussian_pair(int n_atoms, double eps,
                                                                 std::uint64_t seed) {
    std::vector<std::vector<double>> mu_pts(n_atoms), nu_pts(n_atoms);
    std::vector<double> w(n_atoms, 1.0);
    auto g = substream(seed, "gauss-pair", 0);
    for (int i = 0; i < n_atoms; ++i) {
        double x = g.gaussian(), y = g.gaussian();
        mu_pts[i] = {x, 0.0};
        nu_pts[i] = {x, eps * y};
    }
    return {make_discrete(mu_pts, w), make_discrete(nu_pts, w)};
}

GaussianRepro run_gaussian_repro(const ExperimentConfig& cfg) {
    GaussianRepro rep;
    for (double eps : cfg.eps_grid) {
        GaussianReproRow row;
        row.eps = eps;
        row.sw_closed = gaussian_example_sw_closed_form(eps);
        row.w1_closed = gaussian_example_w1(eps);
        auto [mu, nu] = sample_gaussian_pair(cfg.n_atoms, eps, cfg.seed);
        auto est = sw(mu, nu, 1.0, cfg.n_directions, cfg.seed);
        row.sw_mc = est.value;
        row.sw_mc_se = est.std_error;
        // quarter-sample replicates estimate the atom-sampling error; their
        // extra direction noise only makes the estimate conservative
        std::vector<double> quarters;
        const int quarter_dirs = std::max(200, cfg.n_directions / 4);
        for (int q = 0; q < 4; ++q) {
            auto [qmu, qnu] =
                sample_gaussian_pair(cfg.n_atoms / 4, eps, cfg.seed + 1000 + std::uint64_t(q));
            quarters.push_back(sw(qmu, qnu, 1.0, quarter_dirs, cfg.seed).value);
        }
        double qm = 0.0;
        for (double v : quarters) qm += v;
        qm /= 4.0;
        double qv = 0.0;
        for (double v : quarters) qv += (v - qm) * (v - qm);
        row.sw_atoms_se = std::sqrt(qv / 3.0) / 2.0;
        row.ratio = row.sw_closed / (eps * eps * std::abs(std::log(eps)));
        rep.rows.push_back(row);
    }
    // closed-form ratio bounds over a dense grid in [1e-3, 0.3]
    rep.ratio_min = 1e300;
    rep.ratio_max = 0.0;
    for (int i = 0; i <= 40; ++i) {
        double eps = 1e-3 * std::pow(300.0, i / 40.0);
        double ratio = gaussian_example_sw_closed_form(eps) / (eps * eps * std::abs(std::log(eps)));
        rep.ratio_min = std::min(rep.ratio_min, ratio);
        rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
    return rep;
}

void write_scan_csv(const std::string& path, const ScalingScan& scan, std::uint64_t cfg_hash) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "eps,sw1,w1_lower,m_eps,sw1_normalized,w1_normalized,sw1_vertical,sw1_generic,config\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg_hash));
    for (const auto& r : scan.rows)
        out << fmt17(r.eps) << ',' << fmt17(r.sw1) << ',' << fmt17(r.w1_lower) << ','
            << fmt17(r.m_eps) << ',' << fmt17(r.sw1_normalized) << ',' << fmt17(r.w1_normalized)
            << ',' << fmt17(r.sw1_vertical) << ',' << fmt17(r.sw1_generic) << ',' << hash << "\n";
}

void write_audit_csv(const std::string& path, const BoundAudit& audit, std::uint64_t cfg_hash) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,d,radius,w1,sw1,sw1_se,msw1,swk,swk_se,ratio_thm,ratio_thm_k,"
           "ratio_bonnotte,ratio_bobkov,config\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg_hash));
    for (const auto& r : audit.records)
        out << r.instance << ',' << r.d << ',' << fmt17(r.radius) << ',' << fmt17(r.w1) << ','
            << fmt17(r.sw1) << ',' << fmt17(r.sw1_se) << ',' << fmt17(r.msw1) << ','
            << fmt17(r.swk) << ',' << fmt17(r.swk_se) << ',' << fmt17(r.ratio_thm) << ','
            << fmt17(r.ratio_thm_k) << ',' << fmt17(r.ratio_bonnotte) << ','
            << fmt17(r.ratio_bobkov) << ',' << hash << "\n";
}

void write_gaussian_csv(const std::string& path, const GaussianRepro& rep, std::uint64_t cfg_hash) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "eps,sw_closed,w1_closed,sw_mc,sw_mc_se,sw_atoms_se,ratio,config\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg_hash));
    for (const auto& r : rep.rows)
        out << fmt17(r.eps) << ',' << fmt17(r.sw_closed) << ',' << fmt17(r.w1_closed) << ','
            << fmt17(r.sw_mc) << ',' << fmt17(r.sw_mc_se) << ',' << fmt17(r.sw_atoms_se) << ','
            << fmt17(r.ratio) << ',' << hash << "\n";
}

std::string scan_to_json(const ScalingScan& scan, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash(cfg);
    j["sw_slope"] = scan.sw_fit.slope;
    j["sw_intercept"] = scan.sw_fit.intercept;
    j["sw_max_residual"] = scan.sw_fit.max_residual;
    j["w1_slope"] = scan.w_fit.slope;
    j["sw_slope_normalized"] = scan.sw_fit_normalized.slope;
    j["w1_slope_normalized"] = scan.w_fit_normalized.slope;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : scan.rows)
        rows.push_back({{"eps", r.eps},
                        {"sw1", r.sw1},
                        {"w1_lower", r.w1_lower},
                        {"m_eps", r.m_eps},
                        {"sw1_normalized", r.sw1_normalized},
                        {"w1_normalized", r.w1_normalized},
                        {"sw1_vertical", r.sw1_vertical},
                        {"sw1_generic", r.sw1_generic}});
    j["rows"] = std::move(rows);
    return j.dump();
}

std::string audit_to_json(const BoundAudit& audit, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash(cfg);
    j["inequalities_hold"] = audit.inequalities_hold;
    j["violation"] = audit.violation;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : audit.records)
        rows.push_back({{"instance", r.instance},
                        {"w1", r.w1},
                        {"sw1", r.sw1},
                        {"msw1", r.msw1},
                        {"swk", r.swk},
                        {"ratio_thm", r.ratio_thm},
                        {"ratio_thm_k", r.ratio_thm_k},
                        {"ratio_bonnotte", r.ratio_bonnotte},
                        {"ratio_bobkov", r.ratio_bobkov}});
    j["rows"] = std::move(rows);
    return j.dump();
}

std::string gaussian_to_json(const GaussianRepro& rep, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash(cfg);
    j["ratio_min"] = rep.ratio_min;
    j["ratio_max"] = rep.ratio_max;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"eps", r.eps},
                        {"sw_closed", r.sw_closed},
                        {"w1_closed", r.w1_closed},
                        {"sw_mc", r.sw_mc},
                        {"sw_mc_se", r.sw_mc_se},
                        {"sw_atoms_se", r.sw_atoms_se},
                        {"ratio", r.ratio}});
    j["rows"] = std::move(rows);
    return j.dump();
}

}  // namespace sot
