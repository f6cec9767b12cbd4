#include "sot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sot/quadrature.hpp"

namespace sot {

double DiscreteMeasure::first_moment() const {
    KahanSum acc;
    for (std::size_t i = 0; i < size(); ++i) {
        double n2 = 0.0;
        auto p = point(i);
        for (double c : p) n2 += c * c;
        acc.add(weights_[i] * std::sqrt(n2));
    }
    return acc.value();
}

double DiscreteMeasure::radius() const {
    double r2 = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double n2 = 0.0;
        for (double c : point(i)) n2 += c * c;
        r2 = std::max(r2, n2);
    }
    return std::sqrt(r2);
}

DiscreteMeasure make_discrete_flat(int dim, std::vector<double> flat, std::vector<double> w) {
    if (dim <= 0) throw std::invalid_argument("make_discrete: dimension must be positive");
    if (w.empty()) throw std::invalid_argument("make_discrete: no atoms");
    if (flat.size() != w.size() * std::size_t(dim))
        throw std::invalid_argument("make_discrete: point/weight size mismatch");
    for (double x : flat)
        if (!std::isfinite(x)) throw std::invalid_argument("make_discrete: non-finite coordinate");
    KahanSum total;
    for (double x : w) {
        if (!std::isfinite(x)) throw std::invalid_argument("make_discrete: non-finite weight");
        if (x < 0.0) throw std::invalid_argument("make_discrete: negative weight");
        total.add(x);
    }
    if (!(total.value() > 0.0)) throw std::invalid_argument("make_discrete: all weights are zero");

    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    auto lex_less = [&](std::size_t a, std::size_t b) {
        for (int c = 0; c < dim; ++c) {
            double xa = flat[a * dim + c], xb = flat[b * dim + c];
            if (xa != xb) return xa < xb;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), lex_less);

    DiscreteMeasure out;
    out.dim_ = dim;
    const double inv = 1.0 / total.value();
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t i = order[k];
        double wk = w[i] * inv;
        bool dup = false;
        if (!out.weights_.empty()) {
            dup = true;
            std::size_t last = out.weights_.size() - 1;
            for (int c = 0; c < dim; ++c)
                if (out.points_[last * dim + c] != flat[i * dim + c]) {
                    dup = false;
                    break;
                }
        }
        if (dup) {
            out.weights_.back() += wk;
        } else if (wk > 0.0) {
            out.points_.insert(out.points_.end(), flat.begin() + i * dim,
                               flat.begin() + (i + 1) * dim);
            out.weights_.push_back(wk);
        }
    }
    // merged duplicates can have absorbed zero-weight atoms; prune leftovers
    std::vector<double> pts, ws;
    for (std::size_t i = 0; i < out.weights_.size(); ++i) {
        if (out.weights_[i] > 0.0) {
            pts.insert(pts.end(), out.points_.begin() + i * dim, out.points_.begin() + (i + 1) * dim);
            ws.push_back(out.weights_[i]);
        }
    }
    out.points_ = std::move(pts);
    out.weights_ = std::move(ws);
    if (out.weights_.empty()) throw std::invalid_argument("make_discrete: all weights are zero");
    return out;
}

DiscreteMeasure make_discrete(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights) {
    if (points.empty()) throw std::invalid_argument("make_discrete: no atoms");
    if (points.size() != weights.size())
        throw std::invalid_argument("make_discrete: point/weight count mismatch");
    const int dim = int(points[0].size());
    std::vector<double> flat;
    flat.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (int(p.size()) != dim)
            throw std::invalid_argument("make_discrete: inconsistent point dimensions");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return make_discrete_flat(dim, std::move(flat), weights);
}

SignedDiscreteMeasure signed_split(
    const std::vector<std::pair<std::vector<double>, double>>& atoms) {
    KahanSum total, pos;
    bool has_pos = false, has_neg = false;
    for (const auto& [p, w] : atoms) {
        (void)p;
        total.add(w);
        if (w > 0.0) {
            has_pos = true;
            pos.add(w);
        }
        if (w < 0.0) has_neg = true;
    }
    if (std::abs(total.value()) > 1e-10)
        throw std::invalid_argument("signed_split: signed weights do not balance");
    if (!has_pos || !has_neg)
        throw std::invalid_argument("signed_split: need both positive and negative weights");

    std::vector<std::vector<double>> pp, np;
    std::vector<double> pw, nw;
    for (const auto& [p, w] : atoms) {
        if (w > 0.0) {
            pp.push_back(p);
            pw.push_back(w);
        } else if (w < 0.0) {
            np.push_back(p);
            nw.push_back(-w);
        }
    }
    SignedDiscreteMeasure out;
    out.mass = pos.value();
    out.positive = make_discrete(pp, pw);
    out.negative = make_discrete(np, nw);
    if (out.positive.dim() != out.negative.dim())
        throw std::invalid_argument("signed_split: inconsistent dimensions");
    return out;
}

StepCDF make_step_cdf(std::vector<double> values, std::vector<double> weights) {
    if (values.size() != weights.size() || values.empty())
        throw std::invalid_argument("make_step_cdf: bad input");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    StepCDF cdf;
    KahanSum run;
    for (std::size_t k = 0; k < order.size(); ++k) {
        double v = values[order[k]];
        run.add(weights[order[k]]);
        if (!cdf.breakpoints.empty() && cdf.breakpoints.back() == v)
            cdf.cumulative.back() = run.value();
        else {
            cdf.breakpoints.push_back(v);
            cdf.cumulative.push_back(run.value());
        }
    }
    if (std::abs(cdf.cumulative.back() - 1.0) > 1e-12)
        throw std::invalid_argument("make_step_cdf: weights do not sum to 1");
    cdf.cumulative.back() = 1.0;
    return cdf;
}

StepCDF project_1d(const DiscreteMeasure& mu, std::span<const double> theta) {
    if (int(theta.size()) != mu.dim())
        throw std::invalid_argument("project_1d: direction dimension mismatch");
    double n2 = 0.0;
    for (double c : theta) n2 += c * c;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
        throw std::invalid_argument("project_1d: direction is not unit length");
    std::vector<double> dots(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto p = mu.point(i);
        double d = 0.0;
        for (int c = 0; c < mu.dim(); ++c) d += p[c] * theta[c];
        dots[i] = d;
    }
    return make_step_cdf(std::move(dots), mu.weights());
}

void validate_analytic(const Analytic1DMeasure& m, std::size_t grid) {
    if (grid < 1000) grid = 1000;
    if (!(m.support_hi > m.support_lo))
        throw std::invalid_argument("analytic measure: empty support");
    if (std::abs(m.cdf(m.support_lo)) > 1e-10 || std::abs(m.cdf(m.support_hi) - 1.0) > 1e-10)
        throw std::invalid_argument("analytic measure: cdf endpoints off");
    double prev = m.cdf(m.support_lo);
    for (std::size_t i = 1; i <= grid; ++i) {
        double t = m.support_lo + (m.support_hi - m.support_lo) * double(i) / double(grid);
        double v = m.cdf(t);
        if (v < prev - 1e-12) throw std::invalid_argument("analytic measure: cdf not monotone");
        prev = v;
    }
}

std::string measure_to_json(const DiscreteMeasure& mu) {
    nlohmann::ordered_json j;
    j["dim"] = mu.dim();
    auto pts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (double c : mu.point(i)) row.push_back(c);
        pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    j["weights"] = mu.weights();
    return j.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int dim = j.at("dim").get<int>();
    std::vector<std::vector<double>> pts = j.at("points").get<std::vector<std::vector<double>>>();
    std::vector<double> w = j.at("weights").get<std::vector<double>>();
    for (const auto& p : pts)
        if (int(p.size()) != dim) throw std::invalid_argument("measure json: dim mismatch");
    return make_discrete(pts, w);
}

DiscreteMeasure load_measure_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return measure_from_json(ss.str());
}

void save_measure_json(const DiscreteMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << measure_to_json(mu) << "\n";
}

DiscreteMeasure load_measure_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> pts;
    std::vector<double> ws;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw std::runtime_error("csv row needs >= 1 coordinate + weight");
        ws.push_back(row.back());
        row.pop_back();
        pts.push_back(std::move(row));
    }
    return make_discrete(pts, ws);
}

}  // namespace sot
