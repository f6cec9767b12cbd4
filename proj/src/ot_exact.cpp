#include "sot/ot_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "sot/quadrature.hpp"

namespace sot {

namespace {

// Bipartite transportation simplex. Nodes: sources 0..n-1, sinks n..n+m-1.
// Basis is a spanning tree of n+m-1 arcs; block pricing with a rolling
// pointer; Bland's rule engaged after a degenerate stall so termination is
// guaranteed; all tie-breaks are lowest-(i,j) and therefore deterministic.
class TransportSimplex {
public:
    TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                     std::vector<double> cost)
        : n_(int(supply.size())),
          m_(int(demand.size())),
          a_(std::move(supply)),
          b_(std::move(demand)),
          c_(std::move(cost)) {
        balance();
        double cmax = 0.0;
        for (double v : c_) cmax = std::max(cmax, std::abs(v));
        tol_ = 1e-11 * (1.0 + cmax);
        northwest_start();
    }

    void solve() {
        const int nodes = n_ + m_;
        const std::uint64_t narcs = std::uint64_t(n_) * std::uint64_t(m_);
        const std::uint64_t block =
            std::max<std::uint64_t>(64, 2 * std::uint64_t(std::sqrt(double(narcs))));
        const std::uint64_t pivot_cap = 1000ULL * std::uint64_t(nodes) + 100000ULL;
        std::uint64_t roll = 0, pivots = 0, stall = 0;
        bool bland = false;

        build_tree();
        compute_potentials();
        while (true) {
            int ei = -1, ej = -1;
            if (!bland) {
                double best = -tol_;
                std::uint64_t scanned = 0;
                std::uint64_t k = roll;
                bool found = false;
                while (scanned < narcs) {
                    std::uint64_t stop = std::min<std::uint64_t>(narcs, scanned + block);
                    for (; scanned < stop; ++scanned, ++k) {
                        if (k >= narcs) k = 0;
                        int i = int(k / m_), j = int(k % m_);
                        double rc = c_[k] - u_[i] - v_[j];
                        if (rc < best) {
                            best = rc;
                            ei = i;
                            ej = j;
                            found = true;
                        }
                    }
                    if (found) break;
                }
                roll = k;
            } else {
                for (std::uint64_t k = 0; k < narcs; ++k) {
                    int i = int(k / m_), j = int(k % m_);
                    if (c_[k] - u_[i] - v_[j] < -tol_) {
                        ei = i;
                        ej = j;
                        break;
                    }
                }
            }
            if (ei < 0) break;  // dual feasible: optimal

            double moved = pivot(ei, ej);
            if (moved > 0.0) {
                stall = 0;
                bland = false;
            } else if (++stall > 4ULL * std::uint64_t(nodes)) {
                bland = true;
            }
            if (++pivots > pivot_cap)
                throw std::runtime_error("w1_exact: pivot limit exceeded");
            build_tree();
            compute_potentials();
        }
    }

    TransportPlan extract() const {
        TransportPlan plan;
        plan.source_weights = a_;
        plan.target_weights = b_;
        plan.dual_source = u_;
        plan.dual_target = v_;
        KahanSum total;
        for (std::size_t k = 0; k < bi_.size(); ++k) {
            if (bflow_[k] > 0.0) {
                plan.entries.push_back({bi_[k], bj_[k], bflow_[k]});
                total.add(bflow_[k] * c_[std::uint64_t(bi_[k]) * m_ + bj_[k]]);
            }
        }
        std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& x, const PlanEntry& y) {
            return x.source != y.source ? x.source < y.source : x.target < y.target;
        });
        plan.cost = total.value();
        return plan;
    }

private:
    void balance() {
        KahanSum sa, sb;
        for (double x : a_) sa.add(x);
        for (double x : b_) sb.add(x);
        double f = sa.value() / sb.value();
        for (double& x : b_) x *= f;
        KahanSum sb2;
        for (double x : b_) sb2.add(x);
        b_.back() += sa.value() - sb2.value();
    }

    void northwest_start() {
        bi_.clear();
        bj_.clear();
        bflow_.clear();
        int i = 0, j = 0;
        double ra = a_[0], rb = b_[0];
        while (true) {
            double f = std::min(ra, rb);
            bi_.push_back(i);
            bj_.push_back(j);
            bflow_.push_back(std::max(f, 0.0));
            ra -= f;
            rb -= f;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (ra == 0.0 && i < n_ - 1) {
                ++i;
                ra = a_[i];
            } else {
                ++j;
                rb = (j < m_) ? b_[j] : 0.0;
            }
        }
    }

    void build_tree() {
        const int nodes = n_ + m_;
        adj_head_.assign(nodes, -1);
        adj_next_.assign(2 * bi_.size(), -1);
        adj_arc_.assign(2 * bi_.size(), -1);
        for (std::size_t k = 0; k < bi_.size(); ++k) {
            int s = bi_[k], t = n_ + bj_[k];
            int slot = int(2 * k);
            adj_arc_[slot] = int(k);
            adj_next_[slot] = adj_head_[s];
            adj_head_[s] = slot;
            slot = int(2 * k + 1);
            adj_arc_[slot] = int(k);
            adj_next_[slot] = adj_head_[t];
            adj_head_[t] = slot;
        }
        parent_.assign(nodes, -1);
        parent_arc_.assign(nodes, -1);
        depth_.assign(nodes, 0);
        order_.clear();
        order_.reserve(nodes);
        order_.push_back(0);
        parent_[0] = 0;
        for (std::size_t q = 0; q < order_.size(); ++q) {
            int x = order_[q];
            for (int s = adj_head_[x]; s >= 0; s = adj_next_[s]) {
                int k = adj_arc_[s];
                int other = (x < n_) ? n_ + bj_[k] : bi_[k];
                if (parent_[other] < 0) {
                    parent_[other] = x;
                    parent_arc_[other] = k;
                    depth_[other] = depth_[x] + 1;
                    order_.push_back(other);
                }
            }
        }
        if (int(order_.size()) != nodes)
            throw std::runtime_error("w1_exact: basis lost tree connectivity");
    }

    void compute_potentials() {
        u_.assign(n_, 0.0);
        v_.assign(m_, 0.0);
        for (std::size_t q = 1; q < order_.size(); ++q) {
            int x = order_[q];
            int k = parent_arc_[x];
            double cost = c_[std::uint64_t(bi_[k]) * m_ + bj_[k]];
            if (x < n_)
                u_[x] = cost - v_[bj_[k]];
            else
                v_[x - n_] = cost - u_[bi_[k]];
        }
    }

    // Push flow around the cycle closed by entering arc (ei, ej); returns the
    // amount moved. Leaving arc chosen as min-flow backward arc, ties by
    // lowest (i, j).
    double pivot(int ei, int ej) {
        int x = ei, y = n_ + ej;
        cyc_arcs_.clear();
        cyc_signs_.clear();
        // climb to common depth, then together; signs alternate starting at -1
        // on both branch ends (the arcs adjacent to the entering arc's nodes)
        std::vector<int>& arcs_x = scratch_x_;
        std::vector<int>& arcs_y = scratch_y_;
        arcs_x.clear();
        arcs_y.clear();
        while (depth_[x] > depth_[y]) {
            arcs_x.push_back(parent_arc_[x]);
            x = parent_[x];
        }
        while (depth_[y] > depth_[x]) {
            arcs_y.push_back(parent_arc_[y]);
            y = parent_[y];
        }
        while (x != y) {
            arcs_x.push_back(parent_arc_[x]);
            x = parent_[x];
            arcs_y.push_back(parent_arc_[y]);
            y = parent_[y];
        }
        int sgn = -1;
        for (int k : arcs_x) {
            cyc_arcs_.push_back(k);
            cyc_signs_.push_back(sgn);
            sgn = -sgn;
        }
        sgn = -1;
        for (int k : arcs_y) {
            cyc_arcs_.push_back(k);
            cyc_signs_.push_back(sgn);
            sgn = -sgn;
        }

        double t = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t q = 0; q < cyc_arcs_.size(); ++q) {
            if (cyc_signs_[q] < 0) {
                int k = cyc_arcs_[q];
                if (bflow_[k] < t ||
                    (bflow_[k] == t &&
                     (leave < 0 || bi_[k] < bi_[leave] ||
                      (bi_[k] == bi_[leave] && bj_[k] < bj_[leave])))) {
                    t = bflow_[k];
                    leave = k;
                }
            }
        }
        if (leave < 0) throw std::runtime_error("w1_exact: unbounded pivot");
        for (std::size_t q = 0; q < cyc_arcs_.size(); ++q) {
            int k = cyc_arcs_[q];
            bflow_[k] += cyc_signs_[q] * t;
            if (bflow_[k] < 0.0) bflow_[k] = 0.0;  // roundoff clamp
        }
        // reuse the slot of the leaving arc for the entering one
        bi_[leave] = ei;
        bj_[leave] = ej;
        bflow_[leave] = t;
        return t;
    }

    int n_, m_;
    std::vector<double> a_, b_, c_;
    double tol_;
    std::vector<int> bi_, bj_;
    std::vector<double> bflow_;
    std::vector<double> u_, v_;
    std::vector<int> adj_head_, adj_next_, adj_arc_;
    std::vector<int> parent_, parent_arc_, depth_, order_;
    std::vector<int> cyc_arcs_, cyc_signs_;
    std::vector<int> scratch_x_, scratch_y_;
};

}  // namespace

TransportPlan w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const ExactOTOptions& opts) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("w1_exact: dimension mismatch");
    const std::uint64_t n = mu.size(), m = nu.size();
    if (n * m > opts.max_cost_entries)
        throw std::invalid_argument("w1_exact: instance exceeds the cost-entry cap");
    std::vector<double> cost(n * m);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto p = mu.point(i);
        for (std::uint64_t j = 0; j < m; ++j) {
            auto q = nu.point(j);
            double d2 = 0.0;
            for (int c = 0; c < mu.dim(); ++c) {
                double dx = p[c] - q[c];
                d2 += dx * dx;
            }
            cost[i * m + j] = std::sqrt(d2);
        }
    }
    TransportSimplex simplex(mu.weights(), nu.weights(), std::move(cost));
    simplex.solve();
    return simplex.extract();
}

double w1_signed(const SignedDiscreteMeasure& s, const ExactOTOptions& opts) {
    return s.mass * w1_exact(s.positive, s.negative, opts).cost;
}

double dual_gap(const TransportPlan& plan) {
    if (!plan.has_duals()) throw std::invalid_argument("dual_gap: plan has no duals");
    KahanSum dual;
    for (std::size_t i = 0; i < plan.source_weights.size(); ++i)
        dual.add(plan.dual_source[i] * plan.source_weights[i]);
    for (std::size_t j = 0; j < plan.target_weights.size(); ++j)
        dual.add(plan.dual_target[j] * plan.target_weights[j]);
    return plan.cost - dual.value();
}

std::string plan_to_json(const TransportPlan& plan) {
    nlohmann::ordered_json j;
    j["cost"] = plan.cost;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : plan.entries)
        entries.push_back({{"source", e.source}, {"target", e.target}, {"mass", e.mass}});
    j["entries"] = std::move(entries);
    j["dual_source"] = plan.dual_source;
    j["dual_target"] = plan.dual_target;
    return j.dump();
}

}  // namespace sot
