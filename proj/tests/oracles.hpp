#pragma once

// Independent reference implementations used only to cross-check the library:
// an O(n^3) assignment solver, a tiny 2x2 transport enumerator, Simpson
// quadrature, and a two-sample Kolmogorov-Smirnov test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

// Jonker-Volgenant style shortest augmenting path assignment; returns the
// minimal total cost of a perfect matching on a square cost matrix.
inline double assignment_cost(const std::vector<std::vector<double>>& cost) {
    const int n = int(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
    return total;
}

// 2x2 transport polytope is a segment; the optimum sits at an endpoint.
inline double transport_2x2(double a1, double a2, double b1, double b2,
                            const std::vector<std::vector<double>>& c) {
    double lo = std::max(0.0, a1 - b2);
    double hi = std::min(a1, b1);
    auto value = [&](double x11) {
        return x11 * c[0][0] + (a1 - x11) * c[0][1] + (b1 - x11) * c[1][0] +
               (a2 - (b1 - x11)) * c[1][1];
    };
    return std::min(value(lo), value(hi));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// two-sample Kolmogorov-Smirnov p-value (asymptotic)
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] <= b[ib])
            ++ia;
        else
            ++ib;
        d = std::max(d, std::abs(double(ia) / a.size() - double(ib) / b.size()));
    }
    double ne = double(a.size()) * b.size() / (a.size() + b.size());
    double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j)
        p += 2.0 * (j % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    return std::min(std::max(p, 0.0), 1.0);
}

}  // namespace oracle
