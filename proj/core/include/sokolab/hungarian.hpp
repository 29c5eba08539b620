#pragma once

// Kuhn-Munkres assignment on a square cost matrix, O(n^3) potentials-and-
// augmenting-paths form. Costs may be kInfeasibleEdge to mark forbidden pairs;
// the caller checks whether the optimum had to use one.

#include <limits>
#include <vector>

namespace sokolab {

inline constexpr double kInfeasibleEdge = 1e15;

struct AssignmentResult {
    double cost = 0.0;
    std::vector<int> match; // match[row] = column
};

inline AssignmentResult hungarian_min_cost(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    AssignmentResult res;
    if (n == 0) return res;

    constexpr double INF = std::numeric_limits<double>::infinity();
    // 1-based arrays; p[j] = row matched to column j, column 0 is the virtual start
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = INF;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
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
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    res.match.assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) res.match[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) res.cost += a[i][res.match[i]];
    return res;
}

} // namespace sokolab
