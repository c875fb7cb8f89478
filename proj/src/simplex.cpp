#include "tailbound/simplex.hpp"

#include <algorithm>

namespace tailbound {

namespace {

// Standard-form tableau: minimize cs.y, As y = bs, y >= 0.
class tableau {
  public:
    tableau(std::vector<std::vector<rational>> rows, std::vector<rational> rhs, int ncols)
        : m_rows(std::move(rows)), m_rhs(std::move(rhs)), m_ncols(ncols) {}

    // Bland's rule simplex on the current basis; returns false if unbounded.
    // Only the first `ncols_active` columns may enter the basis.
    bool iterate(const std::vector<rational>& cost, std::vector<int>& basis_idx,
                 int ncols_active) {
        const int m = static_cast<int>(m_rows.size());
        while (true) {
            // the tableau is kept canonical, so the reduced cost of column j
            // is cost_j - cb . column_j
            int enter = -1;
            for (int j = 0; j < ncols_active; ++j) {
                if (std::find(basis_idx.begin(), basis_idx.end(), j) != basis_idx.end()) continue;
                rational rc = cost[j];
                for (int i = 0; i < m; ++i) rc -= cost[basis_idx[i]] * m_rows[i][j];
                if (rc < 0) {
                    enter = j;
                    break; // Bland: smallest index
                }
            }
            if (enter < 0) return true; // optimal
            int leave = -1;
            rational best_ratio;
            for (int i = 0; i < m; ++i) {
                if (m_rows[i][enter] > 0) {
                    rational ratio = m_rhs[i] / m_rows[i][enter];
                    if (leave < 0 || ratio < best_ratio ||
                        (ratio == best_ratio && basis_idx[i] < basis_idx[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0) return false; // unbounded
            pivot(leave, enter);
            basis_idx[leave] = enter;
        }
    }

    void pivot(int row, int col) {
        rational p = m_rows[row][col];
        for (auto& v : m_rows[row]) v /= p;
        m_rhs[row] /= p;
        for (size_t i = 0; i < m_rows.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            rational f = m_rows[i][col];
            if (f == 0) continue;
            for (int j = 0; j < m_ncols; ++j) m_rows[i][j] -= f * m_rows[row][j];
            m_rhs[i] -= f * m_rhs[row];
        }
    }

    std::vector<std::vector<rational>> m_rows;
    std::vector<rational> m_rhs;
    int m_ncols;
};

} // namespace

lp_solution solve_lp(const lp_problem& p) {
    // Free variables x_i = u_i - v_i; slacks on inequalities; artificials for
    // phase 1. Column layout: [u (nvars)] [v (nvars)] [slack (m_le)] [artificial].
    const int n = p.nvars;
    const int m_le = static_cast<int>(p.a.size());
    const int m_eq = static_cast<int>(p.aeq.size());
    const int m = m_le + m_eq;
    const int nu = 2 * n + m_le;

    std::vector<std::vector<rational>> rows(m, std::vector<rational>(nu + m, 0));
    std::vector<rational> rhs(m);
    for (int i = 0; i < m_le; ++i) {
        for (int j = 0; j < n; ++j) {
            rows[i][j] = p.a[i][j];
            rows[i][n + j] = -p.a[i][j];
        }
        rows[i][2 * n + i] = 1;
        rhs[i] = p.b[i];
    }
    for (int i = 0; i < m_eq; ++i) {
        for (int j = 0; j < n; ++j) {
            rows[m_le + i][j] = p.aeq[i][j];
            rows[m_le + i][n + j] = -p.aeq[i][j];
        }
        rhs[m_le + i] = p.beq[i];
    }
    // make all rhs nonnegative, then add one artificial per row
    for (int i = 0; i < m; ++i) {
        if (rhs[i] < 0) {
            for (auto& v : rows[i]) v = -v;
            rhs[i] = -rhs[i];
        }
        rows[i][nu + i] = 1;
    }

    tableau t(rows, rhs, nu + m);
    std::vector<int> basis_idx(m);
    for (int i = 0; i < m; ++i) basis_idx[i] = nu + i;

    // Phase 1: minimize sum of artificials
    std::vector<rational> phase1(nu + m, 0);
    for (int i = 0; i < m; ++i) phase1[nu + i] = 1;
    if (!t.iterate(phase1, basis_idx, nu + m)) return {}; // bounded below by 0
    rational art_sum = 0;
    for (int i = 0; i < m; ++i)
        if (basis_idx[i] >= nu) art_sum += t.m_rhs[i];
    lp_solution sol;
    if (art_sum != 0) {
        sol.feasible = false;
        return sol;
    }
    // drive remaining artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
        if (basis_idx[i] < nu) continue;
        int col = -1;
        for (int j = 0; j < nu; ++j)
            if (t.m_rows[i][j] != 0) {
                col = j;
                break;
            }
        if (col >= 0) {
            t.pivot(i, col);
            basis_idx[i] = col;
        }
    }

    // Phase 2: any artificial still basic sits on an all-zero redundant row,
    // so with entry restricted to real columns it contributes nothing.
    std::vector<rational> cost(nu + m, 0);
    for (int j = 0; j < n; ++j) {
        cost[j] = p.objective[j];
        cost[n + j] = -p.objective[j];
    }
    if (!t.iterate(cost, basis_idx, nu)) {
        sol.feasible = true;
        sol.bounded = false;
        return sol;
    }

    std::vector<rational> y(nu + m, 0);
    for (int i = 0; i < m; ++i) y[basis_idx[i]] = t.m_rhs[i];
    sol.feasible = true;
    sol.x.resize(n);
    sol.objective_value = 0;
    for (int j = 0; j < n; ++j) {
        sol.x[j] = y[j] - y[n + j];
        sol.objective_value += p.objective[j] * sol.x[j];
    }
    return sol;
}

} // namespace tailbound
