#include "plir/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace plir {

namespace {

constexpr double kEps = 1e-9;

// Tableau-based two-phase simplex. Row m holds the phase-2 objective, row
// m+1 the phase-1 objective for the artificial variable; column n is the
// artificial variable, column n+1 the right-hand side. Entering-variable
// ties are broken by index, which prevents cycling on the degenerate
// instances produced by equality pairs.
class Tableau {
  public:
    Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
            const std::vector<double>& c)
        : m_(static_cast<int>(b.size())),
          n_(static_cast<int>(c.size())),
          nonbasic_(n_ + 1),
          basic_(m_),
          t_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
        for (int i = 0; i < m_; ++i) {
            assert(static_cast<int>(A[i].size()) == n_);
            for (int j = 0; j < n_; ++j) t_[i][j] = A[i][j];
            basic_[i] = n_ + i;
            t_[i][n_] = -1.0;
            t_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            t_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;
        t_[m_ + 1][n_] = 1.0;
    }

    LpResult solve() {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (t_[i][n_ + 1] < t_[r][n_ + 1]) r = i;
        if (m_ > 0 && t_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!run_phase(2) || t_[m_ + 1][n_ + 1] < -kEps)
                return {LpStatus::Infeasible, 0.0, {}};
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != -1) continue;
                int s = 0;
                for (int j = 1; j <= n_; ++j)
                    if (better_entering(i, j, s)) s = j;
                pivot(i, s);
            }
        }
        if (!run_phase(1)) return {LpStatus::Unbounded, 0.0, {}};
        std::vector<double> x(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_) x[basic_[i]] = t_[i][n_ + 1];
        return {LpStatus::Optimal, 0.0, std::move(x)};
    }

  private:
    bool better_entering(int row, int j, int s) const {
        return std::pair(t_[row][j], nonbasic_[j]) < std::pair(t_[row][s], nonbasic_[s]);
    }

    void pivot(int r, int s) {
        double* pivot_row = t_[r].data();
        const double inv = 1.0 / pivot_row[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || std::abs(t_[i][s]) <= kEps) continue;
            double* row = t_[i].data();
            const double factor = row[s] * inv;
            for (int j = 0; j < n_ + 2; ++j) row[j] -= pivot_row[j] * factor;
            row[s] = pivot_row[s] * factor;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) t_[r][j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) t_[i][s] *= -inv;
        t_[r][s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    // phase 1 optimizes row m_, phase 2 row m_+1; returns false if unbounded.
    bool run_phase(int phase) {
        const int obj = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (phase == 1 && nonbasic_[j] == -1) continue;
                if (s == -1 || better_entering(obj, j, s)) s = j;
            }
            if (t_[obj][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (t_[i][s] <= kEps) continue;
                if (r == -1 ||
                    std::pair(t_[i][n_ + 1] / t_[i][s], basic_[i]) <
                        std::pair(t_[r][n_ + 1] / t_[r][s], basic_[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    int m_, n_;
    std::vector<int> nonbasic_;
    std::vector<int> basic_;
    std::vector<std::vector<double>> t_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c) {
    if (A.size() != b.size()) throw std::invalid_argument("solve_lp: A and b size mismatch");
    for (const auto& row : A)
        if (row.size() != c.size()) throw std::invalid_argument("solve_lp: row width mismatch");
    Tableau tab(A, b, c);
    LpResult res = tab.solve();
    if (res.status == LpStatus::Optimal)
        res.value = std::inner_product(res.x.begin(), res.x.end(), c.begin(), 0.0);
    return res;
}

}  // namespace plir
