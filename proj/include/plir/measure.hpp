#pragma once

#include <initializer_list>
#include <vector>

namespace plir {

/// A real-valued random field on an M x N sample space, stored row-major.
/// Entries are losses: positive values are losses.
struct FieldRV {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    FieldRV() = default;
    FieldRV(int m, int n, double fill = 0.0);
    static FieldRV from_rows(std::initializer_list<std::initializer_list<double>> rows);

    double& operator()(int m, int n) { return v[static_cast<std::size_t>(m) * cols + n]; }
    double operator()(int m, int n) const { return v[static_cast<std::size_t>(m) * cols + n]; }
    bool same_shape(const FieldRV& other) const {
        return rows == other.rows && cols == other.cols;
    }
    /// Throws std::invalid_argument if any entry is non-finite.
    void require_finite() const;
};

FieldRV operator+(const FieldRV& a, const FieldRV& b);
FieldRV operator-(const FieldRV& a, const FieldRV& b);
FieldRV operator*(double s, const FieldRV& a);
FieldRV operator+(const FieldRV& a, double c);

/// The sub-sigma-algebra used for conditioning: the column partition is the
/// second-coordinate projection; the row partition is its independent
/// counterpart used by the multi-source constructions.
enum class Axis { Columns, Rows };

/// Product sample space [M] x [N] with a strictly positive probability
/// matrix whose second marginal is uniform: each column carries mass 1/N.
class FiniteSpace {
  public:
    FiniteSpace(int rows, int cols, std::vector<double> probs);
    static FiniteSpace uniform(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double p(int m, int n) const { return p_[static_cast<std::size_t>(m) * cols_ + n]; }
    const std::vector<double>& probs() const { return p_; }

    double expectation(const FieldRV& x) const;
    /// Mass of row m (the column marginal is 1/N by construction).
    double row_prob(int m) const;
    /// True when every row also carries mass 1/M.
    bool uniform_row_marginal(double tol = 1e-9) const;

  private:
    int rows_;
    int cols_;
    std::vector<double> p_;
};

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

/// Discrete distribution on the reals: sorted atoms with strictly increasing
/// values; construction aggregates values that coincide within 1e-10.
class DiscreteDist {
  public:
    explicit DiscreteDist(std::vector<Atom> atoms);
    const std::vector<Atom>& atoms() const { return atoms_; }
    double mean() const;
    double min_value() const { return atoms_.front().value; }
    double max_value() const { return atoms_.back().value; }

  private:
    std::vector<Atom> atoms_;
};

/// E[X | partition], returned as a field constant on each partition cell.
/// Idempotent; linear; preserves constants.
FieldRV cond_expectation(const FieldRV& x, const FiniteSpace& space, Axis axis = Axis::Columns);

DiscreteDist distribution_of(const FieldRV& x, const FiniteSpace& space);

/// True iff X and Y have the same distribution under the space's measure,
/// with atom values matched within 1e-10.
bool same_distribution(const FieldRV& x, const FieldRV& y, const FiniteSpace& space);

/// True iff E[Z | columns] vanishes (within 1e-10 entrywise).
bool in_kernel(const FieldRV& z, const FiniteSpace& space);

/// Radon-Nikodym derivative: nonnegative field with expectation 1.
struct Density {
    FieldRV d;
};

/// Validates nonnegativity and E[d] = 1 (within 1e-10).
Density make_density(const FiniteSpace& space, FieldRV d);

}  // namespace plir
