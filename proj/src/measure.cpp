#include "plir/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace plir {

namespace {
constexpr double kMassTol = 1e-12;
constexpr double kValueTol = 1e-10;
}  // namespace

FieldRV::FieldRV(int m, int n, double fill)
    : rows(m), cols(n), v(static_cast<std::size_t>(m) * n, fill) {
    if (m < 1 || n < 1) throw std::invalid_argument("FieldRV: dimensions must be >= 1");
}

FieldRV FieldRV::from_rows(std::initializer_list<std::initializer_list<double>> rows_init) {
    const int m = static_cast<int>(rows_init.size());
    if (m == 0) throw std::invalid_argument("FieldRV: empty initializer");
    const int n = static_cast<int>(rows_init.begin()->size());
    FieldRV out(m, n);
    int i = 0;
    for (const auto& row : rows_init) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("FieldRV: ragged initializer");
        int j = 0;
        for (double x : row) out(i, j++) = x;
        ++i;
    }
    out.require_finite();
    return out;
}

void FieldRV::require_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("FieldRV: non-finite entry");
}

FieldRV operator+(const FieldRV& a, const FieldRV& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("FieldRV: shape mismatch");
    FieldRV out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
    return out;
}

FieldRV operator-(const FieldRV& a, const FieldRV& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("FieldRV: shape mismatch");
    FieldRV out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
    return out;
}

FieldRV operator*(double s, const FieldRV& a) {
    FieldRV out = a;
    for (double& x : out.v) x *= s;
    return out;
}

FieldRV operator+(const FieldRV& a, double c) {
    FieldRV out = a;
    for (double& x : out.v) x += c;
    return out;
}

FiniteSpace::FiniteSpace(int rows, int cols, std::vector<double> probs)
    : rows_(rows), cols_(cols), p_(std::move(probs)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("FiniteSpace: dimensions must be >= 1");
    if (p_.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("FiniteSpace: probability matrix has wrong size");
    // Kahan-compensated sums keep the 1e-12 checks honest on large grids.
    double total = 0.0, comp = 0.0;
    for (double q : p_) {
        if (!(q > 0.0)) throw std::invalid_argument("FiniteSpace: probabilities must be positive");
        const double y = q - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw std::invalid_argument("FiniteSpace: probabilities sum to " + std::to_string(total));
    const double col_mass = 1.0 / cols;
    for (int n = 0; n < cols; ++n) {
        double s = 0.0, sc = 0.0;
        for (int m = 0; m < rows; ++m) {
            const double y = p(m, n) - sc;
            const double t = s + y;
            sc = (t - s) - y;
            s = t;
        }
        if (std::abs(s - col_mass) > kMassTol)
            throw std::invalid_argument("FiniteSpace: column " + std::to_string(n) +
                                        " mass is not 1/N");
    }
}

FiniteSpace FiniteSpace::uniform(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("FiniteSpace: dimensions must be >= 1");
    std::vector<double> p(static_cast<std::size_t>(rows) * cols,
                          1.0 / (static_cast<double>(rows) * cols));
    return FiniteSpace(rows, cols, std::move(p));
}

double FiniteSpace::expectation(const FieldRV& x) const {
    if (x.rows != rows_ || x.cols != cols_)
        throw std::invalid_argument("expectation: shape mismatch");
    return std::inner_product(p_.begin(), p_.end(), x.v.begin(), 0.0);
}

double FiniteSpace::row_prob(int m) const {
    double s = 0.0;
    for (int n = 0; n < cols_; ++n) s += p(m, n);
    return s;
}

bool FiniteSpace::uniform_row_marginal(double tol) const {
    const double target = 1.0 / rows_;
    for (int m = 0; m < rows_; ++m)
        if (std::abs(row_prob(m) - target) > tol) return false;
    return true;
}

DiscreteDist::DiscreteDist(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("DiscreteDist: no atoms");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    // Kahan-compensated total so the 1e-12 mass check holds for large inputs.
    double total = 0.0, comp = 0.0;
    for (const Atom& a : atoms) {
        if (a.prob < -kMassTol) throw std::invalid_argument("DiscreteDist: negative probability");
        const double y = a.prob - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
        if (!atoms_.empty() && a.value - atoms_.back().value <= kValueTol) {
            atoms_.back().prob += a.prob;
        } else if (a.prob > 0.0) {
            atoms_.push_back(a);
        }
    }
    if (atoms_.empty()) throw std::invalid_argument("DiscreteDist: zero total mass");
    if (std::abs(total - 1.0) > kMassTol)
        throw std::invalid_argument("DiscreteDist: probabilities sum to " + std::to_string(total));
}

double DiscreteDist::mean() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.value * a.prob;
    return s;
}

FieldRV cond_expectation(const FieldRV& x, const FiniteSpace& space, Axis axis) {
    if (x.rows != space.rows() || x.cols != space.cols())
        throw std::invalid_argument("cond_expectation: shape mismatch");
    FieldRV out(x.rows, x.cols);
    if (axis == Axis::Columns) {
        const double col_mass = 1.0 / space.cols();
        for (int n = 0; n < x.cols; ++n) {
            double s = 0.0;
            for (int m = 0; m < x.rows; ++m) s += space.p(m, n) * x(m, n);
            const double value = s / col_mass;
            for (int m = 0; m < x.rows; ++m) out(m, n) = value;
        }
    } else {
        for (int m = 0; m < x.rows; ++m) {
            double s = 0.0;
            for (int n = 0; n < x.cols; ++n) s += space.p(m, n) * x(m, n);
            const double value = s / space.row_prob(m);
            for (int n = 0; n < x.cols; ++n) out(m, n) = value;
        }
    }
    return out;
}

DiscreteDist distribution_of(const FieldRV& x, const FiniteSpace& space) {
    if (x.rows != space.rows() || x.cols != space.cols())
        throw std::invalid_argument("distribution_of: shape mismatch");
    std::vector<Atom> atoms;
    atoms.reserve(x.v.size());
    for (int m = 0; m < x.rows; ++m)
        for (int n = 0; n < x.cols; ++n) atoms.push_back({x(m, n), space.p(m, n)});
    return DiscreteDist(std::move(atoms));
}

bool same_distribution(const FieldRV& x, const FieldRV& y, const FiniteSpace& space) {
    if (!x.same_shape(y)) throw std::invalid_argument("same_distribution: shape mismatch");
    const DiscreteDist dx = distribution_of(x, space);
    const DiscreteDist dy = distribution_of(y, space);
    if (dx.atoms().size() != dy.atoms().size()) return false;
    for (std::size_t i = 0; i < dx.atoms().size(); ++i) {
        if (std::abs(dx.atoms()[i].value - dy.atoms()[i].value) > kValueTol) return false;
        if (std::abs(dx.atoms()[i].prob - dy.atoms()[i].prob) > 1e-9) return false;
    }
    return true;
}

bool in_kernel(const FieldRV& z, const FiniteSpace& space) {
    const FieldRV ce = cond_expectation(z, space);
    for (double x : ce.v)
        if (std::abs(x) > kValueTol) return false;
    return true;
}

Density make_density(const FiniteSpace& space, FieldRV d) {
    if (d.rows != space.rows() || d.cols != space.cols())
        throw std::invalid_argument("make_density: shape mismatch");
    for (double x : d.v)
        if (!(x >= 0.0)) throw std::invalid_argument("make_density: negative entry");
    const double mean = space.expectation(d);
    if (std::abs(mean - 1.0) > 1e-10)
        throw std::invalid_argument("make_density: expectation is " + std::to_string(mean));
    return Density{std::move(d)};
}

}  // namespace plir
