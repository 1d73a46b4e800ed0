#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "plir/finite_rep.hpp"
#include "plir/measure.hpp"

namespace plir {

// ---- randomized fixture generators (shared by the verify suites and tests)

/// Random space with positive entries and uniform column marginal.
FiniteSpace random_space(std::mt19937_64& rng, int max_rows, int max_cols,
                         bool force_uniform = false);

FieldRV random_field(std::mt19937_64& rng, int rows, int cols, double scale = 1.0);

/// Random support set of `count` positive densities.
SupportSet random_support_set(std::mt19937_64& rng, const FiniteSpace& space, int count);

/// Closure of a support set under column permutations of its densities;
/// valid on uniform spaces, where it makes the projected hull symmetric.
SupportSet symmetrize_columns(const FiniteSpace& space, const SupportSet& s);

/// Dual vertices of ES at level 1 - tail_cols/N applied to the conditional
/// mean: all column-constant densities worth N/tail_cols on tail_cols
/// columns.
SupportSet lifted_es_dual(const FiniteSpace& space, int tail_cols);

/// Conditional-ES dual joined with a rank-one product density on a uniform
/// grid: partially law invariant, but not strongly (the product vertex reacts
/// to kernel noise).
std::pair<FiniteSpace, SupportSet> make_skewed_union_support(int rows, int cols);

// ---- property suites

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::vector<std::string> notes;  // one entry per failure (witness text)
    bool passed() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();  // coherence invariance oracle adjustments strong

/// Runs one named suite; instances <= 0 selects the suite default size.
/// Unknown names throw std::invalid_argument.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int instances = 0);

}  // namespace plir
