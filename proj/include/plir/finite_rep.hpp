#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plir/measure.hpp"

namespace plir {

/// Generating vertices of a supporting-set polytope of densities; the
/// induced risk measure is the support function over their convex hull.
struct SupportSet {
    std::vector<Density> vertices;
};

/// Builds a SupportSet, validating every vertex against the space and
/// dropping duplicates (pairwise within 1e-10).
SupportSet make_support_set(const FiniteSpace& space, std::vector<FieldRV> vertices);

/// Image of a SupportSet under the conditional-mean projection: per vertex,
/// the per-cell conditional expectations of its density (averaging to 1).
struct ProjectedSet {
    std::vector<std::vector<double>> vertices;
};

/// rho(X) = max over vertices of E[D X]; the support function of the hull.
double support_eval(const SupportSet& s, const FiniteSpace& space, const FieldRV& x);

ProjectedSet l_map(const SupportSet& s, const FiniteSpace& space, Axis axis = Axis::Columns);

enum class PermMode { Exact, Sampled };

/// True iff the convex hull of the projected vertices is carried into itself
/// by every tested coordinate permutation. Exact mode enumerates all N!
/// permutations (N <= 8); sampled mode draws `samples` random permutations.
/// Hull membership is decided by a small LP with tolerance 1e-9.
bool is_perm_invariant(const ProjectedSet& proj, PermMode mode, std::uint64_t seed = 42,
                       int samples = 500);

/// A behavioral counterexample: a distribution-matched pair (and optional
/// kernel part z) on which the induced risk measure takes different values.
struct InvarianceWitness {
    FieldRV x;
    FieldRV y;
    std::optional<FieldRV> z;
    double rho_x = 0.0;
    double rho_y = 0.0;
};

struct InvarianceReport {
    bool structural = false;  // permutation invariance of the projected hull
    bool behavioral = false;  // no violating pair found
    bool sampled = false;     // N > 8: permutations sampled, not enumerated
    std::optional<InvarianceWitness> witness;
};

/// Partial law invariance check: structural test on l_map(S) cross-validated
/// against behavioral sampling of column-constant distribution-matched
/// pairs. The two verdicts agree on well-posed inputs.
InvarianceReport check_g_law_invariance(const SupportSet& s, const FiniteSpace& space,
                                        std::uint64_t seed = 42, int pairs = 1000);

/// Coherent adjustment at mu (a vertex of l_map(S)): the excess
/// max E[(D_nu - D_mu) X] over generating vertices nu with l_map(nu) = mu.
/// Throws if no vertex realizes mu.
double coherent_adjustment(const SupportSet& s, const FiniteSpace& space,
                           const std::vector<double>& mu, const FieldRV& x);

struct StrongReport {
    bool invariant = false;
    std::optional<InvarianceWitness> witness;
};

/// Strong partial law invariance: searches for Z in ker(G) and a
/// distribution-matched column-constant pair (X, Y) with
/// rho(Z+X) != rho(Z+Y). A deterministic battery of structured candidates
/// runs before the seeded random trials.
StrongReport check_strong_invariance(const SupportSet& s, const FiniteSpace& space, int trials,
                                     std::uint64_t seed = 42);

/// Per-partition partial-law-invariance verdicts (structural test).
std::vector<bool> check_multi_source(const SupportSet& s, const FiniteSpace& space,
                                     const std::vector<Axis>& partitions,
                                     std::uint64_t seed = 42);

}  // namespace plir
