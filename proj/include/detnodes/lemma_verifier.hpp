#pragma once

// Empirical checks and constant estimates for the node interpolation
// inequalities, the nonlinearity bound and the semigroup decay estimate.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "detnodes/grid.hpp"
#include "detnodes/nodes.hpp"
#include "detnodes/norms.hpp"

namespace detnodes {

/// u = sum_{j,k<=J} c_jk s_jk with s_jk(x,y) = sin(j pi x/Lx) sin(k pi y/Ly).
struct FunctionFamily {
    int J = 0;
    int count = 0;
    std::uint64_t seed = 0;
    /// coefficients[m][(j-1)*J + (k-1)]
    std::vector<std::vector<double>> coefficients;
    std::vector<ScalarField> fields;

    std::string spec() const;
};

/// c_jk ~ N(0,1) / (j^2 + k^2), seeded.
FunctionFamily random_band_limited(const Grid& grid, int J, int count, std::uint64_t seed);

/// Synthesis of a band-limited field from its coefficients.
ScalarField band_limited_field(const Grid& grid, int J, std::span<const double> coefficients);

/// sup: ||u||_C <= eta + C1 d^{1/2} ||u||_D
/// l2:  ||u||_2 <= C2 eta + C3 d^{1/2} ||u||_D
/// h1:  ||u||_H1 <= C4 d^{-1/4} eta + C5 d^{1/4} ||u||_D
/// with ||u||_D = ||Delta_h u||_2 (unit diffusion).
enum class Lemma { sup, l2, h1 };

const char* to_string(Lemma l);

struct LemmaCheck {
    double lhs;
    double rhs;
    bool satisfied;
    /// lhs / rhs: the factor by which every constant would have to grow.
    double tightness;
};

LemmaCheck check_lemma(const ScalarField& f, const NodeSet& ns, Lemma which, const ConstantLedger& ledger);
/// Same with the node density supplied by the caller.
LemmaCheck check_lemma(const ScalarField& f, const NodeSet& ns, double d_N, Lemma which,
                       const ConstantLedger& ledger);

struct LemmaEstimates {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double C4 = 0.0;
    double C5 = 0.0;
    std::size_t samples = 0;
    std::size_t ascended = 0;

    /// Writes the positive constants with provenance "estimated".
    void record(ConstantLedger& ledger, const std::string& note) const;
};

struct EstimateOptions {
    /// C3 starts at this fraction of its value with C2 = 0, then C2 and C3 are refit in turn.
    /// C4 and C5 minimise max(C4, C5), which makes them equal.
    double first_pass_fraction = 0.5;
    /// Augment the sweep with fields pushed towards each lemma's worst case by
    /// projected subgradient ascent inside the family's band.
    bool ascent = false;
    int ascent_starts = 4;
    /// Extra deterministic starts: the eigenfields s_jk with j, k <= probe_modes.
    int probe_modes = 4;
    /// Extra starts for the sup lemma, peaked at grid points far from the nodes.
    int probe_points = 8;
    int ascent_steps = 60;
};

/// Smallest constants making every inequality hold over family x nodesets.
LemmaEstimates estimate_constants(const FunctionFamily& family, const std::vector<NodeSet>& nodesets,
                                  const EstimateOptions& opts = {});

/// Family given as plain fields; no ascent.
LemmaEstimates estimate_constants(std::span<const ScalarField> fields, const std::vector<NodeSet>& nodesets,
                                  const EstimateOptions& opts = {});

/// CSV: lemma,constant,estimate,family,densities
void write_constants_csv(std::ostream& out, const LemmaEstimates& est, const std::string& family_spec,
                         const std::vector<double>& densities);

struct BBoundRatio {
    /// ||b(u)-b(v)|| / ((|u|_H1^{p-1} + |v|_H1^{p-1}) |u-v|_H1)
    double ratio;
    /// Same with 1 + |u|^{p-1} + |v|^{p-1} in the denominator.
    double ratio_plus_one;
};

BBoundRatio check_b_bound(const ScalarField& u, const ScalarField& v, double p);

/// max ratio over all pairs of `fields`, each field against zero and each field
/// against a slightly rescaled copy of itself.
double estimate_C_B(std::span<const ScalarField> fields, double p);

struct SemigroupReport {
    /// sup over mu of mu^alpha e^{-t mu}
    double value;
    /// sup over the t-sweep of value(t) t^alpha e^{lam t}
    double C;
    double bound;
    bool within_bound;
};

/// Eigenvalues pi^2 (j^2/Lx^2 + k^2/Ly^2), 1 <= j, k <= mode_budget.
double semigroup_sup(double alpha, double t, const Domain& domain, int mode_budget);

/// t-sweep over [t_min, t_max] (log-spaced, `sweep_points` samples).
SemigroupReport semigroup_bound(double alpha, double lam, double t, const Grid& grid, int mode_budget,
                                double t_min = 0.01, double t_max = 10.0, int sweep_points = 400);

}  // namespace detnodes
