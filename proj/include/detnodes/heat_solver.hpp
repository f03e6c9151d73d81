#pragma once

// IMEX time stepping for  u_t - k Delta u - |u|^{p-1} u = f  with zero
// Dirichlet data: implicit diffusion, explicit nonlinearity and forcing.

#include <iosfwd>
#include <optional>
#include <vector>

#include "detnodes/grid.hpp"
#include "detnodes/sine_transform.hpp"

namespace detnodes {

struct SolverConfig {
    double k = 1.0;
    double p = 3.0;
    double dt = 1e-3;
    double T = 20.0;
    bool nonlinearity_on = true;
    double t0 = 1.0;

    /// Throws DomainError when an invariant is violated.
    void validate() const;
};

/// Any nodal |u| above this aborts a run as blow-up.
inline constexpr double kBlowUpThreshold = 1e8;

class ForcingSpec {
public:
    enum class Kind { zero, constant, converging, pair_difference };

    static ForcingSpec zero(const Grid& grid);
    static ForcingSpec constant(ScalarField F);
    /// F_inf + e^{-rate t} G
    static ForcingSpec converging(ScalarField F_inf, ScalarField G, double rate);
    /// e^{-rate t} G
    static ForcingSpec pair_difference(ScalarField G, double rate);

    Kind kind() const { return kind_; }
    const Grid& grid() const { return base_.grid(); }
    double rate() const { return rate_; }
    const ScalarField& base() const { return base_; }
    const ScalarField& transient() const { return transient_; }

    ScalarField at(double t) const;
    /// Limit as t -> infinity.
    ScalarField limit() const { return base_; }

private:
    ForcingSpec(Kind kind, ScalarField base, ScalarField transient, double rate);

    Kind kind_;
    ScalarField base_;
    ScalarField transient_;
    double rate_;
};

const char* to_string(ForcingSpec::Kind kind);

/// ||f(t) - g(t)||_{L2}^2.
double forcing_gap_sq(const ForcingSpec& f, const ForcingSpec& g, double t);

struct StepDiagnostics {
    double t;
    double l2;
    double h1;
    double h1_semi;
    double da;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> snapshots;
    std::vector<StepDiagnostics> diagnostics;

    const Grid& grid() const { return snapshots.front().grid(); }
    std::size_t size() const { return times.size(); }
};

/// b(u) = -|u|^{p-1} u, pointwise.
ScalarField apply_b(const ScalarField& u, double p);

/// Reusable stepper holding the sine-transform plan of one grid.
class HeatSolver {
public:
    HeatSolver(const Grid& grid, SolverConfig cfg);

    const SolverConfig& config() const { return cfg_; }

    /// (I - dt k Delta_h) u+ = u + dt (|u|^{p-1} u [on] + f_now).
    ScalarField step(const ScalarField& u, const ScalarField& f_now, double t_now = 0.0) const;

    /// Runs to cfg.T; snapshots at t = 0 and every `sample_every` steps.
    Trajectory solve(const ScalarField& u0, const ForcingSpec& forcing, int sample_every) const;

private:
    SpectralSolver spectral_;
    SolverConfig cfg_;
};

ScalarField step(const ScalarField& u, const ScalarField& f_now, const SolverConfig& cfg);
Trajectory solve(const ScalarField& u0, const ForcingSpec& forcing, const SolverConfig& cfg,
                 int sample_every);

struct SmallnessBounds {
    double f_bound;   // bound on ||f||^2 in L^infty(L2)
    double u0_bound;  // bound on ||grad u0||^2
};

/// Right-hand sides of the small-data conditions for global existence.
SmallnessBounds smallness_bounds(double k, double p, double C_hat, double lambda1);

struct AprioriReport {
    double bound;
    double max_grad_sq;
    double max_ratio;
    bool within_bound;
};

/// sup_t ||grad u(t)||^2 against the small-data a-priori bound.
AprioriReport apriori_check(const Trajectory& traj, double k, double p, double C_hat, double lambda1);

/// max over family of ||u||_{L^{2p}} / |u|_1.
double estimate_embedding_constant(const Grid& grid, std::span<const ScalarField> family, double p);

/// CSV: header "t,v_1,...,v_n" and one row-major row per snapshot.
void write_snapshots_csv(std::ostream& out, const Trajectory& traj);
/// CSV: t,l2,h1,da
void write_diagnostics_csv(std::ostream& out, const Trajectory& traj);

}  // namespace detnodes
