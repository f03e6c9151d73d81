#include "detnodes/heat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "detnodes/errors.hpp"
#include "detnodes/norms.hpp"

namespace detnodes {

void SolverConfig::validate() const
{
    if (!(k > 0.0)) throw DomainError("k must be positive");
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(T > 0.0)) throw DomainError("T must be positive");
    if (!(dt < T)) throw DomainError("dt must be smaller than T");
    if (!(t0 >= 0.0)) throw DomainError("t0 must be non-negative");
}

ForcingSpec::ForcingSpec(Kind kind, ScalarField base, ScalarField transient, double rate)
    : kind_(kind), base_(std::move(base)), transient_(std::move(transient)), rate_(rate)
{
    require_same_grid(base_.grid(), transient_.grid(), "ForcingSpec");
    if ((kind_ == Kind::converging || kind_ == Kind::pair_difference) && !(rate_ > 0.0)) {
        throw DomainError("forcing decay rate must be positive");
    }
}

ForcingSpec ForcingSpec::zero(const Grid& grid)
{
    return ForcingSpec(Kind::zero, ScalarField(grid), ScalarField(grid), 0.0);
}

ForcingSpec ForcingSpec::constant(ScalarField F)
{
    const Grid g = F.grid();
    return ForcingSpec(Kind::constant, std::move(F), ScalarField(g), 0.0);
}

ForcingSpec ForcingSpec::converging(ScalarField F_inf, ScalarField G, double rate)
{
    return ForcingSpec(Kind::converging, std::move(F_inf), std::move(G), rate);
}

ForcingSpec ForcingSpec::pair_difference(ScalarField G, double rate)
{
    const Grid g = G.grid();
    return ForcingSpec(Kind::pair_difference, ScalarField(g), std::move(G), rate);
}

ScalarField ForcingSpec::at(double t) const
{
    switch (kind_) {
    case Kind::zero:
    case Kind::constant:
        return base_;
    case Kind::converging:
    case Kind::pair_difference: {
        ScalarField f = base_;
        f.axpy(std::exp(-rate_ * t), transient_);
        return f;
    }
    }
    return base_;
}

const char* to_string(ForcingSpec::Kind kind)
{
    switch (kind) {
    case ForcingSpec::Kind::zero: return "zero";
    case ForcingSpec::Kind::constant: return "constant";
    case ForcingSpec::Kind::converging: return "converging";
    case ForcingSpec::Kind::pair_difference: return "pair_difference";
    }
    return "unknown";
}

double forcing_gap_sq(const ForcingSpec& f, const ForcingSpec& g, double t)
{
    const double n = l2_norm(f.at(t) - g.at(t));
    return n * n;
}

ScalarField apply_b(const ScalarField& u, double p)
{
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
    ScalarField out(u.grid());
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double v = u[n];
        out[n] = -std::pow(std::abs(v), p - 1.0) * v;
    }
    return out;
}

namespace {

StepDiagnostics diagnose(const ScalarField& u, double t, double k)
{
    const double l2 = l2_norm(u);
    const double semi = h1_seminorm(u);
    return {t, l2, std::sqrt(l2 * l2 + semi * semi), semi, da_norm(u, k)};
}

}  // namespace

HeatSolver::HeatSolver(const Grid& grid, SolverConfig cfg) : spectral_(grid), cfg_(cfg)
{
    cfg_.validate();
}

ScalarField HeatSolver::step(const ScalarField& u, const ScalarField& f_now, double t_now) const
{
    require_same_grid(u.grid(), spectral_.grid(), "HeatSolver::step");
    require_same_grid(f_now.grid(), spectral_.grid(), "HeatSolver::step");

    ScalarField rhs = u;
    const double dt = cfg_.dt;
    const double pm1 = cfg_.p - 1.0;
    for (std::size_t n = 0; n < rhs.size(); ++n) {
        const double v = u[n];
        double explicit_term = f_now[n];
        if (cfg_.nonlinearity_on) explicit_term += std::pow(std::abs(v), pm1) * v;
        rhs[n] += dt * explicit_term;
        if (!std::isfinite(rhs[n]) || std::abs(rhs[n]) > kBlowUpThreshold) {
            throw BlowUpError("blow-up: nodal value " + std::to_string(rhs[n]) + " at t=" +
                                  std::to_string(t_now),
                              t_now);
        }
    }
    return spectral_.solve(rhs, 1.0, dt * cfg_.k);
}

Trajectory HeatSolver::solve(const ScalarField& u0, const ForcingSpec& forcing, int sample_every) const
{
    if (sample_every < 1) throw DomainError("sample_every must be >= 1");
    require_same_grid(u0.grid(), spectral_.grid(), "HeatSolver::solve");
    require_same_grid(forcing.grid(), spectral_.grid(), "HeatSolver::solve");

    const long steps = std::lround(cfg_.T / cfg_.dt);
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(u0);
    traj.diagnostics.push_back(diagnose(u0, 0.0, cfg_.k));

    const bool time_dependent = forcing.kind() == ForcingSpec::Kind::converging ||
                                forcing.kind() == ForcingSpec::Kind::pair_difference;
    ScalarField f_now = forcing.at(0.0);
    ScalarField u = u0;
    for (long n = 0; n < steps; ++n) {
        const double t = n * cfg_.dt;
        if (time_dependent) f_now = forcing.at(t);
        u = step(u, f_now, t);
        const double t_next = (n + 1) * cfg_.dt;
        traj.diagnostics.push_back(diagnose(u, t_next, cfg_.k));
        if ((n + 1) % sample_every == 0) {
            traj.times.push_back(t_next);
            traj.snapshots.push_back(u);
        }
    }
    return traj;
}

ScalarField step(const ScalarField& u, const ScalarField& f_now, const SolverConfig& cfg)
{
    return HeatSolver(u.grid(), cfg).step(u, f_now);
}

Trajectory solve(const ScalarField& u0, const ForcingSpec& forcing, const SolverConfig& cfg,
                 int sample_every)
{
    return HeatSolver(u0.grid(), cfg).solve(u0, forcing, sample_every);
}

SmallnessBounds smallness_bounds(double k, double p, double C_hat, double lambda1)
{
    if (!(k > 0.0) || !(C_hat > 0.0) || !(lambda1 > 0.0)) {
        throw DomainError("smallness_bounds needs positive k, C_hat, lambda1");
    }
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
    const double base = k * k * lambda1 / (4.0 * std::pow(C_hat, 2.0 * p));
    return {std::pow(base, p / (p - 1.0)), std::pow(base, 1.0 / (p - 1.0))};
}

AprioriReport apriori_check(const Trajectory& traj, double k, double p, double C_hat, double lambda1)
{
    const SmallnessBounds b = smallness_bounds(k, p, C_hat, lambda1);
    double m = 0.0;
    for (const StepDiagnostics& d : traj.diagnostics) m = std::max(m, d.h1_semi * d.h1_semi);
    const double ratio = m / b.u0_bound;
    return {b.u0_bound, m, ratio, ratio <= 1.0};
}

double estimate_embedding_constant(const Grid& grid, std::span<const ScalarField> family, double p)
{
    if (family.empty()) throw DomainError("estimate_embedding_constant: empty family");
    double best = 0.0;
    for (const ScalarField& f : family) {
        require_same_grid(grid, f.grid(), "estimate_embedding_constant");
        const double semi = h1_seminorm(f);
        if (semi == 0.0) throw DomainError("estimate_embedding_constant: zero field in family");
        best = std::max(best, lp_norm(f, 2.0 * p) / semi);
    }
    return best;
}

void write_snapshots_csv(std::ostream& out, const Trajectory& traj)
{
    const auto old = out.precision(17);
    out << 't';
    const std::size_t n = traj.snapshots.empty() ? 0 : traj.snapshots.front().size();
    for (std::size_t i = 1; i <= n; ++i) out << ",v_" << i;
    out << '\n';
    for (std::size_t s = 0; s < traj.size(); ++s) {
        out << traj.times[s];
        for (double v : traj.snapshots[s].values()) out << ',' << v;
        out << '\n';
    }
    out.precision(old);
}

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj)
{
    const auto old = out.precision(17);
    out << "t,l2,h1,da\n";
    for (const StepDiagnostics& d : traj.diagnostics) {
        out << d.t << ',' << d.l2 << ',' << d.h1 << ',' << d.da << '\n';
    }
    out.precision(old);
}

}  // namespace detnodes
