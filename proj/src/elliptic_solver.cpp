#include "detnodes/elliptic_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "detnodes/errors.hpp"
#include "detnodes/norms.hpp"
#include "detnodes/sine_transform.hpp"

namespace detnodes {

const char* to_string(NewtonStatus s)
{
    switch (s) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::singular_jacobian: return "singular_jacobian";
    }
    return "unknown";
}

namespace {

ScalarField nonlinear_map(const ScalarField& u, const ScalarField& fbar, double k, double p)
{
    ScalarField F = laplacian(u);
    F *= -k;
    for (std::size_t n = 0; n < F.size(); ++n) {
        const double v = u[n];
        F[n] -= std::pow(std::abs(v), p - 1.0) * v + fbar[n];
    }
    return F;
}

double dot(const ScalarField& a, const ScalarField& b)
{
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
    return s;
}

struct MinresResult {
    ScalarField x;
    bool converged;
};

// Preconditioned MINRES for J x = b with J = -k Delta_h - diag(potential),
// preconditioner inverse (-k Delta_h)^{-1}. The residual estimate is measured in
// the preconditioner norm, relative to that of b.
MinresResult minres(const SpectralSolver& poisson, double k, const std::vector<double>& potential,
                    const ScalarField& b, double tol, int max_iter)
{
    const Grid& g = b.grid();
    auto apply = [&](const ScalarField& v) {
        ScalarField out = laplacian(v);
        out *= -k;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] -= potential[n] * v[n];
        return out;
    };
    auto precondition = [&](const ScalarField& r) { return poisson.solve(r, 0.0, k); };

    ScalarField x(g);
    ScalarField r1 = b;
    ScalarField y = precondition(r1);
    const double beta1_sq = dot(r1, y);
    if (beta1_sq < 0.0) throw NumericalFailure("minres: preconditioner is not positive definite");
    const double beta1 = std::sqrt(beta1_sq);
    if (beta1 == 0.0) return {x, true};

    double oldb = 0.0;
    double beta = beta1;
    double dbar = 0.0;
    double epsln = 0.0;
    double phibar = beta1;
    double cs = -1.0;
    double sn = 0.0;
    ScalarField w(g);
    ScalarField w2(g);
    ScalarField r2 = r1;

    for (int itn = 1; itn <= max_iter; ++itn) {
        ScalarField v = y;
        v *= 1.0 / beta;
        y = apply(v);
        if (itn >= 2) y.axpy(-beta / oldb, r1);
        const double alfa = dot(v, y);
        y.axpy(-alfa / beta, r2);
        r1 = r2;
        r2 = y;
        y = precondition(r2);
        oldb = beta;
        const double beta_sq = dot(r2, y);
        if (beta_sq < 0.0) throw NumericalFailure("minres: preconditioner is not positive definite");
        beta = std::sqrt(beta_sq);

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        ScalarField w1 = std::move(w2);
        w2 = std::move(w);
        w = v;
        w.axpy(-oldeps, w1);
        w.axpy(-delta, w2);
        w *= 1.0 / gamma;
        x.axpy(phi, w);

        if (phibar <= tol * beta1 || beta == 0.0) return {x, true};
    }
    return {x, false};
}

}  // namespace

double residual(const ScalarField& u, const ScalarField& fbar, double k, double p)
{
    require_same_grid(u.grid(), fbar.grid(), "residual");
    return l2_norm(nonlinear_map(u, fbar, k, p));
}

StationaryResult newton_solve(const ScalarField& guess, const ScalarField& fbar, double k, double p,
                              const NewtonOptions& opts)
{
    require_same_grid(guess.grid(), fbar.grid(), "newton_solve");
    if (!(opts.tol > 0.0)) throw DomainError("newton tolerance must be positive");
    if (!(k > 0.0)) throw DomainError("k must be positive");
    if (!(p > 1.0)) throw DomainError("p must exceed 1");

    const SpectralSolver poisson(guess.grid());
    const double eps2 = opts.jacobian_eps * opts.jacobian_eps;
    StationaryResult out{guess, 0.0, 0, false, NewtonStatus::max_iterations, {}};
    ScalarField F = nonlinear_map(out.field, fbar, k, p);
    out.residual = l2_norm(F);
    out.residual_history.push_back(out.residual);

    std::vector<double> potential(guess.size());
    while (true) {
        if (out.residual <= opts.tol) {
            out.converged = true;
            out.status = NewtonStatus::converged;
            return out;
        }
        if (out.iterations >= opts.max_iter) return out;

        for (std::size_t n = 0; n < potential.size(); ++n) {
            const double v = out.field[n];
            potential[n] = p * std::pow(v * v + eps2, 0.5 * (p - 1.0));
        }
        const MinresResult lin = minres(poisson, k, potential, -F, opts.inner_tol, opts.max_inner);
        if (!lin.converged) {
            out.status = NewtonStatus::singular_jacobian;
            return out;
        }

        // Backtracking on the residual norm.
        double lambda = 1.0;
        ScalarField trial = out.field;
        trial.axpy(lambda, lin.x);
        ScalarField Ft = nonlinear_map(trial, fbar, k, p);
        double rt = l2_norm(Ft);
        for (int halving = 0; halving < 30 && !(rt < out.residual); ++halving) {
            lambda *= 0.5;
            trial = out.field;
            trial.axpy(lambda, lin.x);
            Ft = nonlinear_map(trial, fbar, k, p);
            rt = l2_norm(Ft);
        }
        if (!trial.all_finite()) {
            out.status = NewtonStatus::max_iterations;
            return out;
        }
        out.field = std::move(trial);
        F = std::move(Ft);
        out.residual = rt;
        out.residual_history.push_back(rt);
        ++out.iterations;
    }
}

StationaryResult newton_solve(const ScalarField& guess, const ScalarField& fbar, double k, double p,
                              double tol, int max_iter)
{
    NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return newton_solve(guess, fbar, k, p, opts);
}

double symmetry_defect(const ScalarField& f)
{
    const Grid& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    const bool square = nx == ny && g.domain().lx() == g.domain().ly();
    double d = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double v = f(i, j);
            d = std::max(d, std::abs(v - f(nx - 1 - i, j)));
            d = std::max(d, std::abs(v - f(i, ny - 1 - j)));
            if (square) d = std::max(d, std::abs(v - f(j, i)));
        }
    }
    return d;
}

StationaryResult find_nontrivial(double k, double p, const Grid& grid, double tol, int sign)
{
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    const ScalarField phi = eigen_laplacian(grid, 1, 1).field;
    const ScalarField zero(grid);

    NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = 100;
    for (int s = 1; s <= 64; s *= 2) {
        StationaryResult r = newton_solve(static_cast<double>(sign * s) * phi, zero, k, p, opts);
        if (!r.converged || sup_norm(r.field) <= 0.1) continue;
        const auto vals = r.field.values();
        const bool one_signed = std::all_of(vals.begin(), vals.end(), [sign](double v) { return sign * v > 0.0; });
        if (!one_signed || symmetry_defect(r.field) > 1e-6) continue;
        return r;
    }
    throw NotFoundError("amplitude ladder exhausted without a nontrivial stationary solution");
}

CoincidenceReport node_coincidence_test(const ScalarField& ubar, const ScalarField& vbar,
                                        const NodeSet& ns, double match_tol)
{
    require_same_grid(ubar.grid(), vbar.grid(), "node_coincidence_test");
    const ScalarField diff = ubar - vbar;
    CoincidenceReport rep{};
    rep.max_node_discrepancy = eta(ns, diff);
    rep.h1_distance = h1_norm(diff);
    rep.density = density(ns, ubar.grid());
    rep.nodes_match = rep.max_node_discrepancy <= match_tol;
    return rep;
}

}  // namespace detnodes
