#pragma once

// Stationary problem  -k Delta_h u - |u|^{p-1} u = fbar  with zero Dirichlet data.

#include <string>
#include <vector>

#include "detnodes/grid.hpp"
#include "detnodes/nodes.hpp"

namespace detnodes {

enum class NewtonStatus { converged, max_iterations, singular_jacobian };

const char* to_string(NewtonStatus s);

struct StationaryResult {
    ScalarField field;
    double residual;
    int iterations;
    bool converged;
    NewtonStatus status;
    std::vector<double> residual_history;
};

/// l2_norm(-k Delta_h u - |u|^{p-1} u - fbar)
double residual(const ScalarField& u, const ScalarField& fbar, double k, double p);

struct NewtonOptions {
    double tol = 1e-8;
    int max_iter = 50;
    double inner_tol = 1e-10;
    int max_inner = 400;
    /// Smoothing of |u| inside the Jacobian, |u|^2 -> u^2 + eps^2.
    double jacobian_eps = 1e-12;
};

/// Damped Newton on F(u) = -k Delta_h u - |u|^{p-1} u - fbar. Each linear
/// solve is MINRES preconditioned by the exact inverse of -k Delta_h.
StationaryResult newton_solve(const ScalarField& guess, const ScalarField& fbar, double k, double p,
                              const NewtonOptions& opts = {});

StationaryResult newton_solve(const ScalarField& guess, const ScalarField& fbar, double k, double p,
                              double tol, int max_iter);

/// Largest sup-norm distance between f and its images under the reflections of
/// the rectangle (plus the diagonal reflection when Lx == Ly).
double symmetry_defect(const ScalarField& f);

/// Amplitude ladder s = 1, 2, 4, ..., 64 over sign * s * (first eigenfield) with
/// fbar = 0; returns the first converged root with sup_norm > 0.1 that has one
/// sign in the interior and symmetry_defect <= 1e-6.
StationaryResult find_nontrivial(double k, double p, const Grid& grid, double tol, int sign = 1);

struct CoincidenceReport {
    double max_node_discrepancy;
    double h1_distance;
    double density;
    bool nodes_match;
};

CoincidenceReport node_coincidence_test(const ScalarField& ubar, const ScalarField& vbar,
                                        const NodeSet& ns, double match_tol);

}  // namespace detnodes
