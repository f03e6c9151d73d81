#pragma once

// Energy inequality d/dt ||u-v||_a^2 + lambda ||u-v||_a^2 <= h(t), its Gronwall
// envelope, and the node-density thresholds that make lambda positive.

#include <iosfwd>
#include <string>
#include <vector>

#include "detnodes/heat_solver.hpp"
#include "detnodes/nodes.hpp"
#include "detnodes/norms.hpp"

namespace detnodes {

/// thm2: self-comparison of one trajectory; thm3: two trajectories.
enum class Variant { thm2, thm3 };

const char* to_string(Variant v);

double delta1(double C_B, double C5, double M_fbar, double p);
double delta2(double C_B, double C5, double M_f_u0_t0, double p, double delta1_at_finf);
double delta3(double C_B, double C5, double M_f, double M_g, double p);

/// M_f^{p-1} + M_g^{p-1}.
double combined_M(double M_f, double M_g, double p);

/// For thm2, M is M(f,u0,t0); for thm3, M is the combined M(p,t0).
double lambda_rate(double a1, double a4, double C_B, double C5, double M, double p, double d_N,
                   Variant variant);

double h_function(double C_B, double C4, double M, double p, double d_N, double eta_val, double fg_sq,
                  Variant variant);

struct ThresholdReport {
    std::string name;
    double delta;
    Variant variant;
    double C_B;
    double C4;
    double C5;
    std::vector<double> M;
    double p;
    double a1;
    double a4;
    /// Provenance of every ledger input, "name=provenance".
    std::vector<std::string> provenance;
};

/// delta1 (thm2 stationary) or delta3 (thm3) from ledger entries C_B, C5, a1, a4
/// and the M bounds named by `m_labels`.
ThresholdReport threshold_report(const ConstantLedger& ledger, Variant variant, double p,
                                 const std::vector<std::string>& m_labels);

/// Inputs of lambda and h. M follows the lambda_rate convention.
struct EnergyConstants {
    double C_B = 0.0;
    double C4 = 0.0;
    double C5 = 0.0;
    double a1 = 1.0;
    double a4 = 1.0;
    double M = 0.0;
    double p = 2.0;
};

/// Reads C_B, C4, C5, a1, a4 and the M bounds (one label for thm2, two for thm3).
EnergyConstants energy_constants(const ConstantLedger& ledger, Variant variant, double p,
                                 const std::vector<std::string>& m_labels);

struct EnergyTrace {
    Variant variant = Variant::thm3;
    double lambda = 0.0;
    double d_N = 0.0;
    std::vector<double> times;
    std::vector<double> w_a_sq;
    std::vector<double> w_da_sq;
    std::vector<double> eta_series;
    std::vector<double> fg_sq;
    std::vector<double> h_series;
    /// Forward-difference residual; the last entry is NaN (no successor sample).
    std::vector<double> residual_series;

    std::size_t size() const { return times.size(); }
};

/// Differences of two trajectories sampled at the same times. The forcing pair
/// feeds ||f-g||^2; pass the same spec twice when f = g.
EnergyTrace build_trace(const Trajectory& u_traj, const Trajectory& v_traj, const NodeSet& ns,
                        const CoefficientField& a, double k, const EnergyConstants& constants,
                        Variant variant, const ForcingSpec& f, const ForcingSpec& g);

EnergyTrace build_trace(const Trajectory& u_traj, const Trajectory& v_traj, const NodeSet& ns,
                        const CoefficientField& a, double k, double p, const ConstantLedger& ledger,
                        Variant variant, const std::vector<std::string>& m_labels, const ForcingSpec& f,
                        const ForcingSpec& g);

/// Copy of `trace` with residuals recomputed for another lambda.
EnergyTrace with_lambda(const EnergyTrace& trace, double lambda);

struct ViolationReport {
    std::vector<std::size_t> indices;
    double worst_excess = 0.0;
    bool ok() const { return indices.empty(); }
};

/// Indices where residual > tol * (1 + |h|).
ViolationReport check_energy_inequality(const EnergyTrace& trace, double tol);

double gronwall_bound(double y0, double lam, double eps, double t);

struct GronwallReport {
    std::size_t start_index = 0;
    double eps = 0.0;
    double worst_ratio = 0.0;
    std::vector<std::size_t> violations;
    bool ok() const { return violations.empty(); }
};

/// w_a_sq[i] <= gronwall_bound(w_a_sq[i0], lambda, eps, t_i - t_i0) (1 + tol) for
/// i >= i0, with eps = max h over the tail when `eps_estimate` is negative.
GronwallReport check_gronwall(const EnergyTrace& trace, double tol, std::size_t start_index = 0,
                              double eps_estimate = -1.0);

/// max over samples with t >= t0 of da_norm(u(t), k).
double estimate_M(const Trajectory& traj, double k, double t0);

/// Least-squares slope of -log(w_a_sq) over samples in [t_begin, t_end] with
/// w_a_sq above `floor`.
double decay_rate(const EnergyTrace& trace, double t_begin, double t_end, double floor = 1e-280);

/// CSV: t,w_a_sq,w_da_sq,eta,fg_sq,h,residual
void write_trace_csv(std::ostream& out, const EnergyTrace& trace);

}  // namespace detnodes
