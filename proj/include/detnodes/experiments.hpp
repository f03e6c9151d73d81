#pragma once

// Theorem-level scenarios assembled from the solvers, node sets and energy monitor.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detnodes/elliptic_solver.hpp"
#include "detnodes/energy_monitor.hpp"
#include "detnodes/heat_solver.hpp"
#include "detnodes/lemma_verifier.hpp"
#include "detnodes/nodes.hpp"
#include "detnodes/norms.hpp"

namespace detnodes {

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

struct ExperimentReport {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, double>> values;
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    /// "name=provenance" for every ledger constant that entered a threshold.
    std::vector<std::string> provenance;
    std::vector<std::string> files;
    std::optional<EnergyTrace> trace;

    void set(const std::string& name, double v);
    void add_check(const std::string& name, bool passed, const std::string& detail = {});
    bool has_value(const std::string& name) const;
    double value(const std::string& name) const;
    const Check& check(const std::string& name) const;
    /// True when at least one check ran and all passed.
    bool pass() const;
};

void write_report_json(std::ostream& out, const ExperimentReport& report);
/// Flat key=value mirror of the config echo, values, checks and warnings.
void write_summary(std::ostream& out, const ExperimentReport& report);
/// Writes report.json, summary.txt and (when present) trace.csv under `dir`.
void emit(ExperimentReport& report, const std::filesystem::path& dir);

/// Sine-product sum  sum_m amp_m sin(j_m pi x/Lx) sin(k_m pi y/Ly).
struct Mode {
    double amplitude;
    int j;
    int k;
};
ScalarField mode_sum(const Grid& grid, const std::vector<Mode>& modes);

struct LedgerOptions {
    double k = 1.0;
    double p = 3.0;
    int J = 16;
    int count = 100;
    std::uint64_t seed = 1;
    std::vector<double> densities{0.35, 0.18, 0.09};
    Placement placement = Placement::interior;
    bool ascent = true;
};

/// C1..C5 and C_B from a band-limited family, a1 (exact at the first
/// eigenfield), a3/a4 from the family, lambda1 and the embedding constant C_hat.
ConstantLedger estimate_ledger(const Grid& grid, const LedgerOptions& opts,
                               LemmaEstimates* lemma_estimates = nullptr);

/// inf over grid fields of ||u||_D(A) / ||u||_H1, attained at the first eigenfield.
double exact_a1(const Grid& grid, double k);

ExperimentReport run_theorem1(double k, double p, const Grid& grid, const NodeSet& ns, double tol,
                              const ConstantLedger& ledger = {});

struct ConvergingScenario {
    SolverConfig cfg;
    ForcingSpec forcing;
    ScalarField u0;
    int sample_every = 100;
    double tau_fraction = 0.1;
    double tol = 1e-3;
    double cauchy_tol = 1e-6;
    double energy_tol = 0.05;
};

ExperimentReport run_theorem2(const ConvergingScenario& sc, const NodeSet& ns, const ConstantLedger& ledger);

struct PairScenario {
    SolverConfig cfg;
    ForcingSpec f;
    ForcingSpec g;
    ScalarField u0;
    ScalarField v0;
    int sample_every = 25;
    double tol_V = 1e-3;
    double tol_C = 1e-2;
    double node_tol = 1e-4;
    double energy_tol = 0.05;
    double gronwall_tol = 0.05;
};

struct PairTrajectories {
    Trajectory u;
    Trajectory v;
};

PairTrajectories solve_pair(const PairScenario& sc);

ExperimentReport run_theorem3(const PairScenario& sc, const NodeSet& ns, const ConstantLedger& ledger);
/// Same with precomputed trajectories.
ExperimentReport evaluate_pair(const PairScenario& sc, const PairTrajectories& traj, const NodeSet& ns,
                               const ConstantLedger& ledger);

struct SweepRow {
    double target;
    double d_N;
    int N;
    /// NaN when d_N is not below the threshold.
    double lambda;
    double final_h1;
    bool pass;
    std::string error;
};

/// The pair is integrated once; each density only changes the node set.
std::vector<SweepRow> sweep_density(const PairScenario& base, const std::vector<double>& densities,
                                    const ConstantLedger& ledger, Placement placement = Placement::interior);

/// CSV: target,d_N,N,lambda,final_h1,pass,error
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace detnodes
