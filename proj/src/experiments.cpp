#include "detnodes/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "detnodes/errors.hpp"

namespace detnodes {

void ExperimentReport::set(const std::string& name, double v)
{
    for (auto& [key, value] : values) {
        if (key == name) {
            value = v;
            return;
        }
    }
    values.emplace_back(name, v);
}

void ExperimentReport::add_check(const std::string& name, bool passed, const std::string& detail)
{
    checks.push_back({name, passed, detail});
}

bool ExperimentReport::has_value(const std::string& name) const
{
    return std::any_of(values.begin(), values.end(), [&](const auto& kv) { return kv.first == name; });
}

double ExperimentReport::value(const std::string& name) const
{
    for (const auto& [key, v] : values) {
        if (key == name) return v;
    }
    throw NotFoundError("report has no value named " + name);
}

const Check& ExperimentReport::check(const std::string& name) const
{
    for (const Check& c : checks) {
        if (c.name == name) return c;
    }
    throw NotFoundError("report has no check named " + name);
}

bool ExperimentReport::pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void write_report_json(std::ostream& out, const ExperimentReport& report)
{
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["pass"] = report.pass();
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.config) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.values) vals[k] = v;
    j["values"] = vals;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["checks"] = checks;
    j["warnings"] = report.warnings;
    j["provenance"] = report.provenance;
    j["files"] = report.files;
    out << j.dump(2) << '\n';
}

void write_summary(std::ostream& out, const ExperimentReport& report)
{
    const auto old = out.precision(17);
    out << "scenario=" << report.scenario << '\n';
    for (const auto& [k, v] : report.config) out << "config." << k << '=' << v << '\n';
    for (const auto& [k, v] : report.values) out << "value." << k << '=' << v << '\n';
    for (const Check& c : report.checks) out << "check." << c.name << '=' << (c.passed ? "pass" : "fail") << '\n';
    for (std::size_t i = 0; i < report.warnings.size(); ++i) {
        out << "warning." << i << '=' << report.warnings[i] << '\n';
    }
    for (const std::string& p : report.provenance) out << "provenance." << p << '\n';
    out << "pass=" << (report.pass() ? "true" : "false") << '\n';
    out.precision(old);
}

void emit(ExperimentReport& report, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(dir / name);
        if (!f) throw DomainError("cannot write " + (dir / name).string());
        return f;
    };
    if (report.trace) {
        auto f = open("trace.csv");
        write_trace_csv(f, *report.trace);
        report.files.push_back((dir / "trace.csv").string());
    }
    report.files.push_back((dir / "summary.txt").string());
    report.files.push_back((dir / "report.json").string());
    {
        auto f = open("summary.txt");
        write_summary(f, report);
    }
    auto f = open("report.json");
    write_report_json(f, report);
}

ScalarField mode_sum(const Grid& grid, const std::vector<Mode>& modes)
{
    ScalarField u(grid);
    for (const Mode& m : modes) u.axpy(m.amplitude, eigen_laplacian(grid, m.j, m.k).field);
    return u;
}

double exact_a1(const Grid& grid, double k)
{
    if (!(k > 0.0)) throw DomainError("k must be positive");
    const double mu = discrete_eigenvalue(grid, 1, 1);
    return k * mu / std::sqrt(1.0 + mu);
}

ConstantLedger estimate_ledger(const Grid& grid, const LedgerOptions& opts, LemmaEstimates* lemma_estimates)
{
    const FunctionFamily fam = random_band_limited(grid, opts.J, opts.count, opts.seed);
    std::vector<NodeSet> nodesets;
    for (double d : opts.densities) nodesets.push_back(nodes_for_density(grid.domain(), grid, d, opts.placement));

    EstimateOptions eo;
    eo.ascent = opts.ascent;
    const LemmaEstimates est = estimate_constants(fam, nodesets, eo);
    if (lemma_estimates) *lemma_estimates = est;

    ConstantLedger ledger;
    const std::string note = fam.spec() + (opts.ascent ? " with ascent" : "");
    est.record(ledger, note);
    std::vector<ScalarField> b_pool = fam.fields;
    for (int j = 1; j <= 4; ++j) {
        for (int k = 1; k <= 4; ++k) b_pool.push_back(mode_sum(grid, {{1.0, j, k}}));
    }
    ledger.set("C_B", estimate_C_B(b_pool, opts.p), Provenance::estimated, fam.spec() + " and s_jk, j,k<=4");
    ledger.set("a1", exact_a1(grid, opts.k), Provenance::exact, "first discrete eigenfield");
    const EquivalenceConstants eq = equivalence_constants(CoefficientField::isotropic(opts.k), fam.fields);
    ledger.set("a3", eq.a3_hat, Provenance::estimated, fam.spec());
    ledger.set("a4", eq.a4_hat, Provenance::estimated, fam.spec());
    ledger.set("lambda1", discrete_eigenvalue(grid, 1, 1), Provenance::exact, "discrete first eigenvalue");
    ledger.set("C_hat", estimate_embedding_constant(grid, fam.fields, opts.p), Provenance::estimated, fam.spec());
    return ledger;
}

namespace {

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

bool all_on_boundary(const NodeSet& ns)
{
    const Domain& d = ns.domain();
    return std::all_of(ns.points().begin(), ns.points().end(), [&](const Point& p) {
        return p.x <= 0.0 || p.y <= 0.0 || p.x >= d.lx() || p.y >= d.ly();
    });
}

void add_provenance(ExperimentReport& r, const ConstantLedger& ledger, const std::vector<std::string>& names)
{
    bool empirical = false;
    for (const std::string& n : names) {
        if (!ledger.has(n)) continue;
        const Provenance p = ledger.entry(n).provenance;
        r.provenance.push_back(n + "=" + to_string(p));
        empirical = empirical || p == Provenance::estimated;
    }
    r.set("empirical_constants", empirical ? 1.0 : 0.0);
}

double max_node_gap(const NodeSet& ns, const ScalarField& a, const ScalarField& b)
{
    return eta(ns, a - b);
}

// Samples with t >= t0, where the M bounds apply.
Trajectory window(const Trajectory& traj, double t0)
{
    Trajectory out;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] + 1e-12 < t0) continue;
        out.times.push_back(traj.times[i]);
        out.snapshots.push_back(traj.snapshots[i]);
    }
    return out;
}

}  // namespace

ExperimentReport run_theorem1(double k, double p, const Grid& grid, const NodeSet& ns, double tol,
                              const ConstantLedger& ledger)
{
    ExperimentReport r;
    r.scenario = "theorem1";
    const ScalarField zero(grid);
    const StationaryResult nontrivial = find_nontrivial(k, p, grid, 1e-10);
    r.set("nontrivial_sup", sup_norm(nontrivial.field));
    r.set("nontrivial_residual", nontrivial.residual);
    r.set("nontrivial_iterations", nontrivial.iterations);
    r.set("trivial_residual", residual(zero, zero, k, p));

    const CoincidenceReport distinct = node_coincidence_test(nontrivial.field, zero, ns, tol);
    r.set("d_N", distinct.density);
    r.set("N", static_cast<double>(ns.size()));
    r.set("distinct_node_discrepancy", distinct.max_node_discrepancy);
    r.set("distinct_h1_distance", distinct.h1_distance);
    if (all_on_boundary(ns)) {
        r.warnings.push_back("all nodes lie on the boundary where every solution vanishes; "
                             "node values cannot distinguish solutions");
    }
    r.add_check("distinct_pair_differs_at_nodes", distinct.max_node_discrepancy > tol,
                "max node discrepancy " + fmt(distinct.max_node_discrepancy));

    NewtonOptions opts;
    opts.tol = 1e-10;
    const ScalarField none(grid);
    const StationaryResult lower = newton_solve(0.9 * nontrivial.field, none, k, p, opts);
    const StationaryResult upper = newton_solve(1.1 * nontrivial.field, none, k, p, opts);
    const bool both = lower.converged && upper.converged;
    r.add_check("same_root_runs_converged", both);
    const CoincidenceReport same = node_coincidence_test(lower.field, upper.field, ns, tol);
    r.set("same_root_node_discrepancy", same.max_node_discrepancy);
    r.set("same_root_h1_distance", same.h1_distance);
    r.add_check("same_root_coincides_at_nodes", both && same.max_node_discrepancy <= tol,
                "max node discrepancy " + fmt(same.max_node_discrepancy));
    r.add_check("same_root_coincides_globally", both && same.h1_distance <= tol,
                "h1 distance " + fmt(same.h1_distance));

    const double M_fbar = da_norm(nontrivial.field, k);
    r.set("M_fbar", M_fbar);
    if (ledger.has("C_B") && ledger.has("C5")) {
        const double d1 = delta1(ledger.get("C_B"), ledger.get("C5"), M_fbar, p);
        r.set("delta1", d1);
        r.set("d_N_below_delta1", distinct.density <= d1 ? 1.0 : 0.0);
        add_provenance(r, ledger, {"C_B", "C5"});
        r.provenance.push_back("M:fbar=estimated");
    }
    return r;
}

ExperimentReport run_theorem2(const ConvergingScenario& sc, const NodeSet& ns, const ConstantLedger& ledger)
{
    if (sc.forcing.kind() != ForcingSpec::Kind::converging && sc.forcing.kind() != ForcingSpec::Kind::constant &&
        sc.forcing.kind() != ForcingSpec::Kind::zero) {
        throw DomainError("theorem2 needs a converging forcing");
    }
    ExperimentReport r;
    r.scenario = "theorem2";
    const SolverConfig& cfg = sc.cfg;
    const Trajectory traj = solve(sc.u0, sc.forcing, cfg, sc.sample_every);
    const Grid& grid = traj.grid();
    const double ds = cfg.dt * sc.sample_every;
    const auto shift = static_cast<std::size_t>(std::max(1L, std::lround(sc.tau_fraction * cfg.T / ds)));
    if (shift + 2 > traj.size()) throw DomainError("theorem2: horizon too short for the time shift");

    Trajectory head, tail;
    for (std::size_t i = 0; i + shift < traj.size(); ++i) {
        head.times.push_back(traj.times[i]);
        head.snapshots.push_back(traj.snapshots[i]);
        tail.times.push_back(traj.times[i]);
        tail.snapshots.push_back(traj.snapshots[i + shift]);
    }
    const double tau = traj.times[shift];
    r.set("tau", tau);
    r.set("d_N", density(ns, grid));
    r.set("N", static_cast<double>(ns.size()));

    const ScalarField& uT = traj.snapshots.back();
    const ScalarField f_inf = sc.forcing.limit();
    NewtonOptions nopts;
    nopts.tol = 1e-10;
    const StationaryResult limit = newton_solve(uT, f_inf, cfg.k, cfg.p, nopts);
    r.set("newton_residual", limit.residual);
    r.add_check("stationary_limit_converged", limit.converged, to_string(limit.status));
    const double dist = h1_norm(uT - limit.field);
    r.set("h1_distance_to_limit", dist);
    r.add_check("converges_in_h1", dist <= sc.tol, "||u(T)-u_inf||_H1 = " + fmt(dist));
    const double node_gap = max_node_gap(ns, uT, limit.field);
    r.set("node_limit_gap", node_gap);
    r.add_check("node_limits_match", node_gap <= sc.tol, "max |xi_j - u_inf(x_j)| = " + fmt(node_gap));
    r.set("holder_025", holder_quotient(uT - limit.field, 0.25));
    r.set("holder_049", holder_quotient(uT - limit.field, 0.49));

    const double M_u = estimate_M(traj, cfg.k, cfg.t0);
    const double M_inf = da_norm(limit.field, cfg.k);
    r.set("M_u", M_u);
    r.set("M_f_inf", M_inf);
    add_provenance(r, ledger, {"C_B", "C4", "C5", "a1", "a4"});
    if (ledger.has("C_B") && ledger.has("C5")) {
        const double C_B = ledger.get("C_B");
        const double C5 = ledger.get("C5");
        const double d2 = delta2(C_B, C5, M_u, cfg.p, delta1(C_B, C5, M_inf, cfg.p));
        r.set("delta2", d2);
        r.set("d_N_below_delta2", r.value("d_N") < d2 ? 1.0 : 0.0);
    }

    const ForcingSpec gap = sc.forcing.kind() == ForcingSpec::Kind::converging
                                ? ForcingSpec::pair_difference((1.0 - std::exp(-sc.forcing.rate() * tau)) *
                                                                   sc.forcing.transient(),
                                                               sc.forcing.rate())
                                : ForcingSpec::zero(grid);
    ConstantLedger local = ledger;
    local.set_M("u", std::max(M_u, std::numeric_limits<double>::min()), Provenance::estimated, "trajectory");
    try {
        EnergyTrace trace = build_trace(window(head, cfg.t0), window(tail, cfg.t0), ns,
                                        CoefficientField::isotropic(cfg.k), cfg.k, cfg.p, local, Variant::thm2,
                                        {"u"}, gap, ForcingSpec::zero(grid));
        r.set("lambda", trace.lambda);
        const ViolationReport v = check_energy_inequality(trace, sc.energy_tol);
        r.set("energy_violations", static_cast<double>(v.indices.size()));
        r.add_check("energy_inequality", v.ok(), std::to_string(v.indices.size()) + " violations");
        r.set("cauchy_tail", trace.w_a_sq.back());
        r.add_check("cauchy_tail", trace.w_a_sq.back() <= sc.cauchy_tol, "w_a_sq at end " + fmt(trace.w_a_sq.back()));
        try {
            const double rate = decay_rate(trace, cfg.t0, trace.times.back());
            r.set("measured_decay_rate", rate);
            r.add_check("decay_rate_at_least_lambda", rate >= trace.lambda,
                        fmt(rate) + " vs lambda " + fmt(trace.lambda));
        } catch (const DomainError& e) {
            r.warnings.push_back(std::string("decay rate not measurable: ") + e.what());
        }
        r.trace = std::move(trace);
    } catch (const DomainError& e) {
        r.set("lambda", std::numeric_limits<double>::quiet_NaN());
        r.warnings.push_back(std::string("energy checks skipped: ") + e.what());
    }
    return r;
}

PairTrajectories solve_pair(const PairScenario& sc)
{
    const HeatSolver solver(sc.u0.grid(), sc.cfg);
    return {solver.solve(sc.u0, sc.f, sc.sample_every), solver.solve(sc.v0, sc.g, sc.sample_every)};
}

ExperimentReport run_theorem3(const PairScenario& sc, const NodeSet& ns, const ConstantLedger& ledger)
{
    return evaluate_pair(sc, solve_pair(sc), ns, ledger);
}

ExperimentReport evaluate_pair(const PairScenario& sc, const PairTrajectories& traj, const NodeSet& ns,
                               const ConstantLedger& ledger)
{
    ExperimentReport r;
    r.scenario = "theorem3";
    const SolverConfig& cfg = sc.cfg;
    const Grid& grid = traj.u.grid();
    const double d_N = density(ns, grid);
    r.set("d_N", d_N);
    r.set("N", static_cast<double>(ns.size()));

    const ScalarField wT = traj.u.snapshots.back() - traj.v.snapshots.back();
    const double final_h1 = h1_norm(wT);
    const double final_eta = eta(ns, wT);
    const double h025 = holder_quotient(wT, 0.25);
    const double h049 = holder_quotient(wT, 0.49);
    r.set("final_h1", final_h1);
    r.set("final_node_discrepancy", final_eta);
    r.set("holder_025", h025);
    r.set("holder_049", h049);
    double initial_eta = eta(ns, traj.u.snapshots.front() - traj.v.snapshots.front());
    r.set("initial_node_discrepancy", initial_eta);
    r.add_check("node_discrepancy_decays", final_eta <= sc.node_tol, "final eta " + fmt(final_eta));
    r.add_check("h1_difference_small", final_h1 <= sc.tol_V, "||u-v||_H1(T) = " + fmt(final_h1));
    r.add_check("holder_025_small", h025 <= sc.tol_C, fmt(h025));
    r.add_check("holder_049_small", h049 <= sc.tol_C, fmt(h049));

    double cb_traj = 0.0;
    for (std::size_t i = 0; i < traj.u.size(); i += 10) {
        if (h1_norm(traj.u.snapshots[i] - traj.v.snapshots[i]) == 0.0) continue;
        cb_traj = std::max(cb_traj, check_b_bound(traj.u.snapshots[i], traj.v.snapshots[i], cfg.p).ratio);
    }
    r.set("C_B_trajectory", cb_traj);
    if (ledger.has("C_B") && cb_traj > ledger.get("C_B")) {
        r.warnings.push_back("nonlinearity ratio along the trajectories exceeds the ledger C_B");
    }

    const double M_u = estimate_M(traj.u, cfg.k, cfg.t0);
    const double M_v = estimate_M(traj.v, cfg.k, cfg.t0);
    r.set("M_u", M_u);
    r.set("M_v", M_v);
    add_provenance(r, ledger, {"C_B", "C4", "C5", "a1", "a4"});
    r.provenance.push_back("M:u=estimated");
    r.provenance.push_back("M:v=estimated");
    if (ledger.has("C_B") && ledger.has("C5") && M_u + M_v > 0.0) {
        const double d3 = delta3(ledger.get("C_B"), ledger.get("C5"), M_u, M_v, cfg.p);
        r.set("delta3", d3);
        r.set("d_N_below_delta3", d_N < d3 ? 1.0 : 0.0);
    }

    try {
        ConstantLedger local = ledger;
        local.set_M("u", std::max(M_u, std::numeric_limits<double>::min()), Provenance::estimated, "trajectory");
        local.set_M("v", std::max(M_v, std::numeric_limits<double>::min()), Provenance::estimated, "trajectory");
        EnergyTrace trace = build_trace(window(traj.u, cfg.t0), window(traj.v, cfg.t0), ns,
                                        CoefficientField::isotropic(cfg.k), cfg.k, cfg.p, local, Variant::thm3,
                                        {"u", "v"}, sc.f, sc.g);
        r.set("lambda", trace.lambda);
        const ViolationReport v = check_energy_inequality(trace, sc.energy_tol);
        r.set("energy_violations", static_cast<double>(v.indices.size()));
        r.add_check("energy_inequality", v.ok(), std::to_string(v.indices.size()) + " violations");
        const GronwallReport g = check_gronwall(trace, sc.gronwall_tol);
        r.set("gronwall_eps", g.eps);
        r.set("gronwall_worst_ratio", g.worst_ratio);
        r.add_check("gronwall_envelope", g.ok(), std::to_string(g.violations.size()) + " violations");
        r.trace = std::move(trace);
    } catch (const DomainError& e) {
        r.set("lambda", std::numeric_limits<double>::quiet_NaN());
        r.add_check("energy_inequality", false, e.what());
    }
    return r;
}

std::vector<SweepRow> sweep_density(const PairScenario& base, const std::vector<double>& densities,
                                    const ConstantLedger& ledger, Placement placement)
{
    const PairTrajectories traj = solve_pair(base);
    const Grid& grid = traj.u.grid();
    std::vector<SweepRow> rows;
    for (double target : densities) {
        SweepRow row{target, std::numeric_limits<double>::quiet_NaN(), 0, std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN(), false, {}};
        try {
            const NodeSet ns = nodes_for_density(grid.domain(), grid, target, placement);
            const ExperimentReport r = evaluate_pair(base, traj, ns, ledger);
            row.d_N = r.value("d_N");
            row.N = static_cast<int>(ns.size());
            row.lambda = r.value("lambda");
            row.final_h1 = r.value("final_h1");
            row.pass = r.pass();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    const auto old = out.precision(17);
    out << "target,d_N,N,lambda,final_h1,pass,error\n";
    for (const SweepRow& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << r.target << ',' << r.d_N << ',' << r.N << ',' << r.lambda << ',' << r.final_h1 << ','
            << (r.pass ? 1 : 0) << ',' << err << '\n';
    }
    out.precision(old);
}

}  // namespace detnodes
