#include "detnodes/energy_monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "detnodes/errors.hpp"

namespace detnodes {

const char* to_string(Variant v)
{
    return v == Variant::thm2 ? "thm2" : "thm3";
}

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0)) throw DomainError(std::string(name) + " must be positive");
}

void require_p(double p)
{
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
}

}  // namespace

double delta1(double C_B, double C5, double M_fbar, double p)
{
    require_positive(C_B, "C_B");
    require_positive(C5, "C5");
    require_positive(M_fbar, "M");
    require_p(p);
    return std::pow(2.0 * C_B * C5 * std::pow(M_fbar, p - 1.0), -4.0);
}

double delta2(double C_B, double C5, double M_f_u0_t0, double p, double delta1_at_finf)
{
    require_positive(C_B, "C_B");
    require_positive(C5, "C5");
    require_positive(M_f_u0_t0, "M");
    require_positive(delta1_at_finf, "delta1");
    require_p(p);
    return std::min(delta1_at_finf, std::pow(4.0 * C_B * C5 * std::pow(M_f_u0_t0, p - 1.0), -4.0));
}

double combined_M(double M_f, double M_g, double p)
{
    require_p(p);
    if (M_f < 0.0 || M_g < 0.0) throw DomainError("M bounds must be non-negative");
    return std::pow(M_f, p - 1.0) + std::pow(M_g, p - 1.0);
}

double delta3(double C_B, double C5, double M_f, double M_g, double p)
{
    require_positive(C_B, "C_B");
    require_positive(C5, "C5");
    const double m = combined_M(M_f, M_g, p);
    require_positive(m, "M(p,t0)");
    return std::pow(2.0 * C_B * C5 * m, -4.0);
}

double lambda_rate(double a1, double a4, double C_B, double C5, double M, double p, double d_N,
                   Variant variant)
{
    require_positive(a1, "a1");
    require_positive(a4, "a4");
    require_p(p);
    if (!(d_N > 0.0)) throw DomainError("d_N must be positive");
    if (C_B < 0.0 || C5 < 0.0 || M < 0.0) throw DomainError("C_B, C5 and M must be non-negative");
    const double weight = variant == Variant::thm2 ? std::pow(M, p - 1.0) : M;
    const double factor = variant == Variant::thm2 ? 4.0 : 2.0;
    const double bracket = 1.0 - factor * C_B * C5 * weight * std::pow(d_N, 0.25);
    if (!(bracket > 0.0)) {
        throw DomainError(std::string("lambda bracket is non-positive: d_N=") + std::to_string(d_N) +
                          " is not below the " + (variant == Variant::thm2 ? "delta2" : "delta3") +
                          " threshold");
    }
    return (a1 * a1) / (a4 * a4) * bracket;
}

double h_function(double C_B, double C4, double M, double p, double d_N, double eta_val, double fg_sq,
                  Variant variant)
{
    require_p(p);
    if (!(d_N > 0.0)) throw DomainError("d_N must be positive");
    const double scale = C_B * C_B * C4 * C4 / std::sqrt(d_N) * eta_val * eta_val;
    const double node_term = variant == Variant::thm2 ? 8.0 * std::pow(M, 2.0 * (p - 1.0)) * scale
                                                      : 2.0 * M * M * scale;
    return node_term + 2.0 * fg_sq;
}

ThresholdReport threshold_report(const ConstantLedger& ledger, Variant variant, double p,
                                 const std::vector<std::string>& m_labels)
{
    const std::size_t need = variant == Variant::thm2 ? 1 : 2;
    if (m_labels.size() != need) {
        throw DomainError(std::string(to_string(variant)) + " threshold needs " + std::to_string(need) +
                          " M labels");
    }
    ThresholdReport r;
    r.variant = variant;
    r.p = p;
    r.C_B = ledger.get("C_B");
    r.C5 = ledger.get("C5");
    r.C4 = ledger.has("C4") ? ledger.get("C4") : 0.0;
    r.a1 = ledger.has("a1") ? ledger.get("a1") : 0.0;
    r.a4 = ledger.has("a4") ? ledger.get("a4") : 0.0;
    for (const std::string& label : m_labels) r.M.push_back(ledger.M(label));

    std::vector<std::string> names{"C_B", "C5", "C4", "a1", "a4"};
    for (const std::string& label : m_labels) names.push_back("M:" + label);
    for (const std::string& n : names) {
        if (ledger.has(n)) r.provenance.push_back(n + "=" + to_string(ledger.entry(n).provenance));
    }

    if (variant == Variant::thm2) {
        r.name = "delta1";
        r.delta = delta1(r.C_B, r.C5, r.M[0], p);
    } else {
        r.name = "delta3";
        r.delta = delta3(r.C_B, r.C5, r.M[0], r.M[1], p);
    }
    return r;
}

EnergyConstants energy_constants(const ConstantLedger& ledger, Variant variant, double p,
                                 const std::vector<std::string>& m_labels)
{
    const std::size_t need = variant == Variant::thm2 ? 1 : 2;
    if (m_labels.size() != need) {
        throw DomainError(std::string(to_string(variant)) + " trace needs " + std::to_string(need) +
                          " M labels");
    }
    EnergyConstants c;
    c.C_B = ledger.get("C_B");
    c.C4 = ledger.get("C4");
    c.C5 = ledger.get("C5");
    c.a1 = ledger.get("a1");
    c.a4 = ledger.get("a4");
    c.p = p;
    c.M = variant == Variant::thm2 ? ledger.M(m_labels[0])
                                   : combined_M(ledger.M(m_labels[0]), ledger.M(m_labels[1]), p);
    return c;
}

namespace {

void fill_residuals(EnergyTrace& t)
{
    const std::size_t n = t.size();
    t.residual_series.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt = t.times[i + 1] - t.times[i];
        t.residual_series[i] = (t.w_a_sq[i + 1] - t.w_a_sq[i]) / dt + t.lambda * t.w_a_sq[i] - t.h_series[i];
    }
}

}  // namespace

EnergyTrace build_trace(const Trajectory& u_traj, const Trajectory& v_traj, const NodeSet& ns,
                        const CoefficientField& a, double k, const EnergyConstants& constants,
                        Variant variant, const ForcingSpec& f, const ForcingSpec& g)
{
    if (u_traj.size() != v_traj.size() || u_traj.size() < 2) {
        throw DomainError("build_trace: trajectories need the same number (>= 2) of samples");
    }
    for (std::size_t i = 0; i < u_traj.size(); ++i) {
        if (u_traj.times[i] != v_traj.times[i]) {
            throw DomainError("build_trace: sample times differ at index " + std::to_string(i));
        }
        if (i > 0 && !(u_traj.times[i] > u_traj.times[i - 1])) {
            throw DomainError("build_trace: sample times must increase strictly");
        }
    }
    const Grid& grid = u_traj.grid();
    require_same_grid(grid, v_traj.grid(), "build_trace");
    require_same_grid(grid, f.grid(), "build_trace");
    require_same_grid(grid, g.grid(), "build_trace");

    EnergyTrace t;
    t.variant = variant;
    t.d_N = density(ns, grid);
    t.lambda = lambda_rate(constants.a1, constants.a4, constants.C_B, constants.C5, constants.M, constants.p,
                           t.d_N, variant);
    t.times = u_traj.times;
    const std::size_t n = t.times.size();
    t.w_a_sq.resize(n);
    t.w_da_sq.resize(n);
    t.eta_series.resize(n);
    t.fg_sq.resize(n);
    t.h_series.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ScalarField w = u_traj.snapshots[i] - v_traj.snapshots[i];
        const double wa = a_norm(w, a);
        const double wd = da_norm(w, k);
        t.w_a_sq[i] = wa * wa;
        t.w_da_sq[i] = wd * wd;
        t.eta_series[i] = eta(ns, w);
        t.fg_sq[i] = forcing_gap_sq(f, g, t.times[i]);
        t.h_series[i] = h_function(constants.C_B, constants.C4, constants.M, constants.p, t.d_N,
                                   t.eta_series[i], t.fg_sq[i], variant);
    }
    fill_residuals(t);
    return t;
}

EnergyTrace build_trace(const Trajectory& u_traj, const Trajectory& v_traj, const NodeSet& ns,
                        const CoefficientField& a, double k, double p, const ConstantLedger& ledger,
                        Variant variant, const std::vector<std::string>& m_labels, const ForcingSpec& f,
                        const ForcingSpec& g)
{
    return build_trace(u_traj, v_traj, ns, a, k, energy_constants(ledger, variant, p, m_labels), variant, f, g);
}

EnergyTrace with_lambda(const EnergyTrace& trace, double lambda)
{
    EnergyTrace t = trace;
    t.lambda = lambda;
    fill_residuals(t);
    return t;
}

ViolationReport check_energy_inequality(const EnergyTrace& trace, double tol)
{
    ViolationReport r;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        const double allowed = tol * (1.0 + std::abs(trace.h_series[i]));
        const double excess = trace.residual_series[i] - allowed;
        if (excess > 0.0 || std::isnan(trace.residual_series[i])) {
            r.indices.push_back(i);
            r.worst_excess = std::max(r.worst_excess, excess);
        }
    }
    return r;
}

double gronwall_bound(double y0, double lam, double eps, double t)
{
    if (!(lam > 0.0)) throw DomainError("gronwall_bound needs lambda > 0");
    if (!(t >= 0.0)) throw DomainError("gronwall_bound needs t >= 0");
    const double decay = std::exp(-lam * t);
    return y0 * decay + (eps / lam) * (1.0 - decay);
}

GronwallReport check_gronwall(const EnergyTrace& trace, double tol, std::size_t start_index, double eps_estimate)
{
    if (start_index >= trace.size()) throw DomainError("check_gronwall: start index beyond trace");
    GronwallReport r;
    r.start_index = start_index;
    if (eps_estimate >= 0.0) {
        r.eps = eps_estimate;
    } else {
        r.eps = *std::max_element(trace.h_series.begin() + static_cast<std::ptrdiff_t>(start_index),
                                  trace.h_series.end());
    }
    const double y0 = trace.w_a_sq[start_index];
    const double t0 = trace.times[start_index];
    for (std::size_t i = start_index; i < trace.size(); ++i) {
        const double bound = gronwall_bound(y0, trace.lambda, r.eps, trace.times[i] - t0);
        const double w = trace.w_a_sq[i];
        if (bound > 0.0) r.worst_ratio = std::max(r.worst_ratio, w / bound);
        if (w > bound * (1.0 + tol)) r.violations.push_back(i);
    }
    return r;
}

double estimate_M(const Trajectory& traj, double k, double t0)
{
    if (traj.size() == 0) throw DomainError("estimate_M: empty trajectory");
    if (t0 > traj.times.back()) throw DomainError("estimate_M: t0 lies beyond the trajectory horizon");
    double m = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] >= t0) m = std::max(m, da_norm(traj.snapshots[i], k));
    }
    return m;
}

double decay_rate(const EnergyTrace& trace, double t_begin, double t_end, double floor)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double t = trace.times[i];
        const double w = trace.w_a_sq[i];
        if (t < t_begin || t > t_end || !(w > floor)) continue;
        const double y = std::log(w);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw DomainError("decay_rate: fewer than two usable samples");
    const double denom = n * sxx - sx * sx;
    return -(n * sxy - sx * sy) / denom;
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace)
{
    const auto old = out.precision(17);
    out << "t,w_a_sq,w_da_sq,eta,fg_sq,h,residual\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << trace.times[i] << ',' << trace.w_a_sq[i] << ',' << trace.w_da_sq[i] << ',' << trace.eta_series[i]
            << ',' << trace.fg_sq[i] << ',' << trace.h_series[i] << ',';
        if (std::isnan(trace.residual_series[i])) {
            out << "nan";
        } else {
            out << trace.residual_series[i];
        }
        out << '\n';
    }
    out.precision(old);
}

}  // namespace detnodes
