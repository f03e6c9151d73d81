#include "detnodes/lemma_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "detnodes/errors.hpp"
#include "detnodes/heat_solver.hpp"

namespace detnodes {

std::string FunctionFamily::spec() const
{
    std::ostringstream s;
    s << "band_limited(J=" << J << ";count=" << count << ";seed=" << seed << ")";
    return s.str();
}

namespace {

// Sampled sine factors of the band |j|,|k| <= J and the modal form of the norms.
class ModalBasis {
public:
    ModalBasis(const Grid& grid, int J) : grid_(grid), J_(J)
    {
        if (J < 1 || J > std::min(grid.nx(), grid.ny())) {
            throw DomainError("mode cutoff J must lie in [1, min(nx, ny)]");
        }
        const double pi = std::numbers::pi;
        sx_.resize(static_cast<std::size_t>(J) * grid.nx());
        sy_.resize(static_cast<std::size_t>(J) * grid.ny());
        for (int j = 0; j < J; ++j) {
            for (int i = 0; i < grid.nx(); ++i) {
                sx_[idx(j, i, grid.nx())] = std::sin((j + 1) * pi * grid.x(i) / grid.domain().lx());
            }
            for (int i = 0; i < grid.ny(); ++i) {
                sy_[idx(j, i, grid.ny())] = std::sin((j + 1) * pi * grid.y(i) / grid.domain().ly());
            }
        }
        mu_.resize(static_cast<std::size_t>(J) * J);
        for (int j = 0; j < J; ++j) {
            for (int k = 0; k < J; ++k) mu_[idx(j, k, J)] = discrete_eigenvalue(grid, j + 1, k + 1);
        }
        q_ = grid.domain().lx() * grid.domain().ly() / 4.0;
    }

    int J() const { return J_; }
    std::size_t modes() const { return mu_.size(); }
    double mu(std::size_t m) const { return mu_[m]; }
    double q() const { return q_; }
    double sx(int j, int i) const { return sx_[idx(j, i, grid_.nx())]; }
    double sy(int k, int i) const { return sy_[idx(k, i, grid_.ny())]; }
    const Grid& grid() const { return grid_; }

    ScalarField synthesize(std::span<const double> c) const
    {
        if (c.size() != modes()) throw DomainError("coefficient count does not match J^2");
        const int nx = grid_.nx();
        const int ny = grid_.ny();
        std::vector<double> tmp(static_cast<std::size_t>(J_) * ny, 0.0);
        for (int j = 0; j < J_; ++j) {
            for (int k = 0; k < J_; ++k) {
                const double cjk = c[idx(j, k, J_)];
                if (cjk == 0.0) continue;
                for (int y = 0; y < ny; ++y) tmp[idx(j, y, ny)] += cjk * sy(k, y);
            }
        }
        ScalarField u(grid_);
        for (int y = 0; y < ny; ++y) {
            for (int j = 0; j < J_; ++j) {
                const double t = tmp[idx(j, y, ny)];
                for (int x = 0; x < nx; ++x) u(x, y) += t * sx(j, x);
            }
        }
        return u;
    }

    // Values of every basis function at the nodes, interpolated as eval_field does.
    std::vector<std::vector<double>> node_matrix(const NodeSet& ns) const
    {
        std::vector<std::vector<double>> E(ns.size(), std::vector<double>(modes()));
        std::vector<double> unit(modes(), 0.0);
        for (std::size_t m = 0; m < modes(); ++m) {
            unit[m] = 1.0;
            const ScalarField s = synthesize(unit);
            unit[m] = 0.0;
            for (std::size_t n = 0; n < ns.size(); ++n) E[n][m] = eval_field(s, ns.points()[n]);
        }
        return E;
    }

private:
    static std::size_t idx(int a, int b, int stride)
    {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(stride) + static_cast<std::size_t>(b);
    }

    Grid grid_;
    int J_;
    std::vector<double> sx_;
    std::vector<double> sy_;
    std::vector<double> mu_;
    double q_;
};

struct Sample {
    double sup;
    double l2;
    double h1;
    double eta;
    double D;
    double d;
};

Sample measure(const ScalarField& f, const NodeSet& ns, double d)
{
    return {sup_norm(f), l2_norm(f), h1_norm(f), eta(ns, f), da_norm(f, 1.0), d};
}

double clamp0(double v)
{
    return v > 0.0 ? v : 0.0;
}

LemmaEstimates constants_from(const std::vector<Sample>& samples, double fraction)
{
    LemmaEstimates e;
    e.samples = samples.size();
    double c3_free = 0.0;
    double c45 = 0.0;
    for (const Sample& s : samples) {
        if (s.D == 0.0) continue;
        const double root2 = std::sqrt(s.d);
        const double root4 = std::sqrt(root2);
        e.C1 = std::max(e.C1, clamp0((s.sup - s.eta) / (root2 * s.D)));
        c3_free = std::max(c3_free, s.l2 / (root2 * s.D));
        c45 = std::max(c45, s.h1 / (s.eta / root4 + root4 * s.D));
    }
    const double c3_0 = fraction * c3_free;
    for (const Sample& s : samples) {
        if (s.eta == 0.0) continue;
        e.C2 = std::max(e.C2, clamp0((s.l2 - c3_0 * std::sqrt(s.d) * s.D) / s.eta));
    }
    for (const Sample& s : samples) {
        if (s.D == 0.0) continue;
        e.C3 = std::max(e.C3, clamp0((s.l2 - e.C2 * s.eta) / (std::sqrt(s.d) * s.D)));
    }
    e.C4 = c45;
    e.C5 = c45;
    return e;
}

struct Objective {
    double value;
    std::vector<double> grad;
};

// Ratio whose supremum over the band determines the constants of one lemma.
class LemmaObjective {
public:
    LemmaObjective(const ModalBasis& basis, const NodeSet& ns, double d, Lemma which, const LemmaEstimates& c)
        : basis_(basis), E_(basis.node_matrix(ns)), d_(d), which_(which), c_(c)
    {
    }

    Objective operator()(std::span<const double> c) const
    {
        const std::size_t M = basis_.modes();
        const Grid& g = basis_.grid();
        const ScalarField u = basis_.synthesize(c);

        std::size_t star = 0;
        for (std::size_t n = 1; n < u.size(); ++n) {
            if (std::abs(u[n]) > std::abs(u[star])) star = n;
        }
        const int si = static_cast<int>(star % static_cast<std::size_t>(g.nx()));
        const int sj = static_cast<int>(star / static_cast<std::size_t>(g.nx()));
        const double sup = std::abs(u[star]);
        const double sup_sign = u[star] >= 0.0 ? 1.0 : -1.0;

        std::vector<double> vals(E_.size());
        for (std::size_t n = 0; n < E_.size(); ++n) {
            double v = 0.0;
            for (std::size_t m = 0; m < M; ++m) v += E_[n][m] * c[m];
            vals[n] = v;
        }
        // Exact max over nodes, or its smooth p-norm majorant when power_ > 0.
        std::vector<double> weight(E_.size(), 0.0);
        double eta_val = 0.0;
        if (power_ > 0.0) {
            double big = 0.0;
            for (double v : vals) big = std::max(big, std::abs(v));
            if (big > 0.0) {
                double acc = 0.0;
                for (double v : vals) acc += std::pow(std::abs(v) / big, power_);
                eta_val = big * std::pow(acc, 1.0 / power_);
                for (std::size_t n = 0; n < vals.size(); ++n) {
                    const double sign = vals[n] >= 0.0 ? 1.0 : -1.0;
                    weight[n] = sign * std::pow(std::abs(vals[n]) / eta_val, power_ - 1.0);
                }
            }
        } else {
            std::size_t nstar = 0;
            for (std::size_t n = 1; n < vals.size(); ++n) {
                if (std::abs(vals[n]) > std::abs(vals[nstar])) nstar = n;
            }
            eta_val = std::abs(vals[nstar]);
            weight[nstar] = vals[nstar] >= 0.0 ? 1.0 : -1.0;
        }

        double s2 = 0.0, sd = 0.0, sh = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double mu = basis_.mu(m);
            s2 += c[m] * c[m];
            sd += mu * mu * c[m] * c[m];
            sh += (1.0 + mu) * c[m] * c[m];
        }
        const double q = basis_.q();
        const double l2 = std::sqrt(q * s2);
        const double D = std::sqrt(q * sd);
        const double H1 = std::sqrt(q * sh);
        const double root2 = std::sqrt(d_);
        const double root4 = std::sqrt(root2);

        std::vector<double> gnum(M), gden(M);
        double num = 0.0, den = 0.0;
        const int J = basis_.J();
        for (std::size_t m = 0; m < M; ++m) {
            const int j = static_cast<int>(m) / J;
            const int k = static_cast<int>(m) % J;
            const double mu = basis_.mu(m);
            const double d_sup = sup_sign * basis_.sx(j, si) * basis_.sy(k, sj);
            double d_eta = 0.0;
            for (std::size_t n = 0; n < E_.size(); ++n) d_eta += weight[n] * E_[n][m];
            const double d_D = q * mu * mu * c[m] / D;
            switch (which_) {
            case Lemma::sup:
                gnum[m] = d_sup - d_eta;
                gden[m] = root2 * d_D;
                break;
            case Lemma::l2:
                gnum[m] = q * c[m] / l2;
                gden[m] = c_.C2 * d_eta + c_.C3 * root2 * d_D;
                break;
            case Lemma::h1:
                gnum[m] = q * (1.0 + mu) * c[m] / H1;
                gden[m] = c_.C4 / root4 * d_eta + c_.C5 * root4 * d_D;
                break;
            }
        }
        switch (which_) {
        case Lemma::sup:
            num = sup - eta_val;
            den = root2 * D;
            break;
        case Lemma::l2:
            num = l2;
            den = c_.C2 * eta_val + c_.C3 * root2 * D;
            break;
        case Lemma::h1:
            num = H1;
            den = c_.C4 / root4 * eta_val + c_.C5 * root4 * D;
            break;
        }
        Objective out{num / den, std::vector<double>(M)};
        for (std::size_t m = 0; m < M; ++m) out.grad[m] = (gnum[m] - out.value * gden[m]) / den;
        return out;
    }

    void set_power(double power) { power_ = power; }
    const ModalBasis& basis() const { return basis_; }

private:
    const ModalBasis& basis_;
    std::vector<std::vector<double>> E_;
    double power_ = 0.0;
    double d_;
    Lemma which_;
    LemmaEstimates c_;
};

// Steps are taken in the coordinates b_m = mu_m c_m, where the D(A) norm is Euclidean.
void normalize(const ModalBasis& basis, std::vector<double>& c)
{
    double n = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) n += basis.mu(m) * basis.mu(m) * c[m] * c[m];
    n = std::sqrt(n);
    for (double& v : c) v /= n;
}

std::vector<double> ascend(const LemmaObjective& objective, std::vector<double> c, int steps)
{
    const ModalBasis& basis = objective.basis();
    normalize(basis, c);
    Objective cur = objective(c);
    double tau = 0.1;
    for (int s = 0; s < steps && tau > 1e-6; ++s) {
        double gn = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) gn += cur.grad[m] * cur.grad[m] / (basis.mu(m) * basis.mu(m));
        gn = std::sqrt(gn);
        if (!(gn > 0.0)) break;
        std::vector<double> trial = c;
        for (std::size_t m = 0; m < c.size(); ++m) {
            trial[m] += tau * cur.grad[m] / (basis.mu(m) * basis.mu(m) * gn);
        }
        normalize(basis, trial);
        Objective next = objective(trial);
        if (next.value > cur.value) {
            c = std::move(trial);
            cur = std::move(next);
            tau *= 1.5;
        } else {
            tau *= 0.5;
        }
    }
    return c;
}

// Coefficients of the field maximising u(x)/||u||_D at the grid points farthest from the nodes.
std::vector<std::vector<double>> peak_probes(const ModalBasis& basis, const NodeSet& ns, int count)
{
    const Grid& g = basis.grid();
    std::vector<std::pair<double, std::pair<int, int>>> far;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& q : ns.points()) best = std::min(best, std::hypot(g.x(i) - q.x, g.y(j) - q.y));
            far.push_back({best, {i, j}});
        }
    }
    std::sort(far.begin(), far.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::pair<int, int>> chosen;
    const double separation = far.empty() ? 0.0 : 0.5 * far.front().first;
    for (const auto& [dist, at] : far) {
        if (static_cast<int>(chosen.size()) >= count) break;
        bool apart = true;
        for (const auto& [ci, cj] : chosen) {
            if (std::hypot(g.x(at.first) - g.x(ci), g.y(at.second) - g.y(cj)) < separation) apart = false;
        }
        if (apart) chosen.push_back(at);
    }
    std::vector<std::vector<double>> out;
    const int J = basis.J();
    for (const auto& [i, j] : chosen) {
        std::vector<double> c(basis.modes());
        for (int a = 0; a < J; ++a) {
            for (int b = 0; b < J; ++b) {
                const std::size_t m = static_cast<std::size_t>(a * J + b);
                c[m] = basis.sx(a, i) * basis.sy(b, j) / (basis.mu(m) * basis.mu(m));
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

// Continuation through smooth majorants of eta before the exact objective.
std::vector<double> ascend_smoothed(LemmaObjective& objective, std::vector<double> c, int steps)
{
    for (double power : {8.0, 32.0, 128.0, 0.0}) {
        objective.set_power(power);
        c = ascend(objective, std::move(c), steps);
    }
    return c;
}

double lemma_value(Lemma which, const Sample& s, const LemmaEstimates& c)
{
    const double root2 = std::sqrt(s.d);
    const double root4 = std::sqrt(root2);
    switch (which) {
    case Lemma::sup: return (s.sup - s.eta) / (root2 * s.D);
    case Lemma::l2: return s.l2 / (c.C2 * s.eta + c.C3 * root2 * s.D);
    case Lemma::h1: return s.h1 / (c.C4 / root4 * s.eta + c.C5 * root4 * s.D);
    }
    return 0.0;
}

std::vector<double> densities_of(const std::vector<NodeSet>& nodesets, const Grid& grid)
{
    std::vector<double> d;
    for (const NodeSet& ns : nodesets) d.push_back(density(ns, grid));
    return d;
}

}  // namespace

FunctionFamily random_band_limited(const Grid& grid, int J, int count, std::uint64_t seed)
{
    if (count < 1) throw DomainError("family count must be positive");
    const ModalBasis basis(grid, J);
    FunctionFamily fam;
    fam.J = J;
    fam.count = count;
    fam.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int m = 0; m < count; ++m) {
        std::vector<double> c(basis.modes());
        for (int j = 1; j <= J; ++j) {
            for (int k = 1; k <= J; ++k) {
                c[static_cast<std::size_t>((j - 1) * J + (k - 1))] = normal(rng) / (j * j + k * k);
            }
        }
        fam.fields.push_back(basis.synthesize(c));
        fam.coefficients.push_back(std::move(c));
    }
    return fam;
}

ScalarField band_limited_field(const Grid& grid, int J, std::span<const double> coefficients)
{
    return ModalBasis(grid, J).synthesize(coefficients);
}

const char* to_string(Lemma l)
{
    switch (l) {
    case Lemma::sup: return "sup";
    case Lemma::l2: return "l2";
    case Lemma::h1: return "h1";
    }
    return "unknown";
}

LemmaCheck check_lemma(const ScalarField& f, const NodeSet& ns, Lemma which, const ConstantLedger& ledger)
{
    return check_lemma(f, ns, density(ns, f.grid()), which, ledger);
}

LemmaCheck check_lemma(const ScalarField& f, const NodeSet& ns, double d_N, Lemma which,
                       const ConstantLedger& ledger)
{
    if (d_N < 0.0) throw DomainError("node density must be non-negative");
    const double eta_val = eta(ns, f);
    const double D = da_norm(f, 1.0);
    LemmaCheck r{};
    switch (which) {
    case Lemma::sup:
        r.lhs = sup_norm(f);
        r.rhs = eta_val + ledger.get("C1") * std::sqrt(d_N) * D;
        break;
    case Lemma::l2:
        r.lhs = l2_norm(f);
        r.rhs = ledger.get("C2") * eta_val + ledger.get("C3") * std::sqrt(d_N) * D;
        break;
    case Lemma::h1:
        if (d_N == 0.0) throw DomainError("h1 interpolation inequality needs d_N > 0");
        r.lhs = h1_norm(f);
        r.rhs = ledger.get("C4") * std::pow(d_N, -0.25) * eta_val + ledger.get("C5") * std::pow(d_N, 0.25) * D;
        break;
    }
    r.satisfied = r.lhs <= r.rhs * (1.0 + 1e-12);
    r.tightness = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return r;
}

void LemmaEstimates::record(ConstantLedger& ledger, const std::string& note) const
{
    const std::pair<const char*, double> all[] = {{"C1", C1}, {"C2", C2}, {"C3", C3}, {"C4", C4}, {"C5", C5}};
    for (const auto& [name, value] : all) {
        if (value > 0.0) ledger.set(name, value, Provenance::estimated, note);
    }
}

LemmaEstimates estimate_constants(std::span<const ScalarField> fields, const std::vector<NodeSet>& nodesets,
                                  const EstimateOptions& opts)
{
    if (fields.empty() || nodesets.empty()) throw DomainError("estimate_constants needs fields and node sets");
    const Grid& grid = fields.front().grid();
    const std::vector<double> d = densities_of(nodesets, grid);
    for (double v : d) {
        if (!(v > 0.0)) throw DomainError("estimate_constants needs node sets with positive density");
    }
    std::vector<Sample> samples;
    for (const ScalarField& f : fields) {
        require_same_grid(grid, f.grid(), "estimate_constants");
        for (std::size_t s = 0; s < nodesets.size(); ++s) samples.push_back(measure(f, nodesets[s], d[s]));
    }
    return constants_from(samples, opts.first_pass_fraction);
}

LemmaEstimates estimate_constants(const FunctionFamily& family, const std::vector<NodeSet>& nodesets,
                                  const EstimateOptions& opts)
{
    if (family.fields.empty() || nodesets.empty()) {
        throw DomainError("estimate_constants needs fields and node sets");
    }
    LemmaEstimates first = estimate_constants(std::span<const ScalarField>(family.fields), nodesets, opts);
    if (!opts.ascent) return first;

    const Grid& grid = family.fields.front().grid();
    const ModalBasis basis(grid, family.J);
    const std::vector<double> d = densities_of(nodesets, grid);
    std::vector<ScalarField> pool = family.fields;
    std::size_t ascended = 0;
    for (std::size_t s = 0; s < nodesets.size(); ++s) {
        std::vector<Sample> own;
        for (const ScalarField& f : family.fields) own.push_back(measure(f, nodesets[s], d[s]));
        for (Lemma which : {Lemma::sup, Lemma::l2, Lemma::h1}) {
            std::vector<std::size_t> order(own.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            const auto starts = std::min<std::size_t>(static_cast<std::size_t>(opts.ascent_starts), order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  return lemma_value(which, own[a], first) > lemma_value(which, own[b], first);
                              });
            LemmaObjective objective(basis, nodesets[s], d[s], which, first);
            for (std::size_t r = 0; r < starts; ++r) {
                const std::vector<double> c =
                    ascend_smoothed(objective, family.coefficients[order[r]], opts.ascent_steps);
                pool.push_back(basis.synthesize(c));
                ++ascended;
            }
            if (which == Lemma::sup) {
                for (const std::vector<double>& c0 : peak_probes(basis, nodesets[s], opts.probe_points)) {
                    pool.push_back(basis.synthesize(ascend_smoothed(objective, c0, opts.ascent_steps)));
                    ++ascended;
                }
            }
            const int probe = std::min(opts.probe_modes, family.J);
            for (int j = 0; j < probe; ++j) {
                for (int k = 0; k < probe; ++k) {
                    std::vector<double> unit(basis.modes(), 0.0);
                    unit[static_cast<std::size_t>(j * family.J + k)] = 1.0;
                    pool.push_back(basis.synthesize(ascend_smoothed(objective, unit, opts.ascent_steps)));
                    ++ascended;
                }
            }
        }
    }
    LemmaEstimates out = estimate_constants(std::span<const ScalarField>(pool), nodesets, opts);
    out.ascended = ascended;
    return out;
}

void write_constants_csv(std::ostream& out, const LemmaEstimates& est, const std::string& family_spec,
                         const std::vector<double>& densities)
{
    std::ostringstream dens;
    dens.precision(17);
    for (std::size_t i = 0; i < densities.size(); ++i) dens << (i ? ";" : "") << densities[i];
    const auto old = out.precision(17);
    out << "lemma,constant,estimate,family,densities\n";
    const std::tuple<const char*, const char*, double> rows[] = {
        {"sup", "C1", est.C1}, {"l2", "C2", est.C2}, {"l2", "C3", est.C3}, {"h1", "C4", est.C4}, {"h1", "C5", est.C5}};
    for (const auto& [lemma, name, value] : rows) {
        out << lemma << ',' << name << ',' << value << ',' << family_spec << ',' << dens.str() << '\n';
    }
    out.precision(old);
}

BBoundRatio check_b_bound(const ScalarField& u, const ScalarField& v, double p)
{
    require_same_grid(u.grid(), v.grid(), "check_b_bound");
    const ScalarField w = u - v;
    const double wn = h1_norm(w);
    if (wn == 0.0) throw DomainError("check_b_bound needs u != v");
    const double num = l2_norm(apply_b(u, p) - apply_b(v, p));
    const double powers = std::pow(h1_norm(u), p - 1.0) + std::pow(h1_norm(v), p - 1.0);
    return {num / (powers * wn), num / ((1.0 + powers) * wn)};
}

double estimate_C_B(std::span<const ScalarField> fields, double p)
{
    if (fields.empty()) throw DomainError("estimate_C_B needs a nonempty family");
    double best = 0.0;
    const ScalarField zero(fields.front().grid());
    for (std::size_t a = 0; a < fields.size(); ++a) {
        best = std::max(best, check_b_bound(fields[a], zero, p).ratio);
        best = std::max(best, check_b_bound(fields[a], (1.0 - 1e-4) * fields[a], p).ratio);
        for (std::size_t b = a + 1; b < fields.size(); ++b) {
            best = std::max(best, check_b_bound(fields[a], fields[b], p).ratio);
        }
    }
    return best;
}

double semigroup_sup(double alpha, double t, const Domain& domain, int mode_budget)
{
    if (alpha < 0.0) throw DomainError("alpha must be non-negative");
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (mode_budget < 1) throw DomainError("mode budget must be positive");
    double best = 0.0;
    for (int j = 1; j <= mode_budget; ++j) {
        for (int k = 1; k <= mode_budget; ++k) {
            const double mu = continuous_eigenvalue(domain, j, k);
            best = std::max(best, std::pow(mu, alpha) * std::exp(-t * mu));
        }
    }
    return best;
}

SemigroupReport semigroup_bound(double alpha, double lam, double t, const Grid& grid, int mode_budget,
                                double t_min, double t_max, int sweep_points)
{
    const double lambda1 = continuous_eigenvalue(grid.domain(), 1, 1);
    if (lam < 0.0) throw DomainError("lam must be non-negative");
    if (lam >= lambda1) throw DomainError("lam must be below the first eigenvalue");
    if (!(t_min > 0.0) || !(t_max > t_min) || sweep_points < 2) throw DomainError("invalid t-sweep");

    SemigroupReport r{};
    r.value = semigroup_sup(alpha, t, grid.domain(), mode_budget);
    auto scaled = [&](double s) {
        return semigroup_sup(alpha, s, grid.domain(), mode_budget) * std::pow(s, alpha) * std::exp(lam * s);
    };
    r.C = scaled(t);
    const double ratio = std::log(t_max / t_min);
    for (int n = 0; n < sweep_points; ++n) {
        const double s = t_min * std::exp(ratio * n / (sweep_points - 1));
        r.C = std::max(r.C, scaled(s));
    }
    r.bound = r.C * std::pow(t, -alpha) * std::exp(-lam * t);
    r.within_bound = r.value <= r.bound * (1.0 + 1e-12);
    return r;
}

}  // namespace detnodes
