#include "detnodes/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "detnodes/errors.hpp"

namespace detnodes {

double inner_product(const ScalarField& f, const ScalarField& g)
{
    require_same_grid(f.grid(), g.grid(), "inner_product");
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += f[n] * g[n];
    return s * f.grid().cell_area();
}

double l2_norm(const ScalarField& f)
{
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * f.grid().cell_area());
}

double lp_norm(const ScalarField& f, double q)
{
    if (!(q >= 1.0)) throw DomainError("lp_norm needs q >= 1");
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), q);
    return std::pow(s * f.grid().cell_area(), 1.0 / q);
}

namespace {

struct GradientSums {
    double xx = 0.0;
    double yy = 0.0;
};

// Sum of squared forward differences over x-edges and y-edges of the closed grid.
GradientSums gradient_sums(const ScalarField& f)
{
    const Grid& g = f.grid();
    GradientSums s;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int cj = 1; cj <= g.ny(); ++cj) {
        for (int ci = 0; ci <= g.nx(); ++ci) {
            const double d = (f.closed(ci + 1, cj) - f.closed(ci, cj)) * ihx;
            s.xx += d * d;
        }
    }
    for (int cj = 0; cj <= g.ny(); ++cj) {
        for (int ci = 1; ci <= g.nx(); ++ci) {
            const double d = (f.closed(ci, cj + 1) - f.closed(ci, cj)) * ihy;
            s.yy += d * d;
        }
    }
    return s;
}

}  // namespace

double h1_seminorm(const ScalarField& f)
{
    const GradientSums s = gradient_sums(f);
    return std::sqrt((s.xx + s.yy) * f.grid().cell_area());
}

double h1_norm(const ScalarField& f)
{
    const double l2 = l2_norm(f);
    const double semi = h1_seminorm(f);
    return std::sqrt(l2 * l2 + semi * semi);
}

double da_norm(const ScalarField& f, double k)
{
    if (!(k > 0.0)) throw DomainError("da_norm needs k > 0");
    return k * l2_norm(laplacian(f));
}

double sup_norm(const ScalarField& f)
{
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double holder_quotient(const ScalarField& f, double mu, std::uint64_t budget, std::uint64_t seed)
{
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("holder exponent must lie in (0, 1]");
    if (budget < 1) throw DomainError("holder pair budget must be >= 1");

    const Grid& g = f.grid();
    const int cx = g.nx() + 2;
    const int cy = g.ny() + 2;
    const std::uint64_t count = static_cast<std::uint64_t>(cx) * static_cast<std::uint64_t>(cy);

    auto value = [&](std::uint64_t n) {
        return f.closed(static_cast<int>(n % static_cast<std::uint64_t>(cx)),
                        static_cast<int>(n / static_cast<std::uint64_t>(cx)));
    };
    auto quotient = [&](std::uint64_t a, std::uint64_t b) {
        if (a == b) return 0.0;
        const double dx = (static_cast<double>(a % cx) - static_cast<double>(b % cx)) * g.hx();
        const double dy = (static_cast<double>(a / cx) - static_cast<double>(b / cx)) * g.hy();
        return std::abs(value(a) - value(b)) / std::pow(std::hypot(dx, dy), mu);
    };

    std::uint64_t arg_max = 0;
    std::uint64_t arg_min = 0;
    for (std::uint64_t n = 1; n < count; ++n) {
        if (value(n) > value(arg_max)) arg_max = n;
        if (value(n) < value(arg_min)) arg_min = n;
    }

    double best = 0.0;
    for (std::uint64_t n = 0; n < count; ++n) {
        best = std::max({best, quotient(arg_max, n), quotient(arg_min, n)});
    }

    // Raw engine output keeps the pair sequence identical across standard libraries.
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < budget; ++s) {
        const std::uint64_t a = rng() % count;
        const std::uint64_t b = rng() % count;
        best = std::max(best, quotient(a, b));
    }
    return best;
}

double Mat2::min_eigenvalue() const
{
    const double mean = 0.5 * (a11 + a22);
    const double half_diff = 0.5 * (a11 - a22);
    return mean - std::hypot(half_diff, a12);
}

CoefficientField CoefficientField::constant(Mat2 a)
{
    CoefficientField c;
    c.constant_ = a;
    if (!(c.ellipticity() > 0.0)) throw DomainError("coefficient matrix is not uniformly elliptic");
    return c;
}

CoefficientField CoefficientField::sampled(const Grid& grid,
                                           const std::function<Mat2(double, double)>& fn)
{
    CoefficientField c;
    c.grid_ = grid;
    const int cx = grid.nx() + 2;
    const int cy = grid.ny() + 2;
    c.samples_.reserve(static_cast<std::size_t>(cx) * static_cast<std::size_t>(cy));
    for (int cj = 0; cj < cy; ++cj) {
        for (int ci = 0; ci < cx; ++ci) {
            c.samples_.push_back(fn(ci * grid.hx(), cj * grid.hy()));
        }
    }
    if (!(c.ellipticity() > 0.0)) throw DomainError("coefficient field is not uniformly elliptic");
    return c;
}

double CoefficientField::ellipticity() const
{
    if (!grid_) return constant_.min_eigenvalue();
    double m = std::numeric_limits<double>::infinity();
    for (const Mat2& s : samples_) m = std::min(m, s.min_eigenvalue());
    return m;
}

Mat2 CoefficientField::at(int ci, int cj) const
{
    if (!grid_) return constant_;
    return samples_[static_cast<std::size_t>(cj) * static_cast<std::size_t>(grid_->nx() + 2) +
                    static_cast<std::size_t>(ci)];
}

double a_norm(const ScalarField& f, const CoefficientField& a)
{
    const Grid& g = f.grid();
    if (!a.compatible(g)) throw GridMismatch("a_norm: coefficients sampled on a different grid");
    if (!(a.ellipticity() > 0.0)) throw DomainError("a_norm: coefficient field is not elliptic");

    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (int cj = 1; cj <= g.ny(); ++cj) {
        for (int ci = 0; ci <= g.nx(); ++ci) {
            const double d = (f.closed(ci + 1, cj) - f.closed(ci, cj)) * ihx;
            const double a11 = 0.5 * (a.at(ci, cj).a11 + a.at(ci + 1, cj).a11);
            sxx += a11 * (d * d);
        }
    }
    for (int cj = 0; cj <= g.ny(); ++cj) {
        for (int ci = 1; ci <= g.nx(); ++ci) {
            const double d = (f.closed(ci, cj + 1) - f.closed(ci, cj)) * ihy;
            const double a22 = 0.5 * (a.at(ci, cj).a22 + a.at(ci, cj + 1).a22);
            syy += a22 * (d * d);
        }
    }
    // Mixed term on cells, with cell-averaged gradients.
    for (int cj = 0; cj <= g.ny(); ++cj) {
        for (int ci = 0; ci <= g.nx(); ++ci) {
            const double a12 = 0.25 * (a.at(ci, cj).a12 + a.at(ci + 1, cj).a12 +
                                       a.at(ci, cj + 1).a12 + a.at(ci + 1, cj + 1).a12);
            if (a12 == 0.0) continue;
            const double gx = 0.5 * ihx * (f.closed(ci + 1, cj) - f.closed(ci, cj) +
                                           f.closed(ci + 1, cj + 1) - f.closed(ci, cj + 1));
            const double gy = 0.5 * ihy * (f.closed(ci, cj + 1) - f.closed(ci, cj) +
                                           f.closed(ci + 1, cj + 1) - f.closed(ci + 1, cj));
            sxy += 2.0 * a12 * gx * gy;
        }
    }
    return std::sqrt(std::max(0.0, (sxx + syy + sxy) * g.cell_area()));
}

EquivalenceConstants equivalence_constants(const CoefficientField& a,
                                           std::span<const ScalarField> family)
{
    if (family.empty()) throw DomainError("equivalence_constants: empty family");
    EquivalenceConstants out{std::numeric_limits<double>::infinity(), 0.0};
    for (const ScalarField& f : family) {
        const double h1 = h1_norm(f);
        if (h1 == 0.0) throw DomainError("equivalence_constants: zero field in family");
        const double r = a_norm(f, a) / h1;
        out.a3_hat = std::min(out.a3_hat, r);
        out.a4_hat = std::max(out.a4_hat, r);
    }
    return out;
}

double poincare_constant(const Grid& grid) { return 1.0 / std::sqrt(discrete_eigenvalue(grid, 1, 1)); }

const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::assumed: return "assumed";
    case Provenance::estimated: return "estimated";
    case Provenance::exact: return "exact";
    }
    return "unknown";
}

void ConstantLedger::set(const std::string& name, double value, Provenance provenance, std::string note)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("ledger constant " + name + " must be positive and finite");
    }
    entries_[name] = Entry{value, provenance, std::move(note)};
}

double ConstantLedger::get(const std::string& name) const { return entry(name).value; }

const ConstantLedger::Entry& ConstantLedger::entry(const std::string& name) const
{
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw DomainError("ledger has no constant named " + name);
    return it->second;
}

}  // namespace detnodes
