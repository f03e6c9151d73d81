#include "detnodes/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detnodes/errors.hpp"

namespace detnodes {

Domain::Domain(double lx, double ly) : lx_(lx), ly_(ly)
{
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw DomainError("domain extents must be positive and finite");
    }
}

double Domain::diameter() const { return std::hypot(lx_, ly_); }

bool Domain::contains(Point p, double rel_tol) const
{
    const double sx = rel_tol * lx_;
    const double sy = rel_tol * ly_;
    return p.x >= -sx && p.x <= lx_ + sx && p.y >= -sy && p.y <= ly_ + sy;
}

Grid::Grid(Domain domain, int nx, int ny)
    : domain_(domain), nx_(nx), ny_(ny),
      hx_(domain.lx() / (nx + 1)), hy_(domain.ly() / (ny + 1))
{
    if (nx < 3 || ny < 3) {
        throw DomainError("grid needs at least 3 interior points per axis, got " +
                          std::to_string(nx) + "x" + std::to_string(ny));
    }
}

Grid make_grid(Domain domain, int nx, int ny) { return Grid(domain, nx, ny); }

Grid unit_square_grid(int cells) { return Grid(Domain(1.0, 1.0), cells - 1, cells - 1); }

void require_same_grid(const Grid& a, const Grid& b, const char* where)
{
    if (!(a == b)) {
        throw GridMismatch(std::string(where) + ": fields live on different grids");
    }
}

ScalarField::ScalarField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) {
        throw GridMismatch("value count does not match grid size");
    }
}

double ScalarField::closed(int ci, int cj) const
{
    if (ci <= 0 || cj <= 0 || ci > grid_.nx() || cj > grid_.ny()) {
        return 0.0;
    }
    return (*this)(ci - 1, cj - 1);
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "operator+=");
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "operator-=");
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "axpy");
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += s * other.values_[n];
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

ScalarField sample(const Grid& grid, const std::function<double(double, double)>& fn)
{
    ScalarField f(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            f(i, j) = fn(grid.x(i), grid.y(j));
        }
    }
    return f;
}

double eval_field(const ScalarField& f, Point p)
{
    const Grid& g = f.grid();
    if (!g.domain().contains(p)) {
        throw DomainError("evaluation point outside the closed domain");
    }
    // Closed-grid coordinates in [0, n+1].
    const double gx = std::clamp(p.x / g.hx(), 0.0, static_cast<double>(g.nx() + 1));
    const double gy = std::clamp(p.y / g.hy(), 0.0, static_cast<double>(g.ny() + 1));
    const int ci = std::min(static_cast<int>(std::floor(gx)), g.nx());
    const int cj = std::min(static_cast<int>(std::floor(gy)), g.ny());
    const double tx = gx - ci;
    const double ty = gy - cj;

    // Exact hits return the stored value without blending round-off.
    if (tx == 0.0 && ty == 0.0) return f.closed(ci, cj);

    const double f00 = f.closed(ci, cj);
    const double f10 = f.closed(ci + 1, cj);
    const double f01 = f.closed(ci, cj + 1);
    const double f11 = f.closed(ci + 1, cj + 1);
    return (1.0 - tx) * (1.0 - ty) * f00 + tx * (1.0 - ty) * f10 +
           (1.0 - tx) * ty * f01 + tx * ty * f11;
}

ScalarField laplacian(const ScalarField& f)
{
    const Grid& g = f.grid();
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    const int nx = g.nx();
    const int ny = g.ny();
    ScalarField out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = f(i, j);
            const double w = i > 0 ? f(i - 1, j) : 0.0;
            const double e = i + 1 < nx ? f(i + 1, j) : 0.0;
            const double s = j > 0 ? f(i, j - 1) : 0.0;
            const double n = j + 1 < ny ? f(i, j + 1) : 0.0;
            out(i, j) = (w - 2.0 * c + e) * ihx2 + (s - 2.0 * c + n) * ihy2;
        }
    }
    return out;
}

double continuous_eigenvalue(const Domain& domain, int j, int k)
{
    const double a = j / domain.lx();
    const double b = k / domain.ly();
    return std::numbers::pi * std::numbers::pi * (a * a + b * b);
}

double discrete_eigenvalue(const Grid& grid, int j, int k)
{
    const double pi = std::numbers::pi;
    const double sx = std::sin(j * pi * grid.hx() / (2.0 * grid.domain().lx()));
    const double sy = std::sin(k * pi * grid.hy() / (2.0 * grid.domain().ly()));
    return 4.0 / (grid.hx() * grid.hx()) * sx * sx + 4.0 / (grid.hy() * grid.hy()) * sy * sy;
}

Eigenpair eigen_laplacian(const Grid& grid, int j, int k, Spectrum spectrum)
{
    if (j < 1 || j > grid.nx() || k < 1 || k > grid.ny()) {
        throw DomainError("eigen index out of range: (" + std::to_string(j) + "," +
                          std::to_string(k) + ")");
    }
    const double pi = std::numbers::pi;
    const double lx = grid.domain().lx();
    const double ly = grid.domain().ly();
    // Separable sampling keeps the field exactly a product of 1-D sine vectors.
    std::vector<double> sx(static_cast<std::size_t>(grid.nx()));
    std::vector<double> sy(static_cast<std::size_t>(grid.ny()));
    for (int i = 0; i < grid.nx(); ++i) sx[static_cast<std::size_t>(i)] = std::sin(j * pi * grid.x(i) / lx);
    for (int m = 0; m < grid.ny(); ++m) sy[static_cast<std::size_t>(m)] = std::sin(k * pi * grid.y(m) / ly);

    ScalarField field(grid);
    for (int m = 0; m < grid.ny(); ++m) {
        for (int i = 0; i < grid.nx(); ++i) {
            field(i, m) = sx[static_cast<std::size_t>(i)] * sy[static_cast<std::size_t>(m)];
        }
    }
    const double mu = spectrum == Spectrum::discrete ? discrete_eigenvalue(grid, j, k)
                                                     : continuous_eigenvalue(grid.domain(), j, k);
    return {mu, std::move(field)};
}

}  // namespace detnodes
