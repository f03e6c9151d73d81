#pragma once

// Uniform vertex grids on axis-aligned rectangles with homogeneous Dirichlet
// boundary. Only interior nodes are stored; boundary nodes are implicitly 0.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace detnodes {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

class Domain {
public:
    Domain(double lx, double ly);

    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double area() const { return lx_ * ly_; }
    double diameter() const;
    Point center() const { return {0.5 * lx_, 0.5 * ly_}; }

    /// Closed-rectangle membership with a relative slack of `rel_tol`.
    bool contains(Point p, double rel_tol = 1e-12) const;

    bool operator==(const Domain&) const = default;

private:
    double lx_;
    double ly_;
};

/// nx x ny interior nodes, x_i = (i+1) hx for i in [0, nx).
class Grid {
public:
    Grid(Domain domain, int nx, int ny);

    const Domain& domain() const { return domain_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double cell_area() const { return hx_ * hy_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }

    double x(int i) const { return (i + 1) * hx_; }
    double y(int j) const { return (j + 1) * hy_; }
    Point point(int i, int j) const { return {x(i), y(j)}; }

    /// Row-major with x fastest.
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }

    bool operator==(const Grid&) const = default;

private:
    Domain domain_;
    int nx_;
    int ny_;
    double hx_;
    double hy_;
};

Grid make_grid(Domain domain, int nx, int ny);

/// Unit-square grid with `cells` intervals per axis (cells-1 interior nodes).
Grid unit_square_grid(int cells);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

class ScalarField {
public:
    explicit ScalarField(Grid grid);
    ScalarField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator[](std::size_t n) const { return values_[n]; }
    double& operator[](std::size_t n) { return values_[n]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Value at an index pair of the closed grid (0..nx+1, 0..ny+1), 0 on the boundary.
    double closed(int ci, int cj) const;

    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

    /// this += s * other
    ScalarField& axpy(double s, const ScalarField& other);

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator-(ScalarField a);

ScalarField sample(const Grid& grid, const std::function<double(double, double)>& fn);

/// Bilinear interpolation of the nodal values, boundary treated as zero.
double eval_field(const ScalarField& f, Point p);

/// 5-point stencil with zero ghost values.
ScalarField laplacian(const ScalarField& f);

enum class Spectrum { continuous, discrete };

struct Eigenpair {
    double eigenvalue;
    ScalarField field;
};

double continuous_eigenvalue(const Domain& domain, int j, int k);
double discrete_eigenvalue(const Grid& grid, int j, int k);

/// Eigenpair of -Delta: field sin(j pi x / Lx) sin(k pi y / Ly) sampled on the grid.
Eigenpair eigen_laplacian(const Grid& grid, int j, int k, Spectrum spectrum = Spectrum::continuous);

}  // namespace detnodes
