#pragma once

#include <memory>
#include <span>
#include <vector>

#include "detnodes/grid.hpp"

namespace detnodes {

/// 2-D type-I discrete sine transform on the interior nodes of a grid
/// (FFTW RODFT00 in both directions). Diagonalizes the 5-point Laplacian.
class SineTransform2D {
public:
    explicit SineTransform2D(const Grid& grid);
    ~SineTransform2D();
    SineTransform2D(const SineTransform2D&) = delete;
    SineTransform2D& operator=(const SineTransform2D&) = delete;
    SineTransform2D(SineTransform2D&&) noexcept;
    SineTransform2D& operator=(SineTransform2D&&) noexcept;

    const Grid& grid() const;

    /// Coefficients c_jk with f = sum c_jk sin(j pi x/Lx) sin(k pi y/Ly).
    /// Output index (j-1) + (k-1) nx.
    void analyze(std::span<const double> field, std::span<double> coeffs) const;
    /// Inverse of analyze.
    void synthesize(std::span<const double> coeffs, std::span<double> field) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Direct solver for (alpha I - beta Delta_h) u = rhs via the sine basis.
class SpectralSolver {
public:
    explicit SpectralSolver(const Grid& grid);

    const Grid& grid() const { return transform_.grid(); }

    ScalarField solve(const ScalarField& rhs, double alpha, double beta) const;

    /// Discrete eigenvalue mu_h(j, k) of -Delta_h, 1-based indices.
    double eigenvalue(int j, int k) const
    {
        return mu_x_[static_cast<std::size_t>(j - 1)] + mu_y_[static_cast<std::size_t>(k - 1)];
    }

private:
    SineTransform2D transform_;
    std::vector<double> mu_x_;
    std::vector<double> mu_y_;
};

}  // namespace detnodes
