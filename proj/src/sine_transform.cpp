#include "detnodes/sine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "detnodes/errors.hpp"

namespace detnodes {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_real(n)), size(n)
    {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    double* data;
    std::size_t size;
};

}  // namespace

struct SineTransform2D::Impl {
    explicit Impl(const Grid& g) : grid(g), buffer(g.size())
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_2d(g.ny(), g.nx(), buffer.data, buffer.data, FFTW_RODFT00,
                                FFTW_RODFT00, FFTW_ESTIMATE);
        if (plan == nullptr) throw NumericalFailure("FFTW could not create a DST-I plan");
    }
    ~Impl()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    // Unnormalized DST-I: out = 4 sum in sin sin.
    void run(std::span<const double> in, std::span<double> out, double scale) const
    {
        if (in.size() != buffer.size || out.size() != buffer.size) {
            throw GridMismatch("sine transform: span size does not match grid");
        }
        std::copy(in.begin(), in.end(), buffer.data);
        fftw_execute(plan);
        std::transform(buffer.data, buffer.data + buffer.size, out.begin(),
                       [scale](double v) { return v * scale; });
    }

    Grid grid;
    FftwBuffer buffer;
    fftw_plan plan = nullptr;
};

SineTransform2D::SineTransform2D(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SineTransform2D::~SineTransform2D() = default;
SineTransform2D::SineTransform2D(SineTransform2D&&) noexcept = default;
SineTransform2D& SineTransform2D::operator=(SineTransform2D&&) noexcept = default;

const Grid& SineTransform2D::grid() const { return impl_->grid; }

void SineTransform2D::analyze(std::span<const double> field, std::span<double> coeffs) const
{
    const Grid& g = impl_->grid;
    impl_->run(field, coeffs, 1.0 / ((g.nx() + 1.0) * (g.ny() + 1.0)));
}

void SineTransform2D::synthesize(std::span<const double> coeffs, std::span<double> field) const
{
    impl_->run(coeffs, field, 0.25);
}

SpectralSolver::SpectralSolver(const Grid& grid) : transform_(grid)
{
    const double pi = std::numbers::pi;
    mu_x_.resize(static_cast<std::size_t>(grid.nx()));
    mu_y_.resize(static_cast<std::size_t>(grid.ny()));
    for (int j = 1; j <= grid.nx(); ++j) {
        const double s = std::sin(j * pi * grid.hx() / (2.0 * grid.domain().lx()));
        mu_x_[static_cast<std::size_t>(j - 1)] = 4.0 / (grid.hx() * grid.hx()) * s * s;
    }
    for (int k = 1; k <= grid.ny(); ++k) {
        const double s = std::sin(k * pi * grid.hy() / (2.0 * grid.domain().ly()));
        mu_y_[static_cast<std::size_t>(k - 1)] = 4.0 / (grid.hy() * grid.hy()) * s * s;
    }
}

ScalarField SpectralSolver::solve(const ScalarField& rhs, double alpha, double beta) const
{
    const Grid& g = grid();
    require_same_grid(g, rhs.grid(), "SpectralSolver::solve");
    std::vector<double> coeffs(g.size());
    transform_.analyze(rhs.values(), coeffs);
    for (int k = 0; k < g.ny(); ++k) {
        for (int j = 0; j < g.nx(); ++j) {
            const double denom = alpha + beta * (mu_x_[static_cast<std::size_t>(j)] +
                                                 mu_y_[static_cast<std::size_t>(k)]);
            if (denom == 0.0) throw NumericalFailure("spectral solve: singular shifted operator");
            coeffs[g.index(j, k)] /= denom;
        }
    }
    ScalarField out(g);
    transform_.synthesize(coeffs, out.values());
    return out;
}

}  // namespace detnodes
