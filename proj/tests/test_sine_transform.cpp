#include <gtest/gtest.h>

#include <vector>

#include "detnodes/errors.hpp"
#include "detnodes/sine_transform.hpp"
#include "test_support.hpp"

namespace detnodes {
namespace {

using testing::sine_mode;

TEST(SineTransform, PureModeHasSingleCoefficient)
{
    const Grid g = make_grid(Domain(1.0, 2.0), 15, 23);
    const SineTransform2D t(g);
    const ScalarField s = sine_mode(g, 4, 7);
    std::vector<double> c(g.size());
    t.analyze(s.values(), c);
    for (int k = 1; k <= g.ny(); ++k) {
        for (int j = 1; j <= g.nx(); ++j) {
            const double v = c[static_cast<std::size_t>((j - 1) + (k - 1) * g.nx())];
            EXPECT_NEAR(v, (j == 4 && k == 7) ? 1.0 : 0.0, 1e-13);
        }
    }
}

TEST(SineTransform, RoundTrip)
{
    const Grid g = make_grid(Domain(3.0, 1.0), 31, 12);
    const SineTransform2D t(g);
    const ScalarField f = testing::random_field(g, 9);
    std::vector<double> c(g.size()), back(g.size());
    t.analyze(f.values(), c);
    t.synthesize(c, back);
    for (std::size_t n = 0; n < f.size(); ++n) EXPECT_NEAR(back[n], f[n], 1e-13);
}

TEST(SineTransform, RejectsWrongSpanSize)
{
    const Grid g = unit_square_grid(8);
    const SineTransform2D t(g);
    std::vector<double> in(g.size()), out(3);
    EXPECT_THROW(t.analyze(in, out), GridMismatch);
}

TEST(SpectralSolver, EigenvalueMatchesStencil)
{
    const Grid g = make_grid(Domain(1.0, 2.0), 15, 31);
    const SpectralSolver s(g);
    for (int j : {1, 5, 15}) {
        for (int k : {1, 9, 31}) {
            EXPECT_NEAR(s.eigenvalue(j, k), testing::stencil_eigenvalue(g, j, k), 1e-12 * s.eigenvalue(j, k));
        }
    }
}

TEST(SpectralSolver, SolvesShiftedOperator)
{
    const Grid g = make_grid(Domain(1.0, 1.5), 40, 60);
    const SpectralSolver s(g);
    const ScalarField rhs = testing::random_field(g, 5);
    for (auto [alpha, beta] : {std::pair{1.0, 1e-3}, std::pair{0.0, 2.0}, std::pair{3.0, 0.0}}) {
        const ScalarField u = s.solve(rhs, alpha, beta);
        const ScalarField back = alpha * u + (-beta) * laplacian(u);
        EXPECT_LE(testing::max_abs_diff(back, rhs), 1e-11) << alpha << " " << beta;
    }
}

TEST(SpectralSolver, EigenfieldScalesByShiftedEigenvalue)
{
    const Grid g = unit_square_grid(32);
    const SpectralSolver s(g);
    const ScalarField e = sine_mode(g, 2, 3);
    const double mu = testing::stencil_eigenvalue(g, 2, 3);
    const ScalarField u = s.solve(e, 1.0, 0.01);
    EXPECT_LE(testing::max_abs_diff(u, (1.0 / (1.0 + 0.01 * mu)) * e), 1e-15);
}

TEST(SpectralSolver, RejectsSingularShift)
{
    const Grid g = unit_square_grid(8);
    const SpectralSolver s(g);
    EXPECT_THROW(s.solve(ScalarField(g), 0.0, 0.0), NumericalFailure);
}

}  // namespace
}  // namespace detnodes
