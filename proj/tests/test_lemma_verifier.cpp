#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "detnodes/errors.hpp"
#include "detnodes/heat_solver.hpp"
#include "detnodes/lemma_verifier.hpp"
#include "test_support.hpp"

namespace detnodes {
namespace {

using testing::pi;
using testing::sine_mode;

const Domain unit(1.0, 1.0);

NodeSet four_nodes()
{
    return NodeSet(unit, {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}});
}

ConstantLedger unit_constants()
{
    ConstantLedger l;
    for (const char* name : {"C1", "C2", "C3", "C4", "C5"}) l.set(name, 1.0, Provenance::assumed);
    return l;
}

TEST(RandomBandLimited, SingleModeIsMultipleOfFirstEigenfield)
{
    const Grid g = unit_square_grid(32);
    const FunctionFamily fam = random_band_limited(g, 1, 1, 7);
    const ScalarField s = sine_mode(g, 1, 1);
    const double c = fam.coefficients[0][0];
    EXPECT_LE(testing::max_abs_diff(fam.fields[0], c * s), 1e-14);
}

TEST(RandomBandLimited, DeterministicAndDistinct)
{
    const Grid g = unit_square_grid(64);
    const FunctionFamily a = random_band_limited(g, 16, 100, 3);
    const FunctionFamily b = random_band_limited(g, 16, 100, 3);
    ASSERT_EQ(a.fields.size(), 100u);
    for (std::size_t m = 0; m < a.fields.size(); ++m) {
        EXPECT_EQ(testing::max_abs_diff(a.fields[m], b.fields[m]), 0.0);
        EXPECT_GT(l2_norm(a.fields[m]), 0.0);
        if (m > 0) {
            EXPECT_GT(testing::max_abs_diff(a.fields[m], a.fields[m - 1]), 0.0);
        }
    }
}

TEST(RandomBandLimited, CoefficientsFollowAmplitudeLaw)
{
    const Grid g = unit_square_grid(32);
    const FunctionFamily fam = random_band_limited(g, 4, 1, 11);
    ScalarField expected(g);
    for (int j = 1; j <= 4; ++j) {
        for (int k = 1; k <= 4; ++k) {
            expected.axpy(fam.coefficients[0][static_cast<std::size_t>((j - 1) * 4 + (k - 1))], sine_mode(g, j, k));
        }
    }
    EXPECT_LE(testing::max_abs_diff(fam.fields[0], expected), 1e-13);
}

TEST(RandomBandLimited, RejectsCutoffBeyondGrid)
{
    const Grid g = unit_square_grid(8);
    EXPECT_THROW(random_band_limited(g, 0, 1, 0), DomainError);
    EXPECT_THROW(random_band_limited(g, 8, 1, 0), DomainError);
}

TEST(CheckLemma, ZeroField)
{
    const Grid g = unit_square_grid(32);
    for (Lemma l : {Lemma::sup, Lemma::l2, Lemma::h1}) {
        const LemmaCheck r = check_lemma(ScalarField(g), four_nodes(), l, unit_constants());
        EXPECT_EQ(r.lhs, 0.0);
        EXPECT_EQ(r.rhs, 0.0);
        EXPECT_TRUE(r.satisfied);
    }
}

TEST(CheckLemma, H1ExampleWithFourNodes)
{
    const Grid g = unit_square_grid(256);
    const LemmaCheck r = check_lemma(sine_mode(g, 1, 1), four_nodes(), Lemma::h1, unit_constants());
    const double d = std::sqrt(0.125);
    const double h1 = std::sqrt(0.25 + 2.0 * pi * pi * 0.25);
    EXPECT_NEAR(h1, 2.277, 1e-3);
    EXPECT_NEAR(r.lhs, h1, 1e-3);
    EXPECT_NEAR(std::pow(d, -0.25) * 0.5, 0.6485, 1e-4);
    EXPECT_NEAR(std::pow(d, 0.25) * 2.0 * pi * pi * 0.5, 7.611, 1e-3);
    EXPECT_NEAR(r.rhs, 0.6485 + 7.611, 2e-2);
    EXPECT_TRUE(r.satisfied);
}

TEST(CheckLemma, SupExampleWithCentreNode)
{
    const Grid g = unit_square_grid(256);
    const LemmaCheck r = check_lemma(sine_mode(g, 1, 1), NodeSet(unit, {{0.5, 0.5}}), Lemma::sup, unit_constants());
    EXPECT_NEAR(r.lhs, 1.0, 1e-4);
    EXPECT_GT(r.rhs, 1.0);
    EXPECT_TRUE(r.satisfied);
}

TEST(CheckLemma, ScaleInvariantRatio)
{
    const Grid g = unit_square_grid(64);
    const ScalarField f = random_band_limited(g, 8, 1, 5).fields[0];
    for (Lemma l : {Lemma::sup, Lemma::l2, Lemma::h1}) {
        const double base = check_lemma(f, four_nodes(), l, unit_constants()).tightness;
        for (double c : {-3.0, 1e-3, 250.0}) {
            EXPECT_NEAR(check_lemma(c * f, four_nodes(), l, unit_constants()).tightness, base, 1e-10 * base);
        }
    }
}

TEST(CheckLemma, H1RejectsZeroDensity)
{
    const Grid g = unit_square_grid(16);
    EXPECT_THROW(check_lemma(sine_mode(g, 1, 1), four_nodes(), 0.0, Lemma::h1, unit_constants()), DomainError);
    EXPECT_THROW(check_lemma(sine_mode(g, 1, 1), four_nodes(), -0.1, Lemma::sup, unit_constants()), DomainError);
}

TEST(EstimateConstants, MultiplesOfOneFieldGiveSingleRatio)
{
    const Grid g = unit_square_grid(64);
    const ScalarField f = random_band_limited(g, 6, 1, 2).fields[0];
    const std::vector<ScalarField> fields{f, 2.0 * f, -0.5 * f};
    const NodeSet ns = four_nodes();
    const LemmaEstimates e = estimate_constants(fields, {ns});
    const double d = density(ns, g);
    const double expected = (sup_norm(f) - eta(ns, f)) / (std::sqrt(d) * da_norm(f, 1.0));
    EXPECT_NEAR(e.C1, std::max(expected, 0.0), 1e-12);
}

std::vector<NodeSet> three_densities(const Grid& g)
{
    std::vector<NodeSet> out;
    for (double target : {0.35, 0.18, 0.09}) out.push_back(nodes_for_density(unit, g, target, Placement::interior));
    return out;
}

TEST(EstimateConstants, SupersetNeverDecreases)
{
    const Grid g = unit_square_grid(64);
    const FunctionFamily fam = random_band_limited(g, 8, 30, 4);
    const std::vector<NodeSet> ns = three_densities(g);
    const std::span<const ScalarField> all(fam.fields);
    const LemmaEstimates small = estimate_constants(all.first(10), ns);
    const LemmaEstimates large = estimate_constants(all, ns);
    EXPECT_GE(large.C1, small.C1);
    EXPECT_GE(large.C4, small.C4);
    EXPECT_GE(large.C5, small.C5);
    // C2 and C3 are refit jointly; the superset constants must still cover the subset.
    for (const ScalarField& f : all.first(10)) {
        for (const NodeSet& n : ns) {
            ConstantLedger l;
            large.record(l, "large");
            for (Lemma lemma : {Lemma::sup, Lemma::l2, Lemma::h1}) EXPECT_TRUE(check_lemma(f, n, lemma, l).satisfied);
        }
    }
}

void expect_no_violations(const std::vector<ScalarField>& fields, const std::vector<NodeSet>& ns,
                          const LemmaEstimates& e)
{
    ConstantLedger l;
    e.record(l, "test");
    ASSERT_TRUE(l.has("C1") && l.has("C2") && l.has("C3") && l.has("C4") && l.has("C5"));
    int violations = 0;
    for (const ScalarField& f : fields) {
        for (const NodeSet& n : ns) {
            for (Lemma lemma : {Lemma::sup, Lemma::l2, Lemma::h1}) violations += !check_lemma(f, n, lemma, l).satisfied;
        }
    }
    EXPECT_EQ(violations, 0);
}

TEST(EstimateConstants, ReplayHasNoViolations)
{
    const Grid g = unit_square_grid(64);
    const FunctionFamily fam = random_band_limited(g, 8, 40, 9);
    const std::vector<NodeSet> ns = three_densities(g);
    expect_no_violations(fam.fields, ns, estimate_constants(fam, ns));
}

TEST(EstimateConstants, AscentOnlyRaisesConstants)
{
    const Grid g = unit_square_grid(64);
    const FunctionFamily fam = random_band_limited(g, 8, 20, 10);
    const std::vector<NodeSet> ns = three_densities(g);
    EstimateOptions opts;
    opts.ascent = true;
    const LemmaEstimates plain = estimate_constants(fam, ns);
    const LemmaEstimates pushed = estimate_constants(fam, ns, opts);
    EXPECT_GE(pushed.C1, plain.C1);
    EXPECT_GT(pushed.ascended, 0u);
    EXPECT_GT(pushed.samples, plain.samples);
    expect_no_violations(fam.fields, ns, pushed);
}

TEST(EstimateConstants, H1PairIsBalanced)
{
    const Grid g = unit_square_grid(64);
    const FunctionFamily fam = random_band_limited(g, 8, 20, 12);
    const LemmaEstimates e = estimate_constants(fam, three_densities(g));
    EXPECT_GT(e.C4, 0.0);
    EXPECT_EQ(e.C4, e.C5);
}

TEST(EstimateConstants, RejectsEmptyInputs)
{
    const Grid g = unit_square_grid(16);
    EXPECT_THROW(estimate_constants(std::vector<ScalarField>{}, {four_nodes()}), DomainError);
    EXPECT_THROW(estimate_constants(std::vector<ScalarField>{sine_mode(g, 1, 1)}, {}), DomainError);
}

TEST(ConstantsCsv, FiveRows)
{
    LemmaEstimates e;
    e.C1 = 0.1;
    e.C2 = 0.2;
    e.C3 = 0.3;
    e.C4 = 0.4;
    e.C5 = 0.4;
    std::ostringstream out;
    write_constants_csv(out, e, "J=16", {0.35, 0.18});
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "lemma,constant,estimate,family,densities");
    EXPECT_NE(s.find("sup,C1,0.10000000000000001,J=16,0.34999999999999998;0.17999999999999999\n"), std::string::npos);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
}

TEST(BBound, FirstEigenfieldAgainstZero)
{
    const Grid g = unit_square_grid(256);
    const ScalarField u = sine_mode(g, 1, 1);
    const double h1 = std::sqrt(0.25 + 2.0 * pi * pi * 0.25);
    EXPECT_NEAR((5.0 / 16.0) / (h1 * h1 * h1), 0.02647, 1e-5);
    EXPECT_NEAR(check_b_bound(u, ScalarField(g), 3.0).ratio, 0.02647, 1e-3);
}

TEST(BBound, PointwiseSpotCheck)
{
    const double u = 2.0, v = 1.0;
    EXPECT_LE(std::abs(u * u * u - v * v * v), 1.5 * (u * u + v * v) * std::abs(u - v));
}

TEST(BBound, SymmetricAndHomogeneous)
{
    const Grid g = unit_square_grid(64);
    const ScalarField u = random_band_limited(g, 8, 1, 1).fields[0];
    const ScalarField v = random_band_limited(g, 8, 1, 2).fields[0];
    for (double p : {2.0, 3.0, 4.5}) {
        const BBoundRatio r = check_b_bound(u, v, p);
        EXPECT_NEAR(check_b_bound(v, u, p).ratio, r.ratio, 1e-14 * r.ratio);
        EXPECT_LT(r.ratio_plus_one, r.ratio);
        const double c = 3.7;
        const double num_scale =
            l2_norm(apply_b(c * u, p) - apply_b(c * v, p)) / l2_norm(apply_b(u, p) - apply_b(v, p));
        EXPECT_NEAR(num_scale, std::pow(c, p), 1e-10 * std::pow(c, p));
        EXPECT_NEAR(check_b_bound(c * u, c * v, p).ratio, r.ratio, 1e-10 * r.ratio);
    }
}

TEST(BBound, RejectsEqualArguments)
{
    const Grid g = unit_square_grid(16);
    EXPECT_THROW(check_b_bound(sine_mode(g, 1, 1), sine_mode(g, 1, 1), 3.0), DomainError);
}

TEST(EstimateCB, DominatesEveryPair)
{
    const Grid g = unit_square_grid(32);
    const FunctionFamily fam = random_band_limited(g, 6, 8, 21);
    const double cb = estimate_C_B(fam.fields, 3.0);
    for (std::size_t a = 0; a < fam.fields.size(); ++a) {
        EXPECT_LE(check_b_bound(fam.fields[a], ScalarField(g), 3.0).ratio, cb);
        for (std::size_t b = 0; b < a; ++b) EXPECT_LE(check_b_bound(fam.fields[a], fam.fields[b], 3.0).ratio, cb);
    }
    EXPECT_THROW(estimate_C_B(std::vector<ScalarField>{}, 3.0), DomainError);
}

TEST(Semigroup, AlphaZeroIsFirstModeDecay)
{
    const Grid g = unit_square_grid(16);
    EXPECT_NEAR(semigroup_sup(0.0, 0.1, unit, 100), std::exp(-0.2 * pi * pi), 1e-15);
    // exp(-1.97392) = 0.138911; the quoted 0.13894 is rounded.
    EXPECT_NEAR(semigroup_sup(0.0, 0.1, unit, 100), 0.13894, 1e-4);
    double prev = semigroup_sup(0.0, 0.001, unit, 50);
    for (double t = 0.01; t < 5.0; t *= 1.5) {
        const double v = semigroup_sup(0.0, t, unit, 50);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_TRUE(semigroup_bound(0.0, 0.0, 0.1, g, 100).within_bound);
}

TEST(Semigroup, HalfPowerAttainedAtFirstEigenvalue)
{
    const Grid g = unit_square_grid(16);
    const double mu = 2.0 * pi * pi;
    EXPECT_NEAR(semigroup_sup(0.5, 0.1, unit, 100), std::sqrt(mu) * std::exp(-0.1 * mu), 1e-14);
    const SemigroupReport r = semigroup_bound(0.5, 0.0, 0.1, g, 100);
    EXPECT_NEAR(r.value, 0.6173, 1e-3);
    EXPECT_TRUE(r.within_bound);
}

TEST(Semigroup, ConstantIsFiniteOverSweep)
{
    const Grid g = unit_square_grid(16);
    for (double alpha : {0.25, 0.5, 1.0}) {
        for (double lam : {0.0, 5.0, 19.0}) {
            const SemigroupReport r = semigroup_bound(alpha, lam, 1.0, g, 100);
            EXPECT_TRUE(std::isfinite(r.C));
            EXPECT_TRUE(r.within_bound);
        }
    }
}

TEST(Semigroup, Errors)
{
    const Grid g = unit_square_grid(16);
    EXPECT_THROW(semigroup_bound(0.5, 2.0 * pi * pi, 0.1, g, 10), DomainError);
    EXPECT_THROW(semigroup_bound(0.5, -1.0, 0.1, g, 10), DomainError);
    EXPECT_THROW(semigroup_sup(-0.5, 0.1, unit, 10), DomainError);
    EXPECT_THROW(semigroup_sup(0.5, 0.0, unit, 10), DomainError);
}

}  // namespace
}  // namespace detnodes
