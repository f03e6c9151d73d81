#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "detnodes/energy_monitor.hpp"
#include "detnodes/errors.hpp"
#include "test_support.hpp"

namespace detnodes {
namespace {

using testing::sine_mode;

const Domain unit(1.0, 1.0);

TEST(Delta1, Examples)
{
    EXPECT_NEAR(delta1(1.0, 1.0, 1.0, 2.0), 0.0625, 1e-15);
    EXPECT_NEAR(delta1(1.5, 2.0, 1.0, 3.0), std::pow(6.0, -4.0), 1e-18);
    EXPECT_NEAR(delta1(1.5, 2.0, 1.0, 3.0), 7.716e-4, 1e-7);
    EXPECT_NEAR(delta1(1.0, 1.0, 2.0, 2.0), 0.0625 / 16.0, 1e-15);
}

TEST(Delta1, RejectsNonpositiveInputs)
{
    EXPECT_THROW(delta1(0.0, 1.0, 1.0, 2.0), DomainError);
    EXPECT_THROW(delta1(1.0, -1.0, 1.0, 2.0), DomainError);
    EXPECT_THROW(delta1(1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST(Delta2, Examples)
{
    EXPECT_NEAR(delta2(1.0, 1.0, 1.0, 2.0, 0.0625), 1.0 / 256.0, 1e-15);
    EXPECT_EQ(delta2(1.0, 1.0, 1.0, 2.0, 1e-6), 1e-6);
    EXPECT_LT(delta2(1.0, 1.0, 1e6, 2.0, 0.0625), 1e-20);
}

TEST(Delta3, Examples)
{
    EXPECT_NEAR(delta3(1.0, 1.0, 1.0, 1.0, 2.0), 1.0 / 256.0, 1e-15);
    EXPECT_EQ(delta3(1.3, 0.7, 2.0, 5.0, 3.0), delta3(1.3, 0.7, 5.0, 2.0, 3.0));
    EXPECT_NEAR(delta3(1.3, 0.7, 2.0, 0.0, 2.0), delta1(1.3, 0.7, 2.0, 2.0), 1e-15);
}

TEST(Deltas, StrictlyDecreasingInEachConstant)
{
    const double base1 = delta1(1.0, 1.0, 1.5, 3.0);
    EXPECT_LT(delta1(1.1, 1.0, 1.5, 3.0), base1);
    EXPECT_LT(delta1(1.0, 1.1, 1.5, 3.0), base1);
    EXPECT_LT(delta1(1.0, 1.0, 1.6, 3.0), base1);
    const double base3 = delta3(1.0, 1.0, 1.5, 2.0, 3.0);
    EXPECT_LT(delta3(1.1, 1.0, 1.5, 2.0, 3.0), base3);
    EXPECT_LT(delta3(1.0, 1.1, 1.5, 2.0, 3.0), base3);
    EXPECT_LT(delta3(1.0, 1.0, 1.6, 2.0, 3.0), base3);
    EXPECT_LT(delta3(1.0, 1.0, 1.5, 2.1, 3.0), base3);
    const double bound = std::pow(4.0 * 1.0 * 1.0 * 1.5, -4.0);
    EXPECT_LE(delta2(1.0, 1.0, 1.5, 2.0, 1.0), bound);
}

TEST(CombinedM, SumOfPowers)
{
    EXPECT_DOUBLE_EQ(combined_M(2.0, 3.0, 3.0), 13.0);
}

TEST(LambdaRate, Examples)
{
    const double d = std::pow(0.125, 4.0);
    EXPECT_NEAR(lambda_rate(1.0, 1.0, 1.0, 1.0, 1.0, 2.0, d, Variant::thm2), 0.5, 1e-15);
    EXPECT_NEAR(lambda_rate(1.0, 1.0, 1.0, 1.0, 2.0, 2.0, d, Variant::thm3), 0.5, 1e-15);
    EXPECT_NEAR(lambda_rate(2.0, 4.0, 0.0, 1.0, 1.0, 2.0, 0.5, Variant::thm2), 0.25, 1e-15);
}

TEST(LambdaRate, BracketAtThresholdIsError)
{
    try {
        lambda_rate(1.0, 1.0, 1.0, 1.0, 1.0, 2.0, std::pow(0.25, 4.0), Variant::thm2);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("delta2"), std::string::npos);
    }
    EXPECT_THROW(lambda_rate(1.0, 1.0, 1.0, 1.0, 2.0, 2.0, std::pow(0.25, 4.0), Variant::thm3), DomainError);
}

TEST(HFunction, Examples)
{
    EXPECT_DOUBLE_EQ(h_function(1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.0, Variant::thm2), 8.0);
    EXPECT_DOUBLE_EQ(h_function(1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 0.0, Variant::thm3), 8.0);
    EXPECT_EQ(h_function(1.0, 1.0, 2.0, 3.0, 0.1, 0.0, 0.0, Variant::thm3), 0.0);
    EXPECT_DOUBLE_EQ(h_function(1.0, 1.0, 2.0, 3.0, 0.1, 0.0, 0.75, Variant::thm2), 1.5);
    EXPECT_NEAR(h_function(0.5, 2.0, 3.0, 2.0, 0.25, 0.5, 0.0, Variant::thm2),
                8.0 * 0.25 * 4.0 * 9.0 * 2.0 * 0.25, 1e-13);
}

ConstantLedger sample_ledger()
{
    ConstantLedger l;
    l.set("C_B", 1.5, Provenance::estimated, "family");
    l.set("C4", 0.4, Provenance::estimated);
    l.set("C5", 2.0, Provenance::assumed);
    l.set("a1", 3.0, Provenance::exact);
    l.set("a4", 1.0, Provenance::estimated);
    l.set_M("u", 1.0, Provenance::estimated);
    l.set_M("v", 2.0, Provenance::estimated);
    return l;
}

TEST(ThresholdReport, Thm2UsesDelta1AndEchoesProvenance)
{
    const ThresholdReport r = threshold_report(sample_ledger(), Variant::thm2, 3.0, {"u"});
    EXPECT_EQ(r.name, "delta1");
    EXPECT_NEAR(r.delta, std::pow(6.0, -4.0), 1e-18);
    EXPECT_EQ(r.C4, 0.4);
    EXPECT_EQ(r.a1, 3.0);
    const std::vector<std::string> expected{"C_B=estimated", "C5=assumed", "C4=estimated", "a1=exact",
                                            "a4=estimated", "M:u=estimated"};
    EXPECT_EQ(r.provenance, expected);
}

TEST(ThresholdReport, Thm3UsesDelta3)
{
    const ThresholdReport r = threshold_report(sample_ledger(), Variant::thm3, 2.0, {"u", "v"});
    EXPECT_EQ(r.name, "delta3");
    EXPECT_NEAR(r.delta, std::pow(2.0 * 1.5 * 2.0 * 3.0, -4.0), 1e-18);
    EXPECT_THROW(threshold_report(sample_ledger(), Variant::thm3, 2.0, {"u"}), DomainError);
}

TEST(EnergyConstants, CombinesMForThm3)
{
    const EnergyConstants c = energy_constants(sample_ledger(), Variant::thm3, 3.0, {"u", "v"});
    EXPECT_DOUBLE_EQ(c.M, 5.0);
    EXPECT_DOUBLE_EQ(energy_constants(sample_ledger(), Variant::thm2, 3.0, {"v"}).M, 2.0);
}

TEST(Gronwall, Examples)
{
    EXPECT_NEAR(gronwall_bound(1.0, 2.0, 0.0, 1.0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(gronwall_bound(1.0, 2.0, 0.0, 1.0), 0.13534, 1e-5);
    for (double t : {0.0, 0.5, 3.0, 40.0}) EXPECT_NEAR(gronwall_bound(0.25, 2.0, 0.5, t), 0.25, 1e-15);
    EXPECT_NEAR(gronwall_bound(3.0, 2.0, 0.5, 1e3), 0.25, 1e-15);
    EXPECT_THROW(gronwall_bound(1.0, 0.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(gronwall_bound(1.0, 1.0, 0.0, -1.0), DomainError);
}

TEST(Gronwall, MonotoneBranches)
{
    double above = gronwall_bound(3.0, 2.0, 0.5, 0.0);
    double below = gronwall_bound(0.1, 2.0, 0.5, 0.0);
    for (double t = 0.1; t < 5.0; t += 0.1) {
        const double a = gronwall_bound(3.0, 2.0, 0.5, t);
        const double b = gronwall_bound(0.1, 2.0, 0.5, t);
        EXPECT_LT(a, above);
        EXPECT_GT(b, below);
        EXPECT_EQ(gronwall_bound(0.25, 2.0, 0.5, t), gronwall_bound(0.25, 2.0, 0.5, 0.0));
        above = a;
        below = b;
    }
}

SolverConfig linear_config(double T)
{
    SolverConfig c;
    c.T = T;
    c.dt = 1e-3;
    c.nonlinearity_on = false;
    return c;
}

EnergyConstants linear_constants()
{
    EnergyConstants c;
    c.a1 = 4.33433;
    c.a4 = 1.0;
    c.C4 = 0.3;
    c.C5 = 0.3;
    c.p = 3.0;
    return c;
}

NodeSet four_nodes()
{
    return NodeSet(unit, {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}});
}

TEST(BuildTrace, IdenticalTrajectoriesGiveZeroSeries)
{
    const Grid g = unit_square_grid(32);
    SolverConfig cfg;
    cfg.T = 0.05;
    const ForcingSpec f = ForcingSpec::constant(sine_mode(g, 1, 2));
    const Trajectory u = solve(0.3 * sine_mode(g, 1, 1), f, cfg, 5);
    EnergyConstants c = linear_constants();
    c.C_B = 0.1;
    c.M = 1.0;
    const EnergyTrace t =
        build_trace(u, u, four_nodes(), CoefficientField::isotropic(1.0), 1.0, c, Variant::thm3, f, f);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t.w_a_sq[i], 0.0);
        EXPECT_EQ(t.w_da_sq[i], 0.0);
        EXPECT_EQ(t.eta_series[i], 0.0);
        EXPECT_EQ(t.fg_sq[i], 0.0);
        EXPECT_EQ(t.h_series[i], 0.0);
    }
    EXPECT_TRUE(check_energy_inequality(t, 0.0).ok());
    EXPECT_TRUE(check_gronwall(t, 0.0).ok());
    EXPECT_TRUE(std::isnan(t.residual_series.back()));
}

TEST(BuildTrace, EigenmodeDifferenceDecaysByScalarRecurrence)
{
    const Grid g = unit_square_grid(64);
    const Trajectory u = solve(0.1 * sine_mode(g, 2, 1), ForcingSpec::zero(g), linear_config(0.05), 1);
    const Trajectory v = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.05), 1);
    const EnergyTrace t = build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(),
                                      Variant::thm3, ForcingSpec::zero(g), ForcingSpec::zero(g));
    const double r = std::pow(1.0 + 1e-3 * testing::stencil_eigenvalue(g, 2, 1), -2.0);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) EXPECT_NEAR(t.w_a_sq[i + 1] / t.w_a_sq[i], r, 1e-10);
}

TEST(BuildTrace, LinearPairIsDissipative)
{
    const Grid g = unit_square_grid(32);
    const ForcingSpec f = ForcingSpec::constant(testing::random_field(g, 3));
    const Trajectory u = solve(testing::random_field(g, 1), f, linear_config(0.1), 4);
    const Trajectory v = solve(testing::random_field(g, 2), f, linear_config(0.1), 4);
    const EnergyTrace t =
        build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(), Variant::thm3, f, f);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) EXPECT_LE(t.w_a_sq[i + 1], t.w_a_sq[i]);
    EXPECT_TRUE(check_energy_inequality(t, 1e-6).ok());
}

TEST(BuildTrace, DecayRateBoundsLambdaFromBelow)
{
    const Grid g = unit_square_grid(64);
    const Trajectory u = solve(testing::random_field(g, 4), ForcingSpec::zero(g), linear_config(1.0), 20);
    const Trajectory v = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(1.0), 20);
    const EnergyTrace t = build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(),
                                      Variant::thm3, ForcingSpec::zero(g), ForcingSpec::zero(g));
    EXPECT_NEAR(t.lambda, 4.33433 * 4.33433, 1e-12);
    EXPECT_GE(decay_rate(t, 0.5, 1.0), t.lambda);
    EXPECT_TRUE(check_gronwall(t, 1e-6).ok());
}

TEST(BuildTrace, DoubledLambdaIsFlagged)
{
    const Grid g = unit_square_grid(64);
    const Trajectory u = solve(0.1 * sine_mode(g, 1, 1), ForcingSpec::zero(g), linear_config(0.05), 5);
    const Trajectory v = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.05), 5);
    const EnergyTrace t = build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(),
                                      Variant::thm3, ForcingSpec::zero(g), ForcingSpec::zero(g));
    EXPECT_TRUE(check_energy_inequality(t, 0.05).ok());
    // The true decay rate of w_a_sq is about 2 mu_1; lambda beyond it breaks every step.
    const double mu = testing::stencil_eigenvalue(g, 1, 1);
    const ViolationReport bad = check_energy_inequality(with_lambda(t, 4.0 * mu), 0.05);
    EXPECT_EQ(bad.indices.size(), t.size() - 1);
    EXPECT_GT(bad.worst_excess, 0.0);
}

TEST(BuildTrace, ForcingGapEntersH)
{
    const Grid g = unit_square_grid(16);
    const ScalarField G = sine_mode(g, 1, 1);
    const ForcingSpec f = ForcingSpec::converging(ScalarField(g), G, 1.0);
    const ForcingSpec zero = ForcingSpec::zero(g);
    const Trajectory u = solve(ScalarField(g), f, linear_config(0.02), 10);
    const Trajectory v = solve(ScalarField(g), zero, linear_config(0.02), 10);
    const EnergyTrace t =
        build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(), Variant::thm3, f,
                    zero);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(t.fg_sq[i], std::exp(-2.0 * t.times[i]) * 0.25, 1e-14);
        EXPECT_NEAR(t.h_series[i], 2.0 * t.fg_sq[i], 1e-14);
    }
}

TEST(BuildTrace, RejectsMismatchedSampling)
{
    const Grid g = unit_square_grid(16);
    const Trajectory a = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.02), 5);
    const Trajectory b = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.02), 4);
    EXPECT_THROW(build_trace(a, b, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(),
                             Variant::thm3, ForcingSpec::zero(g), ForcingSpec::zero(g)),
                 DomainError);
}

TEST(EstimateM, Examples)
{
    const Grid g = unit_square_grid(32);
    const Trajectory zero = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.02), 5);
    EXPECT_EQ(estimate_M(zero, 1.0, 0.0), 0.0);
    const ScalarField u0 = sine_mode(g, 1, 1);
    const Trajectory decay = solve(u0, ForcingSpec::zero(g), linear_config(0.1), 10);
    EXPECT_EQ(estimate_M(decay, 1.0, 0.0), da_norm(u0, 1.0));
    double prev = estimate_M(decay, 1.0, 0.0);
    for (double t0 : {0.02, 0.05, 0.08, 0.1}) {
        const double m = estimate_M(decay, 1.0, t0);
        EXPECT_LE(m, prev);
        prev = m;
    }
    EXPECT_THROW(estimate_M(decay, 1.0, 0.5), DomainError);
}

TEST(TraceCsv, HeaderAndRows)
{
    const Grid g = unit_square_grid(16);
    const Trajectory u = solve(sine_mode(g, 1, 1), ForcingSpec::zero(g), linear_config(0.003), 1);
    const Trajectory v = solve(ScalarField(g), ForcingSpec::zero(g), linear_config(0.003), 1);
    const EnergyTrace t = build_trace(u, v, four_nodes(), CoefficientField::isotropic(1.0), 1.0, linear_constants(),
                                      Variant::thm3, ForcingSpec::zero(g), ForcingSpec::zero(g));
    std::ostringstream out;
    write_trace_csv(out, t);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,w_a_sq,w_da_sq,eta,fg_sq,h,residual");
    int rows = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    EXPECT_EQ(rows, 4);
    EXPECT_EQ(last.substr(last.rfind(',') + 1), "nan");
}

}  // namespace
}  // namespace detnodes
