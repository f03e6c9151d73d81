#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detnodes/grid.hpp"

namespace detnodes {

/// Discrete L2 inner product with weights hx*hy.
double inner_product(const ScalarField& f, const ScalarField& g);

double l2_norm(const ScalarField& f);

/// Discrete L^q norm, q >= 1.
double lp_norm(const ScalarField& f, double q);

/// Forward differences over every edge of the closed grid (boundary edges
/// included), so that |f|_1^2 = -(laplacian(f), f) up to rounding.
double h1_seminorm(const ScalarField& f);
double h1_norm(const ScalarField& f);

/// ||A f|| for A = -k Delta_h.
double da_norm(const ScalarField& f, double k);

double sup_norm(const ScalarField& f);

/// Sampled lower bound of the Hoelder seminorm with exponent mu over the closed
/// grid: `budget` seeded random node pairs plus every pair that involves the
/// arg-max or arg-min of f.
double holder_quotient(const ScalarField& f, double mu, std::uint64_t budget = 1'000'000,
                       std::uint64_t seed = 0);

struct Mat2 {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    double min_eigenvalue() const;
};

/// Symmetric coefficient matrix a_ij(x), either constant or sampled at the
/// nodes of the closed grid. Symmetry holds by construction (a12 stored once).
class CoefficientField {
public:
    static CoefficientField constant(Mat2 a);
    static CoefficientField isotropic(double k) { return constant({k, 0.0, k}); }
    static CoefficientField sampled(const Grid& grid, const std::function<Mat2(double, double)>& fn);

    /// Smallest eigenvalue over all samples (the ellipticity constant).
    double ellipticity() const;

    /// Coefficient at closed-grid node (ci, cj).
    Mat2 at(int ci, int cj) const;

    bool is_constant() const { return !grid_.has_value(); }
    bool compatible(const Grid& grid) const { return !grid_ || *grid_ == grid; }

private:
    CoefficientField() = default;

    Mat2 constant_{};
    std::optional<Grid> grid_;
    std::vector<Mat2> samples_;
};

/// Energy norm (sum_ij (a_ij d_i f, d_j f))^{1/2} on the h1_seminorm stencil.
double a_norm(const ScalarField& f, const CoefficientField& a);

struct EquivalenceConstants {
    double a3_hat;
    double a4_hat;
};

/// Min/max of a_norm/h1_norm over a family: inner estimates of a3 and a4.
EquivalenceConstants equivalence_constants(const CoefficientField& a,
                                           std::span<const ScalarField> family);

/// 1/sqrt(mu_h(1,1)); l2_norm(f) <= value * h1_seminorm(f) for every grid field.
double poincare_constant(const Grid& grid);

enum class Provenance { assumed, estimated, exact };

const char* to_string(Provenance p);

/// Named constants feeding the thresholds: C1..C5, C_B, a1..a4, lambda1 and
/// M bounds stored as "M:<label>". Each entry remembers where it came from.
class ConstantLedger {
public:
    struct Entry {
        double value;
        Provenance provenance;
        std::string note;
    };

    void set(const std::string& name, double value, Provenance provenance, std::string note = {});
    bool has(const std::string& name) const { return entries_.contains(name); }
    double get(const std::string& name) const;
    const Entry& entry(const std::string& name) const;

    void set_M(const std::string& label, double value, Provenance provenance, std::string note = {})
    {
        set("M:" + label, value, provenance, std::move(note));
    }
    double M(const std::string& label) const { return get("M:" + label); }

    const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    std::map<std::string, Entry> entries_;
};

}  // namespace detnodes
