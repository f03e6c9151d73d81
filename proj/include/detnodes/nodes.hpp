#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "detnodes/grid.hpp"

namespace detnodes {

/// Finite set of distinct measurement points in the closed domain.
class NodeSet {
public:
    NodeSet(const Domain& domain, std::vector<Point> points);

    const Domain& domain() const { return domain_; }
    std::span<const Point> points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    /// Copy with one more node appended.
    NodeSet with(Point p) const;

private:
    Domain domain_;
    std::vector<Point> points_;
};

/// Covering radius d_N, maximized over the closed-grid nodes (corners included).
double density(const NodeSet& ns, const Grid& grid);

/// eta_N(f) = max_j |f(x_j)|.
double eta(const NodeSet& ns, const ScalarField& f);

enum class Placement {
    closed,    // candidates are all closed-grid nodes
    interior,  // boundary nodes excluded
};

/// Greedy farthest-point traversal from the domain centre; ties go to the
/// lexicographically smallest (x, y).
NodeSet farthest_point_fill(const Domain& domain, const Grid& grid, int count,
                            Placement placement = Placement::closed);

/// Shortest farthest-point prefix whose density is <= target.
NodeSet nodes_for_density(const Domain& domain, const Grid& grid, double target,
                          Placement placement = Placement::closed);

/// CSV rows "j,x,y" with a header line.
void write_nodes_csv(std::ostream& out, const NodeSet& ns);
NodeSet read_nodes_csv(std::istream& in, const Domain& domain);

}  // namespace detnodes
