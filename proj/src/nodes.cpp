#include "detnodes/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "detnodes/errors.hpp"

namespace detnodes {

NodeSet::NodeSet(const Domain& domain, std::vector<Point> points)
    : domain_(domain), points_(std::move(points))
{
    if (points_.empty()) throw DomainError("node set must contain at least one node");
    for (std::size_t a = 0; a < points_.size(); ++a) {
        if (!domain_.contains(points_[a])) {
            throw DomainError("node " + std::to_string(a + 1) + " lies outside the closed domain");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (points_[a].x == points_[b].x && points_[a].y == points_[b].y) {
                throw DomainError("duplicate node at index " + std::to_string(a + 1));
            }
        }
    }
}

NodeSet NodeSet::with(Point p) const
{
    std::vector<Point> pts = points_;
    pts.push_back(p);
    return NodeSet(domain_, std::move(pts));
}

namespace {

// Squared distance from every closed-grid node to the nearest point of `pts`.
class CoverageMap {
public:
    explicit CoverageMap(const Grid& grid)
        : grid_(grid), cx_(grid.nx() + 2), cy_(grid.ny() + 2),
          dist2_(static_cast<std::size_t>(cx_) * static_cast<std::size_t>(cy_),
                 std::numeric_limits<double>::infinity())
    {
    }

    void add(Point p)
    {
        for (int cj = 0; cj < cy_; ++cj) {
            for (int ci = 0; ci < cx_; ++ci) {
                const double dx = ci * grid_.hx() - p.x;
                const double dy = cj * grid_.hy() - p.y;
                double& d = dist2_[at(ci, cj)];
                d = std::min(d, dx * dx + dy * dy);
            }
        }
    }

    double max_distance() const
    {
        return std::sqrt(*std::max_element(dist2_.begin(), dist2_.end()));
    }

    // Farthest candidate, iterating x-major so the first strict winner is the
    // lexicographically smallest among (numerical) ties.
    Point farthest(Placement placement) const
    {
        const int lo_i = placement == Placement::interior ? 1 : 0;
        const int hi_i = placement == Placement::interior ? cx_ - 2 : cx_ - 1;
        const int lo_j = placement == Placement::interior ? 1 : 0;
        const int hi_j = placement == Placement::interior ? cy_ - 2 : cy_ - 1;
        double best = -1.0;
        int bi = lo_i;
        int bj = lo_j;
        for (int ci = lo_i; ci <= hi_i; ++ci) {
            for (int cj = lo_j; cj <= hi_j; ++cj) {
                const double d = dist2_[at(ci, cj)];
                if (d > best * (1.0 + 1e-12)) {
                    best = d;
                    bi = ci;
                    bj = cj;
                }
            }
        }
        return {bi * grid_.hx(), bj * grid_.hy()};
    }

private:
    std::size_t at(int ci, int cj) const
    {
        return static_cast<std::size_t>(cj) * static_cast<std::size_t>(cx_) + static_cast<std::size_t>(ci);
    }

    Grid grid_;
    int cx_;
    int cy_;
    std::vector<double> dist2_;
};

}  // namespace

double density(const NodeSet& ns, const Grid& grid)
{
    CoverageMap map(grid);
    for (const Point& p : ns.points()) map.add(p);
    return map.max_distance();
}

double eta(const NodeSet& ns, const ScalarField& f)
{
    double m = 0.0;
    for (const Point& p : ns.points()) m = std::max(m, std::abs(eval_field(f, p)));
    return m;
}

NodeSet farthest_point_fill(const Domain& domain, const Grid& grid, int count, Placement placement)
{
    if (count < 1) throw DomainError("farthest_point_fill needs at least one node");
    CoverageMap map(grid);
    std::vector<Point> pts{domain.center()};
    map.add(pts.back());
    while (static_cast<int>(pts.size()) < count) {
        pts.push_back(map.farthest(placement));
        map.add(pts.back());
    }
    return NodeSet(domain, std::move(pts));
}

NodeSet nodes_for_density(const Domain& domain, const Grid& grid, double target, Placement placement)
{
    if (!(target > 0.0)) throw DomainError("target density must be positive");
    const double limit = 0.5 * std::hypot(grid.hx(), grid.hy());
    if (target < limit) {
        throw DomainError("target density " + std::to_string(target) +
                          " is below the grid resolution limit " + std::to_string(limit));
    }
    CoverageMap map(grid);
    std::vector<Point> pts{domain.center()};
    map.add(pts.back());
    const std::size_t cap = static_cast<std::size_t>(grid.nx() + 2) * static_cast<std::size_t>(grid.ny() + 2);
    while (map.max_distance() > target) {
        if (pts.size() >= cap) throw DomainError("target density not reachable on this grid");
        pts.push_back(map.farthest(placement));
        map.add(pts.back());
    }
    return NodeSet(domain, std::move(pts));
}

void write_nodes_csv(std::ostream& out, const NodeSet& ns)
{
    const auto old = out.precision(17);
    out << "j,x,y\n";
    std::size_t j = 1;
    for (const Point& p : ns.points()) out << j++ << ',' << p.x << ',' << p.y << '\n';
    out.precision(old);
}

NodeSet read_nodes_csv(std::istream& in, const Domain& domain)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("j,x,y", 0) != 0) {
        throw DomainError("node CSV must start with header j,x,y");
    }
    std::vector<Point> pts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string j, x, y;
        if (!std::getline(row, j, ',') || !std::getline(row, x, ',') || !std::getline(row, y)) {
            throw DomainError("malformed node CSV row at line " + std::to_string(lineno));
        }
        pts.push_back({std::stod(x), std::stod(y)});
    }
    return NodeSet(domain, std::move(pts));
}

}  // namespace detnodes
