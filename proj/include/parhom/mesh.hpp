#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "parhom/errors.hpp"

namespace parhom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

struct PointLocation {
    int triangle = -1;
    std::array<double, 3> bary{};  // nonnegative, sum to 1
};

class TriLocator;

// Conforming uniform triangulation of Omega = (-1,1)^2.
// Each grid cell is split along the lower-left -> upper-right diagonal.
struct Mesh {
    int n = 0;  // subdivisions per side
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<char> boundary_mask;            // per node
    std::vector<double> tri_area;
    std::vector<std::array<Vec2, 3>> tri_grad;  // gradient of each P1 vertex basis
    int n_interior = 0;
    std::vector<int> node_to_interior;  // -1 on boundary
    std::vector<int> interior_nodes;    // dof -> node id

    Vec2 centroid(int tri) const {
        const auto& t = triangles[tri];
        return (1.0 / 3.0) * (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]);
    }

    const TriLocator& locator() const;  // built lazily, cached

    ~Mesh();
    Mesh();
    Mesh(Mesh&&) noexcept;
    Mesh& operator=(Mesh&&) noexcept;
    Mesh(const Mesh&) = delete;
    Mesh& operator=(const Mesh&) = delete;

private:
    mutable std::unique_ptr<TriLocator> locator_;
};

Mesh build_uniform_mesh(int n);

// Point location over the mesh connectivity with arbitrary node positions
// (the image mesh of a harmonic map reuses this with deformed nodes).
// Deterministic: among containing triangles the lowest index wins.
class TriLocator {
public:
    explicit TriLocator(const Mesh& mesh);
    TriLocator(const Mesh& mesh, std::vector<Vec2> deformed_nodes);

    PointLocation locate(Vec2 p) const;  // throws OutOfDomainError
    const std::vector<Vec2>& node_positions() const { return nodes_; }

private:
    bool barycentric(int tri, Vec2 p, std::array<double, 3>& w) const;
    void build_grid();

    const Mesh* mesh_;
    std::vector<Vec2> nodes_;
    double xmin_, xmax_, ymin_, ymax_;
    int grid_n_ = 0;
    std::vector<std::vector<int>> cells_;  // triangle ids, ascending
};

PointLocation locate_point(const Mesh& mesh, Vec2 p);

double p1_interpolate(const Mesh& mesh, std::span<const double> nodal, const PointLocation& loc);

// CSV dump with `nodes` and `triangles` sections
void export_mesh_csv(const Mesh& mesh, std::ostream& out);

}  // namespace parhom
