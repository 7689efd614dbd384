#pragma once

#include <array>
#include <vector>

namespace fsifem {

// A computational domain is a rectangle cut into horizontal strips. Each strip
// carries either the fluid (parabolic) or the structure (hyperbolic) problem;
// adjacent strips always have different roles, and every internal strip
// boundary is a coupling interface.
enum class StripRole { Fluid, Solid };

enum class Side { Left = 0, Bottom = 1, Right = 2, Top = 3 };

enum class BcType { NeumannTraction, DirichletZero, PeriodicX };

struct GeometrySpec {
    double x0 = 0.0;
    double x1 = 1.0;
    std::vector<double> y_levels;       // strip boundaries, ascending, size n_strips()+1
    std::vector<StripRole> roles;       // one per strip, bottom to top
    std::array<BcType, 4> bc{BcType::NeumannTraction, BcType::NeumannTraction,
                             BcType::NeumannTraction, BcType::NeumannTraction};

    int n_strips() const { return static_cast<int>(roles.size()); }
    int n_interfaces() const { return n_strips() - 1; }
    bool periodic_x() const { return bc[0] == BcType::PeriodicX; }
    double width() const { return x1 - x0; }
    BcType side_bc(Side s) const { return bc[static_cast<int>(s)]; }

    // y coordinate of interface `tag` (tag counts internal levels from the bottom)
    double interface_y(int tag) const { return y_levels[tag + 1]; }

    // Throws std::invalid_argument on an inconsistent specification.
    void validate() const;
};

// Standard strip layouts used by the built-in cases.
GeometrySpec channel_geometry(double length, bool periodic);        // solid 1/4, fluid 1/2, solid 1/4
GeometrySpec traction_channel_geometry();                           // unit square, interfaces at 0.15/0.85
GeometrySpec heat_wave_geometry();                                  // heat below y=3/4, wave above, Dirichlet sides

} // namespace fsifem
