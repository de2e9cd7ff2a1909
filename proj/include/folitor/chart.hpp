#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "folitor/foliation.hpp"
#include "folitor/metric.hpp"

namespace folitor {

// A square patch on the universal cover of one leaf, in the leaf coordinate
// zeta (relative to the base point); x3 follows the leaf: the lifted point is
// base + (Re zeta, Im zeta, a1 Re zeta + a2 Im zeta).
struct LeafPatch {
    std::array<double, 3> base{0.0, 0.0, 0.0};
    double radius = 1.0;  // zeta ranges over [-radius, radius]^2
    int grid = 17;        // points per side
};

struct ChartSample {
    int grid = 0;
    double radius = 0.0;
    std::vector<Complex> zeta;         // row-major grid of leaf coordinates
    std::vector<Complex> psi;          // developed chart values, psi(0) = 0
    std::vector<double> dilatation;    // K at the grid points
    double max_dilatation = 0.0;
    std::vector<double> jacobian;      // |f|^2 (1 - |mu|^2) at the grid points
    double min_jacobian = 0.0;
    double derivative_error = 0.0;     // FD d(psi) vs f (1, mu), subsampled
};

struct DevelopOptions {
    int gauss_order = 8;               // fixed nodes per segment
    double max_residual = 1e-3;        // refuse above this closedness residual
    int derivative_samples = 9;        // per axis, for the FD consistency check
    double fd_step = 1e-3;
};

// Path-integrates omega = f (dz + mu dzbar) from the base point along the
// straight segment to every grid node (Gauss-Legendre per segment, segment
// length <= 2 pi / (4 M)).
ChartSample develop(const FoliationParams& params, const LeafForm& leafform,
                    const LeafPatch& patch, const DevelopOptions& options = {});

// Straight-segment integral of omega between two leaf coordinates.
Complex develop_segment(const FoliationParams& params, const LeafForm& leafform,
                        const LeafPatch& patch, Complex from, Complex to,
                        int gauss_order = 8);

// max over random axis-aligned rectangles of |loop integral| / perimeter.
double loop_residual(const FoliationParams& params, const LeafForm& leafform,
                     const LeafPatch& patch, int n_loops, std::uint64_t seed);

struct DilatationField {
    std::vector<double> values;
    double max_value = 0.0;
};

// K = (1 + |mu|) / (1 - |mu|) over the patch grid; |mu| >= 1 is an error.
DilatationField dilatation_estimate(const FoliationParams& params, const LeafForm& leafform,
                                    const LeafPatch& patch);

}  // namespace folitor
