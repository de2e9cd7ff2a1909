#pragma once

#include <cstddef>
#include <vector>

#include "folitor/types.hpp"

namespace folitor::kernels {

// OpenMP-parallel kernels behind the field operations.  All of them are
// deterministic independently of the thread count: parallel loops write
// disjoint output slots, and reductions accumulate fixed-size slab partials
// that are merged serially in index order.  Serial counterparts live in
// folitor::ref and the tests compare the two.

// Values of the truncated series on the uniform tensor grid with
// `grid_points` points per axis (x_g = 2*pi*g/G), fastest axis last.
// Separable: one dense transform per axis.
std::vector<Complex> synthesize(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                int grid_points);

// Inverse transform: Fourier coefficients on the box max|N_i| <= band from
// grid values; exact (up to roundoff) when 2*band + 1 <= grid_points.
std::vector<Complex> analyze(Torus dim, int grid_points, const std::vector<Complex>& values,
                             int band);

// Pointwise product of two grid-value arrays.
std::vector<Complex> hadamard(const std::vector<Complex>& a, const std::vector<Complex>& b);

// sum_i w_i |c_i|^2 with slab-deterministic merging.
double weighted_sumsq(const std::vector<Complex>& coeff, const std::vector<double>& weight);

// <a, b> = sum_i a_i conj(b_i), slab-deterministic.
Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct Extrema {
    double max_value = 0.0;
    double min_value = 0.0;
    std::size_t argmax = 0;
    std::size_t argmin = 0;
};

// Modulus extrema of a value array; ties resolve to the lowest index.
Extrema modulus_extrema(const std::vector<Complex>& values);

// Value of the series at one arbitrary point, axis-separably accumulated.
Complex evaluate_point(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                       const double* x);

// Batch point evaluation, parallel over points.
std::vector<Complex> evaluate_points(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                     const std::vector<double>& xs /* dim-strided */);

}  // namespace folitor::kernels
