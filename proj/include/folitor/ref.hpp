#pragma once

#include <vector>

#include "folitor/types.hpp"

namespace folitor::ref {

// Plain serial reference implementations of the hot kernels.  Deliberately
// naive (direct convolution, lexicographic point sums); the tests hold the
// parallel kernels against these, and the bench target compares timings.

// Value at a point by literal lexicographic summation of c_N e^{i(N,x)}.
Complex evaluate_point(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                       const double* x);

// Grid values, one direct point sum per grid node.
std::vector<Complex> synthesize(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                int grid_points);

// Direct convolution of two cutoff-M fields onto the band max|N_i| <= 2M.
std::vector<Complex> convolve_full(Torus dim, int cutoff, const std::vector<Complex>& a,
                                   const std::vector<Complex>& b);

double weighted_sumsq(const std::vector<Complex>& coeff, const std::vector<double>& weight);

}  // namespace folitor::ref
