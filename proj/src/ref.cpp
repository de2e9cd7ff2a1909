#include "folitor/ref.hpp"

#include <cmath>
#include <numbers>

namespace folitor::ref {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Complex evaluate_point(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                       const double* x) {
    const int side = 2 * cutoff + 1;
    Complex acc{0.0, 0.0};
    if (dim == Torus::T2) {
        std::size_t idx = 0;
        for (int p = -cutoff; p <= cutoff; ++p)
            for (int m = -cutoff; m <= cutoff; ++m, ++idx)
                acc += coeff[idx] * std::polar(1.0, p * x[0] + m * x[1]);
        return acc;
    }
    std::size_t idx = 0;
    for (int p = -cutoff; p <= cutoff; ++p)
        for (int m = -cutoff; m <= cutoff; ++m)
            for (int k = -cutoff; k <= cutoff; ++k, ++idx)
                acc += coeff[idx] * std::polar(1.0, p * x[0] + m * x[1] + k * x[2]);
    (void)side;
    return acc;
}

std::vector<Complex> synthesize(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                int grid_points) {
    const int axes = axes_of(dim);
    std::vector<Complex> out;
    if (axes == 2) {
        out.resize(static_cast<std::size_t>(grid_points) * grid_points);
        std::size_t o = 0;
        for (int g1 = 0; g1 < grid_points; ++g1)
            for (int g2 = 0; g2 < grid_points; ++g2, ++o) {
                double x[2] = {kTwoPi * g1 / grid_points, kTwoPi * g2 / grid_points};
                out[o] = evaluate_point(dim, cutoff, coeff, x);
            }
        return out;
    }
    out.resize(static_cast<std::size_t>(grid_points) * grid_points * grid_points);
    std::size_t o = 0;
    for (int g1 = 0; g1 < grid_points; ++g1)
        for (int g2 = 0; g2 < grid_points; ++g2)
            for (int g3 = 0; g3 < grid_points; ++g3, ++o) {
                double x[3] = {kTwoPi * g1 / grid_points, kTwoPi * g2 / grid_points,
                               kTwoPi * g3 / grid_points};
                out[o] = evaluate_point(dim, cutoff, coeff, x);
            }
    return out;
}

std::vector<Complex> convolve_full(Torus dim, int cutoff, const std::vector<Complex>& a,
                                   const std::vector<Complex>& b) {
    const int side = 2 * cutoff + 1;
    const int oside = 4 * cutoff + 1;
    if (dim == Torus::T2) {
        std::vector<Complex> out(static_cast<std::size_t>(oside) * oside, Complex{0, 0});
        for (int p1 = -cutoff; p1 <= cutoff; ++p1)
            for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
                const Complex ca = a[(p1 + cutoff) * static_cast<std::size_t>(side) + (m1 + cutoff)];
                if (ca == Complex{0, 0}) continue;
                for (int p2 = -cutoff; p2 <= cutoff; ++p2)
                    for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
                        const Complex cb =
                            b[(p2 + cutoff) * static_cast<std::size_t>(side) + (m2 + cutoff)];
                        out[(p1 + p2 + 2 * cutoff) * static_cast<std::size_t>(oside) +
                            (m1 + m2 + 2 * cutoff)] += ca * cb;
                    }
            }
        return out;
    }
    std::vector<Complex> out(
        static_cast<std::size_t>(oside) * oside * oside, Complex{0, 0});
    for (int p1 = -cutoff; p1 <= cutoff; ++p1)
        for (int m1 = -cutoff; m1 <= cutoff; ++m1)
            for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
                const Complex ca =
                    a[((p1 + cutoff) * static_cast<std::size_t>(side) + (m1 + cutoff)) * side +
                      (k1 + cutoff)];
                if (ca == Complex{0, 0}) continue;
                for (int p2 = -cutoff; p2 <= cutoff; ++p2)
                    for (int m2 = -cutoff; m2 <= cutoff; ++m2)
                        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
                            const Complex cb =
                                b[((p2 + cutoff) * static_cast<std::size_t>(side) +
                                   (m2 + cutoff)) * side + (k2 + cutoff)];
                            out[((p1 + p2 + 2 * cutoff) * static_cast<std::size_t>(oside) +
                                 (m1 + m2 + 2 * cutoff)) * oside + (k1 + k2 + 2 * cutoff)] +=
                                ca * cb;
                        }
            }
    return out;
}

double weighted_sumsq(const std::vector<Complex>& coeff, const std::vector<double>& weight) {
    double s = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i) s += weight[i] * std::norm(coeff[i]);
    return s;
}

}  // namespace folitor::ref
