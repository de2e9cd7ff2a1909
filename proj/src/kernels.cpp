#include "folitor/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "folitor/parallel.hpp"

namespace folitor::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phase table W[g * side + (n + cutoff)] = e^{i n x_g}, x_g = 2 pi g / G.
std::vector<Complex> phase_table(int grid_points, int cutoff) {
    const int side = 2 * cutoff + 1;
    std::vector<Complex> w(static_cast<std::size_t>(grid_points) * side);
    for (int g = 0; g < grid_points; ++g) {
        const double x = kTwoPi * g / grid_points;
        for (int n = -cutoff; n <= cutoff; ++n)
            w[static_cast<std::size_t>(g) * side + (n + cutoff)] =
                std::polar(1.0, n * x);
    }
    return w;
}

// One separable stage: contract the last axis of `in` (length `len_in`,
// leading extent `lead`) against `mat` (rows x len_in), producing leading
// extent `lead` x rows with the contracted axis replaced.
std::vector<Complex> contract_last(const std::vector<Complex>& in, std::size_t lead,
                                   const std::vector<Complex>& mat, int rows, int len_in) {
    std::vector<Complex> out(lead * rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long b = 0; b < static_cast<long long>(lead); ++b) {
        const Complex* src = in.data() + static_cast<std::size_t>(b) * len_in;
        Complex* dst = out.data() + static_cast<std::size_t>(b) * rows;
        for (int r = 0; r < rows; ++r) {
            const Complex* mrow = mat.data() + static_cast<std::size_t>(r) * len_in;
            Complex acc{0.0, 0.0};
            for (int j = 0; j < len_in; ++j) acc += mrow[j] * src[j];
            dst[r] = acc;
        }
    }
    return out;
}

// Cyclic transpose of the leading axis to the back: in[a0][rest] -> out[rest][a0].
std::vector<Complex> rotate_axis(const std::vector<Complex>& in, std::size_t first,
                                 std::size_t rest) {
    std::vector<Complex> out(in.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long a = 0; a < static_cast<long long>(first); ++a)
        for (std::size_t b = 0; b < rest; ++b)
            out[b * first + a] = in[a * rest + b];
    return out;
}

}  // namespace

// Both transforms walk the axes with the same two-step pattern: contract the
// last axis, then rotate it to the front.  After `axes` rounds the layout is
// back in natural order with every axis transformed.
std::vector<Complex> synthesize(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                int grid_points) {
    const int side = 2 * cutoff + 1;
    const int axes = axes_of(dim);
    const std::vector<Complex> w = phase_table(grid_points, cutoff);

    std::vector<Complex> cur = coeff;
    for (int stage = 0; stage < axes; ++stage) {
        const std::size_t lead = cur.size() / side;
        cur = contract_last(cur, lead, w, grid_points, side);
        cur = rotate_axis(cur, lead, grid_points);
    }
    return cur;
}

std::vector<Complex> analyze(Torus dim, int grid_points, const std::vector<Complex>& values,
                             int band) {
    const int side = 2 * band + 1;
    const int g = grid_points;
    const int axes = axes_of(dim);
    // Analysis matrix: rows are modes, columns grid points, scaled by 1/G.
    std::vector<Complex> w(static_cast<std::size_t>(side) * g);
    for (int n = -band; n <= band; ++n) {
        for (int gp = 0; gp < g; ++gp)
            w[static_cast<std::size_t>(n + band) * g + gp] =
                std::polar(1.0 / g, -n * (kTwoPi * gp / g));
    }

    std::vector<Complex> cur = values;
    for (int stage = 0; stage < axes; ++stage) {
        std::size_t lead = cur.size() / g;
        cur = contract_last(cur, lead, w, side, g);
        cur = rotate_axis(cur, lead, side);
    }
    return cur;
}

std::vector<Complex> hadamard(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out(a.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i) out[i] = a[i] * b[i];
    return out;
}

namespace {

constexpr std::size_t kSlab = 4096;

template <typename T, typename F>
T slab_reduce(std::size_t n, T init, F&& per_slab) {
    const std::size_t slabs = (n + kSlab - 1) / kSlab;
    std::vector<T> partial(slabs, init);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long s = 0; s < static_cast<long long>(slabs); ++s) {
        const std::size_t lo = static_cast<std::size_t>(s) * kSlab;
        const std::size_t hi = std::min(n, lo + kSlab);
        partial[s] = per_slab(lo, hi);
    }
    T acc = init;
    for (const T& v : partial) acc += v;
    return acc;
}

}  // namespace

double weighted_sumsq(const std::vector<Complex>& coeff, const std::vector<double>& weight) {
    return slab_reduce(coeff.size(), 0.0, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += weight[i] * std::norm(coeff[i]);
        return s;
    });
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    return slab_reduce(a.size(), Complex{0.0, 0.0}, [&](std::size_t lo, std::size_t hi) {
        Complex s{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * std::conj(b[i]);
        return s;
    });
}

Extrema modulus_extrema(const std::vector<Complex>& values) {
    const std::size_t n = values.size();
    const std::size_t slabs = (n + kSlab - 1) / kSlab;
    std::vector<Extrema> partial(slabs);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long s = 0; s < static_cast<long long>(slabs); ++s) {
        const std::size_t lo = static_cast<std::size_t>(s) * kSlab;
        const std::size_t hi = std::min(n, lo + kSlab);
        Extrema e;
        e.max_value = -1.0;
        e.min_value = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = std::abs(values[i]);
            if (v > e.max_value) { e.max_value = v; e.argmax = i; }
            if (v < e.min_value) { e.min_value = v; e.argmin = i; }
        }
        partial[s] = e;
    }
    Extrema out;
    out.max_value = -1.0;
    out.min_value = std::numeric_limits<double>::infinity();
    for (const Extrema& e : partial) {
        if (e.max_value > out.max_value) { out.max_value = e.max_value; out.argmax = e.argmax; }
        if (e.min_value < out.min_value) { out.min_value = e.min_value; out.argmin = e.argmin; }
    }
    if (out.max_value < 0.0) out = Extrema{};
    return out;
}

Complex evaluate_point(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                       const double* x) {
    const int side = 2 * cutoff + 1;
    const int axes = axes_of(dim);
    // Per-axis phasor arrays e^{i n x_axis}.
    std::vector<Complex> ph(static_cast<std::size_t>(axes) * side);
    for (int a = 0; a < axes; ++a)
        for (int n = -cutoff; n <= cutoff; ++n)
            ph[static_cast<std::size_t>(a) * side + (n + cutoff)] = std::polar(1.0, n * x[a]);

    const Complex* p1 = ph.data();
    const Complex* p2 = ph.data() + side;
    Complex total{0.0, 0.0};
    if (axes == 2) {
        for (int i = 0; i < side; ++i) {
            Complex row{0.0, 0.0};
            const Complex* c = coeff.data() + static_cast<std::size_t>(i) * side;
            for (int j = 0; j < side; ++j) row += c[j] * p2[j];
            total += p1[i] * row;
        }
        return total;
    }
    const Complex* p3 = ph.data() + 2 * side;
    for (int i = 0; i < side; ++i) {
        Complex plane{0.0, 0.0};
        for (int j = 0; j < side; ++j) {
            Complex row{0.0, 0.0};
            const Complex* c =
                coeff.data() + (static_cast<std::size_t>(i) * side + j) * side;
            for (int l = 0; l < side; ++l) row += c[l] * p3[l];
            plane += p2[j] * row;
        }
        total += p1[i] * plane;
    }
    return total;
}

std::vector<Complex> evaluate_points(Torus dim, int cutoff, const std::vector<Complex>& coeff,
                                     const std::vector<double>& xs) {
    const int axes = axes_of(dim);
    const std::size_t n = xs.size() / axes;
    std::vector<Complex> out(n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[i] = evaluate_point(dim, cutoff, coeff, xs.data() + i * axes);
    return out;
}

}  // namespace folitor::kernels
