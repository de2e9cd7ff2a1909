#include "folitor/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "folitor/homotopy.hpp"
#include "folitor/parallel.hpp"

namespace folitor {

namespace {

// Gauss-Legendre nodes/weights on [0, 1], order 8.
struct Gauss8 {
    static constexpr int n = 8;
    double node[8];
    double weight[8];
    Gauss8() {
        // Abscissae/weights on [-1, 1], mapped to [0, 1].
        const double x[4] = {0.1834346424956498, 0.5255324099163290,
                             0.7966664774136267, 0.9602898564975363};
        const double w[4] = {0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
        for (int i = 0; i < 4; ++i) {
            node[2 * i] = 0.5 * (1.0 - x[i]);
            node[2 * i + 1] = 0.5 * (1.0 + x[i]);
            weight[2 * i] = 0.5 * w[i];
            weight[2 * i + 1] = 0.5 * w[i];
        }
    }
};

const Gauss8 kGauss;

std::array<double, 3> leaf_point(const FoliationParams& params, const LeafPatch& patch,
                                 Complex zeta) {
    return {patch.base[0] + zeta.real(), patch.base[1] + zeta.imag(),
            patch.base[2] + params.a1.value * zeta.real() + params.a2.value * zeta.imag()};
}

// integrand of the development along a straight zeta-segment
Complex omega_pull(const FoliationParams& params, const LeafForm& lf, const LeafPatch& patch,
                   Complex zeta, Complex direction) {
    const auto x = leaf_point(params, patch, zeta);
    const Complex fv = evaluate(lf.f, x.data());
    const Complex mv = evaluate(lf.mu, x.data());
    return fv * (direction + mv * std::conj(direction));
}

}  // namespace

Complex develop_segment(const FoliationParams& params, const LeafForm& lf,
                        const LeafPatch& patch, Complex from, Complex to, int gauss_order) {
    if (gauss_order != 8) throw ValidationError("only Gauss order 8 is wired in");
    const Complex delta = to - from;
    const double len = std::abs(delta);
    if (len == 0.0) return {0.0, 0.0};
    const double max_seg = 2.0 * std::numbers::pi / (4.0 * std::max(1, lf.f.cutoff()));
    const int segments = std::max(1, static_cast<int>(std::ceil(len / max_seg)));
    Complex acc{0.0, 0.0};
    for (int s = 0; s < segments; ++s) {
        const Complex a = from + delta * (static_cast<double>(s) / segments);
        const Complex step = delta / static_cast<double>(segments);
        for (int q = 0; q < Gauss8::n; ++q) {
            const Complex zq = a + step * kGauss.node[q];
            acc += kGauss.weight[q] * omega_pull(params, lf, patch, zq, step);
        }
    }
    return acc;
}

ChartSample develop(const FoliationParams& params, const LeafForm& lf, const LeafPatch& patch,
                    const DevelopOptions& options) {
    const double residual = closedness_residual(params, lf.mu, lf.f);
    if (residual > options.max_residual) {
        std::ostringstream msg;
        msg << "path integral ill-defined: closedness residual " << residual
            << " above " << options.max_residual;
        throw ValidationError(msg.str());
    }

    ChartSample out;
    out.grid = patch.grid;
    out.radius = patch.radius;
    const int n = patch.grid;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    out.zeta.resize(total);
    out.psi.resize(total);
    out.dilatation.resize(total);
    out.jacobian.resize(total);

    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double xi = n == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * c / (n - 1);
            const double eta = n == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * r / (n - 1);
            out.zeta[static_cast<std::size_t>(r) * n + c] = Complex{xi, eta};
        }

#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
        const Complex z = out.zeta[i];
        out.psi[i] = develop_segment(params, lf, patch, Complex{0.0, 0.0}, z,
                                     options.gauss_order);
        const auto x = leaf_point(params, patch, z);
        const Complex fv = evaluate(lf.f, x.data());
        const Complex mv = evaluate(lf.mu, x.data());
        const double am = std::abs(mv);
        out.dilatation[i] = am < 1.0 ? (1.0 + am) / (1.0 - am)
                                     : std::numeric_limits<double>::infinity();
        out.jacobian[i] = std::norm(fv) * (1.0 - am * am);
    }
    for (std::size_t i = 0; i < total; ++i)
        if (!(out.dilatation[i] < std::numeric_limits<double>::infinity()))
            throw ValidationError("|mu| >= 1 on the patch: not a Beltrami coefficient");
    out.max_dilatation = *std::max_element(out.dilatation.begin(), out.dilatation.end());
    out.min_jacobian = *std::min_element(out.jacobian.begin(), out.jacobian.end());

    // FD consistency of the chart derivative against f (1, mu) on a subsample.
    const int ds = std::max(2, options.derivative_samples);
    const double h = options.fd_step;
    double derr = 0.0;
    for (int r = 0; r < ds; ++r)
        for (int c = 0; c < ds; ++c) {
            const double xi = -patch.radius * 0.9 + 1.8 * patch.radius * c / (ds - 1);
            const double eta = -patch.radius * 0.9 + 1.8 * patch.radius * r / (ds - 1);
            const Complex z{xi, eta};
            const auto x = leaf_point(params, patch, z);
            const Complex fv = evaluate(lf.f, x.data());
            const Complex mv = evaluate(lf.mu, x.data());
            const Complex dxi =
                (develop_segment(params, lf, patch, {0, 0}, z + Complex{h, 0.0}) -
                 develop_segment(params, lf, patch, {0, 0}, z - Complex{h, 0.0})) /
                (2.0 * h);
            const Complex deta =
                (develop_segment(params, lf, patch, {0, 0}, z + Complex{0.0, h}) -
                 develop_segment(params, lf, patch, {0, 0}, z - Complex{0.0, h})) /
                (2.0 * h);
            derr = std::max(derr, std::abs(dxi - fv * (1.0 + mv)));
            derr = std::max(derr, std::abs(deta - fv * Complex{0.0, 1.0} * (1.0 - mv)));
        }
    out.derivative_error = derr;
    return out;
}

double loop_residual(const FoliationParams& params, const LeafForm& lf, const LeafPatch& patch,
                     int n_loops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        const std::uint64_t bits = rng() >> 11;
        return lo + (hi - lo) * (static_cast<double>(bits) * 0x1.0p-53);
    };
    double worst = 0.0;
    for (int l = 0; l < n_loops; ++l) {
        const double cx = uniform(-patch.radius * 0.5, patch.radius * 0.5);
        const double cy = uniform(-patch.radius * 0.5, patch.radius * 0.5);
        const double w = uniform(patch.radius * 0.05, patch.radius * 0.45);
        const double hgt = uniform(patch.radius * 0.05, patch.radius * 0.45);
        const Complex c00{cx - w, cy - hgt}, c10{cx + w, cy - hgt};
        const Complex c11{cx + w, cy + hgt}, c01{cx - w, cy + hgt};
        const Complex loop = develop_segment(params, lf, patch, c00, c10) +
                             develop_segment(params, lf, patch, c10, c11) +
                             develop_segment(params, lf, patch, c11, c01) +
                             develop_segment(params, lf, patch, c01, c00);
        const double perimeter = 4.0 * (w + hgt);
        worst = std::max(worst, std::abs(loop) / perimeter);
    }
    return worst;
}

DilatationField dilatation_estimate(const FoliationParams& p, const LeafForm& lf,
                                    const LeafPatch& patch) {
    DilatationField out;
    const int n = patch.grid;
    out.values.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double xi = n == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * c / (n - 1);
            const double eta = n == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * r / (n - 1);
            const auto x = leaf_point(p, patch, Complex{xi, eta});
            const double am = std::abs(evaluate(lf.mu, x.data()));
            if (am >= 1.0)
                throw ValidationError("|mu| >= 1 at a patch sample: not a Beltrami coefficient");
            out.values[static_cast<std::size_t>(r) * n + c] = (1.0 + am) / (1.0 - am);
        }
    out.max_value = *std::max_element(out.values.begin(), out.values.end());
    return out;
}

}  // namespace folitor
