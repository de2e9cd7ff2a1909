#include "folitor/metric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "folitor/kernels.hpp"
#include "folitor/parallel.hpp"

namespace folitor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ClosureSolution build_h(const FoliationParams& params, const LeafForm& leafform,
                        const BuildOptions& options) {
    const FourierField& f = leafform.f;
    if (f.dim() != Torus::T3) throw ValidationError("closure construction lives on T^3");

    const FourierField df3 = partial_derivative(f, 3);
    ClosureSolution out;
    out.h = apply_dz_inverse(params, df3);

    // amplification |k / lambda_N| over the modes the derivative drives
    for (std::size_t i = 0; i < df3.size(); ++i) {
        if (df3.coefficients()[i] == Complex{0.0, 0.0}) continue;
        const ModeIndex n = df3.mode_at(i);
        if (n.k == 0) continue;
        const double lam = std::abs(lambda_of(params, n));
        if (lam > 0.0)
            out.max_amplification = std::max(out.max_amplification, std::abs(n.k) / lam);
    }
    if (out.max_amplification > options.amplification_warn)
        out.warnings.push_back("small denominators dominate: amplification " +
                               std::to_string(out.max_amplification));

    FourierField r1 = df3;
    r1 -= apply_dz(params, out.h);
    out.residual1 = norm(r1, NormSpec::sobolev(0));

    // second closure equation measured on the doubled band (spill included)
    FourierField muf = multiply_full(leafform.mu, f);
    FourierField r2 = partial_derivative(muf, 3);
    r2 -= apply_dzbar(params, out.h.with_cutoff(muf.cutoff()));
    out.residual2 = norm(r2, NormSpec::sobolev(0));
    return out;
}

ClosedFormAssembly assemble_closed_form(const FoliationParams& params,
                                        const LeafForm& leafform,
                                        const ClosureSolution& closure) {
    const int band = 2 * leafform.f.cutoff();
    const FourierField f = leafform.f.with_cutoff(band);
    const FourierField muf = multiply_full(leafform.mu, leafform.f);
    const FourierField h = closure.h.with_cutoff(band);
    const double a1 = params.a1.value, a2 = params.a2.value;

    // dz = dx1 + i dx2, dzbar = dx1 - i dx2, dl = a1 dx1 + a2 dx2 - dx3:
    // Omega = (f + mu f - a1 h) dx1 + (i f - i mu f - a2 h) dx2 + h dx3.
    ClosedFormAssembly out;
    out.w1 = f;
    out.w1 += muf;
    { FourierField t = h; t *= Complex{a1, 0.0}; out.w1 -= t; }
    out.w2 = f;
    out.w2 -= muf;
    out.w2 *= Complex{0.0, 1.0};
    { FourierField t = h; t *= Complex{a2, 0.0}; out.w2 -= t; }
    out.w3 = h;

    auto curl_norm = [&](const FourierField& wa, int axis_a, const FourierField& wb,
                         int axis_b) {
        FourierField c = partial_derivative(wb, axis_a);
        c -= partial_derivative(wa, axis_b);
        return norm(c, NormSpec::sobolev(0));
    };
    out.dform_residual = std::max({curl_norm(out.w1, 1, out.w2, 2),
                                   curl_norm(out.w1, 1, out.w3, 3),
                                   curl_norm(out.w2, 2, out.w3, 3)});
    return out;
}

MetricReport euclidean_metric(const FoliationParams& params, const ClosedFormAssembly& omega,
                              int grid_points) {
    MetricReport rep;
    rep.grid_points = grid_points;
    const double l[3] = {params.a1.value, params.a2.value, -1.0};

    const FourierField* w[3] = {&omega.w1, &omega.w2, &omega.w3};
    // Gram fields: Re(w_i conj w_j) + l_i l_j
    int slot = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j, ++slot) {
            FourierField prod = multiply_full(*w[i], w[j]->conjugated());
            FourierField re = prod;
            re += prod.conjugated();
            re *= Complex{0.5, 0.0};
            re.set(ModeIndex{}, re.at(ModeIndex{}) + Complex{l[i] * l[j], 0.0});
            rep.gram[slot] = std::move(re);
        }

    // Pointwise positivity sampled from the component fields directly.
    std::vector<std::vector<Complex>> vals(3);
    for (int i = 0; i < 3; ++i) vals[i] = synthesize(*w[i], grid_points);

    const std::size_t total = vals[0].size();
    double min_eig = std::numeric_limits<double>::infinity();
    std::size_t min_idx = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Eigen::Matrix3d g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g(i, j) = (vals[i][idx] * std::conj(vals[j][idx])).real() + l[i] * l[j];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g, Eigen::EigenvaluesOnly);
        const double e = es.eigenvalues()(0);
        if (e < min_eig) {
            min_eig = e;
            min_idx = idx;
        }
    }
    rep.min_eigenvalue = min_eig;
    std::size_t rem = min_idx;
    for (int ax = 2; ax >= 0; --ax) {
        rep.min_location[ax] = kTwoPi * static_cast<double>(rem % grid_points) / grid_points;
        rem /= grid_points;
    }
    rep.positive_definite = min_eig > 0.0;
    if (!rep.positive_definite) {
        std::ostringstream msg;
        msg << "metric not positive at x = (" << rep.min_location[0] << ", "
            << rep.min_location[1] << ", " << rep.min_location[2]
            << "): min eigenvalue " << min_eig;
        throw NumericalError(msg.str());
    }
    return rep;
}

SparseField CounterexampleFamily::field() const {
    SparseField f = SparseField::constant(Complex{1.0, 0.0});
    for (const FamilyMode& fm : modes) {
        if (fm.dropped) continue;
        f.add(Mode64{fm.mode.p, fm.mode.m, fm.mode.k}, t * fm.unit_coeff);
    }
    return f;
}

SparseField CounterexampleFamily::derivative() const {
    SparseField g;
    for (const FamilyMode& fm : modes) {
        if (fm.dropped) continue;
        g.add(Mode64{fm.mode.p, fm.mode.m, fm.mode.k}, fm.unit_coeff);
    }
    return g;
}

CounterexampleFamily counterexample_family(const FoliationParams& params,
                                           const std::vector<LiouvilleMode>& modes, double t) {
    if (modes.empty()) throw ValidationError("counterexample family needs modes");
    if (std::abs(t) > 1.0) throw ValidationError("family parameter must satisfy |t| <= 1");
    CounterexampleFamily fam;
    fam.t = t;
    double coeff_l1 = 0.0;
    for (const LiouvilleMode& lm : modes) {
        if (lm.mode.k == 0) throw ValidationError("family mode with k = 0");
        FamilyMode fm;
        fm.mode = lm.mode;
        if (lm.lambda_exact_known) {
            const Rational re = lm.lambda_re / lm.mode.k;
            const Rational im = lm.lambda_im / lm.mode.k;
            fm.unit_coeff = {to_double(re), to_double(im)};
            fm.lambda = {to_double(lm.lambda_re), to_double(lm.lambda_im)};
        } else {
            fm.lambda = lambda_of(params, lm.mode);
            fm.unit_coeff = fm.lambda / Complex{static_cast<double>(lm.mode.k), 0.0};
        }
        if (std::abs(fm.unit_coeff) < 1e-300) {
            fm.dropped = true;
            fam.warnings.push_back("mode coefficient underflows; mode dropped");
        } else {
            coeff_l1 += std::abs(fm.unit_coeff);
        }
        fam.modes.push_back(fm);
    }
    fam.min_abs_lower_bound = 1.0 - std::abs(t) * coeff_l1;
    for (const double s : {1.0, 2.0, 4.0, 6.0, 8.0}) {
        double sum = 0.0;
        for (const FamilyMode& fm : fam.modes)
            if (!fm.dropped)
                sum += std::pow(static_cast<double>(l1_norm(fm.mode)), s) *
                       std::abs(t * fm.unit_coeff);
        fam.smoothness_certificate.emplace_back(s, sum);
    }
    return fam;
}

namespace {

ObstructionReport obstruction_from(const std::vector<std::pair<Complex, Complex>>& coeff_lambda,
                                   const std::vector<int>& ks, double t) {
    ObstructionReport rep;
    rep.expected_magnitude = std::abs(t);
    double mass = 0.0;
    for (std::size_t j = 0; j < coeff_lambda.size(); ++j) {
        const auto& [c, lam] = coeff_lambda[j];
        // first closure equation at mode N_j: lambda h = i k c  =>  h = i k c / lambda
        const Complex h = Complex{0.0, static_cast<double>(ks[j])} * c / lam;
        rep.forced_magnitudes.push_back(std::abs(h));
        mass += std::norm(h);
        rep.partial_l2_mass.push_back(mass);
        rep.max_deviation = std::max(rep.max_deviation,
                                     std::abs(std::abs(h) - rep.expected_magnitude));
    }
    if (t == 0.0) {
        rep.verdict = "unobstructed (trivial)";
    } else if (rep.max_deviation <= 1e-10 * std::max(1.0, rep.expected_magnitude)) {
        rep.verdict = "obstructed";
    } else {
        rep.verdict = "unobstructed";
    }
    return rep;
}

}  // namespace

ObstructionReport obstruction_detect(const FoliationParams& params,
                                     const CounterexampleFamily& family) {
    (void)params;
    std::vector<std::pair<Complex, Complex>> cl;
    std::vector<int> ks;
    for (const FamilyMode& fm : family.modes) {
        if (fm.dropped) continue;
        cl.emplace_back(family.t * fm.unit_coeff, fm.lambda);
        ks.push_back(fm.mode.k);
    }
    return obstruction_from(cl, ks, family.t);
}

ObstructionReport obstruction_detect(const FoliationParams& params, const FourierField& f,
                                     const std::vector<ModeIndex>& modes, double t) {
    std::vector<std::pair<Complex, Complex>> cl;
    std::vector<int> ks;
    for (const ModeIndex& n : modes) {
        if (n.k == 0) throw ValidationError("obstruction modes need k != 0");
        cl.emplace_back(f.at(n), lambda_of(params, n));
        ks.push_back(n.k);
    }
    return obstruction_from(cl, ks, t);
}

Lemma3Result lemma3_solve_nu(const FoliationParams& params, const CounterexampleFamily& family,
                             int steps) {
    if (!(family.min_abs_lower_bound > 0.0))
        throw ValidationError("family not bounded away from zero");
    const SparseField fdot = family.derivative();

    const auto u_inverse = [&](Mode64 n) -> Complex {
        const Complex lam = lambda_wide(params, n);
        if (lam == Complex{0.0, 0.0}) return {1.0, 0.0};
        return -std::conj(lam) / lam;
    };

    // d(nu)/dt = (U^{-1} fdot - nu fdot) / f,  f(., s) = 1 + s * fdot
    const auto rhs = [&](double s, const SparseField& nu) {
        SparseField f = fdot;
        f *= Complex{s, 0.0};
        f.add(Mode64{}, Complex{1.0, 0.0});
        SparseField inv_f = SparseField::reciprocal(f, 1e-16, 64);
        SparseField num = fdot.mapped(u_inverse);
        num -= SparseField::multiply(nu, fdot, 1e-300);
        return SparseField::multiply(num, inv_f, 1e-300);
    };

    Lemma3Result out;
    out.steps = steps;
    SparseField nu;
    const double h = family.t / steps;
    double s = 0.0;
    for (int i = 0; i < steps; ++i) {
        SparseField k1 = rhs(s, nu);
        SparseField y2 = k1; y2 *= Complex{h / 2.0, 0.0}; y2 += nu;
        SparseField k2 = rhs(s + h / 2.0, y2);
        SparseField y3 = k2; y3 *= Complex{h / 2.0, 0.0}; y3 += nu;
        SparseField k3 = rhs(s + h / 2.0, y3);
        SparseField y4 = k3; y4 *= Complex{h, 0.0}; y4 += nu;
        SparseField k4 = rhs(s + h, y4);
        k2 *= Complex{2.0, 0.0};
        k3 *= Complex{2.0, 0.0};
        SparseField sum = k1;
        sum += k2;
        sum += k3;
        sum += k4;
        sum *= Complex{h / 6.0, 0.0};
        nu += sum;
        s += h;
    }
    out.nu = nu;
    out.sup_l1_bound = nu.coefficient_l1();
    if (out.sup_l1_bound >= 1.0)
        throw NumericalError("t too large for an almost-complex structure: sup|nu| bound >= 1");
    out.eq_residual = sparse_closedness_residual(params, nu, family.field());
    return out;
}

}  // namespace folitor
