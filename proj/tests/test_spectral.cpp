#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "folitor/field.hpp"
#include "folitor/json_io.hpp"
#include "folitor/kernels.hpp"
#include "folitor/ref.hpp"
#include "test_helpers.hpp"

using namespace folitor;
using folitor::testing::max_coeff_diff;
using folitor::testing::random_field;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("multiply") {
    TEST_CASE("constant one is the identity") {
        std::mt19937_64 rng(1);
        FourierField b = random_field(Torus::T3, 3, rng);
        FourierField one = FourierField::constant(Torus::T3, 3, {1.0, 0.0});
        double spill = -1.0;
        FourierField p = multiply(one, b, &spill);
        CHECK(max_coeff_diff(p, b) == 0.0);
        CHECK(spill == 0.0);
    }

    TEST_CASE("exponential law on single modes") {
        FourierField a = FourierField::mode(Torus::T3, 3, {1, 0, 0}, {1.0, 0.0});
        FourierField b = FourierField::mode(Torus::T3, 3, {0, 1, 0}, {1.0, 0.0});
        FourierField p = multiply(a, b);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const ModeIndex n = p.mode_at(i);
            const Complex want = (n == ModeIndex{1, 1, 0}) ? Complex{1.0, 0.0}
                                                           : Complex{0.0, 0.0};
            CHECK(std::abs(p.coefficients()[i] - want) < 1e-15);
        }
    }

    TEST_CASE("random product against the physical-grid oracle, M = 4") {
        std::mt19937_64 rng(2);
        const int m = 4;
        FourierField a = random_field(Torus::T3, m, rng);
        FourierField b = random_field(Torus::T3, m, rng);

        // oracle: evaluate both factors on the 17^3 grid with the serial
        // reference evaluator, multiply pointwise, transform forward
        const int grid = 17;
        const auto va = ref::synthesize(Torus::T3, m, a.coefficients(), grid);
        const auto vb = ref::synthesize(Torus::T3, m, b.coefficients(), grid);
        std::vector<Complex> vp(va.size());
        for (std::size_t i = 0; i < va.size(); ++i) vp[i] = va[i] * vb[i];
        FourierField expect = analyze(Torus::T3, vp, grid, 2 * m).with_cutoff(m);

        FourierField got = multiply(a, b);
        const double scale = norm(expect, NormSpec::sobolev(0));
        CHECK(max_coeff_diff(got, expect) / scale < 1e-12);
    }

    TEST_CASE("dealiasing spill is reported") {
        const int m = 2;
        FourierField a = FourierField::mode(Torus::T3, m, {2, 0, 0}, {1.0, 0.0});
        FourierField b = FourierField::mode(Torus::T3, m, {2, 0, 0}, {1.0, 0.0});
        double spill = 0.0;
        FourierField p = multiply(a, b, &spill);
        CHECK(norm(p, NormSpec::sobolev(0)) == doctest::Approx(0.0));  // all out of band
        CHECK(spill == doctest::Approx(1.0));                          // the (4,0,0) mode
    }

    TEST_CASE("associativity within the dealiased budget") {
        const int m = 4;
        FourierField a = FourierField::mode(Torus::T3, m, {1, 0, 0}, {0.5, 0.25});
        FourierField b = FourierField::mode(Torus::T3, m, {0, 1, 0}, {-0.5, 1.0});
        FourierField c = FourierField::mode(Torus::T3, m, {0, 0, 1}, {0.0, -2.0});
        FourierField lhs = multiply(multiply(a, b), c);
        FourierField rhs = multiply(a, multiply(b, c));
        CHECK(max_coeff_diff(lhs, rhs) < 1e-14);
    }

    TEST_CASE("mismatched operands are rejected") {
        FourierField a(Torus::T3, 2), b(Torus::T3, 3);
        CHECK_THROWS_AS((void)multiply(a, b), ValidationError);
        FourierField c(Torus::T2, 2);
        CHECK_THROWS_AS((void)multiply(a, c), ValidationError);
    }
}

TEST_SUITE("partial_derivative") {
    TEST_CASE("constants differentiate to zero") {
        FourierField c = FourierField::constant(Torus::T3, 3, {2.0, -1.0});
        for (int axis = 1; axis <= 3; ++axis)
            CHECK(norm(partial_derivative(c, axis), NormSpec::sobolev(0)) == 0.0);
    }

    TEST_CASE("single mode picks up i * N_axis") {
        FourierField e = FourierField::mode(Torus::T3, 3, {2, 0, -1}, {1.0, 0.0});
        FourierField d = partial_derivative(e, 3);
        CHECK(std::abs(d.at({2, 0, -1}) - Complex{0.0, -1.0}) < 1e-15);
    }

    TEST_CASE("axis-1 derivative matches central differences on a line") {
        std::mt19937_64 rng(3);
        FourierField a = random_field(Torus::T3, 4, rng);
        FourierField d = partial_derivative(a, 1);
        const double x2 = 1.2345, x3 = 2.3456;
        // Richardson-extrapolated differences on a 129-point line keep the
        // oracle's own truncation error below the 1e-6 gate
        const double hh = 1e-3;
        const int n = 129;
        for (int i = 0; i < n; ++i) {
            const double x = i * (kTwoPi / n);
            auto diff = [&](double step) {
                double xp[3] = {x + step, x2, x3}, xm[3] = {x - step, x2, x3};
                return (evaluate(a, xp) - evaluate(a, xm)) / (2.0 * step);
            };
            const Complex rich = (4.0 * diff(hh / 2.0) - diff(hh)) / 3.0;
            double x0[3] = {x, x2, x3};
            CHECK(std::abs(rich - evaluate(d, x0)) < 1e-6);
        }
    }

    TEST_CASE("mixed partials commute exactly") {
        std::mt19937_64 rng(4);
        FourierField a = random_field(Torus::T3, 4, rng);
        FourierField ab = partial_derivative(partial_derivative(a, 1), 2);
        FourierField ba = partial_derivative(partial_derivative(a, 2), 1);
        CHECK(max_coeff_diff(ab, ba) == 0.0);
    }

    TEST_CASE("invalid axis") {
        FourierField a(Torus::T2, 2);
        CHECK_THROWS_AS((void)partial_derivative(a, 3), ValidationError);
    }
}

TEST_SUITE("average and norms") {
    TEST_CASE("average basics") {
        CHECK(average(FourierField::constant(Torus::T3, 2, {0.5, 0.25})) ==
              Complex{0.5, 0.25});
        CHECK(average(FourierField::mode(Torus::T3, 2, {1, 0, 0}, {1, 0})) ==
              Complex{0.0, 0.0});
    }

    TEST_CASE("average equals the grid mean") {
        std::mt19937_64 rng(5);
        FourierField a = random_field(Torus::T3, 4, rng);
        const auto vals = synthesize(a, 9);
        Complex mean{0, 0};
        for (const Complex& v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        CHECK(std::abs(mean - average(a)) < 1e-12);
    }

    TEST_CASE("norm conventions") {
        FourierField e = FourierField::mode(Torus::T3, 2, {1, 0, 0}, {1, 0});
        CHECK(norm(e, NormSpec::sobolev(0)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(norm(e, NormSpec::analytic(0.5)) ==
              doctest::Approx(std::exp(0.25)).epsilon(1e-14));
        CHECK(norm(e, NormSpec::sobolev(1)) == doctest::Approx(std::sqrt(2.0)));
        // l1 convention: |N| of (1,1,1) is 3
        FourierField e3 = FourierField::mode(Torus::T3, 2, {1, 1, 1}, {1, 0});
        CHECK(norm(e3, NormSpec::sobolev(1)) == doctest::Approx(std::sqrt(10.0)));
        CHECK(norm(FourierField(Torus::T3, 3), NormSpec::sobolev(2)) == 0.0);
        CHECK(norm(FourierField(Torus::T3, 3), NormSpec::analytic(1.0)) == 0.0);
    }

    TEST_CASE("parseval polarization") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 10; ++trial) {
            FourierField a = random_field(Torus::T3, 4, rng);
            FourierField b = random_field(Torus::T3, 4, rng);
            FourierField s = a;
            s += b;
            const double na = norm(a, NormSpec::sobolev(0));
            const double nb = norm(b, NormSpec::sobolev(0));
            const double ns = norm(s, NormSpec::sobolev(0));
            const double lhs = na * na + nb * nb + 2.0 * inner_product(a, b).real();
            CHECK(std::abs(lhs - ns * ns) <= 1e-12 * std::max(1.0, ns * ns));
        }
    }

    TEST_CASE("self-correlation mean is nonnegative") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            FourierField a = random_field(Torus::T3, 3, rng);
            const Complex v = average(multiply_full(a, a.conjugated()));
            CHECK(v.real() >= 0.0);
            CHECK(std::abs(v.imag()) < 1e-12 * std::max(1.0, v.real()));
        }
    }
}

TEST_SUITE("evaluation and sup") {
    TEST_CASE("evaluation matches the lexicographic reference sum") {
        std::mt19937_64 rng(8);
        FourierField a = random_field(Torus::T3, 4, rng);
        const double x[3] = {0.7, 2.9, 4.1};
        CHECK(std::abs(evaluate(a, x) -
                       ref::evaluate_point(Torus::T3, 4, a.coefficients(), x)) < 1e-12);
    }

    TEST_CASE("conjugated field evaluates to the conjugate") {
        std::mt19937_64 rng(9);
        FourierField a = random_field(Torus::T3, 3, rng);
        FourierField ac = a.conjugated();
        const double x[3] = {1.1, 2.2, 3.3};
        CHECK(std::abs(evaluate(ac, x) - std::conj(evaluate(a, x))) < 1e-12);
    }

    TEST_CASE("sup estimates") {
        CHECK(sup_estimate(FourierField::constant(Torus::T3, 2, {0.5, 0.0}), 2) ==
              doctest::Approx(0.5));
        FourierField m = FourierField::mode(Torus::T3, 2, {1, 0, 0}, {0.3, 0.0});
        CHECK(sup_estimate(m, 2) == doctest::Approx(0.3).epsilon(1e-10));
        FourierField two(Torus::T3, 2);
        two.set({0, 0, 0}, {0.25, 0.0});
        two.set({0, 0, 1}, {0.25, 0.0});
        CHECK(std::abs(sup_estimate(two, 3) - 0.5) < 1e-6);
        CHECK_THROWS_AS((void)sup_estimate(two, 1), ValidationError);
    }

    TEST_CASE("validated sup bound brackets the grid estimate") {
        std::mt19937_64 rng(10);
        FourierField a = random_field(Torus::T3, 3, rng, 0.05);
        const SupBound sb = validated_sup_bound(a, 4);
        CHECK(sb.upper_bound >= sb.grid_max);
        // a denser grid can only reveal more of the sup, never exceed the bound
        CHECK(sup_estimate(a, 8) <= sb.upper_bound + 1e-12);
    }
}

TEST_SUITE("kernels vs serial reference") {
    TEST_CASE("synthesis, convolution, reductions agree") {
        std::mt19937_64 rng(11);
        for (Torus dim : {Torus::T3, Torus::T2}) {
            const int m = 3;
            FourierField a = random_field(dim, m, rng);
            FourierField b = random_field(dim, m, rng);

            const int grid = 4 * m + 1;
            const auto vp = kernels::synthesize(dim, m, a.coefficients(), grid);
            const auto vs = ref::synthesize(dim, m, a.coefficients(), grid);
            double diff = 0.0;
            for (std::size_t i = 0; i < vp.size(); ++i)
                diff = std::max(diff, std::abs(vp[i] - vs[i]));
            CHECK(diff < 1e-12);

            const FourierField pf = multiply_full(a, b);
            const auto pc = ref::convolve_full(dim, m, a.coefficients(), b.coefficients());
            diff = 0.0;
            for (std::size_t i = 0; i < pc.size(); ++i)
                diff = std::max(diff, std::abs(pc[i] - pf.coefficients()[i]));
            CHECK(diff < 1e-12);

            std::vector<double> w(a.size());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + double(i % 7);
            CHECK(std::abs(kernels::weighted_sumsq(a.coefficients(), w) -
                           ref::weighted_sumsq(a.coefficients(), w)) < 1e-10);
        }
    }

    TEST_CASE("round trip analyze(synthesize) is the identity") {
        std::mt19937_64 rng(12);
        FourierField a = random_field(Torus::T3, 4, rng);
        FourierField back = analyze(Torus::T3, synthesize(a, 9), 9, 4);
        CHECK(max_coeff_diff(a, back) < 1e-13);
    }
}

TEST_SUITE("field json") {
    TEST_CASE("round trip preserves coefficients exactly") {
        std::mt19937_64 rng(13);
        for (Torus dim : {Torus::T3, Torus::T2}) {
            FourierField a = random_field(dim, 3, rng);
            a.set(ModeIndex{1, 1, 0}, {0.0, 0.0});  // exercise zero omission
            FourierField b = field_from_json(field_to_json(a));
            CHECK(a.dim() == b.dim());
            CHECK(a.cutoff() == b.cutoff());
            CHECK(max_coeff_diff(a, b) == 0.0);
        }
    }

    TEST_CASE("rows are sorted lexicographically and zeros omitted") {
        FourierField a(Torus::T3, 1);
        a.set({1, 0, 0}, {1.0, 0.0});
        a.set({-1, 0, 0}, {2.0, 0.0});
        const Json j = field_to_json(a);
        REQUIRE(j.at("modes").size() == 2);
        CHECK(j.at("modes").at(0).at(0).get<int>() == -1);
        CHECK(j.at("modes").at(1).at(0).get<int>() == 1);
    }

    TEST_CASE("malformed input is rejected") {
        CHECK_THROWS_AS((void)field_from_json(Json{{"dim", 4}, {"cutoff", 2},
                                                   {"modes", Json::array()}}),
                        ValidationError);
        Json bad{{"dim", 3}, {"cutoff", 1}, {"modes", Json::array({Json::array({9, 0, 0, 1.0, 0.0})})}};
        CHECK_THROWS_AS((void)field_from_json(bad), ValidationError);
    }
}
