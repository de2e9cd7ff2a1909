#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "folitor/diophantine.hpp"

using namespace folitor;

namespace {

const FoliationParams golden{Slope::from_double((1.0 + std::sqrt(5.0)) / 2.0),
                             Slope::from_double(0.0)};

FoliationParams liouville5() {
    return {Slope::from_rational(liouville_constant(5)), Slope::from_rational(Rational(0))};
}

}  // namespace

TEST_SUITE("scan") {
    TEST_CASE("reduced scan equals the brute-force reference") {
        for (const FoliationParams& p :
             {golden, FoliationParams{Slope::from_double(std::sqrt(2.0)),
                                      Slope::from_double(std::sqrt(3.0))},
              liouville5()}) {
            const auto fast = scan_denominators(p, 24).records;
            const auto slow = scan_records_reference(p, 24);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t i = 0; i < fast.size(); ++i) {
                CHECK(fast[i].l1 == slow[i].l1);
                CHECK(fast[i].d == doctest::Approx(slow[i].d).epsilon(1e-14));
            }
        }
    }

    TEST_CASE("golden slope: badly approximable, records on the Fibonacci ladder") {
        DiophantineReport rep = scan_denominators(golden, 60);
        // inf of d * |N| stays away from zero for a badly approximable slope;
        // the continued-fraction lower bound |p + k phi| >= 1/(sqrt5 k) gives
        // d * |N| >= (1 + phi)/sqrt5 ~ 1.17 on convergents, and small modes
        // bottom out at exactly 1 (mode (1,0,0))
        REQUIRE(!rep.product_minima.empty());
        CHECK(rep.s_grid[0] == 1.0);
        CHECK(rep.product_minima[0] >= 0.4);
        CHECK(rep.product_minima[0] <= 1.2);
        // record d values follow |F_n phi - F_{n+1}| = phi^{-n}
        const double phi = golden.a1.value;
        for (const ScanRecord& r : rep.records) {
            if (r.mode.k == 0) continue;
            const double expect = std::abs(r.mode.p + r.mode.k * phi);
            CHECK(r.d == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    TEST_CASE("golden at M = 2000: stable envelope exponent in [1.0, 1.3]") {
        DiophantineReport rep = scan_denominators(golden, 2000);
        CHECK(rep.classification == DioClass::DiophantineEvidence);
        CHECK(rep.envelope_exponent >= 1.0);
        CHECK(rep.envelope_exponent <= 1.3);
        CHECK(rep.liminf_proxy <= 1.0);
        // the largest record before the (1597, 987) convergent
        CHECK(rep.records.back().d == doctest::Approx(0.000453103853715).epsilon(1e-9));
        CHECK(rep.records.back().mode == ModeIndex{-1597, 0, 987});
    }

    TEST_CASE("truncated Liouville slope at M = 2000: super-polynomial record jump") {
        DiophantineReport rep = scan_denominators(liouville5(), 2000);
        CHECK(rep.classification == DioClass::LiouvilleEvidence);
        // the convergent 49/64 produces the near-resonant record
        CHECK(rep.records.back().mode == ModeIndex{-49, 0, 64});
        CHECK(rep.records.back().d == doctest::Approx(3.814697265625e-06).epsilon(1e-12));
        // consecutive-record decay beats every s <= 6 at the last jump:
        // slope from (83, 1.5622e-2) to (113, 3.8147e-6) is ~26.96
        CHECK(rep.envelope_exponent > 6.0);
        // exact rational, but the resonance denominator 2^120 is far beyond
        // any scan: evidence, not degeneracy
        CHECK(rep.exact_zero_exists);
        CHECK(!rep.exact_zero_in_scan);
        CHECK(rep.resonance_denominator == BigInt(1) << 120);
    }

    TEST_CASE("exact rational slopes degenerate inside the scan") {
        const FoliationParams rat{Slope::from_rational(Rational(1, 2)),
                                  Slope::from_rational(Rational(1, 3))};
        DiophantineReport rep = scan_denominators(rat, 100);
        CHECK(rep.classification == DioClass::RationalDegenerate);
        CHECK(rep.exact_zero_in_scan);
        CHECK(rep.zero_mode == ModeIndex{3, 2, -6});
        CHECK(rep.records.back().d == 0.0);
        CHECK(rep.liminf_proxy == 0.0);
    }

    TEST_CASE("liminf proxy is monotone in the cutoff") {
        const double l1 = scan_denominators(golden, 50).liminf_proxy;
        const double l2 = scan_denominators(golden, 200).liminf_proxy;
        const double l3 = scan_denominators(golden, 800).liminf_proxy;
        CHECK(l2 <= l1 + 1e-15);
        CHECK(l3 <= l2 + 1e-15);
    }

    TEST_CASE("norm equivalence between the denominator sum and |lambda|") {
        std::vector<ScanRecord> recs = scan_records_reference(golden, 10);
        for (const ScanRecord& r : recs) {
            const double lam = std::abs(lambda_of(golden, r.mode));
            CHECK(lam <= r.d / 2.0 * std::sqrt(2.0) * (1.0 + 1e-12));
            CHECK(r.d / 2.0 <= std::sqrt(2.0) * lam * (1.0 + 1e-12));
        }
    }

    TEST_CASE("insufficient records classify as inconclusive") {
        DiophantineReport rep;
        rep.records.push_back({{1, 0, 0}, 1, 1.0});
        classify(rep);
        CHECK(rep.classification == DioClass::Inconclusive);
    }
}

TEST_SUITE("liouville modes") {
    TEST_CASE("liouville(5) with targets (2, 4, 6): best-effort triple") {
        LiouvilleModeReport rep = find_liouville_modes(liouville5(), {2.0, 4.0, 6.0});
        REQUIRE(rep.modes.size() == 3);
        CHECK(rep.modes[0].mode == ModeIndex{-13, 0, 17});
        CHECK(rep.modes[1].mode == ModeIndex{-49, 0, 64});
        CHECK(rep.modes[2].mode == ModeIndex{-12845057, 0, 16777216});
        // s = 2 is met strictly by the 49/64 convergent; the deeper targets
        // exceed the 3.9081 quality ceiling of this truncation and fall back
        CHECK(rep.verified_count == 1);
        CHECK(rep.modes[1].verified);
        CHECK(rep.modes[1].s_target == 2.0);
        CHECK(!rep.modes[2].verified);
        CHECK(rep.modes[2].quality == doctest::Approx(3.9081).epsilon(1e-3));
        CHECK(rep.warnings.size() >= 2);
        for (const LiouvilleMode& m : rep.modes) CHECK(m.mode.k != 0);
        // exact lambda at the deep convergent: i * 2^{-97}
        CHECK(rep.modes[2].lambda_exact_known);
        CHECK(rep.modes[2].lambda.real() == 0.0);
        CHECK(rep.modes[2].lambda.imag() == doctest::Approx(std::ldexp(1.0, -97)));
    }

    TEST_CASE("golden slope has no genuine small denominators: empty list") {
        LiouvilleModeReport rep = find_liouville_modes(golden, {3.0});
        CHECK(rep.modes.empty());
        CHECK(!rep.warnings.empty());
    }

    TEST_CASE("targets must increase") {
        CHECK_THROWS_AS((void)find_liouville_modes(liouville5(), {4.0, 2.0}),
                        ValidationError);
    }
}

TEST_SUITE("diophantine number check") {
    TEST_CASE("golden ratio with the sharp constant") {
        // |phi - 2/1| = 0.38197 is the global minimum of |phi - m/k| k^{s+1}:
        // C = 0.38 passes, C = 0.40 fails, both witnessed at (2, 1)
        const Slope phi = golden.a1;
        DiophantineCheck ok = check_diophantine_number(phi, 0.38, 1.001, BigInt(1000000));
        CHECK(ok.holds);
        CHECK(ok.worst_m == 2);
        CHECK(ok.worst_k == 1);
        CHECK(ok.log_margin > 0.0);
        CHECK(ok.log_margin < 0.01);

        DiophantineCheck bad = check_diophantine_number(phi, 0.40, 1.001, BigInt(1000000));
        CHECK(!bad.holds);
        CHECK(bad.worst_m == 2);
        CHECK(bad.worst_k == 1);
    }

    TEST_CASE("exact rational fails at its own denominator") {
        DiophantineCheck chk = check_diophantine_number(Slope::from_rational(Rational(1, 2)),
                                                        1.0, 2.0, BigInt(100));
        CHECK(!chk.holds);
        CHECK(chk.worst_m == 1);
        CHECK(chk.worst_k == 2);
    }

    TEST_CASE("truncated Liouville constant fails at the fourth factorial convergent") {
        // |alpha - S4| = 2^{-120} < 1 / (2^{24})^4 = 2^{-96}
        DiophantineCheck chk = check_diophantine_number(
            Slope::from_rational(liouville_constant(5)), 1.0, 3.0, BigInt(1) << 65);
        CHECK(!chk.holds);
        CHECK(chk.worst_m == 12845057);
        CHECK(chk.worst_k == 16777216);
        CHECK(chk.log_margin == doctest::Approx(-24.0 * std::log(2.0)).epsilon(1e-6));
    }

    TEST_CASE("smoke: a verified diophantine slope classifies as evidence") {
        const DiophantineCheck chk =
            check_diophantine_number(golden.a1, 0.38, 1.001, BigInt(1000000));
        REQUIRE(chk.holds);
        DiophantineReport rep = scan_denominators(golden, 2000);
        CHECK(rep.classification == DioClass::DiophantineEvidence);
    }

    TEST_CASE("preconditions") {
        CHECK_THROWS_AS((void)check_diophantine_number(golden.a1, 0.0, 2.0, BigInt(10)),
                        ValidationError);
        CHECK_THROWS_AS((void)check_diophantine_number(golden.a1, 1.0, 0.5, BigInt(10)),
                        ValidationError);
    }
}
