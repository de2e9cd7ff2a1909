// Timing comparison of the OpenMP kernels against the serial reference
// implementations.  Usage: folitor_bench [max_cutoff]

#include <chrono>
#include <cstdio>
#include <random>

#include "folitor/diophantine.hpp"
#include "folitor/field.hpp"
#include "folitor/kernels.hpp"
#include "folitor/parallel.hpp"
#include "folitor/ref.hpp"

using namespace folitor;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_ms(F&& fn, int repeats) {
    // one warmup, then best of `repeats`
    fn();
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

FourierField random_field(Torus dim, int cutoff, std::mt19937_64& rng) {
    FourierField f(dim, cutoff);
    for (auto& c : f.coefficients())
        c = {std::uniform_real_distribution<double>(-1, 1)(rng),
             std::uniform_real_distribution<double>(-1, 1)(rng)};
    return f;
}

void row(const char* name, int size, double serial, double parallel, double delta) {
    std::printf("%-28s %6d %12.3f %12.3f %8.2fx %10.2e\n", name, size, serial, parallel,
                serial / parallel, delta);
}

}  // namespace

int main(int argc, char** argv) {
    const int max_m = argc > 1 ? std::atoi(argv[1]) : 8;
    std::mt19937_64 rng(12345);
    std::printf("threads: %d\n", thread_count());
    std::printf("%-28s %6s %12s %12s %9s %10s\n", "kernel", "M", "serial ms", "parallel ms",
                "speedup", "max|diff|");

    for (int m = 4; m <= max_m; m += 2) {
        FourierField a = random_field(Torus::T3, m, rng);
        FourierField b = random_field(Torus::T3, m, rng);
        const int grid = 4 * m + 1;

        {  // grid synthesis
            std::vector<Complex> vp, vs;
            const double tp = time_ms([&] {
                vp = kernels::synthesize(Torus::T3, m, a.coefficients(), grid);
            }, 3);
            const double ts = time_ms([&] {
                vs = ref::synthesize(Torus::T3, m, a.coefficients(), grid);
            }, 1);
            double diff = 0;
            for (std::size_t i = 0; i < vp.size(); ++i)
                diff = std::max(diff, std::abs(vp[i] - vs[i]));
            row("synthesize", m, ts, tp, diff);
        }

        {  // dealiased product
            FourierField pp;
            std::vector<Complex> pc;
            const double tp = time_ms([&] { pp = multiply_full(a, b); }, 3);
            const double ts = time_ms([&] {
                pc = ref::convolve_full(Torus::T3, m, a.coefficients(), b.coefficients());
            }, 1);
            double diff = 0;
            for (std::size_t i = 0; i < pc.size(); ++i)
                diff = std::max(diff, std::abs(pc[i] - pp.coefficients()[i]));
            row("multiply (dealiased)", m, ts, tp, diff);
        }

        {  // weighted norm reduction
            std::vector<double> w(a.size());
            for (std::size_t i = 0; i < w.size(); ++i) {
                const int n1 = l1_norm(a.mode_at(i));
                w[i] = (1.0 + double(n1) * n1) * (1.0 + double(n1) * n1);
            }
            double sp = 0, ss = 0;
            const double tp = time_ms([&] {
                sp = kernels::weighted_sumsq(a.coefficients(), w);
            }, 5);
            const double ts = time_ms([&] {
                ss = ref::weighted_sumsq(a.coefficients(), w);
            }, 5);
            row("norm reduction", m, ts, tp, std::abs(sp - ss) / std::max(1.0, ss));
        }
    }

    {  // denominator scan against the brute-force reference
        const FoliationParams golden{Slope::from_double((1.0 + std::sqrt(5.0)) / 2.0),
                                     Slope::from_double(0.0)};
        std::vector<ScanRecord> rp, rs;
        const double tp = time_ms([&] {
            rp = scan_denominators(golden, 40).records;
        }, 3);
        const double ts = time_ms([&] { rs = scan_records_reference(golden, 40); }, 3);
        double diff = rp.size() == rs.size() ? 0.0 : 1.0;
        if (diff == 0.0)
            for (std::size_t i = 0; i < rp.size(); ++i)
                diff = std::max(diff, std::abs(rp[i].d - rs[i].d));
        row("denominator scan", 40, ts, tp, diff);
        const double tbig = time_ms([&] {
            rp = scan_denominators(golden, 2000).records;
        }, 1);
        std::printf("%-28s %6d %12s %12.3f\n", "denominator scan", 2000, "-", tbig);
    }
    return 0;
}
