#include "folitor/diophantine.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>

#include "folitor/parallel.hpp"

namespace folitor {

std::string to_string(DioClass c) {
    switch (c) {
        case DioClass::DiophantineEvidence: return "diophantine-evidence";
        case DioClass::WeaklyDiophantineEvidence: return "weakly-diophantine-evidence";
        case DioClass::LiouvilleEvidence: return "liouville-evidence";
        case DioClass::RationalDegenerate: return "rational-degenerate";
        case DioClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

double denominator_sum(const FoliationParams& params, ModeIndex n) {
    return std::abs(n.p + n.k * params.a1.value) + std::abs(n.m + n.k * params.a2.value);
}

struct Candidate {
    ModeIndex mode;
    int l1;
    double d;
};

bool candidate_order(const Candidate& a, const Candidate& b) {
    if (a.l1 != b.l1) return a.l1 < b.l1;
    if (a.d != b.d) return a.d < b.d;
    if (a.mode.p != b.mode.p) return a.mode.p < b.mode.p;
    if (a.mode.m != b.mode.m) return a.mode.m < b.mode.m;
    return a.mode.k < b.mode.k;
}

// Any mode with d < 1/2 has the rounded (p, m) for its k, so the full box
// max|N_i| <= kBrute plus the per-k rounded candidates cover every possible
// d-record below 1/2 and every d * |N|^s minimum for s >= 1.
constexpr int kBrute = 64;

std::vector<Candidate> gather_candidates(const FoliationParams& params, int cutoff) {
    std::vector<Candidate> cands;
    const int b = std::min(kBrute, cutoff);
    cands.reserve(static_cast<std::size_t>(2 * b + 1) * (2 * b + 1) * (2 * b + 1));
    for (int p = -b; p <= b; ++p)
        for (int m = -b; m <= b; ++m)
            for (int k = -b; k <= b; ++k) {
                const ModeIndex n{p, m, k};
                if (n == ModeIndex{}) continue;
                cands.push_back({n, l1_norm(n), denominator_sum(params, n)});
            }

    std::vector<Candidate> extra(static_cast<std::size_t>(cutoff) + 1,
                                 Candidate{{}, -1, 0.0});
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long k = 1; k <= cutoff; ++k) {
        const double prd = std::round(-static_cast<double>(k) * params.a1.value);
        const double mrd = std::round(-static_cast<double>(k) * params.a2.value);
        if (std::abs(prd) > cutoff || std::abs(mrd) > cutoff) continue;
        const ModeIndex n{static_cast<int>(prd), static_cast<int>(mrd), static_cast<int>(k)};
        if (linf_norm(n) <= b) continue;  // already in the box
        extra[k] = {n, l1_norm(n), denominator_sum(params, n)};
    }
    for (const Candidate& c : extra)
        if (c.l1 > 0) cands.push_back(c);

    std::sort(cands.begin(), cands.end(), candidate_order);
    return cands;
}

double log_margin_of(const Rational& dist, double logC, double s, const BigInt& q) {
    // log(dist * q^s) - log C, dist > 0
    const double ld = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_bin_float_100(dist)));
    const double lq = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_bin_float_100(q)));
    return ld + s * lq - logC;
}

}  // namespace

std::vector<ScanRecord> scan_records_reference(const FoliationParams& params, int cutoff) {
    std::vector<Candidate> cands;
    for (int p = -cutoff; p <= cutoff; ++p)
        for (int m = -cutoff; m <= cutoff; ++m)
            for (int k = -cutoff; k <= cutoff; ++k) {
                const ModeIndex n{p, m, k};
                if (n == ModeIndex{}) continue;
                cands.push_back({n, l1_norm(n), denominator_sum(params, n)});
            }
    std::sort(cands.begin(), cands.end(), candidate_order);
    std::vector<ScanRecord> recs;
    double best = std::numeric_limits<double>::infinity();
    for (const Candidate& c : cands)
        if (c.d < best) {
            best = c.d;
            recs.push_back({c.mode, c.l1, c.d});
        }
    return recs;
}

DiophantineReport scan_denominators(const FoliationParams& params, int cutoff,
                                    std::vector<double> s_grid) {
    if (cutoff < 2) throw ValidationError("scan needs cutoff >= 2");
    for (double s : s_grid)
        if (s < 1.0) throw ValidationError("s_grid entries must be >= 1");
    DiophantineReport rep;
    rep.cutoff = cutoff;
    rep.s_grid = std::move(s_grid);

    const auto cands = gather_candidates(params, cutoff);

    double best = std::numeric_limits<double>::infinity();
    rep.product_minima.assign(rep.s_grid.size(), std::numeric_limits<double>::infinity());
    rep.liminf_proxy = 1.0;
    for (const Candidate& c : cands) {
        if (c.d < best) {
            best = c.d;
            rep.records.push_back({c.mode, c.l1, c.d});
        }
        for (std::size_t i = 0; i < rep.s_grid.size(); ++i) {
            const double v = c.d * std::pow(static_cast<double>(c.l1), rep.s_grid[i]);
            rep.product_minima[i] = std::min(rep.product_minima[i], v);
        }
        if (c.d > 0.0)
            rep.liminf_proxy = std::min(rep.liminf_proxy,
                                        std::pow(c.d, 1.0 / static_cast<double>(c.l1)));
        else
            rep.liminf_proxy = 0.0;
    }

    if (params.is_exact()) {
        const Resonance res = exact_resonance(params);
        rep.exact_zero_exists = res.exists;
        rep.resonance_denominator = res.denominator;
        if (res.exists && res.mode && linf_norm(*res.mode) <= cutoff) {
            rep.exact_zero_in_scan = true;
            rep.zero_mode = *res.mode;
            rep.notes.push_back("exact resonance inside the scan at the reported mode");
            rep.liminf_proxy = 0.0;
            const int zl1 = l1_norm(rep.zero_mode);
            std::erase_if(rep.records, [&](const ScanRecord& r) { return r.l1 >= zl1; });
            rep.records.push_back({rep.zero_mode, zl1, 0.0});
        } else if (res.exists) {
            rep.notes.push_back(
                "slopes are exactly rational; resonance denominator exceeds the scan");
        }
    }

    // Fitted exponents over the record table (records with d = 0 excluded).
    std::vector<ScanRecord> recs;
    for (const ScanRecord& r : rep.records)
        if (r.d > 0.0) recs.push_back(r);
    if (recs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const ScanRecord& r : recs) {
            const double x = std::log(static_cast<double>(r.l1));
            const double y = -std::log(r.d);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double n = static_cast<double>(recs.size());
        const double den = n * sxx - sx * sx;
        rep.ols_exponent = den > 0 ? (n * sxy - sx * sy) / den : 0.0;

        const std::size_t half = recs.size() / 2;
        double env = 0.0;
        for (std::size_t i = std::max<std::size_t>(half, 1); i < recs.size(); ++i) {
            const double num = std::log(recs[i - 1].d / recs[i].d);
            const double dlog = std::log(static_cast<double>(recs[i].l1) / recs[i - 1].l1);
            if (dlog > 0) env = std::max(env, num / dlog);
        }
        rep.envelope_exponent = env;
    }

    classify(rep);
    return rep;
}

DioClass classify(DiophantineReport& rep, const ClassifyThresholds& th) {
    auto decide = [&]() -> DioClass {
        if (rep.exact_zero_in_scan) return DioClass::RationalDegenerate;
        std::vector<ScanRecord> recs;
        for (const ScanRecord& r : rep.records)
            if (r.d > 0.0) recs.push_back(r);
        if (recs.size() < th.min_records) return DioClass::Inconclusive;

        // Consecutive-record slopes over the top half of the table.
        std::vector<double> slopes;
        const std::size_t half = recs.size() / 2;
        for (std::size_t i = std::max<std::size_t>(half, 1); i < recs.size(); ++i) {
            const double dlog = std::log(static_cast<double>(recs[i].l1) / recs[i - 1].l1);
            if (dlog > 0) slopes.push_back(std::log(recs[i - 1].d / recs[i].d) / dlog);
        }
        if (slopes.empty()) return DioClass::Inconclusive;
        std::vector<double> sorted = slopes;
        std::sort(sorted.begin(), sorted.end());
        const double smax = sorted.back();
        const double smin = sorted.front();
        const double median = sorted[sorted.size() / 2];

        if (smax > th.liouville_jump && smax >= th.liouville_ratio * std::max(median, 0.1))
            return DioClass::LiouvilleEvidence;
        if (smax <= th.dio_max_slope && smax - smin <= th.dio_spread)
            return DioClass::DiophantineEvidence;
        if (rep.liminf_proxy >= 1.0 - th.eps_weak)
            return DioClass::WeaklyDiophantineEvidence;
        return DioClass::Inconclusive;
    };
    rep.classification = decide();
    return rep.classification;
}

namespace {

struct RawCandidate {
    ModeIndex mode;
    double quality = 0.0;
    double log_lambda_inv = 0.0;
    Complex lambda;
    bool exact = false;
    Rational lam_re, lam_im;
    bool resonance = false;
};

// log2 of a positive rational, good to ~1e-15 relative.
double log_rational(const Rational& r) {
    const boost::multiprecision::cpp_bin_float_100 v(r);
    return static_cast<double>(boost::multiprecision::log(v));
}

void collect_from_slope(const FoliationParams& params, bool from_a1,
                        const LiouvilleModeOptions& opt, std::vector<RawCandidate>& out,
                        std::vector<std::string>& warnings) {
    const Slope& primary = from_a1 ? params.a1 : params.a2;
    const Slope& other = from_a1 ? params.a2 : params.a1;
    const auto convs = certified_convergents(primary, opt.max_denominator);
    for (const Convergent& c : convs) {
        if (c.q < 1) continue;
        if (c.p > (BigInt(1) << 31) - 2 || c.p < -((BigInt(1) << 31) - 2)) continue;
        const long long q = c.q.convert_to<long long>();
        const long long pr = c.p.convert_to<long long>();
        // second axis rounded to its own nearest integer
        const double ro = -static_cast<double>(q) * other.value;
        if (std::abs(ro) > 2e9) continue;
        const long long mo = static_cast<long long>(std::llround(ro));
        RawCandidate rc;
        rc.mode = from_a1
                      ? ModeIndex{static_cast<int>(-pr), static_cast<int>(mo), static_cast<int>(q)}
                      : ModeIndex{static_cast<int>(mo), static_cast<int>(-pr), static_cast<int>(q)};
        if (rc.mode == ModeIndex{}) continue;
        rc.lambda = lambda_of(params, rc.mode);
        if (const auto ex = lambda_exact(params, rc.mode)) {
            rc.exact = true;
            rc.lam_re = ex->first;
            rc.lam_im = ex->second;
            // the double formula cancels catastrophically at deep convergents
            rc.lambda = Complex{to_double(rc.lam_re), to_double(rc.lam_im)};
            if (rc.lam_re == 0 && rc.lam_im == 0) {
                rc.resonance = true;
                warnings.push_back("convergent denominator " + c.q.str() +
                                   " is an exact resonance (leaves not dense); excluded");
                out.push_back(rc);
                continue;
            }
            const Rational abs2 = rc.lam_re * rc.lam_re + rc.lam_im * rc.lam_im;
            rc.log_lambda_inv = -0.5 * log_rational(abs2);
        } else {
            const double av = std::abs(rc.lambda);
            if (av == 0.0) {
                rc.resonance = true;
                out.push_back(rc);
                continue;
            }
            rc.log_lambda_inv = -std::log(av);
        }
        rc.quality = rc.log_lambda_inv / std::log(static_cast<double>(l1_norm(rc.mode)));
        out.push_back(rc);
    }
}

// Exact verification of |lambda|^{-1} > |N|^s for integer s.
bool verify_exact(const RawCandidate& rc, double s) {
    const double rs = std::round(s);
    if (rc.exact && rs == s && rs >= 0 && rs <= 64) {
        const Rational abs2 = rc.lam_re * rc.lam_re + rc.lam_im * rc.lam_im;
        const BigInt n1(l1_norm(rc.mode));
        BigInt npow = 1;
        for (int i = 0; i < 2 * static_cast<int>(rs); ++i) npow *= n1;
        return abs2 * npow < 1;
    }
    return rc.log_lambda_inv > s * std::log(static_cast<double>(l1_norm(rc.mode)));
}

}  // namespace

LiouvilleModeReport find_liouville_modes(const FoliationParams& params,
                                         const std::vector<double>& s_targets,
                                         const LiouvilleModeOptions& opt) {
    for (std::size_t i = 1; i < s_targets.size(); ++i)
        if (s_targets[i] <= s_targets[i - 1])
            throw ValidationError("s_targets must be strictly increasing");

    LiouvilleModeReport rep;
    std::vector<RawCandidate> cands;
    collect_from_slope(params, true, opt, cands, rep.warnings);
    if (params.a2.value != 0.0) collect_from_slope(params, false, opt, cands, rep.warnings);

    // Drop resonances, below-floor candidates, duplicates.
    std::vector<RawCandidate> pool;
    for (const RawCandidate& rc : cands) {
        if (rc.resonance) continue;
        if (rc.log_lambda_inv <= std::log(opt.quality_floor)) continue;
        const bool dup = std::any_of(pool.begin(), pool.end(), [&](const RawCandidate& o) {
            return o.mode == rc.mode;
        });
        if (!dup) pool.push_back(rc);
    }

    std::vector<bool> used(pool.size(), false);
    std::vector<std::pair<std::size_t, double>> chosen;  // pool index, target
    std::size_t met = 0;
    for (const double s : s_targets) {
        // smallest |N| among unused candidates meeting the target
        std::size_t pick = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i] || !verify_exact(pool[i], s)) continue;
            if (pick == pool.size() || l1_norm(pool[i].mode) < l1_norm(pool[pick].mode))
                pick = i;
        }
        if (pick < pool.size()) {
            used[pick] = true;
            chosen.emplace_back(pick, s);
            ++met;
            continue;
        }
        // no verified candidate: substitute the best remaining quality if some
        // earlier target succeeded (genuine small-denominator behavior)
        if (met == 0) {
            rep.warnings.push_back("no mode meets target s=" + std::to_string(s) +
                                   " within the denominator bound");
            continue;
        }
        std::size_t best = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            if (best == pool.size() || pool[i].quality > pool[best].quality) best = i;
        }
        if (best == pool.size()) {
            rep.warnings.push_back("candidate pool exhausted before target s=" +
                                   std::to_string(s));
            continue;
        }
        used[best] = true;
        chosen.emplace_back(best, s);
        rep.warnings.push_back("target s=" + std::to_string(s) +
                               " not met; best available quality " +
                               std::to_string(pool[best].quality) + " substituted");
    }

    for (const auto& [idx, s] : chosen) {
        const RawCandidate& rc = pool[idx];
        LiouvilleMode lm;
        lm.mode = rc.mode;
        lm.s_target = s;
        lm.verified = verify_exact(rc, s);
        lm.quality = rc.quality;
        lm.lambda = rc.lambda;
        lm.lambda_exact_known = rc.exact;
        lm.lambda_re = rc.lam_re;
        lm.lambda_im = rc.lam_im;
        rep.modes.push_back(std::move(lm));
    }
    std::sort(rep.modes.begin(), rep.modes.end(), [](const LiouvilleMode& a,
                                                     const LiouvilleMode& b) {
        return l1_norm(a.mode) < l1_norm(b.mode);
    });
    for (const LiouvilleMode& m : rep.modes) {
        if (m.mode.k == 0) throw NumericalError("liouville mode with k = 0 selected");
        if (m.verified) ++rep.verified_count;
    }
    return rep;
}

DiophantineCheck check_diophantine_number(const Slope& alpha, double C, double s,
                                          const BigInt& K) {
    if (K < 1 || !(C > 0) || !(s > 1)) throw ValidationError("need K >= 1, C > 0, s > 1");
    DiophantineCheck out;
    out.holds = true;
    out.log_margin = std::numeric_limits<double>::infinity();

    const auto convs = certified_convergents(alpha, K);
    if (convs.empty()) {
        out.notes.push_back("no certified convergents at this precision");
        out.holds = false;
        return out;
    }
    if (!alpha.is_exact())
        out.notes.push_back("floating input: convergents certified for the dyadic truncation");

    const Rational a = alpha.is_exact() ? *alpha.exact : rational_from_double(alpha.value);
    const double logC = std::log(C);
    const double rs = std::round(s);
    const bool exact_cmp = alpha.is_exact() && rs == s && rs >= 1 && rs <= 64;

    for (const Convergent& c : convs) {
        if (c.q < 1 || c.q > K) continue;
        const Rational dist = boost::multiprecision::abs(Rational(c.q) * a - Rational(c.p));
        if (dist == 0) {
            out.holds = false;
            out.worst_m = c.p;
            out.worst_k = c.q;
            out.log_margin = -std::numeric_limits<double>::infinity();
            out.notes.push_back("exact rational hit");
            return out;
        }
        // inequality |alpha - p/q| > C / q^{s+1}  <=>  dist * q^s > C
        bool ok;
        if (exact_cmp && C == 1.0) {
            BigInt qpow = 1;
            for (int i = 0; i < static_cast<int>(rs); ++i) qpow *= c.q;
            ok = dist * Rational(qpow) > 1;
        } else {
            ok = log_margin_of(dist, logC, s, c.q) > 0;
        }
        const double margin = log_margin_of(dist, logC, s, c.q);
        if (margin < out.log_margin) {
            out.log_margin = margin;
            out.worst_m = c.p;
            out.worst_k = c.q;
        }
        if (!ok) out.holds = false;
    }
    return out;
}

}  // namespace folitor
