#include "rank1/wlp.hpp"

#include <algorithm>
#include <stdexcept>

namespace rank1 {

WindowRow nonmixing_window(const Tower& t, int j) {
    if (j < 1 || j > t.max_stage())
        throw ConfigError("stage_out_of_range: window needs stages " + std::to_string(j) +
                          " and " + std::to_string(j + 1));
    const BigInt& hj = t.height(j);
    const BigInt& hn = t.height(j + 1);
    WindowRow w;
    w.j = j;
    BigInt lo = (hn + 1) / 2 - hj;
    BigInt hi = hn / 2 + hj;
    w.clipped = lo < hj || hi > hn;
    w.lo = std::max(lo, hj);
    w.hi = std::min(hi, hn);
    return w;
}

std::vector<WindowRow> nonmixing_windows(const Tower& t, int j_lo, int j_hi) {
    if (j_lo > j_hi) throw ConfigError("invalid_argument: empty stage range");
    std::vector<WindowRow> out;
    for (int j = j_lo; j <= j_hi; ++j) out.push_back(nonmixing_window(t, j));
    return out;
}

BigInt mid_time(const Tower& t, int j) { return (t.height(j + 1) + 1) / 2; }

BigInt cascade_times(const Tower& t, int J, int m, const BigInt& k) {
    if (m < 1) throw ConfigError("invalid_argument: cascade depth must be positive");
    if (J - m + 1 < 1 || J > t.max_stage())
        throw ConfigError("stage_out_of_range: cascade spans stages " +
                          std::to_string(J - m + 1) + ".." + std::to_string(J));
    BigInt tail = k;
    for (int u = J - m + 1; u <= J; ++u) {
        tail = mid_time(t, u) + tail;
        const BigInt& hu = t.height(u);
        const BigInt& hn = t.height(u + 1);
        BigInt lo = (hn + 1) / 2 - hu;
        BigInt hi = hn / 2 + hu;
        if (tail < lo || tail > hi)
            throw ConfigError("window_violation: partial time " + tail.str() +
                              " leaves the stage-" + std::to_string(u) + " window");
    }
    return tail;
}

std::vector<LevelSet> reference_sets(const Tower& t) {
    const BigInt L = t.height(2) + 1;
    if (L < 8) throw ConfigError("invalid_argument: stage 2 has fewer than 8 levels");
    std::vector<LevelSet> blocks;
    for (int i = 0; i < 8; ++i) {
        BigInt lo = L * i / 8;
        BigInt hi = L * (i + 1) / 8 - 1;
        blocks.push_back(make_levelset(t, 2, {{lo, hi}}));
    }
    std::vector<LevelSet> sets = blocks;
    const int pairs[4][2] = {{0, 2}, {1, 3}, {4, 6}, {5, 7}};
    for (const auto& p : pairs) sets.push_back(unite(blocks[p[0]], blocks[p[1]]));
    return sets;
}

Family reference_family(const Tower& t) {
    std::vector<LevelSet> s = reference_sets(t);
    Family fam;
    for (std::size_t i = 0; i < s.size(); ++i) fam.emplace_back(s[i], s[i]);
    for (std::size_t i = 0; i < s.size(); ++i) fam.emplace_back(s[i], s[(i + 5) % s.size()]);
    return fam;
}

namespace {

struct FamilyCtx {
    int common_stage = 1;
    std::vector<std::vector<std::pair<BigInt, BigInt>>> mults; // per pair: (lag, count)
    BigInt dmin, dmax;
    std::vector<BigRat> mu_a, mu_b;
};

FamilyCtx family_ctx(const Tower& t, const Family& family) {
    if (family.empty()) throw ConfigError("invalid_argument: empty family");
    FamilyCtx ctx;
    for (const auto& [a, b] : family) {
        if (a.empty() || b.empty())
            throw ConfigError("invalid_argument: empty set in family");
        ctx.common_stage = std::max({ctx.common_stage, a.stage, b.stage});
    }
    bool first = true;
    for (const auto& [a, b] : family) {
        LevelSet A = refine_to(t, a, ctx.common_stage);
        LevelSet B = refine_to(t, b, ctx.common_stage);
        BigInt lo = min_level(A) - max_level(B);
        BigInt hi = max_level(A) - min_level(B);
        if (first || lo < ctx.dmin) ctx.dmin = lo;
        if (first || hi > ctx.dmax) ctx.dmax = hi;
        first = false;
        auto m = lag_multiplicities(A, B);
        ctx.mults.emplace_back(m.begin(), m.end());
        ctx.mu_a.push_back(measure(t, a));
        ctx.mu_b.push_back(measure(t, b));
    }
    return ctx;
}

// fold a signed lag range to |lag| space
void fold_range(const BigInt& lo, const BigInt& hi, BigInt& wlo, BigInt& whi) {
    if (lo >= 0) {
        wlo = lo;
        whi = hi;
    } else if (hi <= 0) {
        wlo = -hi;
        whi = -lo;
    } else {
        wlo = 0;
        whi = std::max(BigInt(-lo), hi);
    }
}

// raw correlations for every pair at every shift in [s_lo, s_hi], sharing one
// exact g window over the folded lag range
std::vector<std::vector<BigRat>> family_corr_grid(const Tower& t, const FamilyCtx& ctx,
                                                  const BigInt& s_lo, const BigInt& s_hi,
                                                  const DynOptions& opt) {
    BigInt wlo, whi;
    fold_range(s_lo + ctx.dmin, s_hi + ctx.dmax, wlo, whi);
    int K = 0;
    for (int cand = ctx.common_stage; cand <= t.max_stage() + 1; ++cand) {
        if (t.height(cand) >= whi) {
            K = cand;
            break;
        }
    }
    if (K == 0)
        throw Unresolvable("unresolvable_at_cap: no representable tower reaches shift " +
                               s_hi.str(),
                           t.max_stage() + 1);
    BigInt sz = 1;
    for (int u = ctx.common_stage; u < K; ++u) sz *= t.stage(u).r;
    if (sz > static_cast<long long>(opt.table_cap))
        throw Unresolvable("unresolvable_at_cap: offset table for tower " + std::to_string(K) +
                               " exceeds table_cap",
                           K);
    TableCache local_cache(opt.table_cap);
    TableCache& cache = opt.cache ? *opt.cache : local_cache;
    auto tab = cache.get(t, ctx.common_stage, K);
    GWindowOptions gopt;
    gopt.depth_cap = opt.depth_cap;
    gopt.threads = opt.threads;
    std::vector<BigRat> g = g_window(t, *tab, wlo, whi, gopt);
    const long nshift = static_cast<long>(to_i64(s_hi - s_lo + 1));
    std::vector<std::vector<BigRat>> out(static_cast<std::size_t>(nshift),
                                         std::vector<BigRat>(ctx.mults.size()));
    for (long s = 0; s < nshift; ++s) {
        const BigInt shift = s_lo + s;
        for (std::size_t p = 0; p < ctx.mults.size(); ++p) {
            BigRat raw = 0;
            for (const auto& [lag, cnt] : ctx.mults[p]) {
                BigInt nu = abs(shift + lag);
                long idx = static_cast<long>(to_i64(nu - wlo));
                const BigRat& gv = g[static_cast<std::size_t>(idx)];
                if (gv != 0) raw += BigRat(cnt) * gv;
            }
            out[static_cast<std::size_t>(s)][p] = raw;
        }
    }
    return out;
}

} // namespace

double eval_hypothesis(const Tower& t, const Hypothesis& hyp, const LevelSet& a,
                       const LevelSet& b, const DynOptions& opt) {
    const int ns = opt.normalize_stage.value_or(default_normalize_stage(t));
    const BigRat total = t.total_measure(ns);
    const BigRat prod = measure(t, a) * measure(t, b) / (total * total);
    if (hyp.sentinel) return to_double(prod);
    const BigRat pw(BigInt(1), BigInt(1) << hyp.m);
    const BigRat corr = correlation(t, a, b, hyp.k, opt).raw / total;
    return to_double(pw * corr + (1 - pw) * prod);
}

std::vector<BigRat> family_correlations(const Tower& t, const Family& family,
                                        const BigInt& n, const DynOptions& opt) {
    DynOptions dyn = opt;
    TableCache local_cache(dyn.table_cap);
    if (!dyn.cache) dyn.cache = &local_cache;
    FamilyCtx ctx = family_ctx(t, family);
    auto grid = family_corr_grid(t, ctx, n, n, dyn);
    return grid.front();
}

FitReport fit_wlp(const Tower& t, const BigInt& n, const Family& family,
                  const FitOptions& opt) {
    if (opt.m_max < 0) throw ConfigError("invalid_argument: m_max must be nonnegative");
    if (opt.k_lo > opt.k_hi) throw ConfigError("invalid_argument: empty k window");
    DynOptions dyn = opt.dyn;
    TableCache local_cache(dyn.table_cap);
    if (!dyn.cache) dyn.cache = &local_cache;
    const int ns = dyn.normalize_stage.value_or(default_normalize_stage(t));
    const BigRat total = t.total_measure(ns);

    FamilyCtx ctx = family_ctx(t, family);
    const std::size_t np = ctx.mults.size();

    std::vector<BigRat> obs_norm(np);
    {
        auto obs = family_corr_grid(t, ctx, n, n, dyn);
        for (std::size_t p = 0; p < np; ++p) obs_norm[p] = obs[0][p] / total;
    }
    std::vector<BigRat> prod(np);
    for (std::size_t p = 0; p < np; ++p) prod[p] = ctx.mu_a[p] * ctx.mu_b[p] / (total * total);

    auto grid = family_corr_grid(t, ctx, opt.k_lo, opt.k_hi, dyn);

    // scan order fixes the tie-breaking: m ascending, then |k| ascending with
    // the nonnegative k first, sentinel last; only strict improvement moves
    std::vector<BigInt> ks;
    ks.push_back(std::max(opt.k_lo, std::min(opt.k_hi, BigInt(0))));
    for (BigInt v = 1;; ++v) {
        bool any = false;
        if (v >= opt.k_lo && v <= opt.k_hi && v != ks[0]) {
            ks.push_back(v);
            any = true;
        }
        if (-v >= opt.k_lo && -v <= opt.k_hi && -v != ks[0]) {
            ks.push_back(-v);
            any = true;
        }
        if (!any && v > std::max(BigInt(abs(opt.k_lo)), BigInt(abs(opt.k_hi)))) break;
    }

    FitReport rep;
    rep.n = n;
    rep.normalize_stage = ns;
    bool have_best = false;
    BigRat best_res;
    Hypothesis best;
    std::vector<BigRat> best_pred;

    auto consider = [&](const Hypothesis& hyp, const std::vector<BigRat>& pred) {
        BigRat res = 0;
        for (std::size_t p = 0; p < np; ++p) {
            BigRat d = obs_norm[p] - pred[p];
            if (d < 0) d = -d;
            if (d > res) res = d;
        }
        if (!have_best || res < best_res) {
            have_best = true;
            best_res = res;
            best = hyp;
            best_pred = pred;
        }
    };

    for (int m = 0; m <= opt.m_max; ++m) {
        const BigRat pw(BigInt(1), BigInt(1) << m);
        for (const BigInt& k : ks) {
            std::vector<BigRat> pred(np);
            const auto& row = grid[static_cast<std::size_t>(to_i64(k - opt.k_lo))];
            for (std::size_t p = 0; p < np; ++p)
                pred[p] = pw * (row[p] / total) + (1 - pw) * prod[p];
            consider({false, m, k}, pred);
        }
    }
    consider({true, 0, 0}, prod);

    rep.best_is_sentinel = best.sentinel;
    rep.sentinel_kind = "theta";
    rep.best_m = best.m;
    rep.best_k = best.k;
    rep.residual_exact = best_res;
    rep.residual = to_double(best_res);
    for (std::size_t p = 0; p < np; ++p)
        rep.per_set.push_back({p, to_double(obs_norm[p]), to_double(best_pred[p])});
    return rep;
}

Example2 example2_decomposition(const Tower& t, int j, const BigInt& k,
                                const DynOptions& opt) {
    (void)opt;
    if (j < 1 || j > t.max_stage())
        throw ConfigError("stage_out_of_range: decomposition needs stages " +
                          std::to_string(j) + " and " + std::to_string(j + 1));
    const BigInt kk = abs(k);
    if (kk > t.height(j))
        throw ConfigError("invalid_argument: |k| must be at most h_" + std::to_string(j));
    Example2 out;
    out.U = make_levelset(t, j + 1, {{mid_time(t, j), t.height(j + 1)}});
    LevelSet upper = refine_once(t, make_levelset(t, j, {{kk, t.height(j)}}));
    out.D = intersect(out.U, upper);
    if (kk >= 1) {
        LevelSet lower = refine_once(t, make_levelset(t, j, {{0, kk - 1}}));
        out.D1 = intersect(out.U, lower);
    } else {
        out.D1.stage = j + 1;
    }
    out.mu_U = measure(t, out.U);
    out.mu_D = measure(t, out.D);
    out.mu_D1 = measure(t, out.D1);
    return out;
}

StageSetGen lower_half_generator(const Tower& t) {
    const Tower* tp = &t;
    return [tp](int j) {
        return make_levelset(*tp, j, {{0, (tp->height(j) + 1) / 2}});
    };
}

std::vector<Lemma2Row> lemma2_probe(const Tower& t, const StageSetGen& d_gen,
                                    const LevelSet& a, const LevelSet& b, int j_lo, int j_hi,
                                    const DynOptions& opt) {
    if (j_lo > j_hi) throw ConfigError("invalid_argument: empty stage range");
    const int ca = std::max(a.stage, b.stage);
    const LevelSet C = intersect(refine_to(t, a, ca), refine_to(t, b, ca));
    const int ns = opt.normalize_stage.value_or(default_normalize_stage(t));
    const BigRat total = t.total_measure(ns);
    const BigRat mu_c = measure(t, C);

    std::vector<Lemma2Row> rows;
    for (int j = j_lo; j <= j_hi; ++j) {
        LevelSet D = d_gen(j);
        if (D.stage != j) throw std::logic_error("lemma2_probe: generator stage mismatch");
        LevelSet TD = apply_power(t, D, 1, opt);
        int sj = std::max(D.stage, TD.stage);
        LevelSet Ds = refine_to(t, D, sj);
        LevelSet TDs = refine_to(t, TD, sj);
        BigRat sym = measure(t, subtract(Ds, TDs)) + measure(t, subtract(TDs, Ds));

        BigRat mu_dc;
        if (j <= ca) {
            mu_dc = measure(t, intersect(refine_to(t, D, ca), C));
        } else {
            BigInt gamma = 1;
            for (int u = ca; u < j; ++u) gamma *= t.stage(u).r;
            BigInt refined_runs = gamma * static_cast<long long>(C.runs.size());
            if (refined_runs <= 200000) {
                mu_dc = measure(t, intersect(D, refine_to(t, C, j)));
            } else if (D.runs.size() == 1 && D.runs[0].first == 0) {
                // prefix-form D: count base-copy positions p with p + x <= m
                if (level_count(C) > 10000)
                    throw Unresolvable(
                        "unresolvable_at_cap: probe set too large for the deep-stage path", j);
                const BigInt& m = D.runs[0].second;
                BigInt cnt = 0;
                for (const Run& run : C.runs)
                    for (BigInt x = run.first; x <= run.second; ++x)
                        cnt += rank_prefix(t, ca, j, m - x);
                mu_dc = BigRat(cnt, t.width_denominator(j));
            } else {
                throw Unresolvable(
                    "unresolvable_at_cap: deep-stage probe needs a prefix-form set", j);
            }
        }
        BigRat dev = mu_dc / total - (measure(t, D) / total) * (mu_c / total);
        if (dev < 0) dev = -dev;
        rows.push_back({j, sym, to_double(dev)});
    }
    return rows;
}

} // namespace rank1
