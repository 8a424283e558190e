#include "rank1/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace rank1 {

int default_stage_cap(const Tower& t) { return t.max_stage() + 1; }
int default_normalize_stage(const Tower& t) { return t.max_stage() + 1; }

LevelSet apply_power(const Tower& t, const LevelSet& a, const BigInt& n,
                     const DynOptions& opt) {
    if (a.empty() || n == 0) return make_levelset(t, a.stage, a.runs);
    int cap = std::min(opt.stage_cap.value_or(default_stage_cap(t)), t.max_stage() + 1);
    if (a.stage > cap)
        throw ConfigError("stage_out_of_range: set lives past the stage cap");
    if (n < 0) {
        // min level is invariant under refinement (offset 0 column), so a
        // negative power resolves at the native stage or not at all
        if (min_level(a) + n < 0)
            throw Unresolvable("unresolvable_at_cap: T^n underflows the first column for n = " +
                                   n.str(),
                               a.stage);
        return shift_within(t, a, n);
    }
    // hopeless shifts would force a full refinement cascade before hitting the
    // cap; every level of the deepest tower violates already, so bail now
    if (n > t.height(cap))
        throw Unresolvable("unresolvable_at_cap: T^n needs towers past stage " +
                               std::to_string(cap),
                           cap);
    std::map<int, std::vector<Run>> landed;
    std::vector<std::pair<int, std::vector<Run>>> work{{a.stage, a.runs}};
    while (!work.empty()) {
        auto [j, runs] = std::move(work.back());
        work.pop_back();
        const BigInt& h = t.height(j);
        const BigInt safe_top = h - n; // levels <= safe_top stay inside tower j
        std::vector<Run> viol;
        for (const Run& run : runs) {
            if (run.first <= safe_top) {
                BigInt hi = std::min(run.second, safe_top);
                landed[j].emplace_back(run.first + n, hi + n);
            }
            if (run.second > safe_top) {
                viol.emplace_back(std::max(run.first, BigInt(safe_top + 1)), run.second);
            }
        }
        if (viol.empty()) continue;
        if (j >= cap)
            throw Unresolvable("unresolvable_at_cap: T^n needs towers past stage " +
                                   std::to_string(cap),
                               cap);
        LevelSet part;
        part.stage = j;
        part.runs = std::move(viol);
        LevelSet refined = refine_once(t, part);
        work.emplace_back(j + 1, std::move(refined.runs));
    }
    int K = landed.rbegin()->first;
    LevelSet out;
    out.stage = K;
    std::size_t budget = opt.run_cap;
    for (auto& [j, runs] : landed) {
        LevelSet part = make_levelset(t, j, runs);
        while (part.stage < K) {
            if (part.runs.size() > budget)
                throw Unresolvable("unresolvable_at_cap: refined representation exceeds the run cap",
                                   part.stage);
            part = refine_once(t, part);
        }
        out.runs.insert(out.runs.end(), part.runs.begin(), part.runs.end());
    }
    return make_levelset(t, K, out.runs);
}

std::map<BigInt, BigInt> lag_multiplicities(const LevelSet& a, const LevelSet& b) {
    if (a.stage != b.stage)
        throw std::logic_error("lag_multiplicities: sets at different stages");
    std::map<BigInt, BigInt> mult;
    for (const Run& ra : a.runs) {
        for (const Run& rb : b.runs) {
            const BigInt lo = ra.first - rb.second;
            const BigInt hi = ra.second - rb.first;
            for (BigInt l = lo; l <= hi; ++l) {
                BigInt c = std::min(BigInt(ra.second - l), rb.second) -
                           std::max(BigInt(ra.first - l), rb.first) + 1;
                if (c > 0) mult[l] += c;
            }
        }
    }
    return mult;
}

namespace {

struct KernelPlan {
    bool feasible = false;
    std::string why;
    int common_stage = 1;
    int work_tower = 1;
    BigInt nu_lo, nu_hi; // signed lag range
};

KernelPlan plan_kernel(const Tower& t, const LevelSet& a, const LevelSet& b,
                       const BigInt& n, const DynOptions& opt) {
    KernelPlan p;
    p.common_stage = std::max(a.stage, b.stage);
    const int c = p.common_stage;
    BigInt span = (max_level(a) - min_level(a)) + (max_level(b) - min_level(b)) + 1;
    if (span > opt.corr_window_cap) {
        p.why = "lag window wider than corr_window_cap";
        return p;
    }
    p.nu_lo = n + min_level(a) - max_level(b);
    p.nu_hi = n + max_level(a) - min_level(b);
    const BigInt alo = abs(p.nu_lo), ahi = abs(p.nu_hi);
    BigInt numax = std::max(alo, ahi);
    int K = 0;
    for (int cand = c; cand <= t.max_stage() + 1; ++cand) {
        if (t.height(cand) >= numax) {
            K = cand;
            break;
        }
    }
    if (K == 0) {
        p.why = "no representable tower reaches the lag range";
        return p;
    }
    BigInt sz = 1;
    for (int u = c; u < K; ++u) sz *= t.stage(u).r;
    if (sz > static_cast<long long>(opt.table_cap)) {
        p.why = "offset table for tower " + std::to_string(K) + " exceeds table_cap";
        return p;
    }
    p.work_tower = K;
    p.feasible = true;
    return p;
}

BigRat kernel_eval(const Tower& t, const LevelSet& a, const LevelSet& b, const BigInt& n,
                   const KernelPlan& plan, const DynOptions& opt, int* working_stage) {
    const int c = plan.common_stage;
    LevelSet A = refine_to(t, a, c);
    LevelSet B = refine_to(t, b, c);
    auto mult = lag_multiplicities(A, B);
    // fold to |nu| since g(-nu) = g(nu)
    BigInt wlo, whi;
    if (plan.nu_lo >= 0) {
        wlo = plan.nu_lo;
        whi = plan.nu_hi;
    } else if (plan.nu_hi <= 0) {
        wlo = -plan.nu_hi;
        whi = -plan.nu_lo;
    } else {
        wlo = 0;
        whi = std::max(BigInt(-plan.nu_lo), plan.nu_hi);
    }
    TableCache local_cache(opt.table_cap);
    TableCache& cache = opt.cache ? *opt.cache : local_cache;
    auto tab = cache.get(t, c, plan.work_tower);
    GWindowOptions gopt;
    gopt.depth_cap = opt.depth_cap;
    gopt.threads = opt.threads;
    GWindowStats stats;
    std::vector<BigRat> g = g_window(t, *tab, wlo, whi, gopt, stats);
    BigRat raw = 0;
    for (const auto& [lag, cnt] : mult) {
        BigInt nu = abs(n + lag);
        long idx = static_cast<long>(to_i64(nu - wlo));
        const BigRat& gv = g[static_cast<std::size_t>(idx)];
        if (gv != 0) raw += BigRat(cnt) * gv;
    }
    if (working_stage) *working_stage = stats.last_stage;
    return raw;
}

} // namespace

BigRat correlation_raw_kernel(const Tower& t, const LevelSet& a, const LevelSet& b,
                              const BigInt& n, const DynOptions& opt, int* working_stage) {
    KernelPlan plan = plan_kernel(t, a, b, n, opt);
    if (!plan.feasible)
        throw Unresolvable("unresolvable_at_cap: kernel route infeasible (" + plan.why + ")",
                           t.max_stage() + 1);
    return kernel_eval(t, a, b, n, plan, opt, working_stage);
}

BigRat correlation_raw_levelsets(const Tower& t, const LevelSet& a, const LevelSet& b,
                                 const BigInt& n, const DynOptions& opt, int* working_stage) {
    LevelSet ta = apply_power(t, a, n, opt);
    int c = std::max(ta.stage, b.stage);
    LevelSet x = intersect(refine_to(t, ta, c), refine_to(t, b, c));
    if (working_stage) *working_stage = c;
    return measure(t, x);
}

CorrelationRecord correlation(const Tower& t, const LevelSet& a, const LevelSet& b,
                              const BigInt& n, const DynOptions& opt) {
    CorrelationRecord rec;
    rec.n = n;
    rec.normalize_stage = opt.normalize_stage.value_or(default_normalize_stage(t));
    const BigRat total = t.total_measure(rec.normalize_stage);
    const BigRat mu_a = measure(t, a);
    const BigRat mu_b = measure(t, b);
    rec.product_term = to_double(mu_a * mu_b / (total * total));
    if (a.empty() || b.empty()) {
        rec.raw = 0;
        rec.working_stage = std::max(a.stage, b.stage);
    } else {
        KernelPlan plan = plan_kernel(t, a, b, n, opt);
        if (plan.feasible) {
            rec.raw = kernel_eval(t, a, b, n, plan, opt, &rec.working_stage);
        } else {
            rec.raw = correlation_raw_levelsets(t, a, b, n, opt, &rec.working_stage);
        }
    }
    rec.normalized = to_double(rec.raw / total);
    rec.deviation = rec.normalized - rec.product_term;
    return rec;
}

std::vector<ScanEntry> correlation_scan(const Tower& t, const LevelSet& a, const LevelSet& b,
                                        const std::vector<BigInt>& ns, const DynOptions& opt) {
    TableCache local_cache(opt.table_cap);
    DynOptions o = opt;
    if (!o.cache) o.cache = &local_cache;
    std::vector<ScanEntry> out;
    out.reserve(ns.size());
    for (const BigInt& n : ns) {
        ScanEntry e;
        e.n = n;
        try {
            e.record = correlation(t, a, b, n, o);
        } catch (const Unresolvable& ex) {
            e.error = ex.what();
        } catch (const ConfigError& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

BigRat avg_correlation(const Tower& t, const LevelSet& a, const LevelSet& b, const BigInt& d,
                       long r, const BigInt& base_shift, const DynOptions& opt) {
    if (r < 1) throw ConfigError("invalid_argument: averaging length must be positive");
    TableCache local_cache(opt.table_cap);
    DynOptions o = opt;
    if (!o.cache) o.cache = &local_cache;
    BigRat sum = 0;
    for (long i = 1; i <= r; ++i) {
        sum += correlation(t, a, b, base_shift + d * i, o).raw;
    }
    return sum / r;
}

} // namespace rank1
