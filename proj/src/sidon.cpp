#include "rank1/sidon.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace rank1 {

namespace {

// Exact rational for the decimal literal a double round-trips to, so a
// command-line "0.1" means 1/10 rather than the nearest binary fraction.
BigRat decimal_value(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    std::string s(buf, res.ptr);
    int exp10 = 0;
    std::size_t epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stoi(s.substr(epos + 1));
        s.erase(epos);
    }
    std::size_t dot = s.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<int>(s.size() - dot - 1);
        s.erase(dot, 1);
    }
    // strip leading zeros so the big-integer parser cannot treat them as an
    // octal prefix ("025" would otherwise parse as 21)
    const bool neg = !s.empty() && s[0] == '-';
    std::string digits = s.substr(neg ? 1 : 0);
    const std::size_t nz = digits.find_first_not_of('0');
    digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
    BigInt num(digits);
    if (neg) num = -num;
    BigInt den(1);
    for (int i = 0; i < exp10; ++i) num *= 10;
    for (int i = 0; i > exp10; --i) den *= 10;
    return BigRat(num, den);
}

} // namespace

ConstructionSpec sidon_spec(const BigInt& h1, const std::vector<long>& r_half_schedule,
                            const BigInt& growth, int max_stage) {
    if (growth < 2) throw ConfigError("invalid_argument: growth factor must be at least 2");
    if (max_stage < 1) throw ConfigError("invalid_argument: max_stage must be positive");
    if (static_cast<int>(r_half_schedule.size()) < max_stage)
        throw ConfigError("invalid_argument: column schedule shorter than max_stage");
    CuttingRule cutting;
    cutting.name = CuttingRule::Name::explicit_list;
    SpacerRule spacers;
    spacers.growth = growth;
    BigInt h = h1;
    for (int j = 1; j <= max_stage; ++j) {
        long rh = r_half_schedule[static_cast<std::size_t>(j - 1)];
        if (rh < 1) throw ConfigError("invalid_argument: column counts must be positive");
        std::vector<BigInt> s(static_cast<std::size_t>(rh));
        s[0] = growth * h;
        BigInt top = (h + 1) + s[0];
        for (long i = 1; i < rh; ++i) {
            top += h + 1;
            s[static_cast<std::size_t>(i)] = growth * top;
            top += s[static_cast<std::size_t>(i)];
        }
        std::vector<BigInt> doubled = s;
        doubled.insert(doubled.end(), s.begin(), s.end());
        cutting.values.push_back(2 * rh);
        spacers.vectors.push_back(doubled);
        h = next_height(h, doubled);
    }
    return make_spec(Kind::double_sidon, h1, cutting, spacers, max_stage);
}

PSet p_set(std::int64_t h, double eps) {
    if (h < 1) throw ConfigError("invalid_argument: h must be positive");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw ConfigError("invalid_argument: eps must lie in (0, 1)");
    // floor((1-eps)h) with eps read as the decimal literal it prints as
    BigRat bound = (BigRat(1) - decimal_value(eps)) * h;
    BigInt d_max = numerator(bound) / denominator(bound);
    if (d_max < 1) throw ConfigError("empty_pset: no admissible block lengths");
    PSet p;
    p.h = h;
    p.eps = eps;
    std::int64_t dm = to_i64(d_max);
    p.elems.reserve(static_cast<std::size_t>(dm));
    for (std::int64_t d = 1; d <= dm; ++d)
        p.elems.push_back(d * h + d * (d - 1) / 2);
    return p;
}

std::int64_t p_overlap(const PSet& p, std::int64_t m) {
    if (m < 0) m = -m;
    const auto& e = p.elems;
    std::int64_t cnt = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        while (j < e.size() && e[j] < e[i] + m) ++j;
        if (j < e.size() && e[j] == e[i] + m) ++cnt;
    }
    return cnt;
}

std::int64_t p_overlap(std::int64_t h, double eps, std::int64_t m) {
    return p_overlap(p_set(h, eps), m);
}

OverlapProfile p_overlap_profile(std::int64_t h, double eps, std::int64_t m_lo,
                                 std::int64_t m_hi) {
    if (m_lo < 0 || m_hi < m_lo)
        throw ConfigError("invalid_argument: profile range must satisfy 0 <= m_lo <= m_hi");
    PSet p = p_set(h, eps);
    const std::int64_t pmax = p.elems.back();
    std::vector<std::int32_t> hist(static_cast<std::size_t>(pmax) + 1, 0);
    for (std::size_t i = 0; i < p.elems.size(); ++i)
        for (std::size_t j = i + 1; j < p.elems.size(); ++j)
            ++hist[static_cast<std::size_t>(p.elems[j] - p.elems[i])];
    OverlapProfile out;
    out.m_lo = m_lo;
    out.m_hi = m_hi;
    out.counts.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        std::int64_t c;
        if (m == 0)
            c = static_cast<std::int64_t>(p.elems.size());
        else if (m <= pmax)
            c = hist[static_cast<std::size_t>(m)];
        else
            c = 0;
        out.counts.push_back(c);
        if (m != 0 && c > out.max_count) {
            out.max_count = c;
            out.max_m = m;
        }
    }
    return out;
}

FitReport sidon_wlp_check(const Tower& t, const BigInt& n, const Family& family,
                          const FitOptions& opt) {
    if (opt.m_max < 0) throw ConfigError("invalid_argument: m_max must be nonnegative");
    if (opt.k_lo > opt.k_hi) throw ConfigError("invalid_argument: empty k window");
    DynOptions dyn = opt.dyn;
    TableCache cache(dyn.table_cap);
    if (!dyn.cache) dyn.cache = &cache;

    std::vector<std::vector<BigRat>> obs, grid;
    std::vector<BigInt> kvals;
    for (BigInt k = opt.k_lo; k <= opt.k_hi; ++k) kvals.push_back(k);
    obs.assign(1, {});
    grid.assign(kvals.size(), {});
    for (const auto& [a, b] : family) {
        obs[0].push_back(correlation(t, a, b, n, dyn).raw);
        for (std::size_t i = 0; i < kvals.size(); ++i)
            grid[i].push_back(correlation(t, a, b, kvals[i], dyn).raw);
    }
    const std::size_t np = family.size();

    FitReport rep;
    rep.n = n;
    rep.normalize_stage = dyn.normalize_stage.value_or(default_normalize_stage(t));
    bool have_best = false;
    BigRat best_res;
    Hypothesis best;
    std::vector<BigRat> best_pred;
    auto consider = [&](const Hypothesis& hyp, const std::vector<BigRat>& pred) {
        BigRat res = 0;
        for (std::size_t p = 0; p < np; ++p) {
            BigRat d = obs[0][p] - pred[p];
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
    for (int m = 0; m <= opt.m_max; ++m) {
        const BigRat pw(BigInt(1), BigInt(1) << m);
        for (const BigInt& k : ks) {
            const auto& row = grid[static_cast<std::size_t>(to_i64(k - opt.k_lo))];
            std::vector<BigRat> pred(np);
            for (std::size_t p = 0; p < np; ++p) pred[p] = pw * row[p];
            consider({false, m, k}, pred);
        }
    }
    consider({true, 0, 0}, std::vector<BigRat>(np, BigRat(0)));

    rep.best_is_sentinel = best.sentinel;
    rep.sentinel_kind = "zero";
    rep.best_m = best.m;
    rep.best_k = best.k;
    rep.residual_exact = best_res;
    rep.residual = to_double(best_res);
    for (std::size_t p = 0; p < np; ++p)
        rep.per_set.push_back({p, to_double(obs[0][p]), to_double(best_pred[p])});
    return rep;
}

} // namespace rank1
