#include "rank1/kernel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rank1 {

static std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    __int128 s = static_cast<__int128>(a) + b;
    if (s > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    if (s < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(s);
}

OffsetTable build_offset_table(const Tower& t, int b, int K, std::size_t size_cap) {
    if (b < 1 || K < b || K > t.max_stage() + 1)
        throw ConfigError("stage_out_of_range: offset table for tower " + std::to_string(K));
    if (!fits_i64(t.height(K)))
        throw Unresolvable("unresolvable_at_cap: tower " + std::to_string(K) +
                               " exceeds the 64-bit level range",
                           K);
    BigInt sz = 1;
    for (int u = b; u < K; ++u) sz *= t.stage(u).r;
    if (sz > static_cast<long long>(size_cap))
        throw Unresolvable("unresolvable_at_cap: offset table for tower " + std::to_string(K) +
                               " needs " + sz.str() + " entries",
                           K);
    OffsetTable tab;
    tab.base_stage = b;
    tab.tower = K;
    tab.pos.assign(1, 0);
    for (int u = b; u < K; ++u) {
        const TowerStage& st = t.stage(u);
        std::vector<std::int64_t> next;
        next.reserve(tab.pos.size() * static_cast<std::size_t>(st.r));
        // column strides exceed every lower-stage contribution, so the
        // concatenation below is already sorted
        for (const BigInt& o : st.offsets) {
            std::int64_t ov = to_i64(o);
            for (std::int64_t p : tab.pos) next.push_back(ov + p);
        }
        tab.pos = std::move(next);
    }
    tab.max_pos = tab.pos.back();
    return tab;
}

static LagWindow lag_window_range(const std::vector<std::int64_t>& P, std::size_t i_begin,
                                  std::size_t i_end, std::int64_t w0, std::int64_t w1) {
    LagWindow out;
    out.counts.assign(static_cast<std::size_t>(w1 - w0 + 1), 0);
    const std::size_t n = P.size();
    std::size_t lo = std::lower_bound(P.begin(), P.end(), sat_add(P[i_begin], w0)) - P.begin();
    std::size_t hi = std::upper_bound(P.begin(), P.end(), sat_add(P[i_begin], w1)) - P.begin();
    for (std::size_t i = i_begin; i < i_end; ++i) {
        const __int128 tlo = static_cast<__int128>(P[i]) + w0;
        const __int128 thi = static_cast<__int128>(P[i]) + w1;
        while (lo < n && P[lo] < tlo) ++lo;
        if (hi < lo) hi = lo;
        while (hi < n && P[hi] <= thi) ++hi;
        out.below += static_cast<std::int64_t>(lo);
        for (std::size_t j = lo; j < hi; ++j)
            ++out.counts[static_cast<std::size_t>(P[j] - P[i] - w0)];
    }
    return out;
}

LagWindow lag_window_serial(const OffsetTable& tab, std::int64_t w0, std::int64_t w1) {
    if (w1 < w0) throw std::logic_error("lag_window: empty window");
    LagWindow out;
    out.counts.assign(static_cast<std::size_t>(w1 - w0 + 1), 0);
    const auto& P = tab.pos;
    const std::int64_t n = static_cast<std::int64_t>(P.size());
    if (n == 0) return out;
    if (w0 > tab.max_pos) {
        out.below = n * n;
        return out;
    }
    if (w1 < -tab.max_pos) return out;
    return lag_window_range(P, 0, P.size(), w0, w1);
}

LagWindow lag_window_parallel(const OffsetTable& tab, std::int64_t w0, std::int64_t w1,
                              int threads) {
#ifdef _OPENMP
    if (w1 < w0) throw std::logic_error("lag_window: empty window");
    LagWindow out;
    out.counts.assign(static_cast<std::size_t>(w1 - w0 + 1), 0);
    const auto& P = tab.pos;
    const std::int64_t n = static_cast<std::int64_t>(P.size());
    if (n == 0) return out;
    if (w0 > tab.max_pos) {
        out.below = n * n;
        return out;
    }
    if (w1 < -tab.max_pos) return out;
    const std::size_t nchunk = std::max(1, threads);
    std::vector<LagWindow> parts(nchunk);
#pragma omp parallel for num_threads(static_cast<int>(nchunk)) schedule(static, 1)
    for (std::size_t c = 0; c < nchunk; ++c) {
        std::size_t b = P.size() * c / nchunk;
        std::size_t e = P.size() * (c + 1) / nchunk;
        if (b < e) parts[c] = lag_window_range(P, b, e, w0, w1);
    }
    for (const LagWindow& part : parts) {
        if (part.counts.empty()) continue;
        out.below += part.below;
        for (std::size_t v = 0; v < out.counts.size(); ++v) out.counts[v] += part.counts[v];
    }
    return out;
#else
    (void)threads;
    return lag_window_serial(tab, w0, w1);
#endif
}

LagWindow lag_window(const OffsetTable& tab, std::int64_t w0, std::int64_t w1, int threads) {
    if (threads > 1) return lag_window_parallel(tab, w0, w1, threads);
    return lag_window_serial(tab, w0, w1);
}

AnchoredCum::AnchoredCum(const OffsetTable& tab, const BigInt& x0, long width, int threads) {
    cum_.assign(static_cast<std::size_t>(width), 0);
    point_.assign(static_cast<std::size_t>(width), 0);
    const std::int64_t n = static_cast<std::int64_t>(tab.pos.size());
    const std::int64_t total = n * n;
    const BigInt m(tab.max_pos);
    const BigInt x1 = x0 + (width - 1);
    if (x1 < -m) return;
    if (x0 > m) {
        std::fill(cum_.begin(), cum_.end(), total);
        return;
    }
    long vlo = x0 < -m ? static_cast<long>(to_i64(-m - x0)) : 0;
    long vhi = x1 > m ? static_cast<long>(width - 1 - to_i64(x1 - m)) : width - 1;
    std::int64_t w0 = to_i64(x0 + vlo);
    std::int64_t w1 = to_i64(x0 + vhi);
    LagWindow lw = lag_window(tab, w0, w1, threads);
    std::int64_t running = lw.below;
    for (long v = 0; v < width; ++v) {
        if (v < vlo) continue; // cum 0, point 0
        if (v > vhi) {
            cum_[static_cast<std::size_t>(v)] = total;
            continue;
        }
        std::int64_t p = lw.counts[static_cast<std::size_t>(v - vlo)];
        running += p;
        point_[static_cast<std::size_t>(v)] = p;
        cum_[static_cast<std::size_t>(v)] = running;
    }
}

BigInt rank_prefix(const Tower& t, int b, int K, const BigInt& x) {
    if (b < 1 || K < b || K > t.max_stage() + 1)
        throw ConfigError("stage_out_of_range: rank_prefix tower " + std::to_string(K));
    if (x < 0) return 0;
    if (K == b) return 1;
    std::vector<BigInt> maxpos(static_cast<std::size_t>(K + 1));
    std::vector<BigInt> size(static_cast<std::size_t>(K + 1));
    maxpos[static_cast<std::size_t>(b)] = 0;
    size[static_cast<std::size_t>(b)] = 1;
    for (int u = b + 1; u <= K; ++u) {
        const TowerStage& st = t.stage(u - 1);
        maxpos[static_cast<std::size_t>(u)] =
            maxpos[static_cast<std::size_t>(u - 1)] + st.offsets.back();
        size[static_cast<std::size_t>(u)] = size[static_cast<std::size_t>(u - 1)] * st.r;
    }
    BigInt res = 0;
    BigInt cx = x;
    for (int u = K; u > b; --u) {
        if (cx < 0) return res;
        if (cx >= maxpos[static_cast<std::size_t>(u)]) return res + size[static_cast<std::size_t>(u)];
        const auto& offs = t.stage(u - 1).offsets;
        auto it = std::upper_bound(offs.begin(), offs.end(), cx);
        --it; // offs[0] == 0 <= cx
        res += BigInt(it - offs.begin()) * size[static_cast<std::size_t>(u - 1)];
        cx -= *it;
    }
    return res + 1; // landed inside one copy of the base level (position 0), cx >= 0
}

std::vector<BigRat> g_window(const Tower& t, const OffsetTable& tab, const BigInt& nu0,
                             const BigInt& nu1, const GWindowOptions& opt) {
    GWindowStats stats;
    return g_window(t, tab, nu0, nu1, opt, stats);
}

std::vector<BigRat> g_window(const Tower& t, const OffsetTable& tab, const BigInt& nu0,
                             const BigInt& nu1, const GWindowOptions& opt,
                             GWindowStats& stats) {
    const int K = tab.tower;
    const BigInt& hK = t.height(K);
    if (nu0 < 0 || nu1 < nu0 || nu1 > hK)
        throw std::logic_error("g_window: window outside [0, h_K]");
    const long width = static_cast<long>(to_i64(nu1 - nu0 + 1));
    std::vector<BigRat> res(static_cast<std::size_t>(width));
    const BigInt& WK = t.width_denominator(K);
    stats.last_stage = K;
    const Kind kind = t.spec().kind;
    const bool explicit_kind = kind == Kind::double_sidon || kind == Kind::custom;

    if (nu0 <= tab.max_pos) {
        LagWindow lw = lag_window(tab, to_i64(nu0),
                                  to_i64(std::min(nu1, BigInt(tab.max_pos))), opt.threads);
        for (std::size_t v = 0; v < lw.counts.size(); ++v)
            if (lw.counts[v]) res[v] += BigRat(BigInt(lw.counts[v]), WK);
    }

    BigInt S = 0;
    BigInt WL = WK;
    for (long depth = 1;; ++depth) {
        if (depth > opt.depth_cap)
            throw Unresolvable("unresolvable_at_cap: cascade depth cap at tower " +
                                   std::to_string(K),
                               K + static_cast<int>(depth) - 1);
        const int D = K + static_cast<int>(depth) - 1;
        const BigInt beta1 = nu1 - (hK + 1) - S;
        if (beta1 < -tab.max_pos) break;
        const VirtualHeader hdr = t.header(D);
        WL *= hdr.r;
        const BigInt beta0 = nu0 - (hK + 1) - S;
        if (explicit_kind) {
            const TowerStage& st = t.stage(D); // header() already guards D <= max_stage
            for (std::int64_t i = 0; i + 1 < st.r; ++i) {
                AnchoredCum ac(tab, beta0 - st.spacers[static_cast<std::size_t>(i)], width,
                               opt.threads);
                for (long v = 0; v < width; ++v) {
                    std::int64_t c = ac.point(v);
                    if (c) {
                        res[static_cast<std::size_t>(v)] += BigRat(BigInt(c), WL);
                        stats.last_stage = std::max(stats.last_stage, D + 1);
                    }
                }
            }
        } else if (kind == Kind::double_staircase) {
            AnchoredCum a1(tab, beta0, width, opt.threads);
            AnchoredCum a2(tab, beta0 - hdr.r_half, width + 1, opt.threads);
            for (long v = 0; v < width; ++v) {
                std::int64_t c = 2 * (a1.cum(v) - a2.cum(v)) - a2.point(v + 1);
                if (c) {
                    res[static_cast<std::size_t>(v)] += BigRat(BigInt(c), WL);
                    stats.last_stage = std::max(stats.last_stage, D + 1);
                }
            }
        } else { // staircase
            AnchoredCum a1(tab, beta0, width, opt.threads);
            AnchoredCum a2(tab, beta0 - (hdr.r - 1), width, opt.threads);
            for (long v = 0; v < width; ++v) {
                std::int64_t c = a1.cum(v) - a2.cum(v);
                if (c) {
                    res[static_cast<std::size_t>(v)] += BigRat(BigInt(c), WL);
                    stats.last_stage = std::max(stats.last_stage, D + 1);
                }
            }
        }
        S += hdr.last_spacer;
    }
    return res;
}

std::shared_ptr<const OffsetTable> TableCache::get(const Tower& t, int b, int K) {
    const std::pair<int, int> key{b, K};
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].first == key) {
            auto e = entries_[i];
            entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
            entries_.push_back(e);
            return e.second;
        }
    }
    auto tab = std::make_shared<const OffsetTable>(build_offset_table(t, b, K, size_cap_));
    entries_.emplace_back(key, tab);
    if (entries_.size() > 2) entries_.erase(entries_.begin());
    return tab;
}

} // namespace rank1
