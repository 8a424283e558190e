#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "rank1/construction.hpp"
#include "rank1/numeric.hpp"

namespace rank1 {

// Sorted positions of all copies of the tower-b base level inside tower K
// (Minkowski sum of the column offsets of stages b..K-1). Positions fit in
// int64 whenever h_K does; the builder enforces both that and a size cap.
struct OffsetTable {
    int base_stage = 1;
    int tower = 1;
    std::vector<std::int64_t> pos;
    std::int64_t max_pos = 0;

    std::size_t size() const { return pos.size(); }
};

OffsetTable build_offset_table(const Tower& t, int b, int K, std::size_t size_cap);

// One two-pointer pass: counts[v] = #{(p,q) in pos^2 : q - p = w0 + v} for
// v in [0, w1-w0], and below = #{(p,q) : q - p < w0}. Serial reference and
// OpenMP variants are bit-identical.
struct LagWindow {
    std::vector<std::int64_t> counts;
    std::int64_t below = 0;
};

LagWindow lag_window_serial(const OffsetTable& tab, std::int64_t w0, std::int64_t w1);
LagWindow lag_window_parallel(const OffsetTable& tab, std::int64_t w0, std::int64_t w1,
                              int threads);
LagWindow lag_window(const OffsetTable& tab, std::int64_t w0, std::int64_t w1,
                     int threads);

// Cumulative and point pair-lag counts over a contiguous BigInt argument
// window [x0, x0+width-1], with saturation outside [-max_pos, max_pos].
class AnchoredCum {
public:
    AnchoredCum(const OffsetTable& tab, const BigInt& x0, long width, int threads);

    // C(x0+v) = #{(p,q): q-p <= x0+v}
    std::int64_t cum(long v) const { return cum_[static_cast<std::size_t>(v)]; }
    // N(x0+v)
    std::int64_t point(long v) const { return point_[static_cast<std::size_t>(v)]; }

private:
    std::vector<std::int64_t> cum_;
    std::vector<std::int64_t> point_;
};

// #{p in pos : p <= x} for the base-copy table of tower K, computed by
// stage-descent without materializing the table (unique straddling column
// per stage since all lower-stage contributions stay below one column gap).
BigInt rank_prefix(const Tower& t, int b, int K, const BigInt& x);

struct GWindowOptions {
    long depth_cap = 10000;
    int threads = 1;
};

// g[v] = mu(T^(nu0+v) L0 ∩ L0) for the tower-b base level L0, exact; requires
// 0 <= nu0 and nu1 <= h_K of the table's tower. Cascade bookkeeping walks
// virtual stage headers past the built range.
std::vector<BigRat> g_window(const Tower& t, const OffsetTable& tab,
                             const BigInt& nu0, const BigInt& nu1,
                             const GWindowOptions& opt = {});

// deepest stage that contributed a nonzero cascade term in the last g_window
// call is reported through this struct when a caller wants it
struct GWindowStats {
    int last_stage = 0;
};

std::vector<BigRat> g_window(const Tower& t, const OffsetTable& tab,
                             const BigInt& nu0, const BigInt& nu1,
                             const GWindowOptions& opt, GWindowStats& stats);

// Shared cache of offset tables keyed by (base stage, tower); keeps the two
// most recently used tables to bound memory.
class TableCache {
public:
    explicit TableCache(std::size_t size_cap = 200000000) : size_cap_(size_cap) {}
    std::shared_ptr<const OffsetTable> get(const Tower& t, int b, int K);
    std::size_t size_cap() const { return size_cap_; }

private:
    std::size_t size_cap_;
    std::vector<std::pair<std::pair<int, int>, std::shared_ptr<const OffsetTable>>> entries_;
};

} // namespace rank1
