#include "rank1/levelset.hpp"

#include <algorithm>

namespace rank1 {

std::vector<Run> canonical_runs(std::vector<Run> runs) {
    for (const Run& r : runs)
        if (r.second < r.first)
            throw ConfigError("index_out_of_range: run end before start");
    std::sort(runs.begin(), runs.end());
    std::vector<Run> out;
    for (Run& r : runs) {
        if (!out.empty() && r.first <= out.back().second + 1) {
            if (r.second > out.back().second) out.back().second = std::move(r.second);
        } else {
            out.push_back(std::move(r));
        }
    }
    return out;
}

static void check_stage(const Tower& t, int stage) {
    if (stage < 1 || stage > t.max_stage() + 1)
        throw ConfigError("stage_out_of_range: stage " + std::to_string(stage));
}

LevelSet make_levelset(const Tower& t, int stage, std::vector<Run> runs) {
    check_stage(t, stage);
    LevelSet s;
    s.stage = stage;
    s.runs = canonical_runs(std::move(runs));
    if (!s.runs.empty()) {
        if (s.runs.front().first < 0 || s.runs.back().second > t.height(stage))
            throw ConfigError("index_out_of_range: level outside [0, h_" +
                              std::to_string(stage) + "]");
    }
    return s;
}

LevelSet full_set(const Tower& t, int stage) {
    check_stage(t, stage);
    return LevelSet{stage, {{BigInt(0), t.height(stage)}}};
}

LevelSet base_set(int stage) { return LevelSet{stage, {{BigInt(0), BigInt(0)}}}; }

LevelSet single_level(const Tower& t, int stage, const BigInt& level) {
    return make_levelset(t, stage, {{level, level}});
}

BigInt level_count(const LevelSet& a) {
    BigInt n = 0;
    for (const Run& r : a.runs) n += r.second - r.first + 1;
    return n;
}

BigRat measure(const Tower& t, const LevelSet& a) {
    check_stage(t, a.stage);
    return BigRat(level_count(a), t.width_denominator(a.stage));
}

BigInt min_level(const LevelSet& a) {
    if (a.empty()) throw std::logic_error("min_level of empty set");
    return a.runs.front().first;
}

BigInt max_level(const LevelSet& a) {
    if (a.empty()) throw std::logic_error("max_level of empty set");
    return a.runs.back().second;
}

LevelSet refine_once(const Tower& t, const LevelSet& a) {
    const TowerStage& st = t.stage(a.stage);
    std::vector<Run> out;
    out.reserve(a.runs.size() * static_cast<std::size_t>(st.r));
    // column images stay ordered because offsets increase by at least h+1
    for (const BigInt& o : st.offsets)
        for (const Run& r : a.runs) out.emplace_back(o + r.first, o + r.second);
    LevelSet s;
    s.stage = a.stage + 1;
    s.runs = canonical_runs(std::move(out));
    return s;
}

LevelSet refine_to(const Tower& t, const LevelSet& a, int J) {
    check_stage(t, J);
    if (J < a.stage) throw ConfigError("stage_out_of_range: refine below native stage");
    LevelSet s = a;
    while (s.stage < J) s = refine_once(t, s);
    return s;
}

static LevelSet merge_ops(const LevelSet& a, const LevelSet& b, bool in_a_only,
                          bool in_b_only, bool in_both) {
    if (a.stage != b.stage) throw ConfigError("stage_mismatch");
    LevelSet out;
    out.stage = a.stage;
    std::size_t ia = 0, ib = 0;
    bool have = false;
    BigInt cur_lo, cur_hi;
    auto emit = [&](const BigInt& lo, const BigInt& hi) {
        if (have && lo <= cur_hi + 1) {
            if (hi > cur_hi) cur_hi = hi;
            return;
        }
        if (have) out.runs.emplace_back(cur_lo, cur_hi);
        cur_lo = lo;
        cur_hi = hi;
        have = true;
    };
    // sweep over boundary points of both run lists
    BigInt x;
    bool x_set = false;
    while (ia < a.runs.size() || ib < b.runs.size()) {
        if (!x_set) {
            if (ia < a.runs.size() && ib < b.runs.size())
                x = std::min(a.runs[ia].first, b.runs[ib].first);
            else if (ia < a.runs.size())
                x = a.runs[ia].first;
            else
                x = b.runs[ib].first;
            x_set = true;
        }
        bool ina = ia < a.runs.size() && a.runs[ia].first <= x;
        bool inb = ib < b.runs.size() && b.runs[ib].first <= x;
        // next boundary strictly after x
        BigInt nxt;
        bool nxt_set = false;
        auto consider = [&](const BigInt& v) {
            if (v > x && (!nxt_set || v < nxt)) {
                nxt = v;
                nxt_set = true;
            }
        };
        if (ia < a.runs.size()) {
            consider(a.runs[ia].first);
            consider(a.runs[ia].second + 1);
        }
        if (ib < b.runs.size()) {
            consider(b.runs[ib].first);
            consider(b.runs[ib].second + 1);
        }
        if (!nxt_set) break;
        bool keep = (ina && inb) ? in_both : (ina ? in_a_only : (inb ? in_b_only : false));
        if (keep) emit(x, nxt - 1);
        if (ia < a.runs.size() && a.runs[ia].second + 1 == nxt) ++ia;
        if (ib < b.runs.size() && b.runs[ib].second + 1 == nxt) ++ib;
        x = nxt;
    }
    if (have) out.runs.emplace_back(cur_lo, cur_hi);
    return out;
}

LevelSet intersect(const LevelSet& a, const LevelSet& b) {
    return merge_ops(a, b, false, false, true);
}

LevelSet unite(const LevelSet& a, const LevelSet& b) {
    return merge_ops(a, b, true, true, true);
}

LevelSet subtract(const LevelSet& a, const LevelSet& b) {
    return merge_ops(a, b, true, false, false);
}

LevelSet shift_within(const Tower& t, const LevelSet& a, const BigInt& delta) {
    LevelSet out;
    out.stage = a.stage;
    out.runs.reserve(a.runs.size());
    for (const Run& r : a.runs) out.runs.emplace_back(r.first + delta, r.second + delta);
    if (!out.runs.empty() &&
        (out.runs.front().first < 0 || out.runs.back().second > t.height(a.stage)))
        throw std::logic_error("shift_within out of range");
    return out;
}

} // namespace rank1
