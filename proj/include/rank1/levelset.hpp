#pragma once

#include <utility>
#include <vector>

#include "rank1/construction.hpp"
#include "rank1/numeric.hpp"

namespace rank1 {

using Run = std::pair<BigInt, BigInt>; // closed interval [a, b]

// Union of levels of one tower stage, canonical run-length form: runs sorted,
// disjoint, maximal (adjacent runs merged), indices within [0, h_stage].
struct LevelSet {
    int stage = 1;
    std::vector<Run> runs;

    bool empty() const { return runs.empty(); }
    bool operator==(const LevelSet& o) const = default;
};

// canonicalize arbitrary runs (sorting, merging overlap and adjacency)
std::vector<Run> canonical_runs(std::vector<Run> runs);

// valid stages for sets are 1..max_stage+1 (the deepest representable tower)
LevelSet make_levelset(const Tower& t, int stage, std::vector<Run> runs);
LevelSet full_set(const Tower& t, int stage);
LevelSet base_set(int stage);
LevelSet single_level(const Tower& t, int stage, const BigInt& level);

BigInt level_count(const LevelSet& a);
BigRat measure(const Tower& t, const LevelSet& a);
BigInt min_level(const LevelSet& a); // requires non-empty
BigInt max_level(const LevelSet& a); // requires non-empty

LevelSet refine_once(const Tower& t, const LevelSet& a);
LevelSet refine_to(const Tower& t, const LevelSet& a, int J);

LevelSet intersect(const LevelSet& a, const LevelSet& b);
LevelSet unite(const LevelSet& a, const LevelSet& b);
LevelSet subtract(const LevelSet& a, const LevelSet& b);

// shift every run by delta within [0, h]; caller guarantees no range violation
LevelSet shift_within(const Tower& t, const LevelSet& a, const BigInt& delta);

} // namespace rank1
