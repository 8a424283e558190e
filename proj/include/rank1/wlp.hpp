#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rank1/dynamics.hpp"
#include "rank1/levelset.hpp"
#include "rank1/numeric.hpp"

namespace rank1 {

struct WindowRow {
    int j = 0;
    BigInt lo, hi;
    bool clipped = false;
};

// window_j = [ceil(h_{j+1}/2) - h_j, floor(h_{j+1}/2) + h_j], clipped into
// [h_j, h_{j+1}] with a flag when the raw lower bound falls below h_j
std::vector<WindowRow> nonmixing_windows(const Tower& t, int j_lo, int j_hi);
WindowRow nonmixing_window(const Tower& t, int j);

BigInt mid_time(const Tower& t, int j); // ceil(h_{j+1}/2)

// n = mid_time(J) + ... + mid_time(J-m+1) + k, asserting every partial tail
// stays inside its stage's window; throws ConfigError("window_violation")
BigInt cascade_times(const Tower& t, int J, int m, const BigInt& k);

struct Hypothesis {
    bool sentinel = false; // theta (finite measure) or zero (infinite measure)
    int m = 0;
    BigInt k;
};

struct PairFit {
    std::size_t pair_index = 0;
    double observed = 0.0;
    double predicted = 0.0;
};

struct FitReport {
    BigInt n;
    bool best_is_sentinel = false;
    std::string sentinel_kind = "theta";
    int best_m = 0;
    BigInt best_k;
    double residual = 0.0;
    BigRat residual_exact;
    std::vector<PairFit> per_set;
    int normalize_stage = 0;
};

using Family = std::vector<std::pair<LevelSet, LevelSet>>;

// stage-2 levels grouped into 8 consecutive blocks plus 4 alternating-block
// unions; 24 ordered pairs: (S_i,S_i) and (S_i, S_{(i+5) mod 12})
std::vector<LevelSet> reference_sets(const Tower& t);
Family reference_family(const Tower& t);

struct FitOptions {
    int m_max = 4;
    BigInt k_lo = -8, k_hi = 8;
    DynOptions dyn;
};

double eval_hypothesis(const Tower& t, const Hypothesis& hyp, const LevelSet& a,
                       const LevelSet& b, const DynOptions& opt = {});

// raw corr(A_i, B_i, n) for every pair in the family, sharing one g window
std::vector<BigRat> family_correlations(const Tower& t, const Family& family,
                                        const BigInt& n, const DynOptions& opt = {});

FitReport fit_wlp(const Tower& t, const BigInt& n, const Family& family,
                  const FitOptions& opt = {});

struct Example2 {
    LevelSet U, D, D1;
    BigRat mu_U, mu_D, mu_D1;
};

Example2 example2_decomposition(const Tower& t, int j, const BigInt& k,
                                const DynOptions& opt = {});

struct Lemma2Row {
    int j = 0;
    BigRat sym_diff;
    double dev = 0.0;
};

using StageSetGen = std::function<LevelSet(int j)>;

StageSetGen lower_half_generator(const Tower& t);

std::vector<Lemma2Row> lemma2_probe(const Tower& t, const StageSetGen& d_gen,
                                    const LevelSet& a, const LevelSet& b,
                                    int j_lo, int j_hi, const DynOptions& opt = {});

} // namespace rank1
