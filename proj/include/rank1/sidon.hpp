#pragma once

#include <cstdint>
#include <vector>

#include "rank1/construction.hpp"
#include "rank1/numeric.hpp"
#include "rank1/wlp.hpp"

namespace rank1 {

// double Sidon spec: explicit doubled spacer vectors grown by the minimal
// rule s_j(1) = G*h_j, s_j(i+1) = G*(accumulated column height so far)
ConstructionSpec sidon_spec(const BigInt& h1, const std::vector<long>& r_half_schedule,
                            const BigInt& growth, int max_stage);

struct PSet {
    std::int64_t h = 0;
    double eps = 0.0;
    std::vector<std::int64_t> elems; // p_d = d*h + d*(d-1)/2, d = 1..floor((1-eps)h)
};

PSet p_set(std::int64_t h, double eps); // throws ConfigError("empty_pset")

std::int64_t p_overlap(const PSet& p, std::int64_t m); // |P ∩ (P+m)|
std::int64_t p_overlap(std::int64_t h, double eps, std::int64_t m);

struct OverlapProfile {
    std::int64_t m_lo = 0, m_hi = 0;
    std::vector<std::int64_t> counts; // counts[m - m_lo]
    std::int64_t max_m = 0;
    std::int64_t max_count = 0; // max over m in range with m != 0
};

OverlapProfile p_overlap_profile(std::int64_t h, double eps, std::int64_t m_lo,
                                 std::int64_t m_hi);

// unnormalized fit: hypotheses 2^{-m} corr_raw(A,B,k) plus the zero sentinel
FitReport sidon_wlp_check(const Tower& t, const BigInt& n, const Family& family,
                          const FitOptions& opt = {});

} // namespace rank1
