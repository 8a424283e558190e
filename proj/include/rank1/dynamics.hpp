#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rank1/kernel.hpp"
#include "rank1/levelset.hpp"
#include "rank1/numeric.hpp"

namespace rank1 {

struct CorrelationRecord {
    BigInt n;
    BigRat raw;
    double normalized = 0.0;
    double product_term = 0.0;
    double deviation = 0.0;
    int working_stage = 0;
    int normalize_stage = 0;
};

struct DynOptions {
    // largest tower index any representation may use (default: deepest
    // representable tower, max_stage+1)
    std::optional<int> stage_cap;
    std::optional<int> normalize_stage;
    long corr_window_cap = 4096;   // widest lag window routed to the kernel
    std::size_t table_cap = 200000000;
    std::size_t run_cap = 50000000; // level-set route guard
    long depth_cap = 10000;
    int threads = 1;
    TableCache* cache = nullptr;
};

int default_stage_cap(const Tower& t);
int default_normalize_stage(const Tower& t);

LevelSet apply_power(const Tower& t, const LevelSet& a, const BigInt& n,
                     const DynOptions& opt = {});

// lag -> number of level pairs (a,b) with a - b = lag, for sets at one stage
std::map<BigInt, BigInt> lag_multiplicities(const LevelSet& a, const LevelSet& b);

CorrelationRecord correlation(const Tower& t, const LevelSet& a, const LevelSet& b,
                              const BigInt& n, const DynOptions& opt = {});

// forced routes, used by tests to cross-validate
BigRat correlation_raw_kernel(const Tower& t, const LevelSet& a, const LevelSet& b,
                              const BigInt& n, const DynOptions& opt, int* working_stage);
BigRat correlation_raw_levelsets(const Tower& t, const LevelSet& a, const LevelSet& b,
                                 const BigInt& n, const DynOptions& opt, int* working_stage);

struct ScanEntry {
    BigInt n;
    std::optional<CorrelationRecord> record;
    std::string error; // empty on success
};

std::vector<ScanEntry> correlation_scan(const Tower& t, const LevelSet& a,
                                        const LevelSet& b, const std::vector<BigInt>& ns,
                                        const DynOptions& opt = {});

BigRat avg_correlation(const Tower& t, const LevelSet& a, const LevelSet& b,
                       const BigInt& d, long r, const BigInt& base_shift,
                       const DynOptions& opt = {});

} // namespace rank1
