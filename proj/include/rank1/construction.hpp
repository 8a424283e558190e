#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rank1/numeric.hpp"

namespace rank1 {

enum class Kind { staircase, double_staircase, double_sidon, custom };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct CuttingRule {
    enum class Name { power, constant, explicit_list };
    Name name = Name::power;
    // power: r from ceil(h^(exp_num/exp_den)), doubled/min-clamped per kind
    unsigned exp_num = 2, exp_den = 5;
    long min_r = 4;
    long value = 4;                // constant
    std::vector<long> values;      // explicit_list, 1-indexed by stage
};

struct SpacerRule {
    // staircase/double_staircase/double_sidon are fixed by kind; custom uses
    // explicit per-stage vectors
    std::vector<std::vector<BigInt>> vectors;
    BigInt growth = 2; // double_sidon growth factor G
};

struct ConstructionSpec {
    Kind kind = Kind::double_staircase;
    BigInt h1 = 10;
    CuttingRule cutting;
    SpacerRule spacers;
    int max_stage = 7;
    bool adams_warning = false; // set by make_spec/Tower build
};

struct TowerStage {
    int j = 0;
    BigInt h;                     // levels 0..h
    std::int64_t r = 0;           // cutting applied to this stage
    std::vector<BigInt> spacers;  // length r
    std::vector<BigInt> offsets;  // length r, o_1 = 0
    BigInt W;                     // width denominator, level width 1/W
    BigInt sum_spacers;
    BigInt h_next;
};

// cutting/spacer header for stages past max_stage (cascade bookkeeping only)
struct VirtualHeader {
    BigInt h;
    BigInt r;
    BigInt r_half;       // r/2 for double kinds, 0 otherwise
    BigInt last_spacer;  // s_j(r_j)
};

BigInt next_height(const BigInt& h, const std::vector<BigInt>& spacers);

BigInt cutting_r(const ConstructionSpec& spec, int j, const BigInt& h);

std::vector<BigInt> spacer_vector(const ConstructionSpec& spec, int j,
                                  const BigInt& r, const BigInt& h);

ConstructionSpec make_spec(Kind kind, const BigInt& h1, CuttingRule cutting,
                           SpacerRule spacers, int max_stage);

class Tower {
public:
    explicit Tower(ConstructionSpec spec);

    const ConstructionSpec& spec() const { return spec_; }
    int max_stage() const { return spec_.max_stage; }
    bool adams_warning() const { return spec_.adams_warning; }

    // stage j carries h_j and the cutting applied to it; valid j in [1, max_stage]
    const TowerStage& stage(int j) const;
    const BigInt& height(int j) const; // valid j in [1, max_stage+1]
    const BigInt& width_denominator(int j) const;

    BigRat total_measure(int J) const;             // (h_J+1)/W_J
    std::vector<BigRat> increments(int J) const;   // inc_1..inc_{J-1}

    // header for any stage >= 1, extending the recurrence past max_stage;
    // throws Unresolvable for explicit_list/custom rules past their data
    VirtualHeader header(int j) const;

private:
    ConstructionSpec spec_;
    std::vector<TowerStage> stages_;
    BigInt h_final_; // h_{max_stage+1}
    BigInt W_final_; // W_{max_stage+1}
    mutable std::vector<VirtualHeader> virtual_cache_;
};

} // namespace rank1
