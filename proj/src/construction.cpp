#include "rank1/construction.hpp"

#include <utility>

namespace rank1 {

std::string kind_name(Kind k) {
    switch (k) {
    case Kind::staircase: return "staircase";
    case Kind::double_staircase: return "double_staircase";
    case Kind::double_sidon: return "double_sidon";
    case Kind::custom: return "custom";
    }
    throw ConfigError("invalid_parameters: unknown kind");
}

Kind kind_from_name(const std::string& name) {
    if (name == "staircase") return Kind::staircase;
    if (name == "double_staircase") return Kind::double_staircase;
    if (name == "double_sidon") return Kind::double_sidon;
    if (name == "custom") return Kind::custom;
    throw ConfigError("invalid_parameters: unknown kind '" + name + "'");
}

BigInt next_height(const BigInt& h, const std::vector<BigInt>& spacers) {
    if (h < 1) throw ConfigError("invalid_parameters: height must be >= 1");
    if (spacers.empty()) throw ConfigError("invalid_parameters: empty spacer vector");
    BigInt sum = 0;
    for (const BigInt& s : spacers) {
        if (s < 0) throw ConfigError("invalid_parameters: negative spacer");
        sum += s;
    }
    return (h + 1) * static_cast<long>(spacers.size()) + sum - 1;
}

static bool is_double_kind(Kind k) {
    return k == Kind::double_staircase || k == Kind::double_sidon;
}

BigInt cutting_r(const ConstructionSpec& spec, int j, const BigInt& h) {
    const CuttingRule& c = spec.cutting;
    BigInt r;
    switch (c.name) {
    case CuttingRule::Name::power: {
        BigInt base = ceil_pow_frac(h, c.exp_num, c.exp_den);
        if (is_double_kind(spec.kind)) {
            r = 2 * ((base + 1) / 2);
        } else {
            r = base;
        }
        if (r < c.min_r) r = c.min_r;
        break;
    }
    case CuttingRule::Name::constant:
        r = c.value;
        break;
    case CuttingRule::Name::explicit_list:
        if (j < 1 || static_cast<std::size_t>(j) > c.values.size())
            throw Unresolvable("unresolvable_at_cap: cutting list exhausted at stage " +
                                   std::to_string(j),
                               j);
        r = c.values[static_cast<std::size_t>(j - 1)];
        break;
    }
    if (r < 2) throw ConfigError("invalid_parameters: r_" + std::to_string(j) + " < 2");
    if (is_double_kind(spec.kind) && r % 2 != 0)
        throw ConfigError("invalid_parameters: odd r_" + std::to_string(j) +
                          " for a double kind");
    return r;
}

std::vector<BigInt> spacer_vector(const ConstructionSpec& spec, int j, const BigInt& r,
                                  const BigInt& h) {
    (void)h;
    std::vector<BigInt> s;
    long rl = to_i64(r);
    switch (spec.kind) {
    case Kind::staircase:
        s.reserve(static_cast<std::size_t>(rl));
        for (long i = 0; i < rl; ++i) s.emplace_back(i);
        break;
    case Kind::double_staircase: {
        long rp = rl / 2;
        s.reserve(static_cast<std::size_t>(rl));
        for (long rep = 0; rep < 2; ++rep)
            for (long i = 0; i < rp; ++i) s.emplace_back(i);
        break;
    }
    case Kind::double_sidon:
    case Kind::custom: {
        if (j < 1 || static_cast<std::size_t>(j) > spec.spacers.vectors.size())
            throw Unresolvable("unresolvable_at_cap: spacer data exhausted at stage " +
                                   std::to_string(j),
                               j);
        s = spec.spacers.vectors[static_cast<std::size_t>(j - 1)];
        if (static_cast<long>(s.size()) != rl)
            throw ConfigError("invalid_parameters: spacer vector length != r at stage " +
                              std::to_string(j));
        for (const BigInt& v : s)
            if (v < 0) throw ConfigError("invalid_parameters: negative spacer");
        break;
    }
    }
    return s;
}

ConstructionSpec make_spec(Kind kind, const BigInt& h1, CuttingRule cutting,
                           SpacerRule spacers, int max_stage) {
    if (h1 < 1) throw ConfigError("invalid_parameters: h1 must be >= 1");
    if (max_stage < 1) throw ConfigError("invalid_parameters: max_stage must be >= 1");
    if (cutting.name == CuttingRule::Name::power &&
        (cutting.exp_den == 0 || cutting.exp_num >= cutting.exp_den))
        throw ConfigError("invalid_parameters: power exponent must be in (0,1)");
    ConstructionSpec spec;
    spec.kind = kind;
    spec.h1 = h1;
    spec.cutting = std::move(cutting);
    spec.spacers = std::move(spacers);
    spec.max_stage = max_stage;
    // dry-run the recurrence: validates r_j and spacers, sets the Adams flag
    BigInt h = h1;
    BigRat prev_ratio;
    bool have_prev = false;
    bool warn = false;
    for (int j = 1; j <= max_stage; ++j) {
        BigInt r = cutting_r(spec, j, h);
        std::vector<BigInt> s = spacer_vector(spec, j, r, h);
        BigRat ratio(r * r, h);
        if (have_prev && !(ratio < prev_ratio)) warn = true;
        prev_ratio = ratio;
        have_prev = true;
        h = next_height(h, s);
    }
    spec.adams_warning = warn && kind != Kind::double_sidon;
    return spec;
}

Tower::Tower(ConstructionSpec spec) : spec_(std::move(spec)) {
    BigInt h = spec_.h1;
    BigInt W = 1;
    stages_.reserve(static_cast<std::size_t>(spec_.max_stage));
    for (int j = 1; j <= spec_.max_stage; ++j) {
        TowerStage st;
        st.j = j;
        st.h = h;
        st.W = W;
        BigInt r = cutting_r(spec_, j, h);
        st.r = to_i64(r);
        st.spacers = spacer_vector(spec_, j, r, h);
        st.offsets.reserve(static_cast<std::size_t>(st.r));
        BigInt o = 0;
        for (long i = 0; i < st.r; ++i) {
            st.offsets.push_back(o);
            o += (h + 1) + st.spacers[static_cast<std::size_t>(i)];
        }
        st.sum_spacers = 0;
        for (const BigInt& s : st.spacers) st.sum_spacers += s;
        st.h_next = st.offsets.back() + h + st.spacers.back();
        if (st.h_next != next_height(h, st.spacers))
            throw std::logic_error("stage recurrence inconsistency");
        h = st.h_next;
        W *= r;
        stages_.push_back(std::move(st));
    }
    h_final_ = h;
    W_final_ = W;
}

const TowerStage& Tower::stage(int j) const {
    if (j < 1 || j > spec_.max_stage)
        throw ConfigError("stage_out_of_range: stage " + std::to_string(j));
    return stages_[static_cast<std::size_t>(j - 1)];
}

const BigInt& Tower::height(int j) const {
    if (j >= 1 && j <= spec_.max_stage) return stages_[static_cast<std::size_t>(j - 1)].h;
    if (j == spec_.max_stage + 1) return h_final_;
    throw ConfigError("stage_out_of_range: stage " + std::to_string(j));
}

const BigInt& Tower::width_denominator(int j) const {
    if (j >= 1 && j <= spec_.max_stage) return stages_[static_cast<std::size_t>(j - 1)].W;
    if (j == spec_.max_stage + 1) return W_final_;
    throw ConfigError("stage_out_of_range: stage " + std::to_string(j));
}

BigRat Tower::total_measure(int J) const {
    return BigRat(height(J) + 1, width_denominator(J));
}

std::vector<BigRat> Tower::increments(int J) const {
    if (J < 1 || J > spec_.max_stage + 1)
        throw ConfigError("stage_out_of_range: stage " + std::to_string(J));
    std::vector<BigRat> inc;
    for (int j = 1; j < J; ++j) {
        const TowerStage& st = stages_[static_cast<std::size_t>(j - 1)];
        inc.emplace_back(st.sum_spacers, st.W * st.r);
    }
    return inc;
}

VirtualHeader Tower::header(int j) const {
    if (j < 1) throw ConfigError("stage_out_of_range: stage " + std::to_string(j));
    if (j <= spec_.max_stage) {
        const TowerStage& st = stages_[static_cast<std::size_t>(j - 1)];
        VirtualHeader v;
        v.h = st.h;
        v.r = st.r;
        v.r_half = is_double_kind(spec_.kind) ? BigInt(st.r / 2) : BigInt(0);
        v.last_spacer = st.spacers.back();
        return v;
    }
    std::size_t idx = static_cast<std::size_t>(j - spec_.max_stage - 1);
    while (virtual_cache_.size() <= idx) {
        int jj = spec_.max_stage + 1 + static_cast<int>(virtual_cache_.size());
        BigInt h = virtual_cache_.empty() ? h_final_ : [&] {
            const VirtualHeader& p = virtual_cache_.back();
            BigInt sum;
            switch (spec_.kind) {
            case Kind::staircase:
                sum = p.r * (p.r - 1) / 2;
                break;
            case Kind::double_staircase:
                sum = p.r_half * (p.r_half - 1);
                break;
            default:
                // explicit spacer kinds cannot extend past their data
                throw Unresolvable(
                    "unresolvable_at_cap: spacer data exhausted at stage " +
                        std::to_string(jj),
                    jj);
            }
            return (p.h + 1) * p.r + sum - 1;
        }();
        if (spec_.kind == Kind::double_sidon || spec_.kind == Kind::custom)
            throw Unresolvable("unresolvable_at_cap: spacer data exhausted at stage " +
                                   std::to_string(jj),
                               jj);
        VirtualHeader v;
        v.h = h;
        v.r = cutting_r(spec_, jj, h);
        v.r_half = is_double_kind(spec_.kind) ? BigInt(v.r / 2) : BigInt(0);
        v.last_spacer = is_double_kind(spec_.kind) ? v.r_half - 1 : v.r - 1;
        virtual_cache_.push_back(std::move(v));
    }
    return virtual_cache_[idx];
}

} // namespace rank1
