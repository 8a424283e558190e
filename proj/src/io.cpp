#include "rank1/io.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace rank1 {

using json = nlohmann::ordered_json;

namespace {

// strict decimal parse; leading zeros are stripped so the big-integer parser
// cannot treat them as an octal prefix
BigInt bigint_text(const std::string& s, const std::string& what) {
    const bool neg = !s.empty() && s[0] == '-';
    std::string digits = s.substr(neg ? 1 : 0);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config_error: " + what + " is not an integer: " + s);
    const std::size_t nz = digits.find_first_not_of('0');
    digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
    BigInt x(digits);
    return neg ? BigInt(-x) : x;
}

BigInt bigint_json(const json& f, const std::string& what) {
    if (f.is_string()) return bigint_text(f.get<std::string>(), what);
    if (f.is_number_integer()) return BigInt(f.get<long long>());
    throw ConfigError("config_error: " + what + " must be an integer or string");
}

BigInt bigint_field(const json& v, const std::string& key) {
    return bigint_json(v.at(key), "field '" + key + "'");
}

// best rational approximation with denominator <= 100 via continued fractions;
// exact for the grid of exponents a config can reasonably carry
std::pair<unsigned, unsigned> exponent_to_rational(double e) {
    if (!(e > 0.0) || !(e < 1.0))
        throw ConfigError("config_error: cutting exponent must lie in (0, 1)");
    long long pn0 = 0, pd0 = 1, pn1 = 1, pd1 = 0;
    double x = e;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(x);
        long long a = static_cast<long long>(fl);
        long long n2 = a * pn1 + pn0;
        long long d2 = a * pd1 + pd0;
        if (d2 > 100) break;
        pn0 = pn1;
        pd0 = pd1;
        pn1 = n2;
        pd1 = d2;
        double frac = x - fl;
        if (frac < 1e-12) break;
        x = 1.0 / frac;
    }
    if (pd1 < 1 || pn1 < 1)
        throw ConfigError("config_error: cutting exponent has no small rational form");
    return {static_cast<unsigned>(pn1), static_cast<unsigned>(pd1)};
}

json spec_json(const ConstructionSpec& spec) {
    json j;
    j["kind"] = kind_name(spec.kind);
    j["h1"] = spec.h1.str();
    json cut;
    switch (spec.cutting.name) {
    case CuttingRule::Name::power:
        cut["rule"] = "power";
        cut["exponent_num"] = spec.cutting.exp_num;
        cut["exponent_den"] = spec.cutting.exp_den;
        cut["min_r"] = spec.cutting.min_r;
        break;
    case CuttingRule::Name::constant:
        cut["rule"] = "constant";
        cut["value"] = spec.cutting.value;
        break;
    case CuttingRule::Name::explicit_list:
        cut["rule"] = "explicit";
        cut["values"] = spec.cutting.values;
        break;
    }
    j["cutting"] = cut;
    if (spec.kind == Kind::double_sidon) j["growth"] = spec.spacers.growth.str();
    if (spec.kind == Kind::custom) {
        json vecs = json::array();
        for (const auto& v : spec.spacers.vectors) {
            json row = json::array();
            for (const BigInt& s : v) row.push_back(s.str());
            vecs.push_back(row);
        }
        j["spacers"] = vecs;
    }
    j["max_stage"] = spec.max_stage;
    return j;
}

} // namespace

ConstructionSpec reference_spec(int max_stage) {
    CuttingRule cutting; // power 2/5, min_r 4
    return make_spec(Kind::double_staircase, 10, cutting, {}, max_stage);
}

ConstructionSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config_error: invalid JSON: ") + e.what());
    }
    try {
        Kind kind = Kind::double_staircase;
        if (j.contains("kind")) kind = kind_from_name(j.at("kind").get<std::string>());
        BigInt h1 = j.contains("h1") ? bigint_field(j, "h1") : BigInt(10);
        int max_stage = j.value("max_stage", 6);

        CuttingRule cutting;
        if (j.contains("cutting")) {
            const json& c = j.at("cutting");
            std::string rule = c.value("rule", "power");
            if (rule == "power") {
                cutting.name = CuttingRule::Name::power;
                if (c.contains("exponent")) {
                    auto [num, den] = exponent_to_rational(c.at("exponent").get<double>());
                    cutting.exp_num = num;
                    cutting.exp_den = den;
                }
                if (c.contains("exponent_num")) cutting.exp_num = c.at("exponent_num").get<unsigned>();
                if (c.contains("exponent_den")) cutting.exp_den = c.at("exponent_den").get<unsigned>();
                cutting.min_r = c.value("min_r", 4L);
            } else if (rule == "constant") {
                cutting.name = CuttingRule::Name::constant;
                cutting.value = c.value("value", 4L);
            } else if (rule == "explicit") {
                cutting.name = CuttingRule::Name::explicit_list;
                cutting.values = c.at("values").get<std::vector<long>>();
            } else {
                throw ConfigError("config_error: unknown cutting rule '" + rule + "'");
            }
        }

        if (kind == Kind::double_sidon) {
            BigInt growth = j.contains("growth") ? bigint_field(j, "growth") : BigInt(2);
            std::vector<long> r_half;
            if (cutting.name == CuttingRule::Name::explicit_list) {
                for (long r : cutting.values) {
                    if (r % 2 != 0)
                        throw ConfigError("config_error: double kinds need even column counts");
                    r_half.push_back(r / 2);
                }
            } else if (cutting.name == CuttingRule::Name::constant) {
                if (cutting.value % 2 != 0)
                    throw ConfigError("config_error: double kinds need even column counts");
                r_half.assign(static_cast<std::size_t>(max_stage), cutting.value / 2);
            } else {
                throw ConfigError(
                    "config_error: double_sidon needs an explicit or constant cutting rule");
            }
            return sidon_spec(h1, r_half, growth, max_stage);
        }

        SpacerRule spacers;
        if (j.contains("spacers")) {
            const json& sv = j.at("spacers");
            const json& rows = sv.is_object() ? sv.at("vectors") : sv;
            for (const json& row : rows) {
                std::vector<BigInt> vec;
                for (const json& x : row) {
                    if (x.is_string())
                        vec.emplace_back(x.get<std::string>());
                    else
                        vec.emplace_back(x.get<long long>());
                }
                spacers.vectors.push_back(std::move(vec));
            }
        }
        return make_spec(kind, h1, cutting, spacers, max_stage);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config_error: ") + e.what());
    }
}

std::string spec_to_json(const ConstructionSpec& spec) { return spec_json(spec).dump(); }

int effective_max_stage(int config_max_stage) {
    const char* env = std::getenv("RANK1LAB_MAX_STAGE");
    if (!env || !*env) return config_max_stage;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || v < 1 || v > 64)
        throw ConfigError("config_error: invalid RANK1LAB_MAX_STAGE value");
    return static_cast<int>(v);
}

LevelSet parse_selector(const Tower& t, const std::string& text) {
    if (text.empty()) throw ConfigError("config_error: empty set selector");
    if (text[0] == '{') {
        json j;
        try {
            j = json::parse(text);
            int stage = j.at("stage").get<int>();
            std::vector<Run> runs;
            for (const json& row : j.at("runs")) {
                if (!row.is_array() || row.size() != 2)
                    throw ConfigError("config_error: runs must be [lo, hi] pairs");
                runs.emplace_back(bigint_json(row[0], "run bound"),
                                  bigint_json(row[1], "run bound"));
            }
            return make_levelset(t, stage, std::move(runs));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config_error: bad set JSON: ") + e.what());
        }
    }
    auto at = text.find('@');
    if (at == std::string::npos)
        throw ConfigError("config_error: selector needs '@stage': " + text);
    std::string head = text.substr(0, at);
    std::string rest = text.substr(at + 1);
    std::string stage_part = rest;
    std::string runs_part;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
        stage_part = rest.substr(0, colon);
        runs_part = rest.substr(colon + 1);
    }
    int stage = 0;
    try {
        stage = std::stoi(stage_part);
    } catch (const std::exception&) {
        throw ConfigError("config_error: bad stage in selector: " + text);
    }
    if (head == "full") return full_set(t, stage);
    if (head == "base") return base_set(stage);
    if (head == "runs") {
        if (runs_part.size() < 2 || runs_part.front() != '[' || runs_part.back() != ']')
            throw ConfigError("config_error: runs selector needs [..]: " + text);
        std::string body = runs_part.substr(1, runs_part.size() - 2);
        std::vector<Run> runs;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            auto dash = item.find('-', 1); // position 0 may be a minus sign
            if (dash == std::string::npos) {
                BigInt v = bigint_text(item, "run bound");
                runs.emplace_back(v, v);
            } else {
                runs.emplace_back(bigint_text(item.substr(0, dash), "run bound"),
                                  bigint_text(item.substr(dash + 1), "run bound"));
            }
        }
        return make_levelset(t, stage, std::move(runs));
    }
    throw ConfigError("config_error: unknown selector '" + head + "'");
}

std::string levelset_to_json(const LevelSet& a) {
    json j;
    j["stage"] = a.stage;
    json runs = json::array();
    for (const Run& r : a.runs) {
        json row = json::array();
        if (fits_i64(r.first) && fits_i64(r.second)) {
            row.push_back(to_i64(r.first));
            row.push_back(to_i64(r.second));
        } else {
            row.push_back(r.first.str());
            row.push_back(r.second.str());
        }
        runs.push_back(row);
    }
    j["runs"] = runs;
    return j.dump();
}

std::string rational_str(const BigRat& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

void write_csv_header(std::ostream& os, const ConstructionSpec& spec,
                      const std::string& columns, int normalize_stage) {
    os << "# rank1lab " << kVersion << "\n";
    os << "# config: " << spec_to_json(spec) << "\n";
    if (normalize_stage > 0) os << "# normalize_stage: " << normalize_stage << "\n";
    if (spec.adams_warning) os << "# warning: adams_condition_violated\n";
    os << columns << "\n";
}

void write_build_csv(std::ostream& os, const Tower& t) {
    write_csv_header(os, t.spec(), "j,h,r,sum_spacers,total_raw_num,total_raw_den", 0);
    for (int j = 1; j <= t.max_stage(); ++j) {
        const TowerStage& st = t.stage(j);
        BigRat total = t.total_measure(j);
        os << j << "," << st.h.str() << "," << st.r << "," << st.sum_spacers.str() << ","
           << numerator(total).str() << "," << denominator(total).str() << "\n";
    }
    const int J = t.max_stage() + 1;
    BigRat total = t.total_measure(J);
    os << "# final: j=" << J << ",h=" << t.height(J).str() << ",total="
       << numerator(total).str() << "/" << denominator(total).str() << "\n";
}

void write_windows_csv(std::ostream& os, const Tower& t, int j_lo, int j_hi) {
    write_csv_header(os, t.spec(), "j,lo,hi", 0);
    for (const WindowRow& w : nonmixing_windows(t, j_lo, j_hi)) {
        if (w.clipped) os << "# window " << w.j << " clipped into [h_j, h_{j+1}]\n";
        os << w.j << "," << w.lo.str() << "," << w.hi.str() << "\n";
    }
}

void write_scan_csv(std::ostream& os, const Tower& t, const std::vector<ScanEntry>& rows,
                    int normalize_stage) {
    write_csv_header(os, t.spec(),
                     "n,raw_num,raw_den,normalized,product_term,deviation,working_stage",
                     normalize_stage);
    os.precision(17);
    for (const ScanEntry& e : rows) {
        if (!e.record) {
            os << "# n=" << e.n.str() << " error: " << e.error << "\n";
            continue;
        }
        const CorrelationRecord& r = *e.record;
        os << r.n.str() << "," << numerator(r.raw).str() << "," << denominator(r.raw).str()
           << "," << r.normalized << "," << r.product_term << "," << r.deviation << ","
           << r.working_stage << "\n";
    }
}

void write_overlap_csv(std::ostream& os, std::int64_t h, double eps,
                       const OverlapProfile& prof) {
    os << "# rank1lab " << kVersion << "\n";
    os.precision(17);
    os << "# p_set: h=" << h << ", eps=" << eps << "\n";
    os << "# max over nonzero m in range: m=" << prof.max_m << ", count=" << prof.max_count
       << "\n";
    os << "m,count\n";
    for (std::size_t i = 0; i < prof.counts.size(); ++i)
        os << (prof.m_lo + static_cast<std::int64_t>(i)) << "," << prof.counts[i] << "\n";
}

void write_lemma2_csv(std::ostream& os, const Tower& t, const std::vector<Lemma2Row>& rows,
                      int normalize_stage) {
    write_csv_header(os, t.spec(), "j,symdiff_num,symdiff_den,dev", normalize_stage);
    os.precision(17);
    for (const Lemma2Row& r : rows)
        os << r.j << "," << numerator(r.sym_diff).str() << ","
           << denominator(r.sym_diff).str() << "," << r.dev << "\n";
}

std::string fit_report_to_json(const FitReport& rep, const ConstructionSpec& spec,
                               bool unnormalized) {
    json j;
    j["version"] = kVersion;
    j["config"] = spec_json(spec);
    j["n"] = rep.n.str();
    j["normalize_stage"] = rep.normalize_stage;
    j["unnormalized"] = unnormalized;
    json best;
    if (rep.best_is_sentinel) {
        best["m"] = nullptr;
        best["k"] = nullptr;
        best["sentinel"] = rep.sentinel_kind;
    } else {
        best["m"] = rep.best_m;
        best["k"] = rep.best_k.str();
        best["sentinel"] = nullptr;
    }
    j["best"] = best;
    j["residual"] = rep.residual;
    json per = json::array();
    for (const PairFit& p : rep.per_set) {
        json row;
        row["pair"] = p.pair_index;
        row["observed"] = p.observed;
        row["predicted"] = p.predicted;
        per.push_back(row);
    }
    j["per_set"] = per;
    return j.dump(2);
}

std::string example2_to_json(const Tower& t, int j, const BigInt& k, const Example2& ex,
                             int normalize_stage) {
    const BigRat total = t.total_measure(normalize_stage);
    json out;
    out["version"] = kVersion;
    out["config"] = spec_json(t.spec());
    out["j"] = j;
    out["k"] = k.str();
    out["normalize_stage"] = normalize_stage;
    out["mu_U"] = rational_str(ex.mu_U);
    out["mu_D"] = rational_str(ex.mu_D);
    out["mu_D1"] = rational_str(ex.mu_D1);
    out["mu_U_normalized"] = to_double(ex.mu_U / total);
    out["ratio_D"] = ex.mu_U == 0 ? 0.0 : to_double(ex.mu_D / ex.mu_U);
    out["ratio_D1"] = ex.mu_U == 0 ? 0.0 : to_double(ex.mu_D1 / ex.mu_U);
    return out.dump(2);
}

std::string error_json(const std::string& kind, const std::string& message,
                       std::optional<long> stage) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    if (stage) j["stage"] = *stage;
    return j.dump();
}

} // namespace rank1
