#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rank1/construction.hpp"
#include "rank1/dynamics.hpp"
#include "rank1/levelset.hpp"
#include "rank1/sidon.hpp"
#include "rank1/wlp.hpp"

namespace rank1 {

inline constexpr const char* kVersion = "0.1.0";

ConstructionSpec spec_from_json(const std::string& text);
ConstructionSpec reference_spec(int max_stage = 6);
std::string spec_to_json(const ConstructionSpec& spec);

// honors RANK1LAB_MAX_STAGE (overrides the config's max_stage when set)
int effective_max_stage(int config_max_stage);

// "full@2", "base@2", "runs@2:[0-10,23-33]", or inline JSON {"stage":..,"runs":[..]}
LevelSet parse_selector(const Tower& t, const std::string& text);
std::string levelset_to_json(const LevelSet& a);

std::string rational_str(const BigRat& x); // "num/den"

void write_csv_header(std::ostream& os, const ConstructionSpec& spec,
                      const std::string& columns, int normalize_stage);

void write_build_csv(std::ostream& os, const Tower& t);
void write_windows_csv(std::ostream& os, const Tower& t, int j_lo, int j_hi);
void write_scan_csv(std::ostream& os, const Tower& t, const std::vector<ScanEntry>& rows,
                    int normalize_stage);
void write_overlap_csv(std::ostream& os, std::int64_t h, double eps,
                       const OverlapProfile& prof);
void write_lemma2_csv(std::ostream& os, const Tower& t,
                      const std::vector<Lemma2Row>& rows, int normalize_stage);

std::string fit_report_to_json(const FitReport& rep, const ConstructionSpec& spec,
                               bool unnormalized);
std::string example2_to_json(const Tower& t, int j, const BigInt& k, const Example2& ex,
                             int normalize_stage);

std::string error_json(const std::string& kind, const std::string& message,
                       std::optional<long> stage = std::nullopt);

} // namespace rank1
