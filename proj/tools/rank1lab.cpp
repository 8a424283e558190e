#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rank1/dynamics.hpp"
#include "rank1/io.hpp"
#include "rank1/sidon.hpp"
#include "rank1/wlp.hpp"

using namespace rank1;

namespace {

struct Opts {
    std::string config;
    std::string out;
    int normalize_stage = 0; // 0 = library default
    int threads = 1;

    std::string a_sel, b_sel;
    std::string n_str = "0";
    std::string n_list;
    std::string cascade; // "J=6,m=1,k=0"
    std::string family = "reference";
    int m_max = 4;
    std::string k_window = "-8..8";
    std::string stages;
    int j = 0;
    std::string k_str = "0";
    std::int64_t h = 0;
    double eps = 0.0;
    std::int64_t m_from = 0;
    std::int64_t m_to = -1; // -1 = up to max(P)
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config_error: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ConstructionSpec load_spec(const Opts& o) {
    if (o.config.empty()) return reference_spec(effective_max_stage(6));
    // apply the environment override at the JSON level so explicit schedules
    // regenerate against the effective stage count
    nlohmann::json j = nlohmann::json::parse(slurp(o.config), nullptr, false);
    if (j.is_discarded()) throw ConfigError("config_error: invalid JSON in " + o.config);
    int cfg_stage = j.value("max_stage", 6);
    j["max_stage"] = effective_max_stage(cfg_stage);
    return spec_from_json(j.dump());
}

std::pair<long, long> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw ConfigError("config_error: range needs the form A..B: " + text);
    try {
        return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ConfigError("config_error: bad range: " + text);
    }
}

BigInt parse_bigint(const std::string& text) {
    // decimal only; reject stray prefixes and strip leading zeros so the
    // big-integer parser cannot read them as a base marker
    const bool neg = !text.empty() && text[0] == '-';
    std::string digits = text.substr(neg ? 1 : 0);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config_error: bad integer: " + text);
    const std::size_t nz = digits.find_first_not_of('0');
    digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
    BigInt x(digits);
    return neg ? BigInt(-x) : x;
}

std::vector<BigInt> parse_n_list(const std::string& text) {
    std::vector<BigInt> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_bigint(item));
    if (out.empty()) throw ConfigError("config_error: empty n list");
    return out;
}

BigInt resolve_n(const Tower& t, const Opts& o) {
    if (o.cascade.empty()) return parse_bigint(o.n_str);
    long J = -1, m = -1;
    BigInt k = 0;
    std::stringstream ss(o.cascade);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config_error: cascade spec needs key=value parts");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        if (key == "J")
            J = std::stol(val);
        else if (key == "m")
            m = std::stol(val);
        else if (key == "k")
            k = parse_bigint(val);
        else
            throw ConfigError("config_error: unknown cascade key '" + key + "'");
    }
    if (J < 0 || m < 0) throw ConfigError("config_error: cascade spec needs J and m");
    return cascade_times(t, static_cast<int>(J), static_cast<int>(m), k);
}

Family load_family(const Tower& t, const std::string& spec) {
    if (spec == "reference") return reference_family(t);
    nlohmann::json j = nlohmann::json::parse(slurp(spec), nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw ConfigError("config_error: family file must hold a JSON array of pairs");
    Family fam;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 2)
            throw ConfigError("config_error: family entries must be [selA, selB]");
        fam.emplace_back(parse_selector(t, row[0].get<std::string>()),
                         parse_selector(t, row[1].get<std::string>()));
    }
    if (fam.empty()) throw ConfigError("config_error: empty family");
    return fam;
}

DynOptions dyn_options(const Tower& t, const Opts& o) {
    DynOptions dyn;
    dyn.threads = o.threads;
    if (o.normalize_stage > 0)
        dyn.normalize_stage = o.normalize_stage;
    else
        dyn.normalize_stage = default_normalize_stage(t);
    return dyn;
}

int run(const std::string& cmd, const Opts& o) {
    std::ofstream ofs;
    std::ostream* os = &std::cout;
    if (!o.out.empty()) {
        ofs.open(o.out);
        if (!ofs) throw ConfigError("config_error: cannot write " + o.out);
        os = &ofs;
    }

    if (cmd == "sidon-overlap") {
        if (o.h < 1) throw ConfigError("config_error: --h is required and positive");
        PSet p = p_set(o.h, o.eps);
        std::int64_t m_to = o.m_to < 0 ? p.elems.back() : o.m_to;
        OverlapProfile prof = p_overlap_profile(o.h, o.eps, o.m_from, m_to);
        write_overlap_csv(*os, o.h, o.eps, prof);
        return 0;
    }

    Tower t(load_spec(o));
    DynOptions dyn = dyn_options(t, o);
    TableCache cache(dyn.table_cap);
    dyn.cache = &cache;

    if (cmd == "build") {
        write_build_csv(*os, t);
    } else if (cmd == "correlate") {
        LevelSet a = parse_selector(t, o.a_sel);
        LevelSet b = parse_selector(t, o.b_sel);
        ScanEntry e;
        e.n = parse_bigint(o.n_str);
        e.record = correlation(t, a, b, e.n, dyn);
        write_scan_csv(*os, t, {e}, *dyn.normalize_stage);
    } else if (cmd == "scan") {
        LevelSet a = parse_selector(t, o.a_sel);
        LevelSet b = parse_selector(t, o.b_sel);
        auto rows = correlation_scan(t, a, b, parse_n_list(o.n_list), dyn);
        write_scan_csv(*os, t, rows, *dyn.normalize_stage);
    } else if (cmd == "fit") {
        BigInt n = resolve_n(t, o);
        Family fam = load_family(t, o.family);
        FitOptions fopt;
        fopt.m_max = o.m_max;
        auto [klo, khi] = parse_range(o.k_window);
        fopt.k_lo = klo;
        fopt.k_hi = khi;
        fopt.dyn = dyn;
        const bool unnorm = t.spec().kind == Kind::double_sidon;
        FitReport rep = unnorm ? sidon_wlp_check(t, n, fam, fopt) : fit_wlp(t, n, fam, fopt);
        *os << fit_report_to_json(rep, t.spec(), unnorm) << "\n";
    } else if (cmd == "windows") {
        long lo = 1, hi = t.max_stage();
        if (!o.stages.empty()) std::tie(lo, hi) = parse_range(o.stages);
        write_windows_csv(*os, t, static_cast<int>(lo), static_cast<int>(hi));
    } else if (cmd == "example2") {
        if (o.j < 1) throw ConfigError("config_error: --j is required and positive");
        Example2 ex = example2_decomposition(t, o.j, parse_bigint(o.k_str), dyn);
        *os << example2_to_json(t, o.j, parse_bigint(o.k_str), ex, *dyn.normalize_stage)
            << "\n";
    } else if (cmd == "lemma2") {
        long lo = 3, hi = t.max_stage() + 1;
        if (!o.stages.empty()) std::tie(lo, hi) = parse_range(o.stages);
        LevelSet a = parse_selector(t, o.a_sel.empty() ? "runs@2:[0-22]" : o.a_sel);
        LevelSet b = parse_selector(t, o.b_sel.empty() ? "runs@2:[11-33]" : o.b_sel);
        auto rows = lemma2_probe(t, lower_half_generator(t), a, b, static_cast<int>(lo),
                                 static_cast<int>(hi), dyn);
        write_lemma2_csv(*os, t, rows, *dyn.normalize_stage);
    } else {
        throw ConfigError("config_error: unknown command " + cmd);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"rank1lab: exact correlations for rank-one cutting-and-stacking maps"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON construction config (default: reference)");
        sub->add_option("--out", o.out, "output path (default: stdout)");
        sub->add_option("--normalize-stage", o.normalize_stage,
                        "tower used as the normalizing total");
        sub->add_option("--threads", o.threads, "worker threads for the pair kernels");
        return sub;
    };

    add_common(app.add_subcommand("build", "tower schedule and totals as CSV"));

    auto* corr = add_common(app.add_subcommand("correlate", "single exact correlation"));
    corr->add_option("--a", o.a_sel, "first set selector")->required();
    corr->add_option("--b", o.b_sel, "second set selector")->required();
    corr->add_option("--n", o.n_str, "power of the map")->required();

    auto* scan = add_common(app.add_subcommand("scan", "correlations over a list of n"));
    scan->add_option("--a", o.a_sel, "first set selector")->required();
    scan->add_option("--b", o.b_sel, "second set selector")->required();
    scan->add_option("--n-list", o.n_list, "comma-separated n values")->required();

    auto* fit = add_common(app.add_subcommand("fit", "weak-limit hypothesis fit at one n"));
    fit->add_option("--n", o.n_str, "power of the map");
    fit->add_option("--n-from-cascade", o.cascade, "derive n as J=..,m=..,k=..");
    fit->add_option("--family", o.family, "reference or a JSON file of selector pairs");
    fit->add_option("--m-max", o.m_max, "largest halving depth in the grid");
    fit->add_option("--k-window", o.k_window, "residual shift window LO..HI");

    auto* win = add_common(app.add_subcommand("windows", "non-mixing windows as CSV"));
    win->add_option("--stages", o.stages, "stage range A..B");

    auto* ex2 = add_common(app.add_subcommand("example2", "mid-time decomposition probe"));
    ex2->add_option("--j", o.j, "stage")->required();
    ex2->add_option("--k", o.k_str, "offset");

    auto* lm2 = add_common(app.add_subcommand("lemma2", "almost-invariance probe as CSV"));
    lm2->add_option("--stages", o.stages, "stage range A..B");
    lm2->add_option("--a", o.a_sel, "first set selector");
    lm2->add_option("--b", o.b_sel, "second set selector");

    auto* ovl = app.add_subcommand("sidon-overlap", "|P ∩ (P+m)| profile as CSV");
    // long-only help so the bare name cannot collide with the --h option below
    ovl->set_help_flag("--help", "print help and exit");
    ovl->add_option("--h", o.h, "tower height parameter")->required();
    ovl->add_option("--eps", o.eps, "top fraction excluded from block lengths")->required();
    ovl->add_option("--m-from", o.m_from, "first shift");
    ovl->add_option("--m-to", o.m_to, "last shift (default: max of P)");
    ovl->add_option("--out", o.out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("config_error", e.what()) << "\n";
        return 2;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const ConfigError& e) {
        std::cerr << error_json("config_error", e.what()) << "\n";
        return 2;
    } catch (const Unresolvable& e) {
        std::cerr << error_json("unresolvable", e.what(), e.stage()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal_error", e.what()) << "\n";
        return 1;
    }
}
