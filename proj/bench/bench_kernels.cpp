// Compares the serial reference lag-window kernel against the OpenMP variant
// on reference offset tables, checking both return identical counts.

#include <chrono>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <vector>

#include "rank1/construction.hpp"
#include "rank1/io.hpp"
#include "rank1/kernel.hpp"

using namespace rank1;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
    std::int64_t w0, w1;
};

int run(bool quick) {
    Tower t(reference_spec(quick ? 5 : 6));
    const int K = t.max_stage();
    const OffsetTable tab = build_offset_table(t, 2, K, 200000000);
    std::cout << "offset table (2," << K << "): " << tab.size() << " positions, max "
              << tab.max_pos << "\n";

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> center(-tab.max_pos, tab.max_pos);
    std::vector<Case> cases;
    const int n_cases = quick ? 4 : 8;
    const std::int64_t width = quick ? 20000 : 200000;
    for (int i = 0; i < n_cases; ++i) {
        std::int64_t c = center(rng);
        cases.push_back({c - width / 2, c + width / 2});
    }
    cases.push_back({-width / 2, width / 2});

    const int thread_counts[] = {1, 2, 4, 8};
    double serial_total = 0.0;
    std::vector<LagWindow> serial_results;
    {
        auto t0 = std::chrono::steady_clock::now();
        for (const Case& c : cases) serial_results.push_back(lag_window_serial(tab, c.w0, c.w1));
        serial_total = seconds_since(t0);
    }
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "serial reference: " << serial_total << " s over " << cases.size()
              << " windows of width " << width << "\n";

    int rc = 0;
    for (int threads : thread_counts) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<LagWindow> par;
        for (const Case& c : cases) par.push_back(lag_window_parallel(tab, c.w0, c.w1, threads));
        const double secs = seconds_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < cases.size(); ++i)
            same = same && par[i].below == serial_results[i].below &&
                   par[i].counts == serial_results[i].counts;
        std::cout << "openmp threads=" << threads << ": " << secs << " s, speedup "
                  << (secs > 0 ? serial_total / secs : 0.0) << "x, "
                  << (same ? "bit-identical" : "MISMATCH") << "\n";
        if (!same) rc = 1;
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    return run(quick);
}
