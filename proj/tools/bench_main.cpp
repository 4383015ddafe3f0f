#include "wstar/suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>

// Compares the serial reference execution of the property suites against the
// OpenMP path and checks that both produce identical reports.

int main(int argc, char** argv) {
    CLI::App app{"wstar suite benchmark: serial reference vs OpenMP"};
    std::string suite = "isotr";
    long long instances = 64;
    std::uint64_t seed = 2026;
    app.add_option("--suite", suite, "suite: isotr|module|fibers|atdu|st1");
    app.add_option("--instances", instances, "instances per run");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    using clock = std::chrono::steady_clock;
    wstar::SuiteOptions options;
    options.instances = instances;
    options.seed = seed;

    options.exec = wstar::Exec::serial;
    auto t0 = clock::now();
    wstar::SuiteReport serial = wstar::run_suite(suite, options);
    auto t1 = clock::now();

    options.exec = wstar::Exec::openmp;
    auto t2 = clock::now();
    wstar::SuiteReport parallel = wstar::run_suite(suite, options);
    auto t3 = clock::now();

    const double serial_s = std::chrono::duration<double>(t1 - t0).count();
    const double parallel_s = std::chrono::duration<double>(t3 - t2).count();
    const bool identical = wstar::suite_report_to_json(serial).dump() ==
                           wstar::suite_report_to_json(parallel).dump();

    std::printf("suite %s, %lld instances, %d threads\n", suite.c_str(), instances,
                wstar::max_threads());
    std::printf("serial reference: %.3f s\n", serial_s);
    std::printf("openmp          : %.3f s\n", parallel_s);
    std::printf("speedup         : %.2fx\n", parallel_s > 0 ? serial_s / parallel_s : 0.0);
    std::printf("reports identical: %s\n", identical ? "yes" : "NO");
    std::printf("suite pass: %s\n", serial.pass ? "yes" : "NO");
    return identical && serial.pass ? 0 : 1;
}
