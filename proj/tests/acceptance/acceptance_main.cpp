#include <salpeter/validation.hpp>

#include <cstdio>

int main()
{
    salpeter::ValidationOptions options;
    options.suite = salpeter::Suite::full;
    options.fixture_dir = SALPETER_FIXTURE_DIR;
    const salpeter::ValidationReport report = salpeter::validate(options);

    // Individual failures first, so the summary lines stay at the bottom.
    for (const auto& c : report.checks)
        if (!c.passed)
            std::printf("  failed [%d] %s: %.6g %s %.6g\n", c.criterion, c.name.c_str(), c.measured,
                        c.lower_bound ? ">=" : "<=", c.tolerance);

    int failed = 0;
    for (int n = 1; n <= 12; ++n) {
        const bool ok = report.criterion_passed(n);
        failed += !ok;
        const auto it = report.seconds.find(n);
        std::printf("criterion %d (%s): %s  [%.1f s]\n", n, salpeter::criterion_title(n), ok ? "PASS" : "FAIL",
                    it == report.seconds.end() ? 0.0 : it->second);
    }
    std::printf("%zu checks, %d criteria failed\n", report.checks.size(), failed);
    return failed == 0 ? 0 : 1;
}
