#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace egz::suites {

/// Outcome of one randomized property batch.
struct SuiteResult {
    std::string name;
    std::size_t instances = 0;
    std::size_t passed = 0;
    std::string first_failure;  // empty when everything passed

    [[nodiscard]] bool ok() const noexcept { return instances > 0 && passed == instances; }
};

/// Names accepted by run_suite, in display order.
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs `trials` random instances of the named property (per size class where
/// the suite has several). Deterministic in `seed`. Throws std::invalid_argument
/// for an unknown name.
[[nodiscard]] SuiteResult run_suite(const std::string& name, std::size_t trials,
                                    std::uint64_t seed);

}  // namespace egz::suites
