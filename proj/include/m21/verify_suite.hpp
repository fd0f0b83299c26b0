// SPDX-License-Identifier: Apache-2.0
//
// Named self-verification checks backing the `verify` subcommand: every
// closed form is replayed against the covariance oracle, the Monte-Carlo
// estimator against the closed forms, and the permutation predicates against
// exhaustive enumeration.  One line per check, deterministic for a fixed seed.

#ifndef M21_VERIFY_SUITE_HPP
#define M21_VERIFY_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace m21 {

struct CheckResult {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    std::string line() const;  // "PASS|FAIL <name> lhs=<v> rhs=<v> tol=<v>"
};

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t seed = 42;
    std::int64_t samples = 1'000'000;
    double tolerance = 1e-9;
};

std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts);

}  // namespace m21

#endif
