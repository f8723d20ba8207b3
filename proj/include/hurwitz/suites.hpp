#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hq {

struct SuiteResult {
    explicit SuiteResult(std::string n = {}) : name(std::move(n)) {}
    std::string name;
    int64_t cases = 0;
    int64_t failures = 0;
    std::string witness;  // first failure
    double seconds = 0.0;
    bool ok() const { return failures == 0; }
};

/// Ring laws, exact norm multiplicativity and both division algorithms on random triples
/// with doubled coordinates in [-coord_bound, coord_bound].
std::vector<SuiteResult> arithmetic_suite(int64_t triples, uint64_t seed, int64_t coord_bound = 40);

/// Lipschitz counts against 8 sum_{d | m, 4 !| d} d for m <= m_max, and 24 Hurwitz units.
SuiteResult jacobi_suite(int64_t m_max);

/// For every pair of right unit classes q, s with norm_sq <= max_norm: no nonzero difference
/// p q^-1 - r s^-1 is shorter than 1/(|q||s|). Checked exactly as a short-vector count.
SuiteResult separation_suite(int64_t max_norm, int workers = 1);

/// Pairwise separation_gap over all resonant points with norm_sq(q) <= max_norm.
SuiteResult separation_direct(int64_t max_norm);

}  // namespace hq
