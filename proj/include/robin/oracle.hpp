#ifndef ROBIN_ORACLE_HPP
#define ROBIN_ORACLE_HPP

#include <cstdint>
#include <vector>

namespace robin::oracle {

/// Divisor-sum sieve over [1, max]. All queries are exact integers.
class SigmaTable {
public:
    explicit SigmaTable(std::uint64_t max);

    std::uint64_t max() const { return max_; }
    /// sigma(k) = sum of divisors of k; throws when k is out of range.
    std::uint64_t sigma(std::uint64_t k) const;

private:
    std::uint64_t max_;
    std::vector<std::uint64_t> values_;
};

/// All superabundant numbers <= max: n with sigma(n)/n > sigma(k)/k for every
/// k < n, decided by exact cross-multiplication. Includes 1.
std::vector<std::uint64_t> superabundant_bruteforce(const SigmaTable& table, std::uint64_t max);

/// All colossally abundant numbers <= max: n maximizing sigma(k)/k^(1+eps)
/// over all k for some eps > 0. Every comparison is exact integer arithmetic
/// on rational test exponents; no floating point is involved. Maximizers
/// above max/2 are only accepted after re-verification against a doubled
/// table (truncation guard).
std::vector<std::uint64_t> ca_bruteforce(std::uint64_t max);

}  // namespace robin::oracle

#endif  // ROBIN_ORACLE_HPP
