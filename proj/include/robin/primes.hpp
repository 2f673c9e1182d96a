#ifndef ROBIN_PRIMES_HPP
#define ROBIN_PRIMES_HPP

#include <cstdint>
#include <vector>

namespace robin::primes {

/// Ascending stream of all primes, backed by a segmented sieve whose window
/// doubles whenever the current one is exhausted.
class PrimeStream {
public:
    PrimeStream();

    /// Smallest prime greater than everything returned so far (2, 3, 5, ...).
    std::uint64_t next_prime();

    /// Primes emitted so far, in order.
    const std::vector<std::uint64_t>& emitted() const { return emitted_; }

private:
    void extend();

    std::vector<std::uint64_t> base_;     // primes <= sqrt(limit_), for sieving
    std::vector<std::uint64_t> pending_;  // sieved but not yet emitted (reversed)
    std::vector<std::uint64_t> emitted_;
    std::uint64_t limit_ = 1;  // sieved through [2, limit_]
};

/// Deterministic primality by trial division; sized for quotient primes
/// (~log n), not cryptographic magnitudes. Throws on k < 2.
bool is_prime(std::uint64_t k);

}  // namespace robin::primes

#endif  // ROBIN_PRIMES_HPP
