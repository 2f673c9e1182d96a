#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "robin/primes.hpp"

namespace {

// Independent oracle: plain Eratosthenes bitmap, no segmentation, no windows.
std::vector<bool> sieve_oracle(std::uint64_t limit) {
    std::vector<bool> is(limit + 1, true);
    is[0] = is[1] = false;
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (!is[p]) continue;
        for (std::uint64_t m = p * p; m <= limit; m += p) is[m] = false;
    }
    return is;
}

}  // namespace

TEST_CASE("PrimeStream matches a flat sieve through 10^6") {
    const std::uint64_t limit = 1000000;
    auto is = sieve_oracle(limit);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t k = 2; k <= limit; ++k) {
        if (is[k]) expected.push_back(k);
    }
    CHECK(expected.size() == 78498);  // pi(10^6)
    CHECK(expected[24] == 97);        // 25th prime

    robin::primes::PrimeStream stream;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        REQUIRE(stream.next_prime() == expected[i]);
    }
    // The stream keeps going past any pre-sieved bound.
    CHECK(stream.next_prime() == 1000003);
    CHECK(stream.emitted().size() == expected.size() + 1);
    CHECK(stream.emitted()[24] == 97);
}

TEST_CASE("is_prime agrees with the sieve and handles edge cases") {
    const std::uint64_t limit = 20000;
    auto is = sieve_oracle(limit);
    for (std::uint64_t k = 2; k <= limit; ++k) {
        CAPTURE(k);
        REQUIRE(robin::primes::is_prime(k) == is[k]);
    }
    CHECK(robin::primes::is_prime(1000003));
    CHECK(!robin::primes::is_prime(1000001));  // 101 * 9901
    CHECK(robin::primes::is_prime(2147483647));  // 2^31 - 1
    CHECK_THROWS_AS((void)robin::primes::is_prime(1), std::domain_error);
    CHECK_THROWS_AS((void)robin::primes::is_prime(0), std::domain_error);
}
