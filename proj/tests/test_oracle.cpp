#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "robin/oracle.hpp"

using robin::oracle::ca_bruteforce;
using robin::oracle::SigmaTable;
using robin::oracle::superabundant_bruteforce;

TEST_CASE("sigma table fixtures and multiplicativity") {
    SigmaTable table(100000);
    CHECK(table.sigma(1) == 1);
    CHECK(table.sigma(2) == 3);
    CHECK(table.sigma(6) == 12);
    CHECK(table.sigma(12) == 28);
    CHECK(table.sigma(5040) == 19344);
    CHECK(table.sigma(55440) == 232128);
    CHECK(table.sigma(97) == 98);  // prime
    CHECK_THROWS_AS((void)table.sigma(0), std::out_of_range);
    CHECK_THROWS_AS((void)table.sigma(100001), std::out_of_range);

    // sigma is multiplicative on coprime pairs.
    std::mt19937_64 rng(20260823);
    std::uniform_int_distribution<std::uint64_t> dist(2, 300);
    int checked = 0;
    while (checked < 200) {
        std::uint64_t a = dist(rng), b = dist(rng);
        if (std::gcd(a, b) != 1) continue;
        REQUIRE(table.sigma(a * b) == table.sigma(a) * table.sigma(b));
        ++checked;
    }
}

TEST_CASE("superabundant prefix matches the known list") {
    SigmaTable table(100000);
    auto sa = superabundant_bruteforce(table, 100000);
    std::vector<std::uint64_t> head(sa.begin(), sa.begin() + 10);
    CHECK(head == std::vector<std::uint64_t>{1, 2, 4, 6, 12, 24, 36, 48, 60, 120});
    CHECK(std::is_sorted(sa.begin(), sa.end()));
    // Each entry strictly beats all smaller entries in abundancy index,
    // re-verified here with a direct rational comparison.
    for (std::size_t i = 1; i < sa.size(); ++i) {
        unsigned __int128 lhs =
            static_cast<unsigned __int128>(table.sigma(sa[i])) * sa[i - 1];
        unsigned __int128 rhs =
            static_cast<unsigned __int128>(table.sigma(sa[i - 1])) * sa[i];
        REQUIRE(lhs > rhs);
    }
}

TEST_CASE("colossally abundant brute force matches the known list") {
    CHECK(ca_bruteforce(10000) ==
          std::vector<std::uint64_t>{2, 6, 12, 60, 120, 360, 2520, 5040});
    CHECK(ca_bruteforce(2) == std::vector<std::uint64_t>{2});
    CHECK(ca_bruteforce(100) == std::vector<std::uint64_t>{2, 6, 12, 60});
    CHECK(ca_bruteforce(1000000) ==
          std::vector<std::uint64_t>{2, 6, 12, 60, 120, 360, 2520, 5040, 55440, 720720});
}

TEST_CASE("every CA number is superabundant") {
    SigmaTable table(100000);
    auto sa = superabundant_bruteforce(table, 100000);
    for (std::uint64_t n : ca_bruteforce(100000)) {
        CHECK(std::binary_search(sa.begin(), sa.end(), n));
    }
}
