#include "robin/primes.hpp"

#include <algorithm>
#include <stdexcept>

namespace robin::primes {

PrimeStream::PrimeStream() = default;

void PrimeStream::extend() {
    std::uint64_t lo = limit_ + 1;
    std::uint64_t hi = limit_ < 2048 ? 4096 : limit_ * 2;
    limit_ = hi;

    // Grow the base prime list to cover sqrt(hi) by simple sieve.
    std::uint64_t root = 2;
    while (root * root < hi) ++root;
    if (base_.empty() || base_.back() < root) {
        std::vector<bool> comp(root + 1, false);
        base_.clear();
        for (std::uint64_t i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            base_.push_back(i);
            for (std::uint64_t j = i * i; j <= root; j += i) comp[j] = true;
        }
    }

    std::vector<bool> comp(hi - lo + 1, false);
    for (std::uint64_t p : base_) {
        if (p * p > hi) break;
        std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (std::uint64_t j = start; j <= hi; j += p) comp[j - lo] = true;
    }
    // pending_ is consumed from the back
    for (std::uint64_t v = hi; v >= lo; --v) {
        if (v >= 2 && !comp[v - lo]) pending_.push_back(v);
        if (v == lo) break;
    }
}

std::uint64_t PrimeStream::next_prime() {
    while (pending_.empty()) extend();
    std::uint64_t p = pending_.back();
    pending_.pop_back();
    emitted_.push_back(p);
    return p;
}

bool is_prime(std::uint64_t k) {
    if (k < 2) throw std::domain_error("is_prime requires k >= 2");
    if (k < 4) return true;
    if (k % 2 == 0 || k % 3 == 0) return false;
    for (std::uint64_t d = 5; d * d <= k; d += 6) {
        if (k % d == 0 || k % (d + 2) == 0) return false;
    }
    return true;
}

}  // namespace robin::primes
