#include "robin/oracle.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace robin::oracle {

SigmaTable::SigmaTable(std::uint64_t max) : max_(max), values_(max + 1, 0) {
    if (max < 1) throw std::invalid_argument("SigmaTable requires max >= 1");
    for (std::uint64_t d = 1; d <= max; ++d) {
        for (std::uint64_t m = d; m <= max; m += d) values_[m] += d;
    }
}

std::uint64_t SigmaTable::sigma(std::uint64_t k) const {
    if (k < 1 || k > max_) throw std::out_of_range("sigma query outside table");
    return values_[k];
}

std::vector<std::uint64_t> superabundant_bruteforce(const SigmaTable& table, std::uint64_t max) {
    if (max > table.max()) throw std::out_of_range("max beyond table bound");
    std::vector<std::uint64_t> out;
    std::uint64_t best_n = 0;
    std::uint64_t best_sigma = 0;
    for (std::uint64_t k = 1; k <= max; ++k) {
        // sigma(k)/k > sigma(best)/best, exactly
        unsigned __int128 lhs = static_cast<unsigned __int128>(table.sigma(k)) * best_n;
        unsigned __int128 rhs = static_cast<unsigned __int128>(best_sigma) * k;
        if (best_n == 0 || lhs > rhs) {
            out.push_back(k);
            best_n = k;
            best_sigma = table.sigma(k);
        }
    }
    return out;
}

namespace {

// Sign of f(j) - f(k) at eps = u/v, where f(x) = sigma(x)/x^(1+eps):
// compare sigma(j)^v * k^(v+u) against sigma(k)^v * j^(v+u). Exact.
int cmp_f(const SigmaTable& table, std::uint64_t j, std::uint64_t k, unsigned long u,
          unsigned long v) {
    mpz_class lhs, rhs, t;
    mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(table.sigma(j)), v);
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(k), v + u);
    lhs *= t;
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(table.sigma(k)), v);
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(j), v + u);
    rhs *= t;
    return cmp(lhs, rhs);
}

// Index of the f-maximizer among cands[lo..hi] (inclusive) at eps = u/v.
// Ties resolve to the smaller candidate.
std::size_t argmax_range(const SigmaTable& table, const std::vector<std::uint64_t>& cands,
                         std::size_t lo, std::size_t hi, unsigned long u, unsigned long v) {
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (cmp_f(table, cands[i], cands[best], u, v) > 0) best = i;
    }
    return best;
}

// Simplest rational strictly inside the open interval (lo, hi), by the
// Stern-Brocot / continued-fraction construction. Keeps probe denominators
// (and therefore the exact power comparisons) small.
mpq_class simplest_between(const mpq_class& lo, const mpq_class& hi) {
    if (!(lo < hi)) throw std::invalid_argument("empty interval");
    mpz_class fl = lo.get_num() / lo.get_den();  // floor for non-negative lo
    if (lo.get_num() < 0) throw std::invalid_argument("negative bounds unsupported");
    mpq_class candidate(fl + 1);
    if (candidate > lo && candidate < hi) return candidate;
    mpq_class lo_frac = lo - mpq_class(fl);
    mpq_class hi_frac = hi - mpq_class(fl);
    if (lo_frac == 0) {
        // (0, hi_frac): pick 1/(floor(1/hi_frac) + 1)
        mpq_class inv = 1 / hi_frac;
        mpz_class n = inv.get_num() / inv.get_den() + 1;
        return mpq_class(fl) + mpq_class(1) / mpq_class(n);
    }
    mpq_class inner = simplest_between(1 / hi_frac, 1 / lo_frac);
    return mpq_class(fl) + 1 / inner;
}

struct Probe {
    mpq_class eps;
    std::size_t argmax_index;
};

void split_u_v(const mpq_class& eps, unsigned long& u, unsigned long& v) {
    if (!eps.get_num().fits_ulong_p() || !eps.get_den().fits_ulong_p()) {
        throw std::runtime_error("probe epsilon denominator grew unexpectedly large");
    }
    u = eps.get_num().get_ui();
    v = eps.get_den().get_ui();
}

}  // namespace

std::vector<std::uint64_t> ca_bruteforce(std::uint64_t max) {
    if (max < 2) throw std::invalid_argument("ca_bruteforce requires max >= 2");
    SigmaTable table(2 * max);

    std::vector<std::uint64_t> sa_double = superabundant_bruteforce(table, 2 * max);
    // 1 is never reported as CA; drop it from the candidate pool.
    std::vector<std::uint64_t> cands_full(sa_double.begin() + 1, sa_double.end());
    std::vector<std::uint64_t> cands;
    for (std::uint64_t n : cands_full) {
        if (n <= max) cands.push_back(n);
    }
    if (cands.empty()) return {};

    std::set<std::uint64_t> accepted;
    auto consider = [&](const mpq_class& eps, std::size_t idx) {
        std::uint64_t n = cands[idx];
        if (accepted.count(n)) return;
        if (n * 2 > max) {
            // Truncation guard: a maximizer in the upper half of the scan
            // range must still dominate when the bound is doubled.
            unsigned long u, v;
            split_u_v(eps, u, v);
            std::size_t g = argmax_range(table, cands_full, 0, cands_full.size() - 1, u, v);
            if (cands_full[g] != n) return;
        }
        accepted.insert(n);
    };

    auto probe = [&](const mpq_class& eps, std::size_t lo, std::size_t hi) {
        unsigned long u, v;
        split_u_v(eps, u, v);
        return argmax_range(table, cands, lo, hi, u, v);
    };

    // The maximizer index is a monotone step function of eps (supermodularity
    // of log sigma(k) - (1+eps) log k), so recursive refinement between
    // differing endpoint maximizers finds every attained value. Refinement
    // stops once endpoints are adjacent candidates or the bracket is shorter
    // than any realistic constancy interval.
    const mpq_class min_len(1, 1u << 14);
    struct Bracket {
        mpq_class eps_lo, eps_hi;
        std::size_t idx_lo, idx_hi;  // argmax at eps_lo >= argmax at eps_hi
    };

    mpq_class eps_left(1, 256);
    mpq_class eps_right(1);
    Probe left{eps_left, probe(eps_left, 0, cands.size() - 1)};
    Probe right{eps_right, probe(eps_right, 0, cands.size() - 1)};
    consider(left.eps, left.argmax_index);
    consider(right.eps, right.argmax_index);

    std::vector<Bracket> stack;
    stack.push_back({left.eps, right.eps, left.argmax_index, right.argmax_index});
    while (!stack.empty()) {
        Bracket br = stack.back();
        stack.pop_back();
        if (br.idx_lo <= br.idx_hi) continue;
        // Keep refining while an intermediate maximizer could hide between the
        // endpoints, or while an endpoint value still lacks an accepted
        // witness (its best witnesses sit just below its upper breakpoint).
        bool gap = br.idx_lo - br.idx_hi >= 2;
        bool unwitnessed =
            !accepted.count(cands[br.idx_lo]) || !accepted.count(cands[br.idx_hi]);
        if (!gap && !unwitnessed) continue;
        if (br.eps_hi - br.eps_lo < min_len) continue;
        // Pick a simple rational in the middle third so brackets shrink
        // geometrically while probe denominators stay small.
        mpq_class third = (br.eps_hi - br.eps_lo) / 3;
        mpq_class mid = simplest_between(br.eps_lo + third, br.eps_hi - third);
        std::size_t idx_mid = probe(mid, br.idx_hi, br.idx_lo);
        consider(mid, idx_mid);
        if (idx_mid < br.idx_lo) stack.push_back({br.eps_lo, mid, br.idx_lo, idx_mid});
        if (idx_mid > br.idx_hi) stack.push_back({mid, br.eps_hi, idx_mid, br.idx_hi});
    }

    return {accepted.begin(), accepted.end()};
}

}  // namespace robin::oracle
