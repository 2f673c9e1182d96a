#ifndef ROBIN_CA_ENGINE_HPP
#define ROBIN_CA_ENGINE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "robin/interval.hpp"
#include "robin/primes.hpp"

namespace robin::ca {

using num::HPInterval;

/// Run of consecutive support primes sharing one exponent. Exponents are
/// non-increasing along the support, so a handful of runs cover the whole
/// factorization even when the support holds tens of thousands of primes.
struct ExponentRun {
    std::uint64_t exponent;
    std::uint64_t count;
};

/// A colossally abundant number in factored form. The support is always an
/// initial segment of the primes; n itself is only materialized while it
/// fits under the exact-value bound.
class FactoredCA {
public:
    std::vector<std::uint64_t> primes;  // ascending support
    std::vector<ExponentRun> runs;      // non-increasing exponents, counts sum to primes.size()
    HPInterval log_n;                   // contains sum a_p ln p
    HPInterval log_abundancy;           // contains ln(sigma(n)/n)
    std::uint64_t step_index = 0;
    std::optional<mpz_class> exact_value;  // n while <= exact bound; 1 for the empty product

    std::uint64_t exponent_at(std::size_t prime_index) const;
    /// Exponent of p in n, 0 if p is not in the support.
    std::uint64_t exponent_of(std::uint64_t p) const;
    std::uint64_t p_max() const;

    /// Exact sigma(n) from the factorization (meaningful at exact-mode scale;
    /// cost grows with n, so callers gate on exact_value).
    mpz_class sigma_exact() const;

    bool invariants_hold() const;
};

/// Smallest epsilon at which raising p's exponent to a still preserves the
/// sigma(k)/k^(1+eps) maximum: ln((p^(a+1)-1)/(p^a-1))/ln p - 1.
/// Strictly positive, strictly decreasing in a and in p.
HPInterval critical_epsilon(std::uint64_t p, std::uint64_t a,
                            mpfr_prec_t precision = num::kDefaultPrecision);

/// Pending exponent transition (p, a) keyed by its critical epsilon.
struct CriticalEvent {
    std::uint64_t p;
    std::uint64_t target_exponent;  // >= 1; 1 means p would be a new factor
    HPInterval epsilon;
};

/// Transition record between consecutive CA numbers.
struct CAStep {
    enum class Kind { Prime, Semiprime };

    struct QuotientPrime {
        std::uint64_t p;
        std::uint64_t prior_exponent;  // exponent in m, 0 if p is new
    };

    Kind kind = Kind::Prime;
    std::vector<QuotientPrime> quotient;  // one or two entries
    HPInterval epsilon;                   // epsilon of the applied event(s)
    bool tie = false;                     // true when the precision cap failed to separate
    std::uint64_t step_index = 0;
};

/// From-scratch (log n, log sigma(n)/n) at the requested precision.
std::pair<HPInterval, HPInterval> recompute_logs(const FactoredCA& state,
                                                 mpfr_prec_t precision);

/// Theorem-level sanity check on an emitted step: the quotient must be one
/// prime or two distinct primes.
bool verify_step(const CAStep& step);

/// Sequential generator of the CA sequence via the critical-epsilon queue.
class CaGenerator {
public:
    struct Options {
        mpfr_prec_t precision = num::kDefaultPrecision;
        mpfr_prec_t precision_cap = num::kPrecisionCap;
        mpz_class exact_bound = mpz_class(1000000000);  // keep n exact while <= this
    };

    CaGenerator();
    explicit CaGenerator(Options options);

    const FactoredCA& state() const { return state_; }
    const Options& options() const { return options_; }

    /// Advance to the next CA number, returning the transition.
    CAStep next();

    /// Pending queue contents as (p, target exponent), sorted by p.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> queue_snapshot() const;

    /// Rebuild a generator mid-run from a restored state. The queue is
    /// reconstructed from the support (one event per support prime plus one
    /// for the next unused prime) and must match `expected_queue` if given.
    static CaGenerator resume(FactoredCA state, Options options,
                              const std::vector<std::pair<std::uint64_t, std::uint64_t>>*
                                  expected_queue = nullptr);

private:
    struct EventOrder {
        bool operator()(const CriticalEvent& a, const CriticalEvent& b) const {
            int c = mpfr_cmp(a.epsilon.hi(), b.epsilon.hi());
            if (c != 0) return c < 0;  // max-heap on upper bound
            return a.p > b.p;          // deterministic tie-break: smaller prime first
        }
    };

    void apply_event(const CriticalEvent& ev, CAStep& step);
    CriticalEvent pop_certified_max(bool& tie, std::optional<CriticalEvent>& second);

    Options options_;
    FactoredCA state_;
    primes::PrimeStream stream_;
    std::uint64_t next_unused_prime_ = 0;
    std::priority_queue<CriticalEvent, std::vector<CriticalEvent>, EventOrder> queue_;
    bool exact_overflowed_ = false;
};

}  // namespace robin::ca

#endif  // ROBIN_CA_ENGINE_HPP
