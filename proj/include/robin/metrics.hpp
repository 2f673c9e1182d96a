#ifndef ROBIN_METRICS_HPP
#define ROBIN_METRICS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>

#include "robin/ca_engine.hpp"
#include "robin/interval.hpp"

namespace robin::metrics {

using ca::CAStep;
using ca::FactoredCA;
using num::HPInterval;

struct Options {
    mpfr_prec_t precision = num::kDefaultPrecision;
    mpfr_prec_t precision_cap = num::kPrecisionCap;
};

/// G(n) = sigma(n) / (n log log n) as a certified interval,
/// evaluated as exp(log_abundancy) / ln(log_n). Requires n >= 3.
HPInterval g_value(const FactoredCA& state, mpfr_prec_t precision = num::kDefaultPrecision);

enum class RobinKind { Satisfies, Violates, Boundary, Undecided };

struct RobinVerdict {
    RobinKind kind = RobinKind::Undecided;
    std::optional<HPInterval> g;       // absent for n = 2 (log log n <= 0)
    std::optional<HPInterval> margin;  // e^gamma - G(n)
    mpfr_prec_t achieved_precision = 0;
};

/// Certified Robin verdict with automatic precision escalation up to the cap.
/// n <= 5040 is Boundary regardless of the comparison. A Greater comparison
/// is re-confirmed at the cap before Violates is ever reported.
RobinVerdict robin_check(const FactoredCA& state, const Options& opts = {});

/// Exact abundancy-index ratio sigma(n)m/(sigma(m)n) across one step,
/// classified by which quotient primes are new vs existing.
struct RatioCase {
    enum class Tag {
        NewPrime,
        ExistingPrime,
        SemiNewNew,
        SemiNewExisting,
        SemiExistingNew,
        SemiExistingExisting,
    };
    Tag tag;
    mpq_class exact_ratio;  // always > 1
};

RatioCase abundancy_ratio_exact(const CAStep& step);

/// Cross-check of the ratio laws across one transition m -> n.
/// Exact mode (both values materialized): rational equality against the
/// factorization sigmas. Otherwise: exp(delta log_abundancy) must contain
/// the exact rational.
bool verify_lemma45(const CAStep& step, const FactoredCA& m, const FactoredCA& n);

/// ln(log m)/ln(log n) plus a rigorous upper bound on |ratio - 1| from the
/// expansion ln(log m) = ln(log n) + ln(1 - ln Q / log n).
struct Lemma1Result {
    HPInterval ratio;
    HPInterval deviation_bound;
};
Lemma1Result lemma1_ratio(const FactoredCA& m, const FactoredCA& n,
                          mpfr_prec_t precision = num::kDefaultPrecision);

/// (log n)^b / p_max; requires 0 < b < 1/2.
HPInterval lemma2_value(const FactoredCA& n, double b,
                        mpfr_prec_t precision = num::kDefaultPrecision);

/// (1/(p_max sigma(p_max^a)), 1/p_max).
std::pair<HPInterval, HPInterval> lemma3_pair(const FactoredCA& n,
                                              mpfr_prec_t precision = num::kDefaultPrecision);

/// p_max / log n.
HPInterval aek7_ratio(const FactoredCA& n, mpfr_prec_t precision = num::kDefaultPrecision);

enum class BandClass { Below, InBand, Above, Undecided };

/// Classification of a G interval against the band
/// (e^gamma, e^gamma (1 + c/(log n)^b)), exposed separately so synthetic
/// G fixtures can be classified by the same code path.
BandClass classify_band(const HPInterval& g, const HPInterval& log_n, double b, double c);

struct MarginReport {
    std::uint64_t step_index = 0;
    RobinVerdict robin;
    double band_b = 0.25;
    double band_c = 1.0;
    std::optional<HPInterval> normalized_excess;  // (G/e^gamma - 1)(log n)^b
    BandClass band = BandClass::Undecided;
    std::optional<HPInterval> lemma1;  // vs the predecessor state, when defined
    std::optional<HPInterval> lemma2;
    std::optional<HPInterval> aek7;
};

/// Band margin for a state beyond the Robin boundary (n > 5040).
MarginReport band_margin(const FactoredCA& n, double b, double c, const Options& opts = {});

/// Full per-step verification row; m may be the trivial n=1 state (its
/// lemma1 entry is then left empty).
MarginReport make_margin_report(const FactoredCA& m, const FactoredCA& n, const CAStep& step,
                                double b, double c, const Options& opts = {});

/// Theorem-7 Step-1 decomposition G(n)/G(m) =
/// (sigma(n)m/(sigma(m)n)) * (ln log m / ln log n).
struct Decomposition {
    HPInterval abundancy_ratio;
    HPInterval loglog_ratio;
    HPInterval product;
};
Decomposition growth_decomposition(const FactoredCA& m, const FactoredCA& n, const CAStep& step,
                                   mpfr_prec_t precision = num::kDefaultPrecision);

}  // namespace robin::metrics

#endif  // ROBIN_METRICS_HPP
