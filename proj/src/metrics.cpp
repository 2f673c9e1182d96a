#include "robin/metrics.hpp"

#include <stdexcept>

namespace robin::metrics {

using ca::recompute_logs;
using num::compare;
using num::HPInterval;
using num::Verdict;

namespace {

HPInterval one(mpfr_prec_t prec) { return HPInterval::from_int(1, prec); }

mpz_class sigma_prime_power(std::uint64_t p, std::uint64_t a) {
    mpz_class pz(p), num;
    mpz_pow_ui(num.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a + 1));
    num -= 1;
    return num / (pz - 1);
}

// Certified "n <= bound" decision from the factored state.
bool value_at_most(const FactoredCA& state, unsigned long bound) {
    if (state.exact_value) return *state.exact_value <= bound;
    for (mpfr_prec_t prec = num::kDefaultPrecision; prec <= num::kPrecisionCap; prec *= 2) {
        HPInterval threshold = num::ln_rational(mpz_class(bound) * 2 + 1, 2, prec);
        HPInterval log_n =
            prec == num::kDefaultPrecision ? state.log_n : recompute_logs(state, prec).first;
        Verdict v = compare(log_n, threshold);
        if (v == Verdict::Less) return true;
        if (v == Verdict::Greater) return false;
    }
    throw std::runtime_error("cannot separate n from the boundary at the precision cap");
}

std::pair<HPInterval, HPInterval> logs_at(const FactoredCA& state, mpfr_prec_t prec) {
    if (prec <= state.log_n.precision()) return {state.log_n, state.log_abundancy};
    return recompute_logs(state, prec);
}

HPInterval g_from_logs(const HPInterval& log_n, const HPInterval& log_ab) {
    if (compare(log_n, one(log_n.precision())) != Verdict::Greater) {
        throw std::domain_error("G(n) requires log n > 1 (n >= 3)");
    }
    return log_ab.exp() / log_n.log();
}

}  // namespace

HPInterval g_value(const FactoredCA& state, mpfr_prec_t precision) {
    auto [log_n, log_ab] = logs_at(state, precision);
    return g_from_logs(log_n, log_ab);
}

RobinVerdict robin_check(const FactoredCA& state, const Options& opts) {
    RobinVerdict out;
    bool boundary = value_at_most(state, 5040);

    bool g_defined = !value_at_most(state, 2);
    for (mpfr_prec_t prec = opts.precision;; prec *= 2) {
        if (prec > opts.precision_cap) prec = opts.precision_cap;
        out.achieved_precision = prec;
        HPInterval eg = num::exp_gamma(prec);
        if (g_defined) {
            auto [log_n, log_ab] = logs_at(state, prec);
            out.g = g_from_logs(log_n, log_ab);
            out.margin = eg - *out.g;
        }
        if (boundary) {
            out.kind = RobinKind::Boundary;
            return out;
        }
        Verdict v = compare(*out.g, eg);
        if (v == Verdict::Less) {
            out.kind = RobinKind::Satisfies;
            return out;
        }
        if (v == Verdict::Greater) {
            // Sensational-finding guard: confirm at the cap before claiming a
            // violation.
            auto [log_n, log_ab] = logs_at(state, opts.precision_cap);
            HPInterval g_cap = g_from_logs(log_n, log_ab);
            HPInterval eg_cap = num::exp_gamma(opts.precision_cap);
            Verdict vc = compare(g_cap, eg_cap);
            out.g = g_cap;
            out.margin = eg_cap - g_cap;
            out.achieved_precision = opts.precision_cap;
            if (vc == Verdict::Greater) {
                out.kind = RobinKind::Violates;
            } else if (vc == Verdict::Less) {
                out.kind = RobinKind::Satisfies;
            } else {
                out.kind = RobinKind::Undecided;
            }
            return out;
        }
        if (prec >= opts.precision_cap) {
            out.kind = RobinKind::Undecided;
            return out;
        }
    }
}

RatioCase abundancy_ratio_exact(const CAStep& step) {
    if (step.quotient.empty() || step.quotient.size() > 2) {
        throw std::invalid_argument("step must carry one or two quotient primes");
    }
    mpq_class ratio = 1;
    bool is_new[2] = {false, false};
    for (std::size_t i = 0; i < step.quotient.size(); ++i) {
        const auto& q = step.quotient[i];
        is_new[i] = q.prior_exponent == 0;
        if (is_new[i]) {
            ratio *= mpq_class(q.p + 1, q.p);
        } else {
            mpz_class ps = sigma_prime_power(q.p, q.prior_exponent) * q.p;
            mpq_class f(ps + 1);
            f /= mpq_class(ps);
            ratio *= f;
        }
    }
    ratio.canonicalize();

    RatioCase out;
    out.exact_ratio = ratio;
    if (step.quotient.size() == 1) {
        out.tag = is_new[0] ? RatioCase::Tag::NewPrime : RatioCase::Tag::ExistingPrime;
    } else if (is_new[0] && is_new[1]) {
        out.tag = RatioCase::Tag::SemiNewNew;
    } else if (is_new[0]) {
        out.tag = RatioCase::Tag::SemiNewExisting;
    } else if (is_new[1]) {
        out.tag = RatioCase::Tag::SemiExistingNew;
    } else {
        out.tag = RatioCase::Tag::SemiExistingExisting;
    }
    return out;
}

bool verify_lemma45(const CAStep& step, const FactoredCA& m, const FactoredCA& n) {
    mpq_class expected = abundancy_ratio_exact(step).exact_ratio;
    if (m.exact_value && n.exact_value) {
        mpq_class lhs(n.sigma_exact() * *m.exact_value);
        lhs /= mpq_class(m.sigma_exact() * *n.exact_value);
        lhs.canonicalize();
        return lhs == expected;
    }
    HPInterval delta = (n.log_abundancy - m.log_abundancy).exp();
    return delta.contains(expected);
}

Lemma1Result lemma1_ratio(const FactoredCA& m, const FactoredCA& n, mpfr_prec_t precision) {
    auto [log_m, log_ab_m] = logs_at(m, precision);
    auto [log_n, log_ab_n] = logs_at(n, precision);
    (void)log_ab_m;
    (void)log_ab_n;
    HPInterval unit = one(precision);
    if (compare(log_m, unit) != Verdict::Greater || compare(log_n, unit) != Verdict::Greater) {
        throw std::domain_error("lemma1_ratio requires log log > 0 (both states >= 3)");
    }
    HPInterval lnlog_m = log_m.log();
    HPInterval lnlog_n = log_n.log();

    Lemma1Result out{lnlog_m / lnlog_n, HPInterval(precision)};

    // |ratio - 1| = |ln(1 - x)| / ln(log n) with x = ln Q / log n, and
    // |ln(1 - x)| <= x + x^2 / (2(1 - x)) for 0 <= x < 1.
    HPInterval ln_q = log_n - log_m;
    HPInterval x = ln_q / log_n;
    HPInterval rest = unit - x;
    if (!rest.is_positive()) throw std::domain_error("lemma1 deviation bound requires ln Q < log n");
    HPInterval bound = (x + x * x / (HPInterval::from_int(2, precision) * rest)) / lnlog_n;
    out.deviation_bound = bound;
    return out;
}

HPInterval lemma2_value(const FactoredCA& n, double b, mpfr_prec_t precision) {
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("b must lie in (0, 1/2)");
    if (n.primes.empty()) throw std::domain_error("lemma2_value requires a nonempty factorization");
    auto [log_n, log_ab] = logs_at(n, precision);
    (void)log_ab;
    return log_n.pow(HPInterval::from_double(b, precision)) /
           HPInterval::from_ui(n.p_max(), precision);
}

std::pair<HPInterval, HPInterval> lemma3_pair(const FactoredCA& n, mpfr_prec_t precision) {
    std::uint64_t p = n.p_max();
    std::uint64_t a = n.exponent_of(p);
    mpz_class ps = sigma_prime_power(p, a) * p;
    return {HPInterval::from_mpz(ps, precision).reciprocal(),
            HPInterval::from_ui(p, precision).reciprocal()};
}

HPInterval aek7_ratio(const FactoredCA& n, mpfr_prec_t precision) {
    auto [log_n, log_ab] = logs_at(n, precision);
    (void)log_ab;
    return HPInterval::from_ui(n.p_max(), precision) / log_n;
}

BandClass classify_band(const HPInterval& g, const HPInterval& log_n, double b, double c) {
    mpfr_prec_t prec = std::max(g.precision(), log_n.precision());
    HPInterval eg = num::exp_gamma(prec);
    Verdict v = compare(g, eg);
    if (v == Verdict::Less) return BandClass::Below;
    if (v == Verdict::Overlap) return BandClass::Undecided;
    HPInterval threshold =
        eg * (one(prec) + HPInterval::from_double(c, prec) /
                              log_n.pow(HPInterval::from_double(b, prec)));
    v = compare(g, threshold);
    if (v == Verdict::Less) return BandClass::InBand;
    if (v == Verdict::Greater) return BandClass::Above;
    return BandClass::Undecided;
}

MarginReport band_margin(const FactoredCA& n, double b, double c, const Options& opts) {
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("b must lie in (0, 1/2)");
    if (c <= 0.0) throw std::domain_error("c must be positive");
    if (value_at_most(n, 5040)) throw std::domain_error("band margin is defined for n > 5040");

    MarginReport out;
    out.step_index = n.step_index;
    out.band_b = b;
    out.band_c = c;
    out.robin = robin_check(n, opts);

    for (mpfr_prec_t prec = opts.precision;; prec *= 2) {
        if (prec > opts.precision_cap) prec = opts.precision_cap;
        auto [log_n, log_ab] = logs_at(n, prec);
        HPInterval g = g_from_logs(log_n, log_ab);
        HPInterval eg = num::exp_gamma(prec);
        out.normalized_excess =
            (g / eg - one(prec)) * log_n.pow(HPInterval::from_double(b, prec));
        out.band = classify_band(g, log_n, b, c);
        if (out.band != BandClass::Undecided || prec >= opts.precision_cap) break;
    }
    return out;
}

MarginReport make_margin_report(const FactoredCA& m, const FactoredCA& n, const CAStep& step,
                                double b, double c, const Options& opts) {
    (void)step;
    MarginReport out;
    if (!value_at_most(n, 5040)) {
        out = band_margin(n, b, c, opts);
    } else {
        out.robin = robin_check(n, opts);
        out.band_b = b;
        out.band_c = c;
    }
    out.step_index = n.step_index;
    if (!m.primes.empty() && !value_at_most(m, 2)) {
        out.lemma1 = lemma1_ratio(m, n, opts.precision).ratio;
    }
    if (!n.primes.empty()) {
        out.lemma2 = lemma2_value(n, b, opts.precision);
        out.aek7 = aek7_ratio(n, opts.precision);
    }
    return out;
}

Decomposition growth_decomposition(const FactoredCA& m, const FactoredCA& n, const CAStep& step,
                                   mpfr_prec_t precision) {
    if (m.step_index == n.step_index) {
        return {one(precision), one(precision), one(precision)};
    }
    HPInterval abundancy =
        HPInterval::from_mpq(abundancy_ratio_exact(step).exact_ratio, precision);
    HPInterval loglog = lemma1_ratio(m, n, precision).ratio;
    return {abundancy, loglog, abundancy * loglog};
}

}  // namespace robin::metrics
