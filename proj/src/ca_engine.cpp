#include "robin/ca_engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace robin::ca {

using num::Verdict;

std::uint64_t FactoredCA::exponent_at(std::size_t prime_index) const {
    std::size_t start = 0;
    for (const auto& run : runs) {
        if (prime_index < start + run.count) return run.exponent;
        start += run.count;
    }
    throw std::out_of_range("prime index beyond support");
}

std::uint64_t FactoredCA::exponent_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p) return 0;
    return exponent_at(static_cast<std::size_t>(it - primes.begin()));
}

std::uint64_t FactoredCA::p_max() const {
    if (primes.empty()) throw std::logic_error("empty factorization has no largest prime");
    return primes.back();
}

mpz_class FactoredCA::sigma_exact() const {
    mpz_class sigma = 1;
    std::size_t idx = 0;
    for (const auto& run : runs) {
        for (std::uint64_t i = 0; i < run.count; ++i, ++idx) {
            mpz_class p(primes[idx]);
            mpz_class num;
            mpz_pow_ui(num.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(run.exponent + 1));
            num -= 1;
            sigma *= num / (p - 1);
        }
    }
    return sigma;
}

bool FactoredCA::invariants_hold() const {
    if (!std::is_sorted(primes.begin(), primes.end())) return false;
    std::uint64_t total = 0;
    std::uint64_t prev_exp = UINT64_MAX;
    for (const auto& run : runs) {
        if (run.exponent == 0 || run.count == 0) return false;
        if (run.exponent >= prev_exp) return false;
        prev_exp = run.exponent;
        total += run.count;
    }
    return total == primes.size();
}

HPInterval critical_epsilon(std::uint64_t p, std::uint64_t a, mpfr_prec_t precision) {
    if (a < 1) throw std::domain_error("critical_epsilon requires a >= 1");
    mpz_class pz(p);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a + 1));
    num -= 1;
    mpz_pow_ui(den.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a));
    den -= 1;
    HPInterval ratio = num::ln_rational(num, den, precision) / num::ln_rational(pz, 1, precision);
    return ratio - HPInterval::from_int(1, precision);
}

std::pair<HPInterval, HPInterval> recompute_logs(const FactoredCA& state, mpfr_prec_t precision) {
    HPInterval log_n(precision);
    HPInterval log_ab(precision);
    std::size_t idx = 0;
    for (const auto& run : state.runs) {
        for (std::uint64_t i = 0; i < run.count; ++i, ++idx) {
            mpz_class p(state.primes[idx]);
            HPInterval lnp = num::ln_rational(p, 1, precision);
            log_n += lnp * HPInterval::from_ui(run.exponent, precision);
            mpz_class num, den;
            mpz_pow_ui(num.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(run.exponent + 1));
            num -= 1;
            mpz_pow_ui(den.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(run.exponent));
            den *= (p - 1);
            log_ab += num::ln_rational(num, den, precision);
        }
    }
    return {log_n, log_ab};
}

bool verify_step(const CAStep& step) {
    if (step.quotient.empty() || step.quotient.size() > 2) return false;
    for (const auto& q : step.quotient) {
        if (!primes::is_prime(q.p)) return false;
    }
    if (step.quotient.size() == 2) {
        if (step.quotient[0].p == step.quotient[1].p) return false;
        if (step.kind != CAStep::Kind::Semiprime) return false;
    } else if (step.kind != CAStep::Kind::Prime) {
        return false;
    }
    return true;
}

CaGenerator::CaGenerator() : CaGenerator(Options()) {}

CaGenerator::CaGenerator(Options options) : options_(std::move(options)) {
    state_.log_n = HPInterval(options_.precision);
    state_.log_abundancy = HPInterval(options_.precision);
    state_.exact_value = mpz_class(1);
    next_unused_prime_ = stream_.next_prime();  // 2
    queue_.push({next_unused_prime_, 1, critical_epsilon(next_unused_prime_, 1, options_.precision)});
}

CaGenerator CaGenerator::resume(FactoredCA state, Options options,
                                const std::vector<std::pair<std::uint64_t, std::uint64_t>>*
                                    expected_queue) {
    CaGenerator gen(options);
    // Replay the stream so it points just past the support.
    gen.stream_ = primes::PrimeStream();
    for (std::uint64_t p : state.primes) {
        if (gen.stream_.next_prime() != p) {
            throw std::invalid_argument("support is not an initial segment of the primes");
        }
    }
    gen.next_unused_prime_ = gen.stream_.next_prime();
    gen.state_ = std::move(state);
    gen.exact_overflowed_ = !gen.state_.exact_value.has_value();

    decltype(gen.queue_) fresh;
    gen.queue_.swap(fresh);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rebuilt;
    std::size_t idx = 0;
    for (const auto& run : gen.state_.runs) {
        for (std::uint64_t i = 0; i < run.count; ++i, ++idx) {
            rebuilt.emplace_back(gen.state_.primes[idx], run.exponent + 1);
        }
    }
    rebuilt.emplace_back(gen.next_unused_prime_, 1);
    std::sort(rebuilt.begin(), rebuilt.end());
    if (expected_queue != nullptr && *expected_queue != rebuilt) {
        throw std::invalid_argument("checkpoint queue disagrees with state-derived queue");
    }
    for (const auto& [p, a] : rebuilt) {
        gen.queue_.push({p, a, critical_epsilon(p, a, options.precision)});
    }
    return gen;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> CaGenerator::queue_snapshot() const {
    auto copy = queue_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    while (!copy.empty()) {
        out.emplace_back(copy.top().p, copy.top().target_exponent);
        copy.pop();
    }
    std::sort(out.begin(), out.end());
    return out;
}

CriticalEvent CaGenerator::pop_certified_max(bool& tie, std::optional<CriticalEvent>& second) {
    tie = false;
    second.reset();
    while (true) {
        CriticalEvent top = queue_.top();
        queue_.pop();
        if (queue_.empty()) return top;

        const CriticalEvent& runner_up = queue_.top();
        Verdict v = num::compare(top.epsilon, runner_up.epsilon);
        if (v == Verdict::Greater) return top;

        mpfr_prec_t cur = top.epsilon.precision();
        if (cur < options_.precision_cap) {
            mpfr_prec_t next = std::min<mpfr_prec_t>(cur * 2, options_.precision_cap);
            CriticalEvent b = runner_up;
            queue_.pop();
            top.epsilon = critical_epsilon(top.p, top.target_exponent, next);
            b.epsilon = critical_epsilon(b.p, b.target_exponent, next);
            queue_.push(std::move(top));
            queue_.push(std::move(b));
            continue;
        }
        // Unresolvable at the cap: emit both as a semiprime step.
        tie = true;
        second = queue_.top();
        queue_.pop();
        return top;
    }
}

void CaGenerator::apply_event(const CriticalEvent& ev, CAStep& step) {
    const std::uint64_t p = ev.p;
    const std::uint64_t a = ev.target_exponent;
    step.quotient.push_back({p, a - 1});

    if (a == 1) {
        if (p != next_unused_prime_) throw std::logic_error("new-prime event out of order");
        state_.primes.push_back(p);
        if (!state_.runs.empty() && state_.runs.back().exponent == 1) {
            state_.runs.back().count += 1;
        } else {
            state_.runs.push_back({1, 1});
        }
        next_unused_prime_ = stream_.next_prime();
        queue_.push({next_unused_prime_, 1,
                     critical_epsilon(next_unused_prime_, 1, options_.precision)});
        queue_.push({p, 2, critical_epsilon(p, 2, options_.precision)});
    } else {
        auto it = std::lower_bound(state_.primes.begin(), state_.primes.end(), p);
        if (it == state_.primes.end() || *it != p) throw std::logic_error("unknown support prime");
        std::size_t idx = static_cast<std::size_t>(it - state_.primes.begin());
        std::size_t start = 0;
        std::size_t ri = 0;
        for (; ri < state_.runs.size(); ++ri) {
            if (idx < start + state_.runs[ri].count) break;
            start += state_.runs[ri].count;
        }
        // Only the first prime of a plateau can be incremented without
        // breaking exponent monotonicity.
        if (ri == state_.runs.size() || state_.runs[ri].exponent != a - 1 || idx != start) {
            throw std::logic_error("event queue invariant violation");
        }
        if (ri > 0 && state_.runs[ri - 1].exponent == a) {
            state_.runs[ri - 1].count += 1;
        } else {
            state_.runs.insert(state_.runs.begin() + static_cast<std::ptrdiff_t>(ri), {a, 1});
            ++ri;
        }
        state_.runs[ri].count -= 1;
        if (state_.runs[ri].count == 0) {
            state_.runs.erase(state_.runs.begin() + static_cast<std::ptrdiff_t>(ri));
        }
        queue_.push({p, a + 1, critical_epsilon(p, a + 1, options_.precision)});
    }

    mpz_class pz(p);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a + 1));
    num -= 1;
    mpz_pow_ui(den.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a));
    den -= 1;
    den *= pz;
    state_.log_n += num::ln_rational(pz, 1, options_.precision);
    state_.log_abundancy += num::ln_rational(num, den, options_.precision);

    if (!exact_overflowed_ && state_.exact_value) {
        *state_.exact_value *= pz;
        if (*state_.exact_value > options_.exact_bound) {
            state_.exact_value.reset();
            exact_overflowed_ = true;
        }
    }
}

CAStep CaGenerator::next() {
    CAStep step;
    step.step_index = state_.step_index + 1;

    bool tie = false;
    std::optional<CriticalEvent> second;
    CriticalEvent ev = pop_certified_max(tie, second);

    if (!tie) {
        step.kind = CAStep::Kind::Prime;
        step.epsilon = ev.epsilon;
        apply_event(ev, step);
    } else {
        CriticalEvent first = std::move(ev);
        CriticalEvent other = std::move(*second);
        if (other.p < first.p) std::swap(first, other);
        step.kind = CAStep::Kind::Semiprime;
        step.tie = true;
        step.epsilon = first.epsilon.hull(other.epsilon);
        apply_event(first, step);
        apply_event(other, step);
    }

    state_.step_index = step.step_index;
    return step;
}

}  // namespace robin::ca
