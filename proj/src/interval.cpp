#include "robin/interval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace robin::num {

namespace {

mpfr_prec_t joint_prec(const HPInterval& a, const HPInterval& b) {
    return std::max(a.precision(), b.precision());
}

}  // namespace

HPInterval::HPInterval(mpfr_prec_t precision) {
    if (precision < MPFR_PREC_MIN) throw std::invalid_argument("precision too small");
    mpfr_init2(lo_, precision);
    mpfr_init2(hi_, precision);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

HPInterval::HPInterval(const HPInterval& other) {
    mpfr_init2(lo_, other.precision());
    mpfr_init2(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

HPInterval::HPInterval(HPInterval&& other) noexcept {
    mpfr_init2(lo_, other.precision());
    mpfr_init2(hi_, other.precision());
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

HPInterval& HPInterval::operator=(const HPInterval& other) {
    if (this != &other) {
        mpfr_set_prec(lo_, other.precision());
        mpfr_set_prec(hi_, other.precision());
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

HPInterval& HPInterval::operator=(HPInterval&& other) noexcept {
    if (this != &other) {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }
    return *this;
}

HPInterval::~HPInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

HPInterval HPInterval::from_int(long v, mpfr_prec_t precision) {
    HPInterval r(precision);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::from_ui(unsigned long v, mpfr_prec_t precision) {
    HPInterval r(precision);
    mpfr_set_ui(r.lo_, v, MPFR_RNDD);
    mpfr_set_ui(r.hi_, v, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::from_double(double v, mpfr_prec_t precision) {
    HPInterval r(precision);
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::from_mpz(const mpz_class& v, mpfr_prec_t precision) {
    HPInterval r(precision);
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

HPInterval HPInterval::from_mpq(const mpq_class& v, mpfr_prec_t precision) {
    HPInterval r(precision);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

HPInterval HPInterval::from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t precision) {
    if (mpfr_greater_p(lo, hi)) throw std::invalid_argument("lo > hi");
    HPInterval r(precision);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::operator+(const HPInterval& rhs) const {
    HPInterval r(joint_prec(*this, rhs));
    mpfr_add(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::operator-(const HPInterval& rhs) const {
    HPInterval r(joint_prec(*this, rhs));
    mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
    return r;
}

HPInterval& HPInterval::operator+=(const HPInterval& rhs) {
    *this = *this + rhs;
    return *this;
}

HPInterval& HPInterval::operator-=(const HPInterval& rhs) {
    *this = *this - rhs;
    return *this;
}

namespace {

// min/max over the four endpoint products (or quotients), directed rounding.
template <typename Op>
void corner_extremes(mpfr_ptr out_lo, mpfr_ptr out_hi, mpfr_srcptr alo, mpfr_srcptr ahi,
                     mpfr_srcptr blo, mpfr_srcptr bhi, Op op) {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(out_lo));
    op(out_lo, alo, blo, MPFR_RNDD);
    op(t, alo, bhi, MPFR_RNDD);
    mpfr_min(out_lo, out_lo, t, MPFR_RNDD);
    op(t, ahi, blo, MPFR_RNDD);
    mpfr_min(out_lo, out_lo, t, MPFR_RNDD);
    op(t, ahi, bhi, MPFR_RNDD);
    mpfr_min(out_lo, out_lo, t, MPFR_RNDD);

    op(out_hi, alo, blo, MPFR_RNDU);
    op(t, alo, bhi, MPFR_RNDU);
    mpfr_max(out_hi, out_hi, t, MPFR_RNDU);
    op(t, ahi, blo, MPFR_RNDU);
    mpfr_max(out_hi, out_hi, t, MPFR_RNDU);
    op(t, ahi, bhi, MPFR_RNDU);
    mpfr_max(out_hi, out_hi, t, MPFR_RNDU);
    mpfr_clear(t);
}

}  // namespace

HPInterval HPInterval::operator*(const HPInterval& rhs) const {
    HPInterval r(joint_prec(*this, rhs));
    corner_extremes(r.lo_, r.hi_, lo_, hi_, rhs.lo_, rhs.hi_,
                    [](mpfr_ptr o, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
                        mpfr_mul(o, a, b, rnd);
                    });
    return r;
}

HPInterval HPInterval::operator/(const HPInterval& rhs) const {
    if (rhs.contains_zero()) throw std::domain_error("interval division by interval containing 0");
    HPInterval r(joint_prec(*this, rhs));
    corner_extremes(r.lo_, r.hi_, lo_, hi_, rhs.lo_, rhs.hi_,
                    [](mpfr_ptr o, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
                        mpfr_div(o, a, b, rnd);
                    });
    return r;
}

HPInterval HPInterval::neg() const {
    HPInterval r(precision());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::exp() const {
    HPInterval r(precision());
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::log() const {
    if (mpfr_sgn(lo_) <= 0) throw std::domain_error("log of interval touching (-inf, 0]");
    HPInterval r(precision());
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::pow(const HPInterval& e) const {
    if (mpfr_sgn(lo_) <= 0) throw std::domain_error("pow requires positive base interval");
    // x^y is monotone in x and in y separately for x > 0, so the extremes
    // over the box are attained at corners.
    HPInterval r(joint_prec(*this, e));
    corner_extremes(r.lo_, r.hi_, lo_, hi_, e.lo(), e.hi(),
                    [](mpfr_ptr o, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
                        mpfr_pow(o, a, b, rnd);
                    });
    return r;
}

HPInterval HPInterval::reciprocal() const {
    if (contains_zero()) throw std::domain_error("reciprocal of interval containing 0");
    HPInterval r(precision());
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::hull(const HPInterval& other) const {
    HPInterval r(joint_prec(*this, other));
    mpfr_min(r.lo_, lo_, other.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, hi_, other.hi_, MPFR_RNDU);
    return r;
}

HPInterval HPInterval::rounded_to(mpfr_prec_t precision) const {
    HPInterval r(precision);
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

bool HPInterval::contains(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool HPInterval::contains(double v) const {
    return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
}

bool HPInterval::contains(const HPInterval& inner) const {
    return mpfr_lessequal_p(lo_, inner.lo_) && mpfr_greaterequal_p(hi_, inner.hi_);
}

bool HPInterval::intersects(const HPInterval& other) const {
    return !mpfr_less_p(hi_, other.lo_) && !mpfr_less_p(other.hi_, lo_);
}

double HPInterval::width_upper() const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

double HPInterval::mid_double() const {
    mpfr_t m;
    mpfr_init2(m, precision());
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

Verdict compare(const HPInterval& a, const HPInterval& b) {
    if (mpfr_less_p(a.hi(), b.lo())) return Verdict::Less;
    if (mpfr_greater_p(a.lo(), b.hi())) return Verdict::Greater;
    return Verdict::Overlap;
}

HPInterval ln_rational(const mpz_class& num, const mpz_class& den, mpfr_prec_t precision) {
    if (num <= 0 || den <= 0) throw std::domain_error("ln_rational requires positive arguments");
    // Work at precision + 16 and round outward, so the two sequential
    // directed roundings (quotient, log) stay well inside the width contract.
    mpfr_prec_t wp = precision + 16;
    mpfr_t qlo, qhi;
    mpfr_init2(qlo, wp);
    mpfr_init2(qhi, wp);
    mpq_class q(num, den);
    q.canonicalize();
    mpfr_set_q(qlo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(qhi, q.get_mpq_t(), MPFR_RNDU);
    mpfr_log(qlo, qlo, MPFR_RNDD);
    mpfr_log(qhi, qhi, MPFR_RNDU);
    HPInterval r = HPInterval::from_endpoints(qlo, qhi, precision);
    mpfr_clear(qlo);
    mpfr_clear(qhi);
    return r;
}

HPInterval ln_ui(unsigned long v, mpfr_prec_t precision) {
    return ln_rational(mpz_class(v), 1, precision);
}

namespace {

std::mutex g_const_mutex;
std::map<mpfr_prec_t, HPInterval> g_exp_gamma_cache;
std::map<mpfr_prec_t, HPInterval> g_ln10_cache;

HPInterval compute_exp_gamma(mpfr_prec_t precision) {
    mpfr_prec_t wp = precision + 16;
    mpfr_t glo, ghi;
    mpfr_init2(glo, wp);
    mpfr_init2(ghi, wp);
    mpfr_const_euler(glo, MPFR_RNDD);
    mpfr_const_euler(ghi, MPFR_RNDU);
    mpfr_exp(glo, glo, MPFR_RNDD);
    mpfr_exp(ghi, ghi, MPFR_RNDU);
    HPInterval r = HPInterval::from_endpoints(glo, ghi, precision);
    mpfr_clear(glo);
    mpfr_clear(ghi);
    return r;
}

}  // namespace

HPInterval exp_gamma(mpfr_prec_t precision) {
    std::lock_guard<std::mutex> lock(g_const_mutex);
    auto it = g_exp_gamma_cache.find(precision);
    if (it == g_exp_gamma_cache.end()) {
        it = g_exp_gamma_cache.emplace(precision, compute_exp_gamma(precision)).first;
    }
    return it->second;
}

HPInterval ln10(mpfr_prec_t precision) {
    std::lock_guard<std::mutex> lock(g_const_mutex);
    auto it = g_ln10_cache.find(precision);
    if (it == g_ln10_cache.end()) {
        it = g_ln10_cache.emplace(precision, ln_rational(10, 1, precision)).first;
    }
    return it->second;
}

PrintedValue print_truncated(const HPInterval& x, int digits) {
    PrintedValue out;
    mpfr_t m, w, t;
    mpfr_init2(m, x.precision());
    mpfr_init2(w, x.precision());
    mpfr_init2(t, x.precision());

    mpfr_add(m, x.lo(), x.hi(), MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);

    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*R*g", digits, MPFR_RNDZ, m);
    out.value = buf;
    mpfr_free_str(buf);

    // error bound = half width + truncation slack of the printed midpoint
    mpfr_sub(w, x.hi(), x.lo(), MPFR_RNDU);
    mpfr_div_2ui(w, w, 1, MPFR_RNDU);
    mpfr_abs(t, m, MPFR_RNDU);
    mpfr_mul_d(t, t, 2.0 * std::pow(10.0, -(digits - 1)), MPFR_RNDU);
    mpfr_add(w, w, t, MPFR_RNDU);
    // also cover values printed as 0
    mpfr_set_d(t, 1e-300, MPFR_RNDU);
    mpfr_max(w, w, t, MPFR_RNDU);

    buf = nullptr;
    mpfr_asprintf(&buf, "%.2R*g", MPFR_RNDU, w);
    out.error_bound = buf;
    mpfr_free_str(buf);

    mpfr_clear(m);
    mpfr_clear(w);
    mpfr_clear(t);
    return out;
}

}  // namespace robin::num
