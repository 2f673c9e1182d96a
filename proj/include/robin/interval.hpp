#ifndef ROBIN_INTERVAL_HPP
#define ROBIN_INTERVAL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace robin::num {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kPrecisionCap = 4096;

/// Three-way result of a certified interval comparison. Overlap means the
/// intervals intersect and no order claim can be made at this precision.
enum class Verdict { Less, Greater, Overlap };

/// Closed interval [lo, hi] of MPFR reals with outward rounding.
/// Every operation returns an interval containing the exact result.
class HPInterval {
public:
    explicit HPInterval(mpfr_prec_t precision = kDefaultPrecision);
    HPInterval(const HPInterval& other);
    HPInterval(HPInterval&& other) noexcept;
    HPInterval& operator=(const HPInterval& other);
    HPInterval& operator=(HPInterval&& other) noexcept;
    ~HPInterval();

    // Exact point intervals (no rounding for values representable at prec;
    // integers/doubles wider than prec round outward).
    static HPInterval from_int(long v, mpfr_prec_t precision = kDefaultPrecision);
    static HPInterval from_ui(unsigned long v, mpfr_prec_t precision = kDefaultPrecision);
    static HPInterval from_double(double v, mpfr_prec_t precision = kDefaultPrecision);
    static HPInterval from_mpz(const mpz_class& v, mpfr_prec_t precision = kDefaultPrecision);
    static HPInterval from_mpq(const mpq_class& v, mpfr_prec_t precision = kDefaultPrecision);
    static HPInterval from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t precision);

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }

    HPInterval operator+(const HPInterval& rhs) const;
    HPInterval operator-(const HPInterval& rhs) const;
    HPInterval operator*(const HPInterval& rhs) const;
    HPInterval operator/(const HPInterval& rhs) const;  // throws if rhs contains 0
    HPInterval& operator+=(const HPInterval& rhs);
    HPInterval& operator-=(const HPInterval& rhs);

    HPInterval neg() const;
    HPInterval exp() const;
    HPInterval log() const;                      // requires lo > 0
    HPInterval pow(const HPInterval& e) const;   // requires lo > 0
    HPInterval reciprocal() const;               // requires 0 not contained

    /// Hull of this and other (smallest interval containing both).
    HPInterval hull(const HPInterval& other) const;

    /// Same endpoints re-rounded outward to a new working precision.
    HPInterval rounded_to(mpfr_prec_t precision) const;

    bool contains(const mpq_class& v) const;
    bool contains(double v) const;
    bool contains(const HPInterval& inner) const;
    bool intersects(const HPInterval& other) const;

    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    /// Upper bound on hi - lo, as a double (rounded up).
    double width_upper() const;
    /// Midpoint rounded to nearest at the working precision.
    double mid_double() const;

private:
    mpfr_t lo_;
    mpfr_t hi_;
};

Verdict compare(const HPInterval& a, const HPInterval& b);

/// Certified ln(num/den). Width <= 2^(2-precision) * max(1, |ln(num/den)|).
HPInterval ln_rational(const mpz_class& num, const mpz_class& den,
                       mpfr_prec_t precision = kDefaultPrecision);
HPInterval ln_ui(unsigned long v, mpfr_prec_t precision = kDefaultPrecision);

/// e^gamma, computed once per precision and cached (thread-safe).
/// Width <= 2^(4-precision).
HPInterval exp_gamma(mpfr_prec_t precision = kDefaultPrecision);

/// ln 10, cached per precision (used for log10 reporting).
HPInterval ln10(mpfr_prec_t precision = kDefaultPrecision);

/// Decimal rendering: value truncated to `digits` significant digits plus an
/// explicit upper bound on |exact - printed|.
struct PrintedValue {
    std::string value;
    std::string error_bound;
};
PrintedValue print_truncated(const HPInterval& x, int digits = 15);

}  // namespace robin::num

#endif  // ROBIN_INTERVAL_HPP
