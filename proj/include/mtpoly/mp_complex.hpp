#pragma once

#include <mpfr.h>

#include <string>

namespace mtpoly {

/// Owning wrapper around mpfr_t. Rounding is always to nearest.
class MpFloat {
public:
    explicit MpFloat(mpfr_prec_t prec = 64);
    MpFloat(double value, mpfr_prec_t prec);
    MpFloat(const MpFloat& other);
    MpFloat(MpFloat&& other) noexcept;
    MpFloat& operator=(const MpFloat& other);
    MpFloat& operator=(MpFloat&& other) noexcept;
    ~MpFloat();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    /// Changes the precision, keeping the value rounded to the new precision.
    void set_precision(mpfr_prec_t prec);

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }

    /// log2 |x|, or -infinity for zero.
    double log2_abs() const;

    /// Scientific notation with `digits` significant digits, e.g. "-1.75e0".
    /// Independent of the C locale.
    std::string to_string(int digits) const;

    friend int compare(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_); }

private:
    mpfr_t v_;
    bool live_ = false;
};

/// A complex number as a pair of MpFloat of equal precision.
struct MpComplex {
    explicit MpComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    MpComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

    mpfr_prec_t precision() const { return re.precision(); }
    void set_precision(mpfr_prec_t prec);

    /// |z| rounded to double.
    double abs_double() const;

    MpFloat re;
    MpFloat im;
};

/// Decimal digits needed to round-trip `bits` bits of mantissa.
int decimal_digits_for(mpfr_prec_t bits);

}  // namespace mtpoly
