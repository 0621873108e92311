#include "mtpoly/mp_complex.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <utility>

namespace mtpoly {

MpFloat::MpFloat(mpfr_prec_t prec)
{
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
    live_ = true;
}

MpFloat::MpFloat(double value, mpfr_prec_t prec)
{
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, value, MPFR_RNDN);
    live_ = true;
}

MpFloat::MpFloat(const MpFloat& other)
{
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
    live_ = true;
}

MpFloat::MpFloat(MpFloat&& other) noexcept
{
    // mpfr_t is a one-element array; moving steals the limb pointer.
    *v_ = *other.v_;
    live_ = other.live_;
    other.live_ = false;
}

MpFloat& MpFloat::operator=(const MpFloat& other)
{
    if (this == &other) return *this;
    if (!live_) {
        mpfr_init2(v_, other.precision());
        live_ = true;
    } else if (precision() != other.precision()) {
        mpfr_set_prec(v_, other.precision());
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
    return *this;
}

MpFloat& MpFloat::operator=(MpFloat&& other) noexcept
{
    if (this == &other) return *this;
    if (live_) mpfr_clear(v_);
    *v_ = *other.v_;
    live_ = other.live_;
    other.live_ = false;
    return *this;
}

MpFloat::~MpFloat()
{
    if (live_) mpfr_clear(v_);
}

void MpFloat::set_precision(mpfr_prec_t prec)
{
    if (prec == precision()) return;
    mpfr_prec_round(v_, prec, MPFR_RNDN);
}

double MpFloat::log2_abs() const
{
    if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

std::string MpFloat::to_string(int digits) const
{
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_signbit(v_) ? "-inf" : "inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t exp10 = 0;
    std::unique_ptr<char, void (*)(char*)> raw(mpfr_get_str(nullptr, &exp10, 10, digits, v_, MPFR_RNDN),
                                               mpfr_free_str);
    std::string s = raw.get();
    std::string out;
    if (s[0] == '-') {
        out += '-';
        s.erase(0, 1);
    }
    // mpfr gives 0.DDDD * 10^exp10; rewrite as D.DDD e(exp10-1), trimming zeros.
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    out += s[0];
    if (s.size() > 1) {
        out += '.';
        out.append(s, 1, std::string::npos);
    }
    out += 'e';
    out += std::to_string(static_cast<long>(exp10) - 1);
    return out;
}

void MpComplex::set_precision(mpfr_prec_t prec)
{
    re.set_precision(prec);
    im.set_precision(prec);
}

double MpComplex::abs_double() const { return std::hypot(re.to_double(), im.to_double()); }

int decimal_digits_for(mpfr_prec_t bits)
{
    return static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 1;
}

}  // namespace mtpoly
