#include "mtpoly/roots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mtpoly/counting.hpp"
#include "mtpoly/errors.hpp"

namespace mtpoly {

namespace {

using LComplex = std::complex<long double>;
constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleOffset = 0.4;

// ---- small complex helpers on MpComplex; outputs may alias inputs ----

void cx_set(MpComplex& out, const MpComplex& a)
{
    mpfr_set(out.re.get(), a.re.get(), MPFR_RNDN);
    mpfr_set(out.im.get(), a.im.get(), MPFR_RNDN);
}

void cx_mul(MpComplex& out, const MpComplex& a, const MpComplex& b, MpFloat& tmp)
{
    mpfr_fmms(tmp.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmma(out.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_swap(out.re.get(), tmp.get());
}

void cx_sqr(MpComplex& out, const MpComplex& a, MpFloat& tmp)
{
    mpfr_fmms(tmp.get(), a.re.get(), a.re.get(), a.im.get(), a.im.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), a.re.get(), a.im.get(), MPFR_RNDN);
    mpfr_mul_2ui(out.im.get(), out.im.get(), 1, MPFR_RNDN);
    mpfr_swap(out.re.get(), tmp.get());
}

bool cx_is_zero(const MpComplex& a) { return a.re.is_zero() && a.im.is_zero(); }

// out = a / b; b nonzero.
void cx_div(MpComplex& out, const MpComplex& a, const MpComplex& b, MpFloat& t1, MpFloat& t2)
{
    MpFloat den(t1.precision());
    mpfr_fmma(den.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmma(t1.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmms(t2.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_div(out.re.get(), t1.get(), den.get(), MPFR_RNDN);
    mpfr_div(out.im.get(), t2.get(), den.get(), MPFR_RNDN);
}

void cx_add(MpComplex& out, const MpComplex& a, const MpComplex& b)
{
    mpfr_add(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

void cx_sub(MpComplex& out, const MpComplex& a, const MpComplex& b)
{
    mpfr_sub(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

// log2 |a|, -inf for zero.
double cx_log2_abs(const MpComplex& a)
{
    const double lr = a.re.log2_abs();
    const double li = a.im.log2_abs();
    const double hi = std::max(lr, li);
    if (std::isinf(hi)) return hi;
    const double lo = std::min(lr, li);
    return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
}

LComplex to_lcomplex(const MpComplex& a) { return {a.re.to_long_double(), a.im.to_long_double()}; }

void set_lcomplex(MpComplex& out, LComplex v)
{
    mpfr_set_ld(out.re.get(), v.real(), MPFR_RNDN);
    mpfr_set_ld(out.im.get(), v.imag(), MPFR_RNDN);
}

// 1/x without the C99 special-case handling of std::complex division.
inline LComplex inv_fast(LComplex x)
{
    const long double n = x.real() * x.real() + x.imag() * x.imag();
    return {x.real() / n, -x.imag() / n};
}

inline LComplex div_fast(LComplex a, LComplex b) { return a * inv_fast(b); }

// True when a - b is below long double resolution relative to |a|, |b|.
inline bool too_close(LComplex a, LComplex b)
{
    const long double scale = std::max({std::abs(a), std::abs(b), 0x1p-16000L});
    return std::abs(a - b) <= 0x1p-48L * scale;
}

// Long double critical orbit; false if it leaves the range where the
// divisions above are safe.
bool critical_orbit_fast(LComplex c, unsigned steps, LComplex* z, LComplex* d)
{
    constexpr long double kLimit = 0x1p4000L;
    z[0] = 0;
    d[0] = 0;
    for (unsigned j = 0; j < steps; ++j) {
        d[j + 1] = 2.0L * z[j] * d[j] + 1.0L;
        z[j + 1] = z[j] * z[j] + c;
        if (!(std::abs(z[j + 1].real()) < kLimit && std::abs(z[j + 1].imag()) < kLimit &&
              std::abs(d[j + 1].real()) < kLimit && std::abs(d[j + 1].imag()) < kLimit))
            return false;
    }
    return true;
}

// ---- critical orbit with c-derivative ----

struct Orbit {
    std::vector<MpComplex> z;  // z_j = p_j(c)
    std::vector<MpComplex> d;  // d_j = p_j'(c)
};

Orbit critical_orbit(const MpComplex& c, unsigned steps, mpfr_prec_t prec)
{
    Orbit o;
    o.z.reserve(steps + 1);
    o.d.reserve(steps + 1);
    o.z.emplace_back(prec);
    o.d.emplace_back(prec);
    MpComplex cc(prec);
    cx_set(cc, c);
    MpFloat tmp(prec);
    for (unsigned j = 0; j < steps; ++j) {
        MpComplex zn(prec), dn(prec);
        // d_{j+1} = 2 z_j d_j + 1, z_{j+1} = z_j^2 + c
        cx_mul(dn, o.z[j], o.d[j], tmp);
        mpfr_mul_2ui(dn.re.get(), dn.re.get(), 1, MPFR_RNDN);
        mpfr_mul_2ui(dn.im.get(), dn.im.get(), 1, MPFR_RNDN);
        mpfr_add_ui(dn.re.get(), dn.re.get(), 1, MPFR_RNDN);
        cx_sqr(zn, o.z[j], tmp);
        cx_add(zn, zn, cc);
        o.z.push_back(std::move(zn));
        o.d.push_back(std::move(dn));
    }
    return o;
}

// acc += sign * num / den. Returns false if den is zero.
bool add_ratio(MpComplex& acc, int sign, const MpComplex& num, const MpComplex& den, mpfr_prec_t prec)
{
    if (cx_is_zero(den)) return false;
    MpComplex r(prec);
    MpFloat t1(prec), t2(prec);
    cx_div(r, num, den, t1, t2);
    if (sign > 0)
        cx_add(acc, acc, r);
    else
        cx_sub(acc, acc, r);
    return true;
}

// ---- initial placement ----

// Radii from the upper convex hull of (i, log2|a_i|), one annulus per edge.
std::vector<LComplex> newton_polygon_guesses(const IntPoly& a)
{
    const auto c = a.coeffs();
    const std::size_t d = c.size() - 1;
    std::vector<std::pair<double, double>> pts;
    std::size_t zeros = 0;
    while (c[zeros] == 0) ++zeros;
    for (std::size_t i = zeros; i <= d; ++i) {
        if (c[i] == 0) continue;
        long e = 0;
        const double m = mpz_get_d_2exp(&e, c[i].get_mpz_t());
        pts.emplace_back(static_cast<double>(i), std::log2(std::fabs(m)) + static_cast<double>(e));
    }
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& q = hull.back();
            const double cross = (q.first - o.first) * (p.second - o.second) -
                                 (q.second - o.second) * (p.first - o.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<LComplex> g(zeros, LComplex(0, 0));
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const auto [i0, l0] = hull[e];
        const auto [i1, l1] = hull[e + 1];
        const auto count = static_cast<std::size_t>(i1 - i0);
        const double radius = std::exp2((l0 - l1) / (i1 - i0));
        for (std::size_t k = 0; k < count; ++k) {
            const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count) +
                                 2.0 * kPi * i0 / static_cast<double>(d) + kAngleOffset;
            g.emplace_back(std::polar<long double>(radius, theta));
        }
    }
    return g;
}

// ---- Aberth-Ehrlich ----

// Synchronous sweeps: every correction in a sweep reads the previous sweep's
// approximations, so the result does not depend on evaluation order.
bool aberth(const RootEvaluator& ev, std::vector<MpComplex>& z, mpfr_prec_t prec, double tol_bits,
            std::size_t max_iter)
{
    const std::size_t d = z.size();
    std::vector<char> active(d, 1);
    std::vector<LComplex> zl(d);
    std::vector<MpComplex> w;
    w.reserve(d);
    for (std::size_t i = 0; i < d; ++i) w.emplace_back(prec);
    MpComplex L(prec), den(prec), one(1.0, 0.0, prec), diff(prec), near_sum(prec);
    MpFloat t1(prec), t2(prec);
    std::size_t remaining = d;

    // Split exact duplicates left by the coarse phase.
    for (std::size_t i = 1; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (compare(z[i].re, z[j].re) == 0 && compare(z[i].im, z[j].im) == 0) {
                const double scale = std::exp2(std::max(0.0, cx_log2_abs(z[i])) - 40.0);
                MpComplex nudge(prec);
                set_lcomplex(nudge, std::polar<long double>(scale, 1.0 + static_cast<double>(i)));
                cx_add(z[i], z[i], nudge);
            }

    for (std::size_t iter = 0; iter < max_iter && remaining > 0; ++iter) {
        for (std::size_t i = 0; i < d; ++i) zl[i] = to_lcomplex(z[i]);
        std::vector<char> done(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (!active[i]) continue;
            const auto st = ev.log_derivative(z[i], prec, L);
            if (st == RootEvaluator::Status::ExactRoot) {
                mpfr_set_zero(w[i].re.get(), 1);
                mpfr_set_zero(w[i].im.get(), 1);
                done[i] = 1;
                continue;
            }
            LComplex s = 0;
            mpfr_set_zero(near_sum.re.get(), 1);
            mpfr_set_zero(near_sum.im.get(), 1);
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                if (!too_close(zl[i], zl[j])) {
                    s += inv_fast(zl[i] - zl[j]);
                    continue;
                }
                // Long double cannot resolve this pair.
                cx_sub(diff, z[i], z[j]);
                if (cx_is_zero(diff)) continue;
                cx_div(diff, one, diff, t1, t2);
                cx_add(near_sum, near_sum, diff);
            }
            if (st == RootEvaluator::Status::Undefined) {
                // Sitting on a removed factor's root; step off it deterministically.
                set_lcomplex(w[i], LComplex(0.3L, 0.7L) * std::exp2(-20.0L) *
                                       std::max<long double>(1.0L, std::abs(zl[i])));
                continue;
            }
            MpComplex sv(prec);
            set_lcomplex(sv, s);
            cx_add(sv, sv, near_sum);
            cx_sub(den, L, sv);
            if (cx_is_zero(den)) {
                set_lcomplex(w[i], LComplex(0.3L, 0.7L) * std::exp2(-20.0L));
                continue;
            }
            cx_div(w[i], one, den, t1, t2);
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (!active[i]) continue;
            cx_sub(z[i], z[i], w[i]);
            const double scale = std::max(0.0, cx_log2_abs(z[i]));
            if (done[i] || cx_log2_abs(w[i]) <= scale - tol_bits) {
                active[i] = 0;
                --remaining;
            }
        }
    }
    return remaining == 0;
}

// Coarse sweeps in long double. Same synchronous scheme as above.
void aberth_fast(const RootEvaluator& ev, std::vector<LComplex>& z, double tol_bits, std::size_t max_iter)
{
    const std::size_t d = z.size();
    std::vector<char> active(d, 1);
    std::vector<LComplex> w(d);
    std::size_t remaining = d;
    const long double tol = std::exp2(-static_cast<long double>(tol_bits));
    MpComplex zm(64), Lm(64);
    for (std::size_t iter = 0; iter < max_iter && remaining > 0; ++iter) {
        std::vector<char> done(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (!active[i]) continue;
            LComplex L;
            RootEvaluator::Status st = RootEvaluator::Status::Ok;
            if (!ev.log_derivative_fast(z[i], L, st)) {
                set_lcomplex(zm, z[i]);
                st = ev.log_derivative(zm, 64, Lm);
                L = to_lcomplex(Lm);
            }
            if (st == RootEvaluator::Status::ExactRoot) {
                w[i] = 0;
                done[i] = 1;
                continue;
            }
            if (st == RootEvaluator::Status::Undefined) {
                w[i] = LComplex(0.3L, 0.7L) * 0x1p-20L * std::max<long double>(1.0L, std::abs(z[i]));
                continue;
            }
            LComplex s = 0;
            const LComplex zi = z[i];
            for (std::size_t j = 0; j < d; ++j) {
                const LComplex diff = zi - z[j];
                if (j != i && diff != LComplex(0, 0)) s += inv_fast(diff);
            }
            const LComplex den = L - s;
            w[i] = den == LComplex(0, 0) ? LComplex(0.3L, 0.7L) * 0x1p-20L : inv_fast(den);
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (!active[i]) continue;
            z[i] -= w[i];
            if (done[i] || std::abs(w[i]) <= tol * std::max<long double>(1.0L, std::abs(z[i]))) {
                active[i] = 0;
                --remaining;
            }
        }
    }
}

struct Attempt {
    bool ok = false;
    std::vector<ParamPoint> points;
};

// Newton polish, inclusion radii, real snapping, conjugate pairing, and
// residual check at precision `bits`.
Attempt finish(const IntPoly& a, const RootEvaluator& ev, std::vector<MpComplex>& z, mpfr_prec_t work,
               unsigned bits)
{
    Attempt out;
    const std::size_t d = z.size();
    MpComplex L(work), step(work), one(1.0, 0.0, work);
    MpFloat t1(work), t2(work);
    std::vector<long double> rho(d, 0.0L);

    for (std::size_t i = 0; i < d; ++i) {
        if (ev.log_derivative(z[i], work, L) == RootEvaluator::Status::Ok && !cx_is_zero(L)) {
            cx_div(step, one, L, t1, t2);
            cx_sub(z[i], z[i], step);
        }
        const auto st = ev.log_derivative(z[i], work, L);
        if (st == RootEvaluator::Status::Undefined) return out;
        if (st == RootEvaluator::Status::Ok) {
            const double l = cx_log2_abs(L);
            rho[i] = static_cast<long double>(d) * std::exp2(-static_cast<long double>(l));
        }
    }

    std::vector<LComplex> zl(d);
    for (std::size_t i = 0; i < d; ++i) zl[i] = to_lcomplex(z[i]);
    const long double rho_max = *std::max_element(rho.begin(), rho.end());
    const long double ulp = std::ldexp(1.0L, -60);
    MpComplex diff(work);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            long double sep = 0;
            if (too_close(zl[i], zl[j])) {
                cx_sub(diff, z[i], z[j]);
                sep = std::exp2(static_cast<long double>(cx_log2_abs(diff))) * (1.0L - ulp);
            } else {
                sep = std::abs(zl[i] - zl[j]) - ulp * (std::abs(zl[i]) + std::abs(zl[j]) + 1.0L);
            }
            // Disjoint inclusion disks, with room for the conjugate argument below.
            if (!(sep > 4.0L * rho_max)) return out;
        }

    // With disks this isolated, a disk meeting the real axis holds a real root,
    // and the conjugate of a root in disk i lies in the disk nearest conj(z_i).
    std::vector<std::size_t> upper, lower;
    for (std::size_t i = 0; i < d; ++i) {
        if (std::fabs(zl[i].imag()) <= rho[i]) {
            mpfr_set_zero(z[i].im.get(), 1);
            zl[i] = LComplex(zl[i].real(), 0);
        } else if (zl[i].imag() > 0) {
            upper.push_back(i);
        } else {
            lower.push_back(i);
        }
    }
    if (upper.size() != lower.size()) return out;
    std::vector<char> used(d, 0);
    for (std::size_t i : upper) {
        const LComplex target = std::conj(zl[i]);
        std::size_t best = d;
        long double best_dist = std::numeric_limits<long double>::infinity();
        for (std::size_t j : lower) {
            const long double dist = std::abs(zl[j] - target);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best == d || used[best]) return out;
        used[best] = 1;
        mpfr_set(z[best].re.get(), z[i].re.get(), MPFR_RNDN);
        mpfr_neg(z[best].im.get(), z[i].im.get(), MPFR_RNDN);
    }

    const HornerEvaluator horner(a);
    const double limit = -static_cast<double>(bits) / 2.0;
    std::vector<ParamPoint> pts(d);
    std::vector<char> have(d, 0);
    MpComplex value(bits), fz(bits);
    for (std::size_t i = 0; i < d; ++i) {
        ParamPoint& p = pts[i];
        p.value = MpComplex(static_cast<mpfr_prec_t>(bits));
        mpfr_set(p.value.re.get(), z[i].re.get(), MPFR_RNDN);
        mpfr_set(p.value.im.get(), z[i].im.get(), MPFR_RNDN);
        p.precision_bits = bits;
        p.residual = MpFloat(64);
    }
    // Conjugates share |f|, so evaluate only the closed upper half plane.
    for (std::size_t i = 0; i < d; ++i) {
        if (mpfr_sgn(pts[i].value.im.get()) < 0) continue;
        horner.evaluate(pts[i].value, static_cast<mpfr_prec_t>(bits) + 64, fz);
        mpfr_hypot(pts[i].residual.get(), fz.re.get(), fz.im.get(), MPFR_RNDU);
        have[i] = 1;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (have[i]) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (!have[j] || mpfr_cmp(pts[j].value.re.get(), pts[i].value.re.get()) != 0) continue;
            if (mpfr_cmpabs(pts[j].value.im.get(), pts[i].value.im.get()) != 0) continue;
            pts[i].residual = pts[j].residual;
            have[i] = 1;
            break;
        }
        if (!have[i]) return out;
    }
    for (const auto& p : pts)
        if (!(p.residual.log2_abs() < limit)) return out;

    std::sort(pts.begin(), pts.end(), point_less);
    out.ok = true;
    out.points = std::move(pts);
    return out;
}

std::vector<ParamPoint> solve(const IntPoly& a, const RootEvaluator& ev, unsigned precision_bits,
                              std::vector<LComplex> guesses)
{
    if (precision_bits < 16) throw std::invalid_argument("precision must be at least 16 bits");
    const std::size_t d = guesses.size();
    constexpr mpfr_prec_t kGuard = 64;

    // Coarse phase in hardware precision, then refinement and escalation.
    aberth_fast(ev, guesses, 44.0, 200 + 2 * d);
    std::vector<MpComplex> z;
    z.reserve(d);
    for (const auto& g : guesses) {
        z.emplace_back(64);
        set_lcomplex(z.back(), g);
    }

    for (unsigned bits = precision_bits; bits <= 8 * precision_bits; bits *= 2) {
        const mpfr_prec_t work = static_cast<mpfr_prec_t>(bits) + kGuard;
        for (auto& zi : z) zi.set_precision(work);
        if (!aberth(ev, z, work, static_cast<double>(bits) - 4.0, 100 + d)) continue;
        Attempt att = finish(a, ev, z, work, bits);
        if (att.ok) return std::move(att.points);
    }
    throw PrecisionExhausted(ev.name() + ": roots not separated at " + std::to_string(8 * precision_bits) +
                             " bits");
}

void check_input(const IntPoly& a)
{
    if (a.is_zero() || a.degree() == Degree(0))
        throw std::invalid_argument("find_roots needs a polynomial of degree >= 1");
    if (!is_squarefree(a)) throw std::invalid_argument("find_roots needs a squarefree polynomial");
}

}  // namespace

std::string to_string(const Classification& c)
{
    switch (c.kind) {
    case PointKind::Hyperbolic:
        return "Hyperbolic(" + std::to_string(c.period) + ")";
    case PointKind::Misiurewicz:
        return "Misiurewicz(" + std::to_string(c.preperiod) + "," + std::to_string(c.period) + ")";
    case PointKind::Unclassified:
        break;
    }
    return "Unclassified";
}

const char* kind_name(PointKind kind)
{
    switch (kind) {
    case PointKind::Hyperbolic:
        return "hyp";
    case PointKind::Misiurewicz:
        return "mis";
    case PointKind::Unclassified:
        break;
    }
    return "none";
}

bool point_less(const ParamPoint& a, const ParamPoint& b)
{
    if (const int c = compare(a.value.re, b.value.re); c != 0) return c < 0;
    if (const int c = compare(a.value.im, b.value.im); c != 0) return c < 0;
    if (a.kind.kind != b.kind.kind) return a.kind.kind < b.kind.kind;
    if (a.kind.preperiod != b.kind.preperiod) return a.kind.preperiod < b.kind.preperiod;
    return a.kind.period < b.kind.period;
}

// ---- HornerEvaluator ----

HornerEvaluator::HornerEvaluator(const IntPoly& poly) : poly_(poly)
{
    for (const auto& c : poly_.coeffs()) {
        if (c == 0) {
            log2_coeff_.push_back(-std::numeric_limits<double>::infinity());
            continue;
        }
        long e = 0;
        const double m = mpz_get_d_2exp(&e, c.get_mpz_t());
        log2_coeff_.push_back(std::log2(std::fabs(m)) + static_cast<double>(e));
    }
}

std::uint64_t HornerEvaluator::degree() const { return poly_.size() == 0 ? 0 : poly_.size() - 1; }

mpfr_prec_t HornerEvaluator::working_precision(double abs_z, mpfr_prec_t prec) const
{
    const double lz = abs_z > 0 ? std::log2(abs_z) : -1e9;
    double b = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < log2_coeff_.size(); ++k) b = std::max(b, log2_coeff_[k] + lz * k);
    const double extra = std::max(0.0, b) + std::log2(static_cast<double>(log2_coeff_.size()) + 1.0);
    return prec + static_cast<mpfr_prec_t>(std::ceil(extra)) + 16;
}

void HornerEvaluator::evaluate(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const
{
    const mpfr_prec_t w = working_precision(z.abs_double(), prec);
    const auto c = poly_.coeffs();
    // z keeps its own (short) precision so each product is w x prec(z) bits.
    MpComplex f(w);
    MpFloat tmp(w);
    for (std::size_t k = c.size(); k-- > 0;) {
        cx_mul(f, f, z, tmp);
        mpfr_add_z(f.re.get(), f.re.get(), c[k].get_mpz_t(), MPFR_RNDN);
    }
    out.set_precision(std::max(out.precision(), prec));
    cx_set(out, f);
}

RootEvaluator::Status HornerEvaluator::log_derivative(const MpComplex& z, mpfr_prec_t prec,
                                                      MpComplex& out) const
{
    const mpfr_prec_t w = working_precision(z.abs_double(), prec) + 8;
    const auto c = poly_.coeffs();
    MpComplex f(w), fp(w);
    MpFloat tmp(w), t2(w);
    for (std::size_t k = c.size(); k-- > 0;) {
        cx_mul(fp, fp, z, tmp);
        cx_add(fp, fp, f);
        cx_mul(f, f, z, tmp);
        mpfr_add_z(f.re.get(), f.re.get(), c[k].get_mpz_t(), MPFR_RNDN);
    }
    if (cx_is_zero(f)) return Status::ExactRoot;
    cx_div(out, fp, f, tmp, t2);
    return Status::Ok;
}

// ---- GleasonEvaluator ----

GleasonEvaluator::GleasonEvaluator(unsigned n) : n_(n)
{
    if (n == 0) throw InvalidIndex("GleasonEvaluator requires n >= 1");
}

std::uint64_t GleasonEvaluator::degree() const { return hyp_count(n_).get_ui(); }

std::string GleasonEvaluator::name() const { return "h_" + std::to_string(n_); }

RootEvaluator::Status GleasonEvaluator::log_derivative(const MpComplex& c, mpfr_prec_t prec,
                                                       MpComplex& out) const
{
    const Orbit o = critical_orbit(c, n_, prec);
    if (cx_is_zero(o.z[n_])) {
        for (auto k : strict_divisors(n_))
            if (mobius(n_ / k) != 0 && cx_is_zero(o.z[k])) return Status::Undefined;
        return Status::ExactRoot;
    }
    MpComplex acc(prec);
    for (auto k : divisors(n_)) {
        const int mu = mobius(n_ / k);
        if (mu == 0) continue;
        if (!add_ratio(acc, mu, o.d[k], o.z[k], prec)) return Status::Undefined;
    }
    out.set_precision(prec);
    cx_set(out, acc);
    return Status::Ok;
}

// ---- MisiurewiczEvaluator ----

MisiurewiczEvaluator::MisiurewiczEvaluator(unsigned ell, unsigned n) : ell_(ell), n_(n)
{
    if (ell < 2 || n == 0) throw InvalidIndex("MisiurewiczEvaluator requires ell >= 2, n >= 1");
}

std::uint64_t MisiurewiczEvaluator::degree() const { return mis_count(ell_, n_).get_ui(); }

std::string MisiurewiczEvaluator::name() const
{
    return "m_" + std::to_string(ell_) + "_" + std::to_string(n_);
}

RootEvaluator::Status MisiurewiczEvaluator::log_derivative(const MpComplex& c, mpfr_prec_t prec,
                                                           MpComplex& out) const
{
    const Orbit o = critical_orbit(c, ell_ + n_ - 1, prec);
    const unsigned a = ell_ - 1;

    // s_{ell,k} = z_{ell+k-1} + z_{ell-1} and its derivative.
    auto simple = [&](unsigned k, MpComplex& s, MpComplex& ds) {
        cx_add(s, o.z[a + k], o.z[a]);
        cx_add(ds, o.d[a + k], o.d[a]);
    };
    MpComplex s(prec), ds(prec);
    simple(n_, s, ds);
    if (cx_is_zero(s)) {
        for (auto k : strict_divisors(n_)) {
            if (mobius(n_ / k) == 0) continue;
            MpComplex sk(prec), dsk(prec);
            simple(static_cast<unsigned>(k), sk, dsk);
            if (cx_is_zero(sk)) return Status::Undefined;
        }
        return Status::ExactRoot;
    }

    MpComplex acc(prec);
    for (auto k : divisors(n_)) {
        const int mu = mobius(n_ / k);
        if (mu == 0) continue;
        simple(static_cast<unsigned>(k), s, ds);
        if (!add_ratio(acc, mu, ds, s, prec)) return Status::Undefined;
        // Remove h_d for d | gcd(k, ell-1): h_d'/h_d = sum_{e|d} mu(d/e) p_e'/p_e.
        for (auto dd : divisors(std::gcd(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(a))))
            for (auto e : divisors(dd)) {
                const int me = mobius(dd / e);
                if (me == 0) continue;
                if (!add_ratio(acc, -mu * me, o.d[e], o.z[e], prec)) return Status::Undefined;
            }
    }
    out.set_precision(prec);
    cx_set(out, acc);
    return Status::Ok;
}

bool RootEvaluator::log_derivative_fast(std::complex<long double>, std::complex<long double>&, Status&) const
{
    return false;
}

bool GleasonEvaluator::log_derivative_fast(std::complex<long double> c, std::complex<long double>& out,
                                           Status& status) const
{
    std::vector<LComplex> z(n_ + 1), d(n_ + 1);
    if (!critical_orbit_fast(c, n_, z.data(), d.data())) return false;
    status = Status::Ok;
    if (z[n_] == LComplex(0, 0)) {
        status = Status::ExactRoot;
        return true;
    }
    LComplex acc = 0;
    for (auto k : divisors(n_)) {
        const int mu = mobius(n_ / k);
        if (mu == 0) continue;
        if (z[k] == LComplex(0, 0)) {
            status = Status::Undefined;
            return true;
        }
        acc += static_cast<long double>(mu) * div_fast(d[k], z[k]);
    }
    out = acc;
    return true;
}

std::vector<std::complex<long double>> GleasonEvaluator::initial_guesses() const
{
    return external_ray_points(degree(), n_ + 2);
}

bool MisiurewiczEvaluator::log_derivative_fast(std::complex<long double> c, std::complex<long double>& out,
                                               Status& status) const
{
    const unsigned a = ell_ - 1;
    std::vector<LComplex> z(ell_ + n_), d(ell_ + n_);
    if (!critical_orbit_fast(c, ell_ + n_ - 1, z.data(), d.data())) return false;
    status = Status::Ok;
    if (z[a + n_] + z[a] == LComplex(0, 0)) {
        status = Status::ExactRoot;
        return true;
    }
    LComplex acc = 0;
    for (auto k : divisors(n_)) {
        const int mu = mobius(n_ / k);
        if (mu == 0) continue;
        const LComplex s = z[a + k] + z[a];
        if (s == LComplex(0, 0)) {
            status = Status::Undefined;
            return true;
        }
        acc += static_cast<long double>(mu) * div_fast(d[a + k] + d[a], s);
        for (auto dd : divisors(std::gcd(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(a))))
            for (auto e : divisors(dd)) {
                const int me = mobius(dd / e);
                if (me == 0) continue;
                if (z[e] == LComplex(0, 0)) {
                    status = Status::Undefined;
                    return true;
                }
                acc -= static_cast<long double>(mu * me) * div_fast(d[e], z[e]);
            }
    }
    out = acc;
    return true;
}

std::vector<std::complex<long double>> MisiurewiczEvaluator::initial_guesses() const
{
    return external_ray_points(degree(), ell_ + n_ + 1);
}

std::vector<std::complex<long double>> external_ray_points(std::size_t count, unsigned depth)
{
    constexpr long double kEscape = 65536.0L;
    constexpr int kSharpness = 8;
    const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
    std::vector<LComplex> out;
    out.reserve(count);
    std::vector<LComplex> z(depth + 1), d(depth + 1);
    for (std::size_t j = 0; j < count; ++j) {
        long double t = (static_cast<long double>(j) + kAngleOffset) / static_cast<long double>(count);
        LComplex c = std::polar(kEscape, two_pi * t);
        for (unsigned k = 1; k <= depth; ++k) {
            for (int s = 1; s <= kSharpness; ++s) {
                const long double radius = std::pow(kEscape, std::exp2(-static_cast<long double>(s) / kSharpness));
                const LComplex target = std::polar(radius, two_pi * t);
                for (int it = 0; it < 32; ++it) {
                    z[0] = 0;
                    d[0] = 0;
                    for (unsigned i = 0; i < k; ++i) {
                        d[i + 1] = 2.0L * z[i] * d[i] + 1.0L;
                        z[i + 1] = z[i] * z[i] + c;
                    }
                    const LComplex step = div_fast(z[k] - target, d[k]);
                    c -= step;
                    if (std::abs(step) <= 0x1p-56L * std::abs(c)) break;
                }
            }
            t = 2.0L * t;
            t -= std::floor(t);
        }
        out.push_back(c);
    }
    return out;
}

// ---- public solvers ----

std::vector<ParamPoint> find_roots(const IntPoly& a, unsigned precision_bits)
{
    check_input(a);
    const HornerEvaluator ev(a);
    return solve(a, ev, precision_bits, newton_polygon_guesses(a));
}

std::vector<ParamPoint> find_roots(const IntPoly& a, const RootEvaluator& eval, unsigned precision_bits)
{
    check_input(a);
    if (a.degree() != Degree(static_cast<std::int64_t>(eval.degree())))
        throw std::invalid_argument("evaluator " + eval.name() + " does not match the polynomial degree");
    auto guesses = eval.initial_guesses();
    if (guesses.empty()) guesses = newton_polygon_guesses(a);
    if (guesses.size() != eval.degree())
        throw std::invalid_argument("evaluator " + eval.name() + " gave the wrong number of starting points");
    return solve(a, eval, precision_bits, std::move(guesses));
}

// ---- classification ----

Classification orbit_classify(const MpComplex& c, unsigned max_preperiod, unsigned max_period,
                              const MpFloat& tol)
{
    const mpfr_prec_t prec = c.precision() + 16;
    const unsigned steps = max_preperiod + max_period;
    std::vector<MpComplex> z;
    z.reserve(steps + 1);
    z.emplace_back(prec);
    MpFloat tmp(prec);
    unsigned bounded = 0;  // z_0..z_bounded stay in |z| <= 4
    for (unsigned j = 0; j < steps; ++j) {
        MpComplex next(prec);
        cx_sqr(next, z[j], tmp);
        cx_add(next, next, c);
        z.push_back(std::move(next));
        if (z.back().abs_double() > 4.0) break;
        bounded = j + 1;
    }
    MpFloat tol2(prec), dist2(prec);
    mpfr_sqr(tol2.get(), tol.get(), MPFR_RNDN);
    MpComplex diff(prec);
    for (unsigned ell = 0; ell <= max_preperiod; ++ell) {
        for (unsigned n = 1; n <= max_period; ++n) {
            if (ell + n > bounded) break;
            cx_sub(diff, z[ell + n], z[ell]);
            mpfr_fmma(dist2.get(), diff.re.get(), diff.re.get(), diff.im.get(), diff.im.get(), MPFR_RNDN);
            if (mpfr_less_p(dist2.get(), tol2.get()))
                return ell <= 1 ? Classification::hyperbolic(n) : Classification::misiurewicz(ell, n);
        }
    }
    return {};
}

Classification orbit_classify(const MpComplex& c, unsigned max_preperiod, unsigned max_period)
{
    MpFloat tol(1.0, 64);
    mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(c.precision() / 4), MPFR_RNDN);
    return orbit_classify(c, max_preperiod, max_period, tol);
}

// ---- points_of_order ----

PointSet points_of_order(FactorEngine& engine, unsigned max_order, unsigned precision_bits, unsigned jobs)
{
    if (max_order > engine.family().cap())
        throw CapExceeded("order " + std::to_string(max_order) + " exceeds cap " +
                          std::to_string(engine.family().cap()));
    struct Task {
        unsigned ell;  // 0 for h_n
        unsigned n;
    };
    std::vector<Task> tasks;
    for (unsigned n = 1; n <= max_order; ++n) tasks.push_back({0, n});
    for (unsigned ell = 2; ell < max_order; ++ell)
        for (unsigned n = 1; ell + n <= max_order; ++n) tasks.push_back({ell, n});

    std::vector<std::vector<ParamPoint>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            try {
                const Task task = tasks[t];
                if (task.ell == 0) {
                    const PolyPtr h = engine.gleason(task.n);
                    results[t] = find_roots(*h, GleasonEvaluator(task.n), precision_bits);
                    for (auto& p : results[t]) p.kind = Classification::hyperbolic(task.n);
                } else {
                    const PolyPtr m = engine.misiurewicz_factor(task.ell, task.n);
                    results[t] = find_roots(*m, MisiurewiczEvaluator(task.ell, task.n), precision_bits);
                    for (auto& p : results[t]) p.kind = Classification::misiurewicz(task.ell, task.n);
                }
            } catch (const PrecisionExhausted& e) {
                const Task task = tasks[t];
                const std::string what = task.ell == 0 ? "h_" + std::to_string(task.n)
                                                       : "m_" + std::to_string(task.ell) + "_" +
                                                             std::to_string(task.n);
                errors[t] = std::make_exception_ptr(PrecisionExhausted(what + ": " + e.what()));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    PointSet out;
    for (auto& r : results)
        for (auto& p : r) {
            const Classification orbit = orbit_classify(p.value, max_order, max_order);
            if (!(orbit == p.kind)) out.mismatches.push_back({p, orbit});
            out.points.push_back(std::move(p));
        }
    std::sort(out.points.begin(), out.points.end(), point_less);
    std::sort(out.mismatches.begin(), out.mismatches.end(),
              [](const ClassificationMismatch& a, const ClassificationMismatch& b) {
                  return point_less(a.point, b.point);
              });
    return out;
}

}  // namespace mtpoly
