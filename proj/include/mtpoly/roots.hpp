#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mtpoly/factor.hpp"
#include "mtpoly/int_poly.hpp"
#include "mtpoly/mp_complex.hpp"

namespace mtpoly {

enum class PointKind { Unclassified, Hyperbolic, Misiurewicz };

/// Hyperbolic(period) has preperiod 0. Unclassified has both fields 0.
struct Classification {
    PointKind kind = PointKind::Unclassified;
    unsigned preperiod = 0;
    unsigned period = 0;

    static Classification hyperbolic(unsigned period) { return {PointKind::Hyperbolic, 0, period}; }
    static Classification misiurewicz(unsigned preperiod, unsigned period)
    {
        return {PointKind::Misiurewicz, preperiod, period};
    }

    friend bool operator==(const Classification&, const Classification&) = default;
};

std::string to_string(const Classification& c);
/// "hyp", "mis" or "none".
const char* kind_name(PointKind kind);

struct ParamPoint {
    MpComplex value;
    Classification kind;
    /// |f(value)| for the polynomial the point was solved from.
    MpFloat residual;
    unsigned precision_bits = 0;
};

/// Ascending by real part, then imaginary part.
bool point_less(const ParamPoint& a, const ParamPoint& b);

/// Supplies f'/f for the Aberth iteration. Implementations must be safe to
/// call concurrently.
class RootEvaluator {
public:
    enum class Status { Ok, ExactRoot, Undefined };

    virtual ~RootEvaluator() = default;
    virtual std::uint64_t degree() const = 0;
    /// Writes f'(z)/f(z) into `out`, accurate to roughly `prec` bits
    /// relative to the Newton step.
    virtual Status log_derivative(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const = 0;
    /// Hardware-precision version for the coarse sweeps. Returns false when
    /// not supported or out of range; the caller then uses log_derivative.
    virtual bool log_derivative_fast(std::complex<long double> z, std::complex<long double>& out,
                                     Status& status) const;
    /// Starting points for the iteration; empty means "use the Newton polygon".
    virtual std::vector<std::complex<long double>> initial_guesses() const { return {}; }
    virtual std::string name() const = 0;
};

/// Horner's rule on the integer coefficients, with working precision raised
/// by log2 of sum |a_k| |z|^k so that cancellation cannot eat the result.
class HornerEvaluator : public RootEvaluator {
public:
    explicit HornerEvaluator(const IntPoly& poly);
    std::uint64_t degree() const override;
    Status log_derivative(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const override;
    std::string name() const override { return "horner"; }

    /// f(z) at absolute accuracy about 2^-prec.
    void evaluate(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const;
    /// Precision used by evaluate for a point of modulus |z|.
    mpfr_prec_t working_precision(double abs_z, mpfr_prec_t prec) const;

private:
    IntPoly poly_;
    std::vector<double> log2_coeff_;
};

/// h_n through the critical orbit: h_n = prod_{k|n} p_k^mu(n/k).
class GleasonEvaluator : public RootEvaluator {
public:
    explicit GleasonEvaluator(unsigned n);
    std::uint64_t degree() const override;
    Status log_derivative(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const override;
    bool log_derivative_fast(std::complex<long double> z, std::complex<long double>& out,
                             Status& status) const override;
    std::vector<std::complex<long double>> initial_guesses() const override;
    std::string name() const override;

private:
    unsigned n_;
};

/// m_{ell,n} through the critical orbit, using
/// t_k = s_{ell,k} / prod_{d | gcd(k, ell-1)} h_d and m_{ell,n} = prod_{k|n} t_k^mu(n/k).
class MisiurewiczEvaluator : public RootEvaluator {
public:
    MisiurewiczEvaluator(unsigned ell, unsigned n);
    std::uint64_t degree() const override;
    Status log_derivative(const MpComplex& z, mpfr_prec_t prec, MpComplex& out) const override;
    bool log_derivative_fast(std::complex<long double> z, std::complex<long double>& out,
                             Status& status) const override;
    std::vector<std::complex<long double>> initial_guesses() const override;
    std::string name() const override;

private:
    unsigned ell_;
    unsigned n_;
};

/// All roots of a squarefree polynomial by Aberth-Ehrlich iteration.
/// Returns deg(a) points sorted by (re, im), kind Unclassified.
/// Throws std::invalid_argument for constant or non-squarefree input and
/// PrecisionExhausted if 8x the requested precision does not separate the roots.
std::vector<ParamPoint> find_roots(const IntPoly& a, unsigned precision_bits);

/// Same, driving the iteration with `eval` (which must describe `a`);
/// residuals are still computed from the coefficients of `a`.
std::vector<ParamPoint> find_roots(const IntPoly& a, const RootEvaluator& eval, unsigned precision_bits);

/// `count` points just outside the Mandelbrot set, on the external rays of
/// angles (j + 0.4) / count, found by following each ray inward with Newton's
/// method down to depth `depth`. Hyperbolic centers and Misiurewicz points
/// are spread like these points, which makes them good starting values.
std::vector<std::complex<long double>> external_ray_points(std::size_t count, unsigned depth);

/// Iterates 0 -> c -> c^2 + c ... and returns the lexicographically smallest
/// (ell, n) with |z_{ell+n} - z_ell| < tol, ell <= max_preperiod,
/// n <= max_period. ell in {0, 1} is reported as Hyperbolic(n).
Classification orbit_classify(const MpComplex& c, unsigned max_preperiod, unsigned max_period,
                              const MpFloat& tol);
/// tol = 2^(-precision/4) where precision is that of c.
Classification orbit_classify(const MpComplex& c, unsigned max_preperiod, unsigned max_period);

struct ClassificationMismatch {
    ParamPoint point;  // kind from the source factor
    Classification from_orbit;
};

struct PointSet {
    std::vector<ParamPoint> points;
    std::vector<ClassificationMismatch> mismatches;
};

/// Roots of every h_n with n <= max_order and every m_{ell,n} with
/// ell >= 2, ell + n <= max_order, tagged by their source factor and
/// checked against orbit_classify. Factors are solved on up to `jobs`
/// threads; the result does not depend on `jobs`.
PointSet points_of_order(FactorEngine& engine, unsigned max_order, unsigned precision_bits,
                         unsigned jobs = 1);

}  // namespace mtpoly
