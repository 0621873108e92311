#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "mtpoly/int_poly.hpp"

namespace mtpoly {

/// Default bound on ell + n. q_{ell,n} has 2^(ell+n-1) coefficients, so this
/// is a memory guard rather than a mathematical limit.
inline constexpr unsigned kDefaultOrderCap = 28;

/// Pre-period ell >= 0 and period n >= 1 of a critical orbit.
struct FamilyIndex {
    FamilyIndex(unsigned ell, unsigned n);

    unsigned ell;
    unsigned n;
    unsigned order() const { return ell + n; }

    friend bool operator==(const FamilyIndex&, const FamilyIndex&) = default;
    friend auto operator<=>(const FamilyIndex&, const FamilyIndex&) = default;
};

/// The critical-orbit polynomials p_n (p_0 = 0, p_{n+1} = p_n^2 + z) and the
/// Misiurewicz-Thurston polynomials q_{ell,n} = p_{ell+n} - p_ell built from
/// them. The p_n are memoized; the cache is safe to share between threads.
class Family {
public:
    explicit Family(unsigned cap = kDefaultOrderCap);

    Family(const Family&) = delete;
    Family& operator=(const Family&) = delete;

    unsigned cap() const { return cap_; }

    /// p_n. The reference stays valid for the lifetime of the Family.
    const IntPoly& orbit_poly(unsigned n) const;

    /// q_{ell,n}.
    IntPoly mt_poly(FamilyIndex idx) const;

    /// s_{ell,n} = p_{ell+n-1} + p_{ell-1}, the quotient q_{ell,n} / q_{ell-1,n}.
    /// Requires ell >= 1.
    IntPoly simple_part(FamilyIndex idx) const;

    /// (q_{ell-1,n}, p_{ell+n-1} + p_{ell-1}), whose product is q_{ell,n}.
    std::pair<IntPoly, IntPoly> diff_squares_step(FamilyIndex idx) const;

private:
    void check_order(unsigned order) const;

    unsigned cap_;
    mutable std::mutex mu_;
    mutable std::map<unsigned, std::unique_ptr<const IntPoly>> memo_;
};

}  // namespace mtpoly
