#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mtpoly/int_poly.hpp"

namespace mtpoly {

/// Divisors of n in ascending order. n >= 1.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Divisors of n other than n itself.
std::vector<std::uint64_t> strict_divisors(std::uint64_t n);

/// Moebius function by trial division.
int mobius(std::uint64_t n);

/// Number of parameters whose critical orbit has exact period n:
/// sum over k | n of mu(n/k) 2^(k-1).
BigInt hyp_count(std::uint64_t n);

/// Ratio between the number of Misiurewicz parameters of type (ell, n) and
/// the number of hyperbolic centers of period n.
BigInt phi(std::uint64_t ell, std::uint64_t n);

/// phi(ell, n) * hyp_count(n).
BigInt mis_count(std::uint64_t ell, std::uint64_t n);

/// Multiplicity of h_k in q_{ell,n}: floor((ell - 1) / k) + 2, with the
/// mathematical floor so that eta(0, k) = 1.
std::int64_t eta(std::uint64_t ell, std::uint64_t k);

struct CountRecord {
    std::uint64_t n = 0;
    std::uint64_t ell = 0;
    BigInt hyp_count;
    BigInt phi;
    BigInt mis_count;
    /// k -> eta(ell, k) for every divisor k of n.
    std::map<std::uint64_t, std::int64_t> eta_by_divisor;
    /// k -> eta(ell, k) * hyp_count(k).
    std::map<std::uint64_t, BigInt> hyperbolic_degree;
    /// k -> sum over 2 <= j <= ell of mis_count(j, k).
    std::map<std::uint64_t, BigInt> misiurewicz_degree;
    /// 2^(ell+n-1), the degree of q_{ell,n}.
    BigInt degree_budget;
};

/// Assembles the CountRecord for (ell, n) and checks that the factor degrees
/// add up to deg q_{ell,n}, together with the divisor-sum identity
/// sum_{k|n} sum_{m|k} mu(k/m) 2^m = 2^n. Throws BudgetMismatch otherwise.
CountRecord degree_budget(std::uint64_t ell, std::uint64_t n);

}  // namespace mtpoly
