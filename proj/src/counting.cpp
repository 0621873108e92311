#include "mtpoly/counting.hpp"

#include <stdexcept>
#include <string>

#include "mtpoly/errors.hpp"

namespace mtpoly {

namespace {

BigInt two_pow(std::uint64_t e)
{
    BigInt r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
    return r;
}

void require_positive(std::uint64_t n, const char* what)
{
    if (n == 0) throw std::invalid_argument(std::string(what) + ": argument must be positive");
}

}  // namespace

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    require_positive(n, "divisors");
    std::vector<std::uint64_t> low, high;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        low.push_back(d);
        if (d != n / d) high.push_back(n / d);
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

std::vector<std::uint64_t> strict_divisors(std::uint64_t n)
{
    auto d = divisors(n);
    d.pop_back();
    return d;
}

int mobius(std::uint64_t n)
{
    require_positive(n, "mobius");
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

BigInt hyp_count(std::uint64_t n)
{
    require_positive(n, "hyp_count");
    BigInt total = 0;
    for (std::uint64_t k : divisors(n)) {
        const int mu = mobius(n / k);
        if (mu > 0) total += two_pow(k - 1);
        if (mu < 0) total -= two_pow(k - 1);
    }
    return total;
}

BigInt phi(std::uint64_t ell, std::uint64_t n)
{
    require_positive(n, "phi");
    if (ell == 0) return 1;
    BigInt r = two_pow(ell - 1);
    if ((ell - 1) % n == 0) r -= 1;
    return r;
}

BigInt mis_count(std::uint64_t ell, std::uint64_t n) { return phi(ell, n) * hyp_count(n); }

std::int64_t eta(std::uint64_t ell, std::uint64_t k)
{
    require_positive(k, "eta");
    // floor((ell-1)/k) with ell = 0 giving floor(-1/k) = -1.
    const std::int64_t floor_part = ell == 0 ? -1 : static_cast<std::int64_t>((ell - 1) / k);
    return floor_part + 2;
}

CountRecord degree_budget(std::uint64_t ell, std::uint64_t n)
{
    CountRecord rec;
    rec.n = n;
    rec.ell = ell;
    rec.hyp_count = hyp_count(n);
    rec.phi = phi(ell, n);
    rec.mis_count = rec.phi * rec.hyp_count;
    rec.degree_budget = two_pow(ell + n - 1);

    BigInt total = 0;
    for (std::uint64_t k : divisors(n)) {
        const std::int64_t e = eta(ell, k);
        rec.eta_by_divisor[k] = e;
        BigInt hyp = hyp_count(k) * e;
        BigInt mis = 0;
        for (std::uint64_t j = 2; j <= ell; ++j) mis += mis_count(j, k);
        total += hyp + mis;
        rec.hyperbolic_degree[k] = std::move(hyp);
        rec.misiurewicz_degree[k] = std::move(mis);
    }
    if (total != rec.degree_budget) {
        throw BudgetMismatch("degree identity fails for (ell=" + std::to_string(ell) + ", n=" +
                             std::to_string(n) + "): " + total.get_str() + " != " +
                             rec.degree_budget.get_str());
    }

    BigInt inversion = 0;
    for (std::uint64_t k : divisors(n))
        for (std::uint64_t m : divisors(k)) inversion += two_pow(m) * mobius(k / m);
    if (inversion != two_pow(n))
        throw BudgetMismatch("divisor-sum identity fails for n=" + std::to_string(n));
    return rec;
}

}  // namespace mtpoly
