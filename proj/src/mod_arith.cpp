#include "mtpoly/mod_arith.hpp"

#include <mutex>
#include <stdexcept>
#include <utility>

namespace mtpoly::modp {

Field::Field(std::uint64_t p) : p_(p)
{
    if (p % 2 == 0 || p >= (std::uint64_t{1} << 62))
        throw std::invalid_argument("modulus must be odd and below 2^62");
    // Newton iteration for p^{-1} mod 2^64.
    std::uint64_t x = p;
    for (int i = 0; i < 6; ++i) x *= 2 - p * x;
    pinv_ = ~x + 1;
    unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % p;
    one_ = static_cast<std::uint64_t>(r);
    r2_ = static_cast<std::uint64_t>((r * r) % p);
}

std::uint64_t Field::pow(std::uint64_t a, std::uint64_t e) const
{
    std::uint64_t result = one_;
    while (e != 0) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

namespace {

void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a <- a mod b, with b monic.
void rem_monic(Poly& a, const Poly& b, const Field& f)
{
    const std::size_t db = b.size() - 1;
    while (a.size() > db && !a.empty()) {
        const std::uint64_t c = a.back();
        const std::size_t shift = a.size() - 1 - db;
        if (c != 0) {
            for (std::size_t j = 0; j < db; ++j)
                a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
        }
        a.pop_back();
    }
    trim(a);
}

void make_monic(Poly& a, const Field& f)
{
    if (a.empty() || a.back() == f.one()) return;
    const std::uint64_t inv = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, inv);
}

}  // namespace

Poly reduce(const IntPoly& a, const Field& f)
{
    Poly out(a.size());
    const auto coeffs = a.coeffs();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        unsigned long r = mpz_fdiv_ui(coeffs[i].get_mpz_t(), f.modulus());
        out[i] = f.to_mont(r);
    }
    trim(out);
    return out;
}

Poly derivative(const Poly& a, const Field& f)
{
    if (a.size() <= 1) return {};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        out[i - 1] = f.mul(a[i], f.to_mont(i % f.modulus()));
    trim(out);
    return out;
}

Poly gcd(Poly a, Poly b, const Field& f)
{
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        make_monic(b, f);
        rem_monic(a, b, f);
        std::swap(a, b);
    }
    make_monic(a, f);
    return a;
}

std::vector<std::uint64_t> word_primes(std::size_t count)
{
    static std::mutex mu;
    static std::vector<std::uint64_t> primes;
    std::lock_guard lock(mu);
    if (primes.size() < count) {
        mpz_class candidate = primes.empty() ? (mpz_class(1) << 62) : mpz_class(primes.back());
        while (primes.size() < count) {
            // Walk downwards through the odd numbers until a probable prime.
            candidate -= candidate % 2 == 0 ? 1 : 2;
            while (mpz_probab_prime_p(candidate.get_mpz_t(), 40) == 0) candidate -= 2;
            primes.push_back(candidate.get_ui());
        }
    }
    return {primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace mtpoly::modp
