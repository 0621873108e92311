#include "mtpoly/int_poly.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mtpoly/errors.hpp"
#include "mtpoly/mod_arith.hpp"

namespace mtpoly {

std::string to_string(Degree d)
{
    return d.is_finite() ? std::to_string(d.value()) : std::string("-inf");
}

// ---------------------------------------------------------------------------
// IntPoly basics

IntPoly::IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs)
{
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
}

IntPoly IntPoly::constant(const BigInt& c) { return IntPoly(std::vector<BigInt>{c}); }

IntPoly IntPoly::monomial(const BigInt& c, std::size_t k)
{
    if (c == 0) return {};
    std::vector<BigInt> v(k + 1);
    v[k] = c;
    return IntPoly(std::move(v));
}

Degree IntPoly::degree() const
{
    if (c_.empty()) return Degree::minus_infinity();
    return Degree(static_cast<std::int64_t>(c_.size() - 1));
}

BigInt IntPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

std::size_t IntPoly::max_coeff_bits() const
{
    std::size_t bits = 0;
    for (const auto& x : c_)
        if (x != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    return bits;
}

void IntPoly::normalize()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

bool operator==(const IntPoly& a, const IntPoly& b)
{
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        if (mpz_cmp(a.c_[i].get_mpz_t(), b.c_[i].get_mpz_t()) != 0) return false;
    return true;
}

IntPoly& IntPoly::operator+=(const IntPoly& o)
{
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o)
{
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
}

IntPoly add(const IntPoly& a, const IntPoly& b)
{
    IntPoly r = a;
    r += b;
    return r;
}

IntPoly sub(const IntPoly& a, const IntPoly& b)
{
    IntPoly r = a;
    r -= b;
    return r;
}

IntPoly negate(const IntPoly& a)
{
    std::vector<BigInt> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : v) x = -x;
    return IntPoly(std::move(v));
}

IntPoly scale(const IntPoly& a, const BigInt& c)
{
    std::vector<BigInt> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : v) x *= c;
    return IntPoly(std::move(v));
}

IntPoly truncate(const IntPoly& a, std::size_t k)
{
    auto c = a.coeffs();
    return IntPoly(std::vector<BigInt>(c.begin(), c.begin() + std::min(k, c.size())));
}

IntPoly derivative(const IntPoly& a)
{
    auto c = a.coeffs();
    if (c.size() <= 1) return {};
    std::vector<BigInt> v(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) v[i - 1] = c[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(v));
}

BigInt evaluate(const IntPoly& a, const BigInt& x)
{
    BigInt acc = 0;
    auto c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc *= x;
        acc += c[i];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Multiplication

namespace {

constexpr std::size_t kLimbBits = GMP_NUMB_BITS;

std::size_t bit_length(std::size_t v)
{
    std::size_t n = 0;
    while (v != 0) {
        ++n;
        v >>= 1;
    }
    return n;
}

// out[i+j] += a[i]*b[j]
void schoolbook_acc(const BigInt* a, std::size_t la, const BigInt* b, std::size_t lb, BigInt* out)
{
    for (std::size_t i = 0; i < la; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < lb; ++j)
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
}

void karatsuba_acc(const BigInt* a, std::size_t la, const BigInt* b, std::size_t lb, BigInt* out)
{
    if (std::min(la, lb) < kKaratsubaThreshold) {
        schoolbook_acc(a, la, b, lb, out);
        return;
    }
    const std::size_t m = std::max(la, lb) / 2;
    if (lb <= m) {
        karatsuba_acc(a, m, b, lb, out);
        karatsuba_acc(a + m, la - m, b, lb, out + m);
        return;
    }
    if (la <= m) {
        karatsuba_acc(a, la, b, m, out);
        karatsuba_acc(a, la, b + m, lb - m, out + m);
        return;
    }
    // a = a0 + z^m a1, b = b0 + z^m b1 with both halves nonempty.
    const std::size_t la1 = la - m, lb1 = lb - m;
    std::vector<BigInt> z0(2 * m - 1), z2(la1 + lb1 - 1);
    karatsuba_acc(a, m, b, m, z0.data());
    karatsuba_acc(a + m, la1, b + m, lb1, z2.data());

    std::vector<BigInt> sa(std::max(m, la1)), sb(std::max(m, lb1));
    for (std::size_t i = 0; i < m; ++i) sa[i] = a[i];
    for (std::size_t i = 0; i < la1; ++i) sa[i] += a[m + i];
    for (std::size_t i = 0; i < m; ++i) sb[i] = b[i];
    for (std::size_t i = 0; i < lb1; ++i) sb[i] += b[m + i];
    std::vector<BigInt> z1(sa.size() + sb.size() - 1);
    karatsuba_acc(sa.data(), sa.size(), sb.data(), sb.size(), z1.data());
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];

    for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) {
        if (m + i < la + lb - 1) out[m + i] += z1[i];
    }
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * m + i] += z2[i];
}

// Evaluates the polynomial at 2^(64*slot_limbs). Every |c_i| must fit in a slot.
BigInt pack(std::span<const BigInt> c, std::size_t slot_limbs)
{
    const std::size_t total = c.size() * slot_limbs;
    bool any_pos = false, any_neg = false;
    for (const auto& x : c) {
        const int s = sgn(x);
        any_pos |= s > 0;
        any_neg |= s < 0;
    }
    auto fill = [&](BigInt& target, int sign) {
        mp_limb_t* dst = mpz_limbs_write(target.get_mpz_t(), static_cast<mp_size_t>(total));
        std::fill(dst, dst + total, mp_limb_t{0});
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (sgn(c[i]) != sign) continue;
            const std::size_t n = mpz_size(c[i].get_mpz_t());
            const mp_limb_t* src = mpz_limbs_read(c[i].get_mpz_t());
            std::memcpy(dst + i * slot_limbs, src, n * sizeof(mp_limb_t));
        }
        mpz_limbs_finish(target.get_mpz_t(), static_cast<mp_size_t>(total));
    };
    BigInt pos, neg;
    if (any_pos) fill(pos, 1);
    if (any_neg) fill(neg, -1);
    if (any_neg) pos -= neg;
    return pos;
}

// Inverse of pack using balanced digits in (-2^(w-1), 2^(w-1)]. Returns false
// when the value does not decompose into `count` such digits.
bool unpack(const BigInt& v, std::size_t slot_limbs, std::size_t count, std::vector<BigInt>& out)
{
    const bool negative = sgn(v) < 0;
    const mp_limb_t* src = mpz_limbs_read(v.get_mpz_t());
    const std::size_t n = mpz_size(v.get_mpz_t());
    const std::size_t w = slot_limbs * kLimbBits;
    BigInt full = BigInt(1);
    mpz_mul_2exp(full.get_mpz_t(), full.get_mpz_t(), w);

    out.assign(count, BigInt());
    bool carry = false;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t begin = i * slot_limbs;
        BigInt& d = out[i];
        if (begin < n) {
            const std::size_t len = std::min(slot_limbs, n - begin);
            mp_limb_t* dst = mpz_limbs_write(d.get_mpz_t(), static_cast<mp_size_t>(len));
            std::memcpy(dst, src + begin, len * sizeof(mp_limb_t));
            mpz_limbs_finish(d.get_mpz_t(), static_cast<mp_size_t>(len));
        }
        if (carry) d += 1;
        if (d != 0 && mpz_sizeinbase(d.get_mpz_t(), 2) >= w) {
            d -= full;
            carry = true;
        } else {
            carry = false;
        }
        if (negative) mpz_neg(d.get_mpz_t(), d.get_mpz_t());
    }
    return !carry && n <= count * slot_limbs;
}

std::size_t limbs_for_bits(std::size_t bits) { return (bits + kLimbBits - 1) / kLimbBits; }

IntPoly kronecker_mul(const IntPoly& a, const IntPoly& b)
{
    const std::size_t la = a.size(), lb = b.size();
    const std::size_t bits = a.max_coeff_bits() + b.max_coeff_bits() + bit_length(std::min(la, lb)) + 1;
    const std::size_t slot = limbs_for_bits(bits);
    BigInt pa = pack(a.coeffs(), slot);
    BigInt prod;
    if (&a == &b || a == b) {
        mpz_mul(prod.get_mpz_t(), pa.get_mpz_t(), pa.get_mpz_t());
    } else {
        BigInt pb = pack(b.coeffs(), slot);
        mpz_mul(prod.get_mpz_t(), pa.get_mpz_t(), pb.get_mpz_t());
    }
    std::vector<BigInt> out;
    if (!unpack(prod, slot, la + lb - 1, out))
        throw std::logic_error("kronecker_mul: slot width too small");
    return IntPoly(std::move(out));
}

}  // namespace

IntPoly mul(const IntPoly& a, const IntPoly& b, MulAlgorithm algo)
{
    if (a.is_zero() || b.is_zero()) return {};
    const std::size_t la = a.size(), lb = b.size();
    if (algo == MulAlgorithm::Auto) {
        algo = std::min(la, lb) < kKroneckerThreshold ? MulAlgorithm::Schoolbook : MulAlgorithm::Kronecker;
    }
    switch (algo) {
    case MulAlgorithm::Kronecker:
        return kronecker_mul(a, b);
    case MulAlgorithm::Karatsuba: {
        std::vector<BigInt> out(la + lb - 1);
        karatsuba_acc(a.coeffs().data(), la, b.coeffs().data(), lb, out.data());
        return IntPoly(std::move(out));
    }
    default: {
        std::vector<BigInt> out(la + lb - 1);
        schoolbook_acc(a.coeffs().data(), la, b.coeffs().data(), lb, out.data());
        return IntPoly(std::move(out));
    }
    }
}

IntPoly pow(const IntPoly& a, std::uint64_t e)
{
    IntPoly result{1};
    IntPoly base = a;
    while (e != 0) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e != 0) base = mul(base, base);
    }
    return result;
}

IntPoly product(std::vector<IntPoly> factors)
{
    if (factors.empty()) return IntPoly{1};
    auto larger = [](const IntPoly& x, const IntPoly& y) { return x.size() > y.size(); };
    std::priority_queue<IntPoly, std::vector<IntPoly>, decltype(larger)> heap(larger, std::move(factors));
    while (heap.size() > 1) {
        IntPoly x = heap.top();
        heap.pop();
        IntPoly y = heap.top();
        heap.pop();
        heap.push(mul(x, y));
    }
    return heap.top();
}

// ---------------------------------------------------------------------------
// Exact division by a monic polynomial

namespace {

IntPoly recurrence_div(const IntPoly& a, const IntPoly& b)
{
    const std::size_t la = a.size(), lb = b.size();
    const std::size_t db = lb - 1, lq = la - lb + 1;
    std::vector<BigInt> r(a.coeffs().begin(), a.coeffs().end());
    std::vector<BigInt> q(lq);
    const auto bc = b.coeffs();
    for (std::size_t k = lq; k-- > 0;) {
        q[k] = r[k + db];
        if (q[k] == 0) continue;
        for (std::size_t j = 0; j < db; ++j)
            if (bc[j] != 0) mpz_submul(r[k + j].get_mpz_t(), q[k].get_mpz_t(), bc[j].get_mpz_t());
    }
    for (std::size_t j = 0; j < db; ++j)
        if (r[j] != 0) throw NonzeroRemainder("exact_div: nonzero remainder");
    return IntPoly(std::move(q));
}

IntPoly kronecker_div(const IntPoly& a, const IntPoly& b)
{
    const std::size_t la = a.size(), lb = b.size(), lq = la - lb + 1;
    const std::size_t base_bits = std::max(a.max_coeff_bits(), b.max_coeff_bits()) + 2;
    // First try a slot a little wider than the dividend's coefficients, then
    // one wide enough for any integer factor of a (Mignotte's bound).
    const std::size_t attempts[] = {base_bits + 64, base_bits + bit_length(la) + lq + 2};
    for (std::size_t bits : attempts) {
        const std::size_t slot = limbs_for_bits(bits);
        BigInt pa = pack(a.coeffs(), slot), pb = pack(b.coeffs(), slot);
        BigInt q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), pa.get_mpz_t(), pb.get_mpz_t());
        if (r != 0) throw NonzeroRemainder("exact_div: nonzero remainder");
        std::vector<BigInt> digits;
        if (!unpack(q, slot, lq, digits)) continue;
        IntPoly quotient(std::move(digits));
        if (mul(quotient, b) == a) return quotient;
    }
    throw NonzeroRemainder("exact_div: nonzero remainder");
}

}  // namespace

IntPoly exact_div(const IntPoly& a, const IntPoly& b)
{
    if (!b.is_monic()) throw std::invalid_argument("exact_div: divisor must be monic");
    if (a.is_zero()) return {};
    if (a.size() < b.size()) throw NonzeroRemainder("exact_div: divisor degree exceeds dividend degree");
    if (b.size() == 1) return a;
    const std::size_t db = b.size() - 1, dq = a.size() - b.size();
    if (std::min(db, dq) < 32 || db * dq < 4096) return recurrence_div(a, b);
    return kronecker_div(a, b);
}

// ---------------------------------------------------------------------------
// gcd and squarefreeness

namespace {

BigInt content(const IntPoly& a)
{
    BigInt g = 0;
    for (const auto& c : a.coeffs()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

IntPoly primitive_part(const IntPoly& a)
{
    if (a.is_zero()) return a;
    BigInt g = content(a);
    if (sgn(a.leading()) < 0) g = -g;
    std::vector<BigInt> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(v));
}

// lc(b)^(deg a - deg b + 1) * a mod b
IntPoly pseudo_rem(const IntPoly& a, const IntPoly& b)
{
    std::vector<BigInt> r(a.coeffs().begin(), a.coeffs().end());
    const auto bc = b.coeffs();
    const BigInt& lcb = b.leading();
    const std::size_t db = bc.size() - 1;
    std::size_t e = a.size() - b.size() + 1;
    while (!r.empty() && r.size() >= bc.size()) {
        const BigInt top = r.back();
        const std::size_t shift = r.size() - 1 - db;
        for (auto& x : r) x *= lcb;
        for (std::size_t j = 0; j <= db; ++j)
            mpz_submul(r[shift + j].get_mpz_t(), top.get_mpz_t(), bc[j].get_mpz_t());
        while (!r.empty() && r.back() == 0) r.pop_back();
        --e;
    }
    if (e > 0 && !r.empty()) {
        BigInt f;
        mpz_pow_ui(f.get_mpz_t(), lcb.get_mpz_t(), e);
        for (auto& x : r) x *= f;
    }
    return IntPoly(std::move(r));
}

// Monic gcd of a monic integer polynomial a with b by Chinese remaindering of
// modular gcds. The candidate is accepted only after it divides both inputs
// exactly, so the answer is exact.
IntPoly multimodular_gcd(const IntPoly& a, const IntPoly& b)
{
    std::size_t deg = std::numeric_limits<std::size_t>::max();
    std::vector<BigInt> residues;
    BigInt modulus;
    IntPoly previous;
    bool have_previous = false;
    std::size_t wanted = 16;
    for (std::size_t idx = 0;; ++idx) {
        if (idx == wanted) wanted *= 2;
        if (idx >= (std::size_t{1} << 16)) throw std::runtime_error("multimodular_gcd: too many primes");
        const std::uint64_t p = modp::word_primes(wanted)[idx];
        if (mpz_fdiv_ui(b.leading().get_mpz_t(), p) == 0) continue;
        modp::Field f(p);
        modp::Poly g = modp::gcd(modp::reduce(a, f), modp::reduce(b, f), f);
        const std::size_t gd = g.size() - 1;
        if (gd == 0) return IntPoly{1};
        if (gd > deg) continue;
        if (gd < deg) {
            deg = gd;
            residues.assign(gd + 1, BigInt());
            for (std::size_t i = 0; i <= gd; ++i) residues[i] = static_cast<unsigned long>(f.from_mont(g[i]));
            modulus = static_cast<unsigned long>(p);
            have_previous = false;
        } else {
            const unsigned long m_mod_p = mpz_fdiv_ui(modulus.get_mpz_t(), p);
            const std::uint64_t inv = f.from_mont(f.inv(f.to_mont(m_mod_p)));
            for (std::size_t i = 0; i <= gd; ++i) {
                const std::uint64_t old = mpz_fdiv_ui(residues[i].get_mpz_t(), p);
                const std::uint64_t target = f.from_mont(g[i]);
                const std::uint64_t diff = target >= old ? target - old : target + p - old;
                const auto step = static_cast<std::uint64_t>((static_cast<unsigned __int128>(diff) * inv) % p);
                mpz_addmul_ui(residues[i].get_mpz_t(), modulus.get_mpz_t(), step);
            }
            modulus *= static_cast<unsigned long>(p);
        }
        BigInt half = modulus / 2;
        std::vector<BigInt> sym(residues);
        for (auto& x : sym)
            if (x > half) x -= modulus;
        IntPoly candidate(std::move(sym));
        if (have_previous && candidate == previous) {
            try {
                (void)exact_div(a, candidate);
                (void)exact_div(b, candidate);
                return candidate;
            } catch (const NonzeroRemainder&) {
            }
        }
        previous = std::move(candidate);
        have_previous = true;
    }
}

// True when gcd(a, b) is constant modulo one of the first few word primes,
// which proves it is constant over Z. False is inconclusive.
bool modular_gcd_is_constant(const IntPoly& a, const IntPoly& b, std::size_t primes)
{
    for (std::uint64_t p : modp::word_primes(primes)) {
        if (mpz_fdiv_ui(a.leading().get_mpz_t(), p) == 0) continue;
        modp::Field f(p);
        if (modp::gcd(modp::reduce(a, f), modp::reduce(b, f), f).size() == 1) return true;
    }
    return false;
}

}  // namespace

IntPoly gcd(const IntPoly& a, const IntPoly& b)
{
    if (a.is_zero()) return primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    IntPoly x = a.size() >= b.size() ? a : b;
    IntPoly y = a.size() >= b.size() ? b : a;
    BigInt c;
    BigInt cx = content(x), cy = content(y);
    mpz_gcd(c.get_mpz_t(), cx.get_mpz_t(), cy.get_mpz_t());
    x = primitive_part(x);
    y = primitive_part(y);
    BigInt g = 1, h = 1;
    while (true) {
        if (y.size() == 1) return IntPoly::constant(c);
        const std::size_t delta = x.size() - y.size();
        IntPoly r = pseudo_rem(x, y);
        if (r.is_zero()) break;
        if (r.size() == 1) return IntPoly::constant(c);
        x = std::move(y);
        BigInt divisor;
        mpz_pow_ui(divisor.get_mpz_t(), h.get_mpz_t(), delta);
        divisor *= g;
        std::vector<BigInt> v(r.coeffs().begin(), r.coeffs().end());
        for (auto& t : v) mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), divisor.get_mpz_t());
        y = IntPoly(std::move(v));
        g = x.leading();
        if (delta == 0) {
        } else if (delta == 1) {
            h = g;
        } else {
            BigInt num, den;
            mpz_pow_ui(num.get_mpz_t(), g.get_mpz_t(), delta);
            mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), delta - 1);
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
    }
    return scale(primitive_part(y), c);
}

bool are_coprime(const IntPoly& a, const IntPoly& b)
{
    if (a.is_zero()) return b.degree() == Degree(0);
    if (b.is_zero()) return a.degree() == Degree(0);
    if (a.size() == 1 || b.size() == 1) return true;
    const IntPoly& x = a.size() >= b.size() ? a : b;
    const IntPoly& y = a.size() >= b.size() ? b : a;
    if (modular_gcd_is_constant(x, y, 3)) return true;
    if (x.is_monic()) return multimodular_gcd(x, y).size() == 1;
    return gcd(x, y).size() == 1;
}

bool is_squarefree(const IntPoly& a)
{
    if (a.is_zero()) throw std::invalid_argument("is_squarefree: zero polynomial");
    if (a.size() <= 2) return true;
    const IntPoly da = derivative(a);
    if (modular_gcd_is_constant(a, da, 3)) return true;
    if (a.is_monic()) return multimodular_gcd(a, da).size() == 1;
    return gcd(a, da).size() == 1;
}

// ---------------------------------------------------------------------------
// Text forms

std::string to_string(const IntPoly& a)
{
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        BigInt mag = abs(c[i]);
        if (first) {
            if (sgn(c[i]) < 0) os << '-';
        } else {
            os << (sgn(c[i]) < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << '*';
        os << 'z';
        if (i > 1) os << '^' << i;
    }
    return os.str();
}

void write_poly(std::ostream& os, const IntPoly& a)
{
    os << "poly v1 deg=" << to_string(a.degree()) << '\n';
    for (const auto& c : a.coeffs()) os << c.get_str() << '\n';
}

IntPoly read_poly(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw ParseError("poly: missing header");
    const std::string prefix = "poly v1 deg=";
    if (line.rfind(prefix, 0) != 0) throw ParseError("poly: bad header '" + line + "'");
    const std::string deg_text = line.substr(prefix.size());
    if (deg_text == "-inf") return {};
    std::size_t count = 0;
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(deg_text, &pos);
        if (pos != deg_text.size() || d < 0) throw ParseError("poly: bad degree '" + deg_text + "'");
        count = static_cast<std::size_t>(d) + 1;
    } catch (const std::logic_error&) {
        throw ParseError("poly: bad degree '" + deg_text + "'");
    }
    std::vector<BigInt> coeffs(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(is, line)) throw ParseError("poly: truncated coefficient list");
        const std::size_t digits_from = (!line.empty() && line[0] == '-') ? 1 : 0;
        const bool well_formed = line.size() > digits_from &&
            std::all_of(line.begin() + static_cast<std::ptrdiff_t>(digits_from), line.end(),
                        [](char ch) { return ch >= '0' && ch <= '9'; });
        if (!well_formed || coeffs[i].set_str(line, 10) != 0)
            throw ParseError("poly: bad coefficient '" + line + "'");
    }
    if (coeffs.back() == 0) throw ParseError("poly: leading coefficient is zero");
    return IntPoly(std::move(coeffs));
}

}  // namespace mtpoly
