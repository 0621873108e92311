#include "mtpoly/factor.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "mtpoly/counting.hpp"
#include "mtpoly/errors.hpp"

namespace mtpoly {

namespace {

std::int64_t as_degree(const BigInt& count) { return static_cast<std::int64_t>(count.get_ui()); }

// Dividing by the product of the known factors keeps this to one pass over
// the large dividend.
IntPoly divide_out(const IntPoly& dividend, std::vector<PolyPtr> divisors, const std::string& what)
{
    std::vector<IntPoly> parts;
    parts.reserve(divisors.size());
    for (const auto& d : divisors) parts.push_back(*d);
    try {
        return exact_div(dividend, product(std::move(parts)));
    } catch (const NonzeroRemainder&) {
        throw NonzeroRemainder("internal error: " + what + " is not an exact quotient");
    }
}

void check_factor(const IntPoly& f, const BigInt& expected_degree, const std::string& what)
{
    if (!f.is_monic() || f.degree() != Degree(as_degree(expected_degree)))
        throw Error("internal error: " + what + " has degree " + to_string(f.degree()) +
                    ", expected " + expected_degree.get_str());
}

}  // namespace

FactorEngine::FactorEngine(const Family& family, std::optional<std::filesystem::path> cache_dir)
    : family_(family), cache_dir_(std::move(cache_dir))
{
    if (cache_dir_) std::filesystem::create_directories(*cache_dir_);
}

PolyPtr FactorEngine::load_cached(const std::string& name, Degree expected) const
{
    if (!cache_dir_) return nullptr;
    std::ifstream in(*cache_dir_ / name);
    if (!in) return nullptr;
    try {
        IntPoly p = read_poly(in);
        if (p.degree() != expected || !p.is_monic()) return nullptr;
        return std::make_shared<const IntPoly>(std::move(p));
    } catch (const ParseError&) {
        return nullptr;
    }
}

void FactorEngine::store_cached(const std::string& name, const IntPoly& poly) const
{
    if (!cache_dir_) return;
    const auto target = *cache_dir_ / name;
    const auto tmp = *cache_dir_ / (name + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write " + tmp.string());
        write_poly(out, poly);
        if (!out) throw IoError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

PolyPtr FactorEngine::gleason(unsigned n)
{
    if (n == 0) throw InvalidIndex("gleason requires n >= 1");
    {
        std::lock_guard lock(mu_);
        if (auto it = hyp_memo_.find(n); it != hyp_memo_.end()) return it->second;
    }
    const BigInt expected = hyp_count(n);
    const std::string name = "h_" + std::to_string(n) + ".poly";
    PolyPtr result = load_cached(name, Degree(as_degree(expected)));
    if (!result) {
        const IntPoly& pn = family_.orbit_poly(n);
        std::vector<PolyPtr> known;
        for (auto k : strict_divisors(n)) known.push_back(gleason(static_cast<unsigned>(k)));
        IntPoly h = divide_out(pn, std::move(known), "h_" + std::to_string(n));
        check_factor(h, expected, "h_" + std::to_string(n));
        store_cached(name, h);
        result = std::make_shared<const IntPoly>(std::move(h));
    }
    std::lock_guard lock(mu_);
    return hyp_memo_.try_emplace(n, result).first->second;
}

PolyPtr FactorEngine::misiurewicz_factor(unsigned ell, unsigned n)
{
    if (ell < 2) throw InvalidIndex("misiurewicz_factor requires ell >= 2");
    if (n == 0) throw InvalidIndex("misiurewicz_factor requires n >= 1");
    const auto key = std::make_pair(ell, n);
    {
        std::lock_guard lock(mu_);
        if (auto it = mis_memo_.find(key); it != mis_memo_.end()) return it->second;
    }
    const BigInt expected = mis_count(ell, n);
    const std::string label = "m_" + std::to_string(ell) + "_" + std::to_string(n);
    PolyPtr result = load_cached(label + ".poly", Degree(as_degree(expected)));
    if (!result) {
        const IntPoly s = family_.simple_part(FamilyIndex(ell, n));
        std::vector<PolyPtr> known;
        for (auto k : divisors(std::gcd(n, ell - 1))) known.push_back(gleason(static_cast<unsigned>(k)));
        for (auto k : strict_divisors(n)) known.push_back(misiurewicz_factor(ell, static_cast<unsigned>(k)));
        IntPoly m = divide_out(s, std::move(known), label);
        check_factor(m, expected, label);
        store_cached(label + ".poly", m);
        result = std::make_shared<const IntPoly>(std::move(m));
    }
    std::lock_guard lock(mu_);
    return mis_memo_.try_emplace(key, result).first->second;
}

FactorTable FactorEngine::factorize(FamilyIndex idx)
{
    if (idx.order() > family_.cap())
        throw CapExceeded("order " + std::to_string(idx.order()) + " exceeds cap " +
                          std::to_string(family_.cap()));
    const CountRecord budget = degree_budget(idx.ell, idx.n);

    FactorTable table{idx, {}, {}};
    BigInt total = 0;
    for (auto k : divisors(idx.n)) {
        const auto kk = static_cast<unsigned>(k);
        HypFactor f{gleason(kk), eta(idx.ell, k)};
        total += BigInt(as_degree(hyp_count(k))) * f.exponent;
        table.hyp_factors.emplace(k, std::move(f));
        for (unsigned j = 2; j <= idx.ell; ++j) {
            PolyPtr m = misiurewicz_factor(j, kk);
            total += static_cast<unsigned long>(m->size() - 1);
            table.mis_factors.emplace(std::make_pair(j, k), std::move(m));
        }
    }
    if (total != budget.degree_budget)
        throw BudgetMismatch("factor degrees of q_{" + std::to_string(idx.ell) + "," +
                             std::to_string(idx.n) + "} sum to " + total.get_str());
    return table;
}

bool FactorEngine::verify(const FactorTable& table) const
{
    const FamilyIndex idx = table.index;
    if (idx.order() > family_.cap()) return false;

    BigInt total = 0;
    for (const auto& [k, f] : table.hyp_factors) {
        if (!f.poly || f.exponent < 0 || f.poly->is_zero()) return false;
        total += BigInt(static_cast<unsigned long>(f.poly->size() - 1)) * static_cast<long>(f.exponent);
    }
    for (const auto& [key, m] : table.mis_factors) {
        if (!m || m->is_zero()) return false;
        total += static_cast<unsigned long>(m->size() - 1);
    }
    BigInt expected = 1;
    mpz_mul_2exp(expected.get_mpz_t(), expected.get_mpz_t(), idx.ell + idx.n - 1);
    if (total != expected) return false;

    std::vector<IntPoly> parts;
    for (const auto& [k, f] : table.hyp_factors)
        if (f.exponent > 0) parts.push_back(pow(*f.poly, static_cast<std::uint64_t>(f.exponent)));
    for (const auto& [key, m] : table.mis_factors) parts.push_back(*m);
    return product(std::move(parts)) == family_.mt_poly(idx);
}

}  // namespace mtpoly
