#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "mtpoly/family.hpp"
#include "mtpoly/int_poly.hpp"

namespace mtpoly {

using PolyPtr = std::shared_ptr<const IntPoly>;

struct HypFactor {
    PolyPtr poly;  // h_k
    std::int64_t exponent = 0;
};

/// Complete factorization of one q_{ell,n}: h_k^eta(ell,k) for every k | n
/// and m_{j,k} (simple) for 2 <= j <= ell, k | n.
struct FactorTable {
    FamilyIndex index;
    std::map<std::uint64_t, HypFactor> hyp_factors;
    /// (j, k) -> m_{j,k}
    std::map<std::pair<unsigned, std::uint64_t>, PolyPtr> mis_factors;
};

/// Extracts Gleason polynomials h_n and Misiurewicz factors m_{ell,n} by
/// exact division and checks complete factorizations by reassembly.
///
/// Factors are memoized per engine and safe to request from several
/// threads. With a cache directory, factors are also persisted as
/// `h_<n>.poly` and `m_<ell>_<n>.poly` in the poly v1 text format.
class FactorEngine {
public:
    explicit FactorEngine(const Family& family,
                          std::optional<std::filesystem::path> cache_dir = std::nullopt);

    const Family& family() const { return family_; }

    /// h_n = p_n / prod_{k | n, k < n} h_k.
    PolyPtr gleason(unsigned n);

    /// m_{ell,n}: s_{ell,n} with the h_k for k | gcd(n, ell-1) and the
    /// m_{ell,k} for strict divisors k of n divided out. Requires ell >= 2.
    PolyPtr misiurewicz_factor(unsigned ell, unsigned n);

    FactorTable factorize(FamilyIndex idx);

    /// True iff the table multiplies back to q_{ell,n} exactly.
    bool verify(const FactorTable& table) const;

private:
    PolyPtr load_cached(const std::string& name, Degree expected) const;
    void store_cached(const std::string& name, const IntPoly& poly) const;

    const Family& family_;
    std::optional<std::filesystem::path> cache_dir_;
    std::mutex mu_;
    std::map<unsigned, PolyPtr> hyp_memo_;
    std::map<std::pair<unsigned, unsigned>, PolyPtr> mis_memo_;
};

/// Environment variable naming the factor cache directory used by the CLI.
inline constexpr const char* kCacheDirEnv = "MTPOLY_CACHE_DIR";

}  // namespace mtpoly
