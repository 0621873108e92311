#include "mtpoly/family.hpp"

#include <cassert>
#include <string>

#include "mtpoly/errors.hpp"

namespace mtpoly {

FamilyIndex::FamilyIndex(unsigned ell_, unsigned n_) : ell(ell_), n(n_)
{
    if (n == 0) throw InvalidIndex("period n must be at least 1");
}

Family::Family(unsigned cap) : cap_(cap) {}

void Family::check_order(unsigned order) const
{
    if (order > cap_)
        throw CapExceeded("order " + std::to_string(order) + " exceeds cap " + std::to_string(cap_));
}

const IntPoly& Family::orbit_poly(unsigned n) const
{
    check_order(n);
    unsigned k = 0;
    IntPoly current;
    bool seeded = false;
    {
        std::lock_guard lock(mu_);
        if (auto it = memo_.find(n); it != memo_.end()) return *it->second;
        if (auto it = memo_.lower_bound(n); it != memo_.begin()) {
            --it;
            k = it->first;
            current = *it->second;
            seeded = true;
        }
    }
    auto publish = [this](unsigned key, const IntPoly& value) -> const IntPoly& {
        // Insert-once: a concurrent builder may have stored the same entry.
        std::lock_guard lock(mu_);
        auto [it, inserted] = memo_.try_emplace(key, nullptr);
        if (inserted) it->second = std::make_unique<const IntPoly>(value);
        return *it->second;
    };
    const IntPoly* result = seeded ? nullptr : &publish(0, current);
    const IntPoly z = IntPoly::z();
    while (k < n) {
        current = mul(current, current) + z;
        ++k;
        result = &publish(k, current);
    }
    return *result;
}

IntPoly Family::mt_poly(FamilyIndex idx) const
{
    check_order(idx.order());
    IntPoly q = orbit_poly(idx.order()) - orbit_poly(idx.ell);
#ifndef NDEBUG
    if (idx.ell == 0) assert(q == orbit_poly(idx.n));
    if (idx.ell == 1) assert(q == mul(orbit_poly(idx.n), orbit_poly(idx.n)));
#endif
    return q;
}

IntPoly Family::simple_part(FamilyIndex idx) const
{
    if (idx.ell == 0) throw InvalidIndex("simple_part requires ell >= 1");
    check_order(idx.order());
    return orbit_poly(idx.ell + idx.n - 1) + orbit_poly(idx.ell - 1);
}

std::pair<IntPoly, IntPoly> Family::diff_squares_step(FamilyIndex idx) const
{
    if (idx.ell == 0) throw InvalidIndex("diff_squares_step requires ell >= 1");
    check_order(idx.order());
    return {mt_poly(FamilyIndex(idx.ell - 1, idx.n)), simple_part(idx)};
}

}  // namespace mtpoly
