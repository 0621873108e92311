// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "mtpoly/cli.hpp"
#include "mtpoly/counting.hpp"
#include "mtpoly/factor.hpp"
#include "mtpoly/family.hpp"
#include "mtpoly/roots.hpp"

using namespace mtpoly;

namespace {

/// Collects the first few failure messages of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what)
    {
        if (ok) return;
        ++failures_;
        if (failures_ <= 5) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    bool ok() const { return failures_ == 0; }
    std::string notes() const
    {
        if (failures_ <= 5) return notes_;
        return notes_ + "; ... " + std::to_string(failures_ - 5) + " more";
    }
    std::string info;

private:
    int failures_ = 0;
    std::string notes_;
};

std::string idx(unsigned ell, unsigned n) { return "(" + std::to_string(ell) + "," + std::to_string(n) + ")"; }

Family& family()
{
    static Family f;
    return f;
}

FactorEngine& engine()
{
    static FactorEngine e(family());
    return e;
}

void criterion_reassembly(Check& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    unsigned types = 0;
    for (unsigned order = 1; order <= 16; ++order)
        for (unsigned ell = 0; ell < order; ++ell) {
            const unsigned n = order - ell;
            c.expect(engine().verify(engine().factorize(FamilyIndex(ell, n))), "reassembly " + idx(ell, n));
            ++types;
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 300, "took " + std::to_string(secs) + " s");
    c.info = std::to_string(types) + " types, " + std::to_string(static_cast<int>(secs)) + " s";
}

void criterion_worked_example(Check& c)
{
    const FactorTable t = engine().factorize(FamilyIndex(2, 4));
    const std::map<std::uint64_t, std::int64_t> want_exp = {{1, 3}, {2, 2}, {4, 2}};
    std::map<std::uint64_t, std::int64_t> exps;
    for (const auto& [k, f] : t.hyp_factors) exps[k] = f.exponent;
    c.expect(exps == want_exp, "hyperbolic exponents");
    const std::map<std::pair<unsigned, std::uint64_t>, std::int64_t> want_mis = {
        {{2, 1}, 1}, {{2, 2}, 2}, {{2, 4}, 12}};
    std::map<std::pair<unsigned, std::uint64_t>, std::int64_t> mis;
    for (const auto& [jk, p] : t.mis_factors) mis[jk] = p->degree().value();
    c.expect(mis == want_mis, "Misiurewicz factors and degrees");
    const IntPoly& p4 = family().orbit_poly(4);
    c.expect(family().simple_part(FamilyIndex(2, 4)) == p4 * p4 + IntPoly::monomial(2, 1), "s_{2,4} != p_4^2 + 2z");
    c.expect(engine().verify(t), "reassembly");
}

void criterion_counts(Check& c)
{
    const long table[] = {1, 1, 3, 6, 15, 27, 63, 120, 252, 495};
    for (unsigned n = 1; n <= 10; ++n) {
        const auto deg = engine().gleason(n)->degree().value();
        c.expect(hyp_count(n) == deg, "hyp_count(" + std::to_string(n) + ") != deg h_n");
        c.expect(deg == table[n - 1], "deg h_" + std::to_string(n));
    }
    unsigned pairs = 0;
    for (unsigned order = 3; order <= 12; ++order)
        for (unsigned ell = 2; ell < order; ++ell) {
            const unsigned n = order - ell;
            const auto deg = engine().misiurewicz_factor(ell, n)->degree().value();
            c.expect(mis_count(ell, n) == deg, "mis_count" + idx(ell, n) + " != deg m");
            ++pairs;
        }
    c.info = "n<=10, " + std::to_string(pairs) + " (ell,n) pairs";
}

void criterion_budget(Check& c)
{
    for (unsigned ell = 0; ell <= 12; ++ell)
        for (unsigned n = 1; n <= 12; ++n) {
            try {
                const CountRecord r = degree_budget(ell, n);
                BigInt expected = 1;
                expected <<= ell + n - 1;
                c.expect(r.degree_budget == expected, "budget" + idx(ell, n));
                BigInt sum = 0;
                for (const auto& [k, d] : r.hyperbolic_degree) sum += d;
                for (const auto& [k, d] : r.misiurewicz_degree) sum += d;
                c.expect(sum == expected, "degree sum" + idx(ell, n));
            } catch (const std::exception& e) {
                c.expect(false, "degree_budget" + idx(ell, n) + ": " + e.what());
            }
        }
}

void criterion_congruences(Check& c)
{
    unsigned checks = 0;
    for (unsigned n = 1; n < 16; ++n)
        for (unsigned k = 1; n + k <= 16; ++k) {
            c.expect(truncate(family().orbit_poly(n + k), n + 1) == truncate(family().orbit_poly(n), n + 1),
                     "p_" + std::to_string(n + k) + " vs p_" + std::to_string(n));
            ++checks;
        }
    for (unsigned ell = 1; ell < 16; ++ell)
        for (unsigned n = 1; ell + n <= 16; ++n) {
            BigInt lead = 1;
            lead <<= ell - 1;
            c.expect(truncate(family().mt_poly(FamilyIndex(ell, n)), ell + 2) == IntPoly::monomial(lead, ell + 1),
                     "q" + idx(ell, n) + " mod z^(ell+2)");
            ++checks;
        }
    c.info = std::to_string(checks) + " congruences";
}

void criterion_squarefree(Check& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (unsigned n = 1; n <= 14; ++n) {
        c.expect(is_squarefree(family().orbit_poly(n)), "p_" + std::to_string(n));
        c.expect(is_squarefree(*engine().gleason(n)), "h_" + std::to_string(n));
    }
    for (unsigned order = 2; order <= 14; ++order)
        for (unsigned ell = 1; ell < order; ++ell) {
            const unsigned n = order - ell;
            c.expect(is_squarefree(family().simple_part(FamilyIndex(ell, n))), "s" + idx(ell, n));
            c.expect(!is_squarefree(family().mt_poly(FamilyIndex(ell, n))), "q" + idx(ell, n) + " squarefree");
            if (ell >= 2) c.expect(is_squarefree(*engine().misiurewicz_factor(ell, n)), "m" + idx(ell, n));
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.info = "orders <= 14, " + std::to_string(static_cast<int>(secs)) + " s";
}

void criterion_roots(Check& c)
{
    MpFloat bound(64);
    mpfr_set_ui_2exp(bound.get(), 1, -20, MPFR_RNDN);
    mpfr_add_ui(bound.get(), bound.get(), 2, MPFR_RNDN);
    std::size_t total = 0;
    for (unsigned n = 1; n <= 12; ++n) {
        const IntPoly& h = *engine().gleason(n);
        std::vector<ParamPoint> roots;
        try {
            roots = find_roots(h, GleasonEvaluator(n), 128);
        } catch (const std::exception& e) {
            c.expect(false, "h_" + std::to_string(n) + ": " + e.what());
            continue;
        }
        total += roots.size();
        c.expect(roots.size() == static_cast<std::size_t>(h.degree().value()), "count h_" + std::to_string(n));
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const auto& r = roots[i];
            c.expect(r.residual.log2_abs() < -64, "residual h_" + std::to_string(n));
            MpFloat abs(r.value.re.precision());
            mpfr_hypot(abs.get(), r.value.re.get(), r.value.im.get(), MPFR_RNDU);
            c.expect(compare(abs, bound) <= 0, "outside |c| <= 2 + 2^-20 for h_" + std::to_string(n));
            // Sorted lexicographically, so equal roots would be neighbours.
            if (i > 0)
                c.expect(compare(roots[i - 1].value.re, r.value.re) != 0 ||
                             compare(roots[i - 1].value.im, r.value.im) != 0,
                         "repeated root in h_" + std::to_string(n));
        }
    }

    auto f = [](double x) { return ((x + 2) * x + 1) * x + 1; };  // h_3
    double lo = -2.0, hi = -1.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    const auto h3 = find_roots(*engine().gleason(3), GleasonEvaluator(3), 128);
    bool found = false;
    for (const auto& r : h3)
        if (r.value.im.is_zero()) found = std::fabs(r.value.re.to_double() - lo) < 1e-9;
    c.expect(found, "real root of h_3");
    c.info = std::to_string(total) + " roots";
}

void criterion_classification(Check& c)
{
    const PointSet set = points_of_order(engine(), 10, 128, std::max(1u, std::thread::hardware_concurrency()));
    std::size_t expected = 0;
    for (unsigned n = 1; n <= 10; ++n) expected += hyp_count(n).get_ui();
    for (unsigned ell = 2; ell < 10; ++ell)
        for (unsigned n = 1; ell + n <= 10; ++n) expected += mis_count(ell, n).get_ui();
    c.expect(set.points.size() == expected,
             "point count " + std::to_string(set.points.size()) + " vs " + std::to_string(expected));
    for (const auto& m : set.mismatches)
        c.expect(false, to_string(m.point.kind) + " classified as " + to_string(m.from_orbit));
    c.info = std::to_string(set.points.size()) + " points, " + std::to_string(set.mismatches.size()) + " mismatches";
}

void criterion_known_points(Check& c)
{
    struct Known {
        double re, im;
        Classification want;
    };
    const Known known[] = {
        {0, 0, Classification::hyperbolic(1)},         {-1, 0, Classification::hyperbolic(2)},
        {-2, 0, Classification::misiurewicz(2, 1)},    {0, 1, Classification::misiurewicz(2, 2)},
        {0, -1, Classification::misiurewicz(2, 2)},
    };
    for (const auto& k : known) {
        const Classification got = orbit_classify(MpComplex(k.re, k.im, 128), 16, 16);
        c.expect(got == k.want, std::to_string(k.re) + "+" + std::to_string(k.im) + "i -> " + to_string(got));
    }
}

void criterion_determinism(Check& c)
{
    const auto dir = std::filesystem::temp_directory_path() / "mtpoly_acceptance";
    std::filesystem::create_directories(dir);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    };

    std::string csv[2], img[2];
    for (int i = 0; i < 2; ++i) {
        std::ostringstream out, err;
        const int rc = cli_main({"roots", "--max-order", "8", "--precision", "128"}, out, err);
        c.expect(rc == 0, "roots exit " + std::to_string(rc));
        csv[i] = out.str();

        const auto file = dir / ("plot_" + std::to_string(i) + ".ppm");
        std::ostringstream pout, perr;
        const int prc = cli_main({"plot", "--center", "-0.75,0", "--width", "3", "--pixels", "320x240",
                                  "--max-iter", "256", "--max-order", "7", "--out", file.string()},
                                 pout, perr);
        c.expect(prc == 0, "plot exit " + std::to_string(prc));
        img[i] = slurp(file);
    }
    c.expect(!csv[0].empty() && csv[0] == csv[1], "roots CSV differs between runs");
    c.expect(!img[0].empty() && img[0] == img[1], "plot image differs between runs");
    std::filesystem::remove_all(dir);
    c.info = std::to_string(csv[0].size()) + " CSV bytes, " + std::to_string(img[0].size()) + " image bytes";
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
        {"reassembly of every q_{ell,n}, ell+n <= 16", criterion_reassembly},
        {"worked example (2,4)", criterion_worked_example},
        {"counting formulas vs factor degrees", criterion_counts},
        {"degree budget, ell,n <= 12", criterion_budget},
        {"low-order coefficient congruences, order <= 16", criterion_congruences},
        {"squarefreeness", criterion_squarefree},
        {"roots of h_n, n <= 12, at 128 bits", criterion_roots},
        {"classification cross-check, order <= 10", criterion_classification},
        {"known points", criterion_known_points},
        {"determinism of roots CSV and plot", criterion_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (c.ok() ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first;
        if (!c.info.empty()) std::cout << " [" << c.info << "]";
        if (!c.ok()) std::cout << " -- " << c.notes();
        std::cout << std::endl;
        if (!c.ok()) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
