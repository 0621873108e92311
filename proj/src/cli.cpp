#include "mtpoly/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "mtpoly/counting.hpp"
#include "mtpoly/errors.hpp"
#include "mtpoly/factor.hpp"
#include "mtpoly/family.hpp"
#include "mtpoly/plot.hpp"
#include "mtpoly/roots.hpp"

namespace mtpoly {

namespace {

/// Thrown for bad flag values found after CLI11 has parsed the line.
struct UsageError {
    std::string message;
};

unsigned default_jobs()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

std::optional<std::filesystem::path> cache_dir_from_env()
{
    const char* dir = std::getenv(kCacheDirEnv);
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return std::filesystem::path(dir);
}

std::string fixed(double v, int decimals)
{
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& flag)
{
    double v = 0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != end)
        throw UsageError{flag + ": expected a number, got '" + s + "'"};
    return v;
}

std::complex<double> parse_center(const std::string& s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError{"--center: expected re,im, got '" + s + "'"};
    return {parse_double(s.substr(0, comma), "--center"), parse_double(s.substr(comma + 1), "--center")};
}

std::pair<unsigned, unsigned> parse_pixels(const std::string& s)
{
    const auto x = s.find('x');
    unsigned w = 0, h = 0;
    auto num = [&](std::string_view part, unsigned& v) {
        const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
        return !part.empty() && res.ec == std::errc() && res.ptr == part.data() + part.size() && v > 0;
    };
    const std::string_view sv(s);
    if (x == std::string::npos || !num(sv.substr(0, x), w) || !num(sv.substr(x + 1), h))
        throw UsageError{"--pixels: expected WxH with positive integers, got '" + s + "'"};
    return {w, h};
}

void check_order(const char* flag, unsigned order, unsigned cap)
{
    if (order > cap)
        throw UsageError{std::string(flag) + ": order " + std::to_string(order) + " exceeds --cap " +
                         std::to_string(cap)};
}

void report_mismatches(const PointSet& set, std::ostream& err)
{
    for (const auto& m : set.mismatches)
        err << "mismatch: " << m.point.value.re.to_string(17) << ',' << m.point.value.im.to_string(17)
            << " factor=" << to_string(m.point.kind) << " orbit=" << to_string(m.from_orbit) << '\n';
}

struct Options {
    unsigned cap = kDefaultOrderCap;
    unsigned jobs = default_jobs();

    unsigned poly_n = 0;
    std::optional<unsigned> poly_ell;
    std::string poly_out;

    unsigned ell = 0;
    unsigned n = 1;
    bool factor_verify = false;
    std::string out_dir;
    bool pretty = false;

    unsigned max_order = 0;
    unsigned precision = 128;
    std::string csv_out;

    std::string center = "-0.75,0";
    double width = 3.0;
    std::string pixels = "800x600";
    unsigned max_iter = 256;
    unsigned marker_radius = 2;
    std::string plot_out;
};

int run_poly(const Options& o, std::ostream& out)
{
    Family family(o.cap);
    IntPoly p;
    if (o.poly_ell) {
        if (o.poly_n == 0) throw UsageError{"--n: q needs n >= 1"};
        check_order("--ell", *o.poly_ell + o.poly_n, o.cap);
        p = family.mt_poly(FamilyIndex(*o.poly_ell, o.poly_n));
    } else {
        check_order("--n", o.poly_n, o.cap);
        p = family.orbit_poly(o.poly_n);
    }
    if (o.poly_out.empty()) {
        write_poly(out, p);
        return kExitOk;
    }
    std::ofstream f(o.poly_out);
    if (!f) throw IoError("cannot open " + o.poly_out + " for writing");
    write_poly(f, p);
    f.flush();
    if (!f) throw IoError("write to " + o.poly_out + " failed");
    return kExitOk;
}

int run_factor(const Options& o, std::ostream& out)
{
    check_order("--ell", o.ell + o.n, o.cap);
    std::optional<std::filesystem::path> dir = cache_dir_from_env();
    if (!o.out_dir.empty()) dir = std::filesystem::path(o.out_dir);
    if (dir) std::filesystem::create_directories(*dir);

    Family family(o.cap);
    FactorEngine engine(family, cache_dir_from_env());
    const FactorTable table = engine.factorize(FamilyIndex(o.ell, o.n));

    auto emit = [&](const std::string& name, const IntPoly& p) -> std::string {
        if (!dir) return "-";
        const auto path = *dir / (name + ".poly");
        std::ofstream f(path);
        if (!f) throw IoError("cannot open " + path.string() + " for writing");
        write_poly(f, p);
        f.flush();
        if (!f) throw IoError("write to " + path.string() + " failed");
        return path.string();
    };

    for (const auto& [k, f] : table.hyp_factors)
        out << "h k=" << k << " exp=" << f.exponent << " deg=" << to_string(f.poly->degree())
            << " file=" << emit("h_" + std::to_string(k), *f.poly) << '\n';
    for (const auto& [jk, p] : table.mis_factors)
        out << "m l=" << jk.first << " k=" << jk.second << " deg=" << to_string(p->degree())
            << " file=" << emit("m_" + std::to_string(jk.first) + "_" + std::to_string(jk.second), *p) << '\n';

    if (!o.factor_verify) return kExitOk;
    const bool ok = engine.verify(table);
    out << "verify " << (ok ? "ok" : "FAILED") << '\n';
    return ok ? kExitOk : kExitFailure;
}

int run_count(const Options& o, std::ostream& out)
{
    if (o.n == 0) throw UsageError{"--n: must be >= 1"};
    const CountRecord r = degree_budget(o.ell, o.n);
    std::vector<std::pair<std::string, std::string>> rows = {
        {"ell", std::to_string(r.ell)},           {"n", std::to_string(r.n)},
        {"hyp_count", r.hyp_count.get_str()},     {"phi", r.phi.get_str()},
        {"mis_count", r.mis_count.get_str()},     {"budget", r.degree_budget.get_str()},
    };
    for (const auto& [k, e] : r.eta_by_divisor) rows.emplace_back("eta[" + std::to_string(k) + "]", std::to_string(e));
    for (const auto& [k, d] : r.hyperbolic_degree)
        rows.emplace_back("hyp_degree[" + std::to_string(k) + "]", d.get_str());
    for (const auto& [k, d] : r.misiurewicz_degree)
        rows.emplace_back("mis_degree[" + std::to_string(k) + "]", d.get_str());

    if (!o.pretty) {
        for (const auto& [k, v] : rows) out << k << '=' << v << '\n';
        return kExitOk;
    }
    std::size_t kw = 0, vw = 0;
    for (const auto& [k, v] : rows) {
        kw = std::max(kw, k.size());
        vw = std::max(vw, v.size());
    }
    for (const auto& [k, v] : rows)
        out << std::left << std::setw(static_cast<int>(kw)) << k << "  " << std::right
            << std::setw(static_cast<int>(vw)) << v << '\n';
    return kExitOk;
}

int run_roots(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.max_order == 0) throw UsageError{"--max-order: must be >= 1"};
    if (o.precision < 16) throw UsageError{"--precision: must be >= 16"};
    check_order("--max-order", o.max_order, o.cap);
    Family family(o.cap);
    FactorEngine engine(family, cache_dir_from_env());
    const PointSet set = points_of_order(engine, o.max_order, o.precision, o.jobs);

    std::ofstream file;
    if (!o.csv_out.empty()) {
        file.open(o.csv_out);
        if (!file) throw IoError("cannot open " + o.csv_out + " for writing");
    }
    std::ostream& csv = o.csv_out.empty() ? out : file;
    csv << "re,im,kind,preperiod,period,residual_log2,precision_bits\n";
    for (const auto& p : set.points) {
        const int digits = decimal_digits_for(p.precision_bits);
        csv << p.value.re.to_string(digits) << ',' << p.value.im.to_string(digits) << ','
            << kind_name(p.kind.kind) << ',' << p.kind.preperiod << ',' << p.kind.period << ','
            << fixed(p.residual.log2_abs(), 2) << ',' << p.precision_bits << '\n';
    }
    csv.flush();
    if (!csv) throw IoError("writing CSV failed");
    report_mismatches(set, err);
    return set.mismatches.empty() ? kExitOk : kExitFailure;
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.max_order == 0) throw UsageError{"--max-order: must be >= 1"};
    check_order("--max-order", o.max_order, o.cap);
    Family family(o.cap);
    FactorEngine engine(family, cache_dir_from_env());

    std::vector<FamilyIndex> all;
    for (unsigned order = 1; order <= o.max_order; ++order)
        for (unsigned ell = 0; ell < order; ++ell) all.emplace_back(ell, order - ell);
    // Largest first so the long tasks do not end up last.
    std::sort(all.begin(), all.end(), [](const FamilyIndex& a, const FamilyIndex& b) {
        return a.order() != b.order() ? a.order() > b.order() : a.ell < b.ell;
    });

    std::vector<int> ok(all.size(), 0);
    std::vector<std::string> errors(all.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < all.size();) {
            try {
                ok[i] = engine.verify(engine.factorize(all[i])) ? 1 : 0;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(all.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::size_t failed = 0;
    std::vector<std::size_t> per_order(o.max_order + 1, 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (ok[i]) {
            ++per_order[all[i].order()];
            continue;
        }
        ++failed;
        err << "FAILED ell=" << all[i].ell << " n=" << all[i].n;
        if (!errors[i].empty()) err << ": " << errors[i];
        err << '\n';
    }
    for (unsigned order = 1; order <= o.max_order; ++order)
        out << "order " << order << ": " << per_order[order] << '/' << order << " reassembled\n";
    out << (failed == 0 ? "ok " : "FAILED ") << all.size() - failed << '/' << all.size() << " types\n";
    return failed == 0 ? kExitOk : kExitFailure;
}

int run_plot(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.plot_out.empty()) throw UsageError{"--out: required"};
    PlotSpec spec;
    spec.center = parse_center(o.center);
    spec.width = o.width;
    std::tie(spec.width_px, spec.height_px) = parse_pixels(o.pixels);
    spec.max_iter = o.max_iter;
    spec.marker_radius = o.marker_radius;
    if (!(spec.width > 0) || !std::isfinite(spec.width)) throw UsageError{"--width: must be positive"};
    if (spec.max_iter == 0) throw UsageError{"--max-iter: must be >= 1"};

    bool mismatched = false;
    if (o.max_order > 0) {
        check_order("--max-order", o.max_order, o.cap);
        Family family(o.cap);
        FactorEngine engine(family, cache_dir_from_env());
        PointSet set = points_of_order(engine, o.max_order, o.precision, o.jobs);
        report_mismatches(set, err);
        mismatched = !set.mismatches.empty();
        spec.overlay = std::move(set.points);
    }
    render(spec, o.plot_out, o.jobs);
    out << "wrote " << o.plot_out << " (" << spec.width_px << 'x' << spec.height_px << ", "
        << spec.overlay.size() << " points)\n";
    return mismatched ? kExitFailure : kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Critical-orbit polynomials of the Mandelbrot family: construction, factorization, roots, plots",
                 "mtpoly"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--cap", o.cap, "Largest ell + n allowed")->check(CLI::Range(1u, 40u))->capture_default_str();
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();

    auto* poly = app.add_subcommand("poly", "Print p_n, or q_{ell,n} with --ell, in poly v1 text format");
    poly->add_option("--n", o.poly_n, "n")->required();
    poly->add_option("--ell", o.poly_ell, "Pre-period ell");
    poly->add_option("--out", o.poly_out, "Write to this file instead of stdout");

    auto* factor = app.add_subcommand("factor", "Factor q_{ell,n} into Gleason and Misiurewicz factors");
    factor->add_option("--ell", o.ell, "Pre-period ell")->required();
    factor->add_option("--n", o.n, "Period n")->required()->check(CLI::Range(1u, 64u));
    factor->add_flag("--verify", o.factor_verify, "Multiply the factors back and compare");
    factor->add_option("--out-dir", o.out_dir, "Write each factor as a .poly file here");

    auto* count = app.add_subcommand("count", "Predicted counts and degree budget for (ell, n)");
    count->add_option("--ell", o.ell, "Pre-period ell")->required();
    count->add_option("--n", o.n, "Period n")->required()->check(CLI::Range(1u, 64u));
    count->add_flag("--pretty", o.pretty, "Aligned columns instead of key=value");

    auto* roots = app.add_subcommand("roots", "CSV of all hyperbolic and Misiurewicz parameters up to an order");
    roots->add_option("--max-order", o.max_order, "Largest ell + n")->required();
    roots->add_option("--precision", o.precision, "Bits")->capture_default_str();
    roots->add_option("--out", o.csv_out, "Write CSV here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Reassemble every q_{ell,n} with ell + n <= max-order");
    verify->add_option("--max-order", o.max_order, "Largest ell + n")->required();

    auto* plot = app.add_subcommand("plot", "Render the Mandelbrot set with classified points as PPM");
    plot->add_option("--center", o.center, "re,im")->capture_default_str();
    plot->add_option("--width", o.width, "Span of the real axis")->capture_default_str();
    plot->add_option("--pixels", o.pixels, "WxH")->capture_default_str();
    plot->add_option("--max-iter", o.max_iter, "Escape-time iteration bound")->capture_default_str();
    plot->add_option("--max-order", o.max_order, "Overlay points up to this order (0: none)")
        ->capture_default_str();
    plot->add_option("--precision", o.precision, "Bits for the overlay roots")->capture_default_str();
    plot->add_option("--marker-radius", o.marker_radius, "Overlay disk radius in pixels")->capture_default_str();
    plot->add_option("--out", o.plot_out, "Output .ppm file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (poly->parsed()) return run_poly(o, out);
        if (factor->parsed()) return run_factor(o, out);
        if (count->parsed()) return run_count(o, out);
        if (roots->parsed()) return run_roots(o, out, err);
        if (verify->parsed()) return run_verify(o, out, err);
        if (plot->parsed()) return run_plot(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.message << '\n';
        return kExitUsage;
    } catch (const CapExceeded& e) {
        err << "error: --cap: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.push_back("mtpoly");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mtpoly
