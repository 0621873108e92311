#include <algorithm>
#include <complex>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mtpoly/cli.hpp"
#include "mtpoly/errors.hpp"
#include "mtpoly/factor.hpp"
#include "mtpoly/plot.hpp"
#include "mtpoly/roots.hpp"

using namespace mtpoly;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> lines;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    return lines;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("mtpoly_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Naive escape loop on std::complex, independent of the renderer's loop.
std::optional<unsigned> escape_oracle(std::complex<double> c, unsigned max_iter)
{
    std::complex<double> z = 0;
    for (unsigned i = 1; i <= max_iter; ++i) {
        z = z * z + c;
        if (std::abs(z) > 2.0) return i;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("escape_time examples")
{
    CHECK_FALSE(escape_time(0.0, 1000).has_value());
    CHECK_FALSE(escape_time(-2.0, 1000).has_value());
    CHECK_FALSE(escape_time({0, 1}, 1000).has_value());
    CHECK_FALSE(escape_time(-1.0, 1000).has_value());
    REQUIRE(escape_time(1.0, 1000).has_value());
    CHECK(*escape_time(1.0, 1000) == 3);
    CHECK(*escape_time(1.0, 3) == 3);
    CHECK_FALSE(escape_time(1.0, 2).has_value());
    CHECK(*escape_time(0.7, 100) == 3);  // 0, 0.7, 1.19, 2.116
    CHECK(*escape_time(3.0, 100) == 1);
}

TEST_CASE("escape_time matches a naive std::complex loop")
{
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 40; ++j) {
            const std::complex<double> c(-2.3 + i * 0.051, -1.3 + j * 0.067);
            const auto a = escape_time(c, 300);
            const auto b = escape_oracle(c, 300);
            CHECK(a == b);
        }
}

TEST_CASE("pixel mapping")
{
    PlotSpec s;
    s.center = {-0.75, 0.0};
    s.width = 3.0;
    s.width_px = 300;
    s.height_px = 200;
    const auto c00 = pixel_center(s, 0, 0);
    CHECK(c00.real() == doctest::Approx(-2.25 + 0.005));
    CHECK(c00.imag() == doctest::Approx(1.0 - 0.005));
    for (unsigned y = 0; y < s.height_px; y += 7)
        for (unsigned x = 0; x < s.width_px; x += 11) {
            const auto p = pixel_of(s, pixel_center(s, x, y));
            REQUIRE(p.has_value());
            CHECK(p->first == x);
            CHECK(p->second == y);
        }
    CHECK_FALSE(pixel_of(s, {1.0, 0.0}).has_value());
    CHECK_FALSE(pixel_of(s, {0.0, 1.5}).has_value());
    CHECK(pixel_of(s, {0.0, 0.0}).has_value());
}

TEST_CASE("PlotSpec validation")
{
    PlotSpec s;
    s.width_px = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = PlotSpec{};
    s.max_iter = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = PlotSpec{};
    s.width = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.width = -1;
    CHECK_THROWS_AS(render_image(s), std::invalid_argument);
}

TEST_CASE("render: single pixel and full-set views")
{
    PlotSpec one;
    one.center = 0.0;
    one.width = 0.01;
    one.width_px = one.height_px = 1;
    const Image tiny = render_image(one);
    REQUIRE(tiny.rgb.size() == 3);
    CHECK(tiny.at(0, 0) == one.palette.interior);

    PlotSpec fig;
    fig.center = {-0.75, 0.0};
    fig.width = 3.0;
    fig.width_px = 300;
    fig.height_px = 200;
    fig.max_iter = 200;
    const Image img = render_image(fig);
    const auto p0 = pixel_of(fig, 0.0);
    REQUIRE(p0);
    CHECK(img.at(p0->first, p0->second) == fig.palette.interior);
    const auto pm1 = pixel_of(fig, -1.0);
    REQUIRE(pm1);
    CHECK(img.at(pm1->first, pm1->second) == fig.palette.interior);

    // c = 1 lies right of this viewport; widen the view to see it.
    PlotSpec wide = fig;
    wide.center = 0.0;
    wide.width = 4.5;
    const Image wimg = render_image(wide);
    const auto p1 = pixel_of(wide, 1.0);
    REQUIRE(p1);
    const auto esc = escape_time(pixel_center(wide, p1->first, p1->second), wide.max_iter);
    REQUIRE(esc);
    CHECK(*esc <= 4);
    const Rgb got = wimg.at(p1->first, p1->second);
    CHECK(got == exterior_color(wide.palette, *esc, wide.max_iter));
    CHECK_FALSE(got == wide.palette.interior);
    // Far outside is close to the exterior color, near the boundary it darkens.
    CHECK(exterior_color(wide.palette, 1, 200).r > exterior_color(wide.palette, 150, 200).r);
    CHECK(exterior_color(wide.palette, 200, 200) == wide.palette.boundary);
}

TEST_CASE("render: overlay of points of order <= 6")
{
    Family family;
    FactorEngine engine(family);
    PointSet set = points_of_order(engine, 6, 64);
    REQUIRE(set.mismatches.empty());

    PlotSpec s;
    s.center = 0.0;
    s.width = 4.4;
    s.width_px = 440;
    s.height_px = 440;
    s.max_iter = 100;
    s.marker_radius = 1;
    s.palette.unclassified = {1, 2, 3};
    const Image bg = render_image(s);
    s.overlay = set.points;
    const Image img = render_image(s);

    const double px = s.width / s.width_px;
    std::size_t hyp = 0, mis = 0;
    for (const auto& p : set.points) {
        const std::complex<double> c(p.value.re.to_double(), p.value.im.to_double());
        CHECK(std::abs(c) <= 2.0 + 1e-12);
        const auto pix = pixel_of(s, c);
        REQUIRE(pix);
        CHECK(std::abs(pixel_center(s, pix->first, pix->second)) <= 2.0 + px);
        const Rgb col = img.at(pix->first, pix->second);
        CHECK((col == s.palette.hyperbolic || col == s.palette.misiurewicz));
        (p.kind.kind == PointKind::Hyperbolic ? hyp : mis) += 1;
    }
    CHECK(hyp == 1 + 1 + 3 + 6 + 15 + 27);
    CHECK(mis > 0);

    // Every changed pixel is a marker color within the marker radius of a point.
    for (unsigned y = 0; y < img.height; ++y)
        for (unsigned x = 0; x < img.width; ++x) {
            if (img.at(x, y) == bg.at(x, y)) continue;
            const Rgb col = img.at(x, y);
            CHECK((col == s.palette.hyperbolic || col == s.palette.misiurewicz));
            CHECK(std::abs(pixel_center(s, x, y)) <= 2.0 + 2 * px);
        }

    // A viewport with none of the points: overlay changes nothing.
    PlotSpec away = s;
    away.center = {10.0, 10.0};
    away.width = 1.0;
    away.width_px = away.height_px = 16;
    PlotSpec away_bg = away;
    away_bg.overlay.clear();
    CHECK(render_image(away).rgb == render_image(away_bg).rgb);
}

TEST_CASE("render: deterministic bytes and PPM layout")
{
    PlotSpec s;
    s.width_px = 97;
    s.height_px = 61;
    s.max_iter = 150;
    const Image a = render_image(s, 1);
    const Image b = render_image(s, 3);
    CHECK(a.rgb == b.rgb);

    const auto dir = scratch_dir("ppm");
    render(s, dir / "a.ppm", 1);
    render(s, dir / "b.ppm", 2);
    const std::string fa = slurp(dir / "a.ppm");
    CHECK(fa == slurp(dir / "b.ppm"));
    const std::string header = "P6\n97 61\n255\n";
    REQUIRE(fa.size() == header.size() + a.rgb.size());
    CHECK(fa.substr(0, header.size()) == header);
    CHECK(std::equal(a.rgb.begin(), a.rgb.end(), fa.begin() + static_cast<long>(header.size()),
                     [](std::uint8_t u, char c) { return u == static_cast<std::uint8_t>(c); }));

    CHECK_THROWS_AS(render(s, dir / "missing" / "x.ppm"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli count")
{
    const Run r = run({"count", "--ell", "2", "--n", "4"});
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0] == "ell=2");
    CHECK(lines[1] == "n=4");
    CHECK(lines[2] == "hyp_count=6");
    CHECK(lines[3] == "phi=2");
    CHECK(lines[4] == "mis_count=12");
    CHECK(lines[5] == "budget=32");
    CHECK(r.out.find("eta[1]=3\n") != std::string::npos);
    CHECK(r.out.find("eta[4]=2\n") != std::string::npos);

    const Run pretty = run({"count", "--ell", "2", "--n", "4", "--pretty"});
    CHECK(pretty.code == 0);
    const auto pl = lines_of(pretty.out);
    REQUIRE(pl.size() == lines.size());
    for (const auto& l : pl) CHECK(l.size() == pl[0].size());
    CHECK(pl[2].find("hyp_count") == 0);
}

TEST_CASE("cli factor")
{
    const Run r = run({"factor", "--ell", "2", "--n", "4", "--verify"});
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    const std::vector<std::string> want = {
        "h k=1 exp=3 deg=1 file=-", "h k=2 exp=2 deg=1 file=-",  "h k=4 exp=2 deg=6 file=-",
        "m l=2 k=1 deg=1 file=-",   "m l=2 k=2 deg=2 file=-",    "m l=2 k=4 deg=12 file=-",
        "verify ok",
    };
    CHECK(lines == want);

    // Files written with --out-dir read back to the engine's factors.
    const auto dir = scratch_dir("factor");
    const Run w = run({"factor", "--ell", "3", "--n", "4", "--out-dir", dir.string()});
    CHECK(w.code == 0);
    Family family;
    FactorEngine engine(family);
    const FactorTable t = engine.factorize(FamilyIndex(3, 4));
    std::size_t files = 0;
    for (const auto& [k, f] : t.hyp_factors) {
        std::ifstream in(dir / ("h_" + std::to_string(k) + ".poly"));
        REQUIRE(in);
        CHECK(read_poly(in) == *f.poly);
        ++files;
    }
    for (const auto& [jk, p] : t.mis_factors) {
        std::ifstream in(dir / ("m_" + std::to_string(jk.first) + "_" + std::to_string(jk.second) + ".poly"));
        REQUIRE(in);
        CHECK(read_poly(in) == *p);
        ++files;
    }
    CHECK(lines_of(w.out).size() == files);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli poly round trip")
{
    Family family;
    const Run p = run({"poly", "--n", "6"});
    CHECK(p.code == 0);
    std::istringstream is(p.out);
    CHECK(read_poly(is) == family.orbit_poly(6));

    const Run q = run({"poly", "--n", "4", "--ell", "2"});
    CHECK(q.code == 0);
    std::istringstream iq(q.out);
    CHECK(read_poly(iq) == family.mt_poly(FamilyIndex(2, 4)));

    const Run z = run({"poly", "--n", "0"});
    CHECK(z.code == 0);
    CHECK(z.out == "poly v1 deg=-inf\n");
}

TEST_CASE("cli verify")
{
    const Run r = run({"verify", "--max-order", "10"});
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 11);
    CHECK(lines[9] == "order 10: 10/10 reassembled");
    CHECK(lines[10] == "ok 55/55 types");
    CHECK(run({"--jobs", "3", "verify", "--max-order", "8"}).out == run({"verify", "--max-order", "8", "--jobs", "1"}).out);
}

TEST_CASE("cli roots")
{
    const Run r = run({"roots", "--max-order", "4", "--precision", "96"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    const auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "re,im,kind,preperiod,period,residual_log2,precision_bits");
    // deg h_1..h_4 = 1+1+3+6; deg m_{2,1}, m_{2,2}, m_{3,1} = 1, 2, 8-4-1
    CHECK(lines.size() == 1 + 11 + 6);
    CHECK(std::find(lines.begin(), lines.end(), "0,0,hyp,0,1,-inf,96") != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), "-1e0,0,hyp,0,2,-inf,96") != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), "-2e0,0,mis,2,1,-inf,96") != lines.end());
    std::size_t mis = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].find(",96") == lines[i].size() - 3);
        if (lines[i].find(",mis,") != std::string::npos) ++mis;
    }
    CHECK(mis == 6);
    CHECK(run({"roots", "--max-order", "4", "--precision", "96", "--jobs", "1"}).out == r.out);
}

TEST_CASE("cli plot")
{
    const auto dir = scratch_dir("plot");
    const auto file = dir / "p.ppm";
    const Run r = run({"plot", "--center", "-0.5,0.25", "--width", "2.5", "--pixels", "64x48", "--max-iter", "80",
                       "--max-order", "4", "--out", file.string()});
    CHECK(r.code == 0);

    Family family;
    FactorEngine engine(family);
    PlotSpec s;
    s.center = {-0.5, 0.25};
    s.width = 2.5;
    s.width_px = 64;
    s.height_px = 48;
    s.max_iter = 80;
    s.overlay = points_of_order(engine, 4, 128).points;
    std::ostringstream expected;
    write_ppm(expected, render_image(s));
    CHECK(slurp(file) == expected.str());
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli usage errors")
{
    const Run missing = run({"count", "--ell", "2"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--n") != std::string::npos);

    const Run unknown = run({"count", "--ell", "2", "--n", "4", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("--bogus") != std::string::npos);

    const Run zero = run({"count", "--ell", "2", "--n", "0"});
    CHECK(zero.code == 2);
    CHECK(zero.err.find("--n") != std::string::npos);

    const Run notnum = run({"factor", "--ell", "x", "--n", "2"});
    CHECK(notnum.code == 2);
    CHECK(notnum.err.find("--ell") != std::string::npos);

    const Run cap = run({"--cap", "5", "verify", "--max-order", "6"});
    CHECK(cap.code == 2);
    CHECK(cap.err.find("--max-order") != std::string::npos);
    CHECK(run({"--cap", "5", "verify", "--max-order", "5"}).code == 0);

    const Run center = run({"plot", "--center", "1;2", "--out", "x.ppm"});
    CHECK(center.code == 2);
    CHECK(center.err.find("--center") != std::string::npos);

    const Run pixels = run({"plot", "--pixels", "10x0", "--out", "x.ppm"});
    CHECK(pixels.code == 2);
    CHECK(pixels.err.find("--pixels") != std::string::npos);

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli runtime failure exits 1")
{
    const Run r = run({"plot", "--pixels", "4x4", "--out", "/nonexistent_dir_for_test/x.ppm"});
    CHECK(r.code == 1);
    CHECK(r.err.find("nonexistent_dir_for_test") != std::string::npos);
}

TEST_CASE("cli honors the cache directory")
{
    const auto dir = scratch_dir("cache");
    ::setenv(kCacheDirEnv, dir.c_str(), 1);
    const Run a = run({"factor", "--ell", "2", "--n", "3"});
    ::unsetenv(kCacheDirEnv);
    CHECK(a.code == 0);
    CHECK(std::filesystem::exists(dir / "h_3.poly"));
    CHECK(std::filesystem::exists(dir / "m_2_3.poly"));
    CHECK(a.out.find("file=" + (dir / "h_3.poly").string()) != std::string::npos);
    std::filesystem::remove_all(dir);
}
