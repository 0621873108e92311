#include "mtpoly/plot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "mtpoly/errors.hpp"

namespace mtpoly {

void PlotSpec::validate() const
{
    if (width_px == 0 || height_px == 0) throw std::invalid_argument("pixel dimensions must be positive");
    if (max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
    if (!(width > 0) || !std::isfinite(width)) throw std::invalid_argument("width must be positive");
    if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
        throw std::invalid_argument("center must be finite");
}

std::optional<unsigned> escape_time(std::complex<double> c, unsigned max_iter)
{
    double x = 0, y = 0;
    for (unsigned i = 1; i <= max_iter; ++i) {
        const double nx = x * x - y * y + c.real();
        y = 2 * x * y + c.imag();
        x = nx;
        if (x * x + y * y > 4.0) return i;
    }
    return std::nullopt;
}

namespace {

double pixel_size(const PlotSpec& s) { return s.width / s.width_px; }

}  // namespace

std::complex<double> pixel_center(const PlotSpec& spec, unsigned x, unsigned y)
{
    const double px = pixel_size(spec);
    const double left = spec.center.real() - 0.5 * spec.width;
    const double top = spec.center.imag() + 0.5 * px * spec.height_px;
    return {left + (x + 0.5) * px, top - (y + 0.5) * px};
}

std::optional<std::pair<unsigned, unsigned>> pixel_of(const PlotSpec& spec, std::complex<double> c)
{
    const double px = pixel_size(spec);
    const double left = spec.center.real() - 0.5 * spec.width;
    const double top = spec.center.imag() + 0.5 * px * spec.height_px;
    const double fx = std::floor((c.real() - left) / px);
    const double fy = std::floor((top - c.imag()) / px);
    if (!(fx >= 0 && fy >= 0 && fx < spec.width_px && fy < spec.height_px)) return std::nullopt;
    return std::make_pair(static_cast<unsigned>(fx), static_cast<unsigned>(fy));
}

Rgb exterior_color(const Palette& p, unsigned escape, unsigned max_iter)
{
    const double t = std::sqrt(std::min(1.0, static_cast<double>(escape) / max_iter));
    auto mix = [t](std::uint8_t far, std::uint8_t near) {
        return static_cast<std::uint8_t>(std::lround(far + (near - far) * t));
    };
    return {mix(p.exterior.r, p.boundary.r), mix(p.exterior.g, p.boundary.g), mix(p.exterior.b, p.boundary.b)};
}

Rgb Image::at(unsigned x, unsigned y) const
{
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(unsigned x, unsigned y, Rgb c)
{
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
}

Image render_image(const PlotSpec& spec, unsigned jobs)
{
    spec.validate();
    Image img;
    img.width = spec.width_px;
    img.height = spec.height_px;
    img.rgb.assign(3 * static_cast<std::size_t>(img.width) * img.height, 0);

    std::atomic<unsigned> next_row{0};
    auto worker = [&] {
        for (unsigned y; (y = next_row.fetch_add(1)) < img.height;)
            for (unsigned x = 0; x < img.width; ++x) {
                const auto esc = escape_time(pixel_center(spec, x, y), spec.max_iter);
                img.set(x, y, esc ? exterior_color(spec.palette, *esc, spec.max_iter) : spec.palette.interior);
            }
    };
    const unsigned threads = std::max(1u, std::min(jobs, img.height));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const int r = static_cast<int>(spec.marker_radius);
    for (const auto& p : spec.overlay) {
        const std::complex<double> c(p.value.re.to_double(), p.value.im.to_double());
        const auto pix = pixel_of(spec, c);
        if (!pix) continue;
        const Rgb color = p.kind.kind == PointKind::Hyperbolic    ? spec.palette.hyperbolic
                          : p.kind.kind == PointKind::Misiurewicz ? spec.palette.misiurewicz
                                                                  : spec.palette.unclassified;
        const int cx = static_cast<int>(pix->first), cy = static_cast<int>(pix->second);
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (dx * dx + dy * dy > r * r) continue;
                const int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= static_cast<int>(img.width) || y >= static_cast<int>(img.height))
                    continue;
                img.set(static_cast<unsigned>(x), static_cast<unsigned>(y), color);
            }
    }
    return img;
}

void write_ppm(std::ostream& os, const Image& image)
{
    os << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
}

void render(const PlotSpec& spec, const std::filesystem::path& path, unsigned jobs)
{
    const Image img = render_image(spec, jobs);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_ppm(out, img);
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace mtpoly
