#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "mtpoly/roots.hpp"

namespace mtpoly {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Palette {
    Rgb interior{160, 160, 160};
    Rgb exterior{255, 255, 255};  // far from the set; shades to `boundary` near it
    Rgb boundary{0, 0, 0};
    Rgb hyperbolic{0, 170, 0};
    Rgb misiurewicz{220, 0, 0};
    Rgb unclassified{0, 0, 220};
};

struct PlotSpec {
    std::complex<double> center{-0.75, 0.0};
    /// Span of the real axis across the image.
    double width = 3.0;
    unsigned width_px = 800;
    unsigned height_px = 600;
    unsigned max_iter = 256;
    std::vector<ParamPoint> overlay;
    unsigned marker_radius = 2;
    Palette palette;

    /// Throws std::invalid_argument on non-positive sizes or max_iter.
    void validate() const;
};

/// First i >= 1 with |z_i| > 2 for z_0 = 0, z_{i+1} = z_i^2 + c, or nullopt
/// (bounded) if none within max_iter iterations.
std::optional<unsigned> escape_time(std::complex<double> c, unsigned max_iter);

/// Parameter at the center of pixel (x, y); y grows downward.
std::complex<double> pixel_center(const PlotSpec& spec, unsigned x, unsigned y);

/// Pixel containing c, if c is in the viewport.
std::optional<std::pair<unsigned, unsigned>> pixel_of(const PlotSpec& spec, std::complex<double> c);

/// Color of an escaping pixel; darker the longer the orbit stays.
Rgb exterior_color(const Palette& palette, unsigned escape, unsigned max_iter);

struct Image {
    unsigned width = 0;
    unsigned height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    Rgb at(unsigned x, unsigned y) const;
    void set(unsigned x, unsigned y, Rgb c);
};

/// Escape-time background plus overlay disks. Rows are split across `jobs`
/// threads; the pixels do not depend on `jobs`.
Image render_image(const PlotSpec& spec, unsigned jobs = 1);

/// Binary PPM (P6).
void write_ppm(std::ostream& os, const Image& image);

/// render_image + write_ppm to `path`. Throws IoError if the file cannot be written.
void render(const PlotSpec& spec, const std::filesystem::path& path, unsigned jobs = 1);

}  // namespace mtpoly
