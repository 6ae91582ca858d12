#include "onecomp/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <thread>

#include "onecomp/errors.hpp"

namespace onecomp {

namespace {

constexpr std::uint8_t kOutsideDisk = 255;
constexpr std::uint8_t kUnsampled = 254;

struct Raster {
    int w = 0;
    std::vector<std::uint8_t> depth;  // nesting depth, or a sentinel
    std::vector<std::int32_t> label;  // component of the depth>=1 union, else -1
    int n_components = 0;
};

Raster rasterize(const InnerSpec& u, const RenderOptions& opt) {
    if (opt.width < 16 || opt.width > 8192)
        throw ValidationError("render width must lie in [16, 8192]");
    if (opt.etas.empty())
        throw ValidationError("render needs at least one sublevel threshold");
    for (double eta : opt.etas)
        if (!(eta > 0.0 && eta < 1.0))
            throw EtaOutOfRange("render thresholds must lie in (0, 1)");
    if (!(opt.r_max > 0.0 && opt.r_max < 1.0))
        throw ValidationError("render r_max must lie in (0, 1)");

    std::vector<double> levels(opt.etas);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    std::vector<double> log_levels;
    log_levels.reserve(levels.size());
    for (double eta : levels) log_levels.push_back(std::log(eta));

    const double r_max = std::min(
        opt.r_max, std::min(certified_radius(u, opt.log_tol), 1.0 - 1e-9));

    Raster ras;
    ras.w = opt.width;
    const int w = opt.width;
    ras.depth.assign(static_cast<size_t>(w) * w, kOutsideDisk);

    int n_workers = opt.workers > 0
                        ? opt.workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, n_workers);
    std::atomic<int> next_row{0};
    auto work = [&] {
        for (;;) {
            const int y = next_row.fetch_add(1);
            if (y >= w) return;
            for (int x = 0; x < w; ++x) {
                const double re = (2.0 * (x + 0.5)) / w - 1.0;
                const double im = 1.0 - (2.0 * (y + 0.5)) / w;
                const double r = std::hypot(re, im);
                const size_t gi = static_cast<size_t>(y) * w + x;
                if (r >= 1.0) continue;
                if (r >= r_max) {
                    ras.depth[gi] = kUnsampled;
                    continue;
                }
                const double L =
                    eval_log_modulus(u, Complex(re, im), opt.log_tol).value;
                std::uint8_t d = 0;
                for (double ll : log_levels)
                    if (L < ll) ++d;
                ras.depth[gi] = std::min<std::uint8_t>(d, 250);
            }
        }
    };
    {
        std::vector<std::thread> pool;
        for (int k = 0; k < n_workers; ++k) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // 4-connected components of the depth >= 1 union, two-pass union-find
    ras.label.assign(ras.depth.size(), -1);
    std::vector<std::int32_t> parent;
    auto find = [&](std::int32_t x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    auto member = [&](size_t gi) {
        return ras.depth[gi] >= 1 && ras.depth[gi] < kUnsampled;
    };
    for (int y = 0; y < w; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t gi = static_cast<size_t>(y) * w + x;
            if (!member(gi)) continue;
            std::int32_t lbl = -1;
            if (x > 0 && member(gi - 1)) lbl = find(ras.label[gi - 1]);
            if (y > 0 && member(gi - static_cast<size_t>(w))) {
                const std::int32_t up = find(ras.label[gi - static_cast<size_t>(w)]);
                if (lbl < 0)
                    lbl = up;
                else if (up != lbl)
                    parent[static_cast<size_t>(std::max(lbl, up))] =
                        std::min(lbl, up);
            }
            if (lbl < 0) {
                lbl = static_cast<std::int32_t>(parent.size());
                parent.push_back(lbl);
            }
            ras.label[gi] = lbl;
        }
    std::vector<std::int32_t> compact(parent.size(), -1);
    for (size_t gi = 0; gi < ras.label.size(); ++gi) {
        if (ras.label[gi] < 0) continue;
        const std::int32_t root = find(ras.label[gi]);
        if (compact[static_cast<size_t>(root)] < 0)
            compact[static_cast<size_t>(root)] = ras.n_components++;
        ras.label[gi] = compact[static_cast<size_t>(root)];
    }
    return ras;
}

void hsv_to_rgb(double h, double s, double v, std::uint8_t rgb[3]) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    rgb[0] = static_cast<std::uint8_t>(std::lround(255.0 * (r + m)));
    rgb[1] = static_cast<std::uint8_t>(std::lround(255.0 * (g + m)));
    rgb[2] = static_cast<std::uint8_t>(std::lround(255.0 * (b + m)));
}

void pixel_color(const Raster& ras, size_t gi, std::uint8_t rgb[3]) {
    const std::uint8_t d = ras.depth[gi];
    if (d == kOutsideDisk) {
        rgb[0] = rgb[1] = rgb[2] = 255;
    } else if (d == kUnsampled) {
        rgb[0] = rgb[1] = rgb[2] = 233;
    } else if (d == 0) {
        rgb[0] = rgb[1] = rgb[2] = 246;
    } else {
        const double hue = std::fmod(210.0 + 67.0 * ras.label[gi], 360.0);
        const double depth_v = 0.92 - 0.16 * std::min<int>(d - 1, 4);
        hsv_to_rgb(hue, 0.55, depth_v, rgb);
    }
}

}  // namespace

std::string render_ppm(const InnerSpec& u, const RenderOptions& opt) {
    const Raster ras = rasterize(u, opt);
    const int w = ras.w;
    std::string out;
    char header[64];
    std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", w, w);
    out = header;
    out.resize(out.size() + 3 * static_cast<size_t>(w) * w);
    std::uint8_t* p =
        reinterpret_cast<std::uint8_t*>(out.data() + std::string(header).size());
    for (size_t gi = 0; gi < ras.depth.size(); ++gi, p += 3)
        pixel_color(ras, gi, p);
    return out;
}

std::string render_svg(const InnerSpec& u, const RenderOptions& opt) {
    const Raster ras = rasterize(u, opt);
    const int w = ras.w;
    std::string out;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\" viewBox=\"0 0 %d %d\" "
                  "shape-rendering=\"crispEdges\">\n",
                  w, w, w, w);
    out = buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (int y = 0; y < w; ++y) {
        int run_x = 0;
        std::uint8_t cur[3];
        pixel_color(ras, static_cast<size_t>(y) * w, cur);
        auto flush = [&](int end_x) {
            if (cur[0] == 255 && cur[1] == 255 && cur[2] == 255) return;
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"1\" "
                          "fill=\"#%02x%02x%02x\"/>\n",
                          run_x, y, end_x - run_x, cur[0], cur[1], cur[2]);
            out += buf;
        };
        for (int x = 1; x < w; ++x) {
            std::uint8_t c[3];
            pixel_color(ras, static_cast<size_t>(y) * w + x, c);
            if (c[0] != cur[0] || c[1] != cur[1] || c[2] != cur[2]) {
                flush(x);
                run_x = x;
                cur[0] = c[0];
                cur[1] = c[1];
                cur[2] = c[2];
            }
        }
        flush(w);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace onecomp
