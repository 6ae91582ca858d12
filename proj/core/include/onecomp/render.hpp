#pragma once

#include <string>
#include <vector>

#include "onecomp/inner_function.hpp"

namespace onecomp {

struct RenderOptions {
    int width = 800;           // square image, width x width pixels
    std::vector<double> etas;  // sublevel thresholds; nesting depth is shaded
    double r_max = 0.999;      // sampling radius
    double log_tol = 0.02;
    int workers = 0;  // 0 -> hardware concurrency
};

/// Binary PPM (P6) picture of the nested sublevel sets.  Depth shades darker
/// for deeper nesting; connected components of the union get distinct hues.
/// Byte-for-byte deterministic for identical inputs.
std::string render_ppm(const InnerSpec& u, const RenderOptions& opt);

/// Same picture as run-length <rect> rows in SVG.
std::string render_svg(const InnerSpec& u, const RenderOptions& opt);

}  // namespace onecomp
