#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "evpipe/events.hpp"

namespace evpipe {

enum class AugmentOp { Gamma, HistEq, Clahe, GaussianBlur, Edge, Morphology };
enum class MorphOp { Erode, Dilate, Open, Close };

const char* to_string(AugmentOp op);
std::optional<AugmentOp> parse_augment_op(std::string_view s);
const char* to_string(MorphOp op);
std::optional<MorphOp> parse_morph_op(std::string_view s);

struct TileGrid {
    int cols = 8;
    int rows = 8;

    friend bool operator==(const TileGrid&, const TileGrid&) = default;
};

// One frame-level transform with its parameters. Unused parameters are
// ignored by apply_augment; an infinite clip_limit means no clipping.
struct AugmentSpec {
    AugmentOp op = AugmentOp::Gamma;
    double gamma = 1.0;
    double clip_limit = 2.0;
    TileGrid tile_grid;
    double sigma = 1.0;
    MorphOp morph = MorphOp::Open;

    // Short deterministic name used in clip directory names.
    std::string tag() const;
};

// out = round(255 * (in/255)^gamma), half away from zero. gamma > 0.
Frame gamma_contrast(const Frame& frame, double gamma);

// Global equalization: out(v) = round(255 * (cdf(v) - cdf_min) / (N - cdf_min))
// with cdf_min the smallest nonzero cdf value. Constant frames pass through.
Frame hist_equalize(const Frame& frame);

// Contrast-limited adaptive equalization. Tiles partition the frame
// (edge tiles absorb remainders); per-tile histograms are clipped at
// clip_limit * tile_pixels / 256 with the excess redistributed
// uniformly; output pixels bilinearly interpolate the four surrounding
// tile-center mappings, clamping to the nearest centers at the border.
Frame clahe(const Frame& frame, double clip_limit, TileGrid grid);

// Separable Gaussian, kernel radius ceil(3*sigma), reflect-101 border,
// one final half-away rounding after both passes.
Frame gaussian_blur(const Frame& frame, double sigma);

// 3x3 Laplacian [-1,-1,-1; -1,8,-1; -1,-1,-1], reflect-101 border,
// clamped to [0,255].
Frame edge_kernel(const Frame& frame);

// Grayscale morphology with a 3x3 square structuring element and
// replicate border. open = erode then dilate, close = dilate then erode.
Frame morphology(const Frame& frame, MorphOp op);

Frame apply_augment(const Frame& frame, const AugmentSpec& spec);

} // namespace evpipe
