#include "evpipe/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "evpipe/encoders.hpp"

namespace evpipe {

namespace {

void require_same_size(const Frame& frame) {
    if (!frame.geometry.valid() ||
        frame.pixels.size() != frame.geometry.pixel_count()) {
        throw std::invalid_argument("frame pixel buffer does not match geometry");
    }
}

uint8_t clamp_u8(int64_t v) {
    return static_cast<uint8_t>(std::clamp<int64_t>(v, 0, 255));
}

// Reflect-101 index: ...2 1 | 0 1 2 ... n-1 | n-2 n-3...
int mirror101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        else i = 2 * n - 2 - i;
    }
    return i;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

using Lut = std::array<uint8_t, 256>;

Lut identity_lut() {
    Lut lut;
    for (int v = 0; v < 256; ++v) lut[v] = static_cast<uint8_t>(v);
    return lut;
}

// Equalization mapping for one histogram. Degenerate histograms (all
// mass in a single bin) map to the identity so constant regions pass
// through unchanged.
Lut equalize_lut(const std::array<int64_t, 256>& hist) {
    int64_t total = 0;
    int nonzero = 0;
    for (int64_t h : hist) {
        total += h;
        nonzero += h > 0;
    }
    if (total == 0 || nonzero <= 1) return identity_lut();

    std::array<int64_t, 256> cdf{};
    int64_t run = 0;
    for (int v = 0; v < 256; ++v) {
        run += hist[v];
        cdf[v] = run;
    }
    int64_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
        if (cdf[v] > 0) {
            cdf_min = cdf[v];
            break;
        }
    }

    Lut lut;
    const double denom = static_cast<double>(total - cdf_min);
    for (int v = 0; v < 256; ++v) {
        double num = static_cast<double>(cdf[v] - cdf_min);
        lut[v] = clamp_u8(round_half_away(255.0 * num / denom));
    }
    return lut;
}

// Clip bins at clip_limit * tile_pixels / 256 (at least 1) and spread
// the excess uniformly; the remainder goes one-per-bin from bin 0.
void clip_histogram(std::array<int64_t, 256>& hist, double clip_limit, int64_t tile_pixels) {
    if (std::isinf(clip_limit)) return;
    int64_t limit = std::max<int64_t>(
        1, static_cast<int64_t>(clip_limit * static_cast<double>(tile_pixels) / 256.0));
    int64_t excess = 0;
    for (int64_t& h : hist) {
        if (h > limit) {
            excess += h - limit;
            h = limit;
        }
    }
    if (excess == 0) return;
    int64_t base = excess / 256;
    int64_t rem = excess % 256;
    for (int v = 0; v < 256; ++v) {
        hist[v] += base + (v < rem ? 1 : 0);
    }
}

struct TileLayout {
    int count = 1;       // tiles along the axis
    int base = 0;        // tile extent before the remainder-absorbing last tile
    int total = 0;       // axis length

    int lo(int t) const { return t * base; }
    int hi(int t) const { return t == count - 1 ? total : (t + 1) * base; }
    double center(int t) const { return lo(t) + (hi(t) - lo(t) - 1) / 2.0; }
};

// Bracketing tile pair along one axis plus the interpolation weight
// toward the second tile. Coordinates at or beyond the outer centers
// clamp to the nearest tile.
struct AxisBlend {
    int t0 = 0;
    int t1 = 0;
    double w = 0.0;
};

AxisBlend blend_for(const TileLayout& axis, int coord) {
    const double c = static_cast<double>(coord);
    if (axis.count == 1 || c <= axis.center(0)) return {0, 0, 0.0};
    if (c >= axis.center(axis.count - 1)) {
        return {axis.count - 1, axis.count - 1, 0.0};
    }
    int t0 = 0;
    while (axis.center(t0 + 1) < c) ++t0;
    double c0 = axis.center(t0);
    double c1 = axis.center(t0 + 1);
    return {t0, t0 + 1, (c - c0) / (c1 - c0)};
}

} // namespace

const char* to_string(AugmentOp op) {
    switch (op) {
    case AugmentOp::Gamma: return "gamma";
    case AugmentOp::HistEq: return "hist_eq";
    case AugmentOp::Clahe: return "clahe";
    case AugmentOp::GaussianBlur: return "gaussian_blur";
    case AugmentOp::Edge: return "edge";
    case AugmentOp::Morphology: return "morphology";
    }
    return "unknown";
}

std::optional<AugmentOp> parse_augment_op(std::string_view s) {
    if (s == "gamma") return AugmentOp::Gamma;
    if (s == "hist_eq") return AugmentOp::HistEq;
    if (s == "clahe") return AugmentOp::Clahe;
    if (s == "gaussian_blur") return AugmentOp::GaussianBlur;
    if (s == "edge") return AugmentOp::Edge;
    if (s == "morphology") return AugmentOp::Morphology;
    return std::nullopt;
}

const char* to_string(MorphOp op) {
    switch (op) {
    case MorphOp::Erode: return "erode";
    case MorphOp::Dilate: return "dilate";
    case MorphOp::Open: return "open";
    case MorphOp::Close: return "close";
    }
    return "unknown";
}

std::optional<MorphOp> parse_morph_op(std::string_view s) {
    if (s == "erode") return MorphOp::Erode;
    if (s == "dilate") return MorphOp::Dilate;
    if (s == "open") return MorphOp::Open;
    if (s == "close") return MorphOp::Close;
    return std::nullopt;
}

std::string AugmentSpec::tag() const {
    switch (op) {
    case AugmentOp::Gamma: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "gamma%g", gamma);
        return buf;
    }
    case AugmentOp::HistEq: return "histeq";
    case AugmentOp::Clahe: return "clahe";
    case AugmentOp::GaussianBlur: return "blur";
    case AugmentOp::Edge: return "edge";
    case AugmentOp::Morphology: return std::string("morph-") + to_string(morph);
    }
    return "unknown";
}

Frame gamma_contrast(const Frame& frame, double gamma) {
    require_same_size(frame);
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be > 0");
    }
    Lut lut;
    for (int v = 0; v < 256; ++v) {
        lut[v] = clamp_u8(round_half_away(255.0 * std::pow(v / 255.0, gamma)));
    }
    Frame out = frame;
    for (uint8_t& p : out.pixels) p = lut[p];
    return out;
}

Frame hist_equalize(const Frame& frame) {
    require_same_size(frame);
    std::array<int64_t, 256> hist{};
    for (uint8_t p : frame.pixels) ++hist[p];
    const Lut lut = equalize_lut(hist);
    Frame out = frame;
    for (uint8_t& p : out.pixels) p = lut[p];
    return out;
}

Frame clahe(const Frame& frame, double clip_limit, TileGrid grid) {
    require_same_size(frame);
    if (grid.cols < 1 || grid.rows < 1) {
        throw std::invalid_argument("clahe: tile grid must be at least 1x1");
    }
    if (!(clip_limit >= 1.0)) {
        throw std::invalid_argument("clahe: clip_limit must be >= 1.0");
    }
    const int w = frame.geometry.width;
    const int h = frame.geometry.height;
    if (w < grid.cols || h < grid.rows) {
        throw std::invalid_argument("clahe: frame smaller than tile grid");
    }

    const TileLayout xs{grid.cols, w / grid.cols, w};
    const TileLayout ys{grid.rows, h / grid.rows, h};

    std::vector<Lut> luts(static_cast<std::size_t>(grid.cols) * grid.rows);
    for (int ty = 0; ty < grid.rows; ++ty) {
        for (int tx = 0; tx < grid.cols; ++tx) {
            std::array<int64_t, 256> hist{};
            for (int y = ys.lo(ty); y < ys.hi(ty); ++y) {
                for (int x = xs.lo(tx); x < xs.hi(tx); ++x) {
                    ++hist[frame.at(x, y)];
                }
            }
            int nonzero = 0;
            for (int64_t c : hist) nonzero += c > 0;
            if (nonzero > 1) {
                int64_t tile_pixels =
                    int64_t(xs.hi(tx) - xs.lo(tx)) * (ys.hi(ty) - ys.lo(ty));
                clip_histogram(hist, clip_limit, tile_pixels);
            }
            luts[static_cast<std::size_t>(ty) * grid.cols + tx] = equalize_lut(hist);
        }
    }

    Frame out = frame;
    for (int y = 0; y < h; ++y) {
        const AxisBlend by = blend_for(ys, y);
        for (int x = 0; x < w; ++x) {
            const AxisBlend bx = blend_for(xs, x);
            const uint8_t v = frame.at(x, y);
            auto lut_at = [&](int ty, int tx) {
                return static_cast<double>(
                    luts[static_cast<std::size_t>(ty) * grid.cols + tx][v]);
            };
            double top = (1.0 - bx.w) * lut_at(by.t0, bx.t0) + bx.w * lut_at(by.t0, bx.t1);
            double bot = (1.0 - bx.w) * lut_at(by.t1, bx.t0) + bx.w * lut_at(by.t1, bx.t1);
            double blended = (1.0 - by.w) * top + by.w * bot;
            out.at(x, y) = clamp_u8(round_half_away(blended));
        }
    }
    return out;
}

Frame gaussian_blur(const Frame& frame, double sigma) {
    require_same_size(frame);
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma must be > 0");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double wgt = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = wgt;
        sum += wgt;
    }
    for (double& wgt : kernel) wgt /= sum;

    const int w = frame.geometry.width;
    const int h = frame.geometry.height;
    std::vector<double> tmp(frame.pixels.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       frame.at(mirror101(x + i, w), y);
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    Frame out = frame;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp[static_cast<std::size_t>(mirror101(y + i, h)) * w + x];
            }
            out.at(x, y) = clamp_u8(round_half_away(acc));
        }
    }
    return out;
}

Frame edge_kernel(const Frame& frame) {
    require_same_size(frame);
    const int w = frame.geometry.width;
    const int h = frame.geometry.height;
    Frame out = frame;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int64_t acc = 8LL * frame.at(x, y);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    acc -= frame.at(mirror101(x + dx, w), mirror101(y + dy, h));
                }
            }
            out.at(x, y) = clamp_u8(acc);
        }
    }
    return out;
}

namespace {

template <typename Fold>
Frame morph_pass(const Frame& frame, uint8_t init, Fold fold) {
    const int w = frame.geometry.width;
    const int h = frame.geometry.height;
    Frame out = frame;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = init;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    v = fold(v, frame.at(clamp_index(x + dx, w), clamp_index(y + dy, h)));
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

Frame erode_pass(const Frame& f) {
    return morph_pass(f, 255, [](uint8_t a, uint8_t b) { return std::min(a, b); });
}

Frame dilate_pass(const Frame& f) {
    return morph_pass(f, 0, [](uint8_t a, uint8_t b) { return std::max(a, b); });
}

} // namespace

Frame morphology(const Frame& frame, MorphOp op) {
    require_same_size(frame);
    switch (op) {
    case MorphOp::Erode: return erode_pass(frame);
    case MorphOp::Dilate: return dilate_pass(frame);
    case MorphOp::Open: return dilate_pass(erode_pass(frame));
    case MorphOp::Close: return erode_pass(dilate_pass(frame));
    }
    throw std::invalid_argument("unknown morphology op");
}

Frame apply_augment(const Frame& frame, const AugmentSpec& spec) {
    switch (spec.op) {
    case AugmentOp::Gamma: return gamma_contrast(frame, spec.gamma);
    case AugmentOp::HistEq: return hist_equalize(frame);
    case AugmentOp::Clahe: return clahe(frame, spec.clip_limit, spec.tile_grid);
    case AugmentOp::GaussianBlur: return gaussian_blur(frame, spec.sigma);
    case AugmentOp::Edge: return edge_kernel(frame);
    case AugmentOp::Morphology: return morphology(frame, spec.morph);
    }
    throw std::invalid_argument("unknown augment op");
}

} // namespace evpipe
