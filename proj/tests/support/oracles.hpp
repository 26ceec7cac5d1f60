// Brute-force reference implementations used to cross-check the library.
// Everything here trades speed for obviousness: per-pixel scans over the
// whole event list, dense 2-D convolution, scalar per-class recounts.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "evpipe/augment.hpp"
#include "evpipe/baseline.hpp"
#include "evpipe/encoders.hpp"
#include "evpipe/events.hpp"
#include "evpipe/metrics.hpp"

namespace oracle {

using namespace evpipe;

inline std::vector<Event> filter_linear(const EventStream& s, TimeWindow w) {
    std::vector<Event> out;
    for (const Event& e : s.events) {
        if (e.t >= w.t_start && e.t < w.t_end) out.push_back(e);
    }
    return out;
}

// Frequency encoding by scanning the full event list once per pixel.
inline Frame frequency_reference(const EventStream& s, TimeWindow w) {
    const SensorGeometry g = s.geometry;
    std::vector<int64_t> count(g.pixel_count(), 0);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            int64_t c = 0;
            for (const Event& e : s.events) {
                if (e.x == x && e.y == y && e.t >= w.t_start && e.t < w.t_end) {
                    c += e.p > 0 ? 1 : -1;
                }
            }
            count[std::size_t(y) * g.width + x] = c;
        }
    }
    int64_t m = count.empty() ? 0 : count[0];
    int64_t big = m;
    for (int64_t c : count) {
        m = std::min(m, c);
        big = std::max(big, c);
    }
    Frame f = Frame::zeros(g);
    if (big == m) return f;
    for (std::size_t i = 0; i < count.size(); ++i) {
        double ratio = double(count[i] - m) / double(big - m);
        f.pixels[i] = uint8_t(std::llround(255.0 * ratio));
    }
    return f;
}

// SAE by scanning the event list backwards per pixel.
inline Frame sae_reference(const EventStream& s, TimeWindow w,
                           SaePolarity pol = SaePolarity::Both) {
    const SensorGeometry g = s.geometry;
    Frame f = Frame::zeros(g);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            bool seen = false;
            int64_t t_last = 0;
            for (auto it = s.events.rbegin(); it != s.events.rend(); ++it) {
                if (it->x != x || it->y != y) continue;
                if (it->t < w.t_start || it->t >= w.t_end) continue;
                if (pol == SaePolarity::OnOnly && it->p <= 0) continue;
                if (pol == SaePolarity::OffOnly && it->p > 0) continue;
                if (!seen || it->t > t_last) {
                    t_last = it->t;
                    seen = true;
                }
            }
            if (!seen) continue;
            uint8_t v;
            if (w.length() == 0) {
                v = 255;
            } else {
                v = uint8_t(std::llround(255.0 * double(t_last - w.t_start) /
                                         double(w.length())));
            }
            f.at(x, y) = v;
        }
    }
    return f;
}

// Dense (non-separable) Gaussian convolution with one final rounding.
inline Frame blur_dense(const Frame& in, double sigma) {
    const int w = in.geometry.width;
    const int h = in.geometry.height;
    const int r = int(std::ceil(3.0 * sigma));
    std::vector<double> k1(std::size_t(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k1[std::size_t(i + r)] = std::exp(-double(i) * i / (2.0 * sigma * sigma));
        sum += k1[std::size_t(i + r)];
    }
    for (double& v : k1) v /= sum;

    auto mirror = [](int i, int n) {
        if (n == 1) return 0;
        while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
        return i;
    };

    Frame out = in;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    acc += k1[std::size_t(dx + r)] * k1[std::size_t(dy + r)] *
                           in.at(mirror(x + dx, w), mirror(y + dy, h));
                }
            }
            out.at(x, y) = uint8_t(std::clamp<long long>(std::llround(acc), 0, 255));
        }
    }
    return out;
}

// Global histogram equalization straight from the textbook formula.
inline Frame hist_eq_reference(const Frame& in) {
    std::array<int64_t, 256> hist{};
    for (uint8_t p : in.pixels) ++hist[p];
    int distinct = 0;
    for (int64_t c : hist) distinct += c > 0;
    if (distinct <= 1) return in;

    const int64_t n = int64_t(in.pixels.size());
    std::array<int64_t, 256> cdf{};
    int64_t run = 0;
    for (int v = 0; v < 256; ++v) cdf[v] = run += hist[v];
    int64_t cdf_min = n;
    for (int v = 0; v < 256; ++v) {
        if (hist[v] > 0) {
            cdf_min = cdf[v];
            break;
        }
    }
    Frame out = in;
    for (std::size_t i = 0; i < in.pixels.size(); ++i) {
        double ratio = double(cdf[in.pixels[i]] - cdf_min) / double(n - cdf_min);
        out.pixels[i] = uint8_t(std::llround(255.0 * ratio));
    }
    return out;
}

// CLAHE reference: recompute every tile histogram, clip, equalize and
// bilinearly blend the four surrounding tile mappings per pixel. Mirrors
// the documented rules (last tile absorbs remainders, limit >= 1, excess
// spread uniformly with the remainder one-per-bin from bin 0, degenerate
// tiles map to identity, centers clamp at the borders).
inline Frame clahe_reference(const Frame& in, double clip_limit, TileGrid grid) {
    const int w = in.geometry.width;
    const int h = in.geometry.height;
    const int tc = grid.cols;
    const int tr = grid.rows;

    auto x_lo = [&](int t) { return t * (w / tc); };
    auto x_hi = [&](int t) { return t == tc - 1 ? w : (t + 1) * (w / tc); };
    auto y_lo = [&](int t) { return t * (h / tr); };
    auto y_hi = [&](int t) { return t == tr - 1 ? h : (t + 1) * (h / tr); };

    auto tile_lut = [&](int tx, int ty) {
        std::array<int64_t, 256> hist{};
        int64_t pix = 0;
        for (int y = y_lo(ty); y < y_hi(ty); ++y) {
            for (int x = x_lo(tx); x < x_hi(tx); ++x) {
                ++hist[in.at(x, y)];
                ++pix;
            }
        }
        std::array<uint8_t, 256> lut{};
        int distinct = 0;
        for (int64_t c : hist) distinct += c > 0;
        if (distinct <= 1) {
            for (int v = 0; v < 256; ++v) lut[v] = uint8_t(v);
            return lut;
        }
        if (!std::isinf(clip_limit)) {
            int64_t limit = std::max<int64_t>(
                1, int64_t(std::floor(clip_limit * double(pix) / 256.0)));
            int64_t excess = 0;
            for (int64_t& c : hist) {
                if (c > limit) {
                    excess += c - limit;
                    c = limit;
                }
            }
            for (int v = 0; v < 256; ++v) {
                hist[v] += excess / 256 + (v < excess % 256 ? 1 : 0);
            }
        }
        std::array<int64_t, 256> cdf{};
        int64_t run = 0;
        for (int v = 0; v < 256; ++v) cdf[v] = run += hist[v];
        int64_t cdf_min = 0;
        for (int v = 0; v < 256; ++v) {
            if (cdf[v] > 0) {
                cdf_min = cdf[v];
                break;
            }
        }
        for (int v = 0; v < 256; ++v) {
            double ratio = double(cdf[v] - cdf_min) / double(pix - cdf_min);
            lut[v] = uint8_t(std::clamp<long long>(std::llround(255.0 * ratio), 0, 255));
        }
        return lut;
    };

    std::vector<std::array<uint8_t, 256>> luts;
    for (int ty = 0; ty < tr; ++ty) {
        for (int tx = 0; tx < tc; ++tx) luts.push_back(tile_lut(tx, ty));
    }

    auto center_x = [&](int t) { return x_lo(t) + (x_hi(t) - x_lo(t) - 1) / 2.0; };
    auto center_y = [&](int t) { return y_lo(t) + (y_hi(t) - y_lo(t) - 1) / 2.0; };
    auto axis_blend = [](double c, int count, auto center) {
        struct B { int t0, t1; double w; };
        if (count == 1 || c <= center(0)) return B{0, 0, 0.0};
        if (c >= center(count - 1)) return B{count - 1, count - 1, 0.0};
        int t0 = 0;
        while (center(t0 + 1) < c) ++t0;
        return B{t0, t0 + 1, (c - center(t0)) / (center(t0 + 1) - center(t0))};
    };

    Frame out = in;
    for (int y = 0; y < h; ++y) {
        auto by = axis_blend(y, tr, center_y);
        for (int x = 0; x < w; ++x) {
            auto bx = axis_blend(x, tc, center_x);
            const uint8_t v = in.at(x, y);
            auto lv = [&](int ty, int tx) {
                return double(luts[std::size_t(ty) * tc + tx][v]);
            };
            double top = (1 - bx.w) * lv(by.t0, bx.t0) + bx.w * lv(by.t0, bx.t1);
            double bot = (1 - bx.w) * lv(by.t1, bx.t0) + bx.w * lv(by.t1, bx.t1);
            double val = (1 - by.w) * top + by.w * bot;
            out.at(x, y) = uint8_t(std::clamp<long long>(std::llround(val), 0, 255));
        }
    }
    return out;
}

struct ClassCounts {
    int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0, recall = 0, f1 = 0;
};

struct MetricsRecount {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    std::array<ClassCounts, kNumClasses> per_class{};
};

// Per-class one-vs-rest recount with scalar loops over the matrix.
inline MetricsRecount metrics_recount(const ConfusionMatrix& cm) {
    MetricsRecount r;
    int64_t total = 0;
    int64_t diag = 0;
    for (int i = 0; i < kNumClasses; ++i) {
        for (int j = 0; j < kNumClasses; ++j) total += cm.at(i, j);
        diag += cm.at(i, i);
    }
    for (int c = 0; c < kNumClasses; ++c) {
        ClassCounts& k = r.per_class[std::size_t(c)];
        for (int i = 0; i < kNumClasses; ++i) {
            for (int j = 0; j < kNumClasses; ++j) {
                int64_t n = cm.at(i, j);
                if (i == c && j == c) k.tp += n;
                else if (j == c) k.fp += n;
                else if (i == c) k.fn += n;
                else k.tn += n;
            }
        }
        k.precision = k.tp + k.fp == 0 ? 0.0 : double(k.tp) / double(k.tp + k.fp);
        k.recall = k.tp + k.fn == 0 ? 0.0 : double(k.tp) / double(k.tp + k.fn);
        k.f1 = k.precision + k.recall == 0.0
                   ? 0.0
                   : 2.0 * k.precision * k.recall / (k.precision + k.recall);
        r.precision += k.precision / kNumClasses;
        r.recall += k.recall / kNumClasses;
        r.f1 += k.f1 / kNumClasses;
    }
    r.accuracy = total == 0 ? 0.0 : double(diag) / double(total);
    return r;
}

// Area pooling with floating-point interval overlap per pixel.
inline std::array<double, kFeatureDim> pool_reference(const std::vector<Frame>& frames) {
    const SensorGeometry g = frames.front().geometry;
    std::vector<double> mean(g.pixel_count(), 0.0);
    for (const Frame& f : frames) {
        for (std::size_t i = 0; i < f.pixels.size(); ++i) mean[i] += f.pixels[i];
    }
    for (double& v : mean) v /= double(frames.size());

    std::array<double, kFeatureDim> out{};
    const double cw = double(g.width) / kFeatureSide;
    const double ch = double(g.height) / kFeatureSide;
    for (int cy = 0; cy < kFeatureSide; ++cy) {
        for (int cx = 0; cx < kFeatureSide; ++cx) {
            const double x0 = cx * cw, x1 = (cx + 1) * cw;
            const double y0 = cy * ch, y1 = (cy + 1) * ch;
            double acc = 0.0;
            for (int y = 0; y < g.height; ++y) {
                double oy = std::max(0.0, std::min<double>(y + 1, y1) - std::max<double>(y, y0));
                if (oy <= 0.0) continue;
                for (int x = 0; x < g.width; ++x) {
                    double ox = std::max(0.0, std::min<double>(x + 1, x1) - std::max<double>(x, x0));
                    if (ox <= 0.0) continue;
                    acc += ox * oy * mean[std::size_t(y) * g.width + x];
                }
            }
            out[std::size_t(cy) * kFeatureSide + cx] = acc / (cw * ch) / 255.0;
        }
    }
    return out;
}

} // namespace oracle
