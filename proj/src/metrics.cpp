#include "sketchseg/metrics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "sketchseg/errors.hpp"

namespace sseg {

namespace {

constexpr double kEps = DBL_EPSILON;

struct RegionStats {
    double mean = 0.0;
    double stdev = 0.0;  // sample std, zero for n <= 1
    std::size_t n = 0;
};

RegionStats region_stats(const std::vector<double>& vals) {
    RegionStats st;
    st.n = vals.size();
    if (st.n == 0) return st;
    st.mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
              static_cast<double>(st.n);
    if (st.n > 1) {
        double acc = 0.0;
        for (double v : vals) acc += (v - st.mean) * (v - st.mean);
        st.stdev = std::sqrt(acc / static_cast<double>(st.n - 1));
    }
    return st;
}

double dissimilarity_score(const RegionStats& st) {
    return 2.0 * st.mean / (st.mean * st.mean + 1.0 + st.stdev + kEps);
}

double s_object(const RealMatrix& pred, const BinaryMask& gt) {
    std::vector<double> fg, bg;
    fg.reserve(pred.values.size());
    bg.reserve(pred.values.size());
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        if (gt.bits[i]) {
            fg.push_back(pred.values[i]);
        } else {
            bg.push_back(1.0 - pred.values[i]);
        }
    }
    const double u = static_cast<double>(fg.size()) /
                     static_cast<double>(pred.values.size());
    return u * dissimilarity_score(region_stats(fg)) +
           (1.0 - u) * dissimilarity_score(region_stats(bg));
}

// Structural similarity of one quadrant; the degenerate branches keep
// flat-on-flat regions at 1 and flat-vs-varying at 0.
double region_ssim(const RealMatrix& pred, const BinaryMask& gt, int y0,
                   int y1, int x0, int x1) {
    const long long n = static_cast<long long>(y1 - y0) * (x1 - x0);
    if (n <= 0) return 0.0;
    double sx = 0.0, sy = 0.0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            sx += pred.at(y, x);
            sy += gt.at(x, y) ? 1.0 : 0.0;
        }
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double vx = 0.0, vy = 0.0, cov = 0.0;
    if (n > 1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double dx = pred.at(y, x) - mx;
                const double dy = (gt.at(x, y) ? 1.0 : 0.0) - my;
                vx += dx * dx;
                vy += dy * dy;
                cov += dx * dy;
            }
        }
        vx /= static_cast<double>(n - 1);
        vy /= static_cast<double>(n - 1);
        cov /= static_cast<double>(n - 1);
    }
    const double alpha = 4.0 * mx * my * cov;
    const double beta = (mx * mx + my * my) * (vx + vy);
    if (alpha != 0.0) return alpha / (beta + kEps);
    return beta == 0.0 ? 1.0 : 0.0;
}

double s_region(const RealMatrix& pred, const BinaryMask& gt) {
    const int h = gt.height, w = gt.width;
    // Foreground centroid, rounded to a one-based cut position.
    long long total = 0, sumx = 0, sumy = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (gt.at(x, y)) {
                ++total;
                sumx += x + 1;
                sumy += y + 1;
            }
        }
    }
    int cx, cy;
    if (total == 0) {
        cx = static_cast<int>(std::llround(w / 2.0));
        cy = static_cast<int>(std::llround(h / 2.0));
    } else {
        cx = static_cast<int>(std::llround(
            static_cast<double>(sumx) / static_cast<double>(total)));
        cy = static_cast<int>(std::llround(
            static_cast<double>(sumy) / static_cast<double>(total)));
    }
    const double area = static_cast<double>(h) * w;
    const double w1 = static_cast<double>(cx) * cy / area;
    const double w2 = static_cast<double>(w - cx) * cy / area;
    const double w3 = static_cast<double>(cx) * (h - cy) / area;
    const double w4 = 1.0 - w1 - w2 - w3;
    return w1 * region_ssim(pred, gt, 0, cy, 0, cx) +
           w2 * region_ssim(pred, gt, 0, cy, cx, w) +
           w3 * region_ssim(pred, gt, cy, h, 0, cx) +
           w4 * region_ssim(pred, gt, cy, h, cx, w);
}

double s_measure(const RealMatrix& pred, const BinaryMask& gt) {
    const double gt_mean =
        std::accumulate(gt.bits.begin(), gt.bits.end(), 0.0) /
        static_cast<double>(gt.bits.size());
    const double pred_mean =
        std::accumulate(pred.values.begin(), pred.values.end(), 0.0) /
        static_cast<double>(pred.values.size());
    if (gt_mean == 0.0) return 1.0 - pred_mean;
    if (gt_mean == 1.0) return pred_mean;
    const double q =
        0.5 * s_object(pred, gt) + 0.5 * s_region(pred, gt);
    return std::max(q, 0.0);
}

double e_measure(const RealMatrix& pred, const BinaryMask& gt) {
    const std::size_t n = pred.values.size();
    const double pred_mean =
        std::accumulate(pred.values.begin(), pred.values.end(), 0.0) /
        static_cast<double>(n);
    const double thr = std::min(2.0 * pred_mean, 1.0);
    std::vector<double> fm(n);
    for (std::size_t i = 0; i < n; ++i)
        fm[i] = pred.values[i] >= thr ? 1.0 : 0.0;

    long long gt_sum = 0;
    for (std::uint8_t v : gt.bits) gt_sum += v;
    double acc = 0.0;
    if (gt_sum == 0) {
        for (std::size_t i = 0; i < n; ++i) acc += 1.0 - fm[i];
    } else if (gt_sum == static_cast<long long>(n)) {
        for (std::size_t i = 0; i < n; ++i) acc += fm[i];
    } else {
        const double mu_fm =
            std::accumulate(fm.begin(), fm.end(), 0.0) /
            static_cast<double>(n);
        const double mu_gt =
            static_cast<double>(gt_sum) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double af = fm[i] - mu_fm;
            const double ag = (gt.bits[i] ? 1.0 : 0.0) - mu_gt;
            const double align =
                2.0 * ag * af / (ag * ag + af * af + kEps);
            acc += (align + 1.0) * (align + 1.0) / 4.0;
        }
    }
    return acc / (static_cast<double>(n) - 1.0 + kEps);
}

// Squared distance to, and flat index of, the nearest foreground pixel.
// Ties resolve to the smallest (row, col); the per-column candidate list
// makes the scan O(W) per pixel.
void distance_transform(const BinaryMask& gt, std::vector<double>& dist,
                        std::vector<std::size_t>& nearest) {
    const int h = gt.height, w = gt.width;
    dist.assign(static_cast<std::size_t>(h) * w, 0.0);
    nearest.assign(static_cast<std::size_t>(h) * w, 0);
    std::vector<std::vector<int>> col_rows(w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (gt.at(x, y)) col_rows[x].push_back(y);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx =
                static_cast<std::size_t>(y) * w + x;
            if (gt.bits[idx]) continue;  // dist 0, index self
            long long best_d2 = std::numeric_limits<long long>::max();
            int best_y = -1, best_x = -1;
            for (int xp = 0; xp < w; ++xp) {
                const auto& rows = col_rows[xp];
                if (rows.empty()) continue;
                const long long dx =
                    static_cast<long long>(x) - xp;
                if (dx * dx > best_d2) continue;
                auto it = std::lower_bound(rows.begin(), rows.end(), y);
                // Up to two vertical candidates; the nearer wins, the
                // smaller row on a tie.
                int yp;
                if (it == rows.end()) {
                    yp = *(it - 1);
                } else if (it == rows.begin()) {
                    yp = *it;
                } else {
                    const int lo = *(it - 1), hi = *it;
                    yp = (y - lo <= hi - y) ? lo : hi;
                }
                const long long dy = static_cast<long long>(y) - yp;
                const long long d2 = dx * dx + dy * dy;
                if (d2 < best_d2 ||
                    (d2 == best_d2 &&
                     (yp < best_y || (yp == best_y && xp < best_x)))) {
                    best_d2 = d2;
                    best_y = yp;
                    best_x = xp;
                }
            }
            dist[idx] = std::sqrt(static_cast<double>(best_d2));
            nearest[idx] =
                static_cast<std::size_t>(best_y) * w + best_x;
        }
    }
    for (std::size_t i = 0; i < gt.bits.size(); ++i)
        if (gt.bits[i]) nearest[i] = i;
}

double weighted_f(const RealMatrix& pred, const BinaryMask& gt) {
    const int h = gt.height, w = gt.width;
    const std::size_t n = pred.values.size();
    long long nfg = 0;
    for (std::uint8_t v : gt.bits) nfg += v;
    if (nfg == 0) {
        for (double v : pred.values)
            if (v != 0.0) return 0.0;
        return 1.0;
    }

    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i)
        err[i] = std::fabs(pred.values[i] - (gt.bits[i] ? 1.0 : 0.0));

    std::vector<double> dist;
    std::vector<std::size_t> nearest;
    distance_transform(gt, dist, nearest);

    // Background errors inherit the error at the nearest foreground
    // pixel before smoothing.
    std::vector<double> et(err);
    for (std::size_t i = 0; i < n; ++i)
        if (!gt.bits[i]) et[i] = err[nearest[i]];

    // 7x7 Gaussian, sigma 5, normalized, zero padding.
    double k[7][7];
    double ksum = 0.0;
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            const double r2 = static_cast<double>((i - 3) * (i - 3) +
                                                  (j - 3) * (j - 3));
            k[i][j] = std::exp(-r2 / 50.0);
            ksum += k[i][j];
        }
    }
    for (auto& row : k)
        for (double& v : row) v /= ksum;

    std::vector<double> ea(n, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -3; dy <= 3; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -3; dx <= 3; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    acc += k[dy + 3][dx + 3] *
                           et[static_cast<std::size_t>(yy) * w + xx];
                }
            }
            ea[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }

    const double decay = std::log(0.5) / 5.0;
    double fg_ew = 0.0, bg_ew = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = err[i];
        double b = 1.0;
        if (gt.bits[i]) {
            if (ea[i] < e) e = ea[i];
        } else {
            b = 2.0 - std::exp(decay * dist[i]);
        }
        const double ew = e * b;
        if (gt.bits[i]) {
            fg_ew += ew;
        } else {
            bg_ew += ew;
        }
    }
    const double tpw = static_cast<double>(nfg) - fg_ew;
    const double fpw = bg_ew;
    const double recall = 1.0 - fg_ew / static_cast<double>(nfg);
    const double precision = tpw / (tpw + fpw + kEps);
    return 2.0 * recall * precision / (recall + precision + kEps);
}

}  // namespace

EvalRecord eval_sample(const BinaryMask& pred, const BinaryMask& gt,
                       const std::string& id) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw DimMismatch("eval_sample: prediction and ground truth shapes differ");
    EvalRecord rec;
    rec.sample_id = id;
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0;
        const bool g = gt.bits[i] != 0;
        rec.intersection += (p && g) ? 1 : 0;
        rec.union_ += (p || g) ? 1 : 0;
        rec.gt_pixels += g ? 1 : 0;
    }
    rec.iou = rec.union_ == 0
                  ? 1.0
                  : static_cast<double>(rec.intersection) /
                        static_cast<double>(rec.union_);
    return rec;
}

MetricsReport aggregate(const std::vector<EvalRecord>& records) {
    if (records.empty())
        throw EmptyInput("aggregate: no evaluation records");
    MetricsReport rep;
    long long inter = 0, uni = 0;
    double iou_sum = 0.0;
    for (const auto& r : records) {
        inter += r.intersection;
        uni += r.union_;
        iou_sum += r.iou;
    }
    rep.oiou = uni == 0 ? 100.0
                        : 100.0 * static_cast<double>(inter) /
                              static_cast<double>(uni);
    rep.miou = 100.0 * iou_sum / static_cast<double>(records.size());
    for (double x : {0.5, 0.6, 0.7, 0.8, 0.9}) {
        long long hits = 0;
        for (const auto& r : records)
            if (r.iou >= x) ++hits;
        rep.p_at[x] = 100.0 * static_cast<double>(hits) /
                      static_cast<double>(records.size());
    }
    return rep;
}

std::vector<EvalRecord> apply_size_filters(
    const std::vector<EvalRecord>& records,
    const std::vector<SizeFilter>& filters) {
    if (filters.empty()) return records;
    std::vector<EvalRecord> kept;
    kept.reserve(records.size());
    for (const auto& r : records) {
        bool keep = true;
        for (const auto& f : filters) {
            if (r.gt_pixels >= f.size_min && r.gt_pixels < f.size_max &&
                r.iou < f.min_iou) {
                keep = false;
                break;
            }
        }
        if (keep) kept.push_back(r);
    }
    return kept;
}

SaliencyScores saliency_suite(const RealMatrix& pred,
                              const BinaryMask& gt) {
    if (pred.cols != gt.width || pred.rows != gt.height)
        throw DimMismatch("saliency_suite: prediction and ground truth shapes differ");
    if (pred.values.empty())
        throw EmptyInput("saliency_suite: empty maps");
    for (double v : pred.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("saliency_suite: prediction outside [0, 1]");
    SaliencyScores s;
    s.s_measure = s_measure(pred, gt);
    s.e_measure = e_measure(pred, gt);
    s.weighted_f = weighted_f(pred, gt);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i)
        acc += std::fabs(pred.values[i] - (gt.bits[i] ? 1.0 : 0.0));
    s.mae = acc / static_cast<double>(pred.values.size());
    return s;
}

SaliencyScores mean_scores(const std::vector<SaliencyScores>& scores) {
    if (scores.empty())
        throw EmptyInput("mean_scores: no samples");
    SaliencyScores m;
    for (const auto& s : scores) {
        m.s_measure += s.s_measure;
        m.e_measure += s.e_measure;
        m.weighted_f += s.weighted_f;
        m.mae += s.mae;
    }
    const double n = static_cast<double>(scores.size());
    m.s_measure /= n;
    m.e_measure /= n;
    m.weighted_f /= n;
    m.mae /= n;
    return m;
}

std::vector<std::pair<double, double>> bin_points(
    const std::vector<std::pair<double, double>>& points,
    const LowessConfig& cfg) {
    if (cfg.bin_size <= 0 || cfg.samples_per_bin <= 0 ||
        !(cfg.frac > 0.0 && cfg.frac <= 1.0))
        throw DomainError("lowess_fit: invalid configuration");

    // Bin by x, keep the samples nearest each bin center.
    std::map<long long, std::vector<std::size_t>> bins;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const long long b = static_cast<long long>(
            std::floor(points[i].first / static_cast<double>(cfg.bin_size)));
        bins[b].push_back(i);
    }
    std::vector<std::pair<double, double>> sel;
    for (auto& [b, members] : bins) {
        const double center =
            (static_cast<double>(b) + 0.5) * static_cast<double>(cfg.bin_size);
        std::stable_sort(members.begin(), members.end(),
                         [&](std::size_t a, std::size_t c) {
                             return std::fabs(points[a].first - center) <
                                    std::fabs(points[c].first - center);
                         });
        const std::size_t take = std::min(
            members.size(), static_cast<std::size_t>(cfg.samples_per_bin));
        for (std::size_t i = 0; i < take; ++i)
            sel.push_back(points[members[i]]);
    }
    std::stable_sort(sel.begin(), sel.end(),
                     [](const auto& a, const auto& b) {
                         return a.first < b.first;
                     });
    return sel;
}

std::vector<std::pair<double, double>> lowess_fit(
    const std::vector<std::pair<double, double>>& points,
    const LowessConfig& cfg) {
    const std::vector<std::pair<double, double>> sel =
        bin_points(points, cfg);

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < sel.size(); ++i)
        if (i == 0 || sel[i].first != sel[i - 1].first) ++distinct;
    if (distinct < 2)
        throw DegenerateInput("lowess_fit: need >= 2 distinct x after binning");

    const std::size_t n = sel.size();
    std::size_t r = static_cast<std::size_t>(
        std::ceil(cfg.frac * static_cast<double>(n)));
    r = std::clamp<std::size_t>(r, 2, n);

    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = sel[i].first;
        for (std::size_t j = 0; j < n; ++j)
            d[j] = std::fabs(sel[j].first - x0);
        std::vector<double> ds(d);
        std::nth_element(ds.begin(), ds.begin() + (r - 1), ds.end());
        const double span = ds[r - 1];

        // Tricube weights over the span; centering on x0 keeps the
        // normal equations conditioned.
        double sw = 0.0, sz = 0.0, szz = 0.0, sy = 0.0, szy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double wj;
            if (span == 0.0) {
                wj = d[j] == 0.0 ? 1.0 : 0.0;
            } else {
                const double u = d[j] / span;
                if (u >= 1.0) continue;
                const double t = 1.0 - u * u * u;
                wj = t * t * t;
            }
            if (wj == 0.0) continue;
            const double z = sel[j].first - x0;
            sw += wj;
            sz += wj * z;
            szz += wj * z * z;
            sy += wj * sel[j].second;
            szy += wj * z * sel[j].second;
        }
        const double det = sw * szz - sz * sz;
        double fitted;
        if (szz <= 0.0 || det <= 1e-12 * sw * szz) {
            fitted = sy / sw;
        } else {
            const double slope = (sw * szy - sz * sy) / det;
            fitted = (sy - slope * sz) / sw;
        }
        out.emplace_back(x0, fitted);
    }
    return out;
}

std::string records_csv(const std::vector<EvalRecord>& records) {
    std::string csv = "sample_id,intersection,union,iou,gt_pixels\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%.10f,%lld\n",
                      r.sample_id.c_str(), r.intersection, r.union_,
                      r.iou, r.gt_pixels);
        csv += buf;
    }
    return csv;
}

}  // namespace sseg
