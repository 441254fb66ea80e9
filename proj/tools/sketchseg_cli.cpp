// Batch front end: augmentation runs, transport demos, mask evaluation,
// and size-vs-IoU analysis. Exit codes: 0 success, 2 configuration,
// 3 I/O, 4 empty result.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchseg/augment.hpp"
#include "sketchseg/errors.hpp"
#include "sketchseg/metrics.hpp"
#include "sketchseg/raster.hpp"
#include "sketchseg/rng.hpp"
#include "sketchseg/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kIoError = 3;
constexpr int kEmptyResult = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    return cfg;
}

template <typename T>
void cfg_get(const json& cfg, const char* key, T& slot) {
    if (!cfg.contains(key)) return;
    try {
        slot = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key has wrong type: ") + key);
    }
}

// Index-sharded loop; worker exceptions are rethrown on the caller
// thread after join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc == 0 ? 1 : static_cast<int>(hc);
    }
    threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(err_mtx);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::string> list_pngs(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw sseg::FileNotFound("not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
            names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

void ensure_out_dir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out))
        throw sseg::IoError("cannot create output directory: " + out);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw sseg::IoError("cannot open for writing: " + path);
    f << text;
    if (!f) throw sseg::IoError("write failed: " + path);
}

void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string fmt10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10f", v);
    return buf;
}

// ---------------------------------------------------------------- augment

struct AugmentCli {
    std::string input_dir;
    sseg::AugmentConfig cfg;
};

int cmd_augment(const AugmentCli& a, std::uint64_t seed, int threads,
                const std::string& out) {
    if (a.input_dir.empty()) throw ConfigError("augment: no input directory");
    const std::vector<std::string> names = list_pngs(a.input_dir);
    if (names.empty()) {
        std::fprintf(stderr, "no .png inputs in %s\n", a.input_dir.c_str());
        return kEmptyResult;
    }
    ensure_out_dir(out);

    struct FileResult {
        std::string error;
        double theta_max = 0.0;
        std::vector<std::string> variant_files;
        std::vector<double> distortion;
    };
    std::vector<FileResult> results(names.size());

    parallel_for(names.size(), threads, [&](std::size_t i) {
        const std::string& name = names[i];
        const std::string stem = fs::path(name).stem().string();
        sseg::AugmentConfig cfg = a.cfg;
        cfg.perturb.seed = sseg::derive_stream(seed, {fnv1a64(stem)}).state;
        const sseg::GrayRaster img =
            sseg::load_gray((fs::path(a.input_dir) / name).string());
        try {
            const sseg::AugmentDetail detail = sseg::augment_detail(img, cfg);
            FileResult& r = results[i];
            r.theta_max = detail.theta_max;
            r.distortion = detail.distortion;
            for (std::size_t v = 0; v < detail.variants.size(); ++v) {
                const std::string out_name =
                    stem + "_v" + std::to_string(v) + ".png";
                sseg::save_mask(detail.variants[v],
                                (fs::path(out) / out_name).string());
                r.variant_files.push_back(out_name);
            }
        } catch (const sseg::EmptySketch&) {
            results[i].error = "EmptySketch";
        }
    });

    json manifest;
    manifest["command"] = "augment";
    manifest["input_dir"] = a.input_dir;
    manifest["seed"] = seed;
    manifest["config"] = {
        {"binarize_threshold", a.cfg.binarize_threshold},
        {"block_size", a.cfg.block_size},
        {"min_component_pixels", a.cfg.min_component_pixels},
        {"sample_interval", a.cfg.sample_interval},
        {"render_thickness", a.cfg.render_thickness},
        {"perturb_c", a.cfg.perturb.C},
        {"perturb_k", a.cfg.perturb.K_step},
        {"num_variants", a.cfg.perturb.num_variants},
    };
    json files = json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const FileResult& r = results[i];
        json entry;
        entry["input"] = names[i];
        if (!r.error.empty()) {
            entry["error"] = r.error;
        } else {
            entry["error"] = nullptr;
            entry["theta_max"] = r.theta_max;
            json variants = json::array();
            for (std::size_t v = 0; v < r.variant_files.size(); ++v)
                variants.push_back({{"file", r.variant_files[v]},
                                    {"distortion_iou", r.distortion[v]}});
            entry["variants"] = variants;
        }
        files.push_back(entry);
    }
    manifest["files"] = files;
    write_json((fs::path(out) / "manifest.json").string(), manifest);
    return kOk;
}

// --------------------------------------------------------------- transport

struct TransportCli {
    std::string image;
    std::vector<std::string> prompts;
    sseg::SinkhornConfig cfg;
    int grid_h = 16;
    int grid_w = 16;
    int feature_dim = 8;
    int binarize_threshold = 128;
};

int cmd_transport(const TransportCli& t, int threads,
                  const std::string& out) {
    (void)threads;  // single problem instance, nothing to fan out
    if (t.image.empty() || t.prompts.empty())
        throw ConfigError("transport: need an image and >= 1 sketch prompts");
    if (t.grid_h < 1 || t.grid_w < 1 || t.feature_dim < 1)
        throw ConfigError("transport: grid and feature dim must be positive");
    ensure_out_dir(out);

    const sseg::GrayRaster img = sseg::load_gray(t.image);
    const sseg::FeatureMatrix pix_feats =
        sseg::extract_patch_features(img, t.grid_h, t.grid_w, t.feature_dim);

    // One embedding per sketch: mean patch feature over cells that
    // contain foreground, or over all cells for a blank sketch.
    sseg::FeatureMatrix prompt_feats;
    prompt_feats.rows = static_cast<int>(t.prompts.size());
    prompt_feats.dim = t.feature_dim;
    prompt_feats.values.assign(
        static_cast<std::size_t>(prompt_feats.rows) * t.feature_dim, 0.0);
    for (std::size_t p = 0; p < t.prompts.size(); ++p) {
        const sseg::GrayRaster sk = sseg::load_gray(t.prompts[p]);
        const sseg::BinaryMask fg =
            sseg::binarize(sk, t.binarize_threshold);
        const sseg::FeatureMatrix feats = sseg::extract_patch_features(
            sk, t.grid_h, t.grid_w, t.feature_dim);
        const int ch = (sk.height + t.grid_h - 1) / t.grid_h;
        const int cw = (sk.width + t.grid_w - 1) / t.grid_w;
        std::vector<int> rows;
        for (int gy = 0; gy < t.grid_h; ++gy) {
            for (int gx = 0; gx < t.grid_w; ++gx) {
                const int x1 = std::min((gx + 1) * cw, sk.width);
                const int y1 = std::min((gy + 1) * ch, sk.height);
                bool any = false;
                for (int y = gy * ch; y < y1 && !any; ++y)
                    for (int x = gx * cw; x < x1 && !any; ++x)
                        if (fg.at(x, y)) any = true;
                if (any) rows.push_back(gy * t.grid_w + gx);
            }
        }
        if (rows.empty())
            for (int r = 0; r < feats.rows; ++r) rows.push_back(r);
        double* dst =
            prompt_feats.values.data() +
            static_cast<std::size_t>(p) * t.feature_dim;
        for (int r : rows)
            for (int c = 0; c < t.feature_dim; ++c)
                dst[c] += feats.at(r, c) / static_cast<double>(rows.size());
    }

    const sseg::RealMatrix scores =
        sseg::cosine_scores(pix_feats, prompt_feats);
    const sseg::CostMatrix cost = sseg::cost_from_scores(scores);
    const sseg::Marginals marg =
        sseg::uniform_marginals(cost.n, cost.m);
    const sseg::TransportPlan plan = sseg::sinkhorn(cost, marg, t.cfg);

    sseg::ScoreStack stack;
    stack.pixels = scores.rows;
    stack.num_prompts = scores.cols;
    stack.per_prompt_cols = 1;
    stack.values = scores.values;
    const sseg::RealMatrix agg = sseg::mpt_aggregate(plan, stack);

    // channel-fastest layout for the upsampler
    std::vector<double> grid(agg.values.size());
    for (int r = 0; r < agg.rows; ++r)
        for (int c = 0; c < agg.cols; ++c)
            grid[static_cast<std::size_t>(r) * agg.cols + c] = agg.at(r, c);
    const std::vector<double> up = sseg::upsample_scoremap(
        grid, t.grid_h, t.grid_w, agg.cols, img.height, img.width);

    json heatmaps = json::array();
    for (int p = 0; p < agg.cols; ++p) {
        double lo = up[static_cast<std::size_t>(p)];
        double hi = lo;
        for (int i = 0; i < img.height * img.width; ++i) {
            const double v =
                up[static_cast<std::size_t>(i) * agg.cols + p];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        sseg::GrayRaster heat;
        heat.width = img.width;
        heat.height = img.height;
        heat.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
        const double span = hi - lo;
        for (int i = 0; i < img.height * img.width; ++i) {
            const double v =
                up[static_cast<std::size_t>(i) * agg.cols + p];
            heat.pixels[static_cast<std::size_t>(i)] =
                span == 0.0 ? 0
                            : static_cast<std::uint8_t>(
                                  std::llround(255.0 * (v - lo) / span));
        }
        const std::string name =
            "prompt" + std::to_string(p) + "_heat.png";
        sseg::save_gray(heat, (fs::path(out) / name).string());
        heatmaps.push_back(name);
    }

    json report;
    report["command"] = "transport";
    report["image"] = t.image;
    report["prompts"] = t.prompts;
    report["epsilon"] = t.cfg.epsilon;
    report["max_iter"] = t.cfg.max_iter;
    report["tolerance"] = t.cfg.tolerance;
    report["grid_h"] = t.grid_h;
    report["grid_w"] = t.grid_w;
    report["feature_dim"] = t.feature_dim;
    report["achieved_cost"] = plan.achieved_cost;
    report["iterations_used"] = plan.iterations_used;
    report["converged"] = plan.converged;
    report["max_marginal_error"] = plan.max_marginal_error;
    report["heatmaps"] = heatmaps;
    write_json((fs::path(out) / "transport.json").string(), report);
    return kOk;
}

// -------------------------------------------------------------------- eval

struct EvalCli {
    std::string pred_dir;
    std::string gt_dir;
    int binarize_threshold = 128;
};

int cmd_eval(const EvalCli& e, int threads, const std::string& out) {
    if (e.pred_dir.empty() || e.gt_dir.empty())
        throw ConfigError("eval: need prediction and ground-truth directories");
    const std::vector<std::string> preds = list_pngs(e.pred_dir);
    const std::vector<std::string> gts = list_pngs(e.gt_dir);

    std::vector<std::string> matched, pred_only, gt_only;
    std::set_intersection(preds.begin(), preds.end(), gts.begin(), gts.end(),
                          std::back_inserter(matched));
    std::set_difference(preds.begin(), preds.end(), gts.begin(), gts.end(),
                        std::back_inserter(pred_only));
    std::set_difference(gts.begin(), gts.end(), preds.begin(), preds.end(),
                        std::back_inserter(gt_only));
    for (const auto& n : pred_only)
        std::fprintf(stderr, "warning: no ground truth for %s, skipped\n",
                     n.c_str());
    for (const auto& n : gt_only)
        std::fprintf(stderr, "warning: no prediction for %s, skipped\n",
                     n.c_str());
    if (matched.empty()) {
        std::fprintf(stderr, "no prediction/ground-truth pairs matched\n");
        return kEmptyResult;
    }
    ensure_out_dir(out);

    std::vector<sseg::EvalRecord> records(matched.size());
    std::vector<sseg::SaliencyScores> saliency(matched.size());
    parallel_for(matched.size(), threads, [&](std::size_t i) {
        const std::string& name = matched[i];
        const sseg::BinaryMask pred = sseg::binarize(
            sseg::load_gray((fs::path(e.pred_dir) / name).string()),
            e.binarize_threshold);
        const sseg::BinaryMask gt = sseg::binarize(
            sseg::load_gray((fs::path(e.gt_dir) / name).string()),
            e.binarize_threshold);
        records[i] =
            sseg::eval_sample(pred, gt, fs::path(name).stem().string());
        sseg::RealMatrix real;
        real.rows = pred.height;
        real.cols = pred.width;
        real.values.assign(pred.bits.begin(), pred.bits.end());
        saliency[i] = sseg::saliency_suite(real, gt);
    });

    write_text((fs::path(out) / "eval.csv").string(),
               sseg::records_csv(records));

    const sseg::MetricsReport rep = sseg::aggregate(records);
    const sseg::SaliencyScores sal = sseg::mean_scores(saliency);
    json summary;
    summary["command"] = "eval";
    summary["num_samples"] = records.size();
    summary["oiou"] = rep.oiou;
    summary["miou"] = rep.miou;
    json pat;
    for (const auto& [x, v] : rep.p_at) {
        char key[8];
        std::snprintf(key, sizeof(key), "%.1f", x);
        pat[key] = v;
    }
    summary["precision_at"] = pat;
    summary["s_measure"] = sal.s_measure;
    summary["e_measure"] = sal.e_measure;
    summary["weighted_f"] = sal.weighted_f;
    summary["mae"] = sal.mae;
    summary["unmatched_predictions"] = pred_only;
    summary["unmatched_ground_truth"] = gt_only;
    write_json((fs::path(out) / "summary.json").string(), summary);
    return kOk;
}

// ---------------------------------------------------------- scale-analysis

struct ScaleCli {
    std::string csv;
    sseg::LowessConfig cfg;
};

int cmd_scale_analysis(const ScaleCli& s, const std::string& out) {
    if (s.csv.empty()) throw ConfigError("scale-analysis: no input CSV");
    std::ifstream in(s.csv, std::ios::binary);
    if (!in) throw sseg::FileNotFound("cannot read CSV: " + s.csv);

    std::string line;
    if (!std::getline(in, line)) {
        std::fprintf(stderr, "empty CSV: %s\n", s.csv.c_str());
        return kEmptyResult;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "sample_id,intersection,union,iou,gt_pixels")
        throw ConfigError("unexpected CSV header: " + line);

    std::vector<std::pair<double, double>> points;  // (gt_pixels, iou)
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw ConfigError("malformed CSV row: " + line);
        try {
            points.emplace_back(std::stod(cells[4]), std::stod(cells[3]));
        } catch (const std::exception&) {
            throw ConfigError("malformed CSV row: " + line);
        }
    }
    if (points.empty()) {
        std::fprintf(stderr, "CSV has no data rows: %s\n", s.csv.c_str());
        return kEmptyResult;
    }
    ensure_out_dir(out);

    const auto sel = sseg::bin_points(points, s.cfg);
    std::string scatter = "gt_pixels,iou\n";
    for (const auto& [x, y] : sel)
        scatter += fmt10(x) + "," + fmt10(y) + "\n";
    write_text((fs::path(out) / "scatter.csv").string(), scatter);

    std::vector<std::pair<double, double>> curve;
    try {
        curve = sseg::lowess_fit(points, s.cfg);
    } catch (const sseg::DegenerateInput&) {
        // one distinct x after binning: constant curve at the mean
        double sum = 0.0;
        for (const auto& [x, y] : sel) sum += y;
        const double mean = sum / static_cast<double>(sel.size());
        for (const auto& [x, y] : sel) curve.emplace_back(x, mean);
    }
    std::string fit = "gt_pixels,iou_fit\n";
    for (const auto& [x, y] : curve)
        fit += fmt10(x) + "," + fmt10(y) + "\n";
    write_text((fs::path(out) / "lowess.csv").string(), fit);
    return kOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"sketch segmentation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = ".";
    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", seed, "rng seed");
    auto* threads_opt =
        app.add_option("--threads", threads, "worker threads (0 = auto)");
    auto* out_opt = app.add_option("--out", out, "output directory");

    auto* aug = app.add_subcommand("augment", "render perturbed sketch variants");
    aug->fallthrough();
    AugmentCli a;
    auto* aug_in = aug->add_option("input", a.input_dir, "sketch directory");
    auto* variants_opt =
        aug->add_option("--variants", a.cfg.perturb.num_variants);
    auto* pk_opt = aug->add_option("--perturb-k", a.cfg.perturb.K_step);
    auto* pc_opt = aug->add_option("--perturb-c", a.cfg.perturb.C);
    auto* bs_opt = aug->add_option("--block-size", a.cfg.block_size);
    auto* th_opt = aug->add_option("--thickness", a.cfg.render_thickness);

    auto* tra = app.add_subcommand("transport", "prompt-to-pixel transport demo");
    tra->fallthrough();
    TransportCli t;
    auto* tra_img = tra->add_option("image", t.image, "image PNG");
    auto* tra_prompts =
        tra->add_option("prompts", t.prompts, "sketch prompt PNGs");
    auto* eps_opt = tra->add_option("--epsilon", t.cfg.epsilon);
    auto* mi_opt = tra->add_option("--max-iter", t.cfg.max_iter);
    auto* tol_opt = tra->add_option("--tolerance", t.cfg.tolerance);

    auto* ev = app.add_subcommand("eval", "score predictions against masks");
    ev->fallthrough();
    EvalCli e;
    auto* ev_pred = ev->add_option("predictions", e.pred_dir, "prediction directory");
    auto* ev_gt = ev->add_option("ground_truth", e.gt_dir, "ground-truth directory");

    auto* sc = app.add_subcommand("scale-analysis", "size-vs-IoU curve from an eval CSV");
    sc->fallthrough();
    ScaleCli s;
    auto* sc_csv = sc->add_option("csv", s.csv, "eval CSV");
    auto* frac_opt = sc->add_option("--frac", s.cfg.frac);
    auto* bin_opt = sc->add_option("--bin-size", s.cfg.bin_size);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    const json cfg = load_config(config_path);
    if (seed_opt->count() == 0) cfg_get(cfg, "seed", seed);
    if (threads_opt->count() == 0) cfg_get(cfg, "threads", threads);
    if (out_opt->count() == 0) cfg_get(cfg, "out", out);

    if (aug->parsed()) {
        if (aug_in->count() == 0) cfg_get(cfg, "input", a.input_dir);
        cfg_get(cfg, "binarize_threshold", a.cfg.binarize_threshold);
        cfg_get(cfg, "min_component_pixels", a.cfg.min_component_pixels);
        cfg_get(cfg, "sample_interval", a.cfg.sample_interval);
        if (variants_opt->count() == 0)
            cfg_get(cfg, "variants", a.cfg.perturb.num_variants);
        if (pk_opt->count() == 0) cfg_get(cfg, "perturb_k", a.cfg.perturb.K_step);
        if (pc_opt->count() == 0) cfg_get(cfg, "perturb_c", a.cfg.perturb.C);
        if (bs_opt->count() == 0) cfg_get(cfg, "block_size", a.cfg.block_size);
        if (th_opt->count() == 0)
            cfg_get(cfg, "thickness", a.cfg.render_thickness);
        a.cfg.perturb.seed = seed;
        return cmd_augment(a, seed, threads, out);
    }
    if (tra->parsed()) {
        if (tra_img->count() == 0) cfg_get(cfg, "image", t.image);
        if (tra_prompts->count() == 0) cfg_get(cfg, "prompts", t.prompts);
        if (eps_opt->count() == 0) cfg_get(cfg, "epsilon", t.cfg.epsilon);
        if (mi_opt->count() == 0) cfg_get(cfg, "max_iter", t.cfg.max_iter);
        if (tol_opt->count() == 0) cfg_get(cfg, "tolerance", t.cfg.tolerance);
        cfg_get(cfg, "grid_h", t.grid_h);
        cfg_get(cfg, "grid_w", t.grid_w);
        cfg_get(cfg, "feature_dim", t.feature_dim);
        cfg_get(cfg, "binarize_threshold", t.binarize_threshold);
        return cmd_transport(t, threads, out);
    }
    if (ev->parsed()) {
        if (ev_pred->count() == 0) cfg_get(cfg, "pred_dir", e.pred_dir);
        if (ev_gt->count() == 0) cfg_get(cfg, "gt_dir", e.gt_dir);
        cfg_get(cfg, "binarize_threshold", e.binarize_threshold);
        return cmd_eval(e, threads, out);
    }
    if (sc_csv->count() == 0) cfg_get(cfg, "input", s.csv);
    if (frac_opt->count() == 0) cfg_get(cfg, "frac", s.cfg.frac);
    if (bin_opt->count() == 0) cfg_get(cfg, "bin_size", s.cfg.bin_size);
    cfg_get(cfg, "samples_per_bin", s.cfg.samples_per_bin);
    return cmd_scale_analysis(s, out);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const sseg::FileNotFound& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    } catch (const sseg::UnsupportedFormat& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    } catch (const sseg::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    }
}
