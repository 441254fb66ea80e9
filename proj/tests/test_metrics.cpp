#include <doctest.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sketchseg/errors.hpp"
#include "sketchseg/metrics.hpp"
#include "sketchseg/rng.hpp"
#include "saliency_ref.hpp"
#include "support.hpp"

namespace {

sseg::EvalRecord rec(const char* id, long long inter, long long uni,
                     long long gt) {
    sseg::EvalRecord r;
    r.sample_id = id;
    r.intersection = inter;
    r.union_ = uni;
    r.iou = uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
    r.gt_pixels = gt;
    return r;
}

}  // namespace

TEST_CASE("eval_sample counts overlap cells") {
    const sseg::BinaryMask pred = support::mask_from({
        "##..",
        "##..",
        "....",
    });
    const sseg::BinaryMask gt = support::mask_from({
        ".##.",
        ".##.",
        "....",
    });
    const sseg::EvalRecord r = sseg::eval_sample(pred, gt, "a");
    CHECK(r.sample_id == "a");
    CHECK(r.intersection == 2);
    CHECK(r.union_ == 6);
    CHECK(r.iou == doctest::Approx(2.0 / 6.0));
    CHECK(r.gt_pixels == 4);

    // both empty: IoU defaults to 1
    const sseg::BinaryMask blank = sseg::make_mask(4, 3);
    const sseg::EvalRecord e = sseg::eval_sample(blank, blank, "b");
    CHECK(e.union_ == 0);
    CHECK(e.iou == 1.0);

    const sseg::BinaryMask narrow = sseg::make_mask(3, 3);
    CHECK_THROWS_AS(sseg::eval_sample(pred, narrow, "c"), sseg::DimMismatch);
}

TEST_CASE("aggregate matches hand-computed oIoU, mIoU and P@X") {
    const std::vector<sseg::EvalRecord> records = {
        rec("a", 55, 100, 80),  // iou 0.55
        rec("b", 65, 100, 90),  // iou 0.65
    };
    const sseg::MetricsReport m = sseg::aggregate(records);
    CHECK(m.oiou == doctest::Approx(100.0 * 120.0 / 200.0));
    CHECK(m.miou == doctest::Approx(100.0 * 0.6));
    CHECK(m.p_at.at(0.5) == doctest::Approx(100.0));
    CHECK(m.p_at.at(0.6) == doctest::Approx(50.0));  // 0.65 >= 0.6, 0.55 not
    CHECK(m.p_at.at(0.7) == doctest::Approx(0.0));
    CHECK(m.p_at.at(0.8) == doctest::Approx(0.0));
    CHECK(m.p_at.at(0.9) == doctest::Approx(0.0));
    CHECK(m.p_at.size() == 5);

    // >= convention exactly at the threshold
    const sseg::MetricsReport edge = sseg::aggregate({rec("c", 7, 10, 10)});
    CHECK(edge.p_at.at(0.7) == doctest::Approx(100.0));

    // an empty-union record counts as IoU 1 in both aggregates
    const sseg::MetricsReport both =
        sseg::aggregate({rec("d", 0, 0, 0), rec("e", 1, 2, 2)});
    CHECK(both.miou == doctest::Approx(100.0 * 0.75));
    CHECK(both.oiou == doctest::Approx(100.0 * 1.0 / 2.0));
    CHECK(both.p_at.at(0.9) == doctest::Approx(50.0));

    CHECK_THROWS_AS(sseg::aggregate({}), sseg::EmptyInput);
}

TEST_CASE("size filters drop only in-range low-IoU records") {
    const std::vector<sseg::EvalRecord> records = {
        rec("tiny", 1, 10, 50),      // iou 0.1
        rec("small", 4, 10, 500),    // iou 0.4
        rec("large", 4, 10, 5000),   // iou 0.4, outside every range
        rec("good", 9, 10, 500),     // iou 0.9
    };
    const std::vector<sseg::SizeFilter> filters = {
        {0, 100, 0.2},      // kills "tiny"
        {100, 1000, 0.5},   // kills "small", keeps "good"
    };
    const auto kept = sseg::apply_size_filters(records, filters);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].sample_id == "large");
    CHECK(kept[1].sample_id == "good");

    // no filters: identity
    CHECK(sseg::apply_size_filters(records, {}).size() == records.size());
}

TEST_CASE("perfect prediction maxes every saliency score") {
    const sseg::BinaryMask gt = support::mask_from({
        "....##..",
        "...###..",
        "....##..",
        "........",
        "##......",
        "###.....",
    });
    const sseg::SaliencyScores s =
        sseg::saliency_suite(support::real_from(gt), gt);
    CHECK(s.s_measure == doctest::Approx(1.0).epsilon(1e-9));
    // canonical E-measure divides by N-1, so a perfect map lands at
    // N/(N-1), a hair above one
    CHECK(s.e_measure == doctest::Approx(48.0 / 47.0).epsilon(1e-6));
    CHECK(s.weighted_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.mae == doctest::Approx(0.0));
}

TEST_CASE("saliency suite agrees with the reference formulas") {
    sseg::RngStream rng = sseg::derive_stream(7701, {0});
    for (int trial = 0; trial < 12; ++trial) {
        const int w = 8 + static_cast<int>(rng.next_unit() * 25.0);
        const int h = 8 + static_cast<int>(rng.next_unit() * 25.0);
        sseg::BinaryMask gt = support::random_blob(w, h, rng);
        if (trial == 0)
            gt = sseg::make_mask(w, h);  // empty ground truth branch
        if (trial == 1)
            for (auto& b : gt.bits) b = 1;  // full ground truth branch
        sseg::RealMatrix pred = support::random_real(w, h, rng);
        if (trial == 2)
            for (auto& v : pred.values) v = 0.0;  // empty prediction
        const sseg::SaliencyScores got = sseg::saliency_suite(pred, gt);
        CHECK(got.s_measure ==
              doctest::Approx(salref::s_measure(pred, gt)).epsilon(1e-9));
        CHECK(got.e_measure ==
              doctest::Approx(salref::e_measure(pred, gt)).epsilon(1e-9));
        CHECK(got.weighted_f ==
              doctest::Approx(salref::weighted_f(pred, gt)).epsilon(1e-9));
        CHECK(got.mae ==
              doctest::Approx(salref::mae(pred, gt)).epsilon(1e-12));
    }
}

TEST_CASE("MAE is the mean absolute gap and respects complements") {
    sseg::RngStream rng = sseg::derive_stream(7702, {0});
    const sseg::BinaryMask gt = support::random_mask(9, 7, 0.4, rng);
    const sseg::RealMatrix pred = support::random_real(9, 7, rng);
    double want = 0.0;
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x)
            want += std::fabs(pred.at(y, x) - (gt.at(x, y) ? 1.0 : 0.0));
    want /= 63.0;
    const double got = sseg::saliency_suite(pred, gt).mae;
    CHECK(got == doctest::Approx(want).epsilon(1e-12));

    sseg::BinaryMask flipped_gt = gt;
    for (auto& b : flipped_gt.bits) b = b ? 0 : 1;
    sseg::RealMatrix flipped_pred = pred;
    for (auto& v : flipped_pred.values) v = 1.0 - v;
    CHECK(sseg::saliency_suite(flipped_pred, flipped_gt).mae ==
          doctest::Approx(got).epsilon(1e-12));
}

TEST_CASE("saliency suite rejects bad inputs") {
    const sseg::BinaryMask gt = sseg::make_mask(4, 4);
    sseg::RealMatrix pred;
    pred.rows = 4;
    pred.cols = 4;
    pred.values.assign(16, 0.5);
    pred.values[3] = 1.5;
    CHECK_THROWS_AS(sseg::saliency_suite(pred, gt), sseg::DomainError);
    pred.values[3] = 0.5;
    pred.cols = 3;
    pred.values.resize(12);
    CHECK_THROWS_AS(sseg::saliency_suite(pred, gt), sseg::DimMismatch);
    sseg::RealMatrix empty;
    CHECK_THROWS_AS(sseg::saliency_suite(empty, sseg::make_mask(0, 0)),
                    sseg::EmptyInput);
}

TEST_CASE("mean_scores averages fields") {
    sseg::SaliencyScores a{0.2, 0.4, 0.6, 0.1};
    sseg::SaliencyScores b{0.4, 0.8, 1.0, 0.3};
    const sseg::SaliencyScores m = sseg::mean_scores({a, b});
    CHECK(m.s_measure == doctest::Approx(0.3));
    CHECK(m.e_measure == doctest::Approx(0.6));
    CHECK(m.weighted_f == doctest::Approx(0.8));
    CHECK(m.mae == doctest::Approx(0.2));
    CHECK_THROWS_AS(sseg::mean_scores({}), sseg::EmptyInput);
}

TEST_CASE("bin_points keeps the per-bin points nearest the center") {
    sseg::LowessConfig cfg;
    cfg.bin_size = 10;
    cfg.samples_per_bin = 1;
    // bin [0,10) center 5; bin [10,20) center 15
    const std::vector<std::pair<double, double>> pts = {
        {9.0, 1.0}, {4.0, 2.0}, {6.0, 3.0}, {11.0, 4.0}, {19.0, 5.0}};
    const auto kept = sseg::bin_points(pts, cfg);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].first == 4.0);  // ties on |x-5| go to earlier input order
    CHECK(kept[0].second == 2.0);
    CHECK(kept[1].first == 11.0);
    CHECK(kept[1].second == 4.0);

    cfg.samples_per_bin = 2;
    const auto two = sseg::bin_points(pts, cfg);
    REQUIRE(two.size() == 4);
    CHECK(two[0].first == 4.0);
    CHECK(two[1].first == 6.0);
    CHECK(two[2].first == 11.0);
    CHECK(two[3].first == 19.0);

    cfg.samples_per_bin = 0;
    CHECK_THROWS_AS(sseg::bin_points(pts, cfg), sseg::DomainError);
}

TEST_CASE("lowess reproduces an exact line") {
    sseg::RngStream rng = sseg::derive_stream(7703, {0});
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i) {
        // spacing >> bin width so no point is subsampled away
        const double x = 25.0 * i + 10.0 * rng.next_unit();
        pts.push_back({x, 3.0 - 0.002 * x});
    }
    sseg::LowessConfig cfg;
    cfg.frac = 1.0;
    cfg.bin_size = 1;  // effectively no subsampling
    const auto curve = sseg::lowess_fit(pts, cfg);
    REQUIRE(curve.size() == pts.size());
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i - 1].first <= curve[i].first);
    for (const auto& [x, y] : curve)
        CHECK(y == doctest::Approx(3.0 - 0.002 * x).epsilon(1e-9));
}

TEST_CASE("lowess commutes with affine changes of y") {
    sseg::RngStream rng = sseg::derive_stream(7704, {0});
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 60; ++i)
        pts.push_back({100.0 * rng.next_unit(), rng.next_unit()});
    sseg::LowessConfig cfg;
    cfg.frac = 0.4;
    cfg.bin_size = 1;
    const auto base = sseg::lowess_fit(pts, cfg);
    std::vector<std::pair<double, double>> scaled = pts;
    for (auto& [x, y] : scaled) y = 5.0 * y - 2.0;
    const auto moved = sseg::lowess_fit(scaled, cfg);
    REQUIRE(base.size() == moved.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(moved[i].first == base[i].first);
        CHECK(moved[i].second ==
              doctest::Approx(5.0 * base[i].second - 2.0).epsilon(1e-9));
    }
}

TEST_CASE("lowess needs two distinct x values") {
    sseg::LowessConfig cfg;
    cfg.bin_size = 2000;
    // every point lands in the first bin and only one survives
    const std::vector<std::pair<double, double>> one_bin = {
        {10.0, 0.2}, {20.0, 0.4}, {30.0, 0.6}};
    CHECK_THROWS_AS(sseg::lowess_fit(one_bin, cfg), sseg::DegenerateInput);
    CHECK_THROWS_AS(sseg::lowess_fit({}, cfg), sseg::DegenerateInput);
    CHECK_THROWS_AS(
        sseg::lowess_fit({{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}},
                         sseg::LowessConfig{1.0, 1, 3}),
        sseg::DegenerateInput);
}

TEST_CASE("records_csv emits the pinned header and rows") {
    const std::string csv = sseg::records_csv(
        {rec("s1", 3, 4, 9), rec("s0", 0, 0, 0)});
    const std::string head = "sample_id,intersection,union,iou,gt_pixels\n";
    CHECK(csv.substr(0, head.size()) == head);
    CHECK(csv.find("s1,3,4,0.7500000000,9\n") != std::string::npos);
    CHECK(csv.find("s0,0,0,1.0000000000,0\n") != std::string::npos);
    CHECK(csv.back() == '\n');
}
