#include "sketchseg/loss.hpp"

#include <algorithm>
#include <cmath>

#include "sketchseg/errors.hpp"

namespace sseg {

double focal_loss(const RealMatrix& Y, const BinaryMask& T,
                  const FocalConfig& cfg) {
    if (Y.rows != T.height || Y.cols != T.width)
        throw DimMismatch("predictions " + std::to_string(Y.rows) + "x" +
                          std::to_string(Y.cols) + " vs mask " +
                          std::to_string(T.height) + "x" +
                          std::to_string(T.width));
    double sum = 0.0;
    const std::size_t n = Y.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double y_raw = Y.values[i];
        if (!(y_raw >= 0.0 && y_raw <= 1.0))
            throw DomainError("prediction " + std::to_string(y_raw) +
                              " outside [0,1]");
        const double y =
            std::clamp(y_raw, cfg.clamp_eps, 1.0 - cfg.clamp_eps);
        const double t = T.bits[i] ? 1.0 : 0.0;
        const double ce = -(t * std::log(y) + (1.0 - t) * std::log(1.0 - y));
        const double p_t = y * t + (1.0 - y) * (1.0 - t);
        const double a_t = cfg.alpha * t + (1.0 - cfg.alpha) * (1.0 - t);
        sum += a_t * ce * std::pow(1.0 - p_t, cfg.gamma);
    }
    return sum / static_cast<double>(n);
}

double focal_loss_multi(const std::vector<RealMatrix>& channels,
                        const BinaryMask& T, const FocalConfig& cfg) {
    if (channels.empty()) throw EmptyInput("no score channels");
    double sum = 0.0;
    for (const RealMatrix& ch : channels) sum += focal_loss(ch, T, cfg);
    return sum / static_cast<double>(channels.size());
}

}  // namespace sseg
