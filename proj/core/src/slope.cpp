#include "dynprice/slope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynprice {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("fit_line: x and y differ in length");
    if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: x values are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            sse += r * r;
        }
        fit.std_error = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

SlopeEstimate estimate_slope(std::span<const CurvePoint> points) {
    SlopeEstimate out;
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (!(p.value > 0.0) || !(p.t > 0.0)) {
            out.warnings.push_back("dropped checkpoint t=" + std::to_string(p.t) +
                                   " with nonpositive value " + std::to_string(p.value));
            continue;
        }
        lx.push_back(std::log2(p.t));
        ly.push_back(std::log2(p.value));
    }
    if (lx.size() < 3) throw std::invalid_argument("estimate_slope: fewer than three usable checkpoints");
    const LineFit fit = fit_line(lx, ly);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.std_error = fit.std_error;
    out.points_used = lx.size();
    return out;
}

MeanInterval normal_interval(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("normal_interval: no values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    if (values.size() == 1) return {mean, mean, mean};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return {mean, mean - half, mean + half};
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: no values");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace dynprice
