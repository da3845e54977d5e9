#pragma once

#include <span>
#include <string>
#include <vector>

namespace dynprice {

struct CurvePoint {
    double t = 0.0;
    double value = 0.0;
};

struct SlopeEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
    std::size_t points_used = 0;
    std::vector<std::string> warnings;
};

// Least-squares slope of log2(value) on log2(t). Points with a
// nonpositive value are dropped with a warning; fewer than three usable
// points is an error.
SlopeEstimate estimate_slope(std::span<const CurvePoint> points);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct MeanInterval {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// mean +- 1.96 sd / sqrt(n); zero width for a single value.
MeanInterval normal_interval(std::span<const double> values);

double median(std::vector<double> values);

}  // namespace dynprice
