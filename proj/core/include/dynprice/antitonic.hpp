#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dynprice {

// One distinct design point with the mean response observed there.
struct WeightedSample {
    double u = 0.0;   // design point (noise-offset units)
    double y = 0.0;   // mean response at u
    double weight = 1.0;  // multiplicity o_j
};

struct BinaryObservation {
    double u = 0.0;
    int y = 0;
};

// Piecewise-constant non-increasing function. The value on [u_j, u_{j+1})
// is level_j; level_1 extends to the left of u_1 and level_m to the right
// of u_m.
class StepFunction {
public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

    // Constant function, represented with a single breakpoint at 0.
    static StepFunction constant(double level);

    double operator()(double u) const;

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> levels() const { return levels_; }
    std::size_t size() const { return levels_.size(); }

    // Index of the piece containing u (0-based).
    std::size_t piece_index(double u) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> levels_;
};

// Groups observations by exact design-point equality and averages the
// responses. Output is sorted by u, strictly increasing.
std::vector<WeightedSample> aggregate(std::span<const BinaryObservation> samples);

// Weighted least-squares projection onto the non-increasing cone by
// pool-adjacent-violators. Linear in the number of samples.
StepFunction fit_pava(std::span<const WeightedSample> samples);

// Fitted level per sample (same length as input), without building a StepFunction.
std::vector<double> fit_pava_levels(std::span<const WeightedSample> samples);

// Reference solution from the min-max representation
//   S(u_j) = min_{r<=j} max_{s>=j} ybar_{rs},
// cross-checked against the max-min form. O(m^2) per point; intended for
// small inputs in tests.
StepFunction minimax_oracle(std::span<const WeightedSample> samples);

double evaluate(const StepFunction& f, double u);

}  // namespace dynprice
