#include "dynprice/antitonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynprice {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
    if (breakpoints_.empty()) throw std::invalid_argument("step function needs at least one breakpoint");
    if (breakpoints_.size() != levels_.size())
        throw std::invalid_argument("breakpoints and levels differ in length");
    for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
        if (!std::isfinite(breakpoints_[j]) || !std::isfinite(levels_[j]))
            throw std::invalid_argument("step function values must be finite");
        if (j > 0 && !(breakpoints_[j - 1] < breakpoints_[j]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
        if (j > 0) {
            const double slack = 1e-12 * std::max(1.0, std::abs(levels_[j - 1]));
            if (levels_[j] > levels_[j - 1] + slack)
                throw std::invalid_argument("levels must be non-increasing");
        }
    }
}

StepFunction StepFunction::constant(double level) {
    return StepFunction({0.0}, {level});
}

std::size_t StepFunction::piece_index(double u) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u);
    if (it == breakpoints_.begin()) return 0;
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double StepFunction::operator()(double u) const {
    return levels_[piece_index(u)];
}

double evaluate(const StepFunction& f, double u) { return f(u); }

std::vector<WeightedSample> aggregate(std::span<const BinaryObservation> samples) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    std::vector<BinaryObservation> sorted(samples.begin(), samples.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.u < b.u; });

    std::vector<WeightedSample> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double u = sorted[i].u;
        if (!std::isfinite(u)) throw std::invalid_argument("design points must be finite");
        double successes = 0.0;
        std::size_t j = i;
        for (; j < sorted.size() && sorted[j].u == u; ++j) {
            if (sorted[j].y != 0 && sorted[j].y != 1)
                throw std::invalid_argument("responses must be binary");
            successes += sorted[j].y;
        }
        const double count = static_cast<double>(j - i);
        out.push_back({u, successes / count, count});
        i = j;
    }
    return out;
}

namespace {

void check_design(std::span<const WeightedSample> samples) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!(samples[j].weight > 0.0) || !std::isfinite(samples[j].weight))
            throw std::invalid_argument("weights must be positive");
        if (!std::isfinite(samples[j].y)) throw std::invalid_argument("responses must be finite");
        if (j > 0 && !(samples[j - 1].u < samples[j].u))
            throw std::invalid_argument("design points must be strictly increasing");
    }
}

std::vector<double> design_points(std::span<const WeightedSample> samples) {
    std::vector<double> u(samples.size());
    std::transform(samples.begin(), samples.end(), u.begin(), [](const auto& s) { return s.u; });
    return u;
}

}  // namespace

std::vector<double> fit_pava_levels(std::span<const WeightedSample> samples) {
    check_design(samples);

    struct Block {
        double weighted_sum;
        double weight;
        std::size_t count;
        double mean() const { return weighted_sum / weight; }
    };
    std::vector<Block> stack;
    stack.reserve(samples.size());

    for (const auto& s : samples) {
        Block current{s.weight * s.y, s.weight, 1};
        // Non-increasing target: a violation is a previous block whose mean
        // is below the current one.
        while (!stack.empty() && stack.back().mean() < current.mean()) {
            const Block& prev = stack.back();
            current.weighted_sum += prev.weighted_sum;
            current.weight += prev.weight;
            current.count += prev.count;
            stack.pop_back();
        }
        stack.push_back(current);
    }

    std::vector<double> levels;
    levels.reserve(samples.size());
    for (const auto& block : stack) levels.insert(levels.end(), block.count, block.mean());
    return levels;
}

StepFunction fit_pava(std::span<const WeightedSample> samples) {
    auto levels = fit_pava_levels(samples);
    return StepFunction(design_points(samples), std::move(levels));
}

StepFunction minimax_oracle(std::span<const WeightedSample> samples) {
    check_design(samples);
    const std::size_t m = samples.size();

    std::vector<double> cum_w(m + 1, 0.0), cum_wy(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        cum_w[j + 1] = cum_w[j] + samples[j].weight;
        cum_wy[j + 1] = cum_wy[j] + samples[j].weight * samples[j].y;
    }
    auto block_mean = [&](std::size_t r, std::size_t s) {
        return (cum_wy[s + 1] - cum_wy[r]) / (cum_w[s + 1] - cum_w[r]);
    };

    std::vector<double> minimax(m), maximin(m);
    for (std::size_t j = 0; j < m; ++j) {
        double best_min = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r <= j; ++r) {
            double inner = -std::numeric_limits<double>::infinity();
            for (std::size_t s = j; s < m; ++s) inner = std::max(inner, block_mean(r, s));
            best_min = std::min(best_min, inner);
        }
        minimax[j] = best_min;

        double best_max = -std::numeric_limits<double>::infinity();
        for (std::size_t s = j; s < m; ++s) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r <= j; ++r) inner = std::min(inner, block_mean(r, s));
            best_max = std::max(best_max, inner);
        }
        maximin[j] = best_max;

        if (std::abs(minimax[j] - maximin[j]) > 1e-9)
            throw std::logic_error("minimax and maximin formulae disagree");
    }
    return StepFunction(design_points(samples), std::move(minimax));
}

}  // namespace dynprice
