#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dynprice {

// Row-major n x d design matrix.
class Design {
public:
    explicit Design(std::size_t dim) : dim_(dim) {}

    void add_row(std::span<const double> x);
    void clear() { values_.clear(); }

    std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_).subspan(i * dim_, dim_);
    }
    std::span<const double> data() const { return values_; }

private:
    std::size_t dim_;
    std::vector<double> values_;
};

struct OlsFit {
    std::vector<double> theta;  // theta[0] is the intercept
    std::size_t n = 0;
    // Smallest singular value of (1/n) X^T X after scaling columns to unit RMS.
    double condition_hint = 0.0;

    double predict(std::span<const double> x) const;
};

class SingularDesign : public std::runtime_error {
public:
    SingularDesign() : std::runtime_error("singular design") {}
};

inline constexpr double kSingularThreshold = 1e-10;

// Least squares via column-pivoted Householder QR of the design.
// Throws SingularDesign when the scaled Gram matrix is numerically rank deficient.
OlsFit fit_ols(const Design& contexts, std::span<const double> responses);

// Shifts the intercept by p_min. Regressing H*y on x with prices uniform on
// [p_min, p_max] estimates theta0 - p_min * e_1.
OlsFit intercept_correction(OlsFit fit, double p_min);

}  // namespace dynprice
