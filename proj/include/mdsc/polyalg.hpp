#pragma once

#include <cstddef>
#include <vector>

namespace mdsc {

// (m+1) x M joint distribution over (component, auxiliary matrix) pairs.
struct ProbabilityMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    ProbabilityMatrix() = default;
    ProbabilityMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), v(std::size_t(r) * c, fill) {}
    static ProbabilityMatrix from_rows(const std::vector<std::vector<double>>& rows);

    double& operator()(int i, int j) { return v[std::size_t(i) * cols + j]; }
    double operator()(int i, int j) const { return v[std::size_t(i) * cols + j]; }
    double total() const;
    std::vector<double> row_sums() const;
    std::vector<std::vector<double>> to_rows() const;
    void validate(double tol = 1e-12) const;
};

// Dense multivariate Laurent polynomial. Dimension d stores exponents
// offset[d] .. offset[d] + shape[d] - 1; values are row-major with the last
// dimension contiguous.
struct CoefficientArray {
    std::vector<int> offset;
    std::vector<int> shape;
    std::vector<double> values;

    CoefficientArray() = default;
    CoefficientArray(std::vector<int> off, std::vector<int> shp);

    int dims() const { return int(shape.size()); }
    std::size_t size() const { return values.size(); }
    std::vector<std::size_t> strides() const;
    double at(const std::vector<int>& exponents) const;
    double& ref(const std::vector<int>& exponents);
    double total() const;
};

// Coupling polynomial f(X^a, Y^a) with X = (X_1..X_n), Y = (Y_1..Y_n) and
// a an integer power vector of length n: entry p_{i,j} sits at X-exponent
// a*i and Y-exponent a*j. Result has 2n dimensions.
CoefficientArray coupling_array(const ProbabilityMatrix& P, const std::vector<int>& power);

inline std::size_t direct_conv_threshold = 4096;

CoefficientArray conv_direct(const CoefficientArray& a, const CoefficientArray& b);
CoefficientArray conv_direct(const std::vector<CoefficientArray>& arrays);
CoefficientArray conv_fft(const std::vector<CoefficientArray>& arrays);
CoefficientArray conv(const std::vector<CoefficientArray>& arrays);

// Sums coefficients whose first x_exponents.size() exponents equal x_exponents
// and whose remaining exponents y satisfy (y + y_shift) = 0 mod M in every
// remaining dimension. y_shift may be empty (all zeros).
double sum_modM_coeffs(const CoefficientArray& G, const std::vector<int>& x_exponents, int M,
                       const std::vector<int>& y_shift = {});

// weight * sum_{M | b} [ prod_k f(X^{a_k}, Y^{a_k})^{mult_k} ]_{0, b}
struct Factor {
    std::vector<int> power;
    int mult = 1;
};

struct FactorProduct {
    double weight = 1.0;
    std::vector<Factor> factors;
    int cycle_dims() const { return factors.empty() ? 0 : int(factors.front().power.size()); }
};

struct ValueGrad {
    double value = 0.0;
    ProbabilityMatrix grad;
};

enum class ConvPath { automatic, direct, transform };

ValueGrad evaluate_product(const FactorProduct& term, const ProbabilityMatrix& P, bool with_grad,
                           ConvPath path = ConvPath::automatic);

}  // namespace mdsc
