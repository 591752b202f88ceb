#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mdsc/code_model.hpp"
#include "mdsc/polyalg.hpp"

namespace mdsc {

enum class GradeTarget { cycle6, cycle8, concat };

GradeTarget parse_grade_target(const std::string& s);
std::string to_string(GradeTarget t);

long long binom(int n, int k);

// Candidate-family weights of the cycle-8 objective: (doubled cycle-4,
// two-entry-repeat, one-entry-repeat, eight distinct entries).
std::array<double, 4> w_coeffs(int gamma, int kappa);

struct LambdaCoeffs {
    double l66 = 0.0;
    double l68 = 0.0;
    double l88 = 0.0;
};

// Number of dominant pattern candidates of the 6-6, 6-8 and 8-8 objects.
LambdaCoeffs lambda_coeffs(int gamma, int kappa);

FactorProduct n6_term(int gamma, int kappa);
std::vector<FactorProduct> n8_terms(const std::array<double, 4>& w);
// Dominant characteristic polynomial of two cycles of lengths 2k and 2l
// sharing a VN-CN-VN chain, scaled by weight.
FactorProduct concat_term(int k, int l, double weight);

double n6(const ProbabilityMatrix& P, int gamma, int kappa);
ProbabilityMatrix grad_n6(const ProbabilityMatrix& P, int gamma, int kappa);
double n8(const ProbabilityMatrix& P, const std::array<double, 4>& w);
ProbabilityMatrix grad_n8(const ProbabilityMatrix& P, const std::array<double, 4>& w);

struct ConcatWeights {
    double w66 = 1.0;
    double w68 = 1e-2;
    double w88 = 1e-4;
};

double n_concat(const ProbabilityMatrix& P, const ConcatWeights& w, int gamma, int kappa);
ProbabilityMatrix grad_n_concat(const ProbabilityMatrix& P, const ConcatWeights& w, int gamma, int kappa);

// Expected number of surviving candidates of each concat configuration
// (unweighted, dominant classes only).
std::array<double, 3> concat_breakdown(const ProbabilityMatrix& P, int gamma, int kappa);

ProbabilityMatrix force(const ProbabilityMatrix& P, const std::vector<double>& pstar);

double relocation_density(const ProbabilityMatrix& P);

struct GradeConfig {
    GradeTarget target = GradeTarget::cycle6;
    double T_max = 0.35;
    std::optional<double> epsilon;  // default: 1e-8 * initial objective
    double alpha = 0.02;
    int max_iters = 5000;
    ConcatWeights weights;
    std::optional<bool> zero_w1;  // default: true when z is prime
    bool exact66 = false;         // all 6-6 pattern classes instead of the dominant ones
};

struct GradeResult {
    ProbabilityMatrix P;
    double objective = 0.0;
    std::optional<double> expected_fl;
    int iterations = 0;
    std::vector<double> objective_trace;
    std::vector<double> density_trace;
};

// Objective and gradient of the configured target at P.
ValueGrad grade_objective(const ProbabilityMatrix& P, const CodeParams& params, const GradeConfig& cfg,
                          bool with_grad = true);

GradeResult run_md_grade(const CodeParams& params, const std::vector<double>& pstar, const GradeConfig& cfg);

enum class ForecastKind { cycle6, cycle8 };

struct Forecast {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool span_ok = true;
};

Forecast forecast(double N, ForecastKind kind, const CodeParams& params);

// Per row: max - min gradient entry over columns with p > 1e-6.
std::vector<double> kkt_residual(const ProbabilityMatrix& P, const ProbabilityMatrix& grad);

}  // namespace mdsc
