#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mdsc/code_model.hpp"

namespace mdsc {

struct DecoderConfig {
    int max_iters = 50;
    bool early_stop = true;
    double llr_clip = 25.0;
};

// Noise standard deviation for Eb/N0 = snr_db at code rate r (unit-energy BPSK).
double awgn_sigma(double snr_db, double rate);

// BPSK (bit 0 -> +1) over AWGN; returns 2y / sigma^2.
std::vector<double> awgn_llr(const std::vector<std::uint8_t>& bits, double snr_db, double rate, std::uint64_t seed,
                             std::uint64_t stream = 0);

struct DecodeResult {
    std::vector<std::uint8_t> hard;
    bool converged = false;
    int iterations = 0;
};

// Flooding sum-product decoder in the LLR domain.
class SpaDecoder {
public:
    explicit SpaDecoder(const SparseBinaryMatrix& H);
    DecodeResult decode(const std::vector<double>& llr, const DecoderConfig& cfg) const;
    int n() const { return n_; }
    int m() const { return m_; }

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<int> row_start_;  // CSR over checks; edge e belongs to check row
    std::vector<int> edge_var_;
    std::vector<int> col_start_;  // edges grouped by variable
    std::vector<int> col_edges_;
};

DecodeResult spa_decode(const SparseBinaryMatrix& H, const std::vector<double>& llr, const DecoderConfig& cfg = {});

bool syndrome_zero(const SparseBinaryMatrix& H, const std::vector<std::uint8_t>& bits);

struct FerPoint {
    double snr_db = 0.0;
    long long frames = 0;
    long long errors = 0;
    double fer = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Wilson score interval at the given normal quantile.
std::pair<double, double> wilson_interval(long long errors, long long frames, double zq = 1.959963984540054);

struct SweepOptions {
    bool parallel = true;
};

// All-zero codeword transmission; frame f at SNR index s uses stream (s, f).
std::vector<FerPoint> fer_sweep(const SparseBinaryMatrix& H, double rate, const std::vector<double>& snr_db,
                                long long frames_per_point, const DecoderConfig& cfg, std::uint64_t seed,
                                const SweepOptions& opt = {});

void write_fer_csv(std::ostream& out, const std::vector<FerPoint>& table);

}  // namespace mdsc
