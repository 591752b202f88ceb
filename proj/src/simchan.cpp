#include "mdsc/simchan.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "mdsc/rng.hpp"

namespace mdsc {

double awgn_sigma(double snr_db, double rate) {
    if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("rate must lie in (0, 1]");
    const double ebn0 = std::pow(10.0, snr_db / 10.0);
    return std::sqrt(1.0 / (2.0 * rate * ebn0));
}

std::vector<double> awgn_llr(const std::vector<std::uint8_t>& bits, double snr_db, double rate, std::uint64_t seed,
                             std::uint64_t stream) {
    const double sigma = awgn_sigma(snr_db, rate);
    CounterRng rng(seed, stream);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> llr(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        double y = (bits[i] ? -1.0 : 1.0) + noise(rng);
        llr[i] = 2.0 * y / (sigma * sigma);
    }
    return llr;
}

SpaDecoder::SpaDecoder(const SparseBinaryMatrix& H) : n_(H.cols), m_(H.rows) {
    row_start_.push_back(0);
    for (const auto& r : H.adj) {
        for (int v : r) edge_var_.push_back(v);
        row_start_.push_back(int(edge_var_.size()));
    }
    std::vector<int> deg(n_, 0);
    for (int v : edge_var_) ++deg[v];
    col_start_.assign(n_ + 1, 0);
    for (int v = 0; v < n_; ++v) col_start_[v + 1] = col_start_[v] + deg[v];
    col_edges_.assign(edge_var_.size(), 0);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int e = 0; e < int(edge_var_.size()); ++e) col_edges_[fill[edge_var_[e]]++] = e;
}

DecodeResult SpaDecoder::decode(const std::vector<double>& llr, const DecoderConfig& cfg) const {
    if (int(llr.size()) != n_) throw std::invalid_argument("LLR length does not match code length");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    const double clip = cfg.llr_clip;
    auto clamp = [clip](double x) { return std::max(-clip, std::min(clip, x)); };
    const std::size_t E = edge_var_.size();
    std::vector<double> v2c(E), c2v(E, 0.0), total(n_), t(E), fwd, bwd;
    for (std::size_t e = 0; e < E; ++e) v2c[e] = clamp(llr[edge_var_[e]]);
    DecodeResult res;
    res.hard.assign(n_, 0);
    auto decide = [&]() {
        bool undecided = false;
        for (int v = 0; v < n_; ++v) {
            res.hard[v] = total[v] < 0.0;
            undecided |= total[v] == 0.0;
        }
        if (undecided) return false;
        for (int c = 0; c < m_; ++c) {
            int par = 0;
            for (int e = row_start_[c]; e < row_start_[c + 1]; ++e) par ^= res.hard[edge_var_[e]];
            if (par) return false;
        }
        return true;
    };
    for (int v = 0; v < n_; ++v) total[v] = clamp(llr[v]);
    if (cfg.early_stop && decide()) {
        res.converged = true;
        return res;
    }
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (int c = 0; c < m_; ++c) {
            const int b = row_start_[c], d = row_start_[c + 1] - b;
            fwd.assign(d + 1, 1.0);
            bwd.assign(d + 1, 1.0);
            for (int k = 0; k < d; ++k) t[b + k] = std::tanh(0.5 * v2c[b + k]);
            for (int k = 0; k < d; ++k) fwd[k + 1] = fwd[k] * t[b + k];
            for (int k = d - 1; k >= 0; --k) bwd[k] = bwd[k + 1] * t[b + k];
            for (int k = 0; k < d; ++k) {
                double p = std::max(-1.0 + 1e-15, std::min(1.0 - 1e-15, fwd[k] * bwd[k + 1]));
                c2v[b + k] = clamp(2.0 * std::atanh(p));
            }
        }
        for (int v = 0; v < n_; ++v) {
            double s = llr[v];
            for (int k = col_start_[v]; k < col_start_[v + 1]; ++k) s += c2v[col_edges_[k]];
            total[v] = s;
            for (int k = col_start_[v]; k < col_start_[v + 1]; ++k) {
                int e = col_edges_[k];
                v2c[e] = clamp(s - c2v[e]);
            }
        }
        res.iterations = it;
        bool ok = decide();
        if (ok) res.converged = true;
        if (ok && cfg.early_stop) break;
    }
    return res;
}

DecodeResult spa_decode(const SparseBinaryMatrix& H, const std::vector<double>& llr, const DecoderConfig& cfg) {
    return SpaDecoder(H).decode(llr, cfg);
}

bool syndrome_zero(const SparseBinaryMatrix& H, const std::vector<std::uint8_t>& bits) {
    if (int(bits.size()) != H.cols) throw std::invalid_argument("word length does not match code length");
    for (const auto& r : H.adj) {
        int par = 0;
        for (int v : r) par ^= bits[v];
        if (par) return false;
    }
    return true;
}

std::pair<double, double> wilson_interval(long long errors, long long frames, double zq) {
    if (frames <= 0) return {0.0, 1.0};
    const double n = double(frames), p = double(errors) / n, z2 = zq * zq;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = zq * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {errors == 0 ? 0.0 : std::max(0.0, centre - half), errors == frames ? 1.0 : std::min(1.0, centre + half)};
}

std::vector<FerPoint> fer_sweep(const SparseBinaryMatrix& H, double rate, const std::vector<double>& snr_db,
                                long long frames_per_point, const DecoderConfig& cfg, std::uint64_t seed,
                                const SweepOptions& opt) {
    std::vector<FerPoint> table;
    if (frames_per_point <= 0) return table;
    SpaDecoder dec(H);
    const std::vector<std::uint8_t> zero(H.cols, 0);
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
        long long errors = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : errors) if (opt.parallel)
        for (long long f = 0; f < frames_per_point; ++f) {
            auto llr = awgn_llr(zero, snr_db[s], rate, seed, (std::uint64_t(s) << 40) ^ std::uint64_t(f));
            auto r = dec.decode(llr, cfg);
            bool bad = !r.converged || std::any_of(r.hard.begin(), r.hard.end(), [](std::uint8_t b) { return b != 0; });
            errors += bad;
        }
        FerPoint pt;
        pt.snr_db = snr_db[s];
        pt.frames = frames_per_point;
        pt.errors = errors;
        pt.fer = double(errors) / double(frames_per_point);
        std::tie(pt.ci_low, pt.ci_high) = wilson_interval(errors, frames_per_point);
        table.push_back(pt);
    }
    return table;
}

void write_fer_csv(std::ostream& out, const std::vector<FerPoint>& table) {
    out << "snr_db,frames,errors,fer,ci_low,ci_high\n";
    for (const auto& p : table)
        out << p.snr_db << ',' << p.frames << ',' << p.errors << ',' << p.fer << ',' << p.ci_low << ',' << p.ci_high
            << '\n';
}

}  // namespace mdsc
