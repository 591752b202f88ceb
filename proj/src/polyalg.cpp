#include "mdsc/polyalg.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace mdsc {

ProbabilityMatrix ProbabilityMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty probability matrix");
    ProbabilityMatrix P(int(rows.size()), int(rows.front().size()));
    for (int i = 0; i < P.rows; ++i) {
        if (int(rows[i].size()) != P.cols) throw std::invalid_argument("ragged probability matrix");
        for (int j = 0; j < P.cols; ++j) P(i, j) = rows[i][j];
    }
    return P;
}

double ProbabilityMatrix::total() const { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> ProbabilityMatrix::row_sums() const {
    std::vector<double> s(rows, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) s[i] += (*this)(i, j);
    return s;
}

std::vector<std::vector<double>> ProbabilityMatrix::to_rows() const {
    std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out[i][j] = (*this)(i, j);
    return out;
}

void ProbabilityMatrix::validate(double tol) const {
    for (double x : v)
        if (!(x >= 0.0)) throw std::invalid_argument("probability entries must be nonnegative");
    if (std::abs(total() - 1.0) > tol) throw std::invalid_argument("probability matrix must sum to 1");
}

CoefficientArray::CoefficientArray(std::vector<int> off, std::vector<int> shp)
    : offset(std::move(off)), shape(std::move(shp)) {
    if (offset.size() != shape.size()) throw std::invalid_argument("offset/shape rank mismatch");
    std::size_t n = 1;
    for (int s : shape) {
        if (s < 1) throw std::invalid_argument("nonpositive extent");
        n *= std::size_t(s);
    }
    values.assign(n, 0.0);
}

std::vector<std::size_t> CoefficientArray::strides() const {
    std::vector<std::size_t> st(shape.size(), 1);
    for (int d = int(shape.size()) - 2; d >= 0; --d) st[d] = st[d + 1] * std::size_t(shape[d + 1]);
    return st;
}

double CoefficientArray::at(const std::vector<int>& e) const {
    if (e.size() != shape.size()) throw std::invalid_argument("exponent rank mismatch");
    std::size_t lin = 0;
    for (std::size_t d = 0; d < shape.size(); ++d) {
        int k = e[d] - offset[d];
        if (k < 0 || k >= shape[d]) return 0.0;
        lin = lin * std::size_t(shape[d]) + std::size_t(k);
    }
    return values[lin];
}

double& CoefficientArray::ref(const std::vector<int>& e) {
    if (e.size() != shape.size()) throw std::invalid_argument("exponent rank mismatch");
    std::size_t lin = 0;
    for (std::size_t d = 0; d < shape.size(); ++d) {
        int k = e[d] - offset[d];
        if (k < 0 || k >= shape[d]) throw std::out_of_range("exponent outside stored range");
        lin = lin * std::size_t(shape[d]) + std::size_t(k);
    }
    return values[lin];
}

double CoefficientArray::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

CoefficientArray coupling_array(const ProbabilityMatrix& P, const std::vector<int>& power) {
    const int n = int(power.size());
    if (n == 0) throw std::invalid_argument("empty power vector");
    bool any = false;
    for (int a : power) any |= a != 0;
    if (!any) throw std::invalid_argument("all-zero power vector collapses every dimension");
    const int m = P.rows - 1, M = P.cols;
    std::vector<int> off(2 * n), shp(2 * n);
    for (int d = 0; d < n; ++d) {
        int a = power[d];
        off[d] = std::min(0, a * m);
        shp[d] = std::abs(a) * m + 1;
        off[n + d] = std::min(0, a * (M - 1));
        shp[n + d] = std::abs(a) * (M - 1) + 1;
    }
    CoefficientArray F(off, shp);
    std::vector<int> e(2 * n);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j < M; ++j) {
            for (int d = 0; d < n; ++d) {
                e[d] = power[d] * i;
                e[n + d] = power[d] * j;
            }
            F.ref(e) += P(i, j);
        }
    return F;
}

namespace {

struct Entry {
    std::size_t lin;
    double value;
};

// Nonzero entries of a with linear positions re-expressed in the strides of a
// larger array whose extents dominate a's.
std::vector<Entry> embed(const CoefficientArray& a, const std::vector<std::size_t>& out_strides) {
    std::vector<Entry> out;
    const int n = a.dims();
    std::vector<int> idx(n, 0);
    for (std::size_t lin = 0; lin < a.values.size(); ++lin) {
        if (a.values[lin] != 0.0) {
            std::size_t pos = 0;
            for (int d = 0; d < n; ++d) pos += std::size_t(idx[d]) * out_strides[d];
            out.push_back({pos, a.values[lin]});
        }
        for (int d = n - 1; d >= 0; --d) {
            if (++idx[d] < a.shape[d]) break;
            idx[d] = 0;
        }
    }
    return out;
}

void check_rank(const std::vector<CoefficientArray>& arrays) {
    if (arrays.empty()) throw std::invalid_argument("conv of an empty list");
    for (const auto& a : arrays)
        if (a.dims() != arrays.front().dims()) throw std::invalid_argument("conv dimension mismatch");
}

std::pair<std::vector<int>, std::vector<int>> result_extent(const std::vector<const CoefficientArray*>& arrays) {
    const int n = arrays.front()->dims();
    std::vector<int> off(n, 0), shp(n, 1);
    for (const auto* a : arrays)
        for (int d = 0; d < n; ++d) {
            off[d] += a->offset[d];
            shp[d] += a->shape[d] - 1;
        }
    return {off, shp};
}

std::size_t volume(const std::vector<int>& shp) {
    std::size_t v = 1;
    for (int s : shp) v *= std::size_t(s);
    return v;
}

class FftPlans {
public:
    struct Pair {
        fftw_plan forward = nullptr;
        fftw_plan inverse = nullptr;
        std::size_t real_size = 0;
        std::size_t complex_size = 0;
    };

    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    const Pair& get(const std::vector<int>& shape) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(shape);
        if (it != plans_.end()) return it->second;
        Pair p;
        const int n = int(shape.size());
        p.real_size = volume(shape);
        p.complex_size = p.real_size / std::size_t(shape.back()) * std::size_t(shape.back() / 2 + 1);
        double* r = fftw_alloc_real(p.real_size);
        fftw_complex* c = fftw_alloc_complex(p.complex_size);
        p.forward = fftw_plan_dft_r2c(n, shape.data(), r, c, FFTW_ESTIMATE);
        p.inverse = fftw_plan_dft_c2r(n, shape.data(), c, r, FFTW_ESTIMATE);
        fftw_free(r);
        fftw_free(c);
        if (!p.forward || !p.inverse) throw std::runtime_error("FFTW planning failed");
        return plans_.emplace(shape, p).first->second;
    }

private:
    std::mutex mu_;
    std::map<std::vector<int>, Pair> plans_;
};

struct RealBuf {
    double* p = nullptr;
    explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) { std::fill(p, p + n, 0.0); }
    ~RealBuf() { fftw_free(p); }
    RealBuf(const RealBuf&) = delete;
    RealBuf& operator=(const RealBuf&) = delete;
};

struct ComplexBuf {
    fftw_complex* p = nullptr;
    std::size_t n = 0;
    explicit ComplexBuf(std::size_t size) : p(fftw_alloc_complex(size)), n(size) {}
    ~ComplexBuf() { fftw_free(p); }
    ComplexBuf(const ComplexBuf&) = delete;
    ComplexBuf& operator=(const ComplexBuf&) = delete;
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(p); }
};

// Spectra of the given arrays zero-padded to a common shape.
class SpectralProduct {
public:
    explicit SpectralProduct(std::vector<int> shape) : shape_(std::move(shape)), plans_(FftPlans::instance().get(shape_)) {
        strides_.assign(shape_.size(), 1);
        for (int d = int(shape_.size()) - 2; d >= 0; --d) strides_[d] = strides_[d + 1] * std::size_t(shape_[d + 1]);
    }

    std::unique_ptr<ComplexBuf> forward(const CoefficientArray& a) const {
        RealBuf r(plans_.real_size);
        for (const auto& e : embed(a, strides_)) r.p[e.lin] = e.value;
        auto out = std::make_unique<ComplexBuf>(plans_.complex_size);
        fftw_execute_dft_r2c(plans_.forward, r.p, out->p);
        return out;
    }

    CoefficientArray inverse(ComplexBuf& spec, const std::vector<int>& offset) const {
        RealBuf r(plans_.real_size);
        fftw_execute_dft_c2r(plans_.inverse, spec.p, r.p);
        CoefficientArray out(offset, shape_);
        const double scale = 1.0 / double(plans_.real_size);
        for (std::size_t i = 0; i < plans_.real_size; ++i) {
            double x = r.p[i] * scale;
            out.values[i] = std::abs(x) < 1e-15 ? 0.0 : x;
        }
        return out;
    }

    std::size_t complex_size() const { return plans_.complex_size; }

private:
    std::vector<int> shape_;
    const FftPlans::Pair& plans_;
    std::vector<std::size_t> strides_;
};

void multiply_into(ComplexBuf& acc, ComplexBuf& f, int times) {
    auto* a = acc.data();
    auto* b = f.data();
    for (int t = 0; t < times; ++t)
        for (std::size_t i = 0; i < acc.n; ++i) a[i] *= b[i];
}

}  // namespace

CoefficientArray conv_direct(const CoefficientArray& a, const CoefficientArray& b) {
    if (a.dims() != b.dims()) throw std::invalid_argument("conv dimension mismatch");
    auto [off, shp] = result_extent({&a, &b});
    CoefficientArray out(off, shp);
    const auto st = out.strides();
    const auto ea = embed(a, st);
    const auto eb = embed(b, st);
    for (const auto& x : ea)
        for (const auto& y : eb) out.values[x.lin + y.lin] += x.value * y.value;
    return out;
}

CoefficientArray conv_direct(const std::vector<CoefficientArray>& arrays) {
    check_rank(arrays);
    CoefficientArray acc = arrays.front();
    for (std::size_t i = 1; i < arrays.size(); ++i) acc = conv_direct(acc, arrays[i]);
    return acc;
}

CoefficientArray conv_fft(const std::vector<CoefficientArray>& arrays) {
    check_rank(arrays);
    std::vector<const CoefficientArray*> ptrs;
    for (const auto& a : arrays) ptrs.push_back(&a);
    auto [off, shp] = result_extent(ptrs);
    SpectralProduct sp(shp);
    auto acc = sp.forward(arrays.front());
    for (std::size_t i = 1; i < arrays.size(); ++i) {
        auto f = sp.forward(arrays[i]);
        multiply_into(*acc, *f, 1);
    }
    return sp.inverse(*acc, off);
}

CoefficientArray conv(const std::vector<CoefficientArray>& arrays) {
    check_rank(arrays);
    if (arrays.size() == 1) return arrays.front();
    std::vector<const CoefficientArray*> ptrs;
    for (const auto& a : arrays) ptrs.push_back(&a);
    auto shp = result_extent(ptrs).second;
    return volume(shp) < direct_conv_threshold ? conv_direct(arrays) : conv_fft(arrays);
}

double sum_modM_coeffs(const CoefficientArray& G, const std::vector<int>& x_exponents, int M,
                       const std::vector<int>& y_shift) {
    if (M < 1) throw std::invalid_argument("M must be positive");
    const int nx = int(x_exponents.size());
    const int n = G.dims();
    if (nx > n) throw std::invalid_argument("too many X exponents");
    const int ny = n - nx;
    if (!y_shift.empty() && int(y_shift.size()) != ny) throw std::invalid_argument("Y shift rank mismatch");
    const auto st = G.strides();
    std::size_t base = 0;
    for (int d = 0; d < nx; ++d) {
        int k = x_exponents[d] - G.offset[d];
        if (k < 0 || k >= G.shape[d]) return 0.0;
        base += std::size_t(k) * st[d];
    }
    // Per Y dimension, the stored indices whose exponent meets the residue condition.
    std::vector<std::vector<std::size_t>> pick(ny);
    for (int d = 0; d < ny; ++d) {
        const int dd = nx + d;
        const int s = y_shift.empty() ? 0 : y_shift[d];
        for (int k = 0; k < G.shape[dd]; ++k) {
            int y = G.offset[dd] + k + s;
            if (((y % M) + M) % M == 0) pick[d].push_back(std::size_t(k) * st[dd]);
        }
        if (pick[d].empty()) return 0.0;
    }
    if (ny == 0) return G.values[base];
    double sum = 0.0;
    std::vector<std::size_t> it(ny, 0);
    while (true) {
        std::size_t lin = base;
        for (int d = 0; d < ny; ++d) lin += pick[d][it[d]];
        sum += G.values[lin];
        int d = ny - 1;
        for (; d >= 0; --d) {
            if (++it[d] < pick[d].size()) break;
            it[d] = 0;
        }
        if (d < 0) break;
    }
    return sum;
}

ValueGrad evaluate_product(const FactorProduct& term, const ProbabilityMatrix& P, bool with_grad, ConvPath path) {
    if (term.factors.empty()) throw std::invalid_argument("empty factor product");
    const int n = term.cycle_dims();
    const int M = P.cols;
    std::vector<CoefficientArray> F;
    std::vector<const CoefficientArray*> all;
    for (const auto& f : term.factors) {
        if (int(f.power.size()) != n) throw std::invalid_argument("inconsistent factor ranks");
        if (f.mult < 1) throw std::invalid_argument("factor multiplicity must be positive");
        F.push_back(coupling_array(P, f.power));
    }
    for (std::size_t k = 0; k < F.size(); ++k)
        for (int t = 0; t < term.factors[k].mult; ++t) all.push_back(&F[k]);
    auto [off, shp] = result_extent(all);
    const bool use_fft =
        path == ConvPath::transform || (path == ConvPath::automatic && volume(shp) >= direct_conv_threshold);

    const std::vector<int> zero_x(n, 0);
    ValueGrad out;
    std::vector<CoefficientArray> reduced(F.size());

    if (use_fft) {
        SpectralProduct sp(shp);
        std::vector<std::unique_ptr<ComplexBuf>> spec;
        for (const auto& f : F) spec.push_back(sp.forward(f));
        auto product_without = [&](int skip) {
            auto acc = std::make_unique<ComplexBuf>(sp.complex_size());
            std::fill(acc->data(), acc->data() + acc->n, std::complex<double>(1.0, 0.0));
            std::vector<int> o = off;
            for (std::size_t k = 0; k < F.size(); ++k) {
                int times = term.factors[k].mult - (int(k) == skip ? 1 : 0);
                multiply_into(*acc, *spec[k], times);
                if (int(k) == skip)
                    for (int d = 0; d < 2 * n; ++d) o[d] -= F[k].offset[d];
            }
            return sp.inverse(*acc, o);
        };
        out.value = term.weight * sum_modM_coeffs(product_without(-1), zero_x, M);
        if (with_grad)
            for (std::size_t k = 0; k < F.size(); ++k) reduced[k] = product_without(int(k));
    } else {
        std::vector<CoefficientArray> list;
        for (const auto* a : all) list.push_back(*a);
        out.value = term.weight * sum_modM_coeffs(conv_direct(list), zero_x, M);
        if (with_grad)
            for (std::size_t k = 0; k < F.size(); ++k) {
                std::vector<CoefficientArray> rest;
                bool skipped = false;
                for (const auto* a : all) {
                    if (!skipped && a == &F[k]) {
                        skipped = true;
                        continue;
                    }
                    rest.push_back(*a);
                }
                if (rest.empty()) {
                    CoefficientArray one(std::vector<int>(2 * n, 0), std::vector<int>(2 * n, 1));
                    one.values[0] = 1.0;
                    reduced[k] = one;
                } else {
                    reduced[k] = conv_direct(rest);
                }
            }
    }

    if (with_grad) {
        out.grad = ProbabilityMatrix(P.rows, P.cols, 0.0);
        std::vector<int> x(n), ys(n);
        for (int i = 0; i < P.rows; ++i)
            for (int j = 0; j < P.cols; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < F.size(); ++k) {
                    const auto& a = term.factors[k].power;
                    for (int d = 0; d < n; ++d) {
                        x[d] = -a[d] * i;
                        ys[d] = a[d] * j;
                    }
                    g += term.factors[k].mult * sum_modM_coeffs(reduced[k], x, M, ys);
                }
                out.grad(i, j) = term.weight * g;
            }
    }
    return out;
}

}  // namespace mdsc
