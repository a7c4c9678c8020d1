#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartmpc/rng.hpp"

namespace cartmpc::nn {

struct Tensor {
    std::vector<size_t> shape;
    std::vector<double> v;

    static Tensor zeros(std::vector<size_t> shape_) {
        Tensor t;
        t.shape = std::move(shape_);
        size_t n = 1;
        for (size_t s : t.shape) n *= s;
        t.v.assign(n, 0.0);
        return t;
    }
    size_t numel() const { return v.size(); }
    bool all_finite() const;
};

enum class Activation { Relu, Tanh };

struct MlpSpec {
    std::vector<int> widths;  // L+1 entries for L weight layers
    Activation activation = Activation::Relu;

    int layer_count() const { return static_cast<int>(widths.size()) - 1; }
    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }
};

struct GruSpec {
    int input = 0;
    int hidden = 64;
    int output = 1;
    int seq_len = 20;
};

// Per-feature affine normalization, frozen at training time.
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> inv_std;

    static Normalizer fit(const double* X, size_t rows, size_t dim);
    static Normalizer identity(size_t dim);
    void apply(double* x, size_t rows) const;          // in place, row-major
    void unapply(double* x, size_t rows) const;
    size_t dim() const { return mean.size(); }
};

// Fully connected net with a linear head. Parameters live in one flat vector
// [W1|b1|...|WL|bL]; gradients share the layout.
class Mlp {
public:
    Mlp() = default;
    Mlp(MlpSpec spec, uint64_t seed);

    const MlpSpec& spec() const { return spec_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    size_t param_count() const { return params_.size(); }

    // Batch inference, X row-major [batch x in] -> Y [batch x out].
    // Thread-safe for concurrent callers.
    void forward(const double* X, int batch, double* Y) const;

    // Sum of squared errors against T [batch x out] plus gradients of that
    // sum (unscaled, so chunked batches combine exactly). `grad` must be
    // param-sized and zeroed by the caller.
    double sse_and_grad(const double* X, const double* T, int batch,
                        std::vector<double>& grad) const;

    void save(std::ostream& os) const;
    static Mlp load(std::istream& is);

private:
    MlpSpec spec_;
    std::vector<double> params_;
    std::vector<size_t> w_off_, b_off_;

    void init_offsets();
};

// Single-layer gated recurrent cell over fixed-length sequences with a
// linear readout of the final hidden state.
class Gru {
public:
    Gru() = default;
    Gru(GruSpec spec, uint64_t seed);

    const GruSpec& spec() const { return spec_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    size_t param_count() const { return params_.size(); }

    // X row-major [batch x seq_len x input] -> Y [batch x output].
    void forward(const double* X, int batch, double* Y) const;

    double sse_and_grad(const double* X, const double* T, int batch,
                        std::vector<double>& grad) const;

    void save(std::ostream& os) const;
    static Gru load(std::istream& is);

private:
    GruSpec spec_;
    std::vector<double> params_;
    // Offsets: Wz Uz bz | Wr Ur br | Wh Uh bh | Wo bo
    size_t off_[11] = {};

    void init_offsets();
};

struct AdamParams {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamParams hyper;
    std::vector<double> m, v;
    int64_t t = 0;

    explicit AdamState(size_t n = 0, AdamParams hp = {})
        : hyper(hp), m(n, 0.0), v(n, 0.0) {}
};

// Standard Adam update with bias correction.
void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state);

// Little-endian binary helpers shared by every checkpoint format.
void write_u32(std::ostream& os, uint32_t x);
void write_u64(std::ostream& os, uint64_t x);
void write_f64(std::ostream& os, double x);
void write_vec(std::ostream& os, const std::vector<double>& v);
uint32_t read_u32(std::istream& is);
uint64_t read_u64(std::istream& is);
double read_f64(std::istream& is);
std::vector<double> read_vec(std::istream& is);
void write_normalizer(std::ostream& os, const Normalizer& n);
Normalizer read_normalizer(std::istream& is);

}  // namespace cartmpc::nn
