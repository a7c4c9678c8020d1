#include "cartmpc/nnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace cartmpc::nn {

bool Tensor::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Normalizer Normalizer::fit(const double* X, size_t rows, size_t dim) {
    Normalizer n;
    n.mean.assign(dim, 0.0);
    n.inv_std.assign(dim, 1.0);
    if (rows == 0) return n;
    for (size_t r = 0; r < rows; ++r)
        for (size_t d = 0; d < dim; ++d) n.mean[d] += X[r * dim + d];
    for (size_t d = 0; d < dim; ++d) n.mean[d] /= static_cast<double>(rows);
    std::vector<double> var(dim, 0.0);
    for (size_t r = 0; r < rows; ++r)
        for (size_t d = 0; d < dim; ++d) {
            const double c = X[r * dim + d] - n.mean[d];
            var[d] += c * c;
        }
    for (size_t d = 0; d < dim; ++d) {
        const double sd = std::sqrt(var[d] / static_cast<double>(rows));
        n.inv_std[d] = sd > 1e-8 ? 1.0 / sd : 1.0;
    }
    return n;
}

Normalizer Normalizer::identity(size_t dim) {
    Normalizer n;
    n.mean.assign(dim, 0.0);
    n.inv_std.assign(dim, 1.0);
    return n;
}

void Normalizer::apply(double* x, size_t rows) const {
    const size_t d = dim();
    for (size_t r = 0; r < rows; ++r)
        for (size_t k = 0; k < d; ++k) x[r * d + k] = (x[r * d + k] - mean[k]) * inv_std[k];
}

void Normalizer::unapply(double* x, size_t rows) const {
    const size_t d = dim();
    for (size_t r = 0; r < rows; ++r)
        for (size_t k = 0; k < d; ++k) x[r * d + k] = x[r * d + k] / inv_std[k] + mean[k];
}

namespace {

// Y[b,o] += X[b,i] * W[i,o]
void gemm_xw(const double* X, const double* W, double* Y, int B, int I, int O) {
    for (int b = 0; b < B; ++b) {
        const double* x = X + static_cast<size_t>(b) * I;
        double* y = Y + static_cast<size_t>(b) * O;
        for (int i = 0; i < I; ++i) {
            const double a = x[i];
            if (a == 0.0) continue;
            const double* w = W + static_cast<size_t>(i) * O;
            for (int o = 0; o < O; ++o) y[o] += a * w[o];
        }
    }
}

// dX[b,i] = sum_o dY[b,o] * W[i,o]
void gemm_dyw(const double* dY, const double* W, double* dX, int B, int I, int O) {
    for (int b = 0; b < B; ++b) {
        const double* dy = dY + static_cast<size_t>(b) * O;
        double* dx = dX + static_cast<size_t>(b) * I;
        for (int i = 0; i < I; ++i) {
            const double* w = W + static_cast<size_t>(i) * O;
            double s = 0.0;
            for (int o = 0; o < O; ++o) s += dy[o] * w[o];
            dx[i] += s;
        }
    }
}

// dW[i,o] += sum_b X[b,i] * dY[b,o]
void gemm_xtdy(const double* X, const double* dY, double* dW, int B, int I, int O) {
    for (int b = 0; b < B; ++b) {
        const double* x = X + static_cast<size_t>(b) * I;
        const double* dy = dY + static_cast<size_t>(b) * O;
        for (int i = 0; i < I; ++i) {
            const double a = x[i];
            if (a == 0.0) continue;
            double* dw = dW + static_cast<size_t>(i) * O;
            for (int o = 0; o < O; ++o) dw[o] += a * dy[o];
        }
    }
}

void add_bias(double* Y, const double* b, int B, int O) {
    for (int r = 0; r < B; ++r)
        for (int o = 0; o < O; ++o) Y[static_cast<size_t>(r) * O + o] += b[o];
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Mlp::Mlp(MlpSpec spec, uint64_t seed) : spec_(std::move(spec)) {
    if (spec_.widths.size() < 2) throw std::invalid_argument("mlp needs >= 1 weight layer");
    for (int w : spec_.widths)
        if (w < 1) throw std::invalid_argument("mlp widths must be >= 1");
    init_offsets();
    Rng rng(seed);
    for (int l = 0; l < spec_.layer_count(); ++l) {
        const int fan_in = spec_.widths[static_cast<size_t>(l)];
        const int fan_out = spec_.widths[static_cast<size_t>(l) + 1];
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        double* W = params_.data() + w_off_[static_cast<size_t>(l)];
        for (int i = 0; i < fan_in * fan_out; ++i) W[i] = rng.uniform(-s, s);
        // biases start at zero
    }
}

void Mlp::init_offsets() {
    w_off_.clear();
    b_off_.clear();
    size_t off = 0;
    for (int l = 0; l < spec_.layer_count(); ++l) {
        const size_t in = static_cast<size_t>(spec_.widths[static_cast<size_t>(l)]);
        const size_t out = static_cast<size_t>(spec_.widths[static_cast<size_t>(l) + 1]);
        w_off_.push_back(off);
        off += in * out;
        b_off_.push_back(off);
        off += out;
    }
    params_.assign(off, 0.0);
}

void Mlp::forward(const double* X, int batch, double* Y) const {
    const int L = spec_.layer_count();
    std::vector<double> cur(X, X + static_cast<size_t>(batch) * spec_.input_dim());
    std::vector<double> next;
    for (int l = 0; l < L; ++l) {
        const int I = spec_.widths[static_cast<size_t>(l)];
        const int O = spec_.widths[static_cast<size_t>(l) + 1];
        next.assign(static_cast<size_t>(batch) * O, 0.0);
        gemm_xw(cur.data(), params_.data() + w_off_[static_cast<size_t>(l)], next.data(),
                batch, I, O);
        add_bias(next.data(), params_.data() + b_off_[static_cast<size_t>(l)], batch, O);
        if (l + 1 < L) {
            if (spec_.activation == Activation::Relu) {
                for (double& x : next) x = x > 0.0 ? x : 0.0;
            } else {
                for (double& x : next) x = std::tanh(x);
            }
        }
        cur.swap(next);
    }
    std::memcpy(Y, cur.data(), sizeof(double) * static_cast<size_t>(batch) * spec_.output_dim());
}

double Mlp::sse_and_grad(const double* X, const double* T, int batch,
                         std::vector<double>& grad) const {
    if (grad.size() != params_.size()) throw std::invalid_argument("grad buffer size mismatch");
    const int L = spec_.layer_count();

    // Forward with cached post-activation outputs per layer.
    std::vector<std::vector<double>> acts(static_cast<size_t>(L) + 1);
    acts[0].assign(X, X + static_cast<size_t>(batch) * spec_.input_dim());
    for (int l = 0; l < L; ++l) {
        const int I = spec_.widths[static_cast<size_t>(l)];
        const int O = spec_.widths[static_cast<size_t>(l) + 1];
        auto& out = acts[static_cast<size_t>(l) + 1];
        out.assign(static_cast<size_t>(batch) * O, 0.0);
        gemm_xw(acts[static_cast<size_t>(l)].data(),
                params_.data() + w_off_[static_cast<size_t>(l)], out.data(), batch, I, O);
        add_bias(out.data(), params_.data() + b_off_[static_cast<size_t>(l)], batch, O);
        if (l + 1 < L) {
            if (spec_.activation == Activation::Relu) {
                for (double& x : out) x = x > 0.0 ? x : 0.0;
            } else {
                for (double& x : out) x = std::tanh(x);
            }
        }
    }

    const int D = spec_.output_dim();
    const auto& Y = acts[static_cast<size_t>(L)];
    double sse = 0.0;
    std::vector<double> delta(static_cast<size_t>(batch) * D);
    for (size_t k = 0; k < delta.size(); ++k) {
        const double r = Y[k] - T[k];
        sse += r * r;
        delta[k] = 2.0 * r;  // d(sse)/dy
    }
    if (!std::isfinite(sse)) throw std::runtime_error("non-finite loss");

    std::vector<double> d_prev;
    for (int l = L - 1; l >= 0; --l) {
        const int I = spec_.widths[static_cast<size_t>(l)];
        const int O = spec_.widths[static_cast<size_t>(l) + 1];
        const auto& in_act = acts[static_cast<size_t>(l)];
        gemm_xtdy(in_act.data(), delta.data(), grad.data() + w_off_[static_cast<size_t>(l)],
                  batch, I, O);
        double* db = grad.data() + b_off_[static_cast<size_t>(l)];
        for (int b = 0; b < batch; ++b)
            for (int o = 0; o < O; ++o) db[o] += delta[static_cast<size_t>(b) * O + o];
        if (l > 0) {
            d_prev.assign(static_cast<size_t>(batch) * I, 0.0);
            gemm_dyw(delta.data(), params_.data() + w_off_[static_cast<size_t>(l)],
                     d_prev.data(), batch, I, O);
            // Through the activation of layer l-1 (stored post-activation).
            if (spec_.activation == Activation::Relu) {
                for (size_t k = 0; k < d_prev.size(); ++k)
                    if (in_act[k] <= 0.0) d_prev[k] = 0.0;
            } else {
                for (size_t k = 0; k < d_prev.size(); ++k)
                    d_prev[k] *= 1.0 - in_act[k] * in_act[k];
            }
            delta.swap(d_prev);
        }
    }
    return sse;
}

Gru::Gru(GruSpec spec, uint64_t seed) : spec_(spec) {
    if (spec_.input < 1 || spec_.hidden < 1 || spec_.output < 1 || spec_.seq_len < 1)
        throw std::invalid_argument("gru spec dims must be >= 1");
    init_offsets();
    Rng rng(seed);
    const int in = spec_.input, h = spec_.hidden, out = spec_.output;
    auto fill = [&](size_t off, int fan_in, int count) {
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int i = 0; i < count; ++i) params_[off + static_cast<size_t>(i)] = rng.uniform(-s, s);
    };
    fill(off_[0], in, in * h);   // Wz
    fill(off_[1], h, h * h);     // Uz
    fill(off_[3], in, in * h);   // Wr
    fill(off_[4], h, h * h);     // Ur
    fill(off_[6], in, in * h);   // Wh
    fill(off_[7], h, h * h);     // Uh
    fill(off_[9], h, h * out);   // Wo
}

void Gru::init_offsets() {
    const size_t in = static_cast<size_t>(spec_.input);
    const size_t h = static_cast<size_t>(spec_.hidden);
    const size_t out = static_cast<size_t>(spec_.output);
    size_t off = 0;
    const size_t sizes[11] = {in * h, h * h, h,   // z
                              in * h, h * h, h,   // r
                              in * h, h * h, h,   // hhat
                              h * out, out};      // head
    for (int k = 0; k < 11; ++k) {
        off_[k] = off;
        off += sizes[k];
    }
    params_.assign(off, 0.0);
}

void Gru::forward(const double* X, int batch, double* Y) const {
    const int in = spec_.input, h = spec_.hidden, out = spec_.output, T = spec_.seq_len;
    const size_t bh = static_cast<size_t>(batch) * h;
    std::vector<double> hidden(bh, 0.0), az(bh), ar(bh), ah(bh), rh(bh);
    for (int t = 0; t < T; ++t) {
        std::fill(az.begin(), az.end(), 0.0);
        std::fill(ar.begin(), ar.end(), 0.0);
        std::fill(ah.begin(), ah.end(), 0.0);
        // Batch rows are strided by T*in in X; gather per-step inputs.
        for (int b = 0; b < batch; ++b) {
            const double* x = X + (static_cast<size_t>(b) * T + t) * in;
            const double* hp = hidden.data() + static_cast<size_t>(b) * h;
            double* pz = az.data() + static_cast<size_t>(b) * h;
            double* pr = ar.data() + static_cast<size_t>(b) * h;
            double* ph = ah.data() + static_cast<size_t>(b) * h;
            gemm_xw(x, params_.data() + off_[0], pz, 1, in, h);
            gemm_xw(hp, params_.data() + off_[1], pz, 1, h, h);
            gemm_xw(x, params_.data() + off_[3], pr, 1, in, h);
            gemm_xw(hp, params_.data() + off_[4], pr, 1, h, h);
            gemm_xw(x, params_.data() + off_[6], ph, 1, in, h);
        }
        add_bias(az.data(), params_.data() + off_[2], batch, h);
        add_bias(ar.data(), params_.data() + off_[5], batch, h);
        for (size_t k = 0; k < bh; ++k) {
            az[k] = sigmoid(az[k]);
            ar[k] = sigmoid(ar[k]);
            rh[k] = ar[k] * hidden[k];
        }
        gemm_xw(rh.data(), params_.data() + off_[7], ah.data(), batch, h, h);
        add_bias(ah.data(), params_.data() + off_[8], batch, h);
        for (size_t k = 0; k < bh; ++k) {
            const double hh = std::tanh(ah[k]);
            hidden[k] = (1.0 - az[k]) * hidden[k] + az[k] * hh;
        }
    }
    std::fill(Y, Y + static_cast<size_t>(batch) * out, 0.0);
    gemm_xw(hidden.data(), params_.data() + off_[9], Y, batch, h, out);
    add_bias(Y, params_.data() + off_[10], batch, out);
}

double Gru::sse_and_grad(const double* X, const double* T_target, int batch,
                         std::vector<double>& grad) const {
    if (grad.size() != params_.size()) throw std::invalid_argument("grad buffer size mismatch");
    const int in = spec_.input, h = spec_.hidden, out = spec_.output, T = spec_.seq_len;
    const size_t bh = static_cast<size_t>(batch) * h;

    // Forward pass with full caches.
    std::vector<std::vector<double>> hs(static_cast<size_t>(T) + 1),
        zs(static_cast<size_t>(T)), rs(static_cast<size_t>(T)), hh(static_cast<size_t>(T)),
        rhs(static_cast<size_t>(T));
    hs[0].assign(bh, 0.0);
    std::vector<double> az(bh), ar(bh), ah(bh);
    for (int t = 0; t < T; ++t) {
        std::fill(az.begin(), az.end(), 0.0);
        std::fill(ar.begin(), ar.end(), 0.0);
        std::fill(ah.begin(), ah.end(), 0.0);
        const auto& hp = hs[static_cast<size_t>(t)];
        for (int b = 0; b < batch; ++b) {
            const double* x = X + (static_cast<size_t>(b) * T + t) * in;
            const double* hpb = hp.data() + static_cast<size_t>(b) * h;
            gemm_xw(x, params_.data() + off_[0], az.data() + static_cast<size_t>(b) * h, 1, in, h);
            gemm_xw(hpb, params_.data() + off_[1], az.data() + static_cast<size_t>(b) * h, 1, h, h);
            gemm_xw(x, params_.data() + off_[3], ar.data() + static_cast<size_t>(b) * h, 1, in, h);
            gemm_xw(hpb, params_.data() + off_[4], ar.data() + static_cast<size_t>(b) * h, 1, h, h);
            gemm_xw(x, params_.data() + off_[6], ah.data() + static_cast<size_t>(b) * h, 1, in, h);
        }
        add_bias(az.data(), params_.data() + off_[2], batch, h);
        add_bias(ar.data(), params_.data() + off_[5], batch, h);
        zs[static_cast<size_t>(t)].resize(bh);
        rs[static_cast<size_t>(t)].resize(bh);
        rhs[static_cast<size_t>(t)].resize(bh);
        for (size_t k = 0; k < bh; ++k) {
            zs[static_cast<size_t>(t)][k] = sigmoid(az[k]);
            rs[static_cast<size_t>(t)][k] = sigmoid(ar[k]);
            rhs[static_cast<size_t>(t)][k] = rs[static_cast<size_t>(t)][k] * hp[k];
        }
        gemm_xw(rhs[static_cast<size_t>(t)].data(), params_.data() + off_[7], ah.data(), batch, h, h);
        add_bias(ah.data(), params_.data() + off_[8], batch, h);
        hh[static_cast<size_t>(t)].resize(bh);
        hs[static_cast<size_t>(t) + 1].resize(bh);
        for (size_t k = 0; k < bh; ++k) {
            const double hhk = std::tanh(ah[k]);
            hh[static_cast<size_t>(t)][k] = hhk;
            hs[static_cast<size_t>(t) + 1][k] =
                (1.0 - zs[static_cast<size_t>(t)][k]) * hp[k] + zs[static_cast<size_t>(t)][k] * hhk;
        }
    }
    std::vector<double> Y(static_cast<size_t>(batch) * out, 0.0);
    gemm_xw(hs[static_cast<size_t>(T)].data(), params_.data() + off_[9], Y.data(), batch, h, out);
    add_bias(Y.data(), params_.data() + off_[10], batch, out);

    double sse = 0.0;
    std::vector<double> dY(static_cast<size_t>(batch) * out);
    for (size_t k = 0; k < dY.size(); ++k) {
        const double r = Y[k] - T_target[k];
        sse += r * r;
        dY[k] = 2.0 * r;
    }
    if (!std::isfinite(sse)) throw std::runtime_error("non-finite loss");

    // Head gradients.
    gemm_xtdy(hs[static_cast<size_t>(T)].data(), dY.data(), grad.data() + off_[9], batch, h, out);
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < out; ++o)
            grad[off_[10] + static_cast<size_t>(o)] += dY[static_cast<size_t>(b) * out + o];

    std::vector<double> dh(bh, 0.0);
    gemm_dyw(dY.data(), params_.data() + off_[9], dh.data(), batch, h, out);

    std::vector<double> daz(bh), dar(bh), dah(bh), drh(bh), dh_prev(bh);
    for (int t = T - 1; t >= 0; --t) {
        const auto& hp = hs[static_cast<size_t>(t)];
        const auto& z = zs[static_cast<size_t>(t)];
        const auto& r = rs[static_cast<size_t>(t)];
        const auto& hht = hh[static_cast<size_t>(t)];
        for (size_t k = 0; k < bh; ++k) {
            dah[k] = dh[k] * z[k] * (1.0 - hht[k] * hht[k]);
            daz[k] = dh[k] * (hht[k] - hp[k]) * z[k] * (1.0 - z[k]);
            dh_prev[k] = dh[k] * (1.0 - z[k]);
        }
        // hhat pre-activation gradients.
        gemm_xtdy(rhs[static_cast<size_t>(t)].data(), dah.data(), grad.data() + off_[7], batch, h, h);
        for (int b = 0; b < batch; ++b)
            for (int o = 0; o < h; ++o)
                grad[off_[8] + static_cast<size_t>(o)] += dah[static_cast<size_t>(b) * h + o];
        std::fill(drh.begin(), drh.end(), 0.0);
        gemm_dyw(dah.data(), params_.data() + off_[7], drh.data(), batch, h, h);
        for (size_t k = 0; k < bh; ++k) {
            dar[k] = drh[k] * hp[k] * r[k] * (1.0 - r[k]);
            dh_prev[k] += drh[k] * r[k];
        }
        // Per-sample input/update gate gradients.
        for (int b = 0; b < batch; ++b) {
            const double* x = X + (static_cast<size_t>(b) * T + t) * in;
            const double* hpb = hp.data() + static_cast<size_t>(b) * h;
            const double* dazb = daz.data() + static_cast<size_t>(b) * h;
            const double* darb = dar.data() + static_cast<size_t>(b) * h;
            const double* dahb = dah.data() + static_cast<size_t>(b) * h;
            gemm_xtdy(x, dazb, grad.data() + off_[0], 1, in, h);
            gemm_xtdy(hpb, dazb, grad.data() + off_[1], 1, h, h);
            gemm_xtdy(x, darb, grad.data() + off_[3], 1, in, h);
            gemm_xtdy(hpb, darb, grad.data() + off_[4], 1, h, h);
            gemm_xtdy(x, dahb, grad.data() + off_[6], 1, in, h);
            double* dhp = dh_prev.data() + static_cast<size_t>(b) * h;
            gemm_dyw(dazb, params_.data() + off_[1], dhp, 1, h, h);
            gemm_dyw(darb, params_.data() + off_[4], dhp, 1, h, h);
        }
        for (int o = 0; o < h; ++o) {
            double sz = 0.0, sr = 0.0;
            for (int b = 0; b < batch; ++b) {
                sz += daz[static_cast<size_t>(b) * h + o];
                sr += dar[static_cast<size_t>(b) * h + o];
            }
            grad[off_[2] + static_cast<size_t>(o)] += sz;
            grad[off_[5] + static_cast<size_t>(o)] += sr;
        }
        dh.swap(dh_prev);
    }
    return sse;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state) {
    if (params.size() != grad.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam size mismatch");
    state.t += 1;
    const double b1 = state.hyper.beta1, b2 = state.hyper.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    for (size_t i = 0; i < params.size(); ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.hyper.lr * mhat / (std::sqrt(vhat) + state.hyper.eps);
    }
}

// ---------------------------------------------------------------------------
// Binary I/O (little-endian; this code targets little-endian hosts).

void write_u32(std::ostream& os, uint32_t x) { os.write(reinterpret_cast<const char*>(&x), 4); }
void write_u64(std::ostream& os, uint64_t x) { os.write(reinterpret_cast<const char*>(&x), 8); }
void write_f64(std::ostream& os, double x) { os.write(reinterpret_cast<const char*>(&x), 8); }

void write_vec(std::ostream& os, const std::vector<double>& v) {
    write_u64(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

uint32_t read_u32(std::istream& is) {
    uint32_t x = 0;
    is.read(reinterpret_cast<char*>(&x), 4);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return x;
}
uint64_t read_u64(std::istream& is) {
    uint64_t x = 0;
    is.read(reinterpret_cast<char*>(&x), 8);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return x;
}
double read_f64(std::istream& is) {
    double x = 0;
    is.read(reinterpret_cast<char*>(&x), 8);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return x;
}
std::vector<double> read_vec(std::istream& is) {
    const uint64_t n = read_u64(is);
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("truncated checkpoint");
    return v;
}

void write_normalizer(std::ostream& os, const Normalizer& n) {
    write_vec(os, n.mean);
    write_vec(os, n.inv_std);
}
Normalizer read_normalizer(std::istream& is) {
    Normalizer n;
    n.mean = read_vec(is);
    n.inv_std = read_vec(is);
    return n;
}

constexpr uint32_t kMlpMagic = 0x4d4c5031;  // "MLP1"
constexpr uint32_t kGruMagic = 0x47525531;  // "GRU1"

void Mlp::save(std::ostream& os) const {
    write_u32(os, kMlpMagic);
    write_u32(os, static_cast<uint32_t>(spec_.widths.size()));
    for (int w : spec_.widths) write_u32(os, static_cast<uint32_t>(w));
    write_u32(os, spec_.activation == Activation::Relu ? 0u : 1u);
    write_vec(os, params_);
}

Mlp Mlp::load(std::istream& is) {
    if (read_u32(is) != kMlpMagic) throw std::runtime_error("bad mlp checkpoint magic");
    Mlp m;
    const uint32_t n = read_u32(is);
    m.spec_.widths.resize(n);
    for (uint32_t i = 0; i < n; ++i) m.spec_.widths[i] = static_cast<int>(read_u32(is));
    m.spec_.activation = read_u32(is) == 0u ? Activation::Relu : Activation::Tanh;
    m.init_offsets();
    const size_t expected = m.params_.size();
    m.params_ = read_vec(is);
    if (m.params_.size() != expected) throw std::runtime_error("mlp param size mismatch");
    return m;
}

void Gru::save(std::ostream& os) const {
    write_u32(os, kGruMagic);
    write_u32(os, static_cast<uint32_t>(spec_.input));
    write_u32(os, static_cast<uint32_t>(spec_.hidden));
    write_u32(os, static_cast<uint32_t>(spec_.output));
    write_u32(os, static_cast<uint32_t>(spec_.seq_len));
    write_vec(os, params_);
}

Gru Gru::load(std::istream& is) {
    if (read_u32(is) != kGruMagic) throw std::runtime_error("bad gru checkpoint magic");
    GruSpec s;
    s.input = static_cast<int>(read_u32(is));
    s.hidden = static_cast<int>(read_u32(is));
    s.output = static_cast<int>(read_u32(is));
    s.seq_len = static_cast<int>(read_u32(is));
    Gru g;
    g.spec_ = s;
    g.init_offsets();
    const size_t expected = g.params_.size();
    g.params_ = read_vec(is);
    if (g.params_.size() != expected) throw std::runtime_error("gru param size mismatch");
    return g;
}

}  // namespace cartmpc::nn
