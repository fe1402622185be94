#pragma once

/// Supervised-learning benchmark regressors: a small fully-connected network
/// trained with the adaptive-moment update, and a bootstrap-aggregated
/// regression forest. Both map observed KPIs to resource allocations and are
/// retrained from scratch at landmark episodes as the profiling dataset grows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "vnfprof/domain.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/offline.hpp"
#include "vnfprof/rng.hpp"

namespace vnfprof {

// ---------------------------------------------------------------------------
// Feature scaling and splitting

/// Per-column min/max of a fitted scaler; constant columns map to 0.
struct MinMaxScaler {
    std::vector<double> lo;
    std::vector<double> hi;

    void fit(const std::vector<std::vector<double>>& rows) {
        if (rows.empty())
            throw SizeError("minmax: empty dataset");
        const std::size_t d = rows.front().size();
        lo.assign(d, std::numeric_limits<double>::infinity());
        hi.assign(d, -std::numeric_limits<double>::infinity());
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) {
                lo[j] = std::min(lo[j], r[j]);
                hi[j] = std::max(hi[j], r[j]);
            }
    }

    std::vector<double> apply(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            out[j] = hi[j] > lo[j] ? (row[j] - lo[j]) / (hi[j] - lo[j]) : 0.0;
        return out;
    }

    std::vector<double> invert(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            out[j] = lo[j] + row[j] * (hi[j] - lo[j]);
        return out;
    }
};

/// Scale every column of `rows` to [0, 1]; returns the scaled copy and the
/// fitted scaler for inversion.
inline std::pair<std::vector<std::vector<double>>, MinMaxScaler>
minmax_scale(const std::vector<std::vector<double>>& rows) {
    MinMaxScaler scaler;
    scaler.fit(rows);
    std::vector<std::vector<double>> scaled;
    scaled.reserve(rows.size());
    for (const auto& r : rows)
        scaled.push_back(scaler.apply(r));
    return {scaled, scaler};
}

/// Seeded shuffle-then-split into disjoint, exhaustive train/test index sets
/// at a 90:10 ratio.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_90_10(std::size_t n, std::uint64_t seed) {
    if (n < 10)
        throw SizeError("split_90_10: need at least 10 rows");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed, "split");
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    const std::size_t test = n / 10;
    std::vector<std::size_t> test_idx(idx.begin(), idx.begin() + test);
    std::vector<std::size_t> train_idx(idx.begin() + test, idx.end());
    return {train_idx, test_idx};
}

// ---------------------------------------------------------------------------
// Fully-connected regressor

struct MlpSpec {
    std::vector<int> layers = {4, 512, 256, 256, 3}; // input, hidden..., output
    int epochs = 500;
    int batch_size = 16;
    double learning_rate = 1e-4;

    void validate() const {
        if (layers.size() < 2)
            throw ValidationError("mlp: need at least input and output layers");
        for (int w : layers)
            if (w <= 0)
                throw ValidationError("mlp: layer widths must be positive");
        if (epochs <= 0 || batch_size <= 0 || learning_rate <= 0.0)
            throw ValidationError("mlp: training parameters must be positive");
    }
};

inline MlpSpec default_mlp_spec(VnfKind kind) {
    MlpSpec s;
    switch (kind) {
    case VnfKind::SnortInline: s.layers = {4, 512, 256, 256, 3}; break;
    case VnfKind::SnortPassive: s.layers = {4, 256, 128, 128, 3}; break;
    case VnfKind::VFw: s.layers = {4, 128, 128, 128, 3}; break;
    }
    return s;
}

namespace detail {

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

inline double selu(double x) {
    return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
}
inline double selu_grad(double x) {
    return x > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
}
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace detail

/// Scaled-exponential hidden activations, logistic outputs, mean-squared
/// loss, adaptive-moment updates. Inputs and targets are expected in [0, 1]
/// (min-max scaled); the logistic output keeps scaled predictions in (0, 1).
class Mlp {
public:
    Mlp(MlpSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
        spec_.validate();
        Rng rng(seed, "mlp-init");
        const std::size_t L = spec_.layers.size() - 1;
        w_.resize(L);
        b_.resize(L);
        for (std::size_t l = 0; l < L; ++l) {
            const int in = spec_.layers[l];
            const int out = spec_.layers[l + 1];
            w_[l].resize(static_cast<std::size_t>(in) * out);
            b_[l].assign(out, 0.0);
            const double stddev = 1.0 / std::sqrt(static_cast<double>(in));
            for (double& x : w_[l])
                x = rng.gaussian(0.0, stddev);
        }
        init_adam();
    }

    const MlpSpec& spec() const { return spec_; }

    /// Mini-batch training over the whole set for spec().epochs epochs.
    void train(const std::vector<std::vector<double>>& x,
               const std::vector<std::vector<double>>& y, std::uint64_t seed) {
        if (x.empty() || x.size() != y.size())
            throw SizeError("mlp train: empty or mismatched training set");
        Rng rng(seed, "mlp-batch");
        std::vector<std::size_t> order(x.size());
        std::iota(order.begin(), order.end(), 0);

        for (int epoch = 0; epoch < spec_.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng.engine());
            for (std::size_t start = 0; start < order.size();
                 start += spec_.batch_size) {
                const std::size_t end =
                    std::min(order.size(), start + spec_.batch_size);
                batch_x_.clear();
                batch_y_.clear();
                for (std::size_t i = start; i < end; ++i) {
                    batch_x_.push_back(&x[order[i]]);
                    batch_y_.push_back(&y[order[i]]);
                }
                backward();
                adam_step();
            }
        }
    }

    std::vector<double> predict(const std::vector<double>& x) const {
        std::vector<double> a(x);
        const std::size_t L = w_.size();
        for (std::size_t l = 0; l < L; ++l) {
            const int in = spec_.layers[l];
            const int out = spec_.layers[l + 1];
            std::vector<double> z(out);
            for (int j = 0; j < out; ++j) {
                const double* wr = &w_[l][static_cast<std::size_t>(j) * in];
                double acc = b_[l][j];
                for (int i = 0; i < in; ++i)
                    acc += wr[i] * a[i];
                z[j] = l + 1 == L ? detail::logistic(acc) : detail::selu(acc);
            }
            a = std::move(z);
        }
        return a;
    }

    /// Mean squared error over a batch.
    double loss(const std::vector<std::vector<double>>& x,
                const std::vector<std::vector<double>>& y) const {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t s = 0; s < x.size(); ++s) {
            const auto p = predict(x[s]);
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double d = p[j] - y[s][j];
                total += d * d;
                ++count;
            }
        }
        return total / static_cast<double>(count);
    }

    /// Analytic gradient of loss() for one batch, flattened in parameter
    /// order. Used directly by the finite-difference check.
    std::vector<double> gradients(const std::vector<std::vector<double>>& x,
                                  const std::vector<std::vector<double>>& y) {
        batch_x_.clear();
        batch_y_.clear();
        for (std::size_t s = 0; s < x.size(); ++s) {
            batch_x_.push_back(&x[s]);
            batch_y_.push_back(&y[s]);
        }
        backward();
        std::vector<double> flat;
        flat.reserve(parameter_count());
        for (std::size_t l = 0; l < w_.size(); ++l) {
            flat.insert(flat.end(), gw_[l].begin(), gw_[l].end());
            flat.insert(flat.end(), gb_[l].begin(), gb_[l].end());
        }
        return flat;
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < w_.size(); ++l)
            n += w_[l].size() + b_[l].size();
        return n;
    }

    double get_parameter(std::size_t flat_index) const {
        auto [l, is_bias, off] = locate(flat_index);
        return is_bias ? b_[l][off] : w_[l][off];
    }

    void set_parameter(std::size_t flat_index, double value) {
        auto [l, is_bias, off] = locate(flat_index);
        (is_bias ? b_[l][off] : w_[l][off]) = value;
    }

private:
    std::tuple<std::size_t, bool, std::size_t> locate(std::size_t flat) const {
        for (std::size_t l = 0; l < w_.size(); ++l) {
            if (flat < w_[l].size())
                return {l, false, flat};
            flat -= w_[l].size();
            if (flat < b_[l].size())
                return {l, true, flat};
            flat -= b_[l].size();
        }
        throw RangeError("mlp: parameter index out of range");
    }

    void init_adam() {
        mw_.resize(w_.size());
        vw_.resize(w_.size());
        mb_.resize(b_.size());
        vb_.resize(b_.size());
        gw_.resize(w_.size());
        gb_.resize(b_.size());
        for (std::size_t l = 0; l < w_.size(); ++l) {
            mw_[l].assign(w_[l].size(), 0.0);
            vw_[l].assign(w_[l].size(), 0.0);
            mb_[l].assign(b_[l].size(), 0.0);
            vb_[l].assign(b_[l].size(), 0.0);
            gw_[l].assign(w_[l].size(), 0.0);
            gb_[l].assign(b_[l].size(), 0.0);
        }
        adam_t_ = 0;
    }

    /// Forward + backward over the staged batch; fills gw_/gb_ with the
    /// gradient of the batch-mean squared error.
    void backward() {
        const std::size_t L = w_.size();
        const std::size_t B = batch_x_.size();
        const int out_dim = spec_.layers.back();

        act_.assign(L + 1, {});
        pre_.assign(L, {});
        act_[0].resize(B * spec_.layers[0]);
        for (std::size_t s = 0; s < B; ++s)
            std::copy(batch_x_[s]->begin(), batch_x_[s]->end(),
                      act_[0].begin() + s * spec_.layers[0]);

        for (std::size_t l = 0; l < L; ++l) {
            const int in = spec_.layers[l];
            const int out = spec_.layers[l + 1];
            pre_[l].resize(B * out);
            act_[l + 1].resize(B * out);
            for (std::size_t s = 0; s < B; ++s) {
                const double* a = &act_[l][s * in];
                double* z = &pre_[l][s * out];
                double* an = &act_[l + 1][s * out];
                for (int j = 0; j < out; ++j) {
                    const double* wr = &w_[l][static_cast<std::size_t>(j) * in];
                    double acc = b_[l][j];
                    for (int i = 0; i < in; ++i)
                        acc += wr[i] * a[i];
                    z[j] = acc;
                    an[j] = l + 1 == L ? detail::logistic(acc) : detail::selu(acc);
                }
            }
        }

        for (std::size_t l = 0; l < L; ++l) {
            std::fill(gw_[l].begin(), gw_[l].end(), 0.0);
            std::fill(gb_[l].begin(), gb_[l].end(), 0.0);
        }

        // dL/dz of the output layer: MSE averaged over batch x outputs,
        // through the logistic.
        const double norm = 1.0 / static_cast<double>(B * out_dim);
        delta_.resize(B * out_dim);
        for (std::size_t s = 0; s < B; ++s)
            for (int j = 0; j < out_dim; ++j) {
                const double a = act_[L][s * out_dim + j];
                const double y = (*batch_y_[s])[j];
                delta_[s * out_dim + j] = 2.0 * (a - y) * norm * a * (1.0 - a);
            }

        for (std::size_t l = L; l-- > 0;) {
            const int in = spec_.layers[l];
            const int out = spec_.layers[l + 1];
            for (std::size_t s = 0; s < B; ++s) {
                const double* d = &delta_[s * out];
                const double* a = &act_[l][s * in];
                for (int j = 0; j < out; ++j) {
                    const double dj = d[j];
                    if (dj == 0.0)
                        continue;
                    double* gr = &gw_[l][static_cast<std::size_t>(j) * in];
                    for (int i = 0; i < in; ++i)
                        gr[i] += dj * a[i];
                    gb_[l][j] += dj;
                }
            }
            if (l == 0)
                break;
            next_delta_.assign(B * in, 0.0);
            for (std::size_t s = 0; s < B; ++s) {
                const double* d = &delta_[s * out];
                double* nd = &next_delta_[s * in];
                for (int j = 0; j < out; ++j) {
                    const double dj = d[j];
                    if (dj == 0.0)
                        continue;
                    const double* wr = &w_[l][static_cast<std::size_t>(j) * in];
                    for (int i = 0; i < in; ++i)
                        nd[i] += dj * wr[i];
                }
                const double* z = &pre_[l - 1][s * in];
                for (int i = 0; i < in; ++i)
                    nd[i] *= detail::selu_grad(z[i]);
            }
            delta_.swap(next_delta_);
        }
    }

    void adam_step() {
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        ++adam_t_;
        const double c1 = 1.0 - std::pow(beta1, adam_t_);
        const double c2 = 1.0 - std::pow(beta2, adam_t_);
        for (std::size_t l = 0; l < w_.size(); ++l) {
            for (std::size_t i = 0; i < w_[l].size(); ++i) {
                const double g = gw_[l][i];
                mw_[l][i] = beta1 * mw_[l][i] + (1.0 - beta1) * g;
                vw_[l][i] = beta2 * vw_[l][i] + (1.0 - beta2) * g * g;
                w_[l][i] -= spec_.learning_rate * (mw_[l][i] / c1) /
                            (std::sqrt(vw_[l][i] / c2) + eps);
            }
            for (std::size_t i = 0; i < b_[l].size(); ++i) {
                const double g = gb_[l][i];
                mb_[l][i] = beta1 * mb_[l][i] + (1.0 - beta1) * g;
                vb_[l][i] = beta2 * vb_[l][i] + (1.0 - beta2) * g * g;
                b_[l][i] -= spec_.learning_rate * (mb_[l][i] / c1) /
                            (std::sqrt(vb_[l][i] / c2) + eps);
            }
        }
    }

    MlpSpec spec_;
    std::vector<std::vector<double>> w_, b_;
    std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
    std::vector<std::vector<double>> gw_, gb_;
    std::vector<const std::vector<double>*> batch_x_, batch_y_;
    std::vector<std::vector<double>> act_, pre_;
    std::vector<double> delta_, next_delta_;
    long adam_t_ = 0;
};

// ---------------------------------------------------------------------------
// Regression forest

struct RfSpec {
    int trees = 500;
    int max_depth = 0; // 0 = unbounded
    int min_leaf = 1;
    double feature_fraction = 1.0 / 3.0;

    void validate() const {
        if (trees <= 0 || min_leaf <= 0)
            throw ValidationError("rf: trees and min_leaf must be positive");
        if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
            throw ValidationError("rf: feature_fraction must be in (0, 1]");
    }
};

inline RfSpec default_rf_spec(VnfKind kind) {
    RfSpec s;
    s.trees = kind == VnfKind::VFw ? 800 : 500;
    return s;
}

/// Bootstrap-aggregated multi-output regression trees with
/// variance-reduction splits; the forest prediction is the mean of its trees.
class RandomForest {
public:
    RandomForest(RfSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
        spec_.validate();
    }

    void train(const std::vector<std::vector<double>>& x,
               const std::vector<std::vector<double>>& y) {
        if (x.empty() || x.size() != y.size())
            throw SizeError("rf train: empty or mismatched training set");
        x_ = &x;
        y_ = &y;
        trees_.assign(spec_.trees, {});
        for (int t = 0; t < spec_.trees; ++t) {
            Rng rng(seed_, "rf", static_cast<std::uint64_t>(t));
            std::vector<std::size_t> sample(x.size());
            for (auto& s : sample)
                s = rng.index(x.size());
            build(trees_[t], sample, 0, rng);
        }
    }

    std::vector<double> predict(const std::vector<double>& x) const {
        std::vector<double> out(output_dim(), 0.0);
        for (const auto& tree : trees_) {
            const auto& leaf = descend(tree, x);
            for (std::size_t j = 0; j < out.size(); ++j)
                out[j] += leaf[j];
        }
        for (double& v : out)
            v /= static_cast<double>(trees_.size());
        return out;
    }

    /// Per-tree prediction, exposed for the mean-of-trees check.
    std::vector<std::vector<double>> tree_predictions(const std::vector<double>& x) const {
        std::vector<std::vector<double>> out;
        out.reserve(trees_.size());
        for (const auto& tree : trees_)
            out.push_back(descend(tree, x));
        return out;
    }

private:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> value;
    };
    using Tree = std::vector<Node>;

    std::size_t output_dim() const { return y_->front().size(); }

    std::vector<double> mean_of(const std::vector<std::size_t>& idx) const {
        std::vector<double> m(output_dim(), 0.0);
        for (std::size_t i : idx)
            for (std::size_t j = 0; j < m.size(); ++j)
                m[j] += (*y_)[i][j];
        for (double& v : m)
            v /= static_cast<double>(idx.size());
        return m;
    }

    double sse_of(const std::vector<std::size_t>& idx) const {
        const auto m = mean_of(idx);
        double sse = 0.0;
        for (std::size_t i : idx)
            for (std::size_t j = 0; j < m.size(); ++j) {
                const double d = (*y_)[i][j] - m[j];
                sse += d * d;
            }
        return sse;
    }

    int build(Tree& tree, const std::vector<std::size_t>& idx, int depth, Rng& rng) {
        const int node_id = static_cast<int>(tree.size());
        tree.push_back({});

        const bool depth_stop = spec_.max_depth > 0 && depth >= spec_.max_depth;
        if (depth_stop || idx.size() < 2 * static_cast<std::size_t>(spec_.min_leaf) ||
            sse_of(idx) <= 1e-24) {
            tree[node_id].value = mean_of(idx);
            return node_id;
        }

        const std::size_t d = x_->front().size();
        const std::size_t t = output_dim();
        const std::size_t mtry = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(spec_.feature_fraction * d)));
        std::vector<std::size_t> features(d);
        std::iota(features.begin(), features.end(), 0);
        std::shuffle(features.begin(), features.end(), rng.engine());
        features.resize(mtry);

        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::size_t best_cut = 0;
        std::vector<std::size_t> best_order;

        std::vector<std::size_t> sorted = idx;
        std::vector<double> total(t, 0.0);
        for (std::size_t i : idx)
            for (std::size_t j = 0; j < t; ++j)
                total[j] += (*y_)[i][j];

        std::vector<double> left_sum(t);
        for (std::size_t f : features) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return (*x_)[a][f] < (*x_)[b][f];
            });
            // Running sums make each candidate cut O(outputs); the SSE
            // reduction only depends on the per-side sums.
            std::fill(left_sum.begin(), left_sum.end(), 0.0);
            const double n = static_cast<double>(sorted.size());
            for (std::size_t cut = 1; cut + spec_.min_leaf <= sorted.size(); ++cut) {
                for (std::size_t j = 0; j < t; ++j)
                    left_sum[j] += (*y_)[sorted[cut - 1]][j];
                if (cut < static_cast<std::size_t>(spec_.min_leaf))
                    continue;
                const double lo = (*x_)[sorted[cut - 1]][f];
                const double hi = (*x_)[sorted[cut]][f];
                if (hi <= lo)
                    continue;
                const double nl = static_cast<double>(cut);
                const double nr = n - nl;
                double gain = 0.0;
                for (std::size_t j = 0; j < t; ++j) {
                    const double rs = total[j] - left_sum[j];
                    gain += left_sum[j] * left_sum[j] / nl + rs * rs / nr -
                            total[j] * total[j] / n;
                }
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (lo + hi);
                    best_cut = cut;
                    best_order = sorted;
                }
            }
        }

        if (best_feature < 0) {
            tree[node_id].value = mean_of(idx);
            return node_id;
        }
        const std::vector<std::size_t> left_idx(best_order.begin(),
                                                best_order.begin() + best_cut);
        const std::vector<std::size_t> right_idx(best_order.begin() + best_cut,
                                                 best_order.end());
        tree[node_id].feature = best_feature;
        tree[node_id].threshold = best_threshold;
        const int left = build(tree, left_idx, depth + 1, rng);
        const int right = build(tree, right_idx, depth + 1, rng);
        tree[node_id].left = left;
        tree[node_id].right = right;
        return node_id;
    }

    const std::vector<double>& descend(const Tree& tree, const std::vector<double>& x) const {
        int node = 0;
        while (tree[node].feature >= 0)
            node = x[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                 : tree[node].right;
        return tree[node].value;
    }

    RfSpec spec_;
    std::uint64_t seed_;
    const std::vector<std::vector<double>>* x_ = nullptr;
    const std::vector<std::vector<double>>* y_ = nullptr;
    std::vector<Tree> trees_;
};

// ---------------------------------------------------------------------------
// Landmark retraining over the growing dataset

struct LandmarkInput {
    int episode = 0;
    ProfilingRecord record;
};

struct LandmarkPrediction {
    int episode = 0;
    bool skipped = false; // landmark fell before enough data existed
    ResourceVector mlp;
    ResourceVector rf;
};

inline std::vector<double> record_features(const ProfilingRecord& r) {
    return {r.kpi.cpu_util, r.kpi.mem_util, r.kpi.latency, r.kpi.output_rate};
}

inline std::vector<double> record_targets(const ProfilingRecord& r) {
    return {r.resources.vcpu, r.resources.mem, r.resources.lc};
}

inline ResourceVector snap_to_grid(const std::vector<double>& alloc,
                                   const ResourceGrid& grid) {
    ResourceVector out;
    for (Resource r : kResources) {
        const ResourceBounds& b = grid.bounds(r);
        const double clamped = b.clamp(alloc[static_cast<int>(r)]);
        const int idx = static_cast<int>(std::lround((clamped - b.min) / b.step));
        out.set(r, b.value_at(std::clamp(idx, 0, b.level_count() - 1)));
    }
    return out;
}

/// Retrain both models at each landmark on all records collected so far and
/// predict the allocation for the query feature vector
/// (cpu target, mem target, latency target, optimum output rate).
inline std::vector<LandmarkPrediction>
landmark_retrain(const std::vector<LandmarkInput>& stream, const std::vector<int>& landmarks,
                 const MlpSpec& mlp_spec, const RfSpec& rf_spec,
                 const std::vector<double>& query, const ResourceGrid& grid,
                 std::uint64_t seed) {
    std::vector<LandmarkPrediction> out;
    out.reserve(landmarks.size());

    for (std::size_t li = 0; li < landmarks.size(); ++li) {
        const int landmark = landmarks[li];
        if (li > 0 && landmarks[li] < landmarks[li - 1])
            throw ValidationError("landmark_retrain: landmarks must be sorted ascending");

        std::vector<std::vector<double>> features;
        std::vector<std::vector<double>> targets;
        for (const LandmarkInput& in : stream) {
            if (in.episode > landmark)
                continue;
            features.push_back(record_features(in.record));
            targets.push_back(record_targets(in.record));
        }

        LandmarkPrediction pred;
        pred.episode = landmark;
        if (features.size() < 10) {
            pred.skipped = true;
            out.push_back(pred);
            continue;
        }

        const auto [train_idx, test_idx] =
            split_90_10(features.size(), substream_seed(seed, "landmark", li));
        std::vector<std::vector<double>> train_x, train_y;
        train_x.reserve(train_idx.size());
        train_y.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            train_x.push_back(features[i]);
            train_y.push_back(targets[i]);
        }

        auto [scaled_x, x_scaler] = minmax_scale(train_x);
        auto [scaled_y, y_scaler] = minmax_scale(train_y);
        const std::vector<double> scaled_query = x_scaler.apply(query);

        Mlp mlp(mlp_spec, substream_seed(seed, "mlp", li));
        mlp.train(scaled_x, scaled_y, substream_seed(seed, "mlp-train", li));
        pred.mlp = snap_to_grid(y_scaler.invert(mlp.predict(scaled_query)), grid);

        RandomForest rf(rf_spec, substream_seed(seed, "rf", li));
        rf.train(scaled_x, scaled_y);
        pred.rf = snap_to_grid(y_scaler.invert(rf.predict(scaled_query)), grid);

        out.push_back(pred);
    }
    return out;
}

} // namespace vnfprof
