#include "ivlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "ivlab/error.hpp"
#include "ivlab/log.hpp"

namespace ivlab {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

int signed_label(int y) { return y == 1 ? 1 : -1; }

void check_dims(const FittedModel& model, const MatrixXd& X) {
    if (X.cols() != model.n_features) {
        throw Error(ErrorKind::computation, "feature count mismatch: model expects " +
                                                std::to_string(model.n_features) + ", got " +
                                                std::to_string(X.cols()));
    }
}

bool same(const VectorXd& a, const VectorXd& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

bool same(const MatrixXd& a, const MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

// Platt scaling by the Newton method with backtracking (Lin, Lin and Weng).
std::pair<double, double> fit_platt(const VectorXd& f, std::span<const int> y) {
    const auto n = f.size();
    double prior1 = 0, prior0 = 0;
    for (const int label : y) (label == 1 ? prior1 : prior0) += 1.0;
    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    VectorXd t(n);
    for (Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)] == 1 ? hi : lo;

    auto objective = [&](double a, double b) {
        double v = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double z = f(i) * a + b;
            v += z >= 0.0 ? t(i) * z + std::log1p(std::exp(-z)) : (t(i) - 1.0) * z + std::log1p(std::exp(z));
        }
        return v;
    };

    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
    double fval = objective(a, b);
    for (int it = 0; it < 100; ++it) {
        double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double z = f(i) * a + b;
            double p, q;
            if (z >= 0.0) {
                p = std::exp(-z) / (1.0 + std::exp(-z));
                q = 1.0 / (1.0 + std::exp(-z));
            } else {
                p = 1.0 / (1.0 + std::exp(z));
                q = std::exp(z) / (1.0 + std::exp(z));
            }
            const double d2 = p * q;
            h11 += f(i) * f(i) * d2;
            h22 += d2;
            h21 += f(i) * d2;
            const double d1 = t(i) - p;
            g1 += f(i) * d1;
            g2 += d1;
        }
        if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;
        double step = 1.0;
        while (step >= 1e-10) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < 1e-10) break;
    }
    return {a, b};
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::logistic: return "logistic";
        case ModelKind::svm_rbf: return "svm";
        case ModelKind::adaboost: return "adaboost";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "logistic") return ModelKind::logistic;
    if (text == "svm" || text == "svm_rbf") return ModelKind::svm_rbf;
    if (text == "adaboost") return ModelKind::adaboost;
    throw Error(ErrorKind::usage, "unknown model '" + std::string(text) + "'");
}

void TrainSet::validate() const {
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw Error(ErrorKind::computation, "training rows and labels differ in length");
    }
    if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorKind::computation, "empty training set");
    if (!X.allFinite()) throw Error(ErrorKind::computation, "training matrix contains non-finite values");
    bool up = false, down = false;
    for (const int label : y) {
        if (label == 1) {
            up = true;
        } else if (label == 0) {
            down = true;
        } else {
            throw Error(ErrorKind::computation, "labels must be 0 or 1");
        }
    }
    if (!(up && down)) throw Error(ErrorKind::computation, "training labels contain a single class");
}

bool identical(const FittedModel& a, const FittedModel& b) {
    if (a.kind != b.kind || a.n_features != b.n_features || a.seed != b.seed ||
        a.params.index() != b.params.index()) {
        return false;
    }
    if (const auto* la = std::get_if<LogisticModel>(&a.params)) {
        const auto& lb = std::get<LogisticModel>(b.params);
        return same(la->weights, lb.weights) && la->bias == lb.bias && la->iterations == lb.iterations;
    }
    if (const auto* sa = std::get_if<SvmModel>(&a.params)) {
        const auto& sb = std::get<SvmModel>(b.params);
        return same(sa->support_vectors, sb.support_vectors) && same(sa->dual_coef, sb.dual_coef) &&
               same(sa->alpha, sb.alpha) && sa->bias == sb.bias && sa->gamma == sb.gamma &&
               sa->platt_a == sb.platt_a && sa->platt_b == sb.platt_b;
    }
    const auto& aa = std::get<AdaBoostModel>(a.params);
    const auto& ab = std::get<AdaBoostModel>(b.params);
    if (aa.stumps.size() != ab.stumps.size()) return false;
    for (std::size_t k = 0; k < aa.stumps.size(); ++k) {
        const auto& x = aa.stumps[k];
        const auto& z = ab.stumps[k];
        if (x.feature != z.feature || x.threshold != z.threshold || x.polarity != z.polarity ||
            x.stage_weight != z.stage_weight) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Logistic regression

double logistic_objective(const MatrixXd& X, std::span<const int> y, double reg, const VectorXd& w,
                          double b) {
    const VectorXd s = (X * w).array() + b;
    double loss = 0.0;
    for (Index i = 0; i < s.size(); ++i) loss += softplus(s(i)) - y[static_cast<std::size_t>(i)] * s(i);
    return loss + 0.5 * reg * w.squaredNorm();
}

VectorXd logistic_gradient(const MatrixXd& X, std::span<const int> y, double reg, const VectorXd& w,
                           double b) {
    const VectorXd s = (X * w).array() + b;
    VectorXd r(s.size());
    for (Index i = 0; i < s.size(); ++i) r(i) = sigmoid(s(i)) - y[static_cast<std::size_t>(i)];
    VectorXd g(w.size() + 1);
    g.head(w.size()) = X.transpose() * r + reg * w;
    g(w.size()) = r.sum();
    return g;
}

FittedModel fit_logistic(const TrainSet& train, const LogisticParams& params, std::uint64_t seed) {
    train.validate();
    const auto& X = train.X;
    const std::span<const int> y(train.y);
    const Index d = X.cols();
    const Index m = X.rows();

    LogisticModel model;
    model.weights = VectorXd::Zero(d);
    double f = logistic_objective(X, y, params.reg_strength, model.weights, model.bias);
    model.objective_trace.push_back(f);

    for (int iter = 0; iter < params.max_iter; ++iter) {
        const VectorXd g = logistic_gradient(X, y, params.reg_strength, model.weights, model.bias);
        if (g.norm() < params.tol) {
            model.converged = true;
            break;
        }
        // Newton system on (w, b).
        const VectorXd s = (X * model.weights).array() + model.bias;
        VectorXd dw(m);
        for (Index i = 0; i < m; ++i) {
            const double p = sigmoid(s(i));
            dw(i) = p * (1.0 - p);
        }
        MatrixXd H(d + 1, d + 1);
        H.topLeftCorner(d, d) = X.transpose() * dw.asDiagonal() * X;
        H.topLeftCorner(d, d).diagonal().array() += params.reg_strength;
        const VectorXd hb = X.transpose() * dw;
        H.topRightCorner(d, 1) = hb;
        H.bottomLeftCorner(1, d) = hb.transpose();
        H(d, d) = dw.sum() + 1e-12;
        VectorXd step = H.ldlt().solve(-g);
        if (!step.allFinite() || g.dot(step) >= 0.0) step = -g;

        const double slope = g.dot(step);
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            const VectorXd w_new = model.weights + t * step.head(d);
            const double b_new = model.bias + t * step(d);
            const double f_new = logistic_objective(X, y, params.reg_strength, w_new, b_new);
            if (f_new <= f + 1e-4 * t * slope && f_new < f) {
                model.weights = w_new;
                model.bias = b_new;
                f = f_new;
                accepted = true;
                break;
            }
        }
        model.iterations = iter + 1;
        if (!accepted) {
            // No further decrease is representable; treat as converged if the gradient is tiny.
            model.converged =
                logistic_gradient(X, y, params.reg_strength, model.weights, model.bias).norm() < params.tol;
            break;
        }
        model.objective_trace.push_back(f);
    }
    if (!model.converged) {
        if (logistic_gradient(X, y, params.reg_strength, model.weights, model.bias).norm() < params.tol) {
            model.converged = true;
        } else {
            log::warn("logistic regression did not converge in " + std::to_string(params.max_iter) +
                      " iterations; returning best iterate");
        }
    }
    return {ModelKind::logistic, d, seed, std::move(model)};
}

// ---------------------------------------------------------------------------
// RBF SVM (SMO with second-order working-set selection)

double auto_gamma(const MatrixXd& X) {
    const double mean = X.mean();
    const double var = (X.array() - mean).square().mean();
    return var > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * var) : 1.0;
}

MatrixXd rbf_kernel(const MatrixXd& A, const MatrixXd& B, double gamma) {
    const VectorXd a2 = A.rowwise().squaredNorm();
    const VectorXd b2 = B.rowwise().squaredNorm();
    MatrixXd K = -2.0 * A * B.transpose();
    K.colwise() += a2;
    K.rowwise() += b2.transpose();
    return (-gamma * K.array().max(0.0)).exp().matrix();
}

double svm_dual_objective(const MatrixXd& K, std::span<const int> y, const VectorXd& alpha) {
    VectorXd ay(alpha.size());
    for (Index i = 0; i < alpha.size(); ++i) ay(i) = alpha(i) * signed_label(y[static_cast<std::size_t>(i)]);
    return alpha.sum() - 0.5 * ay.dot(K * ay);
}

FittedModel fit_svm_rbf(const TrainSet& train, const SvmParams& params, std::uint64_t seed) {
    train.validate();
    const auto& X = train.X;
    const Index m = X.rows();
    const double C = params.C;
    const double gamma = params.gamma.value_or(auto_gamma(X));
    const MatrixXd K = rbf_kernel(X, X, gamma);
    constexpr double kTau = 1e-12;

    VectorXd yv(m);
    for (Index i = 0; i < m; ++i) yv(i) = signed_label(train.y[static_cast<std::size_t>(i)]);

    VectorXd alpha = VectorXd::Zero(m);
    VectorXd G = VectorXd::Constant(m, -1.0);
    auto upper = [&](Index t) { return alpha(t) >= C; };
    auto lower = [&](Index t) { return alpha(t) <= 0.0; };

    SvmModel model;
    model.C = C;
    model.gamma = gamma;
    long iter = 0;
    for (; iter < params.max_iter; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        Index i = -1;
        for (Index t = 0; t < m; ++t) {
            if (yv(t) > 0) {
                if (!upper(t) && -G(t) >= gmax) {
                    gmax = -G(t);
                    i = t;
                }
            } else if (!lower(t) && G(t) >= gmax) {
                gmax = G(t);
                i = t;
            }
        }
        if (i < 0) {
            model.converged = true;
            break;
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        double obj_min = std::numeric_limits<double>::infinity();
        Index j = -1;
        for (Index t = 0; t < m; ++t) {
            if (yv(t) > 0) {
                if (!lower(t)) {
                    const double grad_diff = gmax + G(t);
                    gmax2 = std::max(gmax2, G(t));
                    if (grad_diff > 0) {
                        double quad = K(i, i) + K(t, t) - 2.0 * yv(i) * K(i, t);
                        if (quad <= 0) quad = kTau;
                        const double obj = -(grad_diff * grad_diff) / quad;
                        if (obj <= obj_min) {
                            obj_min = obj;
                            j = t;
                        }
                    }
                }
            } else if (!upper(t)) {
                const double grad_diff = gmax - G(t);
                gmax2 = std::max(gmax2, -G(t));
                if (grad_diff > 0) {
                    double quad = K(i, i) + K(t, t) + 2.0 * yv(i) * K(i, t);
                    if (quad <= 0) quad = kTau;
                    const double obj = -(grad_diff * grad_diff) / quad;
                    if (obj <= obj_min) {
                        obj_min = obj;
                        j = t;
                    }
                }
            }
        }
        if (gmax + gmax2 < params.tol || j < 0) {
            model.converged = true;
            break;
        }

        const double ai_old = alpha(i);
        const double aj_old = alpha(j);
        const double qij = yv(i) * yv(j) * K(i, j);
        if (yv(i) != yv(j)) {
            double quad = K(i, i) + K(j, j) + 2.0 * qij;
            if (quad <= 0) quad = kTau;
            const double delta = (-G(i) - G(j)) / quad;
            const double diff = alpha(i) - alpha(j);
            alpha(i) += delta;
            alpha(j) += delta;
            if (diff > 0) {
                if (alpha(j) < 0) {
                    alpha(j) = 0;
                    alpha(i) = diff;
                }
            } else if (alpha(i) < 0) {
                alpha(i) = 0;
                alpha(j) = -diff;
            }
            if (diff > 0) {
                if (alpha(i) > C) {
                    alpha(i) = C;
                    alpha(j) = C - diff;
                }
            } else if (alpha(j) > C) {
                alpha(j) = C;
                alpha(i) = C + diff;
            }
        } else {
            double quad = K(i, i) + K(j, j) - 2.0 * qij;
            if (quad <= 0) quad = kTau;
            const double delta = (G(i) - G(j)) / quad;
            const double sum = alpha(i) + alpha(j);
            alpha(i) -= delta;
            alpha(j) += delta;
            if (sum > C) {
                if (alpha(i) > C) {
                    alpha(i) = C;
                    alpha(j) = sum - C;
                }
            } else if (alpha(j) < 0) {
                alpha(j) = 0;
                alpha(i) = sum;
            }
            if (sum > C) {
                if (alpha(j) > C) {
                    alpha(j) = C;
                    alpha(i) = sum - C;
                }
            } else if (alpha(i) < 0) {
                alpha(i) = 0;
                alpha(j) = sum;
            }
        }
        const double dai = alpha(i) - ai_old;
        const double daj = alpha(j) - aj_old;
        for (Index t = 0; t < m; ++t) {
            G(t) += yv(t) * (yv(i) * K(t, i) * dai + yv(j) * K(t, j) * daj);
        }
    }
    model.iterations = iter;
    if (!model.converged) {
        log::warn("SMO did not reach the KKT tolerance in " + std::to_string(params.max_iter) +
                  " iterations; returning best iterate");
    }

    // Offset from free multipliers (or the midpoint of the feasible interval).
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int n_free = 0;
    for (Index t = 0; t < m; ++t) {
        const double yg = yv(t) * G(t);
        if (upper(t)) {
            if (yv(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (yv(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);
    model.bias = -rho;
    model.alpha = alpha;

    std::vector<Index> sv;
    for (Index t = 0; t < m; ++t) {
        if (alpha(t) > 0.0) sv.push_back(t);
    }
    model.support_vectors.resize(static_cast<Index>(sv.size()), X.cols());
    model.dual_coef.resize(static_cast<Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        model.support_vectors.row(static_cast<Index>(k)) = X.row(sv[k]);
        model.dual_coef(static_cast<Index>(k)) = alpha(sv[k]) * yv(sv[k]);
    }

    VectorXd f = VectorXd::Constant(m, model.bias);
    for (std::size_t k = 0; k < sv.size(); ++k) {
        f += model.dual_coef(static_cast<Index>(k)) * K.col(sv[k]);
    }
    std::tie(model.platt_a, model.platt_b) = fit_platt(f, train.y);

    return {ModelKind::svm_rbf, X.cols(), seed, std::move(model)};
}

// ---------------------------------------------------------------------------
// AdaBoost

FittedModel fit_adaboost(const TrainSet& train, const AdaBoostParams& params, std::uint64_t seed) {
    train.validate();
    const auto& X = train.X;
    const Index m = X.rows();
    const Index d = X.cols();
    constexpr double kTie = 1e-12;

    std::vector<int> ys(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) ys[static_cast<std::size_t>(i)] = signed_label(train.y[static_cast<std::size_t>(i)]);

    // Per-feature row order by value; ties broken by row index.
    std::vector<std::vector<Index>> order(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) {
        auto& ord = order[static_cast<std::size_t>(j)];
        ord.resize(static_cast<std::size_t>(m));
        std::iota(ord.begin(), ord.end(), Index{0});
        std::stable_sort(ord.begin(), ord.end(), [&](Index a, Index b) { return X(a, j) < X(b, j); });
    }

    std::vector<double> w(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
    AdaBoostModel model;

    for (int round = 0; round < params.n_rounds; ++round) {
        model.weight_trace.push_back(w);
        double total_pos = 0.0, total_neg = 0.0;
        for (Index i = 0; i < m; ++i) (ys[static_cast<std::size_t>(i)] > 0 ? total_pos : total_neg) += w[static_cast<std::size_t>(i)];
        const double total = total_pos + total_neg;

        bool found = false;
        Stump best;
        double best_err = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < d; ++j) {
            const auto& ord = order[static_cast<std::size_t>(j)];
            // Weight of each class at or below the running threshold.
            double below_pos = 0.0, below_neg = 0.0;
            for (std::size_t k = 0; k + 1 < ord.size(); ++k) {
                const Index r = ord[k];
                (ys[static_cast<std::size_t>(r)] > 0 ? below_pos : below_neg) += w[static_cast<std::size_t>(r)];
                const double v = X(r, j);
                const double v_next = X(ord[k + 1], j);
                if (!(v < v_next)) continue;
                const double threshold = v + 0.5 * (v_next - v);
                // polarity +1: up above threshold, so errors are positives below and negatives above.
                const double err_pos = below_pos + (total_neg - below_neg);
                const double err_neg = total - err_pos;
                for (const auto& [pol, err] : {std::pair{1, err_pos}, std::pair{-1, err_neg}}) {
                    if (err < best_err - kTie) {
                        best_err = err;
                        best = Stump{j, threshold, pol, 0.0, 0.0};
                        found = true;
                    }
                }
            }
        }
        if (!found) break;
        const double err = std::max(0.0, best_err / total);
        best.weighted_error = err;
        if (err >= 0.5) break;
        if (err <= 0.0) {
            best.stage_weight = 1.0;
            model.stumps.push_back(best);
            break;
        }
        best.stage_weight = params.learning_rate * std::log((1.0 - err) / err);
        model.stumps.push_back(best);

        double sum = 0.0;
        for (Index i = 0; i < m; ++i) {
            auto& wi = w[static_cast<std::size_t>(i)];
            if (best.vote(X(i, best.feature)) != ys[static_cast<std::size_t>(i)]) wi *= std::exp(best.stage_weight);
            sum += wi;
        }
        for (auto& wi : w) wi /= sum;
    }
    return {ModelKind::adaboost, d, seed, std::move(model)};
}

std::vector<double> feature_importances(const FittedModel& model) {
    const auto* ada = std::get_if<AdaBoostModel>(&model.params);
    if (model.kind != ModelKind::adaboost || ada == nullptr) {
        throw Error(ErrorKind::usage, "feature importances require an AdaBoost model");
    }
    const auto d = static_cast<std::size_t>(model.n_features);
    std::vector<double> imp(d, 0.0);
    double total = 0.0;
    for (const auto& s : ada->stumps) {
        imp[static_cast<std::size_t>(s.feature)] += std::abs(s.stage_weight);
        total += std::abs(s.stage_weight);
    }
    if (total <= 0.0) {
        std::fill(imp.begin(), imp.end(), 1.0 / static_cast<double>(d));
    } else {
        for (auto& v : imp) v /= total;
    }
    return imp;
}

// ---------------------------------------------------------------------------
// Prediction

VectorXd decision_function(const FittedModel& model, const MatrixXd& X) {
    check_dims(model, X);
    if (const auto* lr = std::get_if<LogisticModel>(&model.params)) {
        return (X * lr->weights).array() + lr->bias;
    }
    if (const auto* svm = std::get_if<SvmModel>(&model.params)) {
        if (svm->support_vectors.rows() == 0) return VectorXd::Constant(X.rows(), svm->bias);
        const MatrixXd K = rbf_kernel(X, svm->support_vectors, svm->gamma);
        return (K * svm->dual_coef).array() + svm->bias;
    }
    const auto& ada = std::get<AdaBoostModel>(model.params);
    VectorXd score = VectorXd::Zero(X.rows());
    for (Index i = 0; i < X.rows(); ++i) {
        for (const auto& s : ada.stumps) score(i) += s.stage_weight * s.vote(X(i, s.feature));
    }
    return score;
}

Prediction predict(const FittedModel& model, const MatrixXd& X) {
    const VectorXd f = decision_function(model, X);
    Prediction out;
    out.labels.reserve(static_cast<std::size_t>(f.size()));
    out.probabilities.reserve(static_cast<std::size_t>(f.size()));
    for (Index i = 0; i < f.size(); ++i) {
        double p = 0.0;
        if (const auto* svm = std::get_if<SvmModel>(&model.params)) {
            p = sigmoid(-(svm->platt_a * f(i) + svm->platt_b));
        } else {
            p = sigmoid(f(i));
        }
        out.probabilities.push_back(p);
        out.labels.push_back(p > 0.5 ? 1 : 0);
    }
    return out;
}

std::string model_record(const FittedModel& model) {
    using nlohmann::json;
    auto vec = [](const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    json j;
    j["kind"] = std::string(to_string(model.kind));
    j["n_features"] = model.n_features;
    j["seed"] = model.seed;
    if (const auto* lr = std::get_if<LogisticModel>(&model.params)) {
        j["weights"] = vec(lr->weights);
        j["bias"] = lr->bias;
        j["iterations"] = lr->iterations;
        j["converged"] = lr->converged;
    } else if (const auto* svm = std::get_if<SvmModel>(&model.params)) {
        j["gamma"] = svm->gamma;
        j["C"] = svm->C;
        j["bias"] = svm->bias;
        j["dual_coef"] = vec(svm->dual_coef);
        j["n_support"] = svm->support_vectors.rows();
        j["platt"] = {svm->platt_a, svm->platt_b};
        j["iterations"] = svm->iterations;
        j["converged"] = svm->converged;
    } else {
        json stumps = json::array();
        for (const auto& s : std::get<AdaBoostModel>(model.params).stumps) {
            stumps.push_back({{"feature", s.feature},
                              {"threshold", s.threshold},
                              {"polarity", s.polarity},
                              {"stage_weight", s.stage_weight},
                              {"error", s.weighted_error}});
        }
        j["stumps"] = std::move(stumps);
    }
    return j.dump();
}

}  // namespace ivlab
