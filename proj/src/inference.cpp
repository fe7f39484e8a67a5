#include "figmn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "figmn/errors.hpp"

namespace figmn {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
const double kInf = std::numeric_limits<double>::infinity();

SymmetricMatrix sym_block(const SymmetricMatrix& m, const std::vector<int>& idx) {
    SymmetricMatrix b(static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = m(idx[i], idx[j]);
    return b;
}

Matrix rect_block(const SymmetricMatrix& m, const std::vector<int>& rows,
                  const std::vector<int>& cols) {
    Matrix b(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) b(i, j) = m(rows[i], cols[j]);
    return b;
}

Vector gather(std::span<const double> x, const std::vector<int>& idx) {
    Vector v(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) v[i] = x[idx[i]];
    return v;
}

Vector normalize_log_weights(const Vector& lp, const std::vector<GaussianComponent>& comps) {
    double m = -kInf;
    for (double v : lp) m = std::max(m, v);
    Vector post(lp.size());
    if (!std::isfinite(m)) {
        double total = 0.0;
        for (const auto& c : comps) total += c.sp;
        for (std::size_t j = 0; j < comps.size(); ++j) post[j] = comps[j].sp / total;
        return post;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < lp.size(); ++j) {
        post[j] = std::exp(lp[j] - m);
        total += post[j];
    }
    for (double& p : post) p /= total;
    return post;
}

// Everything a single pass over the components needs: marginal input
// log-density plus the conditional-mean contribution of each component.
struct ComponentPass {
    Vector log_density;                // per component
    std::vector<Vector> conditional;   // per component, length |targets|
};

ComponentPass component_pass(const MixtureModel& model, std::span<const double> x_input,
                             const SlicePlan& plan, bool want_conditional) {
    plan.validate(model.dim());
    if (x_input.size() != plan.input_indices.size())
        throw DimensionError("input slice length does not match the plan");
    if (model.size() == 0) throw std::logic_error("inference on an empty model");

    const int ni = static_cast<int>(plan.input_indices.size());
    const int no = static_cast<int>(plan.target_indices.size());
    const bool fast = model.config().backend == Backend::Fast;

    ComponentPass out;
    out.log_density.resize(model.size());
    if (want_conditional) out.conditional.resize(model.size());

    for (std::size_t j = 0; j < model.size(); ++j) {
        const GaussianComponent& c = model.component(j);
        Vector mu_i = gather(c.mu, plan.input_indices);
        Vector dev(ni);
        for (int i = 0; i < ni; ++i) dev[i] = x_input[i] - mu_i[i];

        double d2, log_det_cov;
        Vector cond;
        if (fast) {
            BlockView bv = split_precision(c.lambda, plan);
            CholeskyFactor chol_w = cholesky_checked(bv.W);
            Matrix z = bv.Y.transposed();          // o x i
            Matrix s = chol_w.solve(z);            // W^{-1} Z
            SymmetricMatrix marg = bv.X;           // X - Y W^{-1} Z
            for (int a = 0; a < ni; ++a)
                for (int b = 0; b < ni; ++b) {
                    double acc = 0.0;
                    for (int k = 0; k < no; ++k) acc += bv.Y(a, k) * s(k, b);
                    marg(a, b) -= acc;
                }
            marg.symmetrize();
            d2 = mahalanobis_sq(x_input, mu_i, marg);
            log_det_cov = std::log(chol_w.det() * c.det_c);
            if (want_conditional) {
                // mu_t - W^{-1} Z (x_i - mu_i), with one o-sized solve
                Vector zd(no, 0.0);
                for (int k = 0; k < no; ++k)
                    for (int b = 0; b < ni; ++b) zd[k] += z(k, b) * dev[b];
                Vector corr = chol_w.solve(zd);
                cond.resize(no);
                for (int k = 0; k < no; ++k)
                    cond[k] = c.mu[plan.target_indices[k]] - corr[k];
            }
        } else {
            // Covariance side: invert the input sub-block directly.
            SymmetricMatrix c_i = sym_block(c.cov, plan.input_indices);
            auto chol_i = cholesky(c_i);
            if (!chol_i) throw SingularMatrix("input-block covariance is not positive definite");
            d2 = chol_i->quad_inverse(dev);
            log_det_cov = chol_i->log_det();
            if (want_conditional) {
                Vector z = chol_i->solve(dev);     // C_i^{-1}(x_i - mu_i)
                Matrix c_ti = rect_block(c.cov, plan.target_indices, plan.input_indices);
                cond.resize(no);
                for (int k = 0; k < no; ++k) {
                    double acc = 0.0;
                    for (int b = 0; b < ni; ++b) acc += c_ti(k, b) * z[b];
                    cond[k] = c.mu[plan.target_indices[k]] + acc;
                }
            }
        }
        out.log_density[j] = -0.5 * (ni * kLog2Pi + log_det_cov + d2) + std::log(c.sp);
        if (want_conditional) out.conditional[j] = std::move(cond);
    }
    return out;
}

} // namespace

SlicePlan SlicePlan::trailing_targets(int dim, int n_targets) {
    if (n_targets < 1 || n_targets >= dim)
        throw DimensionError("trailing_targets requires 1 <= n_targets < dim");
    SlicePlan plan;
    for (int i = 0; i < dim - n_targets; ++i) plan.input_indices.push_back(i);
    for (int i = dim - n_targets; i < dim; ++i) plan.target_indices.push_back(i);
    return plan;
}

void SlicePlan::validate(int dim) const {
    if (target_indices.empty())
        throw DimensionError("slice plan must name at least one target index");
    std::vector<char> seen(dim, 0);
    auto mark = [&](const std::vector<int>& idx) {
        for (int i : idx) {
            if (i < 0 || i >= dim) throw DimensionError("slice index out of range");
            if (seen[i]) throw DimensionError("slice indices overlap");
            seen[i] = 1;
        }
    };
    mark(input_indices);
    mark(target_indices);
    for (int i = 0; i < dim; ++i)
        if (!seen[i]) throw DimensionError("slice plan must cover every dimension");
}

BlockView split_precision(const SymmetricMatrix& lambda, const SlicePlan& plan) {
    plan.validate(lambda.order());
    BlockView b;
    b.X = sym_block(lambda, plan.input_indices);
    b.W = sym_block(lambda, plan.target_indices);
    b.Y = rect_block(lambda, plan.input_indices, plan.target_indices);
    return b;
}

MarginalParams marginal_input_params(const GaussianComponent& comp, const SlicePlan& plan) {
    if (comp.lambda.empty())
        throw std::logic_error("marginal_input_params needs the precision matrix");
    plan.validate(comp.lambda.order());
    const int ni = static_cast<int>(plan.input_indices.size());
    const int no = static_cast<int>(plan.target_indices.size());

    BlockView bv = split_precision(comp.lambda, plan);
    CholeskyFactor chol_w = cholesky_checked(bv.W);
    Matrix s = chol_w.solve(bv.Y.transposed());
    SymmetricMatrix marg = bv.X;
    for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b) {
            double acc = 0.0;
            for (int k = 0; k < no; ++k) acc += bv.Y(a, k) * s(k, b);
            marg(a, b) -= acc;
        }
    marg.symmetrize();
    return {std::move(marg), chol_w.det() * comp.det_c};
}

Vector conditional_posteriors(const MixtureModel& model, std::span<const double> x_input,
                              const SlicePlan& plan) {
    ComponentPass pass = component_pass(model, x_input, plan, false);
    return normalize_log_weights(pass.log_density, model.components());
}

Vector reconstruct(const MixtureModel& model, std::span<const double> x_input,
                   const SlicePlan& plan) {
    ComponentPass pass = component_pass(model, x_input, plan, true);
    Vector post = normalize_log_weights(pass.log_density, model.components());
    Vector out(plan.target_indices.size(), 0.0);
    for (std::size_t j = 0; j < post.size(); ++j)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] += post[j] * pass.conditional[j][k];
    return out;
}

Classification classify(const MixtureModel& model, std::span<const double> features,
                        int n_classes) {
    SlicePlan plan = SlicePlan::trailing_targets(model.dim(), n_classes);
    Classification result;
    result.scores = reconstruct(model, features, plan);
    result.label = 0;
    for (int k = 1; k < n_classes; ++k)
        if (result.scores[k] > result.scores[result.label]) result.label = k;
    return result;
}

} // namespace figmn
