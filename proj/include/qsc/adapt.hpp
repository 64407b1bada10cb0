#pragma once

#include <qsc/errors.hpp>
#include <qsc/types.hpp>

namespace qsc {

// Inertia parameters in the order (J11, J22, J33, J12, J13, J23).
using ParamVector = Vec6;

// Symmetric embedding M(a) and its inverse map.
Mat3 param_matrix(const ParamVector& a);
ParamVector matrix_params(const Mat3& j);

// L(v): the 3x6 matrix with J(a) v = L(v) a for every symmetric J(a).
Mat36 param_product_matrix(const Vec3& v);

// Strictly convex potential for the adaptation law. Two kinds:
//   quadratic(Gamma): psi(a) = 1/2 a^T Gamma^{-1} a, constant Hessian
//     Gamma^{-1}; the induced update is the classical gradient law.
//   logdet: psi(a) = -ln det M(a), defined on the positive-definite cone.
//     Its Bregman divergence blows up at the cone boundary, which is what
//     keeps inertia estimates physically consistent during adaptation.
class PsiFunction {
public:
    enum class Kind { Quadratic, LogDet };

    static PsiFunction quadratic(const Mat6& gamma);
    static PsiFunction logdet();

    Kind kind() const { return kind_; }
    bool in_domain(const ParamVector& a) const;
    double value(const ParamVector& a) const;
    Vec6 gradient(const ParamVector& a) const;
    Mat6 hessian(const ParamVector& a) const;

private:
    explicit PsiFunction(Kind kind) : kind_(kind) {}

    Kind kind_;
    Mat6 gamma_inv_ = Mat6::Identity();
};

// d_psi(y || x) = psi(y) - psi(x) - (y - x)^T grad psi(x). Nonnegative, zero
// iff y == x.
double bregman_div(const PsiFunction& psi, const ParamVector& y, const ParamVector& x);

// Hessian of psi at x; DomainError outside the domain.
Mat6 psi_hessian(const PsiFunction& psi, const ParamVector& x);

// Adaptation-law derivative: a_hat_dot = -hessian(psi, a_hat)^{-1} Y s.
// Integrated jointly with the plant state.
Vec6 adapt_step_deriv(const ParamVector& a_hat, const Mat63& Y, const Vec3& s,
                      const PsiFunction& psi);

} // namespace qsc
