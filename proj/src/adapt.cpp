#include <qsc/adapt.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace qsc {

Mat3 param_matrix(const ParamVector& a) {
    Mat3 m;
    m << a[0], a[3], a[4],
         a[3], a[1], a[5],
         a[4], a[5], a[2];
    return m;
}

ParamVector matrix_params(const Mat3& j) {
    if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidArgumentError("parameter extraction requires a symmetric matrix");
    }
    ParamVector a;
    a << j(0, 0), j(1, 1), j(2, 2), j(0, 1), j(0, 2), j(1, 2);
    return a;
}

Mat36 param_product_matrix(const Vec3& v) {
    Mat36 l = Mat36::Zero();
    l(0, 0) = v[0]; l(0, 3) = v[1]; l(0, 4) = v[2];
    l(1, 1) = v[1]; l(1, 3) = v[0]; l(1, 5) = v[2];
    l(2, 2) = v[2]; l(2, 4) = v[0]; l(2, 5) = v[1];
    return l;
}

namespace {

// Basis of symmetric matrices matching the parameter order: E_i for the
// diagonal entries, E_{3..5} with both mirrored off-diagonal entries set.
Mat3 sym_basis(int i) {
    Mat3 e = Mat3::Zero();
    switch (i) {
        case 0: e(0, 0) = 1; break;
        case 1: e(1, 1) = 1; break;
        case 2: e(2, 2) = 1; break;
        case 3: e(0, 1) = e(1, 0) = 1; break;
        case 4: e(0, 2) = e(2, 0) = 1; break;
        case 5: e(1, 2) = e(2, 1) = 1; break;
        default: throw InvalidArgumentError("symmetric basis index out of range");
    }
    return e;
}

bool positive_definite(const Mat3& m) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(m);
    return es.eigenvalues().minCoeff() > 0.0;
}

} // namespace

PsiFunction PsiFunction::quadratic(const Mat6& gamma) {
    if (!gamma.allFinite() || (gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidArgumentError("quadratic potential weight must be finite and symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat6> es(gamma);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidArgumentError("quadratic potential weight must be positive definite");
    }
    PsiFunction psi(Kind::Quadratic);
    psi.gamma_inv_ = gamma.inverse();
    return psi;
}

PsiFunction PsiFunction::logdet() {
    return PsiFunction(Kind::LogDet);
}

bool PsiFunction::in_domain(const ParamVector& a) const {
    if (!a.allFinite()) return false;
    if (kind_ == Kind::Quadratic) return true;
    return positive_definite(param_matrix(a));
}

double PsiFunction::value(const ParamVector& a) const {
    if (!in_domain(a)) {
        throw DomainError("parameter vector outside the potential's domain");
    }
    if (kind_ == Kind::Quadratic) {
        return 0.5 * a.dot(gamma_inv_ * a);
    }
    return -std::log(param_matrix(a).determinant());
}

Vec6 PsiFunction::gradient(const ParamVector& a) const {
    if (!in_domain(a)) {
        throw DomainError("parameter vector outside the potential's domain");
    }
    if (kind_ == Kind::Quadratic) {
        return gamma_inv_ * a;
    }
    const Mat3 p = param_matrix(a).inverse();
    Vec6 g;
    g << -p(0, 0), -p(1, 1), -p(2, 2), -2 * p(0, 1), -2 * p(0, 2), -2 * p(1, 2);
    return g;
}

Mat6 PsiFunction::hessian(const ParamVector& a) const {
    if (!in_domain(a)) {
        throw DomainError("parameter vector outside the potential's domain");
    }
    if (kind_ == Kind::Quadratic) {
        return gamma_inv_;
    }
    const Mat3 p = param_matrix(a).inverse();
    Mat6 h;
    for (int i = 0; i < 6; ++i) {
        const Mat3 pei = p * sym_basis(i);
        for (int j = i; j < 6; ++j) {
            h(i, j) = (pei * p * sym_basis(j)).trace();
            h(j, i) = h(i, j);
        }
    }
    return h;
}

double bregman_div(const PsiFunction& psi, const ParamVector& y, const ParamVector& x) {
    return psi.value(y) - psi.value(x) - psi.gradient(x).dot(y - x);
}

Mat6 psi_hessian(const PsiFunction& psi, const ParamVector& x) {
    return psi.hessian(x);
}

Vec6 adapt_step_deriv(const ParamVector& a_hat, const Mat63& Y, const Vec3& s,
                      const PsiFunction& psi) {
    const Mat6 h = psi.hessian(a_hat);
    Eigen::LDLT<Mat6> ldlt(h);
    if (ldlt.info() != Eigen::Success) {
        throw DomainError("adaptation Hessian is not invertible at this estimate");
    }
    return -ldlt.solve(Y * s);
}

} // namespace qsc
