#include <qsc/adapt.hpp>
#include <qsc/errors.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qsc;

namespace {

Mat3 rand_mat3(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = u(rng) * scale;
    return m;
}

// Random parameter vector whose matrix is safely inside the positive cone.
ParamVector rand_pd_params(std::mt19937_64& rng) {
    const Mat3 a = rand_mat3(rng, 1.0);
    return matrix_params(Mat3(a * a.transpose() + 0.5 * Mat3::Identity()));
}

Vec6 rand_vec6(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = u(rng) * scale;
    return v;
}

} // namespace

TEST_CASE("parameter vector and symmetric matrix are inverse embeddings") {
    ParamVector a;
    a << 1, 2, 3, 4, 5, 6;
    Mat3 m;
    m << 1, 4, 5,
         4, 2, 6,
         5, 6, 3;
    CHECK((param_matrix(a) - m).norm() == 0.0);
    CHECK((matrix_params(m) - a).norm() == 0.0);

    std::mt19937_64 rng(31);
    for (int n = 0; n < 50; ++n) {
        const ParamVector p = rand_vec6(rng, 3.0);
        CHECK((matrix_params(param_matrix(p)) - p).norm() == 0.0);
    }

    Mat3 bad = m;
    bad(0, 1) += 1e-6;
    CHECK_THROWS_AS(matrix_params(bad), InvalidArgumentError);
}

TEST_CASE("product matrix factors the symmetric action on a vector") {
    const Mat36 l1 = param_product_matrix(Vec3(1, 0, 0));
    Mat36 expect;
    expect << 1, 0, 0, 0, 0, 0,
              0, 0, 0, 1, 0, 0,
              0, 0, 0, 0, 1, 0;
    CHECK((l1 - expect).norm() == 0.0);

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        const ParamVector a = rand_vec6(rng, 2.0);
        const Vec3 v(u(rng), u(rng), u(rng));
        CHECK((param_matrix(a) * v - param_product_matrix(v) * a).norm() < 1e-12);
    }
}

TEST_CASE("potential hessians at reference points") {
    const PsiFunction quad = PsiFunction::quadratic(Mat6::Identity());
    ParamVector any;
    any << 5, -1, 2, 0.3, 0, 0;
    CHECK((quad.hessian(any) - Mat6::Identity()).norm() == 0.0);

    Mat6 gamma = Mat6::Identity() * 4.0;
    const PsiFunction quad4 = PsiFunction::quadratic(gamma);
    CHECK((quad4.hessian(any) - Mat6::Identity() * 0.25).norm() < 1e-14);

    const PsiFunction ld = PsiFunction::logdet();
    ParamVector eye;
    eye << 1, 1, 1, 0, 0, 0;
    Vec6 diag;
    diag << 1, 1, 1, 2, 2, 2;
    CHECK((ld.hessian(eye) - Mat6(diag.asDiagonal())).norm() < 1e-12);

    std::mt19937_64 rng(33);
    for (int n = 0; n < 30; ++n) {
        const ParamVector a = rand_pd_params(rng);
        const Mat6 h = ld.hessian(a);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat6> es(h);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("closed-form derivatives match finite differences of the potential") {
    const PsiFunction ld = PsiFunction::logdet();
    std::mt19937_64 rng(34);
    const double h = 1e-6;
    for (int n = 0; n < 10; ++n) {
        const ParamVector a = rand_pd_params(rng);
        const Vec6 grad = ld.gradient(a);
        const Mat6 hess = ld.hessian(a);
        for (int i = 0; i < 6; ++i) {
            ParamVector ap = a, am = a;
            ap[i] += h;
            am[i] -= h;
            const double g_fd = (ld.value(ap) - ld.value(am)) / (2.0 * h);
            CHECK(std::abs(g_fd - grad[i]) < 1e-6 * (1.0 + std::abs(grad[i])));
            const Vec6 col_fd = (ld.gradient(ap) - ld.gradient(am)) / (2.0 * h);
            CHECK((col_fd - hess.col(i)).norm() < 1e-6 * (1.0 + hess.col(i).norm()));
        }
    }
}

TEST_CASE("divergence between estimates") {
    const PsiFunction quad = PsiFunction::quadratic(Mat6::Identity());
    const PsiFunction ld = PsiFunction::logdet();
    std::mt19937_64 rng(35);

    for (int n = 0; n < 20; ++n) {
        const ParamVector x = rand_pd_params(rng);
        CHECK(bregman_div(ld, x, x) == 0.0);
        CHECK(bregman_div(quad, x, x) == 0.0);
        const ParamVector y = rand_pd_params(rng);
        CHECK(bregman_div(ld, y, x) >= 0.0);
        CHECK(std::abs(bregman_div(quad, y, x) - 0.5 * (y - x).squaredNorm()) < 1e-12);
    }

    ParamVector eye, twice;
    eye << 1, 1, 1, 0, 0, 0;
    twice << 2, 2, 2, 0, 0, 0;
    CHECK(bregman_div(ld, eye, twice) == doctest::Approx(0.57944154167983575).epsilon(1e-14));
    CHECK(bregman_div(ld, twice, eye) == doctest::Approx(0.92055845832016425).epsilon(1e-14));

    ParamVector indefinite;
    indefinite << 1, 1, -1, 0, 0, 0;
    CHECK_THROWS_AS(bregman_div(ld, indefinite, eye), DomainError);
    CHECK_THROWS_AS(bregman_div(ld, eye, indefinite), DomainError);
}

TEST_CASE("divergence agrees with its quadratic model at close pairs") {
    const PsiFunction ld = PsiFunction::logdet();
    std::mt19937_64 rng(36);
    for (int n = 0; n < 20; ++n) {
        const ParamVector x = rand_pd_params(rng);
        const Vec6 step = rand_vec6(rng, 1e-4);
        const ParamVector y = x + step;
        const double second_order = 0.5 * step.dot(ld.hessian(x) * step);
        CHECK(bregman_div(ld, y, x) ==
              doctest::Approx(second_order).epsilon(1e-3));
    }
}

TEST_CASE("adaptation derivative is the mirrored gradient step") {
    std::mt19937_64 rng(37);
    Mat63 y_mat;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) y_mat(i, j) = rand_vec6(rng, 1.0)[i % 6] + 0.1 * j;
    const Vec3 s(0.4, -0.2, 0.7);

    // Zero sliding value freezes the estimate for every potential.
    const PsiFunction ld = PsiFunction::logdet();
    ParamVector eye;
    eye << 1, 1, 1, 0, 0, 0;
    CHECK(adapt_step_deriv(eye, y_mat, Vec3::Zero(), ld).norm() == 0.0);

    // Quadratic potential with Gamma = gamma I reduces to -gamma Y s.
    const double gamma = 0.02;
    const PsiFunction quad = PsiFunction::quadratic(Mat6::Identity() * gamma);
    CHECK((adapt_step_deriv(eye, y_mat, s, quad) + gamma * (y_mat * s)).norm() < 1e-12);

    // Log-det at the identity: the Hessian is diag(1,1,1,2,2,2), so a unit
    // load on the first coordinate maps straight through.
    Mat63 unit = Mat63::Zero();
    unit(0, 0) = 1.0;
    CHECK((adapt_step_deriv(eye, unit, Vec3(1, 0, 0), ld) + Vec6::Unit(0)).norm() < 1e-14);

    for (int n = 0; n < 20; ++n) {
        const ParamVector a = rand_pd_params(rng);
        const Vec6 deriv = adapt_step_deriv(a, y_mat, s, ld);
        CHECK((ld.hessian(a) * deriv + y_mat * s).norm() < 1e-10);
    }
}

TEST_CASE("potential domains") {
    const PsiFunction ld = PsiFunction::logdet();
    ParamVector eye, indefinite, nan;
    eye << 1, 1, 1, 0, 0, 0;
    indefinite << 1, 1, -1, 0, 0, 0;
    nan << 1, 1, 1, 0, 0, std::nan("");
    CHECK(ld.in_domain(eye));
    CHECK(!ld.in_domain(indefinite));
    CHECK(!ld.in_domain(nan));
    CHECK_THROWS_AS(ld.value(indefinite), DomainError);
    CHECK_THROWS_AS(ld.hessian(indefinite), DomainError);

    const PsiFunction quad = PsiFunction::quadratic(Mat6::Identity());
    CHECK(quad.in_domain(indefinite));
    CHECK(!quad.in_domain(nan));

    CHECK_THROWS_AS(PsiFunction::quadratic(Mat6::Identity() * -1.0), InvalidArgumentError);
}
