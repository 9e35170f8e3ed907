#include "morawetz/vector_field.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace morawetz;

namespace {

std::vector<std::vector<double>> random_points(int dim, int count, unsigned seed,
                                               double lo = -5.0, double hi = 5.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& x : p) x = uni(rng);
    return pts;
}

}  // namespace

TEST_CASE("radial weight closed forms") {
    VectorFieldSpec spec = radial_weight(3, 0.0);
    CHECK(spec.ambient_dim == 3);
    CHECK(spec.delta_constant == doctest::Approx(8.0 * M_PI));

    std::vector<double> x{1.0, 0.0, 0.0};
    CHECK(spec.div(x) == doctest::Approx(2.0).epsilon(1e-14));
    x = {0.0, 2.0, 0.0};
    CHECK(spec.div(x) == doctest::Approx(1.0).epsilon(1e-14));

    // |X| = r / sqrt(r^2 + eps^2), div = (2 r^2 + 3 eps^2) / R^3 at eps > 0.
    VectorFieldSpec reg = radial_weight(3, 0.5);
    std::vector<double> y{0.6, -0.8, 0.0};  // r = 1
    double R = std::sqrt(1.0 + 0.25);
    CHECK(reg.x_bound_norm(y) == doctest::Approx(1.0 / R).epsilon(1e-14));
    CHECK(reg.div(y) == doctest::Approx((2.0 + 3.0 * 0.25) / (R * R * R)).epsilon(1e-14));
    CHECK(reg.weight(y) == doctest::Approx(R).epsilon(1e-14));
}

TEST_CASE("radial weight in four dimensions") {
    // div X = (n-1)/r and -Lap div X = (n-1)(n-3)/r^3, which is 3 at
    // n = 4, r = 1 (no delta term above three dimensions).
    VectorFieldSpec spec = radial_weight(4, 0.0);
    std::vector<double> x{1.0, 0.0, 0.0, 0.0};
    CHECK(spec.div(x) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(spec.neg_lap_div(x) == doctest::Approx(3.0).epsilon(1e-12));
    x = {0.0, 0.0, 2.0, 0.0};
    CHECK(spec.neg_lap_div(x) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("pair weight jacobian spectrum and divergence") {
    VectorFieldSpec spec = pair_weight_3d(0.0);
    CHECK(spec.ambient_dim == 6);
    CHECK(spec.kappa == doctest::Approx(2.0));
    CHECK(spec.delta_constant == doctest::Approx(32.0 * M_PI));

    // Separation w = x1 - x2 = (2,0,0): div X = 4/|w| = 2, Jacobian
    // eigenvalues {0,0,0,0,1,1} (transverse directions at rate 2/|w|).
    std::vector<double> z{1.0, 0.0, 0.0, -1.0, 0.0, 0.0};
    CHECK(spec.div(z) == doctest::Approx(2.0).epsilon(1e-13));
    Eigen::MatrixXd J = spec.jacobian(z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ev(i)) < 1e-13);
    CHECK(ev(4) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev(5) == doctest::Approx(1.0).epsilon(1e-13));

    // Blockwise |X| bound: each 3-block has norm <= 1, the 6-vector sqrt(2).
    CHECK(spec.x_bound_block == 3);
    CHECK(spec.x_bound_norm(z) == doctest::Approx(1.0).epsilon(1e-13));
    Eigen::VectorXd X = spec.gradient(z);
    CHECK(X.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("axis line lifted weight at a reference point") {
    VectorFieldSpec spec = line_diagonal_weight_2d(Line2D{{0.0, 0.0}, 0.0}, 0.0);
    CHECK(spec.ambient_dim == 4);
    CHECK(spec.delta_constant == doctest::Approx(8.0 * M_PI));

    // z = (x1, y1, x2, y2) = (1,0,0,0): reduced distance d = 1/sqrt(2),
    // X = (1,0,-1,0)/sqrt(2), div = 2/d = 2 sqrt(2), and the first
    // diagonal Jacobian entry vanishes.
    std::vector<double> z{1.0, 0.0, 0.0, 0.0};
    double d = 1.0 / std::sqrt(2.0);
    CHECK(spec.weight(z) == doctest::Approx(d).epsilon(1e-14));
    Eigen::VectorXd X = spec.gradient(z);
    CHECK(X(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(X(1)) < 1e-14);
    CHECK(X(2) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(X(3)) < 1e-14);
    CHECK(spec.div(z) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(std::abs(spec.jacobian(z)(0, 0)) < 1e-13);
    CHECK(spec.jacobian(z).trace() == doctest::Approx(2.0 / d).epsilon(1e-13));
}

TEST_CASE("axis line contraction identity on random vectors") {
    // v . (grad X) v = (2/d) (|v_z|^2 - (z_r . v_z)^2 / |z_r|^2) where z_r
    // and v_z are the reduced coordinates (s, t1, t2) with s the scaled
    // along-diagonal difference.
    VectorFieldSpec spec = line_diagonal_weight_2d(Line2D{{0.0, 0.0}, 0.0}, 0.0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> z(4), v(4);
        for (auto& x : z) x = uni(rng);
        for (auto& x : v) x = uni(rng);
        Eigen::VectorXd zr(3), vz(3);
        zr << (z[0] - z[2]) / std::sqrt(2.0), z[1], z[3];
        vz << (v[0] - v[2]) / std::sqrt(2.0), v[1], v[3];
        double d = zr.norm();
        if (d < 0.3) continue;
        double expect = (vz.squaredNorm() - std::pow(zr.dot(vz) / d, 2)) / d;
        Eigen::MatrixXd J = spec.jacobian(z);
        Eigen::Map<Eigen::VectorXd> ve(v.data(), 4);
        double got = ve.dot(J * ve);
        CHECK(std::abs(got - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("quadruple diagonal weight degenerate directions") {
    VectorFieldSpec spec = diag_1d_weight(0.5);
    CHECK(spec.ambient_dim == 4);
    // On the diagonal the quadratic form vanishes: weight = eps, X = 0.
    std::vector<double> diag{1.0, 1.0, 1.0, 1.0};
    CHECK(spec.weight(diag) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(spec.gradient(diag).norm() < 1e-14);

    VectorFieldSpec sharp = diag_1d_weight(0.0);
    std::vector<double> z{1.0, 0.0, 0.0, 0.0};
    CHECK(sharp.weight(z) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(sharp.delta_constant == doctest::Approx(8.0 * M_PI));
}

TEST_CASE("identity suite passes for every weight kind") {
    const double eps = 1e-2;
    std::vector<VectorFieldSpec> specs = {
        radial_weight(3, eps),
        pair_weight_3d(eps),
        line_diagonal_weight_2d(Line2D{{0.0, 0.0}, 0.0}, eps),
        line_diagonal_weight_2d(Line2D{{0.4, -0.7}, M_PI / 3.0}, eps),
        diag_1d_weight(eps),
    };
    for (const auto& spec : specs) {
        auto pts = random_points(spec.ambient_dim, 400, 7);
        FieldIdentityReport rep = verify_field_identities(spec, pts);
        CAPTURE(to_string(spec.kind));
        CHECK(rep.ok());
        CHECK(rep.max_x_norm <= 1.0 + 3.0 * eps);
        CHECK(rep.n_points == 400);
    }
}

TEST_CASE("regularized bilaplacian concentrates to the stated delta constants") {
    std::vector<double> eps_list{1e-2, 3e-3, 1e-3};
    std::vector<VectorFieldSpec> specs = {
        radial_weight(3, 0.0),
        pair_weight_3d(0.0),
        line_diagonal_weight_2d(Line2D{{0.0, 0.0}, 0.0}, 0.0),
        diag_1d_weight(0.0),
    };
    for (const auto& spec : specs) {
        auto rows = delta_limit_check(spec, 1.0, eps_list);
        REQUIRE(rows.size() == 3);
        CAPTURE(to_string(spec.kind));
        CHECK(rows[0].rel_error > rows[2].rel_error);  // converging in eps
        CHECK(rows[2].rel_error <= 1e-3);
        CHECK(rows[2].target == doctest::Approx(spec.delta_constant).epsilon(1e-12));
    }
}

TEST_CASE("singular-set guard") {
    VectorFieldSpec sharp = radial_weight(3, 0.0);
    std::vector<double> origin{0.0, 0.0, 0.0};
    CHECK_THROWS(sharp.check_regular(origin));
    std::vector<double> away{1.0, 0.0, 0.0};
    CHECK_NOTHROW(sharp.check_regular(away));

    // With eps > 0 the regularized weight is smooth everywhere, including
    // on the former singular set.
    VectorFieldSpec reg = radial_weight(3, 0.1);
    CHECK_NOTHROW(reg.check_regular(origin));
    CHECK(std::isfinite(reg.div(origin)));
}
