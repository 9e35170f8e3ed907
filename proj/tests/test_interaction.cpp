#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/interaction.hpp"
#include "morawetz/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace morawetz;

namespace {

ComplexField band_limited(int dim, int n, double length, unsigned seed) {
    SpectralGrid g = make_grid(dim, n, length);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexField spec = make_field(g);
    int idx[3];
    int band = n / 4;
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        bool keep = true;
        for (int d = 0; d < dim; ++d) {
            int m = idx[d] <= n / 2 ? idx[d] : idx[d] - n;
            if (std::abs(m) > band) keep = false;
        }
        if (keep) spec.values[i] = cplx(normal(rng), normal(rng));
    }
    return transform(spec, Direction::inverse);
}

ComplexField real_bump(int dim, int n, double length, double width) {
    SpectralGrid g = make_grid(dim, n, length);
    ComplexField f = make_field(g);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            double x = g.coord(idx[d]);
            r2 += x * x;
        }
        f.values[i] = std::exp(-0.5 * r2 / (width * width));
    }
    return f;
}

ComplexField packet2d(const SpectralGrid& g, double amp, double width, double vx, double vy) {
    ComplexField f = make_field(g);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double x = g.coord(idx[0]), y = g.coord(idx[1]);
        f.values[i] = amp * std::exp(-0.5 * (x * x + y * y) / (width * width)) *
                      std::polar(1.0, vx * x + vy * y);
    }
    return f;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("real fields carry no interaction action") {
    ComplexField u3 = real_bump(3, 8, 10.0, 1.5);
    CHECK(std::abs(interaction_action_3d(u3, 0.4)) < 1e-12);
    ComplexField u2 = real_bump(2, 12, 10.0, 1.5);
    CHECK(std::abs(interaction_action_2d(u2, Line2D{{0.0, 0.0}, 0.2}, 0.4)) < 1e-12);
    ComplexField u1 = real_bump(1, 16, 10.0, 1.5);
    CHECK(std::abs(interaction_action_1d(u1, 0.4)) < 1e-12);
}

TEST_CASE("fast paths agree with the brute-force oracles") {
    {
        ComplexField u = band_limited(3, 8, 10.0, 7);
        double eps = 2.0 * u.grid.h;
        CHECK(rel_diff(interaction_action_3d(u, eps), interaction_action_3d_direct(u, eps)) <
              1e-10);
    }
    {
        ComplexField u = band_limited(2, 12, 10.0, 11);
        Line2D line{{0.1, -0.3}, 0.7};
        double eps = 2.0 * u.grid.h;
        CHECK(rel_diff(interaction_action_2d(u, line, eps),
                       interaction_action_2d_direct(u, line, eps)) < 1e-12);
    }
    {
        ComplexField u = band_limited(1, 16, 10.0, 13);
        double eps = 2.0 * u.grid.h;
        CHECK(rel_diff(interaction_action_1d(u, eps), interaction_action_1d_direct(u, eps)) <
              1e-12);
    }
}

TEST_CASE("pair action is invariant under periodic translation") {
    ComplexField u = band_limited(3, 8, 10.0, 19);
    const int n = u.grid.n;
    ComplexField shifted = make_field(u.grid);
    int idx[3];
    const int s[3] = {3, 5, 1};
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
        decode_index(u.grid, i, idx);
        std::size_t j = 0;
        for (int d = 0; d < 3; ++d) j = j * n + static_cast<std::size_t>((idx[d] + s[d]) % n);
        shifted.values[i] = u.values[j];
    }
    double eps = 0.5;
    CHECK(rel_diff(interaction_action_3d(shifted, eps), interaction_action_3d(u, eps)) < 1e-11);
}

TEST_CASE("line action is covariant under a quarter-turn of field and line") {
    // An off-center chirped packet against an off-center line, rotated by
    // +90 degrees together with the line. The symmetry is exact up to the
    // packet tails at the box boundary.
    SpectralGrid g = make_grid(2, 24, 10.0);
    double k0 = 2.0 * M_PI / g.length;
    auto u_at = [&](double x, double y) {
        double xx = x - 0.8, yy = y + 0.6;
        return std::exp(-0.5 * (xx * xx + yy * yy)) *
               std::polar(1.0, k0 * x + 2.0 * k0 * y + 0.3 * x * y);
    };
    ComplexField u = make_field(g), rot = make_field(g);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double x = g.coord(idx[0]), y = g.coord(idx[1]);
        u.values[i] = u_at(x, y);
        rot.values[i] = u_at(y, -x);  // the +90-degree rotated field
    }
    double eps = 0.5;
    double base = interaction_action_2d(u, Line2D{{0.7, -0.4}, 0.3}, eps);
    double turned = interaction_action_2d(rot, Line2D{{0.4, 0.7}, 0.3 + M_PI / 2.0}, eps);
    CHECK(std::abs(base) > 1.0);  // non-degenerate configuration
    CHECK(rel_diff(turned, base) < 1e-6);
}

TEST_CASE("quadrilinear action is invariant under translation of a packet") {
    // The diagonal-distance weight depends only on coordinate differences,
    // so translating localized data leaves the action unchanged (up to the
    // packet tails at the box boundary). The chirped phase keeps the
    // action away from the symmetry-cancelled zero.
    SpectralGrid g = make_grid(1, 24, 12.0);
    auto packet = [&](double c) {
        ComplexField f = make_field(g);
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(i) - c;
            f.values[i] = std::exp(-0.5 * x * x / 0.64) *
                          std::polar(1.0, 0.9 * x + 0.4 * x * x);
        }
        return f;
    };
    double eps = 0.5;
    double left = interaction_action_1d(packet(-1.5), eps);
    double right = interaction_action_1d(packet(1.5), eps);
    CHECK(std::abs(left) > 0.1);
    CHECK(rel_diff(left, right) < 1e-8);
}

TEST_CASE("interaction evaluators enforce their size budgets") {
    ComplexField big2 = make_field(make_grid(2, 128, 16.0));
    CHECK_THROWS(interaction_action_2d(big2, Line2D{}, 0.5));
    CHECK_THROWS(interaction_action_2d_direct(big2, Line2D{}, 0.5));
    ComplexField big1 = make_field(make_grid(1, 128, 16.0));
    CHECK_THROWS(interaction_action_1d(big1, 0.5));
    CHECK_THROWS(interaction_action_1d_direct(big1, 0.5));
}

TEST_CASE("line-restricted L4 of simple profiles") {
    SpectralGrid g = make_grid(2, 32, 12.0);
    Line2D axis{{0.0, 0.0}, 0.0};

    // Constant field: integral is |c|^4 times the chord length.
    ComplexField c = make_field(g);
    for (auto& v : c.values) v = cplx(0.0, 1.3);
    Curve2D curve = make_line_curve(g, axis, 256);
    double chord = 0.0;
    for (double w : curve.arclength_weights) chord += w;
    CHECK(chord == doctest::Approx(g.length).epsilon(1e-12));
    double expect = std::pow(1.3, 4.0) * chord;
    CHECK(line_restricted_l4(c, curve) == doctest::Approx(expect).epsilon(1e-12));

    // Gaussian: int exp(-2 x^2) dx = sqrt(pi/2) on the x-axis.
    ComplexField u = real_bump(2, 32, 12.0, 1.0);
    double got = line_restricted_l4(u, curve);
    CHECK(got == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-8));

    // Doubling the sampling does not move the answer.
    Curve2D curve2 = make_line_curve(g, axis, 512);
    CHECK(line_restricted_l4(u, curve2) == doctest::Approx(got).epsilon(1e-10));
}

TEST_CASE("angular average converges and matches direct quadrature") {
    SpectralGrid g = make_grid(2, 32, 12.0);
    ComplexField u = real_bump(2, 32, 12.0, 1.0);
    Point c{0.0, 0.0, 0.0};
    double eps = 2.0 * g.h;
    double a32 = angular_average_weighted_l4(u, c, 32, eps);
    double a64 = angular_average_weighted_l4(u, c, 64, eps);
    CHECK(rel_diff(a32, a64) < 5e-3);

    double ref = weighted_l4_direct_quadrature(u, c);
    CHECK(rel_diff(a64, ref) < 1e-2);

    // Closed form for |u|^4 = exp(-2 r^2): int / r dx = 2 pi int exp(-2 r^2) dr.
    double closed = 2.0 * M_PI *
                    adaptive_simpson([](double r) { return std::exp(-2.0 * r * r); }, 0.0, 8.0,
                                     1e-12);
    CHECK(rel_diff(ref, closed) < 1e-3);
}

TEST_CASE("spectral upsampling reproduces the coarse nodes") {
    ComplexField u = band_limited(2, 16, 10.0, 41);
    ComplexField fine = spectral_upsample(u, 2);
    CHECK(fine.grid.n == 32);
    CHECK(fine.grid.length == doctest::Approx(u.grid.length));
    const int n = u.grid.n, m = fine.grid.n;
    double err = 0.0, scale = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx coarse = u.values[static_cast<std::size_t>(a) * n + b];
            cplx up = fine.values[(static_cast<std::size_t>(a) * 2) * m + 2 * b];
            err = std::max(err, std::abs(coarse - up));
            scale = std::max(scale, std::abs(coarse));
        }
    CHECK(err / scale < 1e-12);
}

TEST_CASE("monotonicity and FTC checks on synthetic traces") {
    DiagnosticTrace good;
    for (int i = 0; i <= 5; ++i) good.times.push_back(0.1 * i);
    for (double t : good.times) {
        good.channels["M_line"].push_back(10.0 * M_PI * t);
        good.channels["line_l4"].push_back(1.0);
        good.channels["mass"].push_back(4.0);
        good.channels["hhalf_sq"].push_back(3.0);
    }
    auto reports = monotonicity_and_ftc_check(good, WeightKind::line_diag2d);
    REQUIRE(reports.size() >= 4);
    CHECK(reports[0].name == "monotonicity");
    CHECK(reports[1].name == "pointwise-2pi");
    CHECK(reports[2].name == "ftc");
    CHECK(reports[3].name == "ftc-gap");
    CHECK(!any_failed(reports));
    CHECK(reports[1].constant_used == doctest::Approx(2.0 * M_PI));

    DiagnosticTrace bad = good;
    for (std::size_t i = 0; i < bad.times.size(); ++i)
        bad.channels["M_line"][i] = -static_cast<double>(i);
    auto bad_reports = monotonicity_and_ftc_check(bad, WeightKind::line_diag2d);
    CHECK(bad_reports[0].failed());

    // Pair kind carries the 16 pi constant; octet kind is informational.
    DiagnosticTrace pair = good;
    pair.channels["M_pair"] = pair.channels["M_line"];
    pair.channels["quad_l4"] = pair.channels["line_l4"];
    auto pr = monotonicity_and_ftc_check(pair, WeightKind::pair3d);
    CHECK(pr[1].name == "pointwise-16pi");
    CHECK(pr[1].constant_used == doctest::Approx(16.0 * M_PI));

    DiagnosticTrace oct = good;
    oct.channels["M_diag"] = oct.channels["M_line"];
    oct.channels["oct_l8"] = oct.channels["line_l4"];
    oct.channels["hone"] = {1, 1, 1, 1, 1, 1};
    auto orr = monotonicity_and_ftc_check(oct, WeightKind::diag1d);
    CHECK(orr[1].name == "pointwise-8pi");
    CHECK(orr[1].verdict == EstimateReport::Verdict::info);
    bool has_l8 = false;
    for (const auto& r : orr)
        if (r.name == "l8-ratio") {
            has_l8 = true;
            CHECK(r.verdict == EstimateReport::Verdict::info);
        }
    CHECK(has_l8);

    DiagnosticTrace tiny;
    tiny.times = {0.0, 0.1};
    tiny.channels["M_line"] = {0.0, 0.1};
    tiny.channels["line_l4"] = {1.0, 1.0};
    CHECK_THROWS(monotonicity_and_ftc_check(tiny, WeightKind::line_diag2d));
    CHECK_THROWS(monotonicity_and_ftc_check(good, WeightKind::radial));
}

TEST_CASE("tensor law residual vanishes on zero fields") {
    SpectralGrid g = make_grid(2, 16, 8.0);
    ComplexField z = make_field(g);
    std::array<ComplexField, 3> a{z, z, z};
    CHECK(tensor_residual_check_4d(a, a, Line2D{{0.0, 0.0}, 0.0}, 0.5, 1e-3) == 0.0);
}

TEST_CASE("tensor law residual shrinks at second order in dt") {
    // Smooth periodic-compatible packets: velocities on the wavenumber
    // lattice and width 1 keep the spatial truncation error far below the
    // time-difference error at these step sizes.
    SpectralGrid g = make_grid(2, 24, 8.0);
    double k0 = 2.0 * M_PI / g.length;
    ComplexField a = packet2d(g, 0.8, 1.0, k0, 0.0);
    ComplexField b = packet2d(g, 0.7, 1.0, -k0, k0);
    Line2D line{{0.0, 0.0}, 0.0};
    auto residual = [&](double dt) {
        std::array<ComplexField, 3> sa{strang_step(a, -dt, 3.0, 1.0), a,
                                       strang_step(a, dt, 3.0, 1.0)};
        std::array<ComplexField, 3> sb{strang_step(b, -dt, 3.0, 1.0), b,
                                       strang_step(b, dt, 3.0, 1.0)};
        return tensor_residual_check_4d(sa, sb, line, 0.8, dt);
    };
    double coarse = residual(4e-3);
    double fine = residual(2e-3);
    double ratio = coarse / fine;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}
