#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "hip/errors.hpp"
#include "hip/stats.hpp"

using namespace hip;

namespace {

// ---- independent oracles, deliberately written with different routes ----

// Pearson via the sum formula rather than centered two-pass.
double pearson_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
    auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
    }
    double cov = sxy - sx * sy / n;
    double vx = sxx - sx * sx / n;
    double vy = syy - sy * sy / n;
    return cov / std::sqrt(vx * vy);
}

// Mean ranks computed by scanning sorted copies, then the oracle Pearson.
std::vector<double> ranks_oracle(const std::vector<double>& xs) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), xs[i]) - sorted.begin();
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), xs[i]) - sorted.begin();
        ranks[i] = (static_cast<double>(lo) + static_cast<double>(hi) + 1.0) / 2.0;
    }
    return ranks;
}

double spearman_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
    return pearson_oracle(ranks_oracle(xs), ranks_oracle(ys));
}

// Kendall tau-b by explicit enumeration of all pairs.
double kendall_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    const auto n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = xs[i] - xs[j];
            double dy = ys[i] - ys[j];
            if (dx == 0 && dy == 0) continue;  // joint tie: counted in neither
            if (dx == 0) ++ties_x;
            else if (dy == 0) ++ties_y;
            else if (dx * dy > 0) ++concordant;
            else ++discordant;
        }
    }
    double nc_nd = static_cast<double>(concordant - discordant);
    double denom = std::sqrt(static_cast<double>(concordant + discordant + ties_x)) *
                   std::sqrt(static_cast<double>(concordant + discordant + ties_y));
    return nc_nd / denom;
}

// Student-t upper tail by adaptive Simpson integration of the density.
double t_pdf(double x, double nu) {
    double log_norm = std::lgamma((nu + 1) / 2.0) - std::lgamma(nu / 2.0) -
                      0.5 * std::log(nu * M_PI);
    return std::exp(log_norm - (nu + 1) / 2.0 * std::log1p(x * x / nu));
}

double simpson(double a, double b, double nu, int depth, double fa, double fm, double fb) {
    double m = (a + b) / 2.0;
    double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
    double flm = t_pdf(lm, nu), frm = t_pdf(rm, nu);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 1e-14) {
        return left + right;
    }
    return simpson(a, m, nu, depth - 1, fa, flm, fm) +
           simpson(m, b, nu, depth - 1, fm, frm, fb);
}

double t_sf_oracle(double t, int df) {
    double nu = df;
    // integrate the density from 0 to t; the upper tail is 0.5 minus that
    double bulk = simpson(0.0, t, nu, 40, t_pdf(0.0, nu), t_pdf(t / 2.0, nu), t_pdf(t, nu));
    return 0.5 - bulk;
}

}  // namespace

TEST_CASE("correlate: perfect linear and perfect monotone fixtures") {
    std::vector<double> xs = {1, 2, 3};
    std::vector<double> ys = {2, 4, 6};
    auto r = correlate(xs, ys);
    CHECK(r.pearson_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.kendall_tau == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> cubes = {1, 8, 27, 64};
    std::vector<double> lin = {1, 2, 3, 4};
    auto r2 = correlate(lin, cubes);
    CHECK(r2.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r2.kendall_tau == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r2.pearson_r < 1.0);

    std::vector<double> neg = {6, 4, 2};
    auto r3 = correlate(xs, neg);
    CHECK(r3.pearson_r == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r3.kendall_tau == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("correlate: errors") {
    std::vector<double> a = {1, 2, 3};
    std::vector<double> b = {1, 2};
    CHECK_THROWS_AS(correlate(a, b), LengthMismatch);
    CHECK_THROWS_AS(correlate(b, b), LengthMismatch);
    std::vector<double> flat = {5, 5, 5};
    CHECK_THROWS_AS(correlate(a, flat), ConstantInput);
    CHECK_THROWS_AS(correlate(flat, a), ConstantInput);
}

TEST_CASE("correlate matches brute-force oracles on random data") {
    std::mt19937 rng(314159);
    std::uniform_int_distribution<int> n_dist(20, 50);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    std::uniform_int_distribution<int> tier(0, 4);

    for (int trial = 0; trial < 100; ++trial) {
        int n = n_dist(rng);
        std::vector<double> xs, ys;
        for (int i = 0; i < n; ++i) {
            // quantize some values so ties occur regularly
            double x = value(rng);
            double y = value(rng);
            if (tier(rng) == 0) x = std::round(x);
            if (tier(rng) == 0) y = std::round(y);
            xs.push_back(x);
            ys.push_back(y);
        }
        auto r = correlate(xs, ys);
        CHECK(r.pearson_r == doctest::Approx(pearson_oracle(xs, ys)).epsilon(1e-12));
        CHECK(r.spearman_rho == doctest::Approx(spearman_oracle(xs, ys)).epsilon(1e-12));
        CHECK(r.kendall_tau == doctest::Approx(kendall_oracle(xs, ys)).epsilon(1e-12));
        CHECK(r.kendall_tau >= -1.0);
        CHECK(r.kendall_tau <= 1.0);
    }
}

TEST_CASE("spearman equals pearson on ranks, exactly") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> value(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 30; ++i) {
            xs.push_back(std::round(value(rng)));
            ys.push_back(std::round(value(rng)));
        }
        if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; })) continue;
        if (std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; })) continue;
        auto rx = average_ranks(xs);
        auto ry = average_ranks(ys);
        CHECK(spearman(xs, ys) == pearson(rx, ry));  // identical, not approximate
    }
}

TEST_CASE("coefficients invariant under positive affine transforms") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> value(-4.0, 4.0);
    std::vector<double> xs, ys;
    for (int i = 0; i < 25; ++i) {
        xs.push_back(value(rng));
        ys.push_back(value(rng));
    }
    std::vector<double> xs2, ys2;
    for (double v : xs) xs2.push_back(3.5 * v + 11.0);
    for (double v : ys) ys2.push_back(0.25 * v - 2.0);

    auto r = correlate(xs, ys);
    auto r2 = correlate(xs2, ys2);
    CHECK(r.pearson_r == doctest::Approx(r2.pearson_r).epsilon(1e-12));
    CHECK(r.spearman_rho == doctest::Approx(r2.spearman_rho).epsilon(1e-12));
    CHECK(r.kendall_tau == doctest::Approx(r2.kendall_tau).epsilon(1e-12));

    // negation of one input flips the sign
    std::vector<double> neg;
    for (double v : ys) neg.push_back(-v);
    auto rn = correlate(xs, neg);
    CHECK(rn.pearson_r == doctest::Approx(-r.pearson_r).epsilon(1e-12));
}

TEST_CASE("student-t tail matches numerical integration to 1e-10") {
    for (int df : {1, 2, 3, 5, 10, 30, 100}) {
        for (double t : {0.0, 0.5, 1.0, 2.0, 3.5, 6.0}) {
            double got = student_t_sf(t, df);
            double want = t_sf_oracle(t, df);
            INFO("df=", df, " t=", t);
            CHECK(std::fabs(got - want) < 1e-10);
        }
    }
    // symmetry
    CHECK(student_t_sf(-1.5, 7) == doctest::Approx(1.0 - student_t_sf(1.5, 7)).epsilon(1e-12));
}

TEST_CASE("p-values are sane") {
    // strong correlation on enough points: tiny p
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(i);
        ys.push_back(2.0 * i + ((i % 3) - 1) * 0.25);
    }
    auto r = correlate(xs, ys);
    CHECK(r.p_pearson < 1e-20);
    CHECK(r.p_spearman < 1e-20);
    CHECK(r.p_kendall < 1e-10);

    // near-independent data: p should not be small
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::vector<double> ax, ay;
    for (int i = 0; i < 30; ++i) {
        ax.push_back(value(rng));
        ay.push_back(value(rng));
    }
    auto ri = correlate(ax, ay);
    CHECK(ri.p_pearson > 1e-4);
    CHECK(ri.p_pearson <= 1.0);
    CHECK(ri.p_kendall <= 1.0);

    // perfect correlation pins p to zero rather than dividing by zero
    std::vector<double> px = {1, 2, 3, 4, 5};
    std::vector<double> py = {2, 4, 6, 8, 10};
    CHECK(correlate(px, py).p_pearson == 0.0);
}

TEST_CASE("incomplete beta edge cases") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1,1) = x
    for (double x : {0.1, 0.25, 0.5, 0.9}) {
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    }
}
