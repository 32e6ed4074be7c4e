#include "hip/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hip/errors.hpp"

namespace hip {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    // Use the symmetry relation where the continued fraction converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, int df) {
    if (df <= 0) return 1.0;
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    double nu = df;
    double x = nu / (nu + t * t);
    double tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, x);
    return t >= 0.0 ? tail : 1.0 - tail;
}

double student_t_two_sided_p(double t, int df) {
    return std::min(1.0, 2.0 * student_t_sf(std::fabs(t), df));
}

double normal_two_sided_p(double z) {
    return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

std::vector<double> average_ranks(std::span<const double> xs) {
    const auto n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const auto n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ConstantInput("Pearson correlation undefined for constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    auto rx = average_ranks(xs);
    auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

namespace {

// Counts strict inversions of ys via bottom-up merge sort.
long long merge_count(std::vector<double>& ys) {
    const auto n = ys.size();
    std::vector<double> buf(n);
    long long swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            std::size_t mid = lo + width;
            std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (ys[j] < ys[i]) {
                    swaps += static_cast<long long>(mid - i);
                    buf[k++] = ys[j++];
                } else {
                    buf[k++] = ys[i++];
                }
            }
            while (i < mid) buf[k++] = ys[i++];
            while (j < hi) buf[k++] = ys[j++];
            std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi),
                      ys.begin() + static_cast<long>(lo));
        }
    }
    return swaps;
}

long long tie_pairs(std::span<const double> sorted) {
    long long total = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        long long t = static_cast<long long>(j - i + 1);
        total += t * (t - 1) / 2;
        i = j + 1;
    }
    return total;
}

}  // namespace

double kendall_tau_b(std::span<const double> xs, std::span<const double> ys) {
    const auto n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (xs[i] != xs[j]) return xs[i] < xs[j];
        return ys[i] < ys[j];
    });

    long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;

    // Tie counts: n1 over x groups, n2 over y groups, n3 over joint groups.
    long long n1 = 0, n3 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
            long long t = static_cast<long long>(j - i + 1);
            n1 += t * (t - 1) / 2;
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && ys[order[b + 1]] == ys[order[a]]) ++b;
                long long u = static_cast<long long>(b - a + 1);
                n3 += u * (u - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
    }
    std::vector<double> ys_sorted_by_y(ys.begin(), ys.end());
    std::sort(ys_sorted_by_y.begin(), ys_sorted_by_y.end());
    long long n2 = tie_pairs(ys_sorted_by_y);

    std::vector<double> ys_in_x_order(n);
    for (std::size_t i = 0; i < n; ++i) ys_in_x_order[i] = ys[order[i]];
    long long discordant = merge_count(ys_in_x_order);

    long long concordant = n0 - n1 - n2 + n3 - discordant;
    double denom =
        std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
    if (denom == 0.0) {
        throw ConstantInput("Kendall tau undefined for constant input");
    }
    return static_cast<double>(concordant - discordant) / denom;
}

CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw LengthMismatch("input lengths differ: " + std::to_string(xs.size()) + " vs " +
                             std::to_string(ys.size()));
    }
    if (xs.size() < 3) {
        throw LengthMismatch("need at least 3 points, got " + std::to_string(xs.size()));
    }
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    };
    if (constant(xs) || constant(ys)) {
        throw ConstantInput("correlation undefined for constant input");
    }

    const auto n = static_cast<double>(xs.size());
    const int df = static_cast<int>(xs.size()) - 2;
    auto t_pvalue = [&](double r) {
        double denom = 1.0 - r * r;
        if (denom <= 0.0) return 0.0;
        double t = r * std::sqrt(static_cast<double>(df) / denom);
        return student_t_two_sided_p(t, df);
    };

    CorrelationResult out;
    out.pearson_r = pearson(xs, ys);
    out.spearman_rho = spearman(xs, ys);
    out.kendall_tau = kendall_tau_b(xs, ys);
    out.p_pearson = t_pvalue(out.pearson_r);
    out.p_spearman = t_pvalue(out.spearman_rho);
    double z = 3.0 * out.kendall_tau * std::sqrt(n * (n - 1.0)) /
               std::sqrt(2.0 * (2.0 * n + 5.0));
    out.p_kendall = normal_two_sided_p(z);
    return out;
}

}  // namespace hip
