#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace unif {

// Neumaier-compensated accumulator. Summation order is always fixed by the
// caller, so results are bitwise reproducible.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

// Number of worker threads: UNIFORMITY_THREADS wins over the OpenMP default.
// Thread count never changes any computed byte; it only changes wall time.
int worker_threads();

// Installs worker_threads() as the OpenMP thread count for this process.
void apply_thread_env();

namespace detail {
// Block size for deterministic reductions. Fixed, never derived from the
// thread count, so the partial-sum tree is the same under any schedule.
inline constexpr std::size_t kReduceBlock = 4096;
} // namespace detail

// Deterministic parallel sum of term(i) for i in [0, n): each fixed-size
// block is Kahan-accumulated independently, block partials are then
// combined serially in block order.
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t nb = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    if (nb <= 1) {
        KahanSum acc;
        for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
        return acc.value();
    }
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = std::min(n, lo + detail::kReduceBlock);
        KahanSum acc;
        for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
        partial[static_cast<std::size_t>(b)] = acc.value();
    }
    KahanSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

// Serial reference for blocked_sum: one straight Kahan pass.
template <class Term>
double serial_sum(std::size_t n, Term&& term) {
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
    return acc.value();
}

// Complex variant; real and imaginary parts carry their own compensation.
template <class Term>
std::complex<double> blocked_sum_complex(std::size_t n, Term&& term) {
    const std::size_t nb = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    std::vector<double> pre(nb, 0.0), pim(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = std::min(n, lo + detail::kReduceBlock);
        KahanSum re, im;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::complex<double> z = term(i);
            re.add(z.real());
            im.add(z.imag());
        }
        pre[static_cast<std::size_t>(b)] = re.value();
        pim[static_cast<std::size_t>(b)] = im.value();
    }
    KahanSum re, im;
    for (std::size_t b = 0; b < nb; ++b) {
        re.add(pre[b]);
        im.add(pim[b]);
    }
    return {re.value(), im.value()};
}

template <class Term>
std::complex<double> serial_sum_complex(std::size_t n, Term&& term) {
    KahanSum re, im;
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> z = term(i);
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

} // namespace unif
