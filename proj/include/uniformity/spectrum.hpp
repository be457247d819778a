#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace unif {

// Fourier coefficients of a measure over the box k in [-L, L]^d, stored
// densely in lexicographic order (k = 0 included, value 1 for probability
// measures). outside_bound is a certified sup of |mu-hat(k)| beyond the
// box: 1 for empirical measures, 0 for spectra known to vanish there.
struct Spectrum {
    int dim = 1;
    std::uint32_t cutoff = 0;
    std::vector<std::complex<double>> coeffs;
    std::string source;
    double outside_bound = 1.0;

    Spectrum() = default;
    Spectrum(int d, std::uint32_t L, std::string src);

    std::size_t box_size() const;
    std::size_t index(std::span<const long long> k) const;
    std::complex<double> at(std::span<const long long> k) const;
    void set(std::span<const long long> k, std::complex<double> v);
    // inverse of index(); writes the frequency vector for a flat position
    void unindex(std::size_t pos, std::span<long long> k) const;

    // conjugate-symmetry defect max|mu(-k) - conj(mu(k))|
    double symmetry_defect() const;

    // Little-endian binary layout: int32 d, int32 L, int64 count, then
    // count records of (d * int32 k, double re, double im) covering every
    // nonzero frequency in the box.
    void write_binary(std::ostream& os) const;
    static Spectrum read_binary(std::istream& is);
    std::string to_json() const;
    static Spectrum from_json(const std::string& text);
};

} // namespace unif
