#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace unif {

// Reduce a coordinate to the canonical representative in [0, 1).
double reduce_mod1(double x);

// Shorter-arc difference |a - b| on the circle, inputs in [0, 1).
double wrap_delta(double a, double b);

// A point of the d-torus, coordinates canonicalized to [0, 1).
class Point {
public:
    explicit Point(std::vector<double> coords);

    int dim() const { return static_cast<int>(coords_.size()); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

private:
    std::vector<double> coords_;
};

// Euclidean wrap metric; value in [0, sqrt(d)/2].
double wrap_distance(const Point& a, const Point& b);
double wrap_distance(std::span<const double> a, std::span<const double> b);

// Ordered list of torus points of one dimension; contiguous storage so
// kernels can stream it. Order is meaningful: a prefix is a valid set.
class PointSet {
public:
    explicit PointSet(int dim, std::string label = {});

    void append(std::span<const double> coords); // reduced mod 1
    void append(const Point& p);
    void reserve(std::size_t n) { xs_.reserve(n * static_cast<std::size_t>(dim_)); }

    int dim() const { return dim_; }
    std::size_t size() const { return xs_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const { return xs_.empty(); }
    std::span<const double> at(std::size_t i) const {
        return {xs_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    Point point(std::size_t i) const;
    const std::vector<double>& raw() const { return xs_; }
    PointSet prefix(std::size_t n) const;

    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    // CSV: header line "dim,<d>", then one row of coordinates per point,
    // 17 significant digits. JSON: array of arrays.
    void write_csv(std::ostream& os) const;
    static PointSet read_csv(std::istream& is, std::string label = {});
    std::string to_json() const;
    static PointSet from_json(const std::string& text, std::string label = {});

private:
    int dim_;
    std::vector<double> xs_;
    std::string label_;
};

// Discrete probability measure on the torus. Weights are renormalized by
// their exact sum at construction.
struct EmpiricalMeasure {
    PointSet support;
    std::vector<double> weights;

    EmpiricalMeasure(PointSet ps, std::vector<double> w);
    int dim() const { return support.dim(); }
    std::size_t size() const { return support.size(); }
    void check_invariants() const; // throws SpecError
};

// Uniform weights 1/N.
EmpiricalMeasure empirical_from_points(PointSet ps);

// Gradient norms of a test function on the unit-volume torus plus its exact
// integral. L1 <= L2 <= Linf must hold.
struct GradientStats {
    double grad_inf = 0.0;
    double grad_l2 = 0.0;
    double grad_l1 = 0.0;
    double true_integral = 0.0;

    void check_ordering() const; // throws SpecError on Hoelder violation
};

} // namespace unif
