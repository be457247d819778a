#include "uniformity/torus.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace unif {

double reduce_mod1(double x) {
    if (!std::isfinite(x)) throw SpecError("torus coordinate must be finite");
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0; // x just below an integer rounds up
    return r;
}

double wrap_delta(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw SpecError("point dimension must be >= 1");
    for (double& c : coords_) c = reduce_mod1(c);
}

double wrap_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw SpecError("wrap_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = wrap_delta(a[i], b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

double wrap_distance(const Point& a, const Point& b) {
    return wrap_distance(std::span<const double>(a.coords()), std::span<const double>(b.coords()));
}

PointSet::PointSet(int dim, std::string label) : dim_(dim), label_(std::move(label)) {
    if (dim < 1) throw SpecError("point set dimension must be >= 1");
}

void PointSet::append(std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != dim_) throw SpecError("append: dimension mismatch");
    for (double c : coords) xs_.push_back(reduce_mod1(c));
}

void PointSet::append(const Point& p) { append(std::span<const double>(p.coords())); }

Point PointSet::point(std::size_t i) const {
    auto s = at(i);
    return Point(std::vector<double>(s.begin(), s.end()));
}

PointSet PointSet::prefix(std::size_t n) const {
    PointSet out(dim_, label_);
    const std::size_t m = std::min(n, size());
    out.xs_.assign(xs_.begin(), xs_.begin() + static_cast<std::ptrdiff_t>(m * static_cast<std::size_t>(dim_)));
    return out;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void PointSet::write_csv(std::ostream& os) const {
    os << "dim," << dim_ << "\n";
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        auto p = at(i);
        for (int j = 0; j < dim_; ++j) {
            if (j) os << ',';
            os << fmt17(p[static_cast<std::size_t>(j)]);
        }
        os << "\n";
    }
}

PointSet PointSet::read_csv(std::istream& is, std::string label) {
    std::string line;
    if (!std::getline(is, line)) throw SpecError("point CSV: missing header");
    int d = 0;
    if (std::sscanf(line.c_str(), "dim,%d", &d) != 1 || d < 1)
        throw SpecError("point CSV: header must be 'dim,<d>'");
    PointSet out(d, std::move(label));
    std::vector<double> row(static_cast<std::size_t>(d));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        for (int j = 0; j < d; ++j) {
            if (!std::getline(ss, cell, ',')) throw SpecError("point CSV: short row");
            row[static_cast<std::size_t>(j)] = std::stod(cell);
        }
        out.append(row);
    }
    return out;
}

std::string PointSet::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        auto p = at(i);
        arr.push_back(std::vector<double>(p.begin(), p.end()));
    }
    return arr.dump();
}

PointSet PointSet::from_json(const std::string& text, std::string label) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array() || arr.empty()) throw SpecError("point JSON: expected nonempty array of arrays");
    const int d = static_cast<int>(arr[0].size());
    PointSet out(d, std::move(label));
    for (const auto& row : arr) {
        const auto v = row.get<std::vector<double>>();
        out.append(v);
    }
    return out;
}

EmpiricalMeasure::EmpiricalMeasure(PointSet ps, std::vector<double> w)
    : support(std::move(ps)), weights(std::move(w)) {
    if (support.empty()) throw SpecError("empirical measure: empty support");
    if (weights.size() != support.size()) throw SpecError("empirical measure: weight/support length mismatch");
    KahanSum s;
    for (double x : weights) {
        if (!(x >= 0.0)) throw SpecError("empirical measure: negative weight");
        s.add(x);
    }
    const double total = s.value();
    if (!(total > 0.0)) throw SpecError("empirical measure: zero total mass");
    for (double& x : weights) x /= total;
}

void EmpiricalMeasure::check_invariants() const {
    KahanSum s;
    for (double x : weights) s.add(x);
    if (std::abs(s.value() - 1.0) > 1e-12) throw SpecError("empirical measure: weights do not sum to 1");
}

EmpiricalMeasure empirical_from_points(PointSet ps) {
    const std::size_t n = ps.size();
    if (n == 0) throw SpecError("empirical_from_points: empty point set");
    return EmpiricalMeasure(std::move(ps), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void GradientStats::check_ordering() const {
    if (!(std::isfinite(grad_inf) && std::isfinite(grad_l2) && std::isfinite(grad_l1)))
        throw SpecError("gradient stats must be finite");
    const double tol = 1e-9 * std::max(1.0, grad_inf);
    if (grad_l1 > grad_l2 + tol || grad_l2 > grad_inf + tol)
        throw SpecError("gradient norms violate L1 <= L2 <= Linf on the unit-volume torus");
}

} // namespace unif
