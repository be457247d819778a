#include "uniformity/records.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace unif {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// minimal CSV escaping: labels never contain quotes, but may contain commas
std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos) return s;
    return '"' + s + '"';
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

constexpr const char* kHeader =
    "sequence_label,d,N,metric,value,tail,bracket_lo,bracket_hi,t_star,wall_time_ms,note";

} // namespace

std::string records_csv(std::span<const ExperimentRecord> recs) {
    std::ostringstream os;
    os << kHeader << "\n";
    for (const auto& r : recs) {
        os << csv_field(r.sequence_label) << ',' << r.d << ',' << r.N << ',' << r.metric << ','
           << fmt17(r.value) << ',' << fmt17(r.tail) << ',' << fmt17(r.bracket_lo) << ','
           << fmt17(r.bracket_hi) << ',' << fmt17(r.t_star) << ',' << r.wall_time_ms << ','
           << csv_field(r.note) << "\n";
    }
    return os.str();
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kHeader) throw SpecError("records CSV: bad header");
    std::vector<ExperimentRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_row(line);
        if (cells.size() != 11) throw SpecError("records CSV: bad row");
        ExperimentRecord r;
        r.sequence_label = cells[0];
        r.d = std::stoi(cells[1]);
        r.N = std::stoull(cells[2]);
        r.metric = cells[3];
        r.value = std::stod(cells[4]);
        r.tail = std::stod(cells[5]);
        r.bracket_lo = std::stod(cells[6]);
        r.bracket_hi = std::stod(cells[7]);
        r.t_star = std::stod(cells[8]);
        r.wall_time_ms = std::stoull(cells[9]);
        r.note = cells[10];
        out.push_back(std::move(r));
    }
    return out;
}

std::string records_json(std::span<const ExperimentRecord> recs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : recs)
        arr.push_back({{"sequence_label", r.sequence_label},
                       {"d", r.d},
                       {"N", r.N},
                       {"metric", r.metric},
                       {"value", r.value},
                       {"tail", r.tail},
                       {"bracket_lo", r.bracket_lo},
                       {"bracket_hi", r.bracket_hi},
                       {"t_star", r.t_star},
                       {"wall_time_ms", r.wall_time_ms},
                       {"note", r.note}});
    return arr.dump();
}

std::vector<ExperimentRecord> records_from_json(const std::string& text) {
    const auto arr = nlohmann::json::parse(text);
    std::vector<ExperimentRecord> out;
    for (const auto& jr : arr) {
        ExperimentRecord r;
        r.sequence_label = jr.at("sequence_label").get<std::string>();
        r.d = jr.at("d").get<int>();
        r.N = jr.at("N").get<std::uint64_t>();
        r.metric = jr.at("metric").get<std::string>();
        r.value = jr.at("value").get<double>();
        r.tail = jr.value("tail", 0.0);
        r.bracket_lo = jr.value("bracket_lo", 0.0);
        r.bracket_hi = jr.value("bracket_hi", 0.0);
        r.t_star = jr.value("t_star", 0.0);
        r.wall_time_ms = jr.value("wall_time_ms", std::uint64_t{0});
        r.note = jr.value("note", std::string());
        out.push_back(std::move(r));
    }
    return out;
}

ScalingFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw SpecError("fit: need >= 2 samples");
    const std::size_t n = xs.size();
    KahanSum sx, sy, sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
        sxx.add(xs[i] * xs[i]);
        sxy.add(xs[i] * ys[i]);
        syy.add(ys[i] * ys[i]);
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx.value() - sx.value() * sx.value();
    if (det == 0.0) throw SpecError("fit: degenerate abscissae");
    ScalingFit f;
    f.exponent = (nn * sxy.value() - sx.value() * sy.value()) / det;
    f.intercept = (sy.value() - f.exponent * sx.value()) / nn;
    const double sst = syy.value() - sy.value() * sy.value() / nn;
    KahanSum sse;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (f.intercept + f.exponent * xs[i]);
        sse.add(e * e);
    }
    f.r_squared = sst > 0.0 ? 1.0 - sse.value() / sst : 1.0;
    return f;
}

ScalingFit fit_loglog(std::span<const std::uint64_t> ns, std::span<const double> values) {
    if (ns.size() != values.size() || ns.size() < 2) throw SpecError("fit: need >= 2 samples");
    std::vector<double> xs(ns.size()), ys(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(values[i] > 0.0)) throw SpecError("fit: values must be positive for a log fit");
        xs[i] = std::log(static_cast<double>(ns[i]));
        ys[i] = std::log(values[i]);
    }
    ScalingFit f = fit_linear(xs, ys);
    f.n_min = *std::min_element(ns.begin(), ns.end());
    f.n_max = *std::max_element(ns.begin(), ns.end());
    return f;
}

std::string ScalingFit::to_json() const {
    nlohmann::json j;
    j["exponent"] = exponent;
    j["intercept"] = intercept;
    j["r_squared"] = r_squared;
    j["n_min"] = n_min;
    j["n_max"] = n_max;
    return j.dump();
}

} // namespace unif
