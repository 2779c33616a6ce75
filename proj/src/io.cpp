#include "polydyn/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace polydyn {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == v) break;
    }
    return buf;
}

namespace {

[[noreturn]] void fail(const std::string& path, long line,
                       const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    return in;
}

double parse_number(const std::string& path, long line, std::string_view tok) {
    // trim surrounding whitespace
    std::size_t b = tok.find_first_not_of(" \t\r");
    std::size_t e = tok.find_last_not_of(" \t\r");
    if (b == std::string_view::npos)
        fail(path, line, "empty field");
    tok = tok.substr(b, e - b + 1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(path, line, "expected number, got '" + std::string(tok) + "'");
    return v;
}

json read_json_file(const std::string& path) {
    auto in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

json matrix_rows(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_array(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

void dump(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view tok =
                std::string_view(line).substr(start, comma - start);
            row.push_back(parse_number(path, lineno, tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(path, lineno,
                 "expected " + std::to_string(rows.front().size()) +
                     " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    return m;
}

Matrix read_matrix_json(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("n") || !j.contains("m") ||
        !j.contains("entries"))
        throw ParseError(path + ": expected object with n, m, entries");
    const auto n = j.at("n").get<Eigen::Index>();
    const auto m = j.at("m").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(n * m))
        throw ParseError(path + ": entries must hold n*m numbers");
    Matrix out(n, m);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index h = 0; h < m; ++h)
            out(i, h) = entries.at(k++).get<double>();
    return out;
}

Matrix read_matrix(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return read_matrix_json(path);
    return read_matrix_csv(path);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

void write_matrix_json(const std::string& path, const Matrix& m) {
    json j;
    j["n"] = m.rows();
    j["m"] = m.cols();
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index h = 0; h < m.cols(); ++h)
            entries.push_back(m(i, h));
    j["entries"] = std::move(entries);
    dump(path, j);
}

Vector read_vector(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        const json j = read_json_file(path);
        if (!j.is_array()) throw ParseError(path + ": expected a JSON array");
        Vector v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
        return v;
    }
    const Matrix m = read_matrix_csv(path);
    if (m.rows() == 1) return m.row(0).transpose();
    if (m.cols() == 1) return m.col(0);
    throw ParseError(path + ": expected a single CSV line (or column) of values");
}

void write_vector_csv(const std::string& path, const Vector& v) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ",";
        out << format_double(v(i));
    }
    out << "\n";
}

void write_vector_csv_column(const std::string& path, const Vector& v) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out << format_double(v(i)) << "\n";
}

void write_vector_json(const std::string& path, const Vector& v) {
    dump(path, vector_array(v));
}

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
    auto out = open_out(path);
    out << "k,node,dim,value\n";
    for (std::size_t s = 0; s < t.states.size(); ++s) {
        const StateMatrix& x = t.states[s];
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index h = 0; h < x.cols(); ++h)
                out << t.steps[s] << "," << i << "," << h << ","
                    << format_double(x(i, h)) << "\n";
    }
}

void write_limit_json(const std::string& path, const LimitResult& limit,
                      const Trajectory* trajectory) {
    json j;
    j["method"] = to_string(limit.method);
    if (limit.v) {
        json v = json::array();
        for (Eigen::Index i = 0; i < limit.v->rows(); ++i)
            for (Eigen::Index k = 0; k < limit.v->cols(); ++k)
                v.push_back((*limit.v)(i, k));
        j["v"] = std::move(v);
        j["diagnostics"]["row_sum_max_dev"] =
            (limit.v->rowwise().sum().array() - 1.0).abs().maxCoeff();
    } else {
        j["v"] = nullptr;
    }
    j["x_inf"]["n"] = limit.x_inf.rows();
    j["x_inf"]["m"] = limit.x_inf.cols();
    json entries = json::array();
    for (Eigen::Index i = 0; i < limit.x_inf.rows(); ++i)
        for (Eigen::Index h = 0; h < limit.x_inf.cols(); ++h)
            entries.push_back(limit.x_inf(i, h));
    j["x_inf"]["entries"] = std::move(entries);
    if (trajectory) {
        j["diagnostics"]["converged"] = trajectory->converged;
        j["diagnostics"]["steps"] = trajectory->total_steps;
        j["diagnostics"]["final_delta"] = trajectory->final_delta;
        j["diagnostics"]["periodic_suspect"] = trajectory->periodic_suspect;
    }
    dump(path, j);
}

void write_classification_json(const std::string& path,
                               const ConvergenceClass& c) {
    json j;
    j["case"] = to_string(c.kind);
    j["converges"] = c.converges;
    j["reason"] = c.reason;
    if (c.spectral_radius_estimate)
        j["spectral_radius_estimate"] = *c.spectral_radius_estimate;
    else
        j["spectral_radius_estimate"] = nullptr;
    dump(path, j);
}

void write_feasibility_json(const std::string& path,
                            const FeasibilityReport& report) {
    json j;
    j["feasible"] = report.feasible;
    if (report.a)
        j["a"] = vector_array(*report.a);
    else
        j["a"] = nullptr;
    json nodes = json::array();
    for (std::size_t i = 0; i < report.per_node.size(); ++i) {
        json node;
        node["node"] = i;
        node["code"] = to_string(report.per_node[i].code);
        if (report.per_node[i].a) node["a"] = *report.per_node[i].a;
        nodes.push_back(std::move(node));
    }
    j["per_node"] = std::move(nodes);
    dump(path, j);
}

void write_design_json(const std::string& path, const DesignSolution& sol) {
    json j;
    j["a"] = vector_array(sol.a.diagonal());
    j["X0"] = matrix_rows(sol.x0);
    j["residual"] = sol.residual;
    dump(path, j);
}

void write_histogram_csv(const std::string& path, const Histogram& h) {
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << format_double(h.edges(static_cast<Eigen::Index>(b))) << ","
            << format_double(h.edges(static_cast<Eigen::Index>(b) + 1)) << ","
            << h.counts[b] << "\n";
}

namespace {

template <typename T>
void take(json& j, const char* key, T& into) {
    if (auto it = j.find(key); it != j.end()) {
        into = it->get<T>();
        j.erase(it);
    }
}

}  // namespace

ScenarioSpec read_scenario_spec(const std::string& path) {
    json j = read_json_file(path);
    if (!j.is_object()) throw ParseError(path + ": expected a JSON object");
    ScenarioSpec spec;

    std::string kind;
    take(j, "kind", kind);
    if (kind.empty()) throw ParseError(path + ": missing scenario kind");
    try {
        spec.kind = scenario_kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path + ": " + e.what());
    }
    take(j, "n", spec.n);
    take(j, "m", spec.m);
    take(j, "seed", spec.seed);

    if (auto it = j.find("parameters"); it != j.end()) {
        json p = *it;
        j.erase(it);
        take(p, "extra_edge_prob", spec.extra_edge_prob);
        take(p, "x_low", spec.x_low);
        take(p, "x_high", spec.x_high);
        take(p, "a_value", spec.a_value);
        take(p, "a_low", spec.a_low);
        take(p, "a_high", spec.a_high);
        take(p, "high_fraction", spec.high_fraction);
        take(p, "polygon_vertices", spec.polygon_vertices);
        take(p, "extremist_fraction", spec.cleavage.extremist_fraction);
        take(p, "moderate_center", spec.cleavage.moderate_center);
        take(p, "moderate_spread", spec.cleavage.moderate_spread);
        take(p, "pole_low", spec.cleavage.pole_low);
        take(p, "pole_high", spec.cleavage.pole_high);
        take(p, "a_moderate_low", spec.cleavage.a_moderate_low);
        take(p, "a_moderate_high", spec.cleavage.a_moderate_high);
        take(p, "a_extremist", spec.cleavage.a_extremist);
        spec.cleavage.extra_edge_prob = spec.extra_edge_prob;
        if (!p.empty())
            throw ParseError(path + ": unknown parameter key '" +
                             p.begin().key() + "'");
    }
    if (!j.empty())
        throw ParseError(path + ": unknown key '" + j.begin().key() + "'");
    return spec;
}

void write_scenario_spec_json(const std::string& path,
                              const ScenarioSpec& s) {
    json p;
    p["extra_edge_prob"] = s.extra_edge_prob;
    switch (s.kind) {
        case ScenarioKind::RandomArray:
            p["x_low"] = s.x_low;
            p["x_high"] = s.x_high;
            p["a_value"] = s.a_value;
            break;
        case ScenarioKind::OneValueA:
            p["x_low"] = s.x_low;
            p["x_high"] = s.x_high;
            p["a_value"] = s.a_value;
            break;
        case ScenarioKind::TwoValueA:
            p["x_low"] = s.x_low;
            p["x_high"] = s.x_high;
            p["a_low"] = s.a_low;
            p["a_high"] = s.a_high;
            p["high_fraction"] = s.high_fraction;
            break;
        case ScenarioKind::Polytope:
            p["polygon_vertices"] = s.polygon_vertices;
            p["a_value"] = s.a_value;
            break;
        case ScenarioKind::Cleavage:
            p["extremist_fraction"] = s.cleavage.extremist_fraction;
            p["moderate_center"] = s.cleavage.moderate_center;
            p["moderate_spread"] = s.cleavage.moderate_spread;
            p["pole_low"] = s.cleavage.pole_low;
            p["pole_high"] = s.cleavage.pole_high;
            p["a_moderate_low"] = s.cleavage.a_moderate_low;
            p["a_moderate_high"] = s.cleavage.a_moderate_high;
            p["a_extremist"] = s.cleavage.a_extremist;
            break;
    }
    json j;
    j["kind"] = to_string(s.kind);
    j["n"] = s.n;
    j["m"] = s.m;
    j["seed"] = s.seed;
    j["parameters"] = std::move(p);
    dump(path, j);
}

}  // namespace polydyn
