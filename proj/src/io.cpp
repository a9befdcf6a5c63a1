#include "tlopt/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tlopt {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

VarBounds bounds_from_json(const json& j, const std::string& what) {
    VarBounds out;
    if (!j.is_object()) throw SemanticError(what + " must be an object");
    for (const auto& [name, entry] : j.items()) {
        if (!entry.is_array() || entry.size() != 2)
            throw SemanticError(what + " entry '" + name + "' must be [lower, upper]");
        out.set(name, entry[0].get<double>(), entry[1].get<double>());
    }
    return out;
}

WeightTable weights_from_json(const json& j) {
    WeightTable out;
    for (const auto& [name, entry] : j.items()) {
        if (!entry.is_array())
            throw SemanticError("weight '" + name + "' must be an array of numbers");
        out[name] = entry.get<std::vector<double>>();
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw SemanticError(what + " must be a nested array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw SemanticError(what + " must be rectangular");
        for (std::size_t c = 0; c < cols; ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j[r][c].get<double>();
    }
    return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw SemanticError(what + " must be an array");
    Eigen::VectorXd out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return out;
}

Eigen::VectorXd cost_vector(const json& j, Eigen::Index size, const std::string& what) {
    if (j.is_number()) return Eigen::VectorXd::Constant(size, j.get<double>());
    Eigen::VectorXd v = vector_from_json(j, what);
    return v;
}

LtiSystem system_from_json(const json& j) {
    LtiSystem sys;
    sys.state_names = j.at("state_names").get<std::vector<std::string>>();
    sys.input_names = j.value("input_names", std::vector<std::string>{});
    sys.A = matrix_from_json(j.at("A"), "A");
    if (sys.num_inputs() > 0)
        sys.B = matrix_from_json(j.at("B"), "B");
    else
        sys.B = Eigen::MatrixXd::Zero(sys.num_states(), 0);
    sys.C = j.contains("C") ? matrix_from_json(j.at("C"), "C")
                            : Eigen::MatrixXd::Zero(0, sys.num_states());
    sys.D = j.contains("D") ? vector_from_json(j.at("D"), "D")
                            : Eigen::VectorXd::Zero(sys.num_states());
    sys.state_bounds = bounds_from_json(j.at("state_bounds"), "state_bounds");
    if (j.contains("input_bounds"))
        sys.input_bounds = bounds_from_json(j.at("input_bounds"), "input_bounds");
    sys.initial_state = vector_from_json(j.at("x0"), "x0");
    if (j.contains("saturation")) {
        const json& s = j.at("saturation");
        Saturation sat;
        std::string norm = s.at("norm").get<std::string>();
        if (norm == "l1" || norm == "L1") sat.norm = Saturation::Norm::L1;
        else if (norm == "linf" || norm == "Linf") sat.norm = Saturation::Norm::Linf;
        else throw SemanticError("saturation norm must be 'l1' or 'linf'");
        sat.limit = s.at("limit").get<double>();
        sys.saturation = sat;
    }
    return sys;
}

} // namespace

SystemConfig load_system_config(const std::filesystem::path& path) {
    json j = load_json(path);
    SystemConfig cfg;
    std::string logic = j.at("logic").get<std::string>();
    if (logic == "stl") cfg.logic = Logic::Stl;
    else if (logic == "mtl") cfg.logic = Logic::Mtl;
    else if (logic == "wstl") cfg.logic = Logic::Wstl;
    else throw SemanticError("logic must be one of stl, mtl, wstl");
    cfg.formula = j.at("formula").get<std::string>();
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
    if (j.contains("signals"))
        cfg.signal_bounds = bounds_from_json(j.at("signals"), "signals");
    if (j.contains("initial"))
        for (const auto& [name, v] : j.at("initial").items())
            cfg.initial[name] = v.get<double>();
    if (j.contains("weights")) cfg.weights = weights_from_json(j.at("weights"));
    if (j.contains("system")) cfg.system = system_from_json(j.at("system"));
    if (j.contains("horizon") && cfg.system) cfg.system->horizon = *cfg.horizon;
    if (j.contains("costs")) {
        const json& c = j.at("costs");
        cfg.costs.lambda = c.value("lambda", 1.0);
        Eigen::Index n = cfg.system ? cfg.system->num_states() : 0;
        Eigen::Index m = cfg.system ? cfg.system->num_inputs() : 0;
        if (c.contains("alpha")) cfg.costs.alpha = cost_vector(c.at("alpha"), n, "alpha");
        if (c.contains("beta")) cfg.costs.beta = cost_vector(c.at("beta"), m, "beta");
    }
    return cfg;
}

WeightTable load_weight_table(const std::filesystem::path& path) {
    return weights_from_json(load_json(path));
}

VarBounds load_bounds(const std::filesystem::path& path) {
    return bounds_from_json(load_json(path), "bounds");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string{}
                                               : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

} // namespace

Trace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw IoError("'" + path.string() + "' is empty");
    std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "time")
        throw IoError("'" + path.string() + "': first CSV column must be 'time'");
    std::vector<std::vector<double>> columns(header.size() - 1);
    int expected_time = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw IoError("'" + path.string() + "' line " + std::to_string(line_no) +
                          ": expected " + std::to_string(header.size()) + " cells");
        for (const std::string& c : cells)
            if (c.empty())
                throw IoError("'" + path.string() + "' line " +
                              std::to_string(line_no) + ": missing cell");
        double t = std::stod(cells[0]);
        if (t != expected_time)
            throw IoError("'" + path.string() + "' line " + std::to_string(line_no) +
                          ": time must increase by 1 from 0");
        ++expected_time;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            try {
                columns[i - 1].push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw IoError("'" + path.string() + "' line " + std::to_string(line_no) +
                              ": bad number '" + cells[i] + "'");
            }
        }
    }
    if (expected_time == 0) throw IoError("'" + path.string() + "' has no data rows");
    Trace trace;
    for (std::size_t i = 1; i < header.size(); ++i)
        trace.add_signal(header[i], std::move(columns[i - 1]));
    return trace;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& states,
                     const Trace* inputs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "time";
    for (const auto& name : states.signal_names()) out << ',' << name;
    if (inputs)
        for (const auto& name : inputs->signal_names()) out << ',' << name;
    out << '\n';
    for (int t = 0; t < states.length(); ++t) {
        out << t;
        for (const auto& name : states.signal_names())
            out << ',' << format_number(states.value(name, t));
        if (inputs) {
            for (const auto& name : inputs->signal_names())
                out << ','
                    << (t < inputs->length() ? format_number(inputs->value(name, t))
                                             : std::string("0"));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace tlopt
