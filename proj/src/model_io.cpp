#include "nonrecip/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nonrecip {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw Error(ErrorKind::SchemaError,
                field + ": expected a number or a two-element [re, im] array");
}

int parse_int(const json& j, const std::string& field) {
    if (!j.is_number_integer())
        throw Error(ErrorKind::SchemaError, field + ": expected an integer");
    return j.get<int>();
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, std::string("model file is not valid JSON: ") + e.what());
    }
}

const json& require(const json& j, const std::string& field) {
    auto it = j.find(field);
    if (it == j.end())
        throw Error(ErrorKind::SchemaError, "missing required field \"" + field + "\"");
    return *it;
}

LatticeModel1D model_1d_from_json(const json& j) {
    LatticeModel1D m;
    m.num_sub = parse_int(require(j, "M"), "M");
    m.num_cells = parse_int(require(j, "N"), "N");
    const json& tr = require(j, "tR");
    const json& tl = require(j, "tL");
    if (!tr.is_array() || !tl.is_array())
        throw Error(ErrorKind::SchemaError, "tR and tL must be arrays of amplitudes");
    for (size_t i = 0; i < tr.size(); ++i)
        m.t_right.push_back(parse_complex(tr[i], "tR[" + std::to_string(i) + "]"));
    for (size_t i = 0; i < tl.size(); ++i)
        m.t_left.push_back(parse_complex(tl[i], "tL[" + std::to_string(i) + "]"));
    if (j.contains("long_range")) {
        const json& lr = j["long_range"];
        if (!lr.is_array()) throw Error(ErrorKind::SchemaError, "long_range must be an array");
        for (size_t k = 0; k < lr.size(); ++k) {
            const json& h = lr[k];
            std::string at = "long_range[" + std::to_string(k) + "]";
            LongRangeHop hop;
            hop.from_sub = parse_int(require(h, "i"), at + ".i");
            hop.to_sub = parse_int(require(h, "j"), at + ".j");
            hop.cell_offset = parse_int(require(h, "m"), at + ".m");
            hop.forward = parse_complex(require(h, "tR"), at + ".tR");
            hop.backward = parse_complex(require(h, "tL"), at + ".tL");
            m.long_range.push_back(hop);
        }
    }
    if (j.contains("boundary")) {
        std::string b = j["boundary"].is_string() ? j["boundary"].get<std::string>() : "";
        if (b == "obc")
            m.boundary = Boundary::Obc;
        else if (b == "pbc")
            m.boundary = Boundary::Pbc;
        else
            throw Error(ErrorKind::SchemaError, "boundary must be \"obc\" or \"pbc\"");
    }
    try {
        m.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::SchemaError, e.what());
    }
    return m;
}

LatticeModel2D model_2d_from_json(const json& j) {
    LatticeModel2D m;
    m.nx = parse_int(require(j, "Mx"), "Mx");
    m.ny = parse_int(require(j, "Ny"), "Ny");
    m.t_right = parse_complex(require(j, "tR"), "tR");
    m.t_left = parse_complex(require(j, "tL"), "tL");
    m.t_up = parse_complex(require(j, "tU"), "tU");
    m.t_down = parse_complex(require(j, "tD"), "tD");
    if (j.contains("t1")) m.t_diag_fwd = parse_complex(j["t1"], "t1");
    if (j.contains("t2")) m.t_diag_bwd = parse_complex(j["t2"], "t2");
    try {
        m.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::SchemaError, e.what());
    }
    return m;
}

} // namespace

LatticeModel1D parse_model_1d(const std::string& json_text) {
    return model_1d_from_json(parse_text(json_text));
}

LatticeModel2D parse_model_2d(const std::string& json_text) {
    return model_2d_from_json(parse_text(json_text));
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::SchemaError, "cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j = parse_text(buf.str());
    if (!j.is_object())
        throw Error(ErrorKind::SchemaError, "model file must hold a JSON object");
    if (j.contains("Mx")) return model_2d_from_json(j);
    return model_1d_from_json(j);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_json(const GaugeReport& report) {
    std::ostringstream out;
    out << "{\"status\":\"" << to_string(report.status) << "\"";
    out << ",\"max_cycle_residual\":" << format_double(report.max_cycle_residual);
    out << ",\"violating_cycle\":[";
    for (size_t i = 0; i < report.violating_cycle.size(); ++i) {
        if (i) out << ",";
        out << "[" << report.violating_cycle[i].first << "," << report.violating_cycle[i].second
            << "]";
    }
    out << "]}";
    return out.str();
}

} // namespace nonrecip
