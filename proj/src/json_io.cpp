#include "selfcorrect/json_io.hpp"

#include <fstream>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

json poly_to_json(const F2Poly3& p) {
    json terms = json::array();
    for (const auto& t : p.terms()) terms.push_back({t[0], t[1], t[2]});
    return json{{"L", p.period()}, {"terms", terms}};
}

F2Poly3 poly_from_json(const json& j) {
    try {
        unsigned L = j.at("L").get<unsigned>();
        std::vector<std::array<long, 3>> terms;
        for (const auto& t : j.at("terms")) {
            if (!t.is_array() || t.size() != 3) throw InputError("polynomial term must be a triple");
            terms.push_back({t[0].get<long>(), t[1].get<long>(), t[2].get<long>()});
        }
        return F2Poly3::from_terms(L, terms);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad polynomial JSON: ") + e.what());
    }
}

json matrix_to_json(const F2Matrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i).to_string());
    return rows;
}

F2Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw InputError("matrix JSON must be an array of bit strings");
    F2Matrix m;
    for (const auto& row : j) {
        if (!row.is_string()) throw InputError("matrix row must be a bit string");
        try {
            m.append_row(F2Vector::from_string(row.get<std::string>()));
        } catch (const ContractError& e) {
            throw InputError(std::string("bad matrix row: ") + e.what());
        }
    }
    return m;
}

namespace {

json coords_to_json(const std::vector<std::array<int, 3>>& coords, int dim) {
    json out = json::array();
    for (const auto& c : coords) {
        json item = json::array();
        for (int a = 0; a < dim; ++a) item.push_back(c[a]);
        out.push_back(item);
    }
    return out;
}

std::vector<std::array<int, 3>> coords_from_json(const json& j, int dim) {
    std::vector<std::array<int, 3>> out;
    for (const auto& item : j) {
        if (!item.is_array() || int(item.size()) != dim) throw InputError("bad coordinate entry");
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < dim; ++a) c[size_t(a)] = item[size_t(a)].get<int>();
        out.push_back(c);
    }
    return out;
}

}  // namespace

json code_to_json(const CssCode& code) {
    json j{{"n", code.n()}, {"hx", matrix_to_json(code.hx())}, {"hz", matrix_to_json(code.hz())}};
    if (code.geometry()) {
        const Geometry& g = *code.geometry();
        json gj{{"dim", g.dim}, {"scale", g.scale}};
        gj["period"] = {g.period[0], g.period[1], g.period[2]};
        gj["coords"] = coords_to_json(g.qubit_coords, g.dim);
        if (!g.x_anchors.empty()) gj["x_anchors"] = coords_to_json(g.x_anchors, g.dim);
        if (!g.z_anchors.empty()) gj["z_anchors"] = coords_to_json(g.z_anchors, g.dim);
        j["geometry"] = gj;
    }
    return j;
}

CssCode code_from_json(const json& j) {
    try {
        size_t n = j.at("n").get<size_t>();
        F2Matrix hx = matrix_from_json(j.at("hx"));
        F2Matrix hz = matrix_from_json(j.at("hz"));
        if (hx.rows() == 0) hx = F2Matrix(0, n);
        if (hz.rows() == 0) hz = F2Matrix(0, n);
        if (hx.cols() != n || hz.cols() != n)
            throw InputError("code JSON: row width does not match n");
        std::optional<Geometry> geom;
        if (j.contains("geometry")) {
            const json& gj = j.at("geometry");
            Geometry g;
            g.dim = gj.at("dim").get<int>();
            g.scale = gj.value("scale", 1);
            if (gj.contains("period")) {
                for (int a = 0; a < 3; ++a) g.period[size_t(a)] = gj.at("period")[size_t(a)].get<int>();
            }
            g.qubit_coords = coords_from_json(gj.at("coords"), g.dim);
            if (gj.contains("x_anchors")) g.x_anchors = coords_from_json(gj.at("x_anchors"), g.dim);
            if (gj.contains("z_anchors")) g.z_anchors = coords_from_json(gj.at("z_anchors"), g.dim);
            geom = std::move(g);
        }
        return make_css(std::move(hx), std::move(hz), std::move(geom));
    } catch (const json::exception& e) {
        throw InputError(std::string("bad code JSON: ") + e.what());
    }
}

json spec_to_json(const CodeSpec& spec) {
    json j;
    switch (spec.variant) {
        case CodeSpec::Variant::toric2d: j["variant"] = "toric2d"; break;
        case CodeSpec::Variant::toric3d: j["variant"] = "toric3d"; break;
        case CodeSpec::Variant::fractal: j["variant"] = "fractal"; break;
        case CodeSpec::Variant::explicit_code: j["variant"] = "explicit"; break;
    }
    j["L"] = spec.L;
    if (spec.alpha) j["alpha"] = poly_to_json(*spec.alpha);
    if (spec.beta) j["beta"] = poly_to_json(*spec.beta);
    if (spec.hx) j["hx"] = matrix_to_json(*spec.hx);
    if (spec.hz) j["hz"] = matrix_to_json(*spec.hz);
    return j;
}

CodeSpec spec_from_json(const json& j) {
    try {
        CodeSpec spec;
        std::string v = j.at("variant").get<std::string>();
        if (v == "toric2d")
            spec.variant = CodeSpec::Variant::toric2d;
        else if (v == "toric3d")
            spec.variant = CodeSpec::Variant::toric3d;
        else if (v == "fractal")
            spec.variant = CodeSpec::Variant::fractal;
        else if (v == "explicit")
            spec.variant = CodeSpec::Variant::explicit_code;
        else
            throw InputError("unknown code variant: " + v);
        spec.L = j.value("L", 2u);
        if (j.contains("alpha")) spec.alpha = poly_from_json(j.at("alpha"));
        if (j.contains("beta")) spec.beta = poly_from_json(j.at("beta"));
        if (j.contains("hx")) spec.hx = matrix_from_json(j.at("hx"));
        if (j.contains("hz")) spec.hz = matrix_from_json(j.at("hz"));
        return spec;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad code spec JSON: ") + e.what());
    }
}

namespace {

json ops_to_json(const std::vector<PauliOperator>& ops, bool x_part) {
    json out = json::array();
    for (const auto& op : ops) out.push_back((x_part ? op.x : op.z).to_string());
    return out;
}

std::vector<PauliOperator> ops_from_json(const json& j, bool x_type) {
    std::vector<PauliOperator> out;
    for (const auto& item : j) {
        F2Vector v = F2Vector::from_string(item.get<std::string>());
        out.push_back(x_type ? PauliOperator::x_type(std::move(v))
                             : PauliOperator::z_type(std::move(v)));
    }
    return out;
}

json index_set_to_json(const std::vector<size_t>& s) {
    json out = json::array();
    for (size_t q : s) out.push_back(q);
    return out;
}

std::vector<size_t> index_set_from_json(const json& j) {
    std::vector<size_t> out;
    for (const auto& item : j) out.push_back(item.get<size_t>());
    return out;
}

}  // namespace

json decomposition_to_json(const ErgodicDecomposition& d) {
    return json{{"set_l", index_set_to_json(d.set_l)},
                {"set_rx", index_set_to_json(d.set_rx)},
                {"set_rz", index_set_to_json(d.set_rz)},
                {"ax_ops", ops_to_json(d.ax_ops, true)},
                {"az_ops", ops_to_json(d.az_ops, false)},
                {"transformed_hz", matrix_to_json(d.transformed_hz)},
                {"transformed_hx", matrix_to_json(d.transformed_hx)},
                {"z_logicals", matrix_to_json(d.z_logicals)}};
}

ErgodicDecomposition decomposition_from_json(const json& j) {
    try {
        ErgodicDecomposition d;
        d.set_l = index_set_from_json(j.at("set_l"));
        d.set_rx = index_set_from_json(j.at("set_rx"));
        d.set_rz = index_set_from_json(j.at("set_rz"));
        d.ax_ops = ops_from_json(j.at("ax_ops"), true);
        d.az_ops = ops_from_json(j.at("az_ops"), false);
        d.transformed_hz = matrix_from_json(j.at("transformed_hz"));
        d.transformed_hx = matrix_from_json(j.at("transformed_hx"));
        d.z_logicals = matrix_from_json(j.at("z_logicals"));
        return d;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad decomposition JSON: ") + e.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw InputError("cannot parse JSON from " + path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << text;
}

}  // namespace selfcorrect
