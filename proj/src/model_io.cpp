#include "figmn/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "figmn/errors.hpp"

namespace figmn {

using nlohmann::json;

namespace {

json matrix_to_json(const SymmetricMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.order(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.order(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

SymmetricMatrix matrix_from_json(const json& rows, int dim) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
        throw MalformedFile("component matrix has the wrong shape");
    SymmetricMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw MalformedFile("component matrix has the wrong shape");
        for (int j = 0; j < dim; ++j) {
            if (!row[j].is_number()) throw MalformedFile("matrix entry is not a number");
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

Vector vector_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) throw MalformedFile(std::string(what) + " is not an array");
    Vector v;
    v.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_number()) throw MalformedFile(std::string(what) + " entry is not a number");
        v.push_back(e.get<double>());
    }
    return v;
}

double number_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number())
        throw MalformedFile(std::string("missing or non-numeric field '") + key + "'");
    return obj.at(key).get<double>();
}

} // namespace

std::string model_to_json(const MixtureModel& model) {
    const IGMNConfig& cfg = model.config();
    json j;
    j["format"] = "figmn-model";
    j["version"] = 1;
    j["config"] = {
        {"delta", cfg.delta},
        {"beta", cfg.beta},
        {"v_min", cfg.v_min},
        {"sp_min", cfg.sp_min},
        {"std_floor", cfg.std_floor},
        {"backend", to_string(cfg.backend)},
        {"degenerate_policy", to_string(cfg.degenerate_policy)},
    };
    j["dim"] = model.dim();
    j["sigma_ini"] = model.sigma_ini();
    j["points_seen"] = model.points_seen();
    json comps = json::array();
    for (const auto& c : model.components()) {
        json cj;
        cj["mu"] = c.mu;
        if (cfg.backend == Backend::Fast)
            cj["lambda"] = matrix_to_json(c.lambda);
        else
            cj["cov"] = matrix_to_json(c.cov);
        cj["det_c"] = c.det_c;
        cj["sp"] = c.sp;
        cj["v"] = c.v;
        comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    return j.dump(2);
}

MixtureModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MalformedFile(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format") || j["format"] != "figmn-model")
        throw MalformedFile("not a figmn-model file");
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw MalformedFile("missing version tag");
    if (j["version"].get<int>() != 1)
        throw UnsupportedVersion("unsupported model file version " + j["version"].dump());

    if (!j.contains("config") || !j["config"].is_object())
        throw MalformedFile("missing config object");
    const json& cj = j["config"];
    IGMNConfig cfg;
    cfg.delta = number_field(cj, "delta");
    cfg.beta = number_field(cj, "beta");
    cfg.v_min = number_field(cj, "v_min");
    cfg.sp_min = number_field(cj, "sp_min");
    cfg.std_floor = number_field(cj, "std_floor");
    if (!cj.contains("backend") || !cj["backend"].is_string())
        throw MalformedFile("missing backend tag");
    if (!cj.contains("degenerate_policy") || !cj["degenerate_policy"].is_string())
        throw MalformedFile("missing degenerate_policy tag");
    try {
        cfg.backend = backend_from_string(cj["backend"].get<std::string>());
        cfg.degenerate_policy = policy_from_string(cj["degenerate_policy"].get<std::string>());
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw MalformedFile(e.what());
    }

    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw MalformedFile("missing dimension");
    const int dim = j["dim"].get<int>();

    Vector sigma_ini = vector_from_json(j.value("sigma_ini", json::array()), "sigma_ini");

    std::int64_t points_seen = 0;
    if (j.contains("points_seen")) {
        if (!j["points_seen"].is_number_integer()) throw MalformedFile("points_seen is not an integer");
        points_seen = j["points_seen"].get<std::int64_t>();
    }

    std::vector<GaussianComponent> comps;
    if (!j.contains("components") || !j["components"].is_array())
        throw MalformedFile("missing components array");
    const char* mkey = cfg.backend == Backend::Fast ? "lambda" : "cov";
    for (const auto& cjson : j["components"]) {
        if (!cjson.is_object()) throw MalformedFile("component is not an object");
        GaussianComponent c;
        c.mu = vector_from_json(cjson.value("mu", json()), "mu");
        if (static_cast<int>(c.mu.size()) != dim)
            throw MalformedFile("component mean has the wrong dimension");
        if (!cjson.contains(mkey))
            throw MalformedFile(std::string("component is missing its '") + mkey + "' matrix");
        SymmetricMatrix m = matrix_from_json(cjson.at(mkey), dim);
        if (cfg.backend == Backend::Fast)
            c.lambda = std::move(m);
        else
            c.cov = std::move(m);
        c.det_c = number_field(cjson, "det_c");
        c.sp = number_field(cjson, "sp");
        c.v = number_field(cjson, "v");
        if (!(c.det_c > 0.0)) throw MalformedFile("component determinant must be positive");
        comps.push_back(std::move(c));
    }

    try {
        return MixtureModel::restore(cfg, dim, std::move(sigma_ini), std::move(comps),
                                     points_seen);
    } catch (const DimensionError& e) {
        throw MalformedFile(e.what());
    }
}

void save_model(const MixtureModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedFile("cannot open '" + path + "' for writing");
    out << model_to_json(model) << '\n';
    if (!out) throw MalformedFile("failed writing model to '" + path + "'");
}

MixtureModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedFile("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

} // namespace figmn
