#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "../../vendor/json.hpp"
#include "fedforge/chart.hpp"

namespace fedforge {

/** Chart file schema (all polynomial entries use the parser grammar):
 *
 *  {
 *    "n": 2,
 *    "lambda": [["0","1"],["-1","0"]],
 *    "gamma":  [[["0","0"],["0","0"]],[["0","0"],["0","0"]]],   // optional
 *    "omega2": [{"nu":1,"dx":[1,2],"poly":"1"}],                 // optional
 *    "orders": {"K":8,"N_f":4,"N_x":10,"N_nu":5}                 // optional
 *  }
 *
 *  gamma is indexed [l][j][k] for Gamma^l_{jk}; each omega2 entry contributes
 *  poly(x) * nu^nu * dx_j ^ dx_k. */
inline ChartInput chart_input_from_json(const nlohmann::json& doc, const std::string& name) {
    try {
        ChartInput in;
        in.name = name;
        if (!doc.is_object()) throw ParseError("chart document must be a JSON object");
        in.n = doc.at("n").get<int>();
        in.lambda = doc.at("lambda").get<std::vector<std::vector<std::string>>>();
        if (doc.contains("gamma"))
            in.gamma = doc.at("gamma").get<std::vector<std::vector<std::vector<std::string>>>>();
        if (doc.contains("omega2")) {
            for (const auto& t : doc.at("omega2")) {
                Omega2Term term;
                term.nu_power = t.value("nu", 1);
                auto dx = t.at("dx").get<std::vector<int>>();
                if (dx.size() != 2) throw ParseError("omega2 term needs exactly two form indices");
                term.j = dx[0];
                term.k = dx[1];
                term.poly = t.value("poly", "1");
                in.omega2.push_back(term);
            }
        }
        if (doc.contains("orders")) {
            const auto& o = doc.at("orders");
            in.config.K = o.value("K", in.config.K);
            in.config.N_f = o.value("N_f", in.config.N_f);
            in.config.N_x = o.value("N_x", in.config.N_x);
            in.config.N_nu = o.value("N_nu", in.config.N_nu);
        }
        return in;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad chart document: ") + e.what());
    }
}

inline ChartInput load_chart_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open chart file: " + path);
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("chart file is not valid JSON: ") + e.what());
    }
    return chart_input_from_json(doc, std::filesystem::path(path).stem().string());
}

/** Resolves a --chart argument: a preset name, a path to a .json file, or a
 *  bare name looked up under $FEDFORGE_CHART_DIR. */
inline ChartInput resolve_chart(const std::string& ref) {
    for (const std::string& p : preset_names())
        if (ref == p) return preset_chart(ref);
    namespace fs = std::filesystem;
    if (fs::exists(ref)) return load_chart_file(ref);
    if (const char* dir = std::getenv("FEDFORGE_CHART_DIR")) {
        fs::path candidate = fs::path(dir) / (ref + ".json");
        if (fs::exists(candidate)) return load_chart_file(candidate.string());
    }
    throw ValidationError("unknown chart (not a preset, file, or $FEDFORGE_CHART_DIR entry): " +
                          ref);
}

}  // namespace fedforge
