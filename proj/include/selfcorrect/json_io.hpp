#pragma once

#include <string>

#include "json.hpp"
#include "selfcorrect/css.hpp"
#include "selfcorrect/ergodic.hpp"
#include "selfcorrect/poly.hpp"

namespace selfcorrect {

using json = nlohmann::json;

// {"L": 8, "terms": [[0,0,0],[1,0,0]]}
json poly_to_json(const F2Poly3& p);
F2Poly3 poly_from_json(const json& j);

// {"n": ..., "hx": ["0110", ...], "hz": [...], "geometry": {...}}
json code_to_json(const CssCode& code);
CssCode code_from_json(const json& j);

// {"variant": "toric2d", "L": 4} or {"variant": "fractal", "L": 4,
//  "alpha": {...}, "beta": {...}}
json spec_to_json(const CodeSpec& spec);
CodeSpec spec_from_json(const json& j);

json decomposition_to_json(const ErgodicDecomposition& d);
ErgodicDecomposition decomposition_from_json(const json& j);

json matrix_to_json(const F2Matrix& m);
F2Matrix matrix_from_json(const json& j);

// file helpers; throw InputError on IO or parse failure
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace selfcorrect
