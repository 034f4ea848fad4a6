#ifndef MONOPRO_JSON_IO_HPP_
#define MONOPRO_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "monopro/cfree.hpp"
#include "monopro/cpmap.hpp"
#include "monopro/fock.hpp"
#include "monopro/mfs.hpp"

namespace monopro {

using Json = nlohmann::json;

// Mat:        {"d": int, "re": [[...]], "im": [[...]]}   (row-major grids)
// CPMap:      {"kraus": [Mat, ...]}  or  {"matrix": Mat(d^2)} superoperator
// Series:     {"d": int, "order": int, "terms": [term_0, ...]} where term_0
//             is a Mat and term_n (n >= 1) is {"re": [...], "im": [...]},
//             the d^2 x d^(2n) coefficient matrix flattened row-major; its
//             columns follow vec(b_1)(x)...(x)vec(b_n) with column-stacking
//             vec and slot 1 the leftmost Kronecker factor.
// ModuleSpec: {"d", "K", "L", "mode": "monotone"|"weakly_monotone", "etas"}
// MomentSpec: {"d", "max_order", "moments": [flat tensors as in Series]}

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json cpmap_to_json(const CPMap& eta);
CPMap cpmap_from_json(const Json& j);

Json series_to_json(const Series& s);
Series series_from_json(const Json& j);

Json module_spec_to_json(const ModuleSpec& spec);
ModuleSpec module_spec_from_json(const Json& j);

Json moment_spec_to_json(const MomentSpec& spec);
MomentSpec moment_spec_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace monopro

#endif  // MONOPRO_JSON_IO_HPP_
