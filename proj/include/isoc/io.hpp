#pragma once

#include <json.hpp>

#include "isoc/lattice.hpp"
#include "isoc/phi_n.hpp"

// Canonical JSON schemas, version 1.  All integers travel as decimal strings
// so arbitrary-precision values round-trip exactly.  Matrix entries are
// either a decimal string (an exact integer of the coefficient field) or an
// object {"val": "...", "unit_poly": ["...", ...]}.

namespace isoc {

using Json = nlohmann::json;

Json context_to_json(const Context& ctx);
ContextPtr context_from_json(const Json& j, std::optional<unsigned> precision_override = {});

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Context& ctx, const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Context& ctx, const Json& j);

struct IsoFile {
    Isocrystal iso;
    std::optional<Matrix> monodromy;
};

Json isocrystal_to_json(const Isocrystal& x, const Matrix* monodromy = nullptr);
IsoFile isocrystal_from_json(const Json& j, std::optional<unsigned> precision_override = {});

Json filtration_to_json(const Filtration& f);
Filtration filtration_from_json(ContextPtr ctx, const Json& j);

Json lattice_to_json(const Lattice& m);
Lattice lattice_from_json(const Context& ctx, const Json& j);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace isoc
