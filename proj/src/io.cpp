#include "isoc/io.hpp"

#include <fstream>

namespace isoc {

namespace {

mpz_class parse_mpz(const Json& j, const char* what) {
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::exception&) {
            throw input_error(std::string("bad integer string for ") + what);
        }
    }
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    throw input_error(std::string("expected integer (as decimal string) for ") + what);
}

long parse_long(const Json& j, const char* what) {
    mpz_class z = parse_mpz(j, what);
    if (!z.fits_slong_p()) throw input_error(std::string("integer out of range for ") + what);
    return z.get_si();
}

std::string str(const mpz_class& z) { return z.get_str(); }

}  // namespace

Json context_to_json(const Context& ctx) {
    Json j;
    j["p"] = str(ctx.prime());
    j["r"] = std::to_string(ctx.degree());
    Json mod = Json::array();
    for (const auto& c : ctx.modulus()) mod.push_back(str(c));
    j["modulus"] = mod;
    j["N"] = std::to_string(ctx.precision());
    return j;
}

ContextPtr context_from_json(const Json& j, std::optional<unsigned> precision_override) {
    if (!j.is_object()) throw input_error("context must be an object");
    mpz_class p = parse_mpz(j.at("p"), "p");
    long r = parse_long(j.at("r"), "r");
    if (r < 1 || r > 64) throw input_error("residue degree out of range");
    unsigned prec = 64;
    if (j.contains("N")) {
        long n = parse_long(j.at("N"), "N");
        if (n < 1 || n > 1 << 16) throw input_error("precision out of range");
        prec = static_cast<unsigned>(n);
    }
    if (precision_override) prec = *precision_override;
    if (j.contains("modulus")) {
        std::vector<mpz_class> mod;
        for (const auto& c : j.at("modulus")) mod.push_back(parse_mpz(c, "modulus coefficient"));
        return Context::make_with_modulus(std::move(p), static_cast<unsigned>(r), std::move(mod),
                                          prec);
    }
    return Context::make(p, static_cast<unsigned>(r), prec);
}

Json scalar_to_json(const Scalar& s) {
    if (s.is_zero()) return "0";
    if (s.is_bounded()) throw input_error("cannot serialize a bounded-below scalar");
    // constant integral values in shorthand
    const Context& c = s.ctx();
    bool constant = true;
    for (size_t i = 1; i < s.unit().size(); ++i)
        if (s.unit()[i] != 0) constant = false;
    if (constant && s.valuation() >= 0) {
        mpz_class v = s.unit()[0];
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), c.prime().get_mpz_t(),
                   static_cast<unsigned long>(s.valuation()));
        return str(v * pw);
    }
    Json j;
    j["val"] = std::to_string(s.valuation());
    Json poly = Json::array();
    for (const auto& coeff : s.unit()) poly.push_back(str(coeff));
    j["unit_poly"] = poly;
    return j;
}

Scalar scalar_from_json(const Context& ctx, const Json& j) {
    if (j.is_string() || j.is_number_integer()) {
        mpz_class z = parse_mpz(j, "entry");
        return Scalar::from_integer(ctx, z);
    }
    if (!j.is_object()) throw input_error("matrix entry must be a string or an object");
    long val = parse_long(j.at("val"), "val");
    std::vector<mpz_class> poly;
    for (const auto& c : j.at("unit_poly")) poly.push_back(parse_mpz(c, "unit coefficient"));
    if (poly.empty()) throw input_error("empty unit polynomial");
    Scalar unit = Scalar::from_int_poly(ctx, poly);
    if (unit.is_zero()) return Scalar::zero(ctx);
    return unit.shifted(val);
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (unsigned i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (unsigned j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Context& ctx, const Json& j) {
    if (!j.is_array() || j.empty()) throw input_error("matrix must be a nonempty array of rows");
    unsigned rows = static_cast<unsigned>(j.size());
    unsigned cols = static_cast<unsigned>(j.at(0).size());
    Matrix m(ctx, rows, cols);
    for (unsigned i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (row.size() != cols) throw input_error("ragged matrix rows");
        for (unsigned k = 0; k < cols; ++k) m.at(i, k) = scalar_from_json(ctx, row.at(k));
    }
    return m;
}

Json isocrystal_to_json(const Isocrystal& x, const Matrix* monodromy) {
    Json j;
    j["version"] = "1";
    j["context"] = context_to_json(x.ctx());
    if (x.provenance()) {
        Json sf = Json::array();
        for (const auto& s : *x.provenance()) {
            Json e;
            e["a"] = std::to_string(s.a);
            e["b"] = std::to_string(s.b);
            e["mult"] = std::to_string(s.mult);
            sf.push_back(e);
        }
        j["standard_form"] = sf;
        if (x.base_change()) j["base_change"] = matrix_to_json(*x.base_change());
    } else {
        j["matrix"] = matrix_to_json(x.frobenius_matrix());
        j["rational_level"] = std::to_string(x.rat_level());
    }
    if (x.restriction()) j["restrict_rational"] = std::to_string(*x.restriction());
    if (monodromy) j["monodromy"] = matrix_to_json(*monodromy);
    return j;
}

IsoFile isocrystal_from_json(const Json& j, std::optional<unsigned> precision_override) {
    if (!j.is_object()) throw input_error("isocrystal file must be a JSON object");
    if (!j.contains("context")) throw input_error("isocrystal file lacks a context");
    ContextPtr ctx = context_from_json(j.at("context"), precision_override);
    std::optional<Isocrystal> x;
    if (j.contains("standard_form")) {
        std::vector<StandardSummand> sm;
        for (const auto& e : j.at("standard_form")) {
            long a = parse_long(e.at("a"), "a");
            long b = parse_long(e.at("b"), "b");
            long mult = e.contains("mult") ? parse_long(e.at("mult"), "mult") : 1;
            if (b < 1 || mult < 1) throw input_error("bad summand");
            sm.push_back({a, static_cast<unsigned>(b), static_cast<unsigned>(mult)});
        }
        x = Isocrystal::standard_form(ctx, sm);
        if (j.contains("base_change"))
            x = x->base_changed(matrix_from_json(*ctx, j.at("base_change")));
    } else if (j.contains("matrix")) {
        Matrix a = matrix_from_json(*ctx, j.at("matrix"));
        long rho = j.contains("rational_level") ? parse_long(j.at("rational_level"), "rho")
                                                : static_cast<long>(ctx->degree());
        if (rho < 1) throw input_error("rational_level must be >= 1");
        x = Isocrystal::from_matrix(ctx, std::move(a), static_cast<unsigned>(rho));
    } else {
        throw input_error("isocrystal file needs standard_form or matrix");
    }
    if (j.contains("restrict_rational")) {
        long m = parse_long(j.at("restrict_rational"), "restrict_rational");
        if (m < 1) throw input_error("restrict_rational must be >= 1");
        x = x->with_restriction(static_cast<unsigned>(m));
    }
    IsoFile out{std::move(*x), std::nullopt};
    if (j.contains("monodromy"))
        out.monodromy = matrix_from_json(out.iso.ctx(), j.at("monodromy"));
    return out;
}

Json filtration_to_json(const Filtration& f) {
    Json j;
    j["version"] = "1";
    Json mu = Json::array();
    for (long m : f.type()) mu.push_back(std::to_string(m));
    j["mu"] = mu;
    j["flag_matrix"] = matrix_to_json(f.flag());
    return j;
}

Filtration filtration_from_json(ContextPtr ctx, const Json& j) {
    if (!j.is_object()) throw input_error("filtration file must be a JSON object");
    std::vector<long> mu;
    for (const auto& m : j.at("mu")) mu.push_back(parse_long(m, "mu entry"));
    Matrix flag = matrix_from_json(*ctx, j.at("flag_matrix"));
    return Filtration(std::move(ctx), std::move(mu), std::move(flag));
}

Json lattice_to_json(const Lattice& m) {
    Json j;
    j["version"] = "1";
    j["basis"] = matrix_to_json(m.basis());
    return j;
}

Lattice lattice_from_json(const Context& ctx, const Json& j) {
    if (!j.is_object()) throw input_error("lattice file must be a JSON object");
    return Lattice(matrix_from_json(ctx, j.at("basis")));
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("parse error in " + path + ": " + e.what());
    }
    return j;
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace isoc
