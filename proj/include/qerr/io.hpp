#pragma once

// JSON documents for polynomials, certificates and lower-bound witnesses.
// Rationals are always strings ("p/q" or "p") so no value passes through a
// floating-point number on the way in or out.
//
//   polynomial:  { "n": 3, "terms": [ { "vars": [1, 3], "coeff": "1/2" } ] }
//   certificate: { "n": 4, "t": 1, "terms": [
//                    { "j": 0, "gram": { "A": "1", "B": "-2", "C": "1" } },
//                    { "j": 1, "squares": [ ["1"], ["0", "1/2"] ] } ] }
//   witness:     { "n": 2, "A": "2/5", "B": "-2/5", "C": "1/10",
//                  "lambda": "0", "epsilon": "1/10" }

#include <nlohmann/json.hpp>

#include <istream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qerr/blekherman.hpp"
#include "qerr/errors.hpp"
#include "qerr/lower_bound.hpp"
#include "qerr/multilinear.hpp"
#include "qerr/rational.hpp"
#include "qerr/univariate.hpp"

namespace qerr::io {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline json parse_document(std::istream& in, const std::string& source) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(source, e.what());
    }
}

inline Rational rational_field(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where, "expected a rational string \"p/q\"");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const DomainError& e) {
        throw ParseError(where, e.what());
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where, std::string("missing field \"") + key + "\"");
    return *it;
}

inline unsigned unsigned_field(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where, "expected a nonnegative integer");
    return j.get<unsigned>();
}

// --- polynomials -----------------------------------------------------------

inline ordered_json to_json(const MultilinearPoly& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : p.terms()) {
        ordered_json t;
        t["vars"] = variables_of(m);
        t["coeff"] = c.str();
        terms.push_back(std::move(t));
    }
    ordered_json out;
    out["n"] = p.n();
    out["terms"] = std::move(terms);
    return out;
}

inline MultilinearPoly multilinear_from_json(const json& doc) {
    const unsigned n = unsigned_field(require(doc, "n", "polynomial"), "polynomial.n");
    if (n == 0 || n > kMaxVariables) throw ParseError("polynomial.n", "must lie in [1, 62]");
    const auto& terms = require(doc, "terms", "polynomial");
    if (!terms.is_array()) throw ParseError("polynomial.terms", "expected an array");

    MultilinearPoly p(n);
    std::set<Monomial> seen;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string where = "polynomial.terms[" + std::to_string(k) + "]";
        const auto& vars = require(terms[k], "vars", where);
        if (!vars.is_array()) throw ParseError(where + ".vars", "expected an array");
        Monomial m = 0;
        unsigned prev = 0;
        for (const auto& v : vars) {
            const unsigned idx = unsigned_field(v, where + ".vars");
            if (idx == 0 || idx > n) throw ParseError(where + ".vars", "index out of range [1, n]");
            if (idx <= prev) throw ParseError(where + ".vars", "indices must be strictly increasing");
            prev = idx;
            m |= Monomial{1} << (idx - 1);
        }
        if (!seen.insert(m).second) throw ParseError(where + ".vars", "duplicate variable set");
        p.add_term(m, rational_field(require(terms[k], "coeff", where), where + ".coeff"));
    }
    return p;
}

inline ordered_json to_json(const UnivariatePoly& q) {
    ordered_json out = ordered_json::array();
    for (const auto& c : q.coeffs()) out.push_back(c.str());
    return out;
}

inline UnivariatePoly univariate_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where, "expected an array of coefficient strings");
    std::vector<Rational> c;
    for (std::size_t k = 0; k < j.size(); ++k) c.push_back(rational_field(j[k], where + "[" + std::to_string(k) + "]"));
    return UnivariatePoly(std::move(c));
}

// --- certificates ----------------------------------------------------------

inline ordered_json to_json(const DecompositionCertificate& cert) {
    ordered_json terms = ordered_json::array();
    for (unsigned j = 0; j <= cert.t(); ++j) {
        const auto& term = cert.terms()[j];
        if (!term) continue;
        ordered_json t;
        t["j"] = j;
        if (term->is_gram()) {
            const auto& g = term->gram();
            t["gram"] = ordered_json{{"A", g.A.str()}, {"B", g.B.str()}, {"C", g.C.str()}};
        } else {
            ordered_json squares = ordered_json::array();
            for (const auto& sq : term->squares()) squares.push_back(to_json(sq));
            t["squares"] = std::move(squares);
        }
        terms.push_back(std::move(t));
    }
    ordered_json out;
    out["n"] = cert.n();
    out["t"] = cert.t();
    out["terms"] = std::move(terms);
    return out;
}

inline DecompositionCertificate certificate_from_json(const json& doc) {
    const unsigned n = unsigned_field(require(doc, "n", "certificate"), "certificate.n");
    const unsigned t = unsigned_field(require(doc, "t", "certificate"), "certificate.t");
    if (n == 0) throw ParseError("certificate.n", "must be positive");
    if (2 * t > n) throw ParseError("certificate.t", "must satisfy t <= n/2");
    const auto& terms = require(doc, "terms", "certificate");
    if (!terms.is_array()) throw ParseError("certificate.terms", "expected an array");

    std::vector<std::optional<SOSWitness>> slots(t + 1);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string where = "certificate.terms[" + std::to_string(k) + "]";
        const unsigned j = unsigned_field(require(terms[k], "j", where), where + ".j");
        if (j > t) throw ParseError(where + ".j", "must lie in [0, t]");
        if (slots[j]) throw ParseError(where + ".j", "duplicate term index");
        const bool has_gram = terms[k].contains("gram"), has_squares = terms[k].contains("squares");
        if (has_gram == has_squares) throw ParseError(where, "exactly one of \"gram\" or \"squares\" is required");
        try {
            if (has_gram) {
                const auto& g = terms[k]["gram"];
                slots[j] = SOSWitness::from_gram({rational_field(require(g, "A", where + ".gram"), where + ".gram.A"),
                                                  rational_field(require(g, "B", where + ".gram"), where + ".gram.B"),
                                                  rational_field(require(g, "C", where + ".gram"), where + ".gram.C")});
            } else {
                const auto& sq = terms[k]["squares"];
                if (!sq.is_array()) throw ParseError(where + ".squares", "expected an array");
                std::vector<UnivariatePoly> polys;
                for (std::size_t i = 0; i < sq.size(); ++i)
                    polys.push_back(univariate_from_json(sq[i], where + ".squares[" + std::to_string(i) + "]"));
                slots[j] = SOSWitness::from_squares(std::move(polys));
            }
        } catch (const DomainError& e) {
            throw ParseError(where, e.what());
        }
    }
    return {n, t, std::move(slots)};
}

// --- witnesses -------------------------------------------------------------

struct WitnessRecord {
    unsigned n = 0;
    Witness witness;
    Rational epsilon;
};

inline ordered_json to_json(const WitnessRecord& r) {
    ordered_json out;
    out["n"] = r.n;
    out["A"] = r.witness.A.str();
    out["B"] = r.witness.B.str();
    out["C"] = r.witness.C.str();
    out["lambda"] = r.witness.lambda.str();
    out["epsilon"] = r.epsilon.str();
    return out;
}

inline WitnessRecord witness_from_json(const json& doc) {
    WitnessRecord r;
    r.n = unsigned_field(require(doc, "n", "witness"), "witness.n");
    r.witness.A = rational_field(require(doc, "A", "witness"), "witness.A");
    r.witness.B = rational_field(require(doc, "B", "witness"), "witness.B");
    r.witness.C = rational_field(require(doc, "C", "witness"), "witness.C");
    r.witness.lambda = rational_field(require(doc, "lambda", "witness"), "witness.lambda");
    r.epsilon = rational_field(require(doc, "epsilon", "witness"), "witness.epsilon");
    return r;
}

}  // namespace qerr::io
