#pragma once

// JSON views of the library's values. Integers are decimal strings; field
// elements are little-endian coefficient lists.

#include <json.hpp>

#include "horizontal.hpp"

namespace g2pair {

using Json = nlohmann::ordered_json;

class SerializeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(const Integer& x) { return to_string(x); }
inline Json to_json(const Rational& x) { return to_string(x); }

inline Json to_json(const std::vector<Integer>& v)
{
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

template <class M>
Json to_json(const FieldElem<M>& x)
{
    return to_json(x.to_integers());
}

template <class M>
Json to_json(const ExtField<M>& F)
{
    std::vector<Integer> m;
    for (const auto& c : F.modulus())
        m.push_back(F.base().to_integer(c));
    return {{"p", to_string(F.characteristic())}, {"r", F.degree()}, {"modulus", to_json(m)}};
}

template <class M>
Json to_json(const Poly<M>& p)
{
    Json a = Json::array();
    for (const auto& c : p.coeffs())
        a.push_back(to_json(c));
    return a;
}

template <class M>
Json to_json(const Divisor<M>& D)
{
    return {{"u", to_json(D.u)}, {"v", to_json(D.v)}};
}

inline Json to_json(const LogMatrix& m)
{
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row)
            r.push_back(to_string(x));
        rows.push_back(r);
    }
    return rows;
}

template <class M>
Json to_json(const TorsionBasis<M>& b)
{
    Json pts = Json::array();
    for (const auto& P : b.points)
        pts.push_back(to_json(P));
    return {{"ell", to_string(b.ell)},
            {"n", b.n},
            {"level", to_string(b.level())},
            {"r", b.r},
            {"symplectic", b.symplectic},
            {"labels", kBasisLabels},
            {"points", pts}};
}

template <class M>
Json to_json(const PairingMatrix<M>& pm)
{
    return {{"ell", to_string(pm.ell)},
            {"n", pm.n},
            {"zeta", to_json(pm.zeta)},
            {"labels", kBasisLabels},
            {"logs", to_json(pm.logs)}};
}

inline Json to_json(const FrobeniusDecomp& c)
{
    return {{"a1", to_string(c.a1)}, {"a2", to_string(c.a2)}, {"a3", to_string(c.a3)}, {"a4", to_string(c.a4)}};
}

inline Json valuation_json(const RationalValuation& v) { return v ? Json(*v) : Json("inf"); }

inline Json to_json(const MaximalityVerdict& v)
{
    return {{"result", to_string(v.result)},
            {"k_ell", v.k_ell ? Json(*v.k_ell) : Json(nullptr)},
            {"n", v.n},
            {"r", v.r},
            {"v_OK", valuation_json(v.v_OK)},
            {"condition1", v.condition1},
            {"decomposition", to_json(v.decomposition)},
            {"frobenius_r", to_json(v.frobenius_r)},
            {"diagnostics", v.diagnostics}};
}

inline Json to_json(const IsotropicPlane& p)
{
    Json a = Json::array(), b = Json::array();
    for (int i = 0; i < 4; ++i) {
        a.push_back(to_string(p.lambda[i]));
        b.push_back(to_string(p.lambda2[i]));
    }
    return {{"lambda", a}, {"lambda2", b}};
}

template <class M>
Json to_json(const HorizontalResult<M>& h)
{
    Json kernels = Json::array();
    for (const auto& k : h.kernels)
        kernels.push_back({{"plane", to_json(k.plane)},
                           {"kernel", {to_json(k.kernel[0]), to_json(k.kernel[1])}},
                           {"frobenius_stable", k.frobenius_stable},
                           {"degenerate_at_base", k.degenerate_at_base}});
    return {{"k_ell", h.base.verdict.k_ell ? Json(*h.base.verdict.k_ell) : Json(nullptr)},
            {"n", h.base.verdict.n},
            {"r", h.base.verdict.r},
            {"lifted", h.lifted},
            {"work_r", h.work_r},
            {"work_n", h.work_n},
            {"work_k", h.work_k ? Json(*h.work_k) : Json(nullptr)},
            {"planes_total", h.planes_total},
            {"necessary_condition_only", h.necessary_only},
            {"aborted", h.aborted},
            {"kernel_count", h.kernels.size()},
            {"kernels", kernels},
            {"warnings", h.warnings}};
}

inline Json to_json(const std::vector<PhaseTiming>& t)
{
    Json a = Json::array();
    for (const auto& x : t)
        a.push_back({{"phase", x.phase}, {"seconds", x.seconds}});
    return a;
}

/// Divisor from {"u": [...], "v": [...]} with coefficients as in to_json.
template <class M>
Divisor<M> divisor_from_json(const Curve<M>& C, const Json& j)
{
    if (!j.is_object() || !j.contains("u") || !j.contains("v"))
        throw SerializeError("divisor must be an object with u and v");
    const auto& F = C.field();
    auto poly = [&](const Json& a, const char* name) {
        if (!a.is_array())
            throw SerializeError(std::string("divisor ") + name + " must be an array");
        std::vector<FieldElem<M>> c;
        for (const auto& e : a) {
            std::vector<Integer> coeffs;
            const Json list = e.is_array() ? e : Json::array({e});
            for (const auto& x : list) {
                if (!x.is_string())
                    throw SerializeError(std::string("divisor ") + name + ": coefficients must be decimal strings");
                Integer v;
                if (v.set_str(x.get<std::string>(), 10) != 0)
                    throw SerializeError(std::string("divisor ") + name + ": bad integer '" + x.get<std::string>() + "'");
                coeffs.push_back(v);
            }
            c.push_back(F.from_coeffs(coeffs));
        }
        return Poly<M>(&F, c);
    };
    Divisor<M> D{poly(j["u"], "u"), poly(j["v"], "v")};
    if (!C.is_valid(D))
        throw SerializeError("divisor is not a reduced Mumford pair on the curve");
    return D;
}

} // namespace g2pair
