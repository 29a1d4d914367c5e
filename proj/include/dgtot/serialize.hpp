#pragma once
#include <sstream>
#include <string>

#include "dgtot/complex.hpp"
#include "dgtot/dg.hpp"

namespace dgtot {

namespace detail_ser {

inline std::string coeff_str(const Rat& c) { return c.str(); }
inline std::string coeff_str(const Fp& c) { return c.str(); }

inline bool coeff_is_negative(const Rat& c) { return c.str()[0] == '-'; }
inline bool coeff_is_negative(const Fp&) { return false; }  // canonical 0..p-1

inline std::string coeff_abs_str(const Rat& c) {
    auto s = c.str();
    return s[0] == '-' ? s.substr(1) : s;
}
inline std::string coeff_abs_str(const Fp& c) { return c.str(); }

template <class K>
bool coeff_is_one(const K& c) {
    return c == K::one();
}

inline std::string mono_str(const Monomial& m, const std::vector<std::string>& vars) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += vars[i];
        if (m[i] != 1) s += "^" + std::to_string(m[i]);
    }
    return s;
}

}  // namespace detail_ser

/// Canonical polynomial text: terms in descending lexicographic order of
/// exponent vectors, ' + '/' - ' separators, unit coefficients omitted.
template <class K>
std::string poly_to_string(const Poly<K>& p, const std::vector<std::string>& vars) {
    using namespace detail_ser;
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        bool neg = coeff_is_negative(c);
        std::string mono = mono_str(m, vars);
        std::string abs = coeff_abs_str(c);
        std::string body;
        if (mono.empty()) body = abs;
        else if (abs == "1") body = mono;
        else body = abs + "*" + mono;
        if (first) {
            out += (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

inline std::string ring_decl(const PolyRing& ring) {
    std::string s = "ring " + ring.field.str() + "[";
    for (size_t i = 0; i < ring.vars.size(); ++i) {
        if (i) s += ",";
        s += ring.vars[i];
    }
    s += "]";
    return s;
}

/// Canonical dgmodule document: basis in declaration order, one differential
/// line per basis element with a nonzero column, terms by basis index.
template <class K>
std::string serialize_dgmodule(const SemifreeDG<K>& m, const std::string& name) {
    std::ostringstream os;
    os << ring_decl(m.ring) << "\n";
    os << "dgmodule " << name << "\n";
    os << "basis";
    for (int i = 0; i < m.rank(); ++i) os << " " << m.labels[i] << ":" << m.degrees[i];
    os << "\n";
    for (int j = 0; j < m.rank(); ++j) {
        bool nonzero = false;
        for (int i = 0; i < m.rank(); ++i) nonzero = nonzero || !m.d[i][j].is_zero();
        if (!nonzero) continue;
        os << "d " << m.labels[j] << " =";
        bool first = true;
        for (int i = 0; i < m.rank(); ++i) {
            const Poly<K>& c = m.d[i][j];
            if (c.is_zero()) continue;
            // one output term per monomial of the coefficient
            for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
                const auto& [mono, coeff] = *it;
                bool neg = detail_ser::coeff_is_negative(coeff);
                std::string ms = detail_ser::mono_str(mono, m.ring.vars);
                std::string abs = detail_ser::coeff_abs_str(coeff);
                std::string body;
                if (abs != "1") body = abs + "*";
                if (!ms.empty()) body += ms + "*";
                body += m.labels[i];
                if (first) {
                    os << " " << (neg ? "-" : "") << body;
                    first = false;
                } else {
                    os << (neg ? " - " : " + ") << body;
                }
            }
        }
        os << "\n";
    }
    return os.str();
}

template <class K>
std::string serialize_complex(const GradedComplex<K>& x, const std::string& name) {
    std::ostringstream os;
    os << ring_decl(x.ring) << "\n";
    os << "complex " << name << "\n";
    for (auto& [pos, m] : x.modules) {
        os << "module " << pos << " twists [";
        for (int i = 0; i < m.rank(); ++i) {
            if (i) os << ",";
            os << m.twists[i];
        }
        os << "]";
        if (!m.labels.empty()) {
            os << " labels [";
            for (int i = 0; i < m.rank(); ++i) {
                if (i) os << ",";
                os << m.label(i);
            }
            os << "]";
        }
        os << "\n";
    }
    for (auto& [pos, d] : x.differentials) {
        os << "d " << pos << " = [";
        for (int r = 0; r < d.rows(); ++r) {
            if (r) os << "; ";
            for (int c = 0; c < d.cols(); ++c) {
                if (c) os << ", ";
                os << poly_to_string(d.at(r, c), x.ring.vars);
            }
        }
        os << "]\n";
    }
    return os.str();
}

}  // namespace dgtot
