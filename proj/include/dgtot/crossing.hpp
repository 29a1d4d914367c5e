#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgtot/totaling.hpp"

namespace dgtot {

/// Level assignment of basis elements: level 0 holds the cycles among the
/// basis, level ℓ the elements whose differential is nonzero and supported
/// entirely on level ℓ-1.  UNASSIGNED (-1) marks elements in no level.
struct LevelPartition {
    std::vector<int> level;  // -1 = unassigned

    bool covers_all() const {
        for (int l : level)
            if (l < 0) return false;
        return true;
    }
    std::map<int, std::vector<int>> by_level() const {
        std::map<int, std::vector<int>> out;
        for (size_t i = 0; i < level.size(); ++i)
            if (level[i] >= 0) out[level[i]].push_back(static_cast<int>(i));
        return out;
    }
};

/// Fixpoint of the level recursion; depends only on the support of the
/// differential, never on declaration order.
template <class K>
LevelPartition partition(const SemifreeDG<K>& m) {
    int n = m.rank();
    LevelPartition out;
    out.level.assign(n, -1);
    for (int j = 0; j < n; ++j) {
        bool zero = true;
        for (int i = 0; i < n; ++i) zero = zero && m.d[i][j].is_zero();
        if (zero) out.level[j] = 0;
    }
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (int j = 0; j < n; ++j) {
            if (out.level[j] >= 0) continue;
            int common = -2;  // -2: not seen; -1: mismatch/unassigned support
            for (int i = 0; i < n; ++i) {
                if (m.d[i][j].is_zero()) continue;
                int li = out.level[i];
                if (li < 0) {
                    common = -1;
                    break;
                }
                if (common == -2)
                    common = li;
                else if (common != li) {
                    common = -1;
                    break;
                }
            }
            if (common >= 0) {
                out.level[j] = common + 1;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return out;
}

template <class K>
bool has_crossing(const SemifreeDG<K>& m) {
    return !partition(m).covers_all();
}

/// De-totaling of a crossing-free module: position ℓ carries the level-ℓ
/// basis elements with twist n_e - ℓ, and the differentials are the
/// restricted columns of ∂.  Under koszul the tot entry signs are
/// pre-compensated so that tot(detot(M)) = M literally.
template <class K>
GradedComplex<K> detot(const SemifreeDG<K>& m) {
    LevelPartition part = partition(m);
    if (!part.covers_all()) throw error("detot: the basis has crossing");
    GradedComplex<K> out;
    out.ring = m.ring;
    auto levels = part.by_level();
    std::map<int, int> index_in_level;  // basis index -> column inside its level
    for (auto& [l, idxs] : levels) {
        TwistedFreeModule mod;
        for (int e : idxs) {
            index_in_level[e] = mod.rank();
            mod.twists.push_back(m.degrees[e] - l);
            mod.labels.push_back(m.labels[e]);
        }
        out.modules[l] = std::move(mod);
    }
    for (auto& [l, idxs] : levels) {
        if (l == 0) continue;
        auto below = levels.find(l - 1);
        if (below == levels.end()) throw error("detot: level gap");
        GradedMatrix<K> d = GradedMatrix<K>::zero(out.modules[l], out.modules[l - 1], m.nvars());
        for (int e : idxs)
            for (int f : below->second) {
                const Poly<K>& p = m.d[f][e];
                if (p.is_zero()) continue;
                int sign = tot_entry_sign<K>(m.conv, *p.homogeneous_degree(), l - 1);
                d.at(index_in_level[f], index_in_level[e]) = sign > 0 ? p : -p;
            }
        out.differentials[l] = std::move(d);
    }
    return out;
}

/// Unit-triangular change of basis e'_j = Σ_i U[i][j] e_i (diagonal 1,
/// entries homogeneous of degree n_j - n_i, supported on elements strictly
/// earlier in the well order).
template <class K>
struct BasisChange {
    std::vector<std::vector<Poly<K>>> u;      // U
    std::vector<std::vector<Poly<K>>> u_inv;  // explicit inverse

    bool is_identity() const {
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = 0; j < u.size(); ++j) {
                if (i == j) continue;
                if (!u[i][j].is_zero()) return false;
            }
        return true;
    }
};

template <class K>
std::vector<std::vector<Poly<K>>> poly_mat_mul(const std::vector<std::vector<Poly<K>>>& a,
                                               const std::vector<std::vector<Poly<K>>>& b,
                                               int nv) {
    size_t n = a.size();
    std::vector<std::vector<Poly<K>>> r(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

/// Inverse of a unit-triangular (in some strict order) basis change via the
/// terminating Neumann series.
template <class K>
std::vector<std::vector<Poly<K>>> unit_triangular_inverse(
    const std::vector<std::vector<Poly<K>>>& u, int nv) {
    size_t n = u.size();
    std::vector<std::vector<Poly<K>>> nil(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j) nil[i][j] = u[i][j];
    std::vector<std::vector<Poly<K>>> inv(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    std::vector<std::vector<Poly<K>>> pw(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (size_t i = 0; i < n; ++i) {
        inv[i][i] = Poly<K>::constant(nv, K::one());
        pw[i][i] = Poly<K>::constant(nv, K::one());
    }
    for (size_t k = 1; k <= n; ++k) {
        pw = poly_mat_mul(pw, nil, nv);
        bool zero = true;
        for (auto& row : pw)
            for (auto& p : row) zero = zero && p.is_zero();
        if (zero) break;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (k % 2 == 1)
                    inv[i][j] -= pw[i][j];
                else
                    inv[i][j] += pw[i][j];
            }
    }
    return inv;
}

/// Differential of M in the basis e'_j = Σ U[i][j] e_i:
/// D'[s][j] = Σ_{t,i} U_inv[s][t] · eps(|U[i][j]|) · D[t][i] · U[i][j].
template <class K>
SemifreeDG<K> apply_basis_change(const SemifreeDG<K>& m, const BasisChange<K>& ch) {
    int n = m.rank();
    int nv = m.nvars();
    std::vector<std::vector<Poly<K>>> w(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Poly<K>& uij = ch.u[i][j];
            if (uij.is_zero()) continue;
            int sign = m.eps(m.degrees[j] - m.degrees[i]);
            for (int t = 0; t < n; ++t) {
                if (m.d[t][i].is_zero()) continue;
                Poly<K> prod = m.d[t][i] * uij;
                w[t][j] += sign > 0 ? prod : -prod;
            }
        }
    SemifreeDG<K> out = m;
    out.d = poly_mat_mul(ch.u_inv, w, nv);
    return out;
}

/// Exact conjugation identity U · D' = (D ∘ U with convention signs).
template <class K>
bool conjugation_identity_holds(const SemifreeDG<K>& before, const SemifreeDG<K>& after,
                                const BasisChange<K>& ch) {
    int n = before.rank();
    int nv = before.nvars();
    auto lhs = poly_mat_mul(ch.u, after.d, nv);
    std::vector<std::vector<Poly<K>>> rhs(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Poly<K>& uij = ch.u[i][j];
            if (uij.is_zero()) continue;
            int sign = before.eps(before.degrees[j] - before.degrees[i]);
            for (int t = 0; t < n; ++t) {
                if (before.d[t][i].is_zero()) continue;
                Poly<K> prod = before.d[t][i] * uij;
                rhs[t][j] += sign > 0 ? prod : -prod;
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (lhs[i][j] != rhs[i][j]) return false;
    return true;
}

template <class K>
struct EliminationResult {
    bool success = false;
    BasisChange<K> change;
    SemifreeDG<K> module;          // rebased module on success
    LevelPartition final_partition;
    std::vector<int> unsolved_degrees;  // witness on failure
};

/// Crossing elimination by unit-triangular substitutions in the well order.
/// For an unassigned element e with fully leveled support, try the target
/// level 1 + max support level and solve the exact linear system for
/// b (supported on strictly earlier elements, homogeneous of degree |e|)
/// such that ∂(e - b) is supported on a single level; descend on failure.
/// Success is certified by the conjugation identity and a crossing-free
/// partition; failure is inconclusive.
template <class K>
EliminationResult<K> eliminate_crossing(const SemifreeDG<K>& m0, int max_passes = -1) {
    EliminationResult<K> out;
    int n = m0.rank();
    int nv = m0.nvars();
    if (max_passes < 0) max_passes = std::max(1, n);
    SemifreeDG<K> m = m0;

    BasisChange<K> total;
    total.u.assign(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
    for (int i = 0; i < n; ++i) total.u[i][i] = Poly<K>::constant(nv, K::one());

    auto order = validate_dg(m).well_order;
    std::vector<int> rank_in_order(n);
    for (int r = 0; r < n; ++r) rank_in_order[order[r]] = r;

    for (int pass = 0; pass < max_passes; ++pass) {
        if (partition(m).covers_all()) break;
        bool changed = false;
        for (int pos = 0; pos < n; ++pos) {
            int e = order[pos];
            LevelPartition part = partition(m);
            if (part.level[e] >= 0) continue;
            bool fixed = false;
            // support levels
            int lmax = -1;
            bool support_ready = true;
            for (int i = 0; i < n; ++i) {
                if (m.d[i][e].is_zero()) continue;
                if (part.level[i] < 0) {
                    support_ready = false;
                    break;
                }
                lmax = std::max(lmax, part.level[i]);
            }
            if (!support_ready || lmax < 0) continue;
            for (int target = lmax + 1; target >= 1 && !fixed; --target) {
                // unknowns: coefficients of b_i for i earlier than e in the
                // well order, monomials of degree n_e - n_i
                struct Slot {
                    int gen;
                    Monomial mono;
                };
                std::vector<Slot> slots;
                for (int i = 0; i < n; ++i) {
                    if (rank_in_order[i] >= rank_in_order[e]) continue;
                    for (auto& mm : monomials_of_degree(nv, m.degrees[e] - m.degrees[i]))
                        slots.push_back({i, mm});
                }
                // equations: coefficient of every f outside level target-1
                // in ∂(e - b) vanishes
                std::map<std::pair<int, Monomial>, int> eqindex;
                std::vector<std::map<int, K>> rows;
                std::vector<K> rhs;
                auto eq_row = [&](int f, const Monomial& mono) -> int {
                    auto key = std::make_pair(f, mono);
                    auto it = eqindex.find(key);
                    if (it != eqindex.end()) return it->second;
                    int id = static_cast<int>(rows.size());
                    eqindex[key] = id;
                    rows.push_back({});
                    rhs.push_back(K());
                    return id;
                };
                for (int f = 0; f < n; ++f) {
                    if (part.level[f] == target - 1) continue;
                    for (auto& [mono, coeff] : m.d[f][e].terms()) rhs[eq_row(f, mono)] += coeff;
                }
                for (size_t s = 0; s < slots.size(); ++s) {
                    int i = slots[s].gen;
                    int sgn = m.eps(m.degrees[e] - m.degrees[i]);
                    for (int f = 0; f < n; ++f) {
                        if (part.level[f] == target - 1) continue;
                        for (auto& [mono, coeff] : m.d[f][i].terms()) {
                            int r = eq_row(f, mono_mul(mono, slots[s].mono));
                            K v = coeff;
                            if (sgn < 0) v = -v;
                            auto [it, fresh] = rows[r].emplace(static_cast<int>(s), v);
                            if (!fresh) it->second += v;
                        }
                    }
                }
                KMat<K> a(static_cast<int>(rows.size()), static_cast<int>(slots.size()));
                for (size_t r = 0; r < rows.size(); ++r)
                    for (auto& [s, v] : rows[r]) a.at(static_cast<int>(r), s) = v;
                auto sol = solve(a, rhs);
                if (!sol) continue;
                // apply the substitution e' = e - b
                BasisChange<K> step;
                step.u.assign(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
                for (int i = 0; i < n; ++i) step.u[i][i] = Poly<K>::constant(nv, K::one());
                for (size_t s = 0; s < slots.size(); ++s)
                    if (!(*sol)[s].is_zero())
                        step.u[slots[s].gen][e].add_term(slots[s].mono, -(*sol)[s]);
                step.u_inv = unit_triangular_inverse(step.u, nv);
                m = apply_basis_change(m, step);
                total.u = poly_mat_mul(total.u, step.u, nv);
                changed = true;
                fixed = true;
            }
        }
        if (!changed) break;
    }

    out.final_partition = partition(m);
    out.success = out.final_partition.covers_all();
    total.u_inv = unit_triangular_inverse(total.u, nv);
    out.change = std::move(total);
    out.module = std::move(m);
    if (!out.success) {
        for (int j = 0; j < n; ++j)
            if (out.final_partition.level[j] < 0) out.unsolved_degrees.push_back(m0.degrees[j]);
    }
    return out;
}

struct Rank3Case {
    std::string label;
    bool no_crossing = true;
};

/// Classification of rank ≤ 3 semifree modules per the case analysis: the
/// well-ordered basis already partitions into levels, so each module is
/// matched to its differential shape and returned with a trivial witness.
template <class K>
Rank3Case rank3_classify(const SemifreeDG<K>& m) {
    if (m.rank() > 3) throw error("rank3_classify needs rank ≤ 3");
    auto val = validate_dg(m);
    if (!val.ok) throw error("rank3_classify: invalid module");
    LevelPartition part = partition(m);
    Rank3Case out;
    out.no_crossing = part.covers_all();
    if (!out.no_crossing) throw error("rank ≤ 3 module with crossing (impossible over a domain)");
    auto& o = val.well_order;
    auto nz = [&](int i, int j) { return !m.d[o[i]][o[j]].is_zero(); };
    if (m.rank() == 1) {
        out.label = "rank1: d(e1)=0";
    } else if (m.rank() == 2) {
        out.label = nz(0, 1) ? "rank2: d(e2)=a12*e1" : "rank2: zero differential";
    } else {
        bool a12 = nz(0, 1), a13 = nz(0, 2), a23 = nz(1, 2);
        if (a23)
            out.label = "rank3: d(e2)=0, d(e3)=a13*e1+a23*e2";
        else if (a12 || a13)
            out.label = "rank3: d(e2)=a12*e1, d(e3)=a13*e1";
        else
            out.label = "rank3: zero differential";
    }
    return out;
}

}  // namespace dgtot
