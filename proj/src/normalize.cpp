#include <algorithm>
#include <functional>
#include <optional>

#include "chargebounds/errors.hpp"
#include "chargebounds/setexpr.hpp"

namespace chargebounds {

namespace {

bool atom_contains(const Atom& a, std::int64_t x) {
    const std::int64_t m = a.cls.modulus;
    if (((x - a.cls.shift) % m + m) % m != 0) return false;
    switch (a.part) {
    case Atom::PrimePart::None: return true;
    case Atom::PrimePart::Primes: return is_prime(x);
    case Atom::PrimePart::NotPrimes: return !is_prime(x);
    }
    return false;
}

bool atoms_contain(const std::vector<Atom>& atoms, std::int64_t x) {
    for (const Atom& a : atoms) {
        if (atom_contains(a, x)) return true;
    }
    return false;
}

std::optional<Atom> atom_intersect(const Atom& a, const Atom& b) {
    const ResidueClass cs[2] = {a.cls, b.cls};
    auto merged = intersect_classes(cs);
    if (!merged) return std::nullopt;
    Atom out;
    out.cls = *merged;
    if (a.part == b.part) {
        out.part = a.part;
    } else if (a.part == Atom::PrimePart::None) {
        out.part = b.part;
    } else if (b.part == Atom::PrimePart::None) {
        out.part = a.part;
    } else {
        return std::nullopt; // primes n not-primes
    }
    return out;
}

// True when every member of a lies in b.
bool atom_subset(const Atom& a, const Atom& b) {
    if (b.part != Atom::PrimePart::None && b.part != a.part) return false;
    if (a.cls.modulus % b.cls.modulus != 0) return false;
    return (a.cls.shift - b.cls.shift) % b.cls.modulus == 0;
}

bool atom_less(const Atom& a, const Atom& b) {
    if (a.cls.modulus != b.cls.modulus) return a.cls.modulus < b.cls.modulus;
    if (a.cls.shift != b.cls.shift) return a.cls.shift < b.cls.shift;
    return static_cast<int>(a.part) < static_cast<int>(b.part);
}

void canonicalize_atoms(std::vector<Atom>& atoms) {
    std::sort(atoms.begin(), atoms.end(), atom_less);
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    // Absorption: drop atoms contained in another atom of the list.
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < atoms.size() && !absorbed; ++j) {
            if (i != j && atom_subset(atoms[i], atoms[j]) && !atom_subset(atoms[j], atoms[i])) {
                absorbed = true;
            }
        }
        if (!absorbed) kept.push_back(atoms[i]);
    }
    atoms = std::move(kept);
}

// The set complement of one atom as a union of atoms.
std::vector<Atom> atom_complement(const Atom& a, const ExprLimits& limits) {
    std::vector<Atom> out;
    const std::int64_t m = a.cls.modulus;
    if (static_cast<std::size_t>(m) > limits.atom_budget) {
        throw ResourceError("normalization atom budget exceeded while expanding a complement");
    }
    for (std::int64_t r = 0; r < m; ++r) {
        if (r != a.cls.shift) out.push_back(Atom{ResidueClass{r, m}, Atom::PrimePart::None});
    }
    if (a.part == Atom::PrimePart::Primes) {
        out.push_back(Atom{a.cls, Atom::PrimePart::NotPrimes});
    } else if (a.part == Atom::PrimePart::NotPrimes) {
        out.push_back(Atom{a.cls, Atom::PrimePart::Primes});
    }
    return out;
}

// Intersection of the complements of every atom in `atoms`.
std::vector<Atom> complement_atom_union(const std::vector<Atom>& atoms, const ExprLimits& limits) {
    std::vector<Atom> cur = {Atom{ResidueClass{0, 1}, Atom::PrimePart::None}};
    for (const Atom& a : atoms) {
        const std::vector<Atom> comp = atom_complement(a, limits);
        std::vector<Atom> next;
        for (const Atom& lhs : cur) {
            for (const Atom& rhs : comp) {
                if (auto merged = atom_intersect(lhs, rhs)) {
                    next.push_back(*merged);
                    if (next.size() > limits.atom_budget) {
                        throw ResourceError("normalization atom budget exceeded");
                    }
                }
            }
        }
        canonicalize_atoms(next);
        cur = std::move(next);
        if (cur.empty()) break;
    }
    return cur;
}

void merge_candidates(std::vector<std::int64_t>& cand, const NormalForm& nf) {
    cand.insert(cand.end(), nf.plus.begin(), nf.plus.end());
    cand.insert(cand.end(), nf.minus.begin(), nf.minus.end());
}

// Assembles a normal form from an exact atom list, a membership predicate,
// and the finitely many points where the two may disagree.
NormalForm finish(std::vector<Atom> atoms, std::vector<std::int64_t> candidates,
                  const std::function<bool(std::int64_t)>& in_set) {
    canonicalize_atoms(atoms);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    NormalForm nf;
    nf.atoms = std::move(atoms);
    for (std::int64_t x : candidates) {
        const bool semantic = in_set(x);
        const bool syntactic = atoms_contain(nf.atoms, x);
        if (semantic && !syntactic) nf.plus.push_back(x);
        if (!semantic && syntactic) nf.minus.push_back(x);
    }
    return nf;
}

NormalForm normalize_rec(const SetExpr& e, const ExprLimits& limits) {
    switch (e.kind) {
    case NodeKind::Class: {
        NormalForm nf;
        nf.atoms.push_back(Atom{e.cls, Atom::PrimePart::None});
        return nf;
    }
    case NodeKind::Primes: {
        NormalForm nf;
        nf.atoms.push_back(Atom{ResidueClass{0, 1}, Atom::PrimePart::Primes});
        return nf;
    }
    case NodeKind::AllIntegers: {
        NormalForm nf;
        nf.atoms.push_back(Atom{ResidueClass{0, 1}, Atom::PrimePart::None});
        return nf;
    }
    case NodeKind::EmptySet:
        return NormalForm{};
    case NodeKind::FiniteSet: {
        NormalForm nf;
        nf.plus = e.elems;
        return nf;
    }
    case NodeKind::Union: {
        const NormalForm a = normalize_rec(*e.children[0], limits);
        const NormalForm b = normalize_rec(*e.children[1], limits);
        std::vector<Atom> atoms = a.atoms;
        atoms.insert(atoms.end(), b.atoms.begin(), b.atoms.end());
        if (atoms.size() > limits.atom_budget) {
            throw ResourceError("normalization atom budget exceeded");
        }
        std::vector<std::int64_t> cand;
        merge_candidates(cand, a);
        merge_candidates(cand, b);
        return finish(std::move(atoms), std::move(cand),
                      [&](std::int64_t x) { return nf_contains(a, x) || nf_contains(b, x); });
    }
    case NodeKind::Intersection: {
        const NormalForm a = normalize_rec(*e.children[0], limits);
        const NormalForm b = normalize_rec(*e.children[1], limits);
        std::vector<Atom> atoms;
        for (const Atom& lhs : a.atoms) {
            for (const Atom& rhs : b.atoms) {
                if (auto merged = atom_intersect(lhs, rhs)) {
                    atoms.push_back(*merged);
                    if (atoms.size() > limits.atom_budget) {
                        throw ResourceError("normalization atom budget exceeded");
                    }
                }
            }
        }
        std::vector<std::int64_t> cand;
        merge_candidates(cand, a);
        merge_candidates(cand, b);
        return finish(std::move(atoms), std::move(cand),
                      [&](std::int64_t x) { return nf_contains(a, x) && nf_contains(b, x); });
    }
    case NodeKind::Difference: {
        const NormalForm a = normalize_rec(*e.children[0], limits);
        const NormalForm b = normalize_rec(*e.children[1], limits);
        const std::vector<Atom> comp = complement_atom_union(b.atoms, limits);
        std::vector<Atom> atoms;
        for (const Atom& lhs : a.atoms) {
            for (const Atom& rhs : comp) {
                if (auto merged = atom_intersect(lhs, rhs)) {
                    atoms.push_back(*merged);
                    if (atoms.size() > limits.atom_budget) {
                        throw ResourceError("normalization atom budget exceeded");
                    }
                }
            }
        }
        std::vector<std::int64_t> cand;
        merge_candidates(cand, a);
        merge_candidates(cand, b);
        return finish(std::move(atoms), std::move(cand),
                      [&](std::int64_t x) { return nf_contains(a, x) && !nf_contains(b, x); });
    }
    case NodeKind::Complement: {
        const NormalForm a = normalize_rec(*e.children[0], limits);
        std::vector<Atom> atoms = complement_atom_union(a.atoms, limits);
        std::vector<std::int64_t> cand;
        merge_candidates(cand, a);
        return finish(std::move(atoms), std::move(cand),
                      [&](std::int64_t x) { return !nf_contains(a, x); });
    }
    }
    throw Error("unreachable expression kind");
}

} // namespace

bool nf_contains(const NormalForm& nf, std::int64_t x) {
    if (std::binary_search(nf.plus.begin(), nf.plus.end(), x)) return true;
    if (!atoms_contain(nf.atoms, x)) return false;
    return !std::binary_search(nf.minus.begin(), nf.minus.end(), x);
}

NormalForm normalize(const SetExpr& expr, const ExprLimits& limits) {
    return normalize_rec(expr, limits);
}

SetExprPtr nf_to_expr(const NormalForm& nf) {
    SetExprPtr atoms_expr;
    for (const Atom& a : nf.atoms) {
        SetExprPtr piece = expr_class(a.cls);
        if (a.part == Atom::PrimePart::Primes) {
            piece = expr_intersection(piece, expr_primes());
        } else if (a.part == Atom::PrimePart::NotPrimes) {
            piece = expr_difference(piece, expr_primes());
        }
        atoms_expr = atoms_expr ? expr_union(atoms_expr, piece) : piece;
    }
    if (!atoms_expr) atoms_expr = expr_empty();
    if (!nf.minus.empty()) atoms_expr = expr_difference(atoms_expr, expr_finite(nf.minus));
    if (!nf.plus.empty()) atoms_expr = expr_union(atoms_expr, expr_finite(nf.plus));
    return atoms_expr;
}

} // namespace chargebounds
