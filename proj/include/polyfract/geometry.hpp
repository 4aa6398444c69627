#pragma once

#include <optional>
#include <vector>

#include "polyfract/cyclo.hpp"
#include "polyfract/point_expr.hpp"

namespace polyfract {

/// Cyclic distance on Z_J.
int mod_distance(int i, int j, int J);

/// Isometry of the plane fixing the origin, encoded as
///   z -> omega^{half_turns} * z          (conj = false)
///   z -> omega^{half_turns} * conj(z)    (conj = true)
/// with omega = e^{i pi / J}. The 4J encodable elements form the dihedral
/// symmetry group of the 2J-gon; membership in D_J (symmetries of the J-gon
/// Q_*) is a checked predicate.
struct DihedralElement {
    int gon = 0;         // J
    int half_turns = 0;  // reduced mod 2J
    bool conj = false;

    static DihedralElement identity(int J) { return {J, 0, false}; }
    /// Rotation by 2 pi k / J.
    static DihedralElement rotation(int J, int k);
    /// Reflection R_{rho(i)} in the line through the origin parallel to edge
    /// b_i (axis angle 2 pi i / J).
    static DihedralElement edge_reflection(int J, int i);
    /// Reflection across the axis through vertex p_i.
    static DihedralElement vertex_reflection(int J, int i);

    DihedralElement normalized() const;
    bool is_identity() const { return half_turns % (2 * gon) == 0 && !conj; }

    /// Function composition: (a * b)(z) = a(b(z)).
    DihedralElement operator*(const DihedralElement& o) const;
    DihedralElement inverse() const;
    bool operator==(const DihedralElement& o) const;
    bool operator<(const DihedralElement& o) const;

    CycloNumber apply(const CycloNumber& z) const;

    /// True iff the element maps Q_* onto itself (checked by exact vertex
    /// permutation).
    bool in_dihedral() const;
};

/// The incircle-radius-1 regular J-gon Q_* with vertices p_i, edges
/// b_i = segment(p_{i-1}, p_i) and edge midpoints q_i.
struct Polygon {
    int J;
    CycloFieldPtr field;
    std::vector<CycloNumber> vertices;   // p_0 .. p_{J-1}
    std::vector<CycloNumber> midpoints;  // q_0 .. q_{J-1}
};

/// Throws JTooSmall for J < 3.
Polygon regular_polygon(int J);

/// Subgroup of D_J given by a construction kind plus the explicit closed
/// element list (canonically sorted).
struct SymmetryGroup {
    enum class Kind { Trivial, Rot, Dihedral, DihedralV, Explicit };

    Kind kind = Kind::Trivial;
    int J = 0;
    int k = 0;  // for Rot / Dihedral
    std::vector<DihedralElement> elements;

    static SymmetryGroup trivial(int J);
    /// Rot_k: rotations by multiples of 2 pi / k; requires k | J.
    static SymmetryGroup rot(int J, int k);
    /// D_k as a subgroup of D_J generated by the 2 pi / k rotation and the
    /// reflection through vertex p_0; requires k | J.
    static SymmetryGroup dihedral(int J, int k);
    /// D_{J/2}^V = Rot_{J/2} together with the J/2 vertex-line reflections;
    /// only constructible for even J.
    static SymmetryGroup dihedral_v(int J);
    /// Closure of the given generators; the closure must lie in D_J.
    static SymmetryGroup from_generators(int J, std::vector<DihedralElement> generators);

    bool contains(const DihedralElement& g) const;
    bool is_trivial() const { return elements.size() == 1; }
    std::size_t size() const { return elements.size(); }
};

/// Contraction f(x) = r * phi(x) + c with real ratio r in (0, 1) and phi in
/// D_J^* (= D_J for even J, D_{2J} for odd J).
struct Contraction {
    CycloNumber ratio;
    DihedralElement phi;
    CycloNumber center;

    Contraction(CycloNumber ratio, DihedralElement phi, CycloNumber center);

    CycloNumber apply(const CycloNumber& z) const;
    /// Inverse affine map f^{-1}(y) = phi^{-1}((y - c) / r).
    CycloNumber apply_inverse(const CycloNumber& z) const;
    /// Composition (this o other) as a contraction.
    Contraction compose(const Contraction& other) const;
};

/// Exact classification of the intersection of two placed copies of Q_*.
struct ContactClass {
    enum class Kind { Disjoint, Edge, Vertex, Overlap };
    Kind kind = Kind::Disjoint;
    int i = -1;  // boundary index on the first copy (Edge/Vertex)
    int j = -1;  // boundary index on the second copy

    bool operator==(const ContactClass& o) const {
        return kind == o.kind && i == o.i && j == o.j;
    }
};

/// Classify f1(Q_*) cap f2(Q_*). Edge(i, j) requires full-segment equality
/// f1(b_i) = f2(b_j); Vertex(i, j) requires f1(p_i) = f2(p_j) and no other
/// intersection; partial-edge or area overlap yields Overlap (an axiom
/// violation signal, not an error).
ContactClass classify_contact(const Contraction& f1, const Contraction& f2, const Polygon& P);

/// The permutation g_* of Z_J with g(b_i) = b_{g_*(i)}, computed by exact
/// midpoint matching. Throws NotInDJ.
std::vector<int> boundary_index_action(const DihedralElement& g, const Polygon& P);

/// Sign of the point z relative to the supporting line of edge b_i of the
/// polygon image under f: +1 inside halfplane, 0 on the line, -1 outside.
/// For f = identity contraction this tests containment in Q_*.
int side_of_edge(const Polygon& P, int i, const CycloNumber& z);

/// True iff z lies in the closed polygon Q_*.
bool point_in_gon(const Polygon& P, const CycloNumber& z);

/// dot/cross helpers (exact): re(conj(a) * b) and im(conj(a) * b).
CycloNumber dot(const CycloNumber& a, const CycloNumber& b);
CycloNumber cross(const CycloNumber& a, const CycloNumber& b);

}  // namespace polyfract
