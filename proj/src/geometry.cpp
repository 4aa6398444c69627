#include "polyfract/geometry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace polyfract {

int mod_distance(int i, int j, int J) {
    int d = ((i - j) % J + J) % J;
    return std::min(d, J - d);
}

namespace {

int mod2j(int h, int J) {
    int m = 2 * J;
    return ((h % m) + m) % m;
}

const Polygon& cached_gon(int J) {
    static std::mutex mu;
    static std::map<int, Polygon> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(J);
    if (it == cache.end()) it = cache.emplace(J, regular_polygon(J)).first;
    return it->second;
}

}  // namespace

DihedralElement DihedralElement::rotation(int J, int k) {
    return DihedralElement{J, mod2j(2 * k, J), false};
}

DihedralElement DihedralElement::edge_reflection(int J, int i) {
    return DihedralElement{J, mod2j(4 * i, J), true};
}

DihedralElement DihedralElement::vertex_reflection(int J, int i) {
    return DihedralElement{J, mod2j(2 + 4 * i - J, J), true};
}

DihedralElement DihedralElement::normalized() const {
    return DihedralElement{gon, mod2j(half_turns, gon), conj};
}

DihedralElement DihedralElement::operator*(const DihedralElement& o) const {
    // (a * b)(z) = a(b(z)).
    int h = conj ? half_turns - o.half_turns : half_turns + o.half_turns;
    return DihedralElement{gon, mod2j(h, gon), conj != o.conj};
}

DihedralElement DihedralElement::inverse() const {
    if (conj) return *this;
    return DihedralElement{gon, mod2j(-half_turns, gon), false};
}

bool DihedralElement::operator==(const DihedralElement& o) const {
    return gon == o.gon && mod2j(half_turns, gon) == mod2j(o.half_turns, gon) && conj == o.conj;
}

bool DihedralElement::operator<(const DihedralElement& o) const {
    if (conj != o.conj) return !conj;
    return mod2j(half_turns, gon) < mod2j(o.half_turns, gon);
}

CycloNumber DihedralElement::apply(const CycloNumber& z) const {
    CycloNumber w = CycloNumber::omega_power(z.field(), half_turns);
    return conj ? w * z.conj() : w * z;
}

bool DihedralElement::in_dihedral() const {
    const Polygon& P = cached_gon(gon);
    for (const CycloNumber& v : P.vertices) {
        CycloNumber image = apply(v);
        bool hit = false;
        for (const CycloNumber& u : P.vertices) {
            if (image == u) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

Polygon regular_polygon(int J) {
    if (J < 3) throw JTooSmall("a polygon needs at least 3 vertices, got " + std::to_string(J));
    Polygon P;
    P.J = J;
    P.field = CycloField::for_gon(J);
    for (int k = 0; k < J; ++k) P.vertices.push_back(gon_vertex(P.field, k));
    for (int k = 0; k < J; ++k) P.midpoints.push_back(gon_edge_midpoint(P.field, k));
    return P;
}

namespace {

std::vector<DihedralElement> close_elements(int J, std::vector<DihedralElement> gens) {
    for (auto& g : gens) g = g.normalized();
    std::set<DihedralElement> out(gens.begin(), gens.end());
    out.insert(DihedralElement::identity(J));
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<DihedralElement> cur(out.begin(), out.end());
        for (const auto& a : cur) {
            for (const auto& b : cur) {
                if (out.insert((a * b).normalized()).second) changed = true;
            }
        }
    }
    return {out.begin(), out.end()};
}

SymmetryGroup finish_group(SymmetryGroup g, std::vector<DihedralElement> gens) {
    g.elements = close_elements(g.J, std::move(gens));
    for (const auto& e : g.elements) {
        if (!e.in_dihedral()) {
            throw BadGroup("symmetry group element does not preserve the " +
                           std::to_string(g.J) + "-gon");
        }
    }
    return g;
}

}  // namespace

SymmetryGroup SymmetryGroup::trivial(int J) {
    SymmetryGroup g;
    g.kind = Kind::Trivial;
    g.J = J;
    return finish_group(std::move(g), {});
}

SymmetryGroup SymmetryGroup::rot(int J, int k) {
    if (k < 1 || J % k != 0) {
        throw BadGroup("rot(k) requires k dividing J; got k=" + std::to_string(k));
    }
    SymmetryGroup g;
    g.kind = Kind::Rot;
    g.J = J;
    g.k = k;
    return finish_group(std::move(g), {DihedralElement::rotation(J, J / k)});
}

SymmetryGroup SymmetryGroup::dihedral(int J, int k) {
    if (k < 1 || J % k != 0) {
        throw BadGroup("dihedral(k) requires k dividing J; got k=" + std::to_string(k));
    }
    SymmetryGroup g;
    g.kind = Kind::Dihedral;
    g.J = J;
    g.k = k;
    SymmetryGroup out = finish_group(
        std::move(g),
        {DihedralElement::rotation(J, J / k), DihedralElement::vertex_reflection(J, 0)});
    if (out.elements.size() != static_cast<size_t>(2 * k)) {
        throw BadGroup("dihedral(k) closure has unexpected order");
    }
    return out;
}

SymmetryGroup SymmetryGroup::dihedral_v(int J) {
    if (J % 2 != 0) throw BadGroup("dihedral_v requires even J");
    SymmetryGroup g;
    g.kind = Kind::DihedralV;
    g.J = J;
    std::vector<DihedralElement> gens = {DihedralElement::rotation(J, 2)};
    for (int i = 0; i < J / 2; ++i) gens.push_back(DihedralElement::vertex_reflection(J, i));
    SymmetryGroup out = finish_group(std::move(g), std::move(gens));
    if (out.elements.size() != static_cast<size_t>(J)) {
        throw BadGroup("dihedral_v closure has unexpected order");
    }
    return out;
}

SymmetryGroup SymmetryGroup::from_generators(int J, std::vector<DihedralElement> generators) {
    SymmetryGroup g;
    g.kind = Kind::Explicit;
    g.J = J;
    return finish_group(std::move(g), std::move(generators));
}

bool SymmetryGroup::contains(const DihedralElement& g) const {
    DihedralElement n = g.normalized();
    return std::binary_search(elements.begin(), elements.end(), n);
}

Contraction::Contraction(CycloNumber ratio_in, DihedralElement phi_in, CycloNumber center_in)
    : ratio(std::move(ratio_in)), phi(phi_in), center(std::move(center_in)) {
    if (!ratio.is_real()) throw OutOfRange("contraction ratio must be real");
    auto one = CycloNumber::one(ratio.field());
    if (ratio.real_sign() <= 0 || compare_real(ratio, one) >= 0) {
        throw OutOfRange("contraction ratio must lie in (0, 1)");
    }
    if (phi.gon % 2 == 0 && !phi.in_dihedral()) {
        throw NotInDJStar("phi must lie in D_J for even J");
    }
}

CycloNumber Contraction::apply(const CycloNumber& z) const {
    return ratio * phi.apply(z) + center;
}

CycloNumber Contraction::apply_inverse(const CycloNumber& z) const {
    return phi.inverse().apply((z - center) * ratio.inverse());
}

Contraction Contraction::compose(const Contraction& other) const {
    return Contraction(ratio * other.ratio, phi * other.phi, apply(other.center));
}

CycloNumber dot(const CycloNumber& a, const CycloNumber& b) {
    return (a.conj() * b).real_part();
}

CycloNumber cross(const CycloNumber& a, const CycloNumber& b) {
    return (a.conj() * b).imag_part();
}

int side_of_edge(const Polygon& P, int i, const CycloNumber& z) {
    const CycloNumber& a = P.vertices[static_cast<size_t>(((i - 1) % P.J + P.J) % P.J)];
    const CycloNumber& b = P.vertices[static_cast<size_t>(((i % P.J) + P.J) % P.J)];
    return cross(b - a, z - a).real_sign();
}

bool point_in_gon(const Polygon& P, const CycloNumber& z) {
    for (int i = 0; i < P.J; ++i) {
        if (side_of_edge(P, i, z) < 0) return false;
    }
    return true;
}

namespace {

bool point_in_placed(const std::vector<CycloNumber>& X, int orient, const CycloNumber& z) {
    const int J = static_cast<int>(X.size());
    for (int k = 0; k < J; ++k) {
        const CycloNumber& a = X[static_cast<size_t>((k + J - 1) % J)];
        const CycloNumber& b = X[static_cast<size_t>(k)];
        if (orient * cross(b - a, z - a).real_sign() < 0) return false;
    }
    return true;
}

struct Projection {
    CycloNumber lo;
    CycloNumber hi;
};

Projection project(const std::vector<CycloNumber>& X, const CycloNumber& axis) {
    Projection pr{dot(axis, X[0]), dot(axis, X[0])};
    for (size_t k = 1; k < X.size(); ++k) {
        CycloNumber t = dot(axis, X[k]);
        if (compare_real(t, pr.lo) < 0) pr.lo = t;
        if (compare_real(t, pr.hi) > 0) pr.hi = t;
    }
    return pr;
}

}  // namespace

ContactClass classify_contact(const Contraction& f1, const Contraction& f2, const Polygon& P) {
    const int J = P.J;
    std::vector<CycloNumber> A, B;
    A.reserve(static_cast<size_t>(J));
    B.reserve(static_cast<size_t>(J));
    for (int k = 0; k < J; ++k) {
        A.push_back(f1.apply(P.vertices[static_cast<size_t>(k)]));
        B.push_back(f2.apply(P.vertices[static_cast<size_t>(k)]));
    }

    // Separating-axis scan over all edge normals of both images. Interiors
    // are disjoint iff some axis projection intervals merely touch or are
    // separated.
    bool touching = false;
    for (int src = 0; src < 2; ++src) {
        const std::vector<CycloNumber>& X = src == 0 ? A : B;
        CycloNumber iu = CycloNumber::imaginary_unit(P.field);
        for (int k = 0; k < J; ++k) {
            CycloNumber dir = X[static_cast<size_t>(k)] - X[static_cast<size_t>((k + J - 1) % J)];
            CycloNumber axis = iu * dir;
            Projection pa = project(A, axis);
            Projection pb = project(B, axis);
            const CycloNumber& lo = compare_real(pa.lo, pb.lo) >= 0 ? pa.lo : pb.lo;
            const CycloNumber& hi = compare_real(pa.hi, pb.hi) <= 0 ? pa.hi : pb.hi;
            int s = compare_real(lo, hi);
            if (s > 0) return ContactClass{ContactClass::Kind::Disjoint, -1, -1};
            if (s == 0) touching = true;
        }
    }
    if (!touching) return ContactClass{ContactClass::Kind::Overlap, -1, -1};

    // Interiors disjoint, boundaries touch. Full shared edge?
    for (int i = 0; i < J; ++i) {
        const CycloNumber& a0 = A[static_cast<size_t>((i + J - 1) % J)];
        const CycloNumber& a1 = A[static_cast<size_t>(i)];
        for (int j = 0; j < J; ++j) {
            const CycloNumber& b0 = B[static_cast<size_t>((j + J - 1) % J)];
            const CycloNumber& b1 = B[static_cast<size_t>(j)];
            if ((a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0)) {
                return ContactClass{ContactClass::Kind::Edge, i, j};
            }
        }
    }

    // Point or partial-edge contact: collect mutually contained vertices.
    const int orientA = f1.phi.conj ? -1 : 1;
    const int orientB = f2.phi.conj ? -1 : 1;
    std::vector<CycloNumber> pts;
    auto add_point = [&pts](const CycloNumber& p) {
        for (const auto& q : pts) {
            if (q == p) return;
        }
        pts.push_back(p);
    };
    for (int k = 0; k < J; ++k) {
        if (point_in_placed(B, orientB, A[static_cast<size_t>(k)])) add_point(A[static_cast<size_t>(k)]);
        if (point_in_placed(A, orientA, B[static_cast<size_t>(k)])) add_point(B[static_cast<size_t>(k)]);
    }
    if (pts.empty()) {
        throw InternalInconsistency("touching polygons with no shared vertex candidates");
    }
    if (pts.size() == 1) {
        int vi = -1, vj = -1;
        for (int k = 0; k < J; ++k) {
            if (A[static_cast<size_t>(k)] == pts[0]) vi = k;
            if (B[static_cast<size_t>(k)] == pts[0]) vj = k;
        }
        if (vi >= 0 && vj >= 0) return ContactClass{ContactClass::Kind::Vertex, vi, vj};
    }
    return ContactClass{ContactClass::Kind::Overlap, -1, -1};
}

std::vector<int> boundary_index_action(const DihedralElement& g, const Polygon& P) {
    if (!g.in_dihedral()) throw NotInDJ("element does not preserve the polygon");
    std::vector<int> perm(static_cast<size_t>(P.J), -1);
    for (int i = 0; i < P.J; ++i) {
        CycloNumber image = g.apply(P.midpoints[static_cast<size_t>(i)]);
        for (int j = 0; j < P.J; ++j) {
            if (image == P.midpoints[static_cast<size_t>(j)]) {
                perm[static_cast<size_t>(i)] = j;
                break;
            }
        }
        if (perm[static_cast<size_t>(i)] < 0) {
            throw InternalInconsistency("midpoint image not matched for a dihedral element");
        }
    }
    return perm;
}

}  // namespace polyfract
