#include "polyfract/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "toml_mini.hpp"

namespace polyfract {

namespace {

void require_keys(const toml::Value& table, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : table.table) {
        (void)value;
        if (!allowed.count(key)) {
            throw SyntaxError("unknown key \"" + key + "\" in " + where);
        }
    }
}

int as_int(const toml::Value& v, const std::string& what) {
    long long x = v.as_integer();
    if (x < -(1LL << 30) || x > (1LL << 30)) {
        throw SyntaxError(what + " out of range");
    }
    return static_cast<int>(x);
}

std::pair<int, bool> parse_element_spec(const toml::Value& t, const std::string& where) {
    require_keys(t, {"half_turns", "conj"}, where);
    return {as_int(t.at("half_turns"), where + ".half_turns"), t.at("conj").as_boolean()};
}

}  // namespace

SystemDescription load_system(const std::string& text) {
    toml::Value root = toml::parse(text);
    require_keys(root, {"format", "J", "r", "group", "cells"}, "document root");

    if (root.at("format").as_string() != "polyfract/v1") {
        throw SyntaxError("unsupported format \"" + root.at("format").as_string() +
                          "\" (expected \"polyfract/v1\")");
    }

    SystemDescription desc;
    desc.J = as_int(root.at("J"), "J");
    desc.r_expr = root.at("r").as_string();
    parse_point_expr_ast(desc.r_expr);  // syntax check only

    const toml::Value& group = root.at("group");
    if (group.kind != toml::Value::Kind::Table) {
        throw SyntaxError("group must be a table");
    }
    desc.group.kind = group.at("kind").as_string();
    if (desc.group.kind == "trivial" || desc.group.kind == "dihedral_v") {
        require_keys(group, {"kind"}, "group");
    } else if (desc.group.kind == "rot" || desc.group.kind == "dihedral") {
        require_keys(group, {"kind", "k"}, "group");
        desc.group.k = as_int(group.at("k"), "group.k");
    } else if (desc.group.kind == "explicit") {
        require_keys(group, {"kind", "elements"}, "group");
        const toml::Value& elems = group.at("elements");
        if (elems.kind != toml::Value::Kind::Array) {
            throw SyntaxError("group.elements must be an array");
        }
        for (const toml::Value& e : elems.array) {
            desc.group.elements.push_back(parse_element_spec(e, "group element"));
        }
    } else {
        throw UnknownGroupKind("unknown group kind \"" + desc.group.kind + "\"");
    }

    const toml::Value* cells = root.find("cells");
    if (cells == nullptr || cells->array.empty()) {
        throw EmptyCells("system has no cells");
    }
    std::set<std::string> seen_ids;
    for (const toml::Value& c : cells->array) {
        require_keys(c, {"id", "phi", "center"}, "cell");
        SystemDescription::Cell cell;
        cell.id = c.at("id").as_string();
        if (!seen_ids.insert(cell.id).second) {
            throw DuplicateCellId("duplicate cell id \"" + cell.id + "\"");
        }
        auto [half_turns, conj] = parse_element_spec(c.at("phi"), "cell phi");
        cell.phi_half_turns = half_turns;
        cell.phi_conj = conj;
        cell.center_expr = c.at("center").as_string();
        parse_point_expr_ast(cell.center_expr);  // syntax check only
        desc.cells.push_back(std::move(cell));
    }
    return desc;
}

namespace {

std::string element_text(const DihedralElement& g) {
    std::ostringstream out;
    out << (g.conj ? "reflection" : "rotation") << "(half_turns=" << g.normalized().half_turns
        << ")";
    return out.str();
}

/// Strict ordering on exact numbers by coefficient vector (for canonical keys).
struct CoeffLess {
    bool operator()(const CycloNumber& a, const CycloNumber& b) const {
        const auto& x = a.coeffs();
        const auto& y = b.coeffs();
        for (std::size_t k = 0; k < x.size(); ++k) {
            int c = cmp(x[k], y[k]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

SymmetryGroup build_group(const SystemDescription& desc) {
    const auto& g = desc.group;
    if (g.kind == "trivial") return SymmetryGroup::trivial(desc.J);
    if (g.kind == "rot") return SymmetryGroup::rot(desc.J, g.k);
    if (g.kind == "dihedral") return SymmetryGroup::dihedral(desc.J, g.k);
    if (g.kind == "dihedral_v") return SymmetryGroup::dihedral_v(desc.J);
    if (g.kind == "explicit") {
        std::vector<DihedralElement> gens;
        for (auto [half_turns, conj] : g.elements) {
            gens.push_back(DihedralElement{desc.J, half_turns, conj}.normalized());
        }
        return SymmetryGroup::from_generators(desc.J, std::move(gens));
    }
    throw UnknownGroupKind("unknown group kind \"" + g.kind + "\"");
}

}  // namespace

int ValidatedSystem::cell_index(const std::string& id) const {
    auto it = std::find(cell_ids.begin(), cell_ids.end(), id);
    if (it == cell_ids.end()) throw UnknownWord("unknown cell id \"" + id + "\"");
    return static_cast<int>(it - cell_ids.begin());
}

DihedralElement ValidatedSystem::edge_group_element(int s, int t) const {
    for (const EllEdge1& e : ell_edges) {
        if (e.s == s && e.t == t) return e.g;
        if (e.s == t && e.t == s) {
            // Opposite direction: recompute from the stored indices.
            return (cells[s].phi.inverse() * cells[t].phi *
                    DihedralElement::edge_reflection(J, e.j))
                .normalized();
        }
    }
    throw InternalInconsistency("no full-edge contact between cells " + std::to_string(s) +
                                " and " + std::to_string(t));
}

std::pair<int, int> ValidatedSystem::edge_indices(int s, int t) const {
    for (const EllEdge1& e : ell_edges) {
        if (e.s == s && e.t == t) return {e.i, e.j};
        if (e.s == t && e.t == s) return {e.j, e.i};
    }
    throw InternalInconsistency("no full-edge contact between cells " + std::to_string(s) +
                                " and " + std::to_string(t));
}

ValidationResult validate(const SystemDescription& desc) {
    Polygon polygon = regular_polygon(desc.J);
    const int J = desc.J;
    CycloFieldPtr field = polygon.field;

    CycloNumber ratio = parse_point_expr(desc.r_expr, J, CycloNumber::zero(field));
    SymmetryGroup group = build_group(desc);

    ValidatedSystem sys(ratio, group);
    sys.J = J;
    sys.field = field;
    sys.polygon = polygon;
    sys.cell_ids.reserve(desc.cells.size());
    for (const auto& cell : desc.cells) {
        DihedralElement phi = DihedralElement{J, cell.phi_half_turns, cell.phi_conj}.normalized();
        CycloNumber center = parse_point_expr(cell.center_expr, J, ratio);
        sys.cells.emplace_back(ratio, phi, std::move(center));
        sys.cell_ids.push_back(cell.id);
    }
    const int N = sys.cell_count();

    ValidationResult result;
    AxiomReport& report = result.report;

    // (A1) containment: every image vertex on the inner side of every
    // supporting line of Q_*.
    for (int s = 0; s < N; ++s) {
        for (int k = 0; k < J; ++k) {
            CycloNumber image = sys.cells[s].apply(polygon.vertices[k]);
            for (int i = 0; i < J; ++i) {
                if (side_of_edge(polygon, i, image) < 0) {
                    report.a1.pass = false;
                    report.a1.witnesses.push_back("cell \"" + sys.cell_ids[s] +
                                                  "\": image of vertex " + std::to_string(k) +
                                                  " lies outside supporting line of edge " +
                                                  std::to_string(i));
                }
            }
        }
    }

    // Contact classification for every unordered pair, then (A4).
    sys.contact.assign(N, std::vector<ContactClass>(N));
    for (int s = 0; s < N; ++s) {
        for (int t = s + 1; t < N; ++t) {
            ContactClass c = classify_contact(sys.cells[s], sys.cells[t], polygon);
            sys.contact[s][t] = c;
            sys.contact[t][s] = ContactClass{c.kind, c.j, c.i};
            const std::string pair_text =
                "(\"" + sys.cell_ids[s] + "\", \"" + sys.cell_ids[t] + "\")";
            switch (c.kind) {
                case ContactClass::Kind::Disjoint:
                    break;
                case ContactClass::Kind::Overlap:
                    report.a4.pass = false;
                    report.a4.witnesses.push_back("cells " + pair_text +
                                                  " intersect in more than a full edge or a "
                                                  "single shared vertex");
                    break;
                case ContactClass::Kind::Vertex:
                    sys.vertex_contacts.push_back(VertexContact1{s, t, c.i, c.j});
                    break;
                case ContactClass::Kind::Edge: {
                    DihedralElement g = (sys.cells[t].phi.inverse() * sys.cells[s].phi *
                                         DihedralElement::edge_reflection(J, c.i))
                                            .normalized();
                    sys.ell_edges.push_back(EllEdge1{s, t, c.i, c.j, g});
                    if (!group.contains(g)) {
                        report.a4.pass = false;
                        report.a4.witnesses.push_back(
                            "full-edge contact " + pair_text + " requires " + element_text(g) +
                            ", which is not in the symmetry group");
                    }
                    break;
                }
            }
        }
    }

    // Boundary tables, then (A2): every outer edge covered by some cell edge.
    sys.edge_on_boundary.assign(N, std::vector<int>(J, -1));
    sys.vertex_at_corner.assign(N, std::vector<int>(J, -1));
    sys.vertex_on_edges.assign(N, std::vector<unsigned>(J, 0));
    for (int s = 0; s < N; ++s) {
        std::vector<CycloNumber> image_vertices;
        image_vertices.reserve(J);
        for (int k = 0; k < J; ++k) {
            image_vertices.push_back(sys.cells[s].apply(polygon.vertices[k]));
        }
        for (int k = 0; k < J; ++k) {
            for (int i = 0; i < J; ++i) {
                if (side_of_edge(polygon, i, image_vertices[k]) == 0) {
                    sys.vertex_on_edges[s][k] |= (1u << i);
                }
                if (image_vertices[k] == polygon.vertices[i]) {
                    sys.vertex_at_corner[s][k] = i;
                }
            }
        }
        for (int k = 0; k < J; ++k) {
            // f_s(b_k) has endpoints f_s(p_{k-1}) and f_s(p_k); with (A1) it
            // lies in b_i iff both endpoints are on the supporting line.
            unsigned shared =
                sys.vertex_on_edges[s][(k + J - 1) % J] & sys.vertex_on_edges[s][k];
            for (int i = 0; i < J; ++i) {
                if (shared & (1u << i)) {
                    sys.edge_on_boundary[s][k] = i;
                    break;
                }
            }
        }
    }
    for (int i = 0; i < J; ++i) {
        bool covered = false;
        for (int s = 0; s < N && !covered; ++s) {
            for (int k = 0; k < J && !covered; ++k) {
                covered = (sys.edge_on_boundary[s][k] == i);
            }
        }
        if (!covered) {
            report.a2.pass = false;
            report.a2.witnesses.push_back("outer edge " + std::to_string(i) +
                                          " is not covered by any cell edge");
        }
    }

    // (A3) constructive group action on cells: match centers exactly, then
    // require the residual element to lie in the group.
    std::map<CycloNumber, int, CoeffLess> center_index;
    for (int s = 0; s < N; ++s) {
        center_index.emplace(sys.cells[s].center, s);
    }
    for (const DihedralElement& g : group.elements) {
        std::vector<int> perm(N, -1);
        bool ok = true;
        for (int s = 0; s < N; ++s) {
            auto it = center_index.find(g.apply(sys.cells[s].center));
            if (it == center_index.end()) {
                report.a3.pass = false;
                report.a3.witnesses.push_back(element_text(g) + " maps the center of cell \"" +
                                              sys.cell_ids[s] + "\" to no cell center");
                ok = false;
                continue;
            }
            int t = it->second;
            DihedralElement residual =
                (sys.cells[t].phi.inverse() * g * sys.cells[s].phi).normalized();
            if (!group.contains(residual)) {
                report.a3.pass = false;
                report.a3.witnesses.push_back(
                    element_text(g) + " carries cell \"" + sys.cell_ids[s] + "\" onto cell \"" +
                    sys.cell_ids[t] + "\" with residual " + element_text(residual) +
                    " outside the group");
                ok = false;
                continue;
            }
            perm[s] = t;
        }
        if (ok) {
            sys.cell_action.emplace(g.normalized(), std::move(perm));
        }
        sys.index_action.emplace(g.normalized(), boundary_index_action(g, polygon));
    }

    // (A5) connectivity of the full-edge contact graph.
    {
        std::vector<int> parent(N);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const EllEdge1& e : sys.ell_edges) {
            parent[find(e.s)] = find(e.t);
        }
        std::set<int> roots;
        for (int s = 0; s < N; ++s) roots.insert(find(s));
        if (roots.size() > 1) {
            report.a5.pass = false;
            report.a5.witnesses.push_back(
                "full-edge contact graph has " + std::to_string(roots.size()) +
                " connected components");
        }
    }

    if (report.all_pass()) {
        result.system = std::move(sys);
    }
    return result;
}

ValidatedSystem validate_or_throw(const SystemDescription& desc) {
    ValidationResult result = validate(desc);
    if (!result.ok()) {
        std::string detail = "axiom check failed";
        for (const auto* check : {&result.report.a1, &result.report.a2, &result.report.a3,
                                  &result.report.a4, &result.report.a5}) {
            if (!check->pass && !check->witnesses.empty()) {
                detail += ": " + check->witnesses.front();
                break;
            }
        }
        throw NotValidated(detail);
    }
    return std::move(*result.system);
}

std::pair<Word, DihedralElement> group_action_with_residual(const ValidatedSystem& sys,
                                                            const DihedralElement& g,
                                                            const Word& w) {
    DihedralElement current = g.normalized();
    Word out;
    out.reserve(w.size());
    for (int letter : w) {
        if (letter < 0 || letter >= sys.cell_count()) {
            throw OutOfRange("cell index " + std::to_string(letter) + " out of range");
        }
        auto it = sys.cell_action.find(current);
        if (it == sys.cell_action.end()) {
            throw NotInG("element " + element_text(current) + " is not in the symmetry group");
        }
        int image = it->second[letter];
        out.push_back(image);
        current = (sys.cells[image].phi.inverse() * current * sys.cells[letter].phi).normalized();
    }
    if (sys.cell_action.find(current) == sys.cell_action.end()) {
        throw NotInG("element " + element_text(current) + " is not in the symmetry group");
    }
    return {std::move(out), current};
}

Word group_action_on_words(const ValidatedSystem& sys, const DihedralElement& g, const Word& w) {
    return group_action_with_residual(sys, g, w).first;
}

FoldabilityReport detect_trivial_symmetry(const ValidatedSystem& sys) {
    FoldabilityReport report;
    report.foldable = sys.group.is_trivial();
    if (!report.foldable) return report;
    for (const EllEdge1& e : sys.ell_edges) {
        const std::string pair_text =
            "(\"" + sys.cell_ids[e.s] + "\", \"" + sys.cell_ids[e.t] + "\")";
        if (e.i != e.j) {
            report.witnesses.push_back("full-edge contact " + pair_text +
                                       " uses distinct boundary indices " + std::to_string(e.i) +
                                       " and " + std::to_string(e.j));
            continue;
        }
        const Polygon& P = sys.polygon;
        const CycloNumber& a = P.vertices[(e.i + sys.J - 1) % sys.J];
        const CycloNumber& b = P.vertices[e.i];
        if (sys.cells[e.s].apply(a) != sys.cells[e.t].apply(a) ||
            sys.cells[e.s].apply(b) != sys.cells[e.t].apply(b)) {
            report.witnesses.push_back("maps of cells " + pair_text +
                                       " disagree on their shared segment");
        }
    }
    return report;
}

Contraction word_map(const ValidatedSystem& sys, const Word& w) {
    if (w.empty()) {
        return Contraction(CycloNumber::one(sys.field), DihedralElement::identity(sys.J),
                           CycloNumber::zero(sys.field));
    }
    Contraction f = sys.cells.at(w.front());
    for (std::size_t k = 1; k < w.size(); ++k) {
        f = f.compose(sys.cells.at(w[k]));
    }
    return f;
}

SymmetryCandidates candidate_maximal_symmetry(const ValidatedSystem& sys, int n_max) {
    if (n_max < 1) throw PreconditionFailed("n_max must be at least 1");
    const int J = sys.J;
    const int N = sys.cell_count();

    // Candidates: all 2J symmetries of Q_*.
    std::vector<DihedralElement> candidates;
    for (int h = 0; h < 2 * J; ++h) {
        for (bool conj : {false, true}) {
            DihedralElement g{J, h, conj};
            if (g.in_dihedral()) candidates.push_back(g.normalized());
        }
    }

    // Canonical key of the set g(Q_w): its sorted exact vertex list.
    using Key = std::vector<std::vector<Rational>>;
    auto coeff_less = [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            int c = cmp(x[i], y[i]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    auto key_of = [&](const Contraction& f, const DihedralElement& g) {
        Key key;
        key.reserve(J);
        for (int k = 0; k < J; ++k) {
            key.push_back(g.apply(f.apply(sys.polygon.vertices[k])).coeffs());
        }
        std::sort(key.begin(), key.end(), coeff_less);
        return key;
    };

    std::vector<Contraction> level = sys.cells;
    for (int n = 1; n <= n_max && !candidates.empty(); ++n) {
        const DihedralElement id = DihedralElement::identity(J);
        std::set<Key> keys;
        for (const Contraction& f : level) {
            keys.insert(key_of(f, id));
        }
        std::vector<DihedralElement> survivors;
        for (const DihedralElement& g : candidates) {
            bool permutes = true;
            for (const Contraction& f : level) {
                if (!keys.count(key_of(f, g))) {
                    permutes = false;
                    break;
                }
            }
            if (permutes) survivors.push_back(g);
        }
        candidates = std::move(survivors);
        if (n < n_max) {
            std::vector<Contraction> next;
            next.reserve(level.size() * N);
            for (const Contraction& f : level) {
                for (int s = 0; s < N; ++s) {
                    next.push_back(f.compose(sys.cells[s]));
                }
            }
            level = std::move(next);
        }
    }

    SymmetryCandidates out;
    out.elements = std::move(candidates);
    out.verified_depth = n_max;
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

}  // namespace polyfract
