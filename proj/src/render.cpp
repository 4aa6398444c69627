#include "polyfract/render.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "polyfract/errors.hpp"
#include "polyfract/wordtree.hpp"

namespace polyfract {

namespace {

constexpr NodeId kMaxCells = 100000;

std::string fmt9(double x) {
    // Normalize the sign of zero so formatting is a pure function of value.
    if (x == 0.0) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

struct Bounds {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

Bounds outer_bounds(const ValidatedSystem& sys) {
    Bounds b;
    bool first = true;
    for (const CycloNumber& v : sys.polygon.vertices) {
        std::complex<double> z = v.to_complex();
        if (first) {
            b = {z.real(), z.imag(), z.real(), z.imag()};
            first = false;
        } else {
            b.min_x = std::min(b.min_x, z.real());
            b.min_y = std::min(b.min_y, z.imag());
            b.max_x = std::max(b.max_x, z.real());
            b.max_y = std::max(b.max_y, z.imag());
        }
    }
    return b;
}

/// Fixed component palette (applied in component order).
const char* const kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
                                "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

bool word_parity(const ValidatedSystem& sys, const Word& w) {
    bool odd = false;
    for (int letter : w)
        odd ^= sys.cells[static_cast<std::size_t>(letter)].phi.conj;
    return odd;
}

}  // namespace

std::string render_svg(const ValidatedSystem& sys, const RenderSpec& spec) {
    if (spec.level < 0) throw BadLevel("negative generation level");
    const int N = sys.cell_count();
    NodeId total = 1;
    for (int i = 0; i < spec.level; ++i) {
        total *= N;
        if (total > kMaxCells) throw TooLarge("cell count exceeds the rendering guard");
    }

    Bounds b = outer_bounds(sys);
    const double pad_x = 0.05 * (b.max_x - b.min_x);
    const double pad_y = 0.05 * (b.max_y - b.min_y);
    const double view_x = b.min_x - pad_x;
    const double view_y = b.min_y - pad_y;
    const double view_w = (b.max_x - b.min_x) + 2.0 * pad_x;
    const double view_h = (b.max_y - b.min_y) + 2.0 * pad_y;

    // Component coloring, when requested.
    std::vector<std::string> fill_by_node;
    if (spec.overlay == OverlayKind::Components) {
        ComponentDecomposition decomp =
            components(sys, build_level(sys, spec.level), spec.component_cut);
        fill_by_node.assign(static_cast<std::size_t>(total), "#ffffff");
        for (std::size_t c = 0; c < decomp.components.size(); ++c)
            for (NodeId v : decomp.components[c].members)
                fill_by_node[static_cast<std::size_t>(v)] = kPalette[c % kPaletteSize];
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fmt9(spec.canvas_size) + "\" height=\"" + fmt9(spec.canvas_size) + "\" viewBox=\"" +
           fmt9(view_x) + " " + fmt9(view_y) + " " + fmt9(view_w) + " " + fmt9(view_h) + "\">\n";

    out += "<g stroke=\"#333333\" stroke-width=\"" + fmt9(spec.cell_stroke) +
           "\" stroke-linejoin=\"round\">\n";
    for (NodeId id = 0; id < total; ++id) {
        Word w = decode_word(id, N, spec.level);
        // The empty word is the identity, which is not a contraction.
        std::optional<Contraction> map;
        if (!w.empty()) map = word_map(sys, w);
        std::string points;
        for (const CycloNumber& v : sys.polygon.vertices) {
            std::complex<double> z = (map ? map->apply(v) : v).to_complex();
            if (!points.empty()) points += " ";
            points += fmt9(z.real()) + "," + fmt9(z.imag());
        }
        const char* fill;
        if (spec.overlay == OverlayKind::Components)
            fill = fill_by_node[static_cast<std::size_t>(id)].c_str();
        else
            fill = word_parity(sys, w) ? "#cccccc" : "#ffffff";
        out += "<polygon points=\"" + points + "\" fill=\"" + fill + "\"/>\n";
    }
    out += "</g>\n";

    if (spec.overlay == OverlayKind::EssentialEdges) {
        const SubsetZJ essential = essential_boundary(sys);
        LevelGraph graph = build_level(sys, spec.level);
        out += "<g stroke=\"#d62728\" stroke-width=\"" + fmt9(spec.overlay_stroke) +
               "\" stroke-linecap=\"round\">\n";
        for (const LevelGraph::EllEdge& e : restricted_edges(graph, essential)) {
            Word w = decode_word(e.w, N, spec.level);
            Contraction map = word_map(sys, w);
            const int J = sys.J;
            std::complex<double> a =
                map.apply(sys.polygon.vertices[static_cast<std::size_t>((e.i + J - 1) % J)])
                    .to_complex();
            std::complex<double> c =
                map.apply(sys.polygon.vertices[static_cast<std::size_t>(e.i)]).to_complex();
            out += "<line x1=\"" + fmt9(a.real()) + "\" y1=\"" + fmt9(a.imag()) + "\" x2=\"" +
                   fmt9(c.real()) + "\" y2=\"" + fmt9(c.imag()) + "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace polyfract
