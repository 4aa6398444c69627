#pragma once

#include <string>

#include "polyfract/boundary.hpp"
#include "polyfract/system.hpp"

namespace polyfract {

/// What to draw above the generation cells.
enum class OverlayKind { None, EssentialEdges, Components, PhiParityFill };

/// Deterministic drawing parameters: the palette, stroke widths and float
/// formatting are fixed so identical inputs yield byte-identical output.
struct RenderSpec {
    int level = 1;
    OverlayKind overlay = OverlayKind::None;
    SubsetZJ component_cut = 0;  // X for the Components overlay
    double canvas_size = 640.0;  // px, square canvas
    double cell_stroke = 0.004;  // in model units
    double overlay_stroke = 0.02;
};

/// SVG 1.1 document with one polygon per level-m cell (exact coordinates
/// emitted at 9 significant digits), the viewBox enclosing the exact
/// bounding box of the base polygon plus 5% padding, and the requested
/// overlay drawn above the cells.  TooLarge when the cell count guard
/// is exceeded.
std::string render_svg(const ValidatedSystem& sys, const RenderSpec& spec);

}  // namespace polyfract
