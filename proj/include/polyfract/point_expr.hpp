#pragma once

#include <memory>
#include <string>

#include "polyfract/cyclo.hpp"

namespace polyfract {

/// Abstract syntax tree for the point/scalar expression grammar used by
/// system description files: rational literals a/b, symbols p0..p_{J-1}
/// (vertices), q0..q_{J-1} (edge midpoints), w (= e^{i pi / J}), i, r, and
/// the operators +, -, *, integer ^ and parentheses.
struct PointExpr;
using PointExprPtr = std::shared_ptr<const PointExpr>;

struct PointExpr {
    enum class Kind { Rational, Symbol, Neg, Add, Sub, Mul, Pow };

    Kind kind;
    Rational value;           // Kind::Rational
    std::string symbol;       // Kind::Symbol
    PointExprPtr lhs, rhs;    // binary ops; Neg uses lhs only
    long exponent = 0;        // Kind::Pow

    bool operator==(const PointExpr& o) const;
};

/// Parse to an AST. Throws SyntaxError (message includes the byte offset) or
/// UnknownSymbol; index range against J is checked at evaluation time.
PointExprPtr parse_point_expr_ast(const std::string& text);

/// Deterministic pretty-printer; parse(print(ast)) == ast structurally.
std::string to_string(const PointExpr& expr);

/// Evaluate against a polygon order J and contraction ratio r.
/// Throws OutOfRange for p_k / q_k with k >= J.
CycloNumber eval_point_expr(const PointExpr& expr, int J, const CycloNumber& r);

/// Parse-and-evaluate convenience entry point.
CycloNumber parse_point_expr(const std::string& text, int J, const CycloNumber& r);

/// Exact vertex p_k of the incircle-radius-1 regular J-gon:
/// p_k = (1/cos(pi/J)) * (cos theta_k, sin theta_k) with
/// theta_k = pi/J + 2 pi k / J - pi/2.
CycloNumber gon_vertex(const CycloFieldPtr& field, int k);

/// Midpoint q_k of the edge b_k connecting p_{k-1} and p_k.
CycloNumber gon_edge_midpoint(const CycloFieldPtr& field, int k);

}  // namespace polyfract
