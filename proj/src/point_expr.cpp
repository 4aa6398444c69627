#include "polyfract/point_expr.hpp"

#include <cctype>
#include <sstream>

namespace polyfract {

bool PointExpr::operator==(const PointExpr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Rational: return value == o.value;
        case Kind::Symbol: return symbol == o.symbol;
        case Kind::Neg: return *lhs == *o.lhs;
        case Kind::Pow: return exponent == o.exponent && *lhs == *o.lhs;
        default: return *lhs == *o.lhs && *rhs == *o.rhs;
    }
}

namespace {

PointExprPtr make(PointExpr e) { return std::make_shared<PointExpr>(std::move(e)); }

struct Parser {
    const std::string& text;
    size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << what << " at byte offset " << pos;
        throw SyntaxError(os.str());
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    mpz_class parse_integer_digits() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return mpz_class(text.substr(start, pos - start));
    }

    PointExprPtr parse_rational() {
        mpz_class num = parse_integer_digits();
        mpz_class den = 1;
        size_t save = pos;
        skip_ws();
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            skip_ws();
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                fail("malformed rational literal");
            }
            den = parse_integer_digits();
            if (den == 0) fail("rational literal with zero denominator");
        } else {
            pos = save;
        }
        PointExpr e;
        e.kind = PointExpr::Kind::Rational;
        e.value = Rational(num, den);
        e.value.canonicalize();
        return make(std::move(e));
    }

    PointExprPtr parse_symbol() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
        }
        std::string name = text.substr(start, pos - start);
        bool ok = name == "w" || name == "i" || name == "r";
        if (!ok && (name.size() >= 2) && (name[0] == 'p' || name[0] == 'q')) {
            ok = true;
            for (size_t k = 1; k < name.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(name[k]))) ok = false;
            }
        }
        if (!ok) throw UnknownSymbol("unknown symbol '" + name + "'");
        PointExpr e;
        e.kind = PointExpr::Kind::Symbol;
        e.symbol = name;
        return make(std::move(e));
    }

    PointExprPtr parse_primary() {
        char c = peek();
        if (c == '(') {
            eat('(');
            PointExprPtr inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_symbol();
        fail("expected a literal, symbol or '('");
    }

    PointExprPtr parse_factor() {
        if (eat('-')) {
            PointExpr e;
            e.kind = PointExpr::Kind::Neg;
            e.lhs = parse_factor();
            return make(std::move(e));
        }
        PointExprPtr base = parse_primary();
        if (eat('^')) {
            bool neg = eat('-');
            mpz_class k = parse_integer_digits();
            if (!k.fits_slong_p()) fail("exponent too large");
            PointExpr e;
            e.kind = PointExpr::Kind::Pow;
            e.lhs = base;
            e.exponent = k.get_si() * (neg ? -1 : 1);
            return make(std::move(e));
        }
        return base;
    }

    PointExprPtr parse_term() {
        PointExprPtr acc = parse_factor();
        while (eat('*')) {
            PointExpr e;
            e.kind = PointExpr::Kind::Mul;
            e.lhs = acc;
            e.rhs = parse_factor();
            acc = make(std::move(e));
        }
        return acc;
    }

    PointExprPtr parse_expr() {
        PointExprPtr acc = parse_term();
        while (true) {
            if (eat('+')) {
                PointExpr e;
                e.kind = PointExpr::Kind::Add;
                e.lhs = acc;
                e.rhs = parse_term();
                acc = make(std::move(e));
            } else if (eat('-')) {
                PointExpr e;
                e.kind = PointExpr::Kind::Sub;
                e.lhs = acc;
                e.rhs = parse_term();
                acc = make(std::move(e));
            } else {
                return acc;
            }
        }
    }
};

}  // namespace

PointExprPtr parse_point_expr_ast(const std::string& text) {
    Parser p(text);
    PointExprPtr expr = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return expr;
}

std::string to_string(const PointExpr& expr) {
    switch (expr.kind) {
        case PointExpr::Kind::Rational: return expr.value.get_str();
        case PointExpr::Kind::Symbol: return expr.symbol;
        case PointExpr::Kind::Neg: return "(-" + to_string(*expr.lhs) + ")";
        case PointExpr::Kind::Add:
            return "(" + to_string(*expr.lhs) + " + " + to_string(*expr.rhs) + ")";
        case PointExpr::Kind::Sub:
            return "(" + to_string(*expr.lhs) + " - " + to_string(*expr.rhs) + ")";
        case PointExpr::Kind::Mul:
            return "(" + to_string(*expr.lhs) + " * " + to_string(*expr.rhs) + ")";
        case PointExpr::Kind::Pow:
            return "(" + to_string(*expr.lhs) + " ^ " + std::to_string(expr.exponent) + ")";
    }
    throw InternalInconsistency("unhandled expression kind");
}

CycloNumber gon_vertex(const CycloFieldPtr& field, int k) {
    // p_k = e^{i theta_k} / cos(pi/J) with theta_k = pi/J + 2*pi*k/J - pi/2,
    // i.e. p_k = -i * omega^{2k+1} / ((omega + omega^{-1}) / 2).
    CycloNumber omega = CycloNumber::omega_power(field, 1);
    CycloNumber cos_pi_over_j = (omega + omega.conj()) * Rational(1, 2);
    CycloNumber dir = CycloNumber::omega_power(field, 2L * k + 1) *
                      (-CycloNumber::imaginary_unit(field));
    return dir / cos_pi_over_j;
}

CycloNumber gon_edge_midpoint(const CycloFieldPtr& field, int k) {
    int J = field->gon();
    int prev = ((k - 1) % J + J) % J;
    return (gon_vertex(field, prev) + gon_vertex(field, k)) * Rational(1, 2);
}

CycloNumber eval_point_expr(const PointExpr& expr, int J, const CycloNumber& r) {
    const CycloFieldPtr& field = r.field();
    switch (expr.kind) {
        case PointExpr::Kind::Rational:
            return CycloNumber::from_rational(field, expr.value);
        case PointExpr::Kind::Symbol: {
            const std::string& s = expr.symbol;
            if (s == "w") return CycloNumber::omega_power(field, 1);
            if (s == "i") return CycloNumber::imaginary_unit(field);
            if (s == "r") return r;
            long k = std::stol(s.substr(1));
            if (k >= J) {
                throw OutOfRange("symbol '" + s + "' exceeds the polygon order J=" +
                                 std::to_string(J));
            }
            return s[0] == 'p' ? gon_vertex(field, static_cast<int>(k))
                               : gon_edge_midpoint(field, static_cast<int>(k));
        }
        case PointExpr::Kind::Neg: return -eval_point_expr(*expr.lhs, J, r);
        case PointExpr::Kind::Add:
            return eval_point_expr(*expr.lhs, J, r) + eval_point_expr(*expr.rhs, J, r);
        case PointExpr::Kind::Sub:
            return eval_point_expr(*expr.lhs, J, r) - eval_point_expr(*expr.rhs, J, r);
        case PointExpr::Kind::Mul:
            return eval_point_expr(*expr.lhs, J, r) * eval_point_expr(*expr.rhs, J, r);
        case PointExpr::Kind::Pow: {
            CycloNumber base = eval_point_expr(*expr.lhs, J, r);
            long e = expr.exponent;
            if (e < 0) {
                base = base.inverse();
                e = -e;
            }
            CycloNumber acc = CycloNumber::one(base.field());
            for (long k = 0; k < e; ++k) acc = acc * base;
            return acc;
        }
    }
    throw InternalInconsistency("unhandled expression kind");
}

CycloNumber parse_point_expr(const std::string& text, int J, const CycloNumber& r) {
    return eval_point_expr(*parse_point_expr_ast(text), J, r);
}

}  // namespace polyfract
