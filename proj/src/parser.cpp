#include <algorithm>
#include <cctype>

#include "chargebounds/errors.hpp"
#include "chargebounds/setexpr.hpp"

namespace chargebounds {

SetExprPtr expr_class(const ResidueClass& c) {
    auto e = std::make_shared<SetExpr>();
    e->kind = NodeKind::Class;
    e->cls = c;
    return e;
}

SetExprPtr expr_primes() {
    auto e = std::make_shared<SetExpr>();
    e->kind = NodeKind::Primes;
    return e;
}

SetExprPtr expr_all() {
    auto e = std::make_shared<SetExpr>();
    e->kind = NodeKind::AllIntegers;
    return e;
}

SetExprPtr expr_empty() {
    auto e = std::make_shared<SetExpr>();
    e->kind = NodeKind::EmptySet;
    return e;
}

SetExprPtr expr_finite(std::vector<std::int64_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    auto e = std::make_shared<SetExpr>();
    e->kind = NodeKind::FiniteSet;
    e->elems = std::move(elems);
    return e;
}

static SetExprPtr make_node(NodeKind kind, std::vector<SetExprPtr> children) {
    auto e = std::make_shared<SetExpr>();
    e->kind = kind;
    e->children = std::move(children);
    return e;
}

SetExprPtr expr_complement(SetExprPtr e) { return make_node(NodeKind::Complement, {std::move(e)}); }
SetExprPtr expr_union(SetExprPtr a, SetExprPtr b) {
    return make_node(NodeKind::Union, {std::move(a), std::move(b)});
}
SetExprPtr expr_intersection(SetExprPtr a, SetExprPtr b) {
    return make_node(NodeKind::Intersection, {std::move(a), std::move(b)});
}
SetExprPtr expr_difference(SetExprPtr a, SetExprPtr b) {
    return make_node(NodeKind::Difference, {std::move(a), std::move(b)});
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const ExprLimits& limits) : text_(text), limits_(limits) {}

    SetExprPtr run() {
        SetExprPtr e = parse_union(0);
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    const ExprLimits& limits_;
    std::size_t pos_ = 0;
    std::size_t nodes_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void count_node() {
        if (++nodes_ > limits_.max_nodes) fail("expression too large");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
    }

    bool eat_keyword(std::string_view kw) {
        skip_ws();
        if (text_.substr(pos_, kw.size()) != kw) return false;
        const std::size_t end = pos_ + kw.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            return false;
        }
        pos_ = end;
        return true;
    }

    std::int64_t parse_int() {
        skip_ws();
        const std::size_t start = pos_;
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            pos_ = start;
            fail("expected an integer");
        }
        std::uint64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (v > (1ULL << 62)) {
                pos_ = start;
                fail("integer literal out of range");
            }
            ++pos_;
        }
        return neg ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
    }

    SetExprPtr parse_union(std::size_t depth) {
        SetExprPtr left = parse_interdiff(depth + 1);
        while (eat('|')) {
            count_node();
            left = expr_union(std::move(left), parse_interdiff(depth + 1));
        }
        return left;
    }

    // '&' and '\' share one precedence tier, left-associative.
    SetExprPtr parse_interdiff(std::size_t depth) {
        check_depth(depth);
        SetExprPtr left = parse_unary(depth + 1);
        for (;;) {
            if (eat('&')) {
                count_node();
                left = expr_intersection(std::move(left), parse_unary(depth + 1));
            } else if (eat('\\')) {
                count_node();
                left = expr_difference(std::move(left), parse_unary(depth + 1));
            } else {
                return left;
            }
        }
    }

    SetExprPtr parse_unary(std::size_t depth) {
        check_depth(depth);
        if (eat('!')) {
            count_node();
            return expr_complement(parse_unary(depth + 1));
        }
        return parse_primary(depth + 1);
    }

    SetExprPtr parse_primary(std::size_t depth) {
        check_depth(depth);
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (eat('(')) {
            SetExprPtr e = parse_union(depth + 1);
            expect(')', "to close the group");
            return e;
        }
        if (eat('{')) {
            count_node();
            std::vector<std::int64_t> elems;
            skip_ws();
            if (!eat('}')) {
                for (;;) {
                    elems.push_back(parse_int());
                    if (elems.size() > limits_.finite_set_limit) {
                        fail("finite-set literal too large");
                    }
                    if (eat('}')) break;
                    expect(',', "between finite-set members");
                }
            }
            return expr_finite(std::move(elems));
        }
        if (eat_keyword("primes")) {
            count_node();
            return expr_primes();
        }
        if (eat_keyword("all")) {
            count_node();
            return expr_all();
        }
        if (eat_keyword("empty")) {
            count_node();
            return expr_empty();
        }
        if (eat_keyword("class")) {
            count_node();
            expect('(', "after 'class'");
            const std::int64_t r = parse_int();
            expect(',', "between class shift and modulus");
            skip_ws();
            const std::size_t mod_pos = pos_;
            const std::int64_t m = parse_int();
            expect(')', "to close 'class'");
            if (m < 1) throw ParseError("class modulus must be positive", mod_pos);
            return expr_class(make_class(r, m));
        }
        fail("expected an expression");
    }

    void check_depth(std::size_t depth) {
        if (depth > limits_.max_depth) fail("expression nesting too deep");
    }
};

void render(const SetExpr& e, std::string& out) {
    switch (e.kind) {
    case NodeKind::Class:
        out += "class(" + std::to_string(e.cls.shift) + "," + std::to_string(e.cls.modulus) + ")";
        return;
    case NodeKind::Primes:
        out += "primes";
        return;
    case NodeKind::AllIntegers:
        out += "all";
        return;
    case NodeKind::EmptySet:
        out += "empty";
        return;
    case NodeKind::FiniteSet: {
        out += "{";
        for (std::size_t i = 0; i < e.elems.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(e.elems[i]);
        }
        out += "}";
        return;
    }
    case NodeKind::Complement:
        out += "!(";
        render(*e.children[0], out);
        out += ")";
        return;
    case NodeKind::Union:
    case NodeKind::Intersection:
    case NodeKind::Difference: {
        const char* op = e.kind == NodeKind::Union ? " | "
                         : e.kind == NodeKind::Intersection ? " & "
                                                            : " \\ ";
        out += "(";
        render(*e.children[0], out);
        out += op;
        render(*e.children[1], out);
        out += ")";
        return;
    }
    }
}

} // namespace

SetExprPtr parse(std::string_view text, const ExprLimits& limits) {
    return Parser(text, limits).run();
}

std::string to_text(const SetExpr& expr) {
    std::string out;
    render(expr, out);
    return out;
}

} // namespace chargebounds
