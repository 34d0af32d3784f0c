#include "nesynth/sketch.hpp"

#include "nesynth/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <system_error>
#include <type_traits>
#include <utility>

namespace nesynth {

std::string_view token_text(Comparison c) noexcept {
    switch (c) {
    case Comparison::Equal: return "==";
    case Comparison::Greater: return ">";
    case Comparison::Less: return "<";
    }
    return "?";
}

std::string_view token_text(ArithOp op) noexcept {
    switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    }
    return "?";
}

std::string_view hole_token(HoleKind kind) noexcept {
    switch (kind) {
    case HoleKind::Cond: return "[COND]";
    case HoleKind::Op: return "[OP]";
    case HoleKind::Real: return "[Real]";
    }
    return "?";
}

std::size_t HoleSpec::arity() const noexcept {
    switch (kind) {
    case HoleKind::Cond: return kComparisonCount;
    case HoleKind::Op: return kArithOpCount;
    case HoleKind::Real: return 0;
    }
    return 0;
}

bool operator==(const Literal& a, const Literal& b) noexcept {
    return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
}

ConcreteProgram::ConcreteProgram(Sketch sketch) : sketch_(std::move(sketch)) {
    if (!sketch_.concrete()) {
        throw Error(ErrorCategory::Parse,
                    "program '" + sketch_.name + "' still contains " +
                        std::to_string(sketch_.hole_count()) + " hole(s)");
    }
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
    Ident,
    Number,
    Hole,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Semicolon,
    Arrow,
    EqEq,
    Greater,
    Less,
    Plus,
    Minus,
    Star,
    Slash,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
    double number = 0.0;
    HoleKind hole = HoleKind::Real;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::End) {
        return "end of input";
    }
    return "'" + std::string(t.text) + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            const std::size_t start = pos_;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::Ident;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number(t);
            } else if (c == '[') {
                lex_hole(t);
            } else {
                lex_symbol(t);
            }
            t.text = src_.substr(start, pos_ - start);
            out.push_back(t);
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    bool at(char c, std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() && src_[pos_ + ahead] == c;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (at('/') && at('/', 1)) {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    void digits() {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            advance();
        }
    }

    void lex_number(Token& t) {
        const std::size_t start = pos_;
        digits();
        if (at('.')) {
            advance();
            digits();
        }
        if (at('e') || at('E')) {
            advance();
            if (at('+') || at('-')) {
                advance();
            }
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                throw ParseError(line_, column_, "malformed exponent in number");
            }
            digits();
        }
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, t.number);
        if (ec != std::errc{} || ptr != last || !std::isfinite(t.number)) {
            throw ParseError(t.line, t.column,
                             "number out of range: " + std::string(first, last));
        }
        t.kind = Tok::Number;
    }

    void lex_hole(Token& t) {
        for (const HoleKind kind : {HoleKind::Cond, HoleKind::Op, HoleKind::Real}) {
            const std::string_view spelling = hole_token(kind);
            if (src_.substr(pos_, spelling.size()) == spelling) {
                for (std::size_t i = 0; i < spelling.size(); ++i) {
                    advance();
                }
                t.kind = Tok::Hole;
                t.hole = kind;
                return;
            }
        }
        throw ParseError(line_, column_, "unknown hole; expected [COND], [OP] or [Real]");
    }

    void lex_symbol(Token& t) {
        const char c = src_[pos_];
        auto one = [&](Tok kind) {
            advance();
            t.kind = kind;
        };
        switch (c) {
        case '(': return one(Tok::LParen);
        case ')': return one(Tok::RParen);
        case '{': return one(Tok::LBrace);
        case '}': return one(Tok::RBrace);
        case ':': return one(Tok::Colon);
        case ',': return one(Tok::Comma);
        case ';': return one(Tok::Semicolon);
        case '>': return one(Tok::Greater);
        case '<': return one(Tok::Less);
        case '+': return one(Tok::Plus);
        case '*': return one(Tok::Star);
        case '/': return one(Tok::Slash);
        case '-':
            if (at('>', 1)) {
                advance();
                return one(Tok::Arrow);
            }
            return one(Tok::Minus);
        case '=':
            if (at('=', 1)) {
                advance();
                return one(Tok::EqEq);
            }
            break;
        default: break;
        }
        throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Sketch run() {
        expect_keyword("fn");
        sketch_.name = std::string(expect(Tok::Ident, "function name").text);
        expect(Tok::LParen, "'('");
        if (peek().kind == Tok::RParen) {
            throw ParseError(peek().line, peek().column,
                             "function must take at least one f32 input");
        }
        parse_param();
        while (accept(Tok::Comma)) {
            parse_param();
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Arrow, "'->'");
        expect_keyword("f32");
        expect(Tok::LBrace, "'{'");
        if (is_keyword(peek(), "if")) {
            sketch_.guard = parse_if();
        }
        sketch_.result = parse_return();
        expect(Tok::RBrace, "'}'");
        if (peek().kind != Tok::End) {
            throw error_at(peek(), "expected end of input, found " + describe(peek()));
        }
        return std::move(sketch_);
    }

private:
    static bool is_keyword(const Token& t, std::string_view word) {
        return t.kind == Tok::Ident && t.text == word;
    }

    static bool is_reserved(std::string_view word) {
        return word == "fn" || word == "if" || word == "return" || word == "f32";
    }

    static ParseError error_at(const Token& t, const std::string& message) {
        return ParseError(t.line, t.column, message);
    }

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) {
            ++pos_;
        }
        return t;
    }

    bool accept(Tok kind) {
        if (peek().kind == kind) {
            next();
            return true;
        }
        return false;
    }

    const Token& expect(Tok kind, std::string_view what) {
        if (peek().kind != kind) {
            throw error_at(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
        }
        return next();
    }

    void expect_keyword(std::string_view word) {
        if (!is_keyword(peek(), word)) {
            throw error_at(peek(), "expected '" + std::string(word) + "', found " + describe(peek()));
        }
        next();
    }

    void parse_param() {
        const Token& name = expect(Tok::Ident, "parameter name");
        if (is_reserved(name.text)) {
            throw error_at(name, "reserved word used as parameter name");
        }
        for (const auto& p : sketch_.params) {
            if (p == name.text) {
                throw error_at(name, "duplicate parameter '" + p + "'");
            }
        }
        sketch_.params.emplace_back(name.text);
        expect(Tok::Colon, "':'");
        expect_keyword("f32");
    }

    HoleRef add_hole(HoleKind kind) {
        const HoleRef ref{sketch_.holes.size()};
        sketch_.holes.push_back(HoleSpec{ref.index, kind});
        return ref;
    }

    void reject_misplaced_hole(const Token& t, HoleKind allowed, std::string_view position) {
        if (t.kind == Tok::Hole && t.hole != allowed) {
            throw error_at(t, "hole " + std::string(hole_token(t.hole)) + " cannot appear in " +
                                  std::string(position) + " position");
        }
    }

    Operand parse_operand() {
        const Token& t = peek();
        reject_misplaced_hole(t, HoleKind::Real, "operand");
        switch (t.kind) {
        case Tok::Hole:
            next();
            return add_hole(HoleKind::Real);
        case Tok::Number:
            next();
            return Literal{t.number};
        case Tok::Minus:
            // A sign is only meaningful directly in front of a number literal.
            if (peek(1).kind == Tok::Number) {
                next();
                return Literal{-next().number};
            }
            break;
        case Tok::Ident: {
            if (is_reserved(t.text)) {
                break;
            }
            for (std::size_t i = 0; i < sketch_.params.size(); ++i) {
                if (sketch_.params[i] == t.text) {
                    next();
                    return InputRef{i};
                }
            }
            throw error_at(t, "unknown input variable '" + std::string(t.text) + "'");
        }
        default: break;
        }
        throw error_at(t, "expected operand, found " + describe(t));
    }

    ComparisonSlot parse_comparison() {
        const Token& t = peek();
        reject_misplaced_hole(t, HoleKind::Cond, "comparison");
        switch (t.kind) {
        case Tok::Hole: next(); return add_hole(HoleKind::Cond);
        case Tok::EqEq: next(); return Comparison::Equal;
        case Tok::Greater: next(); return Comparison::Greater;
        case Tok::Less: next(); return Comparison::Less;
        default: break;
        }
        throw error_at(t, "expected comparison, found " + describe(t));
    }

    std::optional<OperatorSlot> parse_operator() {
        const Token& t = peek();
        reject_misplaced_hole(t, HoleKind::Op, "operator");
        switch (t.kind) {
        case Tok::Hole: next(); return add_hole(HoleKind::Op);
        case Tok::Plus: next(); return ArithOp::Add;
        case Tok::Minus: next(); return ArithOp::Sub;
        case Tok::Star: next(); return ArithOp::Mul;
        case Tok::Slash: next(); return ArithOp::Div;
        default: return std::nullopt;
        }
    }

    Chain parse_chain() {
        Chain chain{parse_operand(), {}};
        while (auto op = parse_operator()) {
            chain.rest.push_back(Chain::Link{*op, parse_operand()});
        }
        return chain;
    }

    Chain parse_return() {
        expect_keyword("return");
        Chain chain = parse_chain();
        expect(Tok::Semicolon, "';'");
        return chain;
    }

    Guard parse_if() {
        expect_keyword("if");
        Operand lhs = parse_operand();
        ComparisonSlot cmp = parse_comparison();
        Operand rhs = parse_operand();
        expect(Tok::LBrace, "'{'");
        Chain body = parse_return();
        expect(Tok::RBrace, "'}'");
        return Guard{lhs, cmp, rhs, std::move(body)};
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Sketch sketch_;
};

} // namespace

Sketch parse_sketch(std::string_view text) {
    return Parser(Lexer(text).run()).run();
}

ConcreteProgram parse_program(std::string_view text) {
    return ConcreteProgram(parse_sketch(text));
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

class Substituter {
public:
    Substituter(const Sketch& sketch, const Assignment& assignment)
        : sketch_(sketch), assignment_(assignment) {}

    Operand operand(const Operand& in) const {
        if (const auto* hole = std::get_if<HoleRef>(&in)) {
            return Literal{std::get<double>(value(*hole, HoleKind::Real))};
        }
        return in;
    }

    ComparisonSlot comparison(const ComparisonSlot& in) const {
        if (const auto* hole = std::get_if<HoleRef>(&in)) {
            return static_cast<Comparison>(std::get<std::size_t>(value(*hole, HoleKind::Cond)));
        }
        return in;
    }

    OperatorSlot op(const OperatorSlot& in) const {
        if (const auto* hole = std::get_if<HoleRef>(&in)) {
            return static_cast<ArithOp>(std::get<std::size_t>(value(*hole, HoleKind::Op)));
        }
        return in;
    }

    Chain chain(const Chain& in) const {
        Chain out{operand(in.first), {}};
        out.rest.reserve(in.rest.size());
        for (const auto& link : in.rest) {
            out.rest.push_back(Chain::Link{op(link.op), operand(link.rhs)});
        }
        return out;
    }

private:
    const HoleValue& value(HoleRef ref, HoleKind expected) const {
        const HoleSpec& spec = sketch_.holes.at(ref.index);
        const HoleValue& v = assignment_.values[ref.index];
        if (spec.kind != expected) {
            throw Error(ErrorCategory::Runtime, "hole table is inconsistent with the sketch body");
        }
        return v;
    }

    const Sketch& sketch_;
    const Assignment& assignment_;
};

void validate_assignment(const Sketch& sketch, const Assignment& assignment) {
    if (assignment.values.size() != sketch.hole_count()) {
        throw Error(ErrorCategory::Runtime,
                    "assignment has " + std::to_string(assignment.values.size()) +
                        " value(s) but sketch has " + std::to_string(sketch.hole_count()) +
                        " hole(s)");
    }
    for (const HoleSpec& hole : sketch.holes) {
        const HoleValue& v = assignment.values[hole.index];
        const std::string where = "hole " + std::to_string(hole.index) + " " +
                                  std::string(hole_token(hole.kind));
        if (hole.categorical()) {
            const auto* category = std::get_if<std::size_t>(&v);
            if (category == nullptr) {
                throw Error(ErrorCategory::Runtime, where + " needs a category index");
            }
            if (*category >= hole.arity()) {
                throw Error(ErrorCategory::Runtime,
                            where + ": category " + std::to_string(*category) + " out of range");
            }
        } else if (!std::holds_alternative<double>(v)) {
            throw Error(ErrorCategory::Runtime, where + " needs a real value");
        }
    }
}

} // namespace

ConcreteProgram instantiate(const Sketch& sketch, const Assignment& assignment) {
    validate_assignment(sketch, assignment);
    const Substituter sub(sketch, assignment);

    Sketch out;
    out.name = sketch.name;
    out.params = sketch.params;
    if (sketch.guard) {
        const Guard& g = *sketch.guard;
        out.guard = Guard{sub.operand(g.lhs), sub.comparison(g.cmp), sub.operand(g.rhs),
                          sub.chain(g.body)};
    }
    out.result = sub.chain(sketch.result);
    return ConcreteProgram(std::move(out));
}

// ---------------------------------------------------------------------------
// Printing

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    std::string out(buf, ptr);
    if (std::isfinite(value) && out.find_first_of(".e") == std::string::npos) {
        out += ".0";
    }
    return out;
}

std::string format_hole_value(const HoleSpec& hole, const HoleValue& value) {
    switch (hole.kind) {
    case HoleKind::Cond:
        return std::string(token_text(static_cast<Comparison>(std::get<std::size_t>(value))));
    case HoleKind::Op:
        return std::string(token_text(static_cast<ArithOp>(std::get<std::size_t>(value))));
    case HoleKind::Real: return format_real(std::get<double>(value));
    }
    return {};
}

namespace {

class Printer {
public:
    explicit Printer(const Sketch& sketch) : sketch_(sketch) {}

    std::string run() {
        out_ += "fn " + sketch_.name + "(";
        for (std::size_t i = 0; i < sketch_.params.size(); ++i) {
            if (i > 0) {
                out_ += ", ";
            }
            out_ += sketch_.params[i] + ": f32";
        }
        out_ += ") -> f32\n{\n";
        if (sketch_.guard) {
            const Guard& g = *sketch_.guard;
            out_ += "    if ";
            operand(g.lhs);
            out_ += ' ';
            slot(g.cmp);
            out_ += ' ';
            operand(g.rhs);
            out_ += "\n    {\n        return ";
            chain(g.body);
            out_ += ";\n    }\n\n";
        }
        out_ += "    return ";
        chain(sketch_.result);
        out_ += ";\n}\n";
        return std::move(out_);
    }

private:
    void operand(const Operand& o) {
        std::visit(
            [this](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, InputRef>) {
                    out_ += sketch_.params.at(v.index);
                } else if constexpr (std::is_same_v<T, Literal>) {
                    out_ += format_real(v.value);
                } else {
                    out_ += hole_token(HoleKind::Real);
                }
            },
            o);
    }

    void slot(const ComparisonSlot& s) {
        if (const auto* c = std::get_if<Comparison>(&s)) {
            out_ += token_text(*c);
        } else {
            out_ += hole_token(HoleKind::Cond);
        }
    }

    void slot(const OperatorSlot& s) {
        if (const auto* op = std::get_if<ArithOp>(&s)) {
            out_ += token_text(*op);
        } else {
            out_ += hole_token(HoleKind::Op);
        }
    }

    void chain(const Chain& c) {
        operand(c.first);
        for (const auto& link : c.rest) {
            out_ += ' ';
            slot(link.op);
            out_ += ' ';
            operand(link.rhs);
        }
    }

    const Sketch& sketch_;
    std::string out_;
};

} // namespace

std::string print_program(const Sketch& sketch) {
    return Printer(sketch).run();
}

std::string print_program(const ConcreteProgram& program) {
    return print_program(program.sketch());
}

} // namespace nesynth
