#include "ipt/logic.hpp"

#include <cctype>
#include <unordered_map>

namespace ipt::logic {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

enum class Tok { ident, lparen, rparen, comma, semicolon, neck, period, end };

struct Token {
    Tok kind = Tok::end;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const char* describe(Tok k) {
    switch (k) {
    case Tok::ident: return "identifier";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::semicolon: return "';'";
    case Tok::neck: return "':-'";
    case Tok::period: return "'.'";
    case Tok::end: return "end of input";
    }
    return "token";
}

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_blank();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) return t;

        const char c = src_[pos_];
        const std::size_t start = pos_;
        if (ident_start(c)) {
            while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
            t.kind = Tok::ident;
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        switch (c) {
        case '(': t.kind = Tok::lparen; break;
        case ')': t.kind = Tok::rparen; break;
        case ',': t.kind = Tok::comma; break;
        case ';': t.kind = Tok::semicolon; break;
        case '.': t.kind = Tok::period; break;
        case ':':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                advance();
                advance();
                t.kind = Tok::neck;
                t.text = src_.substr(start, 2);
                return t;
            }
            throw ParseError("expected ':-'", t.line, t.column);
        default: {
            std::string shown(1, c);
            if (!std::isprint(static_cast<unsigned char>(c))) shown = "\\x" + std::to_string(static_cast<unsigned char>(c));
            throw ParseError("unexpected character '" + shown + "'", t.line, t.column);
        }
        }
        advance();
        t.text = src_.substr(start, 1);
        return t;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct ArityEntry {
    std::size_t arity;
    std::size_t line;
    std::size_t column;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    Program program() {
        Program p;
        while (cur_.kind != Tok::end) p.clauses.push_back(clause());
        return p;
    }

    Atom single_ground_atom() {
        Atom a = atom();
        if (cur_.kind == Tok::period) shift();
        if (cur_.kind != Tok::end) fail("unexpected " + std::string(describe(cur_.kind)) + " after atom");
        if (!a.is_ground()) throw ParseError("atom must be ground", 1, 1);
        return a;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, cur_.line, cur_.column);
    }

    void shift() { cur_ = lex_.next(); }

    void expect(Tok k, const char* context) {
        if (cur_.kind != k) {
            if (k == Tok::period && cur_.kind == Tok::end) fail(std::string("missing final '.' ") + context);
            fail(std::string("expected ") + describe(k) + " " + context + ", found " + describe(cur_.kind));
        }
        shift();
    }

    Term term() {
        if (cur_.kind != Tok::ident) fail(std::string("expected a term, found ") + describe(cur_.kind));
        std::string name(cur_.text);
        shift();
        if (name == "_") return Term::var("_" + std::to_string(++anon_));
        if (is_variable_name(name)) return Term::var(std::move(name));
        if (is_constant_name(name)) return Term::constant(std::move(name));
        fail("malformed term '" + name + "'");
    }

    Atom atom() {
        if (cur_.kind != Tok::ident) fail(std::string("expected an atom, found ") + describe(cur_.kind));
        const Token at = cur_;
        if (!is_constant_name(cur_.text)) fail("predicate name must start with a lowercase letter: '" + std::string(cur_.text) + "'");
        Atom a;
        a.predicate = std::string(cur_.text);
        shift();
        if (cur_.kind == Tok::lparen) {
            const Token open = cur_;
            shift();
            a.args.push_back(term());
            while (cur_.kind == Tok::comma) {
                shift();
                a.args.push_back(term());
            }
            if (cur_.kind != Tok::rparen) {
                if (cur_.kind == Tok::end || cur_.kind == Tok::period || cur_.kind == Tok::neck || cur_.kind == Tok::semicolon)
                    throw ParseError("unbalanced '(' opened here", open.line, open.column);
                fail(std::string("expected ')' or ',' in argument list, found ") + describe(cur_.kind));
            }
            shift();
        }
        check_arity(a, at);
        return a;
    }

    void check_arity(const Atom& a, const Token& at) {
        auto [it, inserted] = arities_.try_emplace(a.predicate, ArityEntry{a.arity(), at.line, at.column});
        if (!inserted && it->second.arity != a.arity()) {
            throw ParseError("arity mismatch: '" + a.predicate + "' used with " + std::to_string(a.arity()) +
                                 " argument(s), previously with " + std::to_string(it->second.arity) + " at " +
                                 std::to_string(it->second.line) + ":" + std::to_string(it->second.column),
                             at.line, at.column);
        }
    }

    Clause clause() {
        const Token start = cur_;
        anon_ = 0;
        Clause c;
        c.head = atom();
        if (cur_.kind == Tok::rparen) fail("unbalanced ')'");
        if (cur_.kind == Tok::neck) {
            shift();
            c.body.push_back(conjunction());
            while (cur_.kind == Tok::semicolon) {
                shift();
                c.body.push_back(conjunction());
            }
        }
        if (cur_.kind == Tok::rparen) fail("unbalanced ')'");
        expect(Tok::period, "at end of clause");

        if (c.is_fact()) {
            if (!c.head.is_ground()) throw ParseError("fact must be ground: " + print_atom(c.head), start.line, start.column);
        } else {
            for (const auto& conj : c.body) {
                for (const auto& ht : c.head.args) {
                    if (!ht.is_variable()) continue;
                    bool found = false;
                    for (const auto& b : conj)
                        for (const auto& bt : b.args) found = found || bt == ht;
                    if (!found)
                        throw ParseError("head variable " + ht.name + " does not occur in every body disjunct (range restriction)",
                                         start.line, start.column);
                }
            }
        }
        return c;
    }

    Conjunction conjunction() {
        Conjunction conj;
        conj.push_back(atom());
        while (cur_.kind == Tok::comma) {
            shift();
            conj.push_back(atom());
        }
        return conj;
    }

    Lexer lex_;
    Token cur_;
    std::unordered_map<std::string, ArityEntry> arities_;
    unsigned anon_ = 0;
};

} // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(located(message, line, column)), detail_(message), line_(line), column_(column) {}

bool is_variable_name(std::string_view name) noexcept {
    if (name.empty()) return false;
    if (!(std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!ident_char(c)) return false;
    return true;
}

bool is_constant_name(std::string_view name) noexcept {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name)
        if (!ident_char(c)) return false;
    return true;
}

Program parse_program(std::string_view text) {
    return Parser(text).program();
}

Atom parse_ground_atom(std::string_view text) {
    return Parser(text).single_ground_atom();
}

} // namespace ipt::logic
