#pragma once

// Recursive-descent parser for the term DSL:
//
//   term  := par
//   par   := pre ( "||" pre )*
//   pre   := "(" NAME ")" pre | atom
//   atom  := "nil" | LABEL "(" NAME ("," NAME)* ")" | LABEL "(" ")" | "(" term ")"
//
// Restriction binds tighter than "||".  The one ambiguity, "(" at the start
// of `pre`, is resolved by lookahead: "(" NAME ")" followed by another "("
// or a name starts a restriction, anything else is a parenthesized term.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"
#include "term.hpp"

namespace optiterm {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line, std::size_t col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + what),
          line(line),
          col(col) {}
    std::size_t line, col;
};

namespace detail {

enum class Tok { Ident, Par, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek(std::size_t ahead = 0) {
        while (buf_.size() <= ahead) buf_.push_back(lex());
        return buf_[ahead];
    }

    Token take() {
        Token t = peek();
        buf_.erase(buf_.begin());
        return t;
    }

private:
    void advance() {}

    Token lex() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", line, col};
        char c = src_[pos_];
        if (c == '(') { bump(); return {Tok::LParen, "(", line, col}; }
        if (c == ')') { bump(); return {Tok::RParen, ")", line, col}; }
        if (c == ',') { bump(); return {Tok::Comma, ",", line, col}; }
        if (c == '|') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '|') {
                bump(); bump();
                return {Tok::Par, "||", line, col};
            }
            throw ParseError("expected '||'", line, col);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                id += src_[pos_];
                bump();
            }
            return {Tok::Ident, id, line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    std::vector<Token> buf_;
};

class Parser {
public:
    Parser(const std::string& src, const Signature* sig) : lex_(src), sig_(sig) {}

    Term parse() {
        Term t = term();
        const Token& end = lex_.peek();
        if (end.kind != Tok::End)
            throw ParseError("trailing input after term", end.line, end.col);
        return t;
    }

private:
    // "||" associates to the right, matching Term::par_all.
    Term term() {
        Term t = pre();
        if (lex_.peek().kind == Tok::Par) {
            lex_.take();
            return Term::par(t, term());
        }
        return t;
    }

    Term pre() {
        if (starts_restriction()) {
            lex_.take();  // (
            Token name = lex_.take();
            lex_.take();  // )
            return Term::restrict(make_name(name), pre());
        }
        return atom();
    }

    // True when the upcoming tokens are "(" NAME ")" followed by "(" or a
    // name, i.e. a restriction rather than a parenthesized term.
    bool starts_restriction() {
        if (lex_.peek(0).kind != Tok::LParen) return false;
        if (lex_.peek(1).kind != Tok::Ident) return false;
        if (lex_.peek(2).kind != Tok::RParen) return false;
        Tok follow = lex_.peek(3).kind;
        return follow == Tok::LParen || follow == Tok::Ident;
    }

    Term atom() {
        Token t = lex_.take();
        if (t.kind == Tok::LParen) {
            Term inner = term();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind != Tok::Ident)
            throw ParseError("expected a term, got '" + t.text + "'", t.line, t.col);
        if (t.text == "nil") return Term::nil();
        expect(Tok::LParen, "'(' after constant label");
        std::vector<Name> args;
        if (lex_.peek().kind != Tok::RParen) {
            args.push_back(make_name(lex_.take()));
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                args.push_back(make_name(lex_.take()));
            }
        }
        expect(Tok::RParen, "')'");
        if (sig_) {
            if (!sig_->declared(t.text))
                throw ParseError("unknown constant '" + t.text + "'", t.line, t.col);
            if (sig_->arity(t.text) != args.size())
                throw ParseError("constant '" + t.text + "' expects " +
                                     std::to_string(sig_->arity(t.text)) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 t.line, t.col);
        }
        try {
            return Term::atom(t.text, args);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), t.line, t.col);
        }
    }

    Name make_name(const Token& t) {
        if (t.kind != Tok::Ident || !Name::valid(t.text))
            throw ParseError("expected a name, got '" + t.text + "'", t.line, t.col);
        return Name(t.text);
    }

    void expect(Tok k, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != k) throw ParseError("expected " + what + ", got '" + t.text + "'", t.line, t.col);
    }

    Lexer lex_;
    const Signature* sig_;
};

}  // namespace detail

inline Term parse_term(const std::string& text, const Signature& sig) {
    return detail::Parser(text, &sig).parse();
}

// Parses without checking labels or arities; used where no signature is
// declared up front (signatures can then be inferred from the term).
inline Term parse_term(const std::string& text) {
    return detail::Parser(text, nullptr).parse();
}

// Collects every label with the arity it is used at; rejects inconsistent use.
inline Signature infer_signature(const Term& t) {
    Signature sig;
    struct Walk {
        Signature& sig;
        void operator()(const Term& u) {
            switch (u.kind()) {
                case TermKind::Atom: sig.declare(u.label(), u.args().size()); return;
                case TermKind::Nil: return;
                case TermKind::Par: (*this)(u.left()); (*this)(u.right()); return;
                case TermKind::Restrict:
                case TermKind::PermApp: (*this)(u.body()); return;
            }
        }
    } walk{sig};
    walk(t);
    return sig;
}

}  // namespace optiterm
