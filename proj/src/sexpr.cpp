#include "mapop/sexpr.hpp"

#include <cctype>

namespace mapop {
namespace {

struct Token {
    enum class Kind { LParen, RParen, LBrace, RBrace, Symbol, End };
    Kind kind;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    Lexer(const std::string &text, const std::string &file, std::vector<Diagnostic> &diags)
        : text_(text), file_(file), diags_(diags) {}

    Token next() {
        skip_space();
        Token t;
        t.loc = {line_, col_};
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        char c = text_[pos_];
        switch (c) {
        case '(': advance(); t.kind = Token::Kind::LParen; return t;
        case ')': advance(); t.kind = Token::Kind::RParen; return t;
        case '{': advance(); t.kind = Token::Kind::LBrace; return t;
        case '}': advance(); t.kind = Token::Kind::RBrace; return t;
        default: break;
        }
        t.kind = Token::Kind::Symbol;
        while (pos_ < text_.size() && !is_delim(text_[pos_])) {
            t.text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_]))));
            advance();
        }
        return t;
    }

private:
    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == '{' || c == '}' || c == ';' ||
               std::isspace(static_cast<unsigned char>(c));
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string &text_;
    std::string file_;
    std::vector<Diagnostic> &diags_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Reader {
public:
    Reader(const std::string &text, const std::string &file, std::vector<Diagnostic> &diags)
        : lexer_(text, file, diags), file_(file), diags_(diags) {
        tok_ = lexer_.next();
    }

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        while (tok_.kind != Token::Kind::End) {
            SExpr e;
            if (!read(e)) break;
            out.push_back(std::move(e));
        }
        return out;
    }

private:
    bool read(SExpr &out) {
        out.loc = tok_.loc;
        switch (tok_.kind) {
        case Token::Kind::Symbol:
            out.kind = SExpr::Kind::Symbol;
            out.text = tok_.text;
            tok_ = lexer_.next();
            return true;
        case Token::Kind::LParen:
            return read_sequence(out, SExpr::Kind::List, Token::Kind::RParen, ')');
        case Token::Kind::LBrace:
            return read_sequence(out, SExpr::Kind::BraceSet, Token::Kind::RBrace, '}');
        case Token::Kind::RParen:
        case Token::Kind::RBrace:
            error(tok_.loc, std::string("unexpected '") +
                                (tok_.kind == Token::Kind::RParen ? ')' : '}') + "'");
            tok_ = lexer_.next();
            return false;
        case Token::Kind::End:
            return false;
        }
        return false;
    }

    bool read_sequence(SExpr &out, SExpr::Kind kind, Token::Kind closer, char closer_ch) {
        out.kind = kind;
        SourceLoc open = tok_.loc;
        tok_ = lexer_.next();
        while (tok_.kind != closer) {
            if (tok_.kind == Token::Kind::End) {
                error(open, std::string("missing closing '") + closer_ch + "'");
                return false;
            }
            SExpr item;
            if (!read(item)) return false;
            out.items.push_back(std::move(item));
        }
        tok_ = lexer_.next();
        return true;
    }

    void error(SourceLoc loc, const std::string &msg) {
        diags_.push_back({Severity::Error, loc, file_, msg});
    }

    Lexer lexer_;
    std::string file_;
    std::vector<Diagnostic> &diags_;
    Token tok_;
};

}  // namespace

std::vector<SExpr> read_sexprs(const std::string &text, const std::string &file,
                               std::vector<Diagnostic> &diags) {
    return Reader(text, file, diags).read_all();
}

}  // namespace mapop
