#include "minimuli/lexer.hpp"

#include <cctype>
#include <unordered_map>

#include "minimuli/diagnostics.hpp"

namespace minimuli {

namespace {

const std::unordered_map<std::string, Tok>& keywordMap() {
    static const std::unordered_map<std::string, Tok> kw = {
        {"class", Tok::KwClass},
        {"interface", Tok::KwInterface},
        {"extends", Tok::KwExtends},
        {"implements", Tok::KwImplements},
        {"abstract", Tok::KwAbstract},
        {"int", Tok::KwInt},
        {"boolean", Tok::KwBoolean},
        {"String", Tok::KwString},
        {"free", Tok::KwFree},
        {"if", Tok::KwIf},
        {"else", Tok::KwElse},
        {"return", Tok::KwReturn},
        {"fail", Tok::KwFail},
        {"println", Tok::KwPrintln},
        {"new", Tok::KwNew},
        {"instanceof", Tok::KwInstanceof},
        {"true", Tok::KwTrue},
        {"false", Tok::KwFalse},
        {"this", Tok::KwThis},
    };
    return kw;
}

}  // namespace

const char* tokName(Tok t) {
    switch (t) {
        case Tok::End: return "<eof>";
        case Tok::Ident: return "identifier";
        case Tok::IntLit: return "integer literal";
        case Tok::StrLit: return "string literal";
        case Tok::KwClass: return "'class'";
        case Tok::KwInterface: return "'interface'";
        case Tok::KwExtends: return "'extends'";
        case Tok::KwImplements: return "'implements'";
        case Tok::KwAbstract: return "'abstract'";
        case Tok::KwInt: return "'int'";
        case Tok::KwBoolean: return "'boolean'";
        case Tok::KwString: return "'String'";
        case Tok::KwFree: return "'free'";
        case Tok::KwIf: return "'if'";
        case Tok::KwElse: return "'else'";
        case Tok::KwReturn: return "'return'";
        case Tok::KwFail: return "'fail'";
        case Tok::KwPrintln: return "'println'";
        case Tok::KwNew: return "'new'";
        case Tok::KwInstanceof: return "'instanceof'";
        case Tok::KwTrue: return "'true'";
        case Tok::KwFalse: return "'false'";
        case Tok::KwThis: return "'this'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Dot: return "'.'";
        case Tok::Assign: return "'='";
        case Tok::EqEq: return "'=='";
        case Tok::NotEq: return "'!='";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::HashEq: return "'#='";
    }
    return "?";
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1;
    int col = 1;

    auto advance = [&](size_t n = 1) {
        for (size_t k = 0; k < n && i < src.size(); ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto peek = [&](size_t off = 0) -> char {
        return i + off < src.size() ? src[i + off] : '\0';
    };
    auto push = [&](Tok kind, std::string text, int l, int c) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = l;
        t.col = c;
        out.push_back(std::move(t));
    };

    while (i < src.size()) {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && peek() != '\n') advance();
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                word += peek();
                advance();
            }
            auto it = keywordMap().find(word);
            push(it != keywordMap().end() ? it->second : Tok::Ident, word, tl, tc);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                digits += peek();
                advance();
            }
            Token t;
            t.kind = Tok::IntLit;
            t.text = digits;
            try {
                t.intValue = std::stoll(digits);
            } catch (const std::out_of_range&) {
                throw CompileError("integer literal out of range: " + digits, tl, tc);
            }
            t.line = tl;
            t.col = tc;
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            advance();
            std::string text;
            while (true) {
                char d = peek();
                if (d == '\0' || d == '\n')
                    throw CompileError("unterminated string literal", tl, tc);
                if (d == '"') {
                    advance();
                    break;
                }
                if (d == '\\') {
                    advance();
                    char e = peek();
                    switch (e) {
                        case '"': text += '"'; break;
                        case '\\': text += '\\'; break;
                        case 'n': text += '\n'; break;
                        case 't': text += '\t'; break;
                        default:
                            throw CompileError(std::string("unknown escape '\\") + e + "'", line, col);
                    }
                    advance();
                    continue;
                }
                text += d;
                advance();
            }
            Token t;
            t.kind = Tok::StrLit;
            t.text = std::move(text);
            t.line = tl;
            t.col = tc;
            out.push_back(std::move(t));
            continue;
        }
        switch (c) {
            case '{': push(Tok::LBrace, "{", tl, tc); advance(); continue;
            case '}': push(Tok::RBrace, "}", tl, tc); advance(); continue;
            case '(': push(Tok::LParen, "(", tl, tc); advance(); continue;
            case ')': push(Tok::RParen, ")", tl, tc); advance(); continue;
            case ',': push(Tok::Comma, ",", tl, tc); advance(); continue;
            case ';': push(Tok::Semi, ";", tl, tc); advance(); continue;
            case '.': push(Tok::Dot, ".", tl, tc); advance(); continue;
            case '+': push(Tok::Plus, "+", tl, tc); advance(); continue;
            case '-': push(Tok::Minus, "-", tl, tc); advance(); continue;
            case '*': push(Tok::Star, "*", tl, tc); advance(); continue;
            case '=':
                if (peek(1) == '=') {
                    push(Tok::EqEq, "==", tl, tc);
                    advance(2);
                } else {
                    push(Tok::Assign, "=", tl, tc);
                    advance();
                }
                continue;
            case '!':
                if (peek(1) == '=') {
                    push(Tok::NotEq, "!=", tl, tc);
                    advance(2);
                    continue;
                }
                throw CompileError("stray '!'", tl, tc);
            case '<':
                if (peek(1) == '=') {
                    push(Tok::Le, "<=", tl, tc);
                    advance(2);
                } else {
                    push(Tok::Lt, "<", tl, tc);
                    advance();
                }
                continue;
            case '>':
                if (peek(1) == '=') {
                    push(Tok::Ge, ">=", tl, tc);
                    advance(2);
                } else {
                    push(Tok::Gt, ">", tl, tc);
                    advance();
                }
                continue;
            case '#':
                if (peek(1) == '=') {
                    push(Tok::HashEq, "#=", tl, tc);
                    advance(2);
                    continue;
                }
                throw CompileError("stray '#'", tl, tc);
            default:
                throw CompileError(std::string("unexpected character '") + c + "'", tl, tc);
        }
    }

    Token eof;
    eof.kind = Tok::End;
    eof.line = line;
    eof.col = col;
    out.push_back(eof);
    return out;
}

}  // namespace minimuli
