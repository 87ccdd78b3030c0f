#pragma once

#include <string>
#include <vector>

namespace minimuli {

enum class Tok {
    End,
    Ident,
    IntLit,
    StrLit,
    // keywords
    KwClass,
    KwInterface,
    KwExtends,
    KwImplements,
    KwAbstract,
    KwInt,
    KwBoolean,
    KwString,
    KwFree,
    KwIf,
    KwElse,
    KwReturn,
    KwFail,
    KwPrintln,
    KwNew,
    KwInstanceof,
    KwTrue,
    KwFalse,
    KwThis,
    // punctuation
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    HashEq,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    long long intValue = 0;
    int line = 0;
    int col = 0;
};

const char* tokName(Tok t);

// Tokenizes guest source. Line comments start with `//`. Throws CompileError
// on malformed input.
std::vector<Token> lex(const std::string& source);

}  // namespace minimuli
