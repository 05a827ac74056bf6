#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fibsys/automata.hpp"

namespace fibsys {

class RegexSyntaxError : public Error {
public:
    RegexSyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parse tree of a digit regular expression.
struct Regex {
    enum class Kind { Empty, Symbol, Any, Concat, Alt, Star, Plus, Optional, Group };

    Kind kind = Kind::Empty;
    Symbol digits;               // Kind::Symbol: one digit per coordinate
    std::vector<Regex> children;
};

/// Grammar (whitespace outside brackets is ignored):
///
///   alt    := concat ('|' concat)*
///   concat := repeat*                 empty concat denotes the empty string
///   repeat := atom ('*' | '+' | '?')*
///   atom   := '(' alt ')' | '.' | digit | '[' int (',' int)* ']'
///
/// A bare digit 0-9 is a symbol of a 1-coordinate alphabet; brackets hold a
/// signed digit ("[-1]") or a tuple in coordinate order ("[1,0]"). "()" is the
/// empty string and "." is any symbol of the alphabet.
Regex parse_regex(std::string_view text, const Alphabet& alphabet);

Nfa compile(const Regex& re, const Alphabet& alphabet);
Nfa parse_compile(std::string_view text, const Alphabet& alphabet);

/// parse_compile, determinized and minimized.
Dfa regex_dfa(std::string_view text, const Alphabet& alphabet);

/// S-expression rendering used by golden tests: (alt ...), (cat ...),
/// (star x), (plus x), (opt x), (group x), eps, any, and digit tuples.
std::string to_sexpr(const Regex& re);

}  // namespace fibsys
