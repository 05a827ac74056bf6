#include "fibsys/regex.hpp"

#include <cctype>

namespace fibsys {

namespace {

class Parser {
public:
    Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    Regex parse() {
        Regex re = alternation();
        skip_ws();
        if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return re;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw RegexSyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    Regex alternation() {
        std::vector<Regex> branches;
        branches.push_back(concatenation());
        while (peek('|')) {
            ++pos_;
            branches.push_back(concatenation());
        }
        if (branches.size() == 1) return std::move(branches.front());
        return Regex{Regex::Kind::Alt, {}, std::move(branches)};
    }

    Regex concatenation() {
        std::vector<Regex> parts;
        while (true) {
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
            parts.push_back(repetition());
        }
        if (parts.empty()) return Regex{};
        if (parts.size() == 1) return std::move(parts.front());
        return Regex{Regex::Kind::Concat, {}, std::move(parts)};
    }

    Regex repetition() {
        Regex re = atom();
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) break;
            Regex::Kind kind;
            switch (text_[pos_]) {
                case '*': kind = Regex::Kind::Star; break;
                case '+': kind = Regex::Kind::Plus; break;
                case '?': kind = Regex::Kind::Optional; break;
                default: return re;
            }
            ++pos_;
            std::vector<Regex> child;
            child.push_back(std::move(re));
            re = Regex{kind, {}, std::move(child)};
        }
        return re;
    }

    Regex atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            if (peek(')')) {
                ++pos_;
                return Regex{};
            }
            Regex inner = alternation();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            std::vector<Regex> child;
            child.push_back(std::move(inner));
            return Regex{Regex::Kind::Group, {}, std::move(child)};
        }
        if (c == '.') {
            ++pos_;
            return Regex{Regex::Kind::Any, {}, {}};
        }
        if (c == '[') return bracket();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            if (alphabet_.arity() != 1) fail("bare digit needs a 1-coordinate alphabet; use [..] tuples");
            Symbol s{c - '0'};
            check_symbol(s);
            ++pos_;
            return Regex{Regex::Kind::Symbol, std::move(s), {}};
        }
        fail(std::string("unexpected '") + c + "'");
    }

    Regex bracket() {
        const std::size_t start = pos_;
        ++pos_;  // '['
        Symbol digits;
        while (true) {
            skip_ws();
            std::size_t b = pos_;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string num(text_.substr(b, pos_ - b));
            if (num.empty() || num == "-" || num == "+") fail("expected integer in brackets");
            digits.push_back(std::stoi(num));
            skip_ws();
            if (pos_ >= text_.size()) fail("unterminated '['");
            if (text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                break;
            }
            fail("expected ',' or ']'");
        }
        if (digits.size() != alphabet_.arity()) {
            pos_ = start;
            fail("tuple has " + std::to_string(digits.size()) + " digits, alphabet has " +
                 std::to_string(alphabet_.arity()) + " coordinates");
        }
        std::size_t end = pos_;
        pos_ = start;
        check_symbol(digits);
        pos_ = end;
        return Regex{Regex::Kind::Symbol, std::move(digits), {}};
    }

    void check_symbol(const Symbol& s) {
        if (!alphabet_.find(s)) fail("digit " + format_digits(s) + " is not in alphabet " + alphabet_.to_string());
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
};

struct Fragment {
    State in;
    State out;
};

Fragment build(const Regex& re, Nfa& nfa) {
    using K = Regex::Kind;
    switch (re.kind) {
        case K::Empty: {
            State a = nfa.add_state(), b = nfa.add_state();
            nfa.add_epsilon(a, b);
            return {a, b};
        }
        case K::Symbol:
        case K::Any: {
            State a = nfa.add_state(), b = nfa.add_state();
            if (re.kind == K::Symbol) {
                nfa.add_transition(a, nfa.alphabet().index(re.digits), b);
            } else {
                for (SymbolId s = 0; s < nfa.alphabet().size(); ++s) nfa.add_transition(a, s, b);
            }
            return {a, b};
        }
        case K::Group: return build(re.children.front(), nfa);
        case K::Concat: {
            Fragment f = build(re.children.front(), nfa);
            for (std::size_t i = 1; i < re.children.size(); ++i) {
                Fragment g = build(re.children[i], nfa);
                nfa.add_epsilon(f.out, g.in);
                f.out = g.out;
            }
            return f;
        }
        case K::Alt: {
            State a = nfa.add_state(), b = nfa.add_state();
            for (const auto& c : re.children) {
                Fragment g = build(c, nfa);
                nfa.add_epsilon(a, g.in);
                nfa.add_epsilon(g.out, b);
            }
            return {a, b};
        }
        case K::Star:
        case K::Plus:
        case K::Optional: {
            State a = nfa.add_state(), b = nfa.add_state();
            Fragment g = build(re.children.front(), nfa);
            nfa.add_epsilon(a, g.in);
            nfa.add_epsilon(g.out, b);
            if (re.kind != K::Plus) nfa.add_epsilon(a, b);
            if (re.kind != K::Optional) nfa.add_epsilon(g.out, g.in);
            return {a, b};
        }
    }
    throw Error("unknown regex node");
}

}  // namespace

Regex parse_regex(std::string_view text, const Alphabet& alphabet) { return Parser(text, alphabet).parse(); }

Nfa compile(const Regex& re, const Alphabet& alphabet) {
    Nfa nfa(alphabet);
    Fragment f = build(re, nfa);
    nfa.add_initial(f.in);
    nfa.set_accepting(f.out);
    return nfa;
}

Nfa parse_compile(std::string_view text, const Alphabet& alphabet) {
    return compile(parse_regex(text, alphabet), alphabet);
}

Dfa regex_dfa(std::string_view text, const Alphabet& alphabet) {
    return minimize(determinize(parse_compile(text, alphabet)));
}

std::string to_sexpr(const Regex& re) {
    using K = Regex::Kind;
    auto list = [&](const char* head) {
        std::string out = std::string("(") + head;
        for (const auto& c : re.children) out += " " + to_sexpr(c);
        return out + ")";
    };
    switch (re.kind) {
        case K::Empty: return "eps";
        case K::Any: return "any";
        case K::Symbol: {
            if (re.digits.size() == 1) return std::to_string(re.digits[0]);
            std::string out = "[";
            for (std::size_t i = 0; i < re.digits.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(re.digits[i]);
            }
            return out + "]";
        }
        case K::Concat: return list("cat");
        case K::Alt: return list("alt");
        case K::Star: return list("star");
        case K::Plus: return list("plus");
        case K::Optional: return list("opt");
        case K::Group: return list("group");
    }
    return "?";
}

}  // namespace fibsys
