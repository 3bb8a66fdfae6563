#include "fbl/errors.hpp"
#include "fbl/homfun.hpp"

#include <cctype>
#include <charconv>

namespace fbl {

namespace {

class Parser {
public:
    Parser(std::string_view text, const LiftParams& params) : text_(text), params_(params) {}

    HomExpr parse()
    {
        HomExpr e = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    const LiftParams& params_;
    std::size_t pos_ = 0;
    std::size_t dim_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(std::string_view token)
    {
        skip_space();
        return text_.substr(pos_, token.size()) == token;
    }

    bool accept(std::string_view token)
    {
        if (!peek(token)) return false;
        pos_ += token.size();
        return true;
    }

    void expect(std::string_view token)
    {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    bool at_number()
    {
        skip_space();
        if (pos_ >= text_.size()) return false;
        std::size_t i = pos_;
        if (text_[i] == '-' || text_[i] == '+') ++i;
        return i < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[i])) || text_[i] == '.');
    }

    double number()
    {
        if (!at_number()) fail("expected a number");
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (*begin == '+') ++begin;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    std::size_t integer()
    {
        skip_space();
        const char* begin = text_.data() + pos_;
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
        if (ec != std::errc()) fail("expected a nonnegative integer");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    HomExpr expr()
    {
        HomExpr left = meet();
        while (accept("v")) left = HomExpr::join(left, meet());
        return left;
    }

    HomExpr meet()
    {
        HomExpr left = sum();
        while (accept("^")) left = HomExpr::meet(left, sum());
        return left;
    }

    HomExpr sum()
    {
        std::vector<HomExpr> terms{prod()};
        while (true) {
            if (accept("+")) {
                terms.push_back(prod());
            } else if (accept("-")) {
                terms.push_back(HomExpr::scale(-1.0, prod()));
            } else {
                break;
            }
        }
        return HomExpr::add(std::move(terms));
    }

    HomExpr prod()
    {
        if (at_number()) {
            const double c = number();
            expect("*");
            return HomExpr::scale(c, atom());
        }
        return atom();
    }

    HomExpr atom()
    {
        skip_space();
        const std::size_t start = pos_;
        if (accept("d(")) {
            std::vector<double> coords{number()};
            while (accept(",")) coords.push_back(number());
            expect(")");
            if (dim_ == 0) dim_ = coords.size();
            if (coords.size() != dim_) {
                pos_ = start;
                fail("generator has dimension " + std::to_string(coords.size()) + ", expected " +
                     std::to_string(dim_));
            }
            return HomExpr::delta(Vector(std::move(coords)));
        }
        if (accept("|")) {
            HomExpr inner = expr();
            expect("|");
            return HomExpr::abs(inner);
        }
        if (accept("pos(")) {
            HomExpr inner = expr();
            expect(")");
            return HomExpr::pos(inner);
        }
        if (accept("f(")) {
            skip_space();
            const std::size_t at = pos_;
            const std::size_t n = integer();
            if (n == 0) {
                pos_ = at;
                fail("generator index is 1-based");
            }
            expect(")");
            return HomExpr::builtin_f(n, params_);
        }
        if (accept("h(")) {
            skip_space();
            const std::size_t at = pos_;
            const std::size_t n = integer();
            if (n == 0) {
                pos_ = at;
                fail("generator index is 1-based");
            }
            expect(",");
            const std::size_t k = integer();
            expect(")");
            return HomExpr::builtin_h(n, k, params_);
        }
        if (accept("(")) {
            HomExpr inner = expr();
            expect(")");
            return inner;
        }
        if (pos_ >= text_.size()) fail("unexpected end of input");
        fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
};

} // namespace

HomExpr parse_expr(std::string_view text, const LiftParams& params)
{
    return Parser(text, params).parse();
}

} // namespace fbl
