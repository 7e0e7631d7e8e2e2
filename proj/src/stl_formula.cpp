#include "genesynth/stl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace genesynth::stl {

HorizonError::HorizonError(double required, double available)
    : MonitorError("signal horizon too short: formula needs " + std::to_string(required) +
                   " time units, signal provides " + std::to_string(available)),
      required_(required), available_(available) {}

namespace {

using Ptr = std::shared_ptr<const Formula>;

Ptr share(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void check_window(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(lo < hi))
    throw std::invalid_argument("temporal window must satisfy 0 <= lo < hi");
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok))
      fail("expected '" + std::string(tok) + "'");
  }

  // A temporal keyword is a lone G/F/U letter followed by '['.
  bool at_temporal(char kw) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != kw)
      return false;
    std::size_t p = pos_ + 1;
    if (p < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_'))
      return false;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p])))
      ++p;
    return p < text_.size() && text_[p] == '[';
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin < end && *begin == '+')
      ++begin;
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr == begin)
      fail("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (!std::isfinite(v))
      fail("number out of range");
    return v;
  }

  Window window() {
    expect("[");
    std::size_t at = pos_;
    double lo = number();
    expect(",");
    double hi = number();
    expect("]");
    if (lo < 0.0 || !(lo < hi))
      throw ParseError("invalid interval [" + std::to_string(lo) + "," + std::to_string(hi) +
                           "]: need 0 <= a < b",
                       at);
    return {lo, hi};
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
    }
    if (start == pos_)
      fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (eat("->"))
      return implies(std::move(lhs), implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat("|"))
      f = disj(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = until_expr();
    while (eat("&"))
      f = conj(std::move(f), until_expr());
    return f;
  }

  Formula until_expr() {
    Formula lhs = unary();
    if (at_temporal('U')) {
      ++pos_;
      Window w = window();
      Formula rhs = unary();
      return Formula(Until{w, share(std::move(lhs)), share(std::move(rhs))});
    }
    return lhs;
  }

  Formula unary() {
    if (eat("!"))
      return negate(unary());
    if (at_temporal('G')) {
      ++pos_;
      Window w = window();
      return Formula(Globally{w, share(unary())});
    }
    if (at_temporal('F')) {
      ++pos_;
      Window w = window();
      return Formula(Eventually{w, share(unary())});
    }
    return primary();
  }

  Formula primary() {
    skip_ws();
    if (pos_ >= text_.size())
      fail("unexpected end of formula");
    if (eat("(")) {
      Formula f = implication();
      expect(")");
      return f;
    }
    std::size_t at = pos_;
    std::string id = identifier();
    if (id == "true")
      return truth();
    Cmp op;
    if (eat(">="))
      op = Cmp::Ge;
    else if (eat("<="))
      op = Cmp::Le;
    else {
      if (id == "G" || id == "F" || id == "U")
        throw ParseError("temporal operator '" + id + "' needs an interval", at);
      fail("expected '>=' or '<=' after '" + id + "'");
    }
    return atom(std::move(id), op, number());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string window_text(const Window& w) { return "[" + num(w.lo) + "," + num(w.hi) + "]"; }

enum Prec { kImplies = 1, kOr = 2, kAnd = 3, kUntil = 4, kUnary = 5, kPrimary = 6 };

int precedence(const Formula& f) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Implies>)
          return kImplies;
        else if constexpr (std::is_same_v<T, Or>)
          return kOr;
        else if constexpr (std::is_same_v<T, And>)
          return kAnd;
        else if constexpr (std::is_same_v<T, Until>)
          return kUntil;
        else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Eventually> ||
                           std::is_same_v<T, Globally>)
          return kUnary;
        else
          return kPrimary;
      },
      f.node());
}

std::string render(const Formula& f, int min_prec);

// Operand of !, F, G: nested unary operators chain, anything else is wrapped.
std::string render_unary_arg(const Formula& f, bool space_before_unary) {
  if (precedence(f) == kUnary)
    return (space_before_unary ? " " : "") + render(f, kUnary);
  return "(" + render(f, kImplies) + ")";
}

std::string render(const Formula& f, int min_prec) {
  std::string out = std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, True>) {
          return "true";
        } else if constexpr (std::is_same_v<T, Atom>) {
          return n.var + (n.op == Cmp::Ge ? " >= " : " <= ") + num(n.threshold);
        } else if constexpr (std::is_same_v<T, Not>) {
          return "!" + render_unary_arg(*n.arg, false);
        } else if constexpr (std::is_same_v<T, Eventually>) {
          return "F" + window_text(n.window) + render_unary_arg(*n.arg, true);
        } else if constexpr (std::is_same_v<T, Globally>) {
          return "G" + window_text(n.window) + render_unary_arg(*n.arg, true);
        } else if constexpr (std::is_same_v<T, Until>) {
          return render(*n.lhs, kUnary) + " U" + window_text(n.window) + " " +
                 render(*n.rhs, kUnary);
        } else if constexpr (std::is_same_v<T, And>) {
          return render(*n.lhs, kAnd) + " & " + render(*n.rhs, kUntil);
        } else if constexpr (std::is_same_v<T, Or>) {
          return render(*n.lhs, kOr) + " | " + render(*n.rhs, kAnd);
        } else {
          return render(*n.lhs, kOr) + " -> " + render(*n.rhs, kImplies);
        }
      },
      f.node());
  if (precedence(f) < min_prec)
    return "(" + out + ")";
  return out;
}

} // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index())
    return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, True>) {
          return true;
        } else if constexpr (std::is_same_v<T, Atom>) {
          return x.var == y.var && x.op == y.op && x.threshold == y.threshold;
        } else if constexpr (std::is_same_v<T, Not>) {
          return *x.arg == *y.arg;
        } else if constexpr (std::is_same_v<T, Eventually> || std::is_same_v<T, Globally>) {
          return x.window == y.window && *x.arg == *y.arg;
        } else if constexpr (std::is_same_v<T, Until>) {
          return x.window == y.window && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else {
          return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        }
      },
      a.node());
}

Formula truth() { return Formula(True{}); }
Formula atom(std::string var, Cmp op, double threshold) {
  return Formula(Atom{std::move(var), op, threshold});
}
Formula ge(std::string var, double threshold) { return atom(std::move(var), Cmp::Ge, threshold); }
Formula le(std::string var, double threshold) { return atom(std::move(var), Cmp::Le, threshold); }
Formula negate(Formula f) { return Formula(Not{share(std::move(f))}); }
Formula conj(Formula a, Formula b) { return Formula(And{share(std::move(a)), share(std::move(b))}); }
Formula disj(Formula a, Formula b) { return Formula(Or{share(std::move(a)), share(std::move(b))}); }
Formula implies(Formula a, Formula b) {
  return Formula(Implies{share(std::move(a)), share(std::move(b))});
}
Formula until(double lo, double hi, Formula a, Formula b) {
  check_window(lo, hi);
  return Formula(Until{{lo, hi}, share(std::move(a)), share(std::move(b))});
}
Formula eventually(double lo, double hi, Formula f) {
  check_window(lo, hi);
  return Formula(Eventually{{lo, hi}, share(std::move(f))});
}
Formula globally(double lo, double hi, Formula f) {
  check_window(lo, hi);
  return Formula(Globally{{lo, hi}, share(std::move(f))});
}

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Formula& f) { return render(f, kImplies); }

double required_horizon(const Formula& f) {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, True> || std::is_same_v<T, Atom>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Not>) {
          return required_horizon(*n.arg);
        } else if constexpr (std::is_same_v<T, Eventually> || std::is_same_v<T, Globally>) {
          return n.window.hi + required_horizon(*n.arg);
        } else if constexpr (std::is_same_v<T, Until>) {
          return n.window.hi + std::max(required_horizon(*n.lhs), required_horizon(*n.rhs));
        } else {
          return std::max(required_horizon(*n.lhs), required_horizon(*n.rhs));
        }
      },
      f.node());
}

} // namespace genesynth::stl
