/*
 * Copyright 2026 The jetlaw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jetlaw/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "jetlaw/error.hpp"

namespace jetlaw {

namespace {

enum class TokenType { Number, Identifier, Prime, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  TokenType type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])) != 0) ++i;
      if (i < src.size() && (src[i] == '.' || std::isalpha(static_cast<unsigned char>(src[i])) != 0)) {
        throw ParseError(i, std::string("unexpected character '") + src[i] + "' in number");
      }
      out.push_back({TokenType::Number, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) != 0 || src[i] == '_')) {
        ++i;
      }
      out.push_back({TokenType::Identifier, std::string(src.substr(start, i - start)), start});
      continue;
    }
    TokenType type{};
    switch (c) {
      case '\'': type = TokenType::Prime; break;
      case '+': type = TokenType::Plus; break;
      case '-': type = TokenType::Minus; break;
      case '*': type = TokenType::Star; break;
      case '/': type = TokenType::Slash; break;
      case '^': type = TokenType::Caret; break;
      case '(': type = TokenType::LParen; break;
      case ')': type = TokenType::RParen; break;
      case ',': type = TokenType::Comma; break;
      default:
        throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({type, std::string(1, c), start});
    ++i;
  }
  out.push_back({TokenType::End, "", src.size()});
  return out;
}

constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

bool is_dependent(const std::string& name) { return name == "u" || name == "nu"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse_all() {
    if (peek().type == TokenType::End) throw ParseError(0, "empty expression");
    Expr e = expression(0);
    if (peek().type != TokenType::End) {
      throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    }
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token advance() { return tokens_[pos_++]; }

  void expect(TokenType type, const char* what) {
    if (peek().type != type) {
      const std::string got = peek().type == TokenType::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(peek().pos, std::string("expected ") + what + ", got " + got);
    }
    ++pos_;
  }

  static int infix_power(TokenType t) {
    switch (t) {
      case TokenType::Plus:
      case TokenType::Minus:
        return kAdditive;
      case TokenType::Star:
      case TokenType::Slash:
        return kMultiplicative;
      case TokenType::Caret:
        return kPower;
      default:
        return -1;
    }
  }

  Expr expression(int min_power) {
    Expr lhs = prefix();
    for (;;) {
      const Token op = peek();
      const int power = infix_power(op.type);
      if (power < 0 || power < min_power) break;
      // Left associative operators need a strictly larger power on the right.
      if (op.type != TokenType::Caret && power == min_power) break;
      advance();
      switch (op.type) {
        case TokenType::Plus:
          lhs = lhs + expression(kAdditive + 1);
          break;
        case TokenType::Minus:
          lhs = lhs - expression(kAdditive + 1);
          break;
        case TokenType::Star:
          lhs = lhs * expression(kMultiplicative + 1);
          break;
        case TokenType::Slash:
          lhs = lhs / expression(kMultiplicative + 1);
          break;
        case TokenType::Caret: {
          const std::size_t at = peek().pos;
          Expr rhs = expression(kPower);
          NormalForm value = normalize(rhs);
          if (!value.is_constant()) throw ParseError(at, "exponent must be a rational constant");
          lhs = pow(lhs, value.constant_value());
          break;
        }
        default:
          break;
      }
    }
    return lhs;
  }

  Expr prefix() {
    const Token tok = advance();
    switch (tok.type) {
      case TokenType::Number:
        return Expr(Rational(mpz_class(tok.text)));
      case TokenType::Minus:
        return -expression(kUnary);
      case TokenType::Plus:
        return expression(kUnary);
      case TokenType::LParen: {
        Expr inner = expression(0);
        expect(TokenType::RParen, "')'");
        return inner;
      }
      case TokenType::Identifier:
        return identifier(tok);
      case TokenType::End:
        throw ParseError(tok.pos, "unexpected end of input");
      default:
        throw ParseError(tok.pos, "unexpected '" + tok.text + "'");
    }
  }

  Expr identifier(const Token& tok) {
    int primes = 0;
    std::size_t prime_pos = peek().pos;
    while (peek().type == TokenType::Prime) {
      advance();
      ++primes;
    }
    if (peek().type == TokenType::LParen) return call(tok, primes);
    if (primes > 0) throw ParseError(prime_pos, "prime on non-function symbol '" + tok.text + "'");

    const auto underscore = tok.text.find('_');
    const std::string base = tok.text.substr(0, underscore);
    const std::string suffix = underscore == std::string::npos ? "" : tok.text.substr(underscore + 1);
    const bool has_suffix = underscore != std::string::npos;

    if (base == "exp") throw ParseError(tok.pos, "exp requires an argument");
    if (is_dependent(base)) {
      if (!has_suffix) return Expr::jet(JetVar{base, 0, 0});
      JetVar v{base, 0, 0};
      if (suffix.empty()) throw ParseError(tok.pos, "empty derivative suffix on '" + base + "'");
      for (std::size_t k = 0; k < suffix.size(); ++k) {
        if (suffix[k] == 't') {
          ++v.t_order;
        } else if (suffix[k] == 'x') {
          ++v.x_order;
        } else {
          throw ParseError(tok.pos + underscore + 1 + k,
                           "unknown derivative suffix '" + suffix + "' on '" + base + "'");
        }
      }
      return Expr::jet(v);
    }
    if (has_suffix) {
      throw ParseError(tok.pos + underscore, "unknown derivative suffix '" + suffix + "' on '" + base + "'");
    }
    if (base == "t") return Expr::variable(Direction::T);
    if (base == "x") return Expr::variable(Direction::X);
    return Expr::parameter(base);
  }

  Expr call(const Token& tok, int primes) {
    const std::size_t open = peek().pos;
    expect(TokenType::LParen, "'('");
    std::vector<Expr> args;
    std::vector<std::size_t> arg_pos;
    arg_pos.push_back(peek().pos);
    args.push_back(expression(0));
    while (peek().type == TokenType::Comma) {
      advance();
      arg_pos.push_back(peek().pos);
      args.push_back(expression(0));
    }
    expect(TokenType::RParen, "')'");

    const auto underscore = tok.text.find('_');
    const std::string base = tok.text.substr(0, underscore);
    const std::string suffix = underscore == std::string::npos ? "" : tok.text.substr(underscore + 1);

    if (base == "t" || base == "x" || is_dependent(base)) {
      throw ParseError(tok.pos, "'" + base + "' is a variable, not a function");
    }
    if (base == "exp") {
      if (primes > 0) throw ParseError(tok.pos, "prime on exp");
      if (underscore != std::string::npos) throw ParseError(tok.pos, "unknown derivative suffix on exp");
      if (args.size() != 1) throw ParseError(open, "exp takes one argument");
      return Expr::exponential(args[0]);
    }
    if (args.size() == 1) {
      if (underscore != std::string::npos) {
        throw ParseError(tok.pos + underscore,
                         "unknown derivative suffix '" + suffix + "' on one-argument function '" + base +
                             "' (use primes)");
      }
      return Expr::function(base, args[0], primes);
    }
    if (primes > 0) throw ParseError(tok.pos, "prime on multi-argument function '" + base + "'");
    unsigned mask = 0;
    unsigned last = 0;
    for (std::size_t k = 0; k < args.size(); ++k) {
      const Expr& a = args[k];
      unsigned bit = 0;
      if (a.kind() == ExprKind::Variable) bit = a.direction() == Direction::T ? kArgT : kArgX;
      if (a.kind() == ExprKind::Jet && a.jet_var() == jet_u()) bit = kArgU;
      if (bit == 0 || bit <= last) {
        throw ParseError(arg_pos[k], "point function arguments must be a subsequence of (t,x,u)");
      }
      mask |= bit;
      last = bit;
    }
    PointIndex index;
    if (underscore != std::string::npos) {
      if (suffix.empty()) throw ParseError(tok.pos, "empty derivative suffix on '" + base + "'");
      for (std::size_t k = 0; k < suffix.size(); ++k) {
        const char ch = suffix[k];
        const unsigned bit = ch == 't' ? kArgT : ch == 'x' ? kArgX : ch == 'u' ? kArgU : 0U;
        if (bit == 0 || (mask & bit) == 0) {
          throw ParseError(tok.pos + underscore + 1 + k,
                           "unknown derivative suffix '" + suffix + "' on '" + base + "'");
        }
        (ch == 't' ? index.t : ch == 'x' ? index.x : index.u) += 1;
      }
    }
    return Expr::point_function(base, index, mask);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

std::string print(const Expr& e) { return normalize(e).to_string(); }

std::string print(const NormalForm& e) { return e.to_string(); }

}  // namespace jetlaw
