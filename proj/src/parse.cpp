#include <cctype>
#include <string>

#include "smc/diagram.hpp"

namespace smc {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Diagram run() {
    Diagram d = seq();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return d;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" +
                     std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Diagram seq() {
    Diagram d = par();
    while (eat(';')) d = seq_compose(d, par());
    return d;
  }

  Diagram par() {
    Diagram d = atom();
    while (eat('*')) d = par_compose(d, atom());
    return d;
  }

  Diagram atom() {
    skip();
    if (pos_ >= text_.size()) fail("expected a diagram");
    if (eat('(')) {
      Diagram d = seq();
      if (!eat(')')) fail("expected ')'");
      return d;
    }
    const char c = text_[pos_];
    if (text_.compare(pos_, 2, "id") == 0) {
      pos_ += 2;
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a width after 'id'");
      return Diagram::identity(std::stoi(std::string(text_.substr(start, pos_ - start))));
    }
    ++pos_;
    switch (c) {
      case 'm': return Diagram::gate(Gate::M);
      case 'e': return Diagram::gate(Gate::E);
      case 's': return Diagram::gate(Gate::S);
      default: --pos_; fail(std::string("unknown token '") + c + "'");
    }
  }
};

}  // namespace

Diagram Diagram::parse(std::string_view text) { return Parser(text).run(); }

}  // namespace smc
