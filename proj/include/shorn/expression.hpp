#pragma once

#include <memory>
#include <string>

namespace shorn {

/// A compiled real-valued formula in one integer variable `i`.
///
/// Grammar: numbers, `i`, `pi`, `e`, the operators `+ - * / % ^`, comparisons
/// `< <= > >= == !=` (yielding 0 or 1), the conditional `c ? a : b`, and the
/// functions sin cos tan exp log sqrt abs floor ceil min max pow.
///
///   Expression g("i % 2 == 1 ? 1/2 : 1/(i/2 + 2)");
///   g(4);  // 0.25
class Expression {
public:
  explicit Expression(std::string source);

  double operator()(double i) const;
  const std::string& source() const noexcept { return source_; }

  struct Node;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

} // namespace shorn
