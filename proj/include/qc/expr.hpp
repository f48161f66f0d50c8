#ifndef QC_EXPR_HPP
#define QC_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

namespace qc {

// Minimal arithmetic expression over variables x1..xn with the usual
// operators, ^ for powers and a handful of transcendental functions.
class Expr {
 public:
  static Expr parse(const std::string& text, int nvars);
  double eval(const std::vector<double>& x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace qc

#endif
