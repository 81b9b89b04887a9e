#ifndef QWP_SIGNATURE_HPP
#define QWP_SIGNATURE_HPP

#include <string>
#include <vector>

#include "qwp/error.hpp"

namespace qwp {

// Shape of a tuple-valued state or predicate: one positive dimension per
// classical branch. A single unbranched space is the one-entry signature.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_) {
      if (d <= 0) {
        fail(ErrorCode::DimensionMismatch,
             "signature dimensions must be positive");
      }
    }
    if (dims_.empty()) {
      fail(ErrorCode::DimensionMismatch, "signature must be non-empty");
    }
  }

  int size() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(i); }
  const std::vector<int>& dims() const { return dims_; }

  bool operator==(const Signature& other) const { return dims_ == other.dims_; }
  bool operator!=(const Signature& other) const { return !(*this == other); }

  static Signature concat(const Signature& a, const Signature& b) {
    std::vector<int> dims = a.dims_;
    dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
    return Signature(std::move(dims));
  }

  std::string describe() const {
    std::string out = "[";
    for (int i = 0; i < size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(dims_[i]);
    }
    return out + "]";
  }

 private:
  std::vector<int> dims_;
};

}  // namespace qwp

#endif
