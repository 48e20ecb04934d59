#include "convgain/nn/tensor.hpp"

#include <sstream>

namespace convgain::nn {

Index shape_size(const Shape& shape) {
  if (shape.empty()) return 0;
  return std::accumulate(shape.begin(), shape.end(), Index{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

void require_finite(const TensorD& t, const std::string& what) {
  if (!t.all_finite()) throw TrainingDiverged("non-finite values in " + what);
}

}  // namespace convgain::nn
