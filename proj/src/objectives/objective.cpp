#include <string>

#include "sfhf/errors.hpp"
#include "sfhf/objectives.hpp"

namespace sfhf {

Vector Objective::hvp(const Vector& theta, const Vector& v) const {
  Vector out(dim());
  hvp(theta, v, out);
  return out;
}

void Objective::check_point(const Vector& theta, const char* what) const {
  if (theta.dim() != dim())
    throw DimensionError(std::string(name()) + "::" + what + ": expected dimension " +
                         std::to_string(dim()) + ", got " + std::to_string(theta.dim()));
}

SymmetricOperator as_hessian_operator(ObjectivePtr obj, const Vector& theta) {
  if (!obj) throw Error("as_hessian_operator: null objective");
  if (theta.dim() != obj->dim())
    throw DimensionError("as_hessian_operator: theta has dimension " +
                         std::to_string(theta.dim()) + ", objective " + std::to_string(obj->dim()));
  const std::size_t dim = obj->dim();
  return SymmetricOperator(dim, [obj = std::move(obj), theta](const Vector& in, Vector& out) {
    obj->hvp(theta, in, out);
  });
}

}  // namespace sfhf
