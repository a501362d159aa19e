#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "causalav/value.hpp"

namespace causalav {

class EvaluationContext;
class Scm;

/// Read-mostly view handed to structural equations. Ordinary equations are
/// pure functions of their arguments and ignore it; the time meta-variables
/// are exposed for the few equation families that legitimately use them,
/// and `ctx`/`scm` exist for the planner's simulator hook.
struct EquationScope {
    double current_time = 0.0;
    double step_size = 0.0;
    EvaluationContext* ctx = nullptr;
    const Scm* scm = nullptr;
};

class Equation {
public:
    virtual ~Equation() = default;
    virtual Value apply(std::span<const Value> args, const EquationScope& scope) const = 0;
    virtual std::string_view name() const = 0;
    /// Expected argument count; -1 accepts any arity.
    virtual int arity() const = 0;
};

using EquationRef = std::shared_ptr<const Equation>;

/// Pure equation from a lambda on the argument values.
EquationRef make_equation(std::string name, int arity,
                          std::function<Value(std::span<const Value>)> fn);

/// Equation that also sees the evaluation scope.
EquationRef make_scoped_equation(std::string name, int arity,
                                 std::function<Value(std::span<const Value>, const EquationScope&)> fn);

/// Nullary constant.
EquationRef constant_equation(Value v);

/// True when the equation was built by constant_equation; used by DOT
/// export and intervention reporting.
const Value* constant_equation_value(const Equation& eq);

namespace eq {

/// n-ary sum; arguments must share one unit (scalars or vector2s).
EquationRef sum(int arity);
/// Scales argument 0 by a fixed factor.
EquationRef scale(double factor);
/// (arg0 + arg1) / arg2 for force/mass style chains: two vector2 operands
/// summed then divided by a scalar, units divided accordingly.
EquationRef sum2_div();
/// Identity pass-through.
EquationRef identity();

} // namespace eq

} // namespace causalav
