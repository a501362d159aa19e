#include "causalav/equation.hpp"

namespace causalav {

namespace {

class LambdaEquation final : public Equation {
public:
    LambdaEquation(std::string name, int arity,
                   std::function<Value(std::span<const Value>, const EquationScope&)> fn)
        : name_(std::move(name)), arity_(arity), fn_(std::move(fn)) {}

    Value apply(std::span<const Value> args, const EquationScope& scope) const override {
        if (arity_ >= 0 && static_cast<int>(args.size()) != arity_)
            throw EvalError("equation '" + name_ + "' expects " + std::to_string(arity_) +
                            " arguments, got " + std::to_string(args.size()));
        return fn_(args, scope);
    }
    std::string_view name() const override { return name_; }
    int arity() const override { return arity_; }

private:
    std::string name_;
    int arity_;
    std::function<Value(std::span<const Value>, const EquationScope&)> fn_;
};

class ConstantEquation final : public Equation {
public:
    explicit ConstantEquation(Value v) : value_(std::move(v)) {}
    Value apply(std::span<const Value> args, const EquationScope&) const override {
        if (!args.empty()) throw EvalError("constant equation takes no arguments");
        return value_;
    }
    std::string_view name() const override { return "const"; }
    int arity() const override { return 0; }
    const Value& value() const { return value_; }

private:
    Value value_;
};

} // namespace

EquationRef make_equation(std::string name, int arity, std::function<Value(std::span<const Value>)> fn) {
    return std::make_shared<LambdaEquation>(
        std::move(name), arity,
        [f = std::move(fn)](std::span<const Value> args, const EquationScope&) { return f(args); });
}

EquationRef make_scoped_equation(std::string name, int arity,
                                 std::function<Value(std::span<const Value>, const EquationScope&)> fn) {
    return std::make_shared<LambdaEquation>(std::move(name), arity, std::move(fn));
}

EquationRef constant_equation(Value v) { return std::make_shared<ConstantEquation>(std::move(v)); }

const Value* constant_equation_value(const Equation& eq) {
    if (auto* c = dynamic_cast<const ConstantEquation*>(&eq)) return &c->value();
    return nullptr;
}

namespace eq {

EquationRef sum(int arity) {
    return make_equation("sum", arity, [](std::span<const Value> args) -> Value {
        if (args.empty()) throw EvalError("sum needs at least one argument");
        if (args[0].tag() == ValueTag::scalar) {
            const Unit u = args[0].as_scalar().unit;
            double acc = 0.0;
            for (const auto& a : args) acc += a.scalar_of(u);
            return Value::scalar(acc, u);
        }
        const Unit u = args[0].as_vector2().unit;
        Vec2 acc{};
        for (const auto& a : args) acc = acc + a.vec2_of(u);
        return Value::vector2(acc, u);
    });
}

EquationRef scale(double factor) {
    return make_equation("scale", 1, [factor](std::span<const Value> args) -> Value {
        const Value& a = args[0];
        if (a.tag() == ValueTag::scalar) {
            const auto& s = a.as_scalar();
            return Value::scalar(s.value * factor, s.unit);
        }
        const auto& v = a.as_vector2();
        return Value::vector2(v.v * factor, v.unit);
    });
}

EquationRef sum2_div() {
    return make_equation("sum2_div", 3, [](std::span<const Value> args) -> Value {
        const auto& a = args[0].as_vector2();
        const Vec2 b = args[1].vec2_of(a.unit);
        const auto& m = args[2].as_scalar();
        if (m.value == 0.0) throw EvalError("sum2_div: division by zero");
        return Value::vector2((a.v + b) / m.value, a.unit / m.unit);
    });
}

EquationRef identity() {
    return make_equation("identity", 1, [](std::span<const Value> args) { return args[0]; });
}

} // namespace eq

} // namespace causalav
