//! Expression observables, e.g. `cos(2*pi*x) + s`.

use crate::error::{Error, Result};
use evalexpr::error::EvalexprResultValue;
use evalexpr::{build_operator_tree, Context, DefaultNumericTypes, EvalexprError, EvalexprResult, Node, Value};

const FUNCTIONS: [&str; 9] = ["sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "floor", "frac"];

#[derive(Clone, Debug)]
pub struct Expression {
    text: String,
    node: Node<DefaultNumericTypes>,
    vars: Vec<&'static str>,
}

struct Vars<'a> {
    names: &'a [&'static str],
    values: Vec<Value<DefaultNumericTypes>>,
    pi: Value<DefaultNumericTypes>,
}

impl Context for Vars<'_> {
    type NumericTypes = DefaultNumericTypes;

    fn get_value(&self, identifier: &str) -> Option<&Value<DefaultNumericTypes>> {
        if identifier == "pi" {
            return Some(&self.pi);
        }
        self.names.iter().position(|n| *n == identifier).map(|i| &self.values[i])
    }

    fn call_function(&self, identifier: &str, argument: &Value<DefaultNumericTypes>) -> EvalexprResultValue<DefaultNumericTypes> {
        let x = argument.as_number()?;
        let y = match identifier {
            "sin" => x.sin(),
            "cos" => x.cos(),
            "tan" => x.tan(),
            "exp" => x.exp(),
            "ln" => x.ln(),
            "sqrt" => x.sqrt(),
            "abs" => x.abs(),
            "floor" => x.floor(),
            "frac" => x - x.floor(),
            _ => return Err(EvalexprError::FunctionIdentifierNotFound(identifier.to_string())),
        };
        Ok(Value::Float(y))
    }

    fn are_builtin_functions_disabled(&self) -> bool {
        false
    }

    fn set_builtin_functions_disabled(&mut self, _disabled: bool) -> EvalexprResult<(), DefaultNumericTypes> {
        Err(EvalexprError::ContextNotMutable)
    }
}

impl Expression {
    /// Parses `text` in the variables `vars` (and the constant `pi`).
    pub fn parse(text: &str, vars: &[&'static str]) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(format!("observable {text:?}: {m}"));
        let node = build_operator_tree::<DefaultNumericTypes>(text).map_err(|e| bad(e.to_string()))?;
        if let Some(v) = node.iter_variable_identifiers().find(|v| *v != "pi" && !vars.contains(v)) {
            return Err(bad(format!("unknown variable {v} (expected one of {})", vars.join(", "))));
        }
        if let Some(f) = node
            .iter_function_identifiers()
            .find(|f| !FUNCTIONS.contains(f) && !f.starts_with("math::"))
        {
            return Err(bad(format!("unknown function {f}")));
        }
        let e = Expression {
            text: text.to_string(),
            node,
            vars: vars.to_vec(),
        };
        e.node
            .eval_number_with_context(&e.context(&vec![0.2917; vars.len()]))
            .map_err(|err| bad(err.to_string()))?;
        Ok(e)
    }

    fn context(&self, values: &[f64]) -> Vars<'_> {
        Vars {
            names: &self.vars,
            values: values.iter().map(|&v| Value::Float(v)).collect(),
            pi: Value::Float(std::f64::consts::PI),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn variables(&self) -> &[&'static str] {
        &self.vars
    }

    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        let v = self
            .node
            .eval_number_with_context(&self.context(values))
            .map_err(|e| Error::InvalidArgument(format!("observable {:?}: {e}", self.text)))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidArgument(format!("observable {:?} is not finite here", self.text)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        let e = Expression::parse("cos(2*pi*x) + s", &["x", "y", "s"]).unwrap();
        assert!((e.eval(&[0.0, 0.3, 0.5]).unwrap() - 1.5).abs() < 1e-15);
        assert!((e.eval(&[0.5, 0.0, 0.0]).unwrap() + 1.0).abs() < 1e-15);
        let i = Expression::parse("x^2 + 1", &["x"]).unwrap();
        assert_eq!(i.eval(&[3.0]).unwrap(), 10.0);
        assert_eq!(Expression::parse("frac(x)", &["x"]).unwrap().eval(&[2.25]).unwrap(), 0.25);
    }

    #[test]
    fn rejects() {
        assert!(Expression::parse("z + 1", &["x"]).is_err());
        assert!(Expression::parse("foo(x)", &["x"]).is_err());
        assert!(Expression::parse("x +", &["x"]).is_err());
        assert!(Expression::parse("ln(x)", &["x"]).unwrap().eval(&[0.0]).is_err());
    }
}
