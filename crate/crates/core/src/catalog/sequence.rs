//! Parametric function sequences `n -> f_n`.
//!
//! A generator is a function JSON tree in which any number may be replaced by
//! `{"expr": "<expression>"}`. Expressions see the index `n` plus any named
//! template parameters, and support the usual arithmetic, `^`, `exp`, `ln`,
//! `sqrt`, `abs` and trigonometric functions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::vector::{FunctionInput, VectorFunctionSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    /// Function tree (scalar node or `{"components": ...}`) with `{"expr"}` leaves.
    pub generator: Value,
    pub limit: FunctionInput,
    pub n_max: usize,
    #[serde(default = "one")]
    pub n_min: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

fn one() -> usize {
    1
}

impl SequenceSpec {
    pub fn new(generator: Value, limit: VectorFunctionSpec, n_max: usize) -> Self {
        Self {
            generator,
            limit: FunctionInput::Vector(limit),
            n_max,
            n_min: 1,
            params: BTreeMap::new(),
        }
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    pub fn limit(&self) -> VectorFunctionSpec {
        self.limit.clone().into_vector()
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    /// Checks that every term instantiates to a valid function of the same
    /// dimension as the limit.
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_max < self.n_min {
            return Err(Error::InvalidSpec(format!(
                "sequence range [{}, {}] is empty or starts below 1",
                self.n_min, self.n_max
            )));
        }
        let d = self.limit().dim();
        for n in self.indices() {
            let term = self.term(n)?;
            if term.dim() != d {
                return Err(Error::InvalidSpec(format!(
                    "term {n} has dimension {} but the limit has {d}",
                    term.dim()
                )));
            }
        }
        Ok(())
    }

    /// The `n`-th term.
    pub fn term(&self, n: usize) -> Result<VectorFunctionSpec> {
        let mut vars = self.params.clone();
        vars.insert("n".into(), n as f64);
        let tree = substitute(&self.generator, &vars)?;
        let input = FunctionInput::from_value(tree)
            .map_err(|e| Error::InvalidSpec(format!("term {n}: {e}")))?;
        Ok(input.into_vector())
    }

    /// `f_n - f`.
    pub fn distance_term(&self, n: usize) -> Result<VectorFunctionSpec> {
        VectorFunctionSpec::difference(&self.term(n)?, &self.limit())
    }
}

/// Replaces every `{"expr": "..."}` object in `tree` by its value.
pub fn substitute(tree: &Value, vars: &BTreeMap<String, f64>) -> Result<Value> {
    match tree {
        Value::Object(map) => {
            if map.len() == 1 {
                if let Some(Value::String(expr)) = map.get("expr") {
                    let x = eval_expr(expr, vars)?;
                    return serde_json::Number::from_f64(x)
                        .map(Value::Number)
                        .ok_or_else(|| Error::Expression {
                            expr: expr.clone(),
                            reason: format!("evaluated to non-finite value {x}"),
                        });
                }
            }
            let mut out = serde_json::Map::with_capacity(map.len());
            for (k, v) in map {
                out.insert(k.clone(), substitute(v, vars)?);
            }
            Ok(Value::Object(out))
        }
        Value::Array(items) => Ok(Value::Array(
            items
                .iter()
                .map(|v| substitute(v, vars))
                .collect::<Result<_>>()?,
        )),
        other => Ok(other.clone()),
    }
}

pub fn eval_expr(expr: &str, vars: &BTreeMap<String, f64>) -> Result<f64> {
    let parsed: meval::Expr = expr.parse().map_err(|e: meval::Error| Error::Expression {
        expr: expr.into(),
        reason: e.to_string(),
    })?;
    let mut ctx = meval::Context::new();
    for (k, v) in vars {
        ctx.var(k.as_str(), *v);
    }
    parsed
        .eval_with_context(ctx)
        .map_err(|e| Error::Expression {
            expr: expr.into(),
            reason: e.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FunctionSpec;
    use serde_json::json;

    #[test]
    fn expression_terms() {
        let seq = SequenceSpec::new(
            json!({"kind": "combination", "params": {"coefficients": [{"expr": "n"}]},
                   "children": [{"kind": "indicator",
                                 "params": {"u": 0.0, "v": {"expr": "1/(n*(exp(n)-n-1))"}}}]}),
            VectorFunctionSpec::scalar(FunctionSpec::zero()),
            5,
        );
        seq.validate().unwrap();
        let f3 = seq.term(3).unwrap();
        let a3 = 1.0 / (3.0 * (3f64.exp() - 4.0));
        assert_eq!(f3.evaluate(a3 * 0.5).unwrap(), vec![3.0]);
        assert_eq!(f3.evaluate(a3 * 1.5).unwrap(), vec![0.0]);
    }

    #[test]
    fn params_and_errors() {
        let mut vars = BTreeMap::new();
        vars.insert("n".to_string(), 4.0);
        vars.insert("b".to_string(), 2.0);
        assert_eq!(eval_expr("n^(-b)", &vars).unwrap(), 1.0 / 16.0);
        assert!(eval_expr("n +", &vars).is_err());
        assert!(eval_expr("m", &vars).is_err());
        assert!(substitute(&json!({"expr": "1/0"}), &vars).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let seq = SequenceSpec::new(
            json!({"kind": "constant", "params": {"c": {"expr": "1/n"}}}),
            VectorFunctionSpec::zero(2, Default::default()),
            3,
        );
        assert!(seq.validate().is_err());
    }
}
