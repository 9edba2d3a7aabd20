//! A seeded corpus of sequence families for implication conformance runs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::TAU;

use super::search::tall_indicator;
use crate::catalog::SequenceSpec;
use crate::orlicz::YoungFunctionSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub sequence: SequenceSpec,
    pub theta: YoungFunctionSpec,
}

fn scaled(coef: &str, child: Value) -> Value {
    json!({"kind": "combination", "params": {"coefficients": [{"expr": coef}]}, "children": [child]})
}

fn constant(c: f64) -> Value {
    json!({"kind": "constant", "params": {"c": c}})
}

fn monomial(alpha: f64) -> Value {
    json!({"kind": "monomial", "params": {"alpha": alpha}})
}

fn entry(
    name: &str,
    generator: Value,
    limit: Value,
    n_max: usize,
    theta: YoungFunctionSpec,
) -> CorpusEntry {
    CorpusEntry {
        name: name.into(),
        sequence: serde_json::from_value(
            json!({"generator": generator, "limit": limit, "n_max": n_max}),
        )
        .expect("corpus sequences are well formed"),
        theta,
    }
}

/// Thirteen families mixing convergent, divergent and constant sequences,
/// scalar and vector targets, oscillatory and singular terms. Every theta
/// here satisfies a growth bound `theta(2x) <= C theta(x)`; families whose
/// theta lacks it are searched separately because they can separate
/// modular from norm convergence.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let sq = YoungFunctionSpec::square;
    let zero = || constant(0.0);
    vec![
        entry("t/n", scaled("1/n", monomial(1.0)), zero(), 16, sq()),
        entry(
            "constant sequence",
            json!({"kind": "trig", "params": {"amplitude": 1.0, "frequency": TAU, "phase": 0.0}}),
            json!({"kind": "trig", "params": {"amplitude": 1.0, "frequency": TAU, "phase": 0.0}}),
            16,
            sq(),
        ),
        entry(
            "t^n",
            json!({"kind": "monomial", "params": {"alpha": {"expr": "n"}}}),
            zero(),
            16,
            sq(),
        ),
        entry("n chi[0, n^-3]", tall_indicator("n^(-3)"), zero(), 16, sq()),
        entry(
            "sin(n t)/n",
            json!({"kind": "trig", "params": {"amplitude": {"expr": "1/n"}, "frequency": {"expr": "n"}, "phase": 0.0}}),
            zero(),
            16,
            YoungFunctionSpec::power(3.0).expect("valid"),
        ),
        entry(
            "1 + 1/n",
            constant_expr("1 + 1/n"),
            constant(1.0),
            16,
            YoungFunctionSpec::power(1.5).expect("valid"),
        ),
        entry(
            "chi[0, 1/n]",
            json!({"kind": "indicator", "params": {"u": 0.0, "v": {"expr": "1/n"}}}),
            zero(),
            16,
            sq(),
        ),
        entry(
            "sin(2 pi n t)",
            json!({"kind": "trig", "params": {"amplitude": 1.0, "frequency": {"expr": "2*pi*n"}, "phase": 0.0}}),
            zero(),
            16,
            sq(),
        ),
        entry(
            "n chi[0, 1/n]",
            tall_indicator("1/n"),
            zero(),
            16,
            YoungFunctionSpec::power(1.0).expect("valid"),
        ),
        entry(
            "t/n, variable exponent",
            scaled("1/n", monomial(1.0)),
            zero(),
            16,
            YoungFunctionSpec::variable_power(
                serde_json::from_value(json!({
                    "kind": "combination",
                    "params": {"coefficients": [1.0, 1.0]},
                    "children": [constant(1.0), monomial(1.0)]
                }))
                .expect("valid"),
            )
            .expect("valid"),
        ),
        entry(
            "(t/n, 1/n) euclidean",
            json!({"components": [scaled("1/n", monomial(1.0)), constant_expr("1/n")], "norm": {"q": 2.0}}),
            json!({"components": [zero(), zero()], "norm": {"q": 2.0}}),
            16,
            sq(),
        ),
        entry(
            "t^-1/4 / n",
            scaled("1/n", monomial(-0.25)),
            zero(),
            16,
            YoungFunctionSpec::scaled_power(2.0).expect("valid"),
        ),
        entry(
            "hk_pathological(4, 1) / n",
            scaled(
                "1/n",
                json!({"kind": "hk_pathological", "params": {"beta": 4.0, "gamma": 1.0}}),
            ),
            zero(),
            12,
            sq(),
        ),
    ]
}

fn constant_expr(e: &str) -> Value {
    json!({"kind": "constant", "params": {"c": {"expr": e}}})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid() {
        let c = standard_corpus();
        assert!(c.len() >= 12);
        for e in &c {
            e.sequence
                .validate()
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }
}
