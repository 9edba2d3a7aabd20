//! JSON tree form of [`FunctionSpec`]: `{ "kind", "params", "children", "exceptions" }`.

use serde::{Deserialize, Serialize};

use super::spec::{FunctionKind, FunctionSpec, Spike};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Constant,
    Monomial,
    Trig,
    Indicator,
    HkPathological,
    SpikeList,
    Combination,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spikes: Option<Vec<Spike>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
}

impl Params {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! check {
            ($($f:ident),*) => {$( if self.$f.is_some() { out.push(stringify!($f)); } )*};
        }
        check!(
            c,
            alpha,
            amplitude,
            frequency,
            phase,
            u,
            v,
            beta,
            gamma,
            spikes,
            coefficients
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionNode {
    pub kind: NodeKind,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<FunctionNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exceptions: Vec<Spike>,
}

fn require(kind: NodeKind, name: &str, v: Option<f64>) -> Result<f64, Error> {
    v.ok_or_else(|| Error::InvalidSpec(format!("{kind:?} node is missing param `{name}`")))
}

impl TryFrom<FunctionNode> for FunctionSpec {
    type Error = Error;

    fn try_from(node: FunctionNode) -> Result<Self, Error> {
        let p = &node.params;
        let (allowed, takes_children): (&[&str], bool) = match node.kind {
            NodeKind::Constant => (&["c"], false),
            NodeKind::Monomial => (&["alpha"], false),
            NodeKind::Trig => (&["amplitude", "frequency", "phase"], false),
            NodeKind::Indicator => (&["u", "v"], false),
            NodeKind::HkPathological => (&["beta", "gamma"], false),
            NodeKind::SpikeList => (&["spikes"], false),
            NodeKind::Combination => (&["coefficients"], true),
        };
        if let Some(extra) = p.present().into_iter().find(|k| !allowed.contains(k)) {
            return Err(Error::InvalidSpec(format!(
                "param `{extra}` is not accepted by {:?} nodes",
                node.kind
            )));
        }
        if !takes_children && !node.children.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "{:?} nodes take no children",
                node.kind
            )));
        }
        let kind = match node.kind {
            NodeKind::Constant => FunctionKind::Constant {
                c: require(node.kind, "c", p.c)?,
            },
            NodeKind::Monomial => FunctionKind::Monomial {
                alpha: require(node.kind, "alpha", p.alpha)?,
            },
            NodeKind::Trig => FunctionKind::Trig {
                amplitude: p.amplitude.unwrap_or(1.0),
                frequency: require(node.kind, "frequency", p.frequency)?,
                phase: p.phase.unwrap_or(0.0),
            },
            NodeKind::Indicator => FunctionKind::Indicator {
                u: require(node.kind, "u", p.u)?,
                v: require(node.kind, "v", p.v)?,
            },
            NodeKind::HkPathological => FunctionKind::HkPathological {
                beta: require(node.kind, "beta", p.beta)?,
                gamma: require(node.kind, "gamma", p.gamma)?,
            },
            NodeKind::SpikeList => FunctionKind::SpikeList {
                spikes: p.spikes.clone().unwrap_or_default(),
            },
            NodeKind::Combination => {
                let coefficients = p
                    .coefficients
                    .clone()
                    .unwrap_or_else(|| vec![1.0; node.children.len()]);
                if coefficients.len() != node.children.len() {
                    return Err(Error::InvalidSpec(format!(
                        "combination has {} coefficients for {} children",
                        coefficients.len(),
                        node.children.len()
                    )));
                }
                let terms = coefficients
                    .into_iter()
                    .zip(node.children)
                    .map(|(c, child)| Ok((c, FunctionSpec::try_from(child)?)))
                    .collect::<Result<Vec<_>, Error>>()?;
                FunctionKind::Combination { terms }
            }
        };
        FunctionSpec::new(kind)?.with_exceptions(node.exceptions)
    }
}

impl From<FunctionSpec> for FunctionNode {
    fn from(spec: FunctionSpec) -> Self {
        let mut params = Params::default();
        let mut children = Vec::new();
        let kind = match spec.kind {
            FunctionKind::Constant { c } => {
                params.c = Some(c);
                NodeKind::Constant
            }
            FunctionKind::Monomial { alpha } => {
                params.alpha = Some(alpha);
                NodeKind::Monomial
            }
            FunctionKind::Trig {
                amplitude,
                frequency,
                phase,
            } => {
                params.amplitude = Some(amplitude);
                params.frequency = Some(frequency);
                params.phase = Some(phase);
                NodeKind::Trig
            }
            FunctionKind::Indicator { u, v } => {
                params.u = Some(u);
                params.v = Some(v);
                NodeKind::Indicator
            }
            FunctionKind::HkPathological { beta, gamma } => {
                params.beta = Some(beta);
                params.gamma = Some(gamma);
                NodeKind::HkPathological
            }
            FunctionKind::SpikeList { spikes } => {
                params.spikes = Some(spikes);
                NodeKind::SpikeList
            }
            FunctionKind::Combination { terms } => {
                let (coefficients, nodes): (Vec<f64>, Vec<FunctionNode>) =
                    terms.into_iter().map(|(c, s)| (c, s.into())).unzip();
                params.coefficients = Some(coefficients);
                children = nodes;
                NodeKind::Combination
            }
        };
        FunctionNode {
            kind,
            params,
            children,
            exceptions: spec.exceptions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_shape() {
        let json = r#"{
            "kind": "combination",
            "params": {"coefficients": [1.0, -2.0]},
            "children": [
                {"kind": "monomial", "params": {"alpha": 0.5}},
                {"kind": "indicator", "params": {"u": 0.0, "v": 0.5}}
            ],
            "exceptions": [{"point": 0.25, "height": 9.0}]
        }"#;
        let f: FunctionSpec = serde_json::from_str(json).unwrap();
        assert_eq!(f.eval(0.25_f64).unwrap(), 0.5 - 2.0);
        assert_eq!(f.eval_raw(0.25_f64).unwrap(), 9.0);
    }

    #[test]
    fn rejects_bad_nodes() {
        for bad in [
            r#"{"kind": "monomial", "params": {"alpha": -1.5}}"#,
            r#"{"kind": "monomial", "params": {"c": 1.0}}"#,
            r#"{"kind": "constant", "params": {"c": 1.0}, "color": "red"}"#,
            r#"{"kind": "constant"}"#,
            r#"{"kind": "hk_pathological", "params": {"beta": 1.0, "gamma": 0.0}}"#,
            r#"{"kind": "combination", "params": {"coefficients": [1.0]}, "children": []}"#,
            r#"{"kind": "cosine", "params": {}}"#,
        ] {
            assert!(serde_json::from_str::<FunctionSpec>(bad).is_err(), "{bad}");
        }
    }

    fn leaf() -> impl Strategy<Value = FunctionSpec> {
        prop_oneof![
            (-5.0..5.0f64).prop_map(FunctionSpec::constant),
            (-0.9..4.0f64).prop_map(|a| FunctionSpec::monomial(a).unwrap()),
            (-2.0..2.0f64, 0.0..10.0f64, -3.0..3.0f64)
                .prop_map(|(a, w, p)| FunctionSpec::trig(a, w, p).unwrap()),
            (0.0..0.5f64, 0.5..1.0f64).prop_map(|(u, v)| FunctionSpec::indicator(u, v).unwrap()),
            (0.1..2.0f64, 0.0..1.0f64).prop_map(|(g, d)| FunctionSpec::hk_pathological(
                g + d + 0.01,
                g
            )
            .unwrap()),
        ]
    }

    fn tree() -> impl Strategy<Value = FunctionSpec> {
        leaf().prop_recursive(3, 12, 3, |inner| {
            prop::collection::vec((-3.0..3.0f64, inner), 1..4)
                .prop_map(|terms| FunctionSpec::combination(terms).unwrap())
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_preserves_spec(f in tree()) {
            let json = serde_json::to_string(&f).unwrap();
            let back: FunctionSpec = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
