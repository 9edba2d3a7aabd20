use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

/// A point whose raw value differs from the a.e.-representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spike {
    pub point: f64,
    pub height: f64,
}

/// The closed grammar of scalar test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Constant {
        c: f64,
    },
    /// `t^alpha`, `alpha > -1`.
    Monomial {
        alpha: f64,
    },
    /// `amplitude * sin(frequency * t + phase)`.
    Trig {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Characteristic function of the closed interval `[u, v]`.
    Indicator {
        u: f64,
        v: f64,
    },
    /// Derivative of `F(t) = t^beta sin(t^-gamma)`, `F(0) = 0`, `beta, gamma > 0`.
    ///
    /// For `beta < gamma + 1` the derivative is unbounded near 0; for
    /// `beta <= gamma` it is not absolutely integrable either, but `F` is still
    /// its indefinite gauge integral.
    HkPathological {
        beta: f64,
        gamma: f64,
    },
    /// Zero almost everywhere; the listed heights are visible only to raw
    /// evaluation.
    SpikeList {
        spikes: Vec<Spike>,
    },
    Combination {
        terms: Vec<(f64, FunctionSpec)>,
    },
}

/// A scalar catalog function together with its a.e.-exception set.
///
/// `exceptions` override the raw value of this node at the listed points;
/// [`FunctionSpec::eval`] never sees them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "super::wire::FunctionNode",
    into = "super::wire::FunctionNode"
)]
pub struct FunctionSpec {
    pub(crate) kind: FunctionKind,
    pub(crate) exceptions: Vec<Spike>,
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() < i32::MAX as f64
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind) -> Result<Self> {
        let spec = Self {
            kind,
            exceptions: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(FunctionKind::Constant { c }).expect("finite constant")
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn identity() -> Self {
        Self::new(FunctionKind::Monomial { alpha: 1.0 }).expect("t^1 is valid")
    }

    pub fn monomial(alpha: f64) -> Result<Self> {
        Self::new(FunctionKind::Monomial { alpha })
    }

    pub fn trig(amplitude: f64, frequency: f64, phase: f64) -> Result<Self> {
        Self::new(FunctionKind::Trig {
            amplitude,
            frequency,
            phase,
        })
    }

    pub fn indicator(u: f64, v: f64) -> Result<Self> {
        Self::new(FunctionKind::Indicator { u, v })
    }

    pub fn hk_pathological(beta: f64, gamma: f64) -> Result<Self> {
        Self::new(FunctionKind::HkPathological { beta, gamma })
    }

    pub fn spikes(spikes: Vec<Spike>) -> Result<Self> {
        Self::new(FunctionKind::SpikeList { spikes })
    }

    pub fn combination(terms: Vec<(f64, FunctionSpec)>) -> Result<Self> {
        Self::new(FunctionKind::Combination { terms })
    }

    /// `c * self`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            kind: FunctionKind::Combination {
                terms: vec![(c, self.clone())],
            },
            exceptions: Vec::new(),
        }
    }

    /// `a * f + b * g`.
    pub fn lin_comb(a: f64, f: &FunctionSpec, b: f64, g: &FunctionSpec) -> Self {
        Self {
            kind: FunctionKind::Combination {
                terms: vec![(a, f.clone()), (b, g.clone())],
            },
            exceptions: Vec::new(),
        }
    }

    /// Replaces the exception set of this node.
    pub fn with_exceptions(mut self, exceptions: Vec<Spike>) -> Result<Self> {
        self.exceptions = exceptions;
        self.validate()?;
        Ok(self)
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn exceptions(&self) -> &[Spike] {
        &self.exceptions
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "{name} must be finite, got {x}"
                )))
            }
        };
        for s in &self.exceptions {
            finite("exception point", s.point)?;
            finite("exception height", s.height)?;
        }
        match &self.kind {
            FunctionKind::Constant { c } => finite("c", *c),
            FunctionKind::Monomial { alpha } => {
                finite("alpha", *alpha)?;
                if *alpha <= -1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "monomial exponent must satisfy alpha > -1, got {alpha}"
                    )));
                }
                Ok(())
            }
            FunctionKind::Trig {
                amplitude,
                frequency,
                phase,
            } => {
                finite("amplitude", *amplitude)?;
                finite("frequency", *frequency)?;
                finite("phase", *phase)
            }
            FunctionKind::Indicator { u, v } => {
                finite("u", *u)?;
                finite("v", *v)?;
                if u > v {
                    return Err(Error::InvalidSpec(format!(
                        "indicator needs u <= v, got [{u}, {v}]"
                    )));
                }
                Ok(())
            }
            FunctionKind::HkPathological { beta, gamma } => {
                finite("beta", *beta)?;
                finite("gamma", *gamma)?;
                if !(*beta > 0.0 && *gamma > 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "hk_pathological needs beta > 0 and gamma > 0, got beta={beta}, gamma={gamma}"
                    )));
                }
                Ok(())
            }
            FunctionKind::SpikeList { spikes } => {
                for s in spikes {
                    finite("spike point", s.point)?;
                    finite("spike height", s.height)?;
                }
                Ok(())
            }
            FunctionKind::Combination { terms } => {
                for (c, child) in terms {
                    finite("coefficient", *c)?;
                    child.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Evaluates the a.e.-representative at `t`.
    pub fn eval<T: Scalar>(&self, t: T) -> Result<T> {
        match &self.kind {
            FunctionKind::Constant { c } => Ok(T::of(*c)),
            FunctionKind::Monomial { alpha } => {
                let alpha = *alpha;
                if t == T::zero() {
                    return if alpha < 0.0 {
                        Err(Error::SingularPoint(0.0))
                    } else if alpha == 0.0 {
                        Ok(T::one())
                    } else {
                        Ok(T::zero())
                    };
                }
                if is_integer(alpha) {
                    Ok(t.powi(alpha as i32))
                } else if t < T::zero() {
                    Err(Error::OutOfDomain {
                        t: t.as_f64(),
                        reason: format!("t^{alpha} is only defined for t >= 0"),
                    })
                } else {
                    Ok(t.powf(T::of(alpha)))
                }
            }
            FunctionKind::Trig {
                amplitude,
                frequency,
                phase,
            } => Ok(T::of(*amplitude) * (T::of(*frequency) * t + T::of(*phase)).sin()),
            FunctionKind::Indicator { u, v } => {
                if T::of(*u) <= t && t <= T::of(*v) {
                    Ok(T::one())
                } else {
                    Ok(T::zero())
                }
            }
            FunctionKind::HkPathological { beta, gamma } => {
                if t == T::zero() {
                    return Err(Error::SingularPoint(0.0));
                }
                if t < T::zero() {
                    return Err(Error::OutOfDomain {
                        t: t.as_f64(),
                        reason: "hk_pathological is defined on t >= 0".into(),
                    });
                }
                let (b, g) = (T::of(*beta), T::of(*gamma));
                let phase = t.powf(-g);
                Ok(b * t.powf(b - T::one()) * phase.sin()
                    - g * t.powf(b - g - T::one()) * phase.cos())
            }
            FunctionKind::SpikeList { .. } => Ok(T::zero()),
            FunctionKind::Combination { terms } => {
                let mut acc = T::zero();
                for (c, child) in terms {
                    acc = acc + T::of(*c) * child.eval(t)?;
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates including spikes and exception-set overrides.
    pub fn eval_raw<T: Scalar>(&self, t: T) -> Result<T> {
        if let Some(s) = self.exceptions.iter().find(|s| T::of(s.point) == t) {
            // singular points stay singular even if listed as exceptions
            self.eval(t)?;
            return Ok(T::of(s.height));
        }
        match &self.kind {
            FunctionKind::SpikeList { spikes } => Ok(spikes
                .iter()
                .filter(|s| T::of(s.point) == t)
                .fold(T::zero(), |acc, s| acc + T::of(s.height))),
            FunctionKind::Combination { terms } => {
                let mut acc = T::zero();
                for (c, child) in terms {
                    acc = acc + T::of(*c) * child.eval_raw(t)?;
                }
                Ok(acc)
            }
            _ => self.eval(t),
        }
    }

    /// Points where evaluation is undefined or unbounded, sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_singular(&mut out);
        sort_dedup(&mut out);
        out
    }

    fn collect_singular(&self, out: &mut Vec<f64>) {
        match &self.kind {
            FunctionKind::Monomial { alpha } if *alpha < 0.0 => out.push(0.0),
            // undefined at the origin even when the derivative stays bounded
            FunctionKind::HkPathological { .. } => out.push(0.0),
            FunctionKind::Combination { terms } => {
                for (_, child) in terms {
                    child.collect_singular(out);
                }
            }
            _ => {}
        }
    }

    /// Jump discontinuities of the representative, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        sort_dedup(&mut out);
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match &self.kind {
            FunctionKind::Indicator { u, v } => {
                out.push(*u);
                out.push(*v);
            }
            FunctionKind::Combination { terms } => {
                for (_, child) in terms {
                    child.collect_breakpoints(out);
                }
            }
            _ => {}
        }
    }

    /// Closed-form antiderivative at `t`, when the catalog declares one.
    pub fn antiderivative(&self, t: f64) -> Option<f64> {
        match &self.kind {
            FunctionKind::Constant { c } => Some(c * t),
            FunctionKind::Monomial { alpha } => {
                let alpha = *alpha;
                if t < 0.0 && !(is_integer(alpha) && alpha >= 0.0) {
                    return None;
                }
                let e = alpha + 1.0;
                if is_integer(e) {
                    Some(t.powi(e as i32) / e)
                } else {
                    Some(t.powf(e) / e)
                }
            }
            FunctionKind::Trig {
                amplitude,
                frequency,
                phase,
            } => {
                if *frequency == 0.0 {
                    Some(amplitude * phase.sin() * t)
                } else {
                    Some(-amplitude / frequency * (frequency * t + phase).cos())
                }
            }
            FunctionKind::Indicator { u, v } => Some(t.clamp(*u, *v) - u),
            FunctionKind::HkPathological { beta, gamma } => {
                if t < 0.0 {
                    None
                } else if t == 0.0 {
                    Some(0.0)
                } else {
                    Some(t.powf(*beta) * t.powf(-gamma).sin())
                }
            }
            FunctionKind::SpikeList { .. } => Some(0.0),
            FunctionKind::Combination { terms } => {
                let mut acc = 0.0;
                for (c, child) in terms {
                    acc += c * child.antiderivative(t)?;
                }
                Some(acc)
            }
        }
    }

    pub fn has_antiderivative(&self) -> bool {
        match &self.kind {
            FunctionKind::Combination { terms } => {
                terms.iter().all(|(_, c)| c.has_antiderivative())
            }
            _ => true,
        }
    }

    /// Exact integral over `[a, b]` from the declared antiderivative.
    pub fn oracle_integral(&self, a: f64, b: f64) -> Option<f64> {
        Some(self.antiderivative(b)? - self.antiderivative(a)?)
    }
}

pub(crate) fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_values() {
        assert_eq!(FunctionSpec::constant(2.0).eval(0.3_f64).unwrap(), 2.0);
        assert_eq!(FunctionSpec::identity().eval(0.25_f64).unwrap(), 0.25);
        let chi = FunctionSpec::indicator(0.0, 0.5).unwrap();
        assert_eq!(chi.eval(0.5_f64).unwrap(), 1.0);
        assert_eq!(chi.eval(0.5000001_f64).unwrap(), 0.0);
    }

    #[test]
    fn pathological_derivative_at_one() {
        // d/dt t^2 sin(t^-2) = 2t sin(t^-2) - (2/t) cos(t^-2)
        let f = FunctionSpec::hk_pathological(2.0, 2.0).unwrap();
        let expected = 2.0 * 1f64.sin() - 2.0 * 1f64.cos();
        assert!((f.eval(1.0_f64).unwrap() - expected).abs() < 1e-15);
        // central difference of the antiderivative
        let h = 1e-6;
        let fd =
            (f.antiderivative(0.7 + h).unwrap() - f.antiderivative(0.7 - h).unwrap()) / (2.0 * h);
        assert!((f.eval(0.7_f64).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn singular_and_domain_errors() {
        let f = FunctionSpec::monomial(-0.5).unwrap();
        assert_eq!(f.eval(0.0_f64), Err(Error::SingularPoint(0.0)));
        assert!(matches!(f.eval(-1.0_f64), Err(Error::OutOfDomain { .. })));
        assert_eq!(f.singular_points(), vec![0.0]);
        assert_eq!(
            FunctionSpec::monomial(2.0).unwrap().eval(-3.0_f64).unwrap(),
            9.0
        );
        assert!(FunctionSpec::monomial(-1.0).is_err());
        assert!(FunctionSpec::hk_pathological(0.0, 2.0).is_err());
        assert!(FunctionSpec::hk_pathological(1.0, -1.0).is_err());
        assert!(FunctionSpec::indicator(1.0, 0.0).is_err());
    }

    #[test]
    fn raw_sees_spikes() {
        let s = FunctionSpec::spikes(vec![Spike {
            point: 0.5,
            height: 1e6,
        }])
        .unwrap();
        assert_eq!(s.eval_raw(0.5_f64).unwrap(), 1e6);
        assert_eq!(s.eval_raw(0.4_f64).unwrap(), 0.0);
        assert_eq!(s.eval(0.5_f64).unwrap(), 0.0);

        let one_plus = FunctionSpec::combination(vec![
            (1.0, FunctionSpec::constant(1.0)),
            (
                1.0,
                FunctionSpec::spikes(vec![Spike {
                    point: 0.5,
                    height: 3.0,
                }])
                .unwrap(),
            ),
        ])
        .unwrap();
        assert_eq!(one_plus.eval_raw(0.5_f64).unwrap(), 4.0);
        assert_eq!(one_plus.eval(0.5_f64).unwrap(), 1.0);
    }

    #[test]
    fn exception_override() {
        let f = FunctionSpec::identity()
            .with_exceptions(vec![Spike {
                point: 0.25,
                height: -7.0,
            }])
            .unwrap();
        assert_eq!(f.eval_raw(0.25_f64).unwrap(), -7.0);
        assert_eq!(f.eval(0.25_f64).unwrap(), 0.25);
        assert_eq!(f.eval_raw(0.3_f64).unwrap(), 0.3);
    }

    #[test]
    fn oracles() {
        assert_eq!(
            FunctionSpec::identity().oracle_integral(0.0, 1.0),
            Some(0.5)
        );
        assert_eq!(FunctionSpec::zero().oracle_integral(0.0, 1.0), Some(0.0));
        let p = FunctionSpec::hk_pathological(2.0, 2.0).unwrap();
        assert!((p.oracle_integral(0.0, 1.0).unwrap() - 0.8414709848078965).abs() < 1e-15);
        let chi = FunctionSpec::indicator(0.25, 0.5).unwrap();
        assert_eq!(chi.oracle_integral(0.0, 1.0), Some(0.25));
        assert!((chi.oracle_integral(0.3, 0.4).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(
            FunctionSpec::monomial(0.5)
                .unwrap()
                .oracle_integral(-1.0, 1.0),
            None
        );
    }

    #[test]
    fn f32_evaluation() {
        let f = FunctionSpec::trig(2.0, 3.0, 0.5).unwrap();
        let x32 = f.eval(0.4_f32).unwrap();
        let x64 = f.eval(0.4_f64).unwrap();
        assert!((x32 as f64 - x64).abs() < 1e-6);
    }
}
