//! Generalized Young functions `theta(t, x)`, acting on `||x||`.

use serde::{Deserialize, Serialize};

use crate::catalog::{FunctionSpec, NormSpec};
use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaFamily {
    /// `r^p`, `p >= 1`.
    Power { p: f64 },
    /// `r^p(t)` with a bounded catalog exponent `p(t) >= 1`.
    VariablePower { exponent: FunctionSpec },
    /// `e^r - r - 1`.
    Exponential,
    /// `r^p / p`, `p >= 1`.
    ScaledPower { p: f64 },
    /// `r^p` up to `threshold`, `+inf` beyond.
    CappedPower { p: f64, threshold: f64 },
    /// `sqrt(r)`: concave, not a Young function. Only meaningful for the axiom
    /// checker, every other operation rejects it.
    Sqrt,
}

/// Optional witnesses for the growth conditions: `||x|| >= lambda(t)` must
/// imply `theta >= alpha(t)`, and `||x|| <= rho(t)` must imply
/// `theta <= rho0(t)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomWitnesses {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<FunctionSpec>,
}

/// `{"family": "power", "p": 2}`, `{"family": "variable_power", "exponent": <function>}`,
/// `{"family": "capped_power", "p": 2, "threshold": 4}`, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThetaWire", into = "ThetaWire")]
pub struct YoungFunctionSpec {
    family: ThetaFamily,
    witnesses: AxiomWitnesses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FamilyName {
    Power,
    VariablePower,
    Exponential,
    ScaledPower,
    CappedPower,
    Sqrt,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaWire {
    family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "is_empty")]
    witnesses: AxiomWitnesses,
}

fn is_empty(w: &AxiomWitnesses) -> bool {
    *w == AxiomWitnesses::default()
}

impl TryFrom<ThetaWire> for YoungFunctionSpec {
    type Error = Error;

    fn try_from(w: ThetaWire) -> Result<Self> {
        let need_p = || {
            w.p.ok_or_else(|| Error::InvalidTheta(format!("{:?} needs `p`", w.family)))
        };
        let allowed: (bool, bool, bool) = match w.family {
            FamilyName::Power | FamilyName::ScaledPower => (true, false, false),
            FamilyName::VariablePower => (false, true, false),
            FamilyName::CappedPower => (true, false, true),
            FamilyName::Exponential | FamilyName::Sqrt => (false, false, false),
        };
        if (w.p.is_some() && !allowed.0)
            || (w.exponent.is_some() && !allowed.1)
            || (w.threshold.is_some() && !allowed.2)
        {
            return Err(Error::InvalidTheta(format!(
                "unexpected parameter for family {:?}",
                w.family
            )));
        }
        let family = match w.family {
            FamilyName::Power => ThetaFamily::Power { p: need_p()? },
            FamilyName::ScaledPower => ThetaFamily::ScaledPower { p: need_p()? },
            FamilyName::CappedPower => ThetaFamily::CappedPower {
                p: need_p()?,
                threshold: w
                    .threshold
                    .ok_or_else(|| Error::InvalidTheta("capped_power needs `threshold`".into()))?,
            },
            FamilyName::VariablePower => ThetaFamily::VariablePower {
                exponent: w
                    .exponent
                    .ok_or_else(|| Error::InvalidTheta("variable_power needs `exponent`".into()))?,
            },
            FamilyName::Exponential => ThetaFamily::Exponential,
            FamilyName::Sqrt => ThetaFamily::Sqrt,
        };
        let spec = YoungFunctionSpec {
            family,
            witnesses: w.witnesses,
        };
        if spec.family != ThetaFamily::Sqrt {
            spec.validate()?;
        }
        Ok(spec)
    }
}

impl From<YoungFunctionSpec> for ThetaWire {
    fn from(s: YoungFunctionSpec) -> Self {
        let mut w = ThetaWire {
            family: FamilyName::Exponential,
            p: None,
            exponent: None,
            threshold: None,
            witnesses: s.witnesses,
        };
        match s.family {
            ThetaFamily::Power { p } => {
                w.family = FamilyName::Power;
                w.p = Some(p);
            }
            ThetaFamily::ScaledPower { p } => {
                w.family = FamilyName::ScaledPower;
                w.p = Some(p);
            }
            ThetaFamily::CappedPower { p, threshold } => {
                w.family = FamilyName::CappedPower;
                w.p = Some(p);
                w.threshold = Some(threshold);
            }
            ThetaFamily::VariablePower { exponent } => {
                w.family = FamilyName::VariablePower;
                w.exponent = Some(exponent);
            }
            ThetaFamily::Exponential => {}
            ThetaFamily::Sqrt => w.family = FamilyName::Sqrt,
        }
        w
    }
}

impl YoungFunctionSpec {
    pub fn new(family: ThetaFamily) -> Result<Self> {
        let s = Self {
            family,
            witnesses: AxiomWitnesses::default(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(ThetaFamily::Power { p })
    }

    pub fn square() -> Self {
        Self::power(2.0).expect("p = 2 is valid")
    }

    pub fn exponential() -> Self {
        Self::new(ThetaFamily::Exponential).expect("always valid")
    }

    pub fn scaled_power(p: f64) -> Result<Self> {
        Self::new(ThetaFamily::ScaledPower { p })
    }

    pub fn capped_power(p: f64, threshold: f64) -> Result<Self> {
        Self::new(ThetaFamily::CappedPower { p, threshold })
    }

    pub fn variable_power(exponent: FunctionSpec) -> Result<Self> {
        Self::new(ThetaFamily::VariablePower { exponent })
    }

    /// The invalid `sqrt(r)` family, for exercising the axiom checker.
    pub fn sqrt_invalid() -> Self {
        Self {
            family: ThetaFamily::Sqrt,
            witnesses: AxiomWitnesses::default(),
        }
    }

    pub fn with_witnesses(mut self, witnesses: AxiomWitnesses) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn family(&self) -> &ThetaFamily {
        &self.family
    }

    pub fn witnesses(&self) -> &AxiomWitnesses {
        &self.witnesses
    }

    /// Short human-readable name.
    pub fn label(&self) -> String {
        match &self.family {
            ThetaFamily::Power { p } => format!("|x|^{p}"),
            ThetaFamily::VariablePower { .. } => "|x|^p(t)".into(),
            ThetaFamily::Exponential => "exp(|x|)-|x|-1".into(),
            ThetaFamily::ScaledPower { p } => format!("|x|^{p}/{p}"),
            ThetaFamily::CappedPower { p, threshold } => format!("|x|^{p} capped at {threshold}"),
            ThetaFamily::Sqrt => "sqrt|x|".into(),
        }
    }

    /// Rejects parameters outside the Young-function range, including the
    /// `sqrt` family.
    pub fn validate(&self) -> Result<()> {
        let power = |p: f64| {
            if p.is_finite() && p >= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidTheta(format!(
                    "exponent must be a finite p >= 1, got {p}"
                )))
            }
        };
        match &self.family {
            ThetaFamily::Power { p } | ThetaFamily::ScaledPower { p } => power(*p),
            ThetaFamily::CappedPower { p, threshold } => {
                power(*p)?;
                if !(threshold.is_finite() && *threshold > 0.0) {
                    return Err(Error::InvalidTheta(format!(
                        "threshold must be positive, got {threshold}"
                    )));
                }
                Ok(())
            }
            ThetaFamily::VariablePower { exponent } => {
                if !exponent.singular_points().is_empty() {
                    return Err(Error::InvalidTheta("exponent p(t) must be bounded".into()));
                }
                Ok(())
            }
            ThetaFamily::Exponential => Ok(()),
            ThetaFamily::Sqrt => Err(Error::InvalidTheta(
                "sqrt is concave, not a Young function".into(),
            )),
        }
    }

    /// Checks `p(t) >= 1` for a variable exponent on a grid over `[a, b]`.
    pub fn validate_on(&self, a: f64, b: f64) -> Result<()> {
        self.validate()?;
        if let ThetaFamily::VariablePower { exponent } = &self.family {
            let mut probes: Vec<f64> = (0..=256).map(|i| a + (b - a) * i as f64 / 256.0).collect();
            probes.extend(
                exponent
                    .breakpoints()
                    .into_iter()
                    .filter(|x| (a..=b).contains(x)),
            );
            for t in probes {
                let p: f64 = exponent.eval(t)?;
                if !(p.is_finite() && p >= 1.0) {
                    return Err(Error::InvalidTheta(format!(
                        "exponent p({t}) = {p} is below 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Jump locations of `t -> theta(t, x)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            ThetaFamily::VariablePower { exponent } => exponent.breakpoints(),
            _ => Vec::new(),
        }
    }

    /// `theta(t, x)` for `r = ||x|| >= 0`; may be `+inf`.
    pub fn eval_norm<T: Scalar>(&self, t: T, r: T) -> Result<T> {
        let r = r.abs();
        if r == T::zero() {
            return Ok(T::zero());
        }
        let pow = |p: f64| {
            if p.fract() == 0.0 && p.abs() < 64.0 {
                r.powi(p as i32)
            } else {
                r.powf(T::of(p))
            }
        };
        Ok(match &self.family {
            ThetaFamily::Power { p } => pow(*p),
            ThetaFamily::VariablePower { exponent } => r.powf(exponent.eval(t)?),
            ThetaFamily::Exponential => {
                let v = r.exp_m1() - r;
                if v.is_finite() {
                    v.max(T::zero())
                } else {
                    T::infinity()
                }
            }
            ThetaFamily::ScaledPower { p } => pow(*p) / T::of(*p),
            ThetaFamily::CappedPower { p, threshold } => {
                if r <= T::of(*threshold) {
                    pow(*p)
                } else {
                    T::infinity()
                }
            }
            ThetaFamily::Sqrt => r.sqrt(),
        })
    }

    /// `theta(t, x)` for a coordinate vector under `norm`.
    pub fn eval<T: Scalar>(&self, t: T, x: &[T], norm: &NormSpec) -> Result<T> {
        self.eval_norm(t, norm.norm(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let e = NormSpec::euclidean();
        assert_eq!(
            YoungFunctionSpec::square()
                .eval(0.5, &[3.0_f64], &e)
                .unwrap(),
            9.0
        );
        assert_eq!(
            YoungFunctionSpec::square()
                .eval(0.5, &[0.0_f64, 3.0], &e)
                .unwrap(),
            9.0
        );
        let ex = YoungFunctionSpec::exponential()
            .eval_norm(0.0, 1.0_f64)
            .unwrap();
        assert!((ex - (std::f64::consts::E - 2.0)).abs() < 1e-15);
        // tiny arguments keep their relative accuracy
        let small = YoungFunctionSpec::exponential()
            .eval_norm(0.0, 1e-9_f64)
            .unwrap();
        assert!((small / 5e-19 - 1.0).abs() < 1e-6);
        assert_eq!(
            YoungFunctionSpec::exponential()
                .eval_norm(0.0, 1e4_f64)
                .unwrap(),
            f64::INFINITY
        );
        let capped = YoungFunctionSpec::capped_power(2.0, 1.0).unwrap();
        assert_eq!(capped.eval_norm(0.0, 1.0_f64).unwrap(), 1.0);
        assert_eq!(capped.eval_norm(0.0, 1.5_f64).unwrap(), f64::INFINITY);
        let var = YoungFunctionSpec::variable_power(FunctionSpec::lin_comb(
            1.0,
            &FunctionSpec::constant(1.0),
            1.0,
            &FunctionSpec::identity(),
        ))
        .unwrap();
        assert_eq!(var.eval_norm(1.0, 3.0_f64).unwrap(), 9.0);
        for th in [
            YoungFunctionSpec::square(),
            YoungFunctionSpec::exponential(),
            capped,
            var,
            YoungFunctionSpec::scaled_power(3.0).unwrap(),
        ] {
            assert_eq!(th.eval(0.3, &[0.0_f64], &e).unwrap(), 0.0);
            assert_eq!(
                th.eval_norm(0.3, -0.7_f64).unwrap(),
                th.eval_norm(0.3, 0.7_f64).unwrap()
            );
        }
    }

    #[test]
    fn json_shape_and_validation() {
        let th: YoungFunctionSpec = serde_json::from_str(r#"{"family": "power", "p": 3}"#).unwrap();
        assert_eq!(th, YoungFunctionSpec::power(3.0).unwrap());
        let back: YoungFunctionSpec =
            serde_json::from_str(&serde_json::to_string(&th).unwrap()).unwrap();
        assert_eq!(back, th);
        for bad in [
            r#"{"family": "power", "p": 0.5}"#,
            r#"{"family": "power"}"#,
            r#"{"family": "exponential", "p": 2}"#,
            r#"{"family": "capped_power", "p": 2}"#,
            r#"{"family": "power", "p": 2, "q": 1}"#,
            r#"{"family": "cosh"}"#,
        ] {
            assert!(
                serde_json::from_str::<YoungFunctionSpec>(bad).is_err(),
                "{bad}"
            );
        }
        let sq: YoungFunctionSpec = serde_json::from_str(r#"{"family": "sqrt"}"#).unwrap();
        assert!(sq.validate().is_err());
        let var = YoungFunctionSpec::variable_power(FunctionSpec::constant(0.5)).unwrap();
        assert!(var.validate_on(0.0, 1.0).is_err());
    }
}
