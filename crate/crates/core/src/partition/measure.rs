use serde::{Deserialize, Serialize};

use crate::catalog::FunctionSpec;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_regular, GK21};
use crate::Scalar;

/// Lebesgue measure on `[a, b]`, optionally weighted by a bounded, strictly
/// positive catalog density.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure<T> {
    a: T,
    b: T,
    weight: Option<FunctionSpec>,
}

impl<T: Scalar> WeightedMeasure<T> {
    pub fn lebesgue(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidMeasure(format!(
                "need finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Self { a, b, weight: None })
    }

    pub fn unit() -> Self {
        Self::lebesgue(T::zero(), T::one()).expect("[0, 1] is a valid interval")
    }

    /// Attaches a density; rejected when it is singular on `[a, b]` or not
    /// strictly positive and finite on a sampling grid.
    pub fn with_weight(mut self, weight: FunctionSpec) -> Result<Self> {
        let (a, b) = (self.a.as_f64(), self.b.as_f64());
        if let Some(s) = weight
            .singular_points()
            .into_iter()
            .find(|s| (a..=b).contains(s))
        {
            return Err(Error::InvalidMeasure(format!("weight is singular at {s}")));
        }
        let mut probes: Vec<f64> = (0..=256).map(|i| a + (b - a) * i as f64 / 256.0).collect();
        probes.extend(
            weight
                .breakpoints()
                .into_iter()
                .filter(|x| (a..=b).contains(x)),
        );
        for t in probes {
            let w = weight.eval(t)?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "weight must be finite and strictly positive, got {w} at t = {t}"
                )));
            }
        }
        self.weight = Some(weight);
        Ok(self)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn weight(&self) -> Option<&FunctionSpec> {
        self.weight.as_ref()
    }

    pub fn is_lebesgue(&self) -> bool {
        self.weight.is_none()
    }

    pub fn contains(&self, t: T) -> bool {
        self.a <= t && t <= self.b
    }

    /// Density at `t` (1 for plain Lebesgue measure).
    pub fn density(&self, t: T) -> Result<T> {
        match &self.weight {
            None => Ok(T::one()),
            Some(w) => w.eval(t),
        }
    }

    /// Same density restricted to `[u, v]`.
    pub fn restrict(&self, u: T, v: T) -> Result<Self> {
        if !(self.a <= u && u < v && v <= self.b) {
            return Err(Error::InvalidMeasure(format!(
                "[{u}, {v}] is not a subinterval of [{}, {}]",
                self.a, self.b
            )));
        }
        Ok(Self {
            a: u,
            b: v,
            weight: self.weight.clone(),
        })
    }

    /// `mu([u, v])`.
    pub fn measure_of(&self, u: T, v: T) -> T {
        if v <= u {
            return T::zero();
        }
        match &self.weight {
            None => v - u,
            Some(w) => {
                if let Some(exact) = w.oracle_integral(u.as_f64(), v.as_f64()) {
                    return T::of(exact);
                }
                let tol = T::of(1e-13).max(T::epsilon() * T::of(16.0)) * (v - u);
                integrate_regular(&GK21, u, v, tol, 1 << 14, 1, |t, out: &mut [T]| {
                    out[0] = w.eval(t)?;
                    Ok(())
                })
                .map(|r| r[0])
                .unwrap_or_else(|_| T::nan())
            }
        }
    }

    pub fn total(&self) -> T {
        self.measure_of(self.a, self.b)
    }
}

/// Serializable description of a measure: `{"interval": [a, b], "weight": <function>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub interval: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<FunctionSpec>,
}

impl Default for MeasureSpec {
    fn default() -> Self {
        Self {
            interval: [0.0, 1.0],
            weight: None,
        }
    }
}

impl MeasureSpec {
    pub fn build<T: Scalar>(&self) -> Result<WeightedMeasure<T>> {
        let m = WeightedMeasure::lebesgue(T::of(self.interval[0]), T::of(self.interval[1]))?;
        match &self.weight {
            None => Ok(m),
            Some(w) => m.with_weight(w.clone()),
        }
    }
}
