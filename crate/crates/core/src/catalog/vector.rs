use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::spec::{sort_dedup, FunctionSpec};
use crate::error::{Error, Result};
use crate::Scalar;

/// The `l^q` norm on coordinate vectors, `q` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    q: f64,
}

impl NormSpec {
    pub fn lq(q: f64) -> Result<Self> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidSpec(format!(
                "norm exponent must be in [1, inf], got {q}"
            )));
        }
        Ok(Self { q })
    }

    pub fn euclidean() -> Self {
        Self { q: 2.0 }
    }

    pub fn max() -> Self {
        Self { q: f64::INFINITY }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn norm<T: Scalar>(&self, x: &[T]) -> T {
        match x {
            [] => T::zero(),
            [v] => v.abs(),
            _ if self.q == f64::INFINITY => x.iter().fold(T::zero(), |m, v| m.max(v.abs())),
            _ if self.q == 1.0 => x.iter().map(|v| v.abs()).sum(),
            _ if self.q == 2.0 => x.iter().fold(T::zero(), |acc, v| acc.hypot(*v)),
            _ => {
                // scale by the largest entry so huge/tiny coordinates do not overflow
                let m = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                if m == T::zero() || !m.is_finite() {
                    return m;
                }
                let q = T::of(self.q);
                let s: T = x.iter().map(|v| (v.abs() / m).powf(q)).sum();
                m * s.powf(T::one() / q)
            }
        }
    }

    /// A unit vector `u` in the dual norm with `<u, x> = ||x||`.
    pub fn dual_direction<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let n = self.norm(x);
        let mut u = vec![T::zero(); x.len()];
        if n == T::zero() || !n.is_finite() {
            return u;
        }
        if self.q == f64::INFINITY {
            let (i, v) = x
                .iter()
                .enumerate()
                .fold((0, T::zero()), |(bi, bv), (i, v)| {
                    if v.abs() > bv.abs() {
                        (i, *v)
                    } else {
                        (bi, bv)
                    }
                });
            u[i] = v.signum();
        } else if self.q == 1.0 {
            for (ui, v) in u.iter_mut().zip(x) {
                *ui = if *v == T::zero() {
                    T::zero()
                } else {
                    v.signum()
                };
            }
        } else {
            let q = T::of(self.q);
            for (ui, v) in u.iter_mut().zip(x) {
                *ui = v.signum() * (v.abs() / n).powf(q - T::one());
            }
        }
        u
    }
}

impl Default for NormSpec {
    fn default() -> Self {
        Self::euclidean()
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            q: &'a serde_json::Value,
        }
        let q = if self.q.is_infinite() {
            serde_json::Value::from("inf")
        } else {
            serde_json::Value::from(self.q)
        };
        Wire { q: &q }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Q {
            Num(f64),
            Text(String),
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            q: Q,
        }
        let q = match Wire::deserialize(d)?.q {
            Q::Num(q) => q,
            Q::Text(s) if s == "inf" => f64::INFINITY,
            Q::Text(s) => {
                return Err(serde::de::Error::custom(format!(
                    "unknown norm exponent `{s}`"
                )))
            }
        };
        NormSpec::lq(q).map_err(serde::de::Error::custom)
    }
}

/// A function with values in a finite-dimensional coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorWire", into = "VectorWire")]
pub struct VectorFunctionSpec {
    components: Vec<FunctionSpec>,
    norm: NormSpec,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorWire {
    components: Vec<FunctionSpec>,
    #[serde(default)]
    norm: NormSpec,
}

impl TryFrom<VectorWire> for VectorFunctionSpec {
    type Error = Error;
    fn try_from(w: VectorWire) -> Result<Self> {
        Self::new(w.components, w.norm)
    }
}

impl From<VectorFunctionSpec> for VectorWire {
    fn from(v: VectorFunctionSpec) -> Self {
        VectorWire {
            components: v.components,
            norm: v.norm,
        }
    }
}

impl From<FunctionSpec> for VectorFunctionSpec {
    fn from(f: FunctionSpec) -> Self {
        Self::scalar(f)
    }
}

impl VectorFunctionSpec {
    pub fn new(components: Vec<FunctionSpec>, norm: NormSpec) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSpec(
                "a vector function needs at least one component".into(),
            ));
        }
        Ok(Self { components, norm })
    }

    pub fn scalar(f: FunctionSpec) -> Self {
        Self {
            components: vec![f],
            norm: NormSpec::default(),
        }
    }

    pub fn zero(dim: usize, norm: NormSpec) -> Self {
        Self {
            components: vec![FunctionSpec::zero(); dim.max(1)],
            norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[FunctionSpec] {
        &self.components
    }

    pub fn norm(&self) -> NormSpec {
        self.norm
    }

    pub fn with_norm(mut self, norm: NormSpec) -> Self {
        self.norm = norm;
        self
    }

    pub fn evaluate<T: Scalar>(&self, t: T) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.dim()];
        self.evaluate_into(t, &mut out)?;
        Ok(out)
    }

    pub fn evaluate_into<T: Scalar>(&self, t: T, out: &mut [T]) -> Result<()> {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(t)?;
        }
        Ok(())
    }

    pub fn evaluate_raw<T: Scalar>(&self, t: T) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.dim()];
        self.evaluate_raw_into(t, &mut out)?;
        Ok(out)
    }

    pub fn evaluate_raw_into<T: Scalar>(&self, t: T, out: &mut [T]) -> Result<()> {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval_raw(t)?;
        }
        Ok(())
    }

    /// Componentwise exact integral over `[a, b]`, `None` when some component
    /// has no declared antiderivative there.
    pub fn oracle_integral(&self, a: f64, b: f64) -> Option<Vec<f64>> {
        self.components
            .iter()
            .map(|c| c.oracle_integral(a, b))
            .collect()
    }

    pub fn singular_points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .components
            .iter()
            .flat_map(|c| c.singular_points())
            .collect();
        sort_dedup(&mut out);
        out
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .components
            .iter()
            .flat_map(|c| c.breakpoints())
            .collect();
        sort_dedup(&mut out);
        out
    }

    pub fn is_singular_at(&self, t: f64) -> bool {
        self.singular_points().contains(&t)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            components: self.components.iter().map(|f| f.scaled(c)).collect(),
            norm: self.norm,
        }
    }

    /// `a * f + b * g`, keeping the norm of `f`.
    pub fn lin_comb(a: f64, f: &Self, b: f64, g: &Self) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::InvalidSpec(format!(
                "cannot combine functions of dimension {} and {}",
                f.dim(),
                g.dim()
            )));
        }
        Ok(Self {
            components: f
                .components
                .iter()
                .zip(&g.components)
                .map(|(x, y)| FunctionSpec::lin_comb(a, x, b, y))
                .collect(),
            norm: f.norm,
        })
    }

    /// `f - g`.
    pub fn difference(f: &Self, g: &Self) -> Result<Self> {
        Self::lin_comb(1.0, f, -1.0, g)
    }
}

/// Either a vector function object (`{"components": ...}`) or a bare scalar
/// function node, as accepted in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FunctionInput {
    Vector(VectorFunctionSpec),
    Scalar(FunctionSpec),
}

impl<'de> Deserialize<'de> for FunctionInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        FunctionInput::from_value(v).map_err(serde::de::Error::custom)
    }
}

impl FunctionInput {
    pub fn from_value(v: serde_json::Value) -> std::result::Result<Self, serde_json::Error> {
        if v.get("components").is_some() {
            Ok(FunctionInput::Vector(serde_json::from_value(v)?))
        } else {
            Ok(FunctionInput::Scalar(serde_json::from_value(v)?))
        }
    }

    pub fn into_vector(self) -> VectorFunctionSpec {
        match self {
            FunctionInput::Vector(v) => v,
            FunctionInput::Scalar(f) => VectorFunctionSpec::scalar(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vector_evaluation() {
        let f = VectorFunctionSpec::new(
            vec![FunctionSpec::constant(1.0), FunctionSpec::identity()],
            NormSpec::max(),
        )
        .unwrap();
        assert_eq!(f.evaluate(0.25_f64).unwrap(), vec![1.0, 0.25]);
        assert_eq!(f.oracle_integral(0.0, 1.0), Some(vec![1.0, 0.5]));
    }

    #[test]
    fn norm_json() {
        let n: NormSpec = serde_json::from_str(r#"{"q": "inf"}"#).unwrap();
        assert_eq!(n, NormSpec::max());
        assert_eq!(serde_json::to_string(&n).unwrap(), r#"{"q":"inf"}"#);
        assert!(serde_json::from_str::<NormSpec>(r#"{"q": 0.5}"#).is_err());
        let input: FunctionInput =
            serde_json::from_str(r#"{"kind":"constant","params":{"c":2}}"#).unwrap();
        assert_eq!(input.into_vector().dim(), 1);
    }

    #[test]
    fn dual_direction_attains_norm() {
        for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let n = NormSpec::lq(q).unwrap();
            let x = [0.3, -1.2, 0.7];
            let u = n.dual_direction(&x);
            let pairing: f64 = u.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((pairing - n.norm(&x)).abs() < 1e-12, "q={q}");
        }
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0..100.0f64, 3)
    }

    proptest! {
        #[test]
        fn norm_axioms(q in prop_oneof![Just(1.0), 1.0..8.0f64, Just(f64::INFINITY)],
                       x in vec3(), y in vec3(), a in -10.0..10.0f64) {
            let n = NormSpec::lq(q).unwrap();
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let scaled: Vec<f64> = x.iter().map(|v| a * v).collect();
            prop_assert!(n.norm(&x) >= 0.0);
            prop_assert!(n.norm(&sum) <= n.norm(&x) + n.norm(&y) + 1e-9);
            prop_assert!((n.norm(&scaled) - a.abs() * n.norm(&x)).abs() <= 1e-9 * (1.0 + n.norm(&scaled)));
            prop_assert_eq!(n.norm(&[0.0, 0.0, 0.0]), 0.0);
        }
    }
}
