//! The modular `rho(f) = int theta(t, f(t)) dmu` and H-Orlicz membership.

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::theta::YoungFunctionSpec;
use crate::catalog::{NormSpec, VectorFunctionSpec};
use crate::error::{Error, Result};
use crate::partition::WeightedMeasure;
use crate::quadrature::{integrate, Backend, Integrand, QuadratureConfig, Status};
use crate::Scalar;

/// An extended nonnegative real with an explicit "could not decide" state.
///
/// Serialized as a number, `"inf"` or `"indeterminate"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtValue<T> {
    Finite(T),
    Infinite,
    Indeterminate,
}

impl<T: Scalar> ExtValue<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            ExtValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn is_indeterminate(self) -> bool {
        matches!(self, ExtValue::Indeterminate)
    }

    /// `+inf` for `Infinite`, `NaN` for `Indeterminate`.
    pub fn to_scalar(self) -> T {
        match self {
            ExtValue::Finite(v) => v,
            ExtValue::Infinite => T::infinity(),
            ExtValue::Indeterminate => T::nan(),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> ExtValue<U> {
        match self {
            ExtValue::Finite(v) => ExtValue::Finite(f(v)),
            ExtValue::Infinite => ExtValue::Infinite,
            ExtValue::Indeterminate => ExtValue::Indeterminate,
        }
    }

    /// `Ok(v)` becomes `Finite(v)`, `NotInSpace` becomes `Infinite` and
    /// `Indeterminate` stays; other errors pass through.
    pub fn from_result(r: Result<T>) -> Result<Self> {
        match r {
            Ok(v) => Ok(ExtValue::Finite(v)),
            Err(Error::NotInSpace) => Ok(ExtValue::Infinite),
            Err(Error::Indeterminate(_)) => Ok(ExtValue::Indeterminate),
            Err(e) => Err(e),
        }
    }
}

impl<T: Scalar + Serialize> Serialize for ExtValue<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtValue::Finite(v) => v.serialize(s),
            ExtValue::Infinite => s.serialize_str("inf"),
            ExtValue::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for ExtValue<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire<T> {
            Num(T),
            Tag(String),
        }
        match Wire::<T>::deserialize(d)? {
            Wire::Num(v) => Ok(ExtValue::Finite(v)),
            Wire::Tag(s) if s == "inf" => Ok(ExtValue::Infinite),
            Wire::Tag(s) if s == "indeterminate" => Ok(ExtValue::Indeterminate),
            Wire::Tag(s) => Err(serde::de::Error::custom(format!(
                "expected a number, \"inf\" or \"indeterminate\", got {s:?}"
            ))),
        }
    }
}

/// The scalar integrand `t -> theta(t, k f(t))`.
pub struct Composed<'a, T> {
    f: &'a VectorFunctionSpec,
    theta: &'a YoungFunctionSpec,
    k: T,
    norm: NormSpec,
}

impl<'a, T: Scalar> Composed<'a, T> {
    pub fn new(f: &'a VectorFunctionSpec, theta: &'a YoungFunctionSpec, k: T) -> Self {
        Self {
            f,
            theta,
            k,
            norm: f.norm(),
        }
    }
}

impl<T: Scalar> Integrand<T> for Composed<'_, T> {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, t: T, out: &mut [T]) -> Result<()> {
        let d = self.f.dim();
        let mut stack = [T::zero(); 8];
        let mut heap;
        let buf: &mut [T] = if d <= stack.len() {
            &mut stack[..d]
        } else {
            heap = vec![T::zero(); d];
            &mut heap
        };
        self.f.evaluate_into(t, buf)?;
        let r = self.k.abs() * self.norm.norm(buf);
        out[0] = self.theta.eval_norm(t, r)?;
        Ok(())
    }

    fn singular_points(&self) -> Vec<f64> {
        self.f.singular_points()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.f.breakpoints();
        b.extend(self.theta.breakpoints());
        b
    }

    fn norm(&self, x: &[T]) -> T {
        x[0].abs()
    }
}

/// `rho(k f)` with the chosen backend: `Diverged` becomes `Infinite`,
/// `BudgetExhausted` becomes `Indeterminate`.
pub fn modular_scaled<T: Scalar>(
    f: &VectorFunctionSpec,
    k: T,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<ExtValue<T>> {
    theta.validate_on(m.a().as_f64(), m.b().as_f64())?;
    if k == T::zero() {
        return Ok(ExtValue::Finite(T::zero()));
    }
    let r = integrate(&Composed::new(f, theta, k), m, cfg, backend)?;
    Ok(match r.status {
        Status::Converged => ExtValue::Finite(r.scalar().max(T::zero())),
        Status::Diverged => ExtValue::Infinite,
        Status::BudgetExhausted => ExtValue::Indeterminate,
    })
}

/// `rho(f) = (H) int theta(t, f(t)) dmu`.
pub fn modular<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<ExtValue<T>> {
    modular_scaled(f, T::one(), theta, m, cfg, Backend::Hk)
}

pub fn modular_with<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<ExtValue<T>> {
    modular_scaled(f, T::one(), theta, m, cfg, backend)
}

/// `{2^i : i = -20..=20}`.
pub fn default_k_grid() -> Vec<f64> {
    (-20..=20).map(|i| 2f64.powi(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipVerdict {
    /// `rho(k f)` finite at every grid `k`.
    MemberAllK,
    /// Finite at some grid `k`, infinite at others.
    MemberSomeK,
    /// Infinite at every grid `k`.
    NotMember,
    /// Some evaluation exhausted its budget, so no verdict is certain.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct MembershipReport<T> {
    pub k_grid: Vec<f64>,
    pub modulars: Vec<ExtValue<T>>,
    pub verdict: MembershipVerdict,
    /// Grid indices `i` where `rho(k_{i+1} f) < rho(k_i f) - 2 tol`.
    pub monotonicity_violations: Vec<usize>,
    /// Whether `rho(k_i f) <= (k_i / k_{i+1}) rho(k_{i+1} f) + 2 tol` holds on
    /// the five smallest `k`, i.e. the modular shrinks at least linearly as
    /// `k -> 0+`. `None` when any of those values is not finite.
    pub vanishes_at_zero: Option<bool>,
}

/// Evaluates `rho(k f)` over `k_grid` (ascending; `None` means
/// [`default_k_grid`]) and classifies H-Orlicz membership.
pub fn h_orlicz_membership<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    k_grid: Option<&[f64]>,
    cfg: &QuadratureConfig<T>,
) -> Result<MembershipReport<T>> {
    let k_grid = k_grid.map(<[f64]>::to_vec).unwrap_or_else(default_k_grid);
    if k_grid.is_empty() {
        return Err(Error::InvalidConfig("k grid must not be empty".into()));
    }
    if k_grid.iter().any(|k| !(k.is_finite() && *k > 0.0))
        || k_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidConfig(
            "k grid must be positive, finite and strictly increasing".into(),
        ));
    }
    theta.validate_on(m.a().as_f64(), m.b().as_f64())?;
    cfg.validate(m.a(), m.b())?;
    let modulars = k_grid
        .par_iter()
        .map(|&k| modular_scaled(f, T::of(k), theta, m, cfg, Backend::Hk))
        .collect::<Result<Vec<_>>>()?;

    let finite = modulars.iter().filter(|v| v.is_finite()).count();
    let infinite = modulars
        .iter()
        .filter(|v| matches!(v, ExtValue::Infinite))
        .count();
    let verdict = if finite == modulars.len() {
        MembershipVerdict::MemberAllK
    } else if infinite == modulars.len() {
        MembershipVerdict::NotMember
    } else if finite > 0 && finite + infinite == modulars.len() {
        MembershipVerdict::MemberSomeK
    } else {
        MembershipVerdict::Indeterminate
    };

    let slack = T::of(2.0) * cfg.tol;
    let monotonicity_violations = modulars
        .windows(2)
        .enumerate()
        .filter(|(_, w)| match (w[0], w[1]) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => b < a - slack,
            (ExtValue::Infinite, ExtValue::Finite(_)) => true,
            _ => false,
        })
        .map(|(i, _)| i)
        .collect();

    let head = &modulars[..modulars.len().min(5)];
    let vanishes_at_zero = head.iter().all(|v| v.is_finite()).then(|| {
        head.windows(2).zip(k_grid.windows(2)).all(|(v, k)| {
            let (a, b) = (v[0].to_scalar(), v[1].to_scalar());
            a <= T::of(k[0] / k[1]) * b + slack
        })
    });

    Ok(MembershipReport {
        k_grid,
        modulars,
        verdict,
        monotonicity_violations,
        vanishes_at_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct ConvexityVerdict<T> {
    /// `rho(alpha f + beta g)`.
    pub lhs: ExtValue<T>,
    /// `alpha rho(f) + beta rho(g)`.
    pub rhs: ExtValue<T>,
    pub slack: T,
    pub pass: bool,
}

/// Checks `rho(alpha f + beta g) <= alpha rho(f) + beta rho(g) + 4 tol` for
/// `alpha, beta >= 0`, `alpha + beta = 1`.
pub fn modular_convexity_check<T: Scalar>(
    f: &VectorFunctionSpec,
    g: &VectorFunctionSpec,
    alpha: f64,
    beta: f64,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<ConvexityVerdict<T>> {
    if !(alpha >= 0.0 && beta >= 0.0 && (alpha + beta - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidConfig(format!(
            "need alpha, beta >= 0 with alpha + beta = 1, got {alpha}, {beta}"
        )));
    }
    // the degenerate combinations reuse the operand itself so the identity
    // cases compare equal quantities
    let combo = if beta == 0.0 || f == g {
        f.clone()
    } else if alpha == 0.0 {
        g.clone()
    } else {
        VectorFunctionSpec::lin_comb(alpha, f, beta, g)?
    };
    let lhs = modular(&combo, theta, m, cfg)?;
    let term = |w: f64, h: &VectorFunctionSpec| -> Result<ExtValue<T>> {
        if w == 0.0 {
            return Ok(ExtValue::Finite(T::zero()));
        }
        Ok(modular(h, theta, m, cfg)?.map(|v| T::of(w) * v))
    };
    let rhs = match (term(alpha, f)?, term(beta, g)?) {
        (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
        (ExtValue::Indeterminate, _) | (_, ExtValue::Indeterminate) => ExtValue::Indeterminate,
        _ => ExtValue::Infinite,
    };
    let slack = T::of(4.0) * cfg.tol;
    let pass = match (lhs, rhs) {
        (ExtValue::Indeterminate, _) | (_, ExtValue::Indeterminate) => {
            return Err(Error::Indeterminate(
                "a side of the convexity inequality is indeterminate".into(),
            ))
        }
        (_, ExtValue::Infinite) => true,
        (ExtValue::Infinite, _) => false,
        (ExtValue::Finite(l), ExtValue::Finite(r)) => l <= r + slack,
    };
    Ok(ConvexityVerdict {
        lhs,
        rhs,
        slack,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FunctionSpec;

    fn scalar(f: FunctionSpec) -> VectorFunctionSpec {
        VectorFunctionSpec::scalar(f)
    }

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::with_tol(1e-10)
    }

    #[test]
    fn modular_examples() {
        let m = WeightedMeasure::unit();
        let sq = YoungFunctionSpec::square();
        let r = modular(&scalar(FunctionSpec::identity()), &sq, &m, &cfg()).unwrap();
        assert!((r.to_scalar() - 1.0 / 3.0).abs() < 1e-10);
        for th in [sq.clone(), YoungFunctionSpec::exponential()] {
            assert_eq!(
                modular(&scalar(FunctionSpec::zero()), &th, &m, &cfg()).unwrap(),
                ExtValue::Finite(0.0)
            );
        }
        let half = scalar(FunctionSpec::indicator(0.0, 0.5).unwrap());
        let r = modular(&half, &YoungFunctionSpec::exponential(), &m, &cfg()).unwrap();
        assert!((r.to_scalar() - (std::f64::consts::E - 2.0) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_modular_is_infinite() {
        let m = WeightedMeasure::unit();
        let f = scalar(FunctionSpec::monomial(-0.5).unwrap());
        let r = modular(&f, &YoungFunctionSpec::square(), &m, &cfg()).unwrap();
        assert_eq!(r, ExtValue::Infinite);
        let capped = YoungFunctionSpec::capped_power(2.0, 0.5).unwrap();
        let r = modular(&scalar(FunctionSpec::constant(1.0)), &capped, &m, &cfg()).unwrap();
        assert_eq!(r, ExtValue::Infinite);
    }

    #[test]
    fn membership_examples() {
        let m = WeightedMeasure::unit();
        let c = QuadratureConfig::with_tol(1e-8);
        let f = scalar(FunctionSpec::monomial(-0.5).unwrap());
        let abs = YoungFunctionSpec::power(1.0).unwrap();
        let rep = h_orlicz_membership(&f, &abs, &m, None, &c).unwrap();
        assert_eq!(rep.verdict, MembershipVerdict::MemberAllK);
        for (k, v) in rep.k_grid.iter().zip(&rep.modulars) {
            let v = v.to_scalar();
            assert!((v - 2.0 * k).abs() <= 1e-7 * (1.0 + 2.0 * k), "k={k} v={v}");
        }
        assert!(rep.monotonicity_violations.is_empty());
        assert_eq!(rep.vanishes_at_zero, Some(true));

        let rep = h_orlicz_membership(&f, &YoungFunctionSpec::square(), &m, None, &c).unwrap();
        assert_eq!(rep.verdict, MembershipVerdict::NotMember);

        let zero = scalar(FunctionSpec::zero());
        let rep =
            h_orlicz_membership(&zero, &YoungFunctionSpec::exponential(), &m, None, &c).unwrap();
        assert_eq!(rep.verdict, MembershipVerdict::MemberAllK);
        assert!(rep.modulars.iter().all(|v| *v == ExtValue::Finite(0.0)));

        // exponential blows up for large k only
        let one = scalar(FunctionSpec::constant(1.0));
        let rep =
            h_orlicz_membership(&one, &YoungFunctionSpec::exponential(), &m, None, &c).unwrap();
        assert_eq!(rep.verdict, MembershipVerdict::MemberSomeK);
    }

    #[test]
    fn convexity_examples() {
        let m = WeightedMeasure::unit();
        let sq = YoungFunctionSpec::square();
        let f = scalar(FunctionSpec::identity());
        let g = scalar(FunctionSpec::lin_comb(
            1.0,
            &FunctionSpec::constant(1.0),
            -1.0,
            &FunctionSpec::identity(),
        ));
        let v = modular_convexity_check(&f, &g, 0.5, 0.5, &sq, &m, &cfg()).unwrap();
        assert!(v.pass);
        assert!((v.lhs.to_scalar() - 0.25).abs() < 1e-10);
        assert!((v.rhs.to_scalar() - 1.0 / 3.0).abs() < 1e-10);
        let id = modular_convexity_check(&f, &g, 1.0, 0.0, &sq, &m, &cfg()).unwrap();
        assert_eq!(id.lhs, id.rhs);
        let same = modular_convexity_check(&f, &f, 0.3, 0.7, &sq, &m, &cfg()).unwrap();
        assert!(same.pass);
        assert!(modular_convexity_check(&f, &g, 0.6, 0.6, &sq, &m, &cfg()).is_err());
    }

    #[test]
    fn ext_value_json() {
        let v: Vec<ExtValue<f64>> = vec![
            ExtValue::Finite(0.5),
            ExtValue::Infinite,
            ExtValue::Indeterminate,
        ];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[0.5,"inf","indeterminate"]"#);
        assert_eq!(serde_json::from_str::<Vec<ExtValue<f64>>>(&s).unwrap(), v);
        assert!(serde_json::from_str::<ExtValue<f64>>(r#""nan""#).is_err());
    }
}
