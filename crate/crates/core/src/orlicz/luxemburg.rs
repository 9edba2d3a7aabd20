use serde::Serialize;

use super::modular::{modular_scaled, ExtValue};
use super::theta::YoungFunctionSpec;
use crate::catalog::VectorFunctionSpec;
use crate::error::{Error, Result};
use crate::partition::WeightedMeasure;
use crate::quadrature::{Backend, QuadratureConfig};
use crate::Scalar;

/// Exponent of the bracket bounds `[2^-64, 2^64]`.
pub const K_LIMIT_EXP: i32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LuxemburgResult<T> {
    /// `inf { k > 0 : rho(f / k) <= 1 }`, reported as the upper end of the
    /// final bracket so that `rho(f / value) <= 1` was observed.
    pub value: T,
    pub bracket: [T; 2],
    pub modular_evaluations: usize,
    pub backend: Backend,
}

/// Luxemburg-type norm `inf { k > 0 : rho(f / k) <= 1 }`.
///
/// `k` is bracketed by doubling or halving from 1 and then bisected on the
/// geometric mean down to relative width `1e-9`. Fails with `NotInSpace` when
/// no `k <= 2^64` works and with `Indeterminate` when any modular evaluation
/// exhausts its budget.
pub fn luxemburg_norm<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<T> {
    luxemburg_norm_detailed(f, theta, m, cfg, backend).map(|r| r.value)
}

pub fn luxemburg_norm_detailed<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<LuxemburgResult<T>> {
    theta.validate_on(m.a().as_f64(), m.b().as_f64())?;
    cfg.validate(m.a(), m.b())?;
    let rel = T::of(1e-9).max(T::epsilon() * T::of(4.0));
    let mut evaluations = 0;
    // `true` when rho(f / k) <= 1
    let mut fits = |k: T| -> Result<bool> {
        evaluations += 1;
        match modular_scaled(f, k.recip(), theta, m, cfg, backend)? {
            ExtValue::Finite(v) => Ok(v <= T::one()),
            ExtValue::Infinite => Ok(false),
            ExtValue::Indeterminate => Err(Error::Indeterminate(format!(
                "modular of f / {k} exhausted the quadrature budget"
            ))),
        }
    };
    let k_min = T::of(2f64.powi(-K_LIMIT_EXP));
    let k_max = T::of(2f64.powi(K_LIMIT_EXP));
    let done = |value: T, bracket: [T; 2], evaluations: usize| LuxemburgResult {
        value,
        bracket,
        modular_evaluations: evaluations,
        backend,
    };

    if fits(k_min)? {
        return Ok(done(T::zero(), [T::zero(), k_min], evaluations));
    }
    let two = T::of(2.0);
    let (mut lo, mut hi);
    if fits(T::one())? {
        hi = T::one();
        lo = hi / two;
        while fits(lo)? {
            hi = lo;
            lo = lo / two;
        }
    } else {
        lo = T::one();
        hi = two;
        loop {
            if hi > k_max {
                return Err(Error::NotInSpace);
            }
            if fits(hi)? {
                break;
            }
            lo = hi;
            hi = hi * two;
        }
    }
    while hi / lo - T::one() > rel {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(done(hi, [lo, hi], evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FunctionSpec;
    use crate::orlicz::modular::modular;

    fn scalar(f: FunctionSpec) -> VectorFunctionSpec {
        VectorFunctionSpec::scalar(f)
    }

    #[test]
    fn closed_forms() {
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-10);
        let sq = YoungFunctionSpec::square();
        for backend in [Backend::Hk, Backend::Lebesgue] {
            let n =
                luxemburg_norm(&scalar(FunctionSpec::identity()), &sq, &m, &cfg, backend).unwrap();
            assert!((n - 1.0 / 3f64.sqrt()).abs() < 1e-8, "{backend:?}: {n}");
        }
        let half = scalar(FunctionSpec::indicator(0.0, 0.5).unwrap());
        let n = luxemburg_norm(&half, &sq, &m, &cfg, Backend::Hk).unwrap();
        assert!((n - 0.5f64.sqrt()).abs() < 1e-8);
        for p in [1.0, 2.0, 3.0] {
            for c in [0.5, 1.0, 2.0] {
                let th = YoungFunctionSpec::power(p).unwrap();
                let n = luxemburg_norm(
                    &scalar(FunctionSpec::constant(c)),
                    &th,
                    &m,
                    &cfg,
                    Backend::Hk,
                )
                .unwrap();
                assert!((n - c).abs() < 1e-8 * c, "p={p} c={c}: {n}");
            }
        }
        let zero =
            luxemburg_norm(&scalar(FunctionSpec::zero()), &sq, &m, &cfg, Backend::Hk).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn unit_ball_consistency_and_scaling() {
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-10);
        let th = YoungFunctionSpec::power(3.0).unwrap();
        let f = scalar(FunctionSpec::trig(1.5, 3.0, 0.2).unwrap());
        let n = luxemburg_norm(&f, &th, &m, &cfg, Backend::Hk).unwrap();
        let rho = modular(&f.scaled(1.0 / n), &th, &m, &cfg)
            .unwrap()
            .to_scalar();
        assert!(rho <= 1.0 + 1e-6 && rho > 1.0 - 1e-6, "{rho}");
        for a in [-2.0, 0.25, 7.0] {
            let na = luxemburg_norm(&f.scaled(a), &th, &m, &cfg, Backend::Hk).unwrap();
            assert!((na / (a.abs() * n) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn not_in_space() {
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-8);
        let f = scalar(FunctionSpec::monomial(-0.5).unwrap());
        let r = luxemburg_norm(&f, &YoungFunctionSpec::square(), &m, &cfg, Backend::Hk);
        assert_eq!(r, Err(Error::NotInSpace));
    }

    #[test]
    fn exponential_norm_of_tall_indicator() {
        // rho(f / k) = (e^{n/k} - n/k - 1) a = 1 has no closed form; check the root
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-10);
        let n = 5.0_f64;
        let a = 1.0 / (n * (n.exp() - n - 1.0));
        let f = scalar(FunctionSpec::indicator(0.0, a).unwrap().scaled(n));
        let k = luxemburg_norm(
            &f,
            &YoungFunctionSpec::exponential(),
            &m,
            &cfg,
            Backend::Lebesgue,
        )
        .unwrap();
        let r = n / k;
        assert!(((r.exp() - r - 1.0) * a - 1.0).abs() < 1e-7);
        assert!(k > 0.5 && k < 1.0);
    }
}
