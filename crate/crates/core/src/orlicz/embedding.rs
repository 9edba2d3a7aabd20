use serde::{Deserialize, Serialize};

use super::luxemburg::luxemburg_norm;
use super::modular::ExtValue;
use super::theta::YoungFunctionSpec;
use crate::catalog::VectorFunctionSpec;
use crate::error::{Error, Result};
use crate::partition::WeightedMeasure;
use crate::quadrature::{
    integrate, sup_riemann_norm_with, Backend, QuadratureConfig, Status, SupNormConfig,
};
use crate::Scalar;

/// The four norms compared by the embedding chain
/// `L^theta -> H^theta -> L^1` and `H^theta -> HK`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct EmbeddingReport<T> {
    pub lux_hk: ExtValue<T>,
    pub lux_lebesgue: ExtValue<T>,
    /// `int ||f|| dmu`.
    pub l1_norm: ExtValue<T>,
    /// Lower-bound estimate of the sup of Riemann sums.
    pub sup_riemann: ExtValue<T>,
    /// `lux_hk <= lux_lebesgue + 4 tol`; `None` unless both are decided.
    pub hk_below_lebesgue: Option<bool>,
    /// `|lux_hk - lux_lebesgue| <= 4 tol` when both are finite.
    pub backends_agree: Option<bool>,
    /// `l1_norm` and `sup_riemann` finite whenever `lux_hk` is finite.
    pub finite_when_in_space: Option<bool>,
    pub slack: T,
}

pub fn embedding_report<T: Scalar>(
    f: &VectorFunctionSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    sup: &SupNormConfig,
) -> Result<EmbeddingReport<T>> {
    let lux = |backend| ExtValue::from_result(luxemburg_norm(f, theta, m, cfg, backend));
    let (lux_hk, lux_lebesgue) = rayon::join(|| lux(Backend::Hk), || lux(Backend::Lebesgue));
    let (lux_hk, lux_lebesgue) = (lux_hk?, lux_lebesgue?);

    let l1 = integrate(f, m, cfg, Backend::Lebesgue)?;
    let l1_norm = match l1.status {
        Status::Converged => {
            ExtValue::Finite(l1.abs_integral.expect("lebesgue backend reports it"))
        }
        Status::Diverged => ExtValue::Infinite,
        Status::BudgetExhausted => ExtValue::Indeterminate,
    };
    let sup_riemann = match sup_riemann_norm_with(f, m, sup) {
        Ok(e) if e.value.is_finite() => ExtValue::Finite(e.value),
        Ok(_) => ExtValue::Infinite,
        Err(Error::NonFinite(_)) => ExtValue::Indeterminate,
        Err(e) => return Err(e),
    };

    let slack = T::of(4.0) * cfg.tol;
    let hk_below_lebesgue = match (lux_hk, lux_lebesgue) {
        (ExtValue::Finite(h), ExtValue::Finite(l)) => Some(h <= l + slack),
        (_, ExtValue::Infinite) if !lux_hk.is_indeterminate() => Some(true),
        (ExtValue::Infinite, ExtValue::Finite(_)) => Some(false),
        _ => None,
    };
    let backends_agree = match (lux_hk, lux_lebesgue) {
        (ExtValue::Finite(h), ExtValue::Finite(l)) => Some((h - l).abs() <= slack),
        _ => None,
    };
    let finite_when_in_space = match lux_hk {
        ExtValue::Finite(_) if m.total().is_finite() => {
            if l1_norm.is_indeterminate() || sup_riemann.is_indeterminate() {
                None
            } else {
                Some(l1_norm.is_finite() && sup_riemann.is_finite())
            }
        }
        _ => None,
    };
    Ok(EmbeddingReport {
        lux_hk,
        lux_lebesgue,
        l1_norm,
        sup_riemann,
        hk_below_lebesgue,
        backends_agree,
        finite_when_in_space,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FunctionSpec;

    #[test]
    fn embedding_examples() {
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-9);
        let sup = SupNormConfig::default();
        let sq = YoungFunctionSpec::square();
        let r = embedding_report(
            &VectorFunctionSpec::scalar(FunctionSpec::identity()),
            &sq,
            &m,
            &cfg,
            &sup,
        )
        .unwrap();
        let s3 = 1.0 / 3f64.sqrt();
        assert!((r.lux_hk.to_scalar() - s3).abs() < 4e-9);
        assert!((r.lux_lebesgue.to_scalar() - s3).abs() < 4e-9);
        assert!((r.l1_norm.to_scalar() - 0.5).abs() < 1e-9);
        assert!((r.sup_riemann.to_scalar() - 1.0).abs() < 1e-12);
        assert_eq!(r.hk_below_lebesgue, Some(true));
        assert_eq!(r.backends_agree, Some(true));
        assert_eq!(r.finite_when_in_space, Some(true));

        let z = embedding_report(
            &VectorFunctionSpec::scalar(FunctionSpec::zero()),
            &sq,
            &m,
            &cfg,
            &sup,
        )
        .unwrap();
        for v in [z.lux_hk, z.lux_lebesgue, z.l1_norm, z.sup_riemann] {
            assert_eq!(v, ExtValue::Finite(0.0));
        }

        let half = VectorFunctionSpec::scalar(FunctionSpec::indicator(0.0, 0.5).unwrap());
        let h = embedding_report(&half, &sq, &m, &cfg, &sup).unwrap();
        assert!((h.lux_hk.to_scalar() - 0.5f64.sqrt()).abs() < 4e-9);
        assert!((h.l1_norm.to_scalar() - 0.5).abs() < 1e-9);
    }
}
