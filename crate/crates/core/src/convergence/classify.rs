//! Finite-horizon decisions on whether a distance sequence tends to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orlicz::ExtValue;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    DoesNotConverge,
    Indeterminate,
}

/// Thresholds of the classifier. Everything is judged on the last half of
/// the indices (the tail), using the least-squares slope `s` of
/// `ln d_n` against `ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// Tail values below this count as converging when the trend falls.
    pub eps_conv: f64,
    /// Absolute error level of the distances.
    pub zero_floor: f64,
    /// `s <= decisive_decay` is power-law decay: converges whatever the level.
    pub decisive_decay: f64,
    /// Slope a small tail must fall at to count as converging.
    pub small_tail_decay: f64,
    /// `s >= decisive_growth` certifies non-convergence.
    pub decisive_growth: f64,
    /// A resolved tail certifies non-convergence unless it falls faster
    /// than this slope.
    pub flat_slope: f64,
    /// Values above `certificate_factor * zero_floor` are resolved: their
    /// relative error is small enough for a slope to mean something.
    pub certificate_factor: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            eps_conv: 1e-3,
            zero_floor: 1e-15,
            decisive_decay: -0.25,
            small_tail_decay: -0.05,
            decisive_growth: 0.25,
            flat_slope: -0.01,
            certificate_factor: 1000.0,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eps_conv > 0.0
            && self.zero_floor >= 0.0
            && self.zero_floor < self.eps_conv
            && self.decisive_decay < self.small_tail_decay
            && self.small_tail_decay <= 0.0
            && self.flat_slope <= 0.0
            && self.decisive_growth > 0.0
            && self.certificate_factor >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "inconsistent classifier thresholds: {self:?}"
            )))
        }
    }
}

/// The decision and the numbers it was made from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// First index of the tail.
    pub tail_from: usize,
    pub tail_max: Option<f64>,
    pub tail_min: Option<f64>,
    pub slope: Option<f64>,
    pub reason: String,
}

/// Least-squares slope of `ln y` against `ln x`. Values below `floor` are
/// clamped to it.
pub fn log_log_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys
        .iter()
        .map(|y| y.max(floor.max(f64::MIN_POSITIVE)).ln())
        .collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl ClassifierConfig {
    /// The level below which a distance is not resolved.
    pub fn resolution(&self) -> f64 {
        self.certificate_factor * self.zero_floor
    }
}

/// Classifies `d_n -> 0` from the values at indices `ns` (ascending).
/// Unresolved values are clamped to the resolution before the slope fit.
pub fn classify<T: Scalar>(
    ns: &[usize],
    values: &[ExtValue<T>],
    cfg: &ClassifierConfig,
) -> Classification {
    assert_eq!(ns.len(), values.len(), "one value per index");
    let start = ns.len() / 2;
    let tail_from = ns.get(start).copied().unwrap_or(0);
    let done = |verdict, tail_max, tail_min, slope, reason: String| Classification {
        verdict,
        tail_from,
        tail_max,
        tail_min,
        slope,
        reason,
    };
    let tail = &values[start..];
    if tail.is_empty() {
        return done(
            Verdict::Indeterminate,
            None,
            None,
            None,
            "no indices".into(),
        );
    }
    if let Some(i) = tail.iter().position(|v| v.is_indeterminate()) {
        return done(
            Verdict::Indeterminate,
            None,
            None,
            None,
            format!("value at n = {} is indeterminate", ns[start + i]),
        );
    }
    if let Some(i) = tail.iter().position(|v| matches!(v, ExtValue::Infinite)) {
        return done(
            Verdict::DoesNotConverge,
            Some(f64::INFINITY),
            None,
            None,
            format!("value at n = {} is infinite", ns[start + i]),
        );
    }
    let ys: Vec<f64> = tail.iter().map(|v| v.to_scalar().as_f64().abs()).collect();
    let xs: Vec<f64> = ns[start..].iter().map(|n| *n as f64).collect();
    let max = ys.iter().copied().fold(0.0, f64::max);
    let min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return done(
            Verdict::Converges,
            Some(max),
            Some(min),
            None,
            "tail is identically zero".into(),
        );
    }
    let resolved = cfg.resolution();
    if max <= resolved {
        return done(
            Verdict::Indeterminate,
            Some(max),
            Some(min),
            None,
            format!("tail max {max:e} is within the noise level {resolved:e}"),
        );
    }
    let slope = log_log_slope(&xs, &ys, resolved);
    let Some(s) = slope else {
        return done(
            Verdict::Indeterminate,
            Some(max),
            Some(min),
            None,
            "tail too short for a trend".into(),
        );
    };
    let (verdict, reason) = if s <= cfg.decisive_decay {
        (Verdict::Converges, format!("power-law decay, slope {s:.3}"))
    } else if max < cfg.eps_conv && min > resolved && s <= cfg.small_tail_decay {
        (
            Verdict::Converges,
            format!("tail max {max:e} below eps_conv and falling, slope {s:.3}"),
        )
    } else if s >= cfg.decisive_growth {
        (
            Verdict::DoesNotConverge,
            format!("tail grows, slope {s:.3}"),
        )
    } else if min > resolved && s >= cfg.flat_slope {
        (
            Verdict::DoesNotConverge,
            format!("tail bounded below by {min:e} and not falling, slope {s:.3}"),
        )
    } else {
        (
            Verdict::Indeterminate,
            format!("no certificate either way, slope {s:.3}, tail max {max:e}"),
        )
    };
    done(verdict, Some(max), Some(min), Some(s), reason)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: impl Fn(f64) -> f64, n_max: usize) -> Classification {
        let ns: Vec<usize> = (1..=n_max).collect();
        let vs: Vec<ExtValue<f64>> = ns.iter().map(|n| ExtValue::Finite(f(*n as f64))).collect();
        classify(&ns, &vs, &ClassifierConfig::default())
    }

    #[test]
    fn decisions() {
        assert_eq!(run(|n| 1.0 / n, 20).verdict, Verdict::Converges);
        assert_eq!(run(|n| 1.0 / (3.0 * n * n), 20).verdict, Verdict::Converges);
        assert_eq!(run(|_| 0.0, 20).verdict, Verdict::Converges);
        assert_eq!(run(|n| (-n).exp(), 20).verdict, Verdict::Converges);
        assert_eq!(run(|_| 0.7, 20).verdict, Verdict::DoesNotConverge);
        assert_eq!(run(|n| n.exp(), 20).verdict, Verdict::DoesNotConverge);
        assert_eq!(run(|n| 1.0 - 1.0 / n, 20).verdict, Verdict::DoesNotConverge);
        // a small constant never reaches zero either
        assert_eq!(run(|_| 1e-6, 20).verdict, Verdict::DoesNotConverge);
        // below round-off nothing can be said
        assert_eq!(run(|_| 1e-17, 20).verdict, Verdict::Indeterminate);
        assert_eq!(run(|n| 1e-16 / n, 20).verdict, Verdict::Indeterminate);
        // slow decay at a large level
        assert_eq!(run(|n| n.powf(-0.1), 20).verdict, Verdict::Indeterminate);
        let r = run(|n| 1.0 / n, 20);
        assert_eq!(r.tail_from, 11);
        assert!((r.slope.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn extended_values() {
        let ns = [1, 2, 3, 4];
        let inf = [
            ExtValue::Finite(1.0),
            ExtValue::Finite(1.0),
            ExtValue::Infinite,
            ExtValue::Finite(0.0),
        ];
        assert_eq!(
            classify(&ns, &inf, &ClassifierConfig::default()).verdict,
            Verdict::DoesNotConverge
        );
        let ind = [
            ExtValue::Finite(1.0),
            ExtValue::Finite(1.0),
            ExtValue::Finite(0.0),
            ExtValue::Indeterminate,
        ];
        assert_eq!(
            classify(&ns, &ind, &ClassifierConfig::default()).verdict,
            Verdict::Indeterminate
        );
    }

    #[test]
    fn slope_fit() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        assert!((log_log_slope(&xs, &ys, 0.0).unwrap() + 1.5).abs() < 1e-12);
        assert_eq!(log_log_slope(&[2.0], &[1.0], 0.0), None);
    }
}
