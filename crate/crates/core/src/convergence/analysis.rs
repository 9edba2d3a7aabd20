//! Modular and norm distances of a sequence to its limit, per backend.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify, Classification, ClassifierConfig, Verdict};
use crate::catalog::{SequenceSpec, VectorFunctionSpec};
use crate::error::{Error, Result};
use crate::orlicz::{luxemburg_norm, modular_scaled, ExtValue, YoungFunctionSpec};
use crate::partition::WeightedMeasure;
use crate::quadrature::{Backend, QuadratureConfig};
use crate::Scalar;

/// `rho(k (f_n - f))` over the k grid, one backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct ModularAnalysis<T> {
    pub backend: Backend,
    pub n: Vec<usize>,
    pub k_grid: Vec<f64>,
    /// `values[i][j]` is the distance at `k_grid[i]`, `n[j]`.
    pub values: Vec<Vec<ExtValue<T>>>,
    pub per_k: Vec<Classification>,
    pub verdict: Verdict,
    pub best_k: f64,
}

impl<T: Scalar> ModularAnalysis<T> {
    pub fn best_index(&self) -> usize {
        self.k_grid
            .iter()
            .position(|k| *k == self.best_k)
            .expect("best_k is on the grid")
    }

    /// The distances at `best_k`.
    pub fn best_row(&self) -> &[ExtValue<T>] {
        &self.values[self.best_index()]
    }
}

/// `||f_n - f||` (Luxemburg), one backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct NormAnalysis<T> {
    pub backend: Backend,
    pub n: Vec<usize>,
    pub values: Vec<ExtValue<T>>,
    pub classification: Classification,
    pub verdict: Verdict,
}

fn check_range(seq: &SequenceSpec) -> Result<Vec<usize>> {
    seq.validate()?;
    let ns: Vec<usize> = seq.indices().collect();
    if seq.n_max < 8 {
        return Err(Error::InvalidConfig(format!(
            "n_max must be at least 8, got {}",
            seq.n_max
        )));
    }
    Ok(ns)
}

fn check_grid(k_grid: &[f64]) -> Result<()> {
    if k_grid.is_empty() || k_grid.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
        return Err(Error::InvalidConfig(
            "k grid must be nonempty, positive and finite".into(),
        ));
    }
    if k_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "k grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn distances(seq: &SequenceSpec, ns: &[usize]) -> Result<Vec<VectorFunctionSpec>> {
    ns.iter().map(|n| seq.distance_term(*n)).collect()
}

/// Among converging grid points: `k = 1` if present, else the one nearest
/// to 1 in `|ln k|`, ties to the smaller `k`. Without any, the `k` with the
/// smallest tail maximum, same tie rules.
pub fn select_best_k(k_grid: &[f64], per_k: &[Classification]) -> f64 {
    let closeness = |i: usize| (k_grid[i].ln().abs(), k_grid[i]);
    let pick = |idx: Vec<usize>| {
        idx.into_iter().min_by(|&a, &b| {
            closeness(a)
                .partial_cmp(&closeness(b))
                .expect("finite grid")
        })
    };
    let converging: Vec<usize> = (0..k_grid.len())
        .filter(|&i| per_k[i].verdict == Verdict::Converges)
        .collect();
    if let Some(i) = pick(converging) {
        return k_grid[i];
    }
    let key = |i: usize| per_k[i].tail_max.unwrap_or(f64::INFINITY);
    let lowest = (0..k_grid.len()).map(key).fold(f64::INFINITY, f64::min);
    let best: Vec<usize> = (0..k_grid.len()).filter(|&i| key(i) == lowest).collect();
    pick(best).map_or(k_grid[0], |i| k_grid[i])
}

/// Converges if some `k` converges. Does not converge if every `k` whose
/// tail rises above `resolution` is certified not to; rows entirely within
/// the noise carry no information either way.
pub fn aggregate(per_k: &[Classification], resolution: f64) -> Verdict {
    if per_k.iter().any(|c| c.verdict == Verdict::Converges) {
        return Verdict::Converges;
    }
    let resolved: Vec<_> = per_k
        .iter()
        .filter(|c| c.tail_max.is_none_or(|m| m > resolution))
        .collect();
    if !resolved.is_empty()
        && resolved
            .iter()
            .all(|c| c.verdict == Verdict::DoesNotConverge)
    {
        Verdict::DoesNotConverge
    } else {
        Verdict::Indeterminate
    }
}

pub fn modular_convergence<T: Scalar>(
    seq: &SequenceSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    k_grid: &[f64],
    cfg: &QuadratureConfig<T>,
    backend: Backend,
    classifier: &ClassifierConfig,
) -> Result<ModularAnalysis<T>> {
    classifier.validate()?;
    check_grid(k_grid)?;
    let ns = check_range(seq)?;
    let fs = distances(seq, &ns)?;
    let flat = (0..k_grid.len() * ns.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / ns.len(), idx % ns.len());
            modular_scaled(&fs[j], T::of(k_grid[i]), theta, m, cfg, backend)
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Vec<ExtValue<T>>> = flat.chunks(ns.len()).map(<[_]>::to_vec).collect();
    // modular values below the absolute quadrature tolerance are noise
    let local = ClassifierConfig {
        zero_floor: classifier.zero_floor.max(cfg.tol.as_f64()),
        ..*classifier
    };
    let per_k: Vec<Classification> = values
        .iter()
        .map(|row| classify(&ns, row, &local))
        .collect();
    Ok(ModularAnalysis {
        backend,
        best_k: select_best_k(k_grid, &per_k),
        verdict: aggregate(&per_k, local.resolution()),
        n: ns,
        k_grid: k_grid.to_vec(),
        values,
        per_k,
    })
}

pub fn norm_convergence<T: Scalar>(
    seq: &SequenceSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
    classifier: &ClassifierConfig,
) -> Result<NormAnalysis<T>> {
    classifier.validate()?;
    let ns = check_range(seq)?;
    let fs = distances(seq, &ns)?;
    let values = fs
        .par_iter()
        .map(|f| match luxemburg_norm(f, theta, m, cfg, backend) {
            Ok(v) => Ok(ExtValue::Finite(v)),
            // a distance outside the space leaves the question open
            Err(Error::NotInSpace | Error::Indeterminate(_)) => Ok(ExtValue::Indeterminate),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let classification = classify(&ns, &values, classifier);
    Ok(NormAnalysis {
        backend,
        verdict: classification.verdict,
        n: ns,
        values,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdicts {
    pub modular_l: Verdict,
    pub modular_h: Verdict,
    pub norm_l: Verdict,
    pub norm_h: Verdict,
}

/// All four analyses of one sequence. The L-sense columns use the
/// Lebesgue-style backend, the H-sense columns the gauge backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct ConvergenceReport<T> {
    pub theta: YoungFunctionSpec,
    pub n_max: usize,
    pub tol: T,
    pub classifier: ClassifierConfig,
    pub modular_l: ModularAnalysis<T>,
    pub modular_h: ModularAnalysis<T>,
    pub norm_l: NormAnalysis<T>,
    pub norm_h: NormAnalysis<T>,
    /// `best_k` of the L-sense modular when it converges, else of the
    /// H-sense one, else the L-sense fallback.
    pub best_k: f64,
    pub verdicts: Verdicts,
    pub trace: Vec<String>,
}

pub fn convergence_report<T: Scalar>(
    seq: &SequenceSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    k_grid: &[f64],
    cfg: &QuadratureConfig<T>,
    classifier: &ClassifierConfig,
) -> Result<ConvergenceReport<T>> {
    let modular = |b| modular_convergence(seq, theta, m, k_grid, cfg, b, classifier);
    let norm = |b| norm_convergence(seq, theta, m, cfg, b, classifier);
    let ((modular_l, modular_h), (norm_l, norm_h)) = rayon::join(
        || rayon::join(|| modular(Backend::Lebesgue), || modular(Backend::Hk)),
        || rayon::join(|| norm(Backend::Lebesgue), || norm(Backend::Hk)),
    );
    let (modular_l, modular_h, norm_l, norm_h) = (modular_l?, modular_h?, norm_l?, norm_h?);
    let best_k =
        if modular_l.verdict == Verdict::Converges || modular_h.verdict != Verdict::Converges {
            modular_l.best_k
        } else {
            modular_h.best_k
        };
    let verdicts = Verdicts {
        modular_l: modular_l.verdict,
        modular_h: modular_h.verdict,
        norm_l: norm_l.verdict,
        norm_h: norm_h.verdict,
    };
    let mut trace = Vec::new();
    for (name, a) in [("modular_L", &modular_l), ("modular_H", &modular_h)] {
        let i = a.best_index();
        trace.push(format!(
            "{name}: {:?} (best k = {}: {})",
            a.verdict, a.best_k, a.per_k[i].reason
        ));
    }
    for (name, a) in [("norm_L", &norm_l), ("norm_H", &norm_h)] {
        trace.push(format!(
            "{name}: {:?} ({})",
            a.verdict, a.classification.reason
        ));
    }
    Ok(ConvergenceReport {
        theta: theta.clone(),
        n_max: seq.n_max,
        tol: cfg.tol,
        classifier: *classifier,
        modular_l,
        modular_h,
        norm_l,
        norm_h,
        best_k,
        verdicts,
        trace,
    })
}

pub const CSV_HEADER: &str = "n,k,modular_L,modular_H,norm_L,norm_H";

fn cell<T: Scalar>(v: ExtValue<T>) -> String {
    match v {
        ExtValue::Finite(x) => format!("{:e}", x.as_f64()),
        ExtValue::Infinite => "inf".into(),
        ExtValue::Indeterminate => "indeterminate".into(),
    }
}

impl<T: Scalar> ConvergenceReport<T> {
    /// One row per `(n, k)` on the full grid, `k` ascending within each `n`;
    /// the norm columns do not depend on `k` and repeat. The full grid keeps
    /// every verdict re-derivable from the table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for (j, n) in self.modular_l.n.iter().enumerate() {
            for (i, k) in self.modular_l.k_grid.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{n},{k:e},{},{},{},{}",
                    cell(self.modular_l.values[i][j]),
                    cell(self.modular_h.values[i][j]),
                    cell(self.norm_l.values[j]),
                    cell(self.norm_h.values[j]),
                );
            }
        }
        out
    }

    /// Per-n distances at the report's `best_k`.
    pub fn best_k_rows(&self) -> Vec<(usize, [ExtValue<T>; 4])> {
        let i = self
            .modular_l
            .k_grid
            .iter()
            .position(|k| *k == self.best_k)
            .expect("best_k is on the grid");
        self.modular_l
            .n
            .iter()
            .enumerate()
            .map(|(j, n)| {
                (
                    *n,
                    [
                        self.modular_l.values[i][j],
                        self.modular_h.values[i][j],
                        self.norm_l.values[j],
                        self.norm_h.values[j],
                    ],
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn t_over_n() -> SequenceSpec {
        let gen = json!({
            "kind": "combination",
            "params": {"coefficients": [{"expr": "1/n"}]},
            "children": [{"kind": "monomial", "params": {"alpha": 1.0}}]
        });
        serde_json::from_value(json!({
            "generator": gen,
            "limit": {"kind": "constant", "params": {"c": 0.0}},
            "n_max": 12
        }))
        .unwrap()
    }

    #[test]
    fn best_k_rules() {
        let conv = |v| Classification {
            verdict: v,
            tail_from: 1,
            tail_max: Some(1.0),
            tail_min: Some(1.0),
            slope: Some(0.0),
            reason: String::new(),
        };
        let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
        let mut per_k: Vec<_> = grid.iter().map(|_| conv(Verdict::Converges)).collect();
        assert_eq!(select_best_k(&grid, &per_k), 1.0);
        per_k[2] = conv(Verdict::DoesNotConverge);
        assert_eq!(select_best_k(&grid, &per_k), 0.5);
        per_k[1] = conv(Verdict::DoesNotConverge);
        assert_eq!(select_best_k(&grid, &per_k), 2.0);
    }

    #[test]
    fn scaled_identity_sequence() {
        let seq = t_over_n();
        let m = WeightedMeasure::unit();
        let cfg = QuadratureConfig::with_tol(1e-10);
        let grid = [0.5, 1.0, 2.0];
        let r = convergence_report(
            &seq,
            &YoungFunctionSpec::square(),
            &m,
            &grid,
            &cfg,
            &ClassifierConfig::default(),
        )
        .unwrap();
        assert_eq!(
            r.verdicts,
            Verdicts {
                modular_l: Verdict::Converges,
                modular_h: Verdict::Converges,
                norm_l: Verdict::Converges,
                norm_h: Verdict::Converges,
            }
        );
        assert_eq!(r.best_k, 1.0);
        for (n, [ml, mh, nl, nh]) in r.best_k_rows() {
            let n = n as f64;
            let rho = 1.0 / (3.0 * n * n);
            assert!((ml.to_scalar() - rho).abs() < 4e-10);
            assert!((mh.to_scalar() - rho).abs() < 4e-10);
            let norm = 1.0 / (n * 3f64.sqrt());
            assert!((nl.to_scalar() - norm).abs() < 1e-8 && (nh.to_scalar() - norm).abs() < 1e-8);
        }
        let csv = r.to_csv();
        assert!(csv.starts_with("n,k,modular_L,modular_H,norm_L,norm_H\n1,5e-1,"));
        assert_eq!(csv.lines().count(), 1 + 12 * 3);
    }

    #[test]
    fn short_sequences_are_rejected() {
        let mut seq = t_over_n();
        seq.n_max = 7;
        let m = WeightedMeasure::<f64>::unit();
        let r = norm_convergence(
            &seq,
            &YoungFunctionSpec::square(),
            &m,
            &QuadratureConfig::default(),
            Backend::Hk,
            &ClassifierConfig::default(),
        );
        assert!(r.is_err());
    }
}
