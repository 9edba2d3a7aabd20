//! The sup-of-Riemann-sums norm and the Alexiewicz norm.

use serde::{Deserialize, Serialize};

use super::integrator::{integrate_over, Backend, QuadratureConfig, Status};
use crate::catalog::VectorFunctionSpec;
use crate::error::{Error, Result};
use crate::partition::{generate_partitions, Strategy, TaggedPartition, WeightedMeasure};
use crate::Scalar;

/// Sampling setup of [`sup_riemann_norm_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupNormConfig {
    /// Number of partitions drawn from the stream.
    pub budget: usize,
    pub seed: u64,
    /// Cells of the coarsest uniform partition.
    pub uniform_cells: usize,
    pub max_random_cells: usize,
    pub geometric_ratio: f64,
    /// Points the geometric partitions cluster at; `None` uses the singular
    /// points of the function. Pass the same list to compare runs on one
    /// stream.
    pub cluster_points: Option<Vec<f64>>,
}

impl Default for SupNormConfig {
    fn default() -> Self {
        Self {
            budget: 96,
            seed: 0,
            uniform_cells: 1,
            max_random_cells: 64,
            geometric_ratio: 0.5,
            cluster_points: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNormEstimate<T> {
    /// Best `||S(f, D)||` found; a lower bound of the supremum.
    pub value: T,
    pub partitions_examined: usize,
    pub budget: usize,
    pub seed: u64,
}

/// Lower-bound estimate of `sup { ||S(f, D)|| : D a tagged sub-partition }`.
pub fn sup_riemann_norm<T: Scalar>(
    f: &VectorFunctionSpec,
    m: &WeightedMeasure<T>,
    budget: usize,
    seed: u64,
) -> Result<SupNormEstimate<T>> {
    sup_riemann_norm_with(
        f,
        m,
        &SupNormConfig {
            budget,
            seed,
            ..SupNormConfig::default()
        },
    )
}

/// Every partition of the stream is improved in two ways before its sum is
/// measured: each cell may move its tag to one of a fixed set of candidate
/// points (the given tag, both ends, the midpoint and the quarter points), and
/// cells whose contribution points away from the target direction are
/// dropped. The candidate family does not depend on `f`, so for scalar
/// functions and the `l^1` / `l^inf` norms the result is the exact maximum over
/// that family; other norms use a few rounds of dual-direction refinement.
pub fn sup_riemann_norm_with<T: Scalar>(
    f: &VectorFunctionSpec,
    m: &WeightedMeasure<T>,
    cfg: &SupNormConfig,
) -> Result<SupNormEstimate<T>> {
    let singular = f.singular_points();
    let strategy = Strategy::Mixed {
        n: cfg.uniform_cells,
        points: cfg
            .cluster_points
            .clone()
            .unwrap_or_else(|| singular.clone()),
        ratio: cfg.geometric_ratio,
        max_cells: cfg.max_random_cells,
    };
    let norm = f.norm();
    let dirs = exact_directions::<T>(f.dim(), norm.q());
    let mut best = T::zero();
    let mut examined = 0;
    for p in generate_partitions(&strategy, m.a(), m.b(), cfg.budget, cfg.seed)? {
        examined += 1;
        let cand = candidates(f, m, &p, &singular)?;
        let value = match &dirs {
            Some(dirs) => dirs
                .iter()
                .map(|u| norm.norm(&aligned_sum(&cand, u, f.dim())))
                .fold(T::zero(), T::max),
            None => dual_refinement(&cand, f, m),
        };
        if value.is_nan() {
            return Err(Error::NonFinite(f64::NAN));
        }
        if value > best {
            best = value;
        }
        if best.is_infinite() {
            break;
        }
    }
    Ok(SupNormEstimate {
        value: best,
        partitions_examined: examined,
        budget: cfg.budget,
        seed: cfg.seed,
    })
}

/// Per cell, the contributions `f(d) mu(D)` over the candidate tags.
fn candidates<T: Scalar>(
    f: &VectorFunctionSpec,
    m: &WeightedMeasure<T>,
    p: &TaggedPartition<T>,
    singular: &[f64],
) -> Result<Vec<Vec<Vec<T>>>> {
    let dim = f.dim();
    let quarter = T::of(0.25);
    let mut out = Vec::with_capacity(p.len());
    for c in p.cells() {
        let (lo, hi) = (c.lo(), c.hi());
        let w = hi - lo;
        let mu = m.measure_of(lo, hi);
        let tags = [
            c.tag,
            lo,
            hi,
            lo + w / T::of(2.0),
            lo + w * quarter,
            hi - w * quarter,
        ];
        let mut vals = Vec::with_capacity(tags.len());
        for d in tags {
            if singular.iter().any(|s| T::of(*s) == d) {
                continue;
            }
            let mut y = vec![T::zero(); dim];
            match f.evaluate_into(d, &mut y) {
                Ok(()) => {}
                Err(Error::SingularPoint(_)) | Err(Error::OutOfDomain { .. }) => continue,
                Err(e) => return Err(e),
            }
            for v in &mut y {
                *v = *v * mu;
            }
            vals.push(y);
        }
        out.push(vals);
    }
    Ok(out)
}

/// Dual directions whose pointwise maximum is the norm: `+-e_i` for `l^inf`
/// (and scalars), sign vectors for `l^1`.
fn exact_directions<T: Scalar>(dim: usize, q: f64) -> Option<Vec<Vec<T>>> {
    if dim == 1 || q == f64::INFINITY {
        let mut dirs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [T::one(), -T::one()] {
                let mut u = vec![T::zero(); dim];
                u[i] = s;
                dirs.push(u);
            }
        }
        Some(dirs)
    } else if q == 1.0 && dim <= 12 {
        Some(
            (0..1usize << dim)
                .map(|bits| {
                    (0..dim)
                        .map(|i| {
                            if bits >> i & 1 == 1 {
                                -T::one()
                            } else {
                                T::one()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    }
}

/// Riemann sum of the sub-partition maximizing `<u, S>`: each cell takes its
/// best candidate and is kept only if that contribution is positive.
fn aligned_sum<T: Scalar>(cand: &[Vec<Vec<T>>], u: &[T], dim: usize) -> Vec<T> {
    let mut s = vec![T::zero(); dim];
    for cell in cand {
        let mut pick: Option<(&Vec<T>, T)> = None;
        for y in cell {
            let score = y.iter().zip(u).fold(T::zero(), |acc, (a, b)| acc + *a * *b);
            if score > T::zero() && pick.is_none_or(|(_, b)| score > b) {
                pick = Some((y, score));
            }
        }
        if let Some((y, _)) = pick {
            for (a, v) in s.iter_mut().zip(y) {
                *a = *a + *v;
            }
        }
    }
    s
}

fn dual_refinement<T: Scalar>(
    cand: &[Vec<Vec<T>>],
    f: &VectorFunctionSpec,
    _m: &WeightedMeasure<T>,
) -> T {
    let dim = f.dim();
    let norm = f.norm();
    let mut best = T::zero();
    let mut starts: Vec<Vec<T>> =
        exact_directions(dim, f64::INFINITY).expect("coordinate directions");
    let full: Vec<T> =
        cand.iter()
            .filter_map(|c| c.first())
            .fold(vec![T::zero(); dim], |mut s, y| {
                for (a, v) in s.iter_mut().zip(y) {
                    *a = *a + *v;
                }
                s
            });
    starts.push(norm.dual_direction(&full));
    for mut u in starts {
        for _ in 0..8 {
            let s = aligned_sum(cand, &u, dim);
            let v = norm.norm(&s);
            let improved = v > best;
            if improved {
                best = v;
            }
            let next = norm.dual_direction(&s);
            if !improved || next == u {
                break;
            }
            u = next;
        }
    }
    best
}

/// `max_x || int_a^x f dmu ||` over `grid_size` equally spaced `x`, with the
/// partial integrals accumulated piece by piece (each piece gets
/// `tol / grid_size`). Returns `inf` when a partial integral diverges.
pub fn alexiewicz_norm<T: Scalar>(
    f: &VectorFunctionSpec,
    m: &WeightedMeasure<T>,
    grid_size: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    if grid_size == 0 {
        return Err(Error::InvalidConfig("grid_size must be at least 1".into()));
    }
    let (a, b) = (m.a(), m.b());
    let piece_cfg = QuadratureConfig {
        tol: cfg.tol / T::of(grid_size as f64),
        ..*cfg
    };
    let mut partial = vec![T::zero(); f.dim()];
    let mut best = T::zero();
    let mut lo = a;
    for i in 1..=grid_size {
        let hi = if i == grid_size {
            b
        } else {
            a + (b - a) * T::of(i as f64) / T::of(grid_size as f64)
        };
        let r = integrate_over(f, m, lo, hi, &piece_cfg, Backend::Hk)?;
        match r.status {
            Status::Converged => {}
            Status::Diverged => return Ok(T::infinity()),
            Status::BudgetExhausted => {
                return Err(Error::Indeterminate(format!(
                    "partial integral on [{lo}, {hi}] exhausted its budget"
                )))
            }
        }
        for (p, v) in partial.iter_mut().zip(&r.value) {
            *p = *p + *v;
        }
        best = best.max(f.norm().norm(&partial));
        lo = hi;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FunctionSpec, NormSpec};

    fn scalar(f: FunctionSpec) -> VectorFunctionSpec {
        VectorFunctionSpec::scalar(f)
    }

    #[test]
    fn sup_norm_examples() {
        let m = WeightedMeasure::<f64>::unit();
        let one = sup_riemann_norm(&scalar(FunctionSpec::constant(1.0)), &m, 32, 1).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        let t = sup_riemann_norm(&scalar(FunctionSpec::identity()), &m, 32, 1).unwrap();
        assert!(t.value >= 1.0 - 1e-6 && t.value <= 1.0 + 1e-12);
        let neg = sup_riemann_norm(&scalar(FunctionSpec::constant(-2.5)), &m, 8, 1).unwrap();
        assert!((neg.value - 2.5).abs() < 1e-12);
        let zero = sup_riemann_norm(&scalar(FunctionSpec::zero()), &m, 8, 1).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.partitions_examined, 8);
    }

    #[test]
    fn sup_norm_uses_coarse_cells() {
        // sin(2 pi t): the single cell [0, 1] tagged at 1/4 already gives 1,
        // and no sub-partition can beat sup|f| * mu([0, 1])
        let m = WeightedMeasure::<f64>::unit();
        let f = scalar(FunctionSpec::trig(1.0, 2.0 * std::f64::consts::PI, 0.0).unwrap());
        let est = sup_riemann_norm(&f, &m, 64, 3).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12, "{}", est.value);
    }

    #[test]
    fn sup_norm_euclidean_vector() {
        let m = WeightedMeasure::<f64>::unit();
        let f = VectorFunctionSpec::new(
            vec![FunctionSpec::constant(3.0), FunctionSpec::constant(4.0)],
            NormSpec::euclidean(),
        )
        .unwrap();
        let est = sup_riemann_norm(&f, &m, 16, 0).unwrap();
        assert!((est.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn alexiewicz_examples() {
        let m = WeightedMeasure::<f64>::unit();
        let cfg = QuadratureConfig::with_tol(1e-10);
        let one = alexiewicz_norm(&scalar(FunctionSpec::constant(1.0)), &m, 64, &cfg).unwrap();
        assert!((one - 1.0).abs() < 1e-10);
        let s = scalar(FunctionSpec::trig(1.0, 2.0 * std::f64::consts::PI, 0.0).unwrap());
        let v = alexiewicz_norm(&s, &m, 64, &cfg).unwrap();
        assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(
            alexiewicz_norm(&scalar(FunctionSpec::zero()), &m, 8, &cfg).unwrap(),
            0.0
        );
    }
}
