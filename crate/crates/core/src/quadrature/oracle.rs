use crate::catalog::VectorFunctionSpec;
use crate::error::{Error, Result};
use crate::partition::{TaggedPartition, WeightedMeasure};
use crate::Scalar;

pub const MAX_ORACLE_DEPTH: usize = 16;

/// Brute-force limit of Riemann sums along the chain of dyadic midpoint
/// partitions `2^0, 2^1, ..., 2^depth` cells, extrapolated with a Romberg
/// table in `h^2`. Meant as an independent cross-check for smooth integrands.
pub fn refinement_oracle<T: Scalar>(
    f: &VectorFunctionSpec,
    m: &WeightedMeasure<T>,
    depth: usize,
) -> Result<Vec<T>> {
    if depth > MAX_ORACLE_DEPTH {
        return Err(Error::InvalidConfig(format!(
            "refinement depth must be at most {MAX_ORACLE_DEPTH}, got {depth}"
        )));
    }
    let mut rows: Vec<Vec<Vec<T>>> = Vec::with_capacity(depth + 1);
    for level in 0..=depth {
        let p = TaggedPartition::uniform_midpoint(m.a(), m.b(), 1 << level)?;
        let mut row = vec![p.riemann_sum(f, m, false)?];
        for j in 1..=level {
            let factor = T::of(4f64.powi(j as i32) - 1.0);
            let prev = &rows[level - 1][j - 1];
            let cur = &row[j - 1];
            let next = cur
                .iter()
                .zip(prev)
                .map(|(c, p)| *c + (*c - *p) / factor)
                .collect();
            row.push(next);
        }
        rows.push(row);
    }
    Ok(rows
        .pop()
        .and_then(|mut r| r.pop())
        .expect("at least one level"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FunctionSpec;

    #[test]
    fn oracle_examples() {
        let m = WeightedMeasure::<f64>::unit();
        let t = VectorFunctionSpec::scalar(FunctionSpec::identity());
        for depth in 0..=6 {
            assert_eq!(refinement_oracle(&t, &m, depth).unwrap(), vec![0.5]);
        }
        let t2 = VectorFunctionSpec::scalar(FunctionSpec::monomial(2.0).unwrap());
        assert!((refinement_oracle(&t2, &m, 10).unwrap()[0] - 1.0 / 3.0).abs() < 1e-6);
        let c = VectorFunctionSpec::scalar(FunctionSpec::constant(-1.5));
        assert_eq!(refinement_oracle(&c, &m, 1).unwrap(), vec![-1.5]);
        assert!(refinement_oracle(&c, &m, 17).is_err());
    }

    #[test]
    fn dyadic_chain_is_a_refinement_chain() {
        let coarse = TaggedPartition::<f64>::uniform_midpoint(0.0, 1.0, 4).unwrap();
        let fine = TaggedPartition::<f64>::uniform_midpoint(0.0, 1.0, 8).unwrap();
        assert!(fine.refines(&coarse));
        assert_eq!(
            fine.common_refinement(&coarse)
                .cells()
                .iter()
                .map(|c| c.cell)
                .collect::<Vec<_>>(),
            fine.cells().iter().map(|c| c.cell).collect::<Vec<_>>()
        );
    }
}
