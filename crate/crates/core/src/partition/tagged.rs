use serde::{Deserialize, Serialize};

use super::WeightedMeasure;
use crate::catalog::VectorFunctionSpec;
use crate::error::{Error, Result};
use crate::Scalar;

/// A closed cell `[u, v]` with a tag `u <= d <= v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggedCell<T> {
    pub cell: [T; 2],
    pub tag: T,
}

impl<T: Scalar> TaggedCell<T> {
    pub fn new(lo: T, hi: T, tag: T) -> Result<Self> {
        let c = Self {
            cell: [lo, hi],
            tag,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn midpoint(lo: T, hi: T) -> Result<Self> {
        Self::new(lo, hi, lo + (hi - lo) / T::of(2.0))
    }

    pub fn lo(&self) -> T {
        self.cell[0]
    }

    pub fn hi(&self) -> T {
        self.cell[1]
    }

    pub fn width(&self) -> T {
        self.cell[1] - self.cell[0]
    }

    pub fn contains_cell(&self, other: &TaggedCell<T>) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = self.cell;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidPartition(format!(
                "cell [{lo}, {hi}] is empty or not finite"
            )));
        }
        if !(lo <= self.tag && self.tag <= hi) {
            return Err(Error::InvalidPartition(format!(
                "tag {} lies outside its cell [{lo}, {hi}]",
                self.tag
            )));
        }
        Ok(())
    }
}

/// A finite family of tagged cells with pairwise disjoint interiors.
///
/// Cells keep the order they were given in; Riemann sums run in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TaggedCell<T>>", into = "Vec<TaggedCell<T>>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct TaggedPartition<T> {
    cells: Vec<TaggedCell<T>>,
}

impl<T: Scalar> TryFrom<Vec<TaggedCell<T>>> for TaggedPartition<T> {
    type Error = Error;
    fn try_from(cells: Vec<TaggedCell<T>>) -> Result<Self> {
        Self::new(cells)
    }
}

impl<T> From<TaggedPartition<T>> for Vec<TaggedCell<T>> {
    fn from(p: TaggedPartition<T>) -> Self {
        p.cells
    }
}

impl<T: Scalar> TaggedPartition<T> {
    pub fn new(cells: Vec<TaggedCell<T>>) -> Result<Self> {
        for c in &cells {
            c.validate()?;
        }
        let mut sorted: Vec<&TaggedCell<T>> = cells.iter().collect();
        sorted.sort_by(|x, y| x.lo().partial_cmp(&y.lo()).expect("finite endpoints"));
        if let Some(w) = sorted.windows(2).find(|w| w[0].hi() > w[1].lo()) {
            return Err(Error::InvalidPartition(format!(
                "cells [{}, {}] and [{}, {}] overlap",
                w[0].lo(),
                w[0].hi(),
                w[1].lo(),
                w[1].hi()
            )));
        }
        Ok(Self { cells })
    }

    pub fn empty() -> Self {
        Self { cells: Vec::new() }
    }

    /// `n` equal cells over `[a, b]` tagged by `tag(lo, hi)`.
    pub fn uniform(a: T, b: T, n: usize, tag: impl Fn(T, T) -> T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition(
                "uniform partition needs n >= 1".into(),
            ));
        }
        let h = (b - a) / T::of(n as f64);
        let cells = (0..n)
            .map(|i| {
                let lo = a + h * T::of(i as f64);
                let hi = if i + 1 == n {
                    b
                } else {
                    a + h * T::of((i + 1) as f64)
                };
                TaggedCell::new(lo, hi, tag(lo, hi))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cells)
    }

    pub fn uniform_midpoint(a: T, b: T, n: usize) -> Result<Self> {
        Self::uniform(a, b, n, |lo, hi| lo + (hi - lo) / T::of(2.0))
    }

    pub fn cells(&self) -> &[TaggedCell<T>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether the cells cover `[a, b]` up to their shared endpoints.
    pub fn is_full(&self, a: T, b: T) -> bool {
        let mut sorted: Vec<&TaggedCell<T>> = self.cells.iter().collect();
        sorted.sort_by(|x, y| x.lo().partial_cmp(&y.lo()).expect("finite endpoints"));
        match (sorted.first(), sorted.last()) {
            (Some(first), Some(last)) => {
                first.lo() == a
                    && last.hi() == b
                    && sorted.windows(2).all(|w| w[0].hi() == w[1].lo())
            }
            _ => false,
        }
    }

    /// Largest cell measure; 0 for the empty sub-partition.
    pub fn mesh_norm(&self, m: &WeightedMeasure<T>) -> T {
        self.cells
            .iter()
            .map(|c| m.measure_of(c.lo(), c.hi()))
            .fold(T::zero(), T::max)
    }

    /// `self ∨ other`: all nonempty intersections `A ∩ B`, each tagged with the
    /// tag of its `self` cell clamped into the intersection, sorted by left
    /// endpoint.
    pub fn common_refinement(&self, other: &Self) -> Self {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let lo = a.lo().max(b.lo());
                let hi = a.hi().min(b.hi());
                if lo < hi {
                    cells.push(TaggedCell {
                        cell: [lo, hi],
                        tag: a.tag.max(lo).min(hi),
                    });
                }
            }
        }
        cells.sort_by(|x, y| x.lo().partial_cmp(&y.lo()).expect("finite endpoints"));
        Self { cells }
    }

    /// Every cell of `self` lies inside some cell of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        self.cells
            .iter()
            .all(|c| coarser.cells.iter().any(|p| p.contains_cell(c)))
    }

    /// `S(f, D) = sum_i f(d_i) mu(D_i)`, accumulated in cell order. `raw`
    /// evaluates including spikes and exception sets.
    pub fn riemann_sum(
        &self,
        f: &VectorFunctionSpec,
        m: &WeightedMeasure<T>,
        raw: bool,
    ) -> Result<Vec<T>> {
        let singular = f.singular_points();
        let mut acc = vec![T::zero(); f.dim()];
        let mut buf = vec![T::zero(); f.dim()];
        for c in &self.cells {
            if singular.iter().any(|s| T::of(*s) == c.tag) {
                return Err(Error::SingularTag(c.tag.as_f64()));
            }
            if raw {
                f.evaluate_raw_into(c.tag, &mut buf)?;
            } else {
                f.evaluate_into(c.tag, &mut buf)?;
            }
            let mu = m.measure_of(c.lo(), c.hi());
            for (a, v) in acc.iter_mut().zip(&buf) {
                *a = *a + *v * mu;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FunctionSpec, NormSpec};

    fn cells(spec: &[(f64, f64, f64)]) -> TaggedPartition<f64> {
        TaggedPartition::new(
            spec.iter()
                .map(|&(u, v, d)| TaggedCell::new(u, v, d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn bounds(p: &TaggedPartition<f64>) -> Vec<[f64; 2]> {
        p.cells().iter().map(|c| c.cell).collect()
    }

    #[test]
    fn mesh_norm_examples() {
        let m = WeightedMeasure::unit();
        assert_eq!(
            TaggedPartition::uniform_midpoint(0.0, 1.0, 4)
                .unwrap()
                .mesh_norm(&m),
            0.25
        );
        assert_eq!(
            cells(&[(0.0, 0.1, 0.0), (0.1, 1.0, 0.5)]).mesh_norm(&m),
            0.9
        );
        assert_eq!(TaggedPartition::empty().mesh_norm(&m), 0.0);
    }

    #[test]
    fn refinement_examples() {
        let p1 = cells(&[(0.0, 0.5, 0.25), (0.5, 1.0, 0.75)]);
        let p2 = cells(&[(0.0, 0.25, 0.1), (0.25, 1.0, 0.6)]);
        let r = p1.common_refinement(&p2);
        assert_eq!(bounds(&r), vec![[0.0, 0.25], [0.25, 0.5], [0.5, 1.0]]);
        // tags from p1, clamped into the new cell
        assert_eq!(r.cells()[0].tag, 0.25);
        assert_eq!(r.cells()[1].tag, 0.25);
        assert_eq!(r.cells()[2].tag, 0.75);
        assert!(r.refines(&p1) && r.refines(&p2));

        assert_eq!(p1.common_refinement(&p1), p1);
        let whole = cells(&[(0.0, 1.0, 0.5)]);
        assert_eq!(
            bounds(&whole.common_refinement(&p1)),
            vec![[0.0, 0.5], [0.5, 1.0]]
        );
    }

    #[test]
    fn riemann_sum_examples() {
        let m = WeightedMeasure::unit();
        let p = cells(&[(0.0, 0.5, 0.0), (0.5, 1.0, 0.5)]);
        let two = VectorFunctionSpec::scalar(FunctionSpec::constant(2.0));
        assert_eq!(p.riemann_sum(&two, &m, false).unwrap(), vec![2.0]);
        let t = VectorFunctionSpec::scalar(FunctionSpec::identity());
        assert_eq!(p.riemann_sum(&t, &m, false).unwrap(), vec![0.25]);
        let v = VectorFunctionSpec::new(
            vec![FunctionSpec::constant(1.0), FunctionSpec::identity()],
            NormSpec::euclidean(),
        )
        .unwrap();
        assert_eq!(p.riemann_sum(&v, &m, false).unwrap(), vec![1.0, 0.25]);

        let sing = VectorFunctionSpec::scalar(FunctionSpec::monomial(-0.5).unwrap());
        assert_eq!(
            p.riemann_sum(&sing, &m, false),
            Err(Error::SingularTag(0.0))
        );
        assert!(
            TaggedPartition::<f64>::empty()
                .riemann_sum(&sing, &m, false)
                .unwrap()
                == vec![0.0]
        );
    }

    #[test]
    fn rejects_invalid_cells() {
        assert!(TaggedCell::new(0.5, 0.5, 0.5).is_err());
        assert!(TaggedCell::new(0.0, 0.5, 0.7).is_err());
        assert!(TaggedPartition::new(vec![
            TaggedCell::midpoint(0.0, 0.6).unwrap(),
            TaggedCell::midpoint(0.5, 1.0).unwrap()
        ])
        .is_err());
    }

    #[test]
    fn json_shape() {
        let p = cells(&[(0.0, 0.5, 0.25)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[{"cell":[0.0,0.5],"tag":0.25}]"#);
        let back: TaggedPartition<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(
            serde_json::from_str::<TaggedPartition<f64>>(r#"[{"cell":[0.0,0.5],"tag":0.75}]"#)
                .is_err()
        );
    }
}
