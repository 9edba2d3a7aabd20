//! Deterministic streams of tagged (sub-)partitions used to sample the
//! directed set of partitions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{TaggedCell, TaggedPartition};
use crate::error::{Error, Result};
use crate::Scalar;

/// Deepest dyadic level a uniform stream visits before wrapping around.
const MAX_LEVEL: usize = 12;
/// Cap on the number of geometric cells per cluster point.
const MAX_GEOMETRIC: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagRule {
    Midpoint,
    Left,
    Right,
}

impl TagRule {
    const CYCLE: [TagRule; 3] = [TagRule::Midpoint, TagRule::Left, TagRule::Right];

    pub fn place<T: Scalar>(self, lo: T, hi: T) -> T {
        match self {
            TagRule::Midpoint => lo + (hi - lo) / T::of(2.0),
            TagRule::Left => lo,
            TagRule::Right => hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Strategy {
    /// `n * 2^l` equal cells for `l = 0, 1, ...`, cycling midpoint, left and
    /// right tags at each level.
    Uniform { n: usize },
    /// Cells shrinking by `ratio` toward each cluster point, plus the tail cell
    /// touching the point (tagged at its far end).
    Geometric {
        points: Vec<f64>,
        ratio: f64,
        cells: usize,
    },
    /// Random breakpoints and tags; every other draw keeps a random subset of
    /// the cells.
    Random { max_cells: usize },
    /// Round-robin over the three strategies above.
    Mixed {
        n: usize,
        points: Vec<f64>,
        ratio: f64,
        max_cells: usize,
    },
}

/// Iterator over at most `budget` partitions of `[a, b]`.
pub struct PartitionStream<T> {
    strategy: Strategy,
    a: T,
    b: T,
    budget: usize,
    index: usize,
    rng: ChaCha8Rng,
}

pub fn generate_partitions<T: Scalar>(
    strategy: &Strategy,
    a: T,
    b: T,
    budget: usize,
    seed: u64,
) -> Result<PartitionStream<T>> {
    if budget == 0 {
        return Err(Error::InvalidConfig(
            "partition budget must be at least 1".into(),
        ));
    }
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidPartition(format!(
            "[{a}, {b}] is not a valid interval"
        )));
    }
    let check_ratio = |r: f64| {
        if r > 0.0 && r < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "geometric ratio must lie in (0, 1), got {r}"
            )))
        }
    };
    match strategy {
        Strategy::Uniform { n } | Strategy::Mixed { n, .. } if *n == 0 => {
            return Err(Error::InvalidConfig(
                "uniform cell count must be at least 1".into(),
            ))
        }
        Strategy::Random { max_cells } | Strategy::Mixed { max_cells, .. } if *max_cells == 0 => {
            return Err(Error::InvalidConfig(
                "random max_cells must be at least 1".into(),
            ))
        }
        Strategy::Geometric { ratio, cells, .. } => {
            check_ratio(*ratio)?;
            if *cells == 0 {
                return Err(Error::InvalidConfig(
                    "geometric cell count must be at least 1".into(),
                ));
            }
        }
        Strategy::Mixed { ratio, .. } => check_ratio(*ratio)?,
        _ => {}
    }
    Ok(PartitionStream {
        strategy: strategy.clone(),
        a,
        b,
        budget,
        index: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

impl<T: Scalar> PartitionStream<T> {
    fn uniform(&self, n: usize, i: usize) -> TaggedPartition<T> {
        let level = (i / 3) % (MAX_LEVEL + 1);
        let rule = TagRule::CYCLE[i % 3];
        TaggedPartition::uniform(self.a, self.b, n << level, |lo, hi| rule.place(lo, hi))
            .expect("uniform cells of a valid interval")
    }

    fn geometric(&self, points: &[f64], ratio: f64, cells: usize, i: usize) -> TaggedPartition<T> {
        let (a, b) = (self.a, self.b);
        let count = (cells + i / 3).min(MAX_GEOMETRIC);
        let rule = TagRule::CYCLE[i % 3];
        let mut pts: Vec<T> = points
            .iter()
            .map(|p| T::of(*p))
            .filter(|p| a <= *p && *p <= b)
            .collect();
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite points"));
        pts.dedup();
        let mut knots = vec![a];
        knots.extend(pts.iter().copied().filter(|p| a < *p && *p < b));
        knots.push(b);
        let is_point = |x: T| pts.contains(&x);
        let r = T::of(ratio);
        let mut out = Vec::new();
        for w in knots.windows(2) {
            let (u, v) = (w[0], w[1]);
            match (is_point(u), is_point(v)) {
                (false, false) => push_uniform(&mut out, u, v, count, rule),
                (true, false) => push_geometric(&mut out, u, v, r, count, rule),
                (false, true) => push_geometric(&mut out, v, u, r, count, rule),
                (true, true) => {
                    let mid = u + (v - u) / T::of(2.0);
                    push_geometric(&mut out, u, mid, r, count, rule);
                    push_geometric(&mut out, v, mid, r, count, rule);
                }
            }
        }
        out.sort_by(|x: &TaggedCell<T>, y| x.lo().partial_cmp(&y.lo()).expect("finite endpoints"));
        TaggedPartition::new(out).expect("geometric cells are disjoint")
    }

    fn random(&mut self, max_cells: usize) -> TaggedPartition<T> {
        let (a, b) = (self.a.as_f64(), self.b.as_f64());
        let k = self.rng.gen_range(1..=max_cells);
        let mut cuts: Vec<T> = (1..k).map(|_| T::of(self.rng.gen_range(a..b))).collect();
        cuts.push(self.a);
        cuts.push(self.b);
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite cuts"));
        cuts.dedup();
        let subset = self.rng.gen_bool(0.5);
        let mut cells = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let s: f64 = self.rng.gen();
            let keep = !subset || self.rng.gen_bool(0.5);
            if keep {
                let tag = (lo + (hi - lo) * T::of(s)).max(lo).min(hi);
                cells.push(TaggedCell {
                    cell: [lo, hi],
                    tag,
                });
            }
        }
        TaggedPartition::new(cells).expect("random cells are disjoint")
    }
}

fn push_uniform<T: Scalar>(out: &mut Vec<TaggedCell<T>>, u: T, v: T, n: usize, rule: TagRule) {
    let h = (v - u) / T::of(n as f64);
    for i in 0..n {
        let lo = u + h * T::of(i as f64);
        let hi = if i + 1 == n {
            v
        } else {
            u + h * T::of((i + 1) as f64)
        };
        if lo < hi {
            out.push(TaggedCell {
                cell: [lo, hi],
                tag: rule.place(lo, hi),
            });
        }
    }
}

/// Cells between the cluster point `p` and the far end `e`, plus the tail.
fn push_geometric<T: Scalar>(
    out: &mut Vec<TaggedCell<T>>,
    p: T,
    e: T,
    r: T,
    n: usize,
    rule: TagRule,
) {
    let mut outer = e;
    for _ in 0..n {
        let inner = p + (outer - p) * r;
        if inner == p || inner == outer {
            break;
        }
        let (lo, hi) = if p < e {
            (inner, outer)
        } else {
            (outer, inner)
        };
        out.push(TaggedCell {
            cell: [lo, hi],
            tag: rule.place(lo, hi),
        });
        outer = inner;
    }
    let (lo, hi) = if p < e { (p, outer) } else { (outer, p) };
    if lo < hi {
        out.push(TaggedCell {
            cell: [lo, hi],
            tag: outer,
        });
    }
}

impl<T: Scalar> Iterator for PartitionStream<T> {
    type Item = TaggedPartition<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.index >= self.budget {
            return None;
        }
        let i = self.index;
        self.index += 1;
        let p = match self.strategy.clone() {
            Strategy::Uniform { n } => self.uniform(n, i),
            Strategy::Geometric {
                points,
                ratio,
                cells,
            } => self.geometric(&points, ratio, cells, i),
            Strategy::Random { max_cells } => self.random(max_cells),
            Strategy::Mixed {
                n,
                points,
                ratio,
                max_cells,
            } => match i % 3 {
                0 => self.uniform(n, i / 3),
                1 if !points.is_empty() => self.geometric(&points, ratio, 4, i / 3),
                _ => self.random(max_cells),
            },
        };
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.budget - self.index;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(p: &TaggedPartition<f64>) -> Vec<[f64; 2]> {
        p.cells().iter().map(|c| c.cell).collect()
    }

    #[test]
    fn uniform_first_item_is_midpoint_partition() {
        let ps: Vec<_> = generate_partitions(&Strategy::Uniform { n: 4 }, 0.0, 1.0, 1, 0)
            .unwrap()
            .collect();
        assert_eq!(ps.len(), 1);
        assert_eq!(
            ps[0],
            TaggedPartition::uniform_midpoint(0.0, 1.0, 4).unwrap()
        );
    }

    #[test]
    fn random_streams_are_reproducible() {
        let s = Strategy::Random { max_cells: 9 };
        let a: Vec<TaggedPartition<f64>> =
            generate_partitions(&s, 0.0, 1.0, 20, 7).unwrap().collect();
        let b: Vec<TaggedPartition<f64>> =
            generate_partitions(&s, 0.0, 1.0, 20, 7).unwrap().collect();
        assert_eq!(a, b);
        let c: Vec<TaggedPartition<f64>> =
            generate_partitions(&s, 0.0, 1.0, 20, 8).unwrap().collect();
        assert_ne!(a, c);
    }

    #[test]
    fn geometric_cells_at_zero() {
        let s = Strategy::Geometric {
            points: vec![0.0],
            ratio: 0.5,
            cells: 3,
        };
        let p: TaggedPartition<f64> = generate_partitions(&s, 0.0, 1.0, 1, 0)
            .unwrap()
            .next()
            .unwrap();
        assert_eq!(
            bounds(&p),
            vec![[0.0, 0.125], [0.125, 0.25], [0.25, 0.5], [0.5, 1.0]]
        );
        assert_eq!(p.cells()[0].tag, 0.125);
        assert!(p.is_full(0.0, 1.0));
    }

    #[test]
    fn geometric_cells_at_interior_point() {
        let s = Strategy::Geometric {
            points: vec![0.5],
            ratio: 0.5,
            cells: 2,
        };
        let p: TaggedPartition<f64> = generate_partitions(&s, 0.0, 1.0, 1, 0)
            .unwrap()
            .next()
            .unwrap();
        assert_eq!(
            bounds(&p),
            vec![
                [0.0, 0.25],
                [0.25, 0.375],
                [0.375, 0.5],
                [0.5, 0.625],
                [0.625, 0.75],
                [0.75, 1.0]
            ]
        );
        assert!(p.cells().iter().all(|c| c.tag != 0.5));
    }

    #[test]
    fn budget_is_respected() {
        let s = Strategy::Mixed {
            n: 2,
            points: vec![0.0],
            ratio: 0.5,
            max_cells: 5,
        };
        assert_eq!(
            generate_partitions::<f64>(&s, 0.0, 1.0, 17, 1)
                .unwrap()
                .count(),
            17
        );
        assert!(generate_partitions::<f64>(&s, 0.0, 1.0, 0, 1).is_err());
    }
}
