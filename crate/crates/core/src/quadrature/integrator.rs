//! Adaptive gauge-style integration.
//!
//! The interval is cut at the integrand's singular points and breakpoints.
//! Regular pieces are bisected until the two nested rules of every cell agree
//! to the cell's share of the tolerance (and, for the HK backend, the cell is
//! no wider than `h_max`). A piece with a singular endpoint is consumed by
//! geometrically shrinking cells toward the point; the improper limit is
//! accepted once an envelope estimate of the remaining tail is small enough.

// Negated comparisons are the NaN guards: a NaN error estimate must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use super::integrand::Integrand;
use super::rules::{KronrodPair, GK15, GK21};
use crate::catalog::FunctionSpec;
use crate::error::{Error, Result};
use crate::partition::WeightedMeasure;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// G7/K15 cells with the `h_max` gauge cap; conditionally convergent
    /// improper limits are accepted.
    Hk,
    /// G10/K21 cells; the norm of the integrand is integrated alongside and
    /// must converge too (absolute integrability).
    Lebesgue,
}

impl Backend {
    fn pair(self) -> &'static KronrodPair {
        match self {
            Backend::Hk => &GK15,
            Backend::Lebesgue => &GK21,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Converged,
    Diverged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult<T> {
    pub value: Vec<T>,
    pub error_estimate: T,
    pub status: Status,
    pub cells_used: usize,
    /// `int ||f|| dmu`, computed by the Lebesgue backend only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_integral: Option<T>,
}

impl<T: Scalar> IntegralResult<T> {
    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn scalar(&self) -> T {
        self.value[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Serialize"
))]
pub struct QuadratureConfig<T> {
    /// Absolute tolerance on the value, measured in the target norm.
    pub tol: T,
    /// Relative floor: the run succeeds once the error estimate is below
    /// `max(tol, rel_tol * scale)`, where `scale` is the larger of `||value||`
    /// and a one-cell-per-piece pre-estimate. `0` makes `tol` binding.
    pub rel_tol: T,
    /// Budget on the number of cells evaluated.
    pub max_cells: usize,
    /// Largest accepted cell width (HK backend); `None` means `b - a`.
    pub h_max: Option<T>,
    pub singular_shrink_ratio: T,
    /// Partial sums near a singular point beyond this norm count as divergent.
    pub divergence_threshold: T,
    /// Geometric cells per singular endpoint before giving up.
    pub max_shrink_steps: usize,
}

impl<T: Scalar> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::of(1e-8),
            rel_tol: T::of(1e-12).max(T::epsilon() * T::of(64.0)),
            max_cells: 2_000_000,
            h_max: None,
            singular_shrink_ratio: T::of(0.5),
            divergence_threshold: T::of(1e12),
            max_shrink_steps: 1100,
        }
    }
}

impl<T: Scalar> QuadratureConfig<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self, a: T, b: T) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.tol > T::zero() && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.rel_tol >= T::zero() && self.rel_tol < T::one()) {
            return bad(format!("rel_tol must lie in [0, 1), got {}", self.rel_tol));
        }
        if self.max_cells < 4 {
            return bad(format!(
                "max_cells must be at least 4, got {}",
                self.max_cells
            ));
        }
        if let Some(h) = self.h_max {
            if !(h > T::zero() && h <= b - a) {
                return bad(format!("h_max must lie in (0, {}], got {h}", b - a));
            }
        }
        let r = self.singular_shrink_ratio;
        if !(r > T::zero() && r < T::one()) {
            return bad(format!("singular_shrink_ratio must lie in (0, 1), got {r}"));
        }
        if !(self.divergence_threshold > T::zero()) {
            return bad("divergence_threshold must be positive".into());
        }
        if self.max_shrink_steps < 8 {
            return bad("max_shrink_steps must be at least 8".into());
        }
        Ok(())
    }
}

/// `(H) int_a^b f dmu` over the whole measure interval.
pub fn hk_integrate<T: Scalar, I: Integrand<T> + ?Sized>(
    f: &I,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T>> {
    integrate(f, m, cfg, Backend::Hk)
}

pub fn integrate<T: Scalar, I: Integrand<T> + ?Sized>(
    f: &I,
    m: &WeightedMeasure<T>,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<IntegralResult<T>> {
    integrate_over(f, m, m.a(), m.b(), cfg, backend)
}

/// Integral over `[lo, hi]`, a subinterval of the measure's interval.
pub fn integrate_over<T: Scalar, I: Integrand<T> + ?Sized>(
    f: &I,
    m: &WeightedMeasure<T>,
    lo: T,
    hi: T,
    cfg: &QuadratureConfig<T>,
    backend: Backend,
) -> Result<IntegralResult<T>> {
    cfg.validate(m.a(), m.b())?;
    if !(m.a() <= lo && lo < hi && hi <= m.b()) {
        return Err(Error::InvalidConfig(format!(
            "[{lo}, {hi}] is not a nonempty subinterval of [{}, {}]",
            m.a(),
            m.b()
        )));
    }
    Engine::new(f, m, cfg, backend).run(lo, hi)
}

/// Plain adaptive integral of a closure over `[lo, hi]` with no gauge cap and
/// no singular points. Fails when the budget runs out.
pub fn integrate_regular<T: Scalar, F>(
    pair: &'static KronrodPair,
    lo: T,
    hi: T,
    tol: T,
    max_cells: usize,
    dim: usize,
    f: F,
) -> Result<Vec<T>>
where
    F: Fn(T, &mut [T]) -> Result<()>,
{
    let mut xs_buf = Vec::new();
    let mut stack = vec![(lo, hi)];
    let mut parts: Vec<(T, Vec<T>)> = Vec::new();
    let mut used = 0;
    while let Some((u, v)) = stack.pop() {
        used += 1;
        if used > max_cells {
            return Err(Error::Indeterminate(format!(
                "adaptive integral on [{lo}, {hi}] exceeded {max_cells} cells"
            )));
        }
        let xs = pair.abscissae(u, v);
        xs_buf.clear();
        xs_buf.resize(xs.len() * dim, T::zero());
        for (x, row) in xs.iter().zip(xs_buf.chunks_mut(dim)) {
            f(*x, row)?;
        }
        let (k, g) = pair.apply(&xs_buf, dim, (v - u) / T::of(2.0));
        let err = k
            .iter()
            .zip(&g)
            .fold(T::zero(), |e, (a, b)| e.max((*a - *b).abs()));
        let size = k.iter().fold(T::zero(), |e, a| e.max(a.abs()));
        let mid = u + (v - u) / T::of(2.0);
        let cell_tol = tol * (v - u) / (hi - lo);
        if !err.is_finite() {
            return Err(Error::NonFinite(mid.as_f64()));
        }
        if err <= cell_tol || !(u < mid && mid < v) || err <= T::epsilon() * T::of(64.0) * size {
            parts.push((u, k));
        } else {
            stack.push((mid, v));
            stack.push((u, mid));
        }
    }
    parts.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite cell endpoints"));
    let mut acc = vec![T::zero(); dim];
    for (_, k) in parts {
        for (a, v) in acc.iter_mut().zip(k) {
            *a = *a + v;
        }
    }
    Ok(acc)
}

/// One evaluated cell.
struct CellEstimate<T> {
    lo: T,
    hi: T,
    value: Vec<T>,
    err: T,
}

/// Fraction of a singular piece's tolerance reserved for the unresolved tail.
/// The cells rarely need much: once the nested rules agree to their share,
/// the accepted estimates are typically far more accurate than required.
const TAIL_SHARE: f64 = 0.9;

enum Flow {
    Continue,
    Diverged,
    Exhausted,
}

struct Engine<'a, T: Scalar, I: ?Sized> {
    f: &'a I,
    m: &'a WeightedMeasure<T>,
    cfg: &'a QuadratureConfig<T>,
    pair: &'static KronrodPair,
    /// Append `||f||` as an extra coordinate.
    aug: bool,
    h_max: Option<T>,
    dim: usize,
    samples: Vec<T>,
    accepted: Vec<(T, Vec<T>)>,
    err_total: T,
    cells_used: usize,
    diverged: bool,
    exhausted: bool,
    /// Magnitude of a one-cell-per-piece estimate of the integral; the
    /// relative tolerance is measured against it.
    scale: T,
    total: T,
    /// Pre-pass estimates, reused as the first cell of each regular piece.
    pending: Vec<CellEstimate<T>>,
}

impl<'a, T: Scalar, I: Integrand<T> + ?Sized> Engine<'a, T, I> {
    fn new(
        f: &'a I,
        m: &'a WeightedMeasure<T>,
        cfg: &'a QuadratureConfig<T>,
        backend: Backend,
    ) -> Self {
        let aug = backend == Backend::Lebesgue;
        Self {
            f,
            m,
            cfg,
            pair: backend.pair(),
            aug,
            h_max: if aug { None } else { cfg.h_max },
            dim: f.dim() + usize::from(aug),
            samples: Vec::new(),
            accepted: Vec::new(),
            err_total: T::zero(),
            cells_used: 0,
            diverged: false,
            exhausted: false,
            scale: T::zero(),
            total: T::one(),
            pending: Vec::new(),
        }
    }

    fn run(mut self, lo: T, hi: T) -> Result<IntegralResult<T>> {
        let singular: Vec<f64> = self.f.singular_points();
        let weight_singular = self
            .m
            .weight()
            .map(FunctionSpec::singular_points)
            .unwrap_or_default();
        let weight_breaks = self
            .m
            .weight()
            .map(FunctionSpec::breakpoints)
            .unwrap_or_default();
        let mut knots = vec![lo, hi];
        let inside = |x: &f64| lo.as_f64() < *x && *x < hi.as_f64();
        knots.extend(
            singular
                .iter()
                .chain(&weight_singular)
                .chain(&self.f.breakpoints())
                .chain(&weight_breaks)
                .filter(|x| inside(x))
                .map(|x| T::of(*x)),
        );
        knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));
        knots.dedup();
        let is_singular = |x: T| {
            singular
                .iter()
                .chain(&weight_singular)
                .any(|s| T::of(*s) == x)
        };

        let total = hi - lo;
        self.total = total;
        if self.cfg.rel_tol > T::zero() {
            self.prepass(&knots, &is_singular)?;
        }
        for w in knots.windows(2) {
            let (u, v) = (w[0], w[1]);
            if u >= v {
                continue;
            }
            let seg_tol = self.cfg.tol * (v - u) / total;
            let flow = match (is_singular(u), is_singular(v)) {
                (false, false) => self.adaptive(u, v, seg_tol, v - u)?,
                (true, false) => self.singular_segment(u, v, seg_tol)?,
                (false, true) => self.singular_segment(v, u, seg_tol)?,
                (true, true) => {
                    let mid = u + (v - u) / T::of(2.0);
                    match self.singular_segment(u, mid, seg_tol / T::of(2.0))? {
                        Flow::Continue => self.singular_segment(v, mid, seg_tol / T::of(2.0))?,
                        other => other,
                    }
                }
            };
            match flow {
                Flow::Continue => {}
                Flow::Diverged => {
                    self.diverged = true;
                    break;
                }
                Flow::Exhausted => {
                    self.exhausted = true;
                    break;
                }
            }
        }
        Ok(self.finish())
    }

    fn finish(mut self) -> IntegralResult<T> {
        self.accepted
            .sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite cell endpoints"));
        let mut acc = vec![T::zero(); self.dim];
        for (_, v) in &self.accepted {
            for (a, x) in acc.iter_mut().zip(v) {
                *a = *a + *x;
            }
        }
        let status = if self.diverged {
            Status::Diverged
        } else if self.exhausted
            || !(self.err_total
                <= self
                    .cfg
                    .tol
                    .max(self.cfg.rel_tol * self.size(&acc).max(self.scale)))
        {
            Status::BudgetExhausted
        } else {
            Status::Converged
        };
        let abs_integral = if self.aug { acc.pop() } else { None };
        if status == Status::Diverged {
            for a in &mut acc {
                if a.abs() < self.cfg.divergence_threshold {
                    *a = T::infinity() * a.signum();
                }
            }
        }
        IntegralResult {
            value: acc,
            error_estimate: self.err_total,
            status,
            cells_used: self.cells_used,
            abs_integral: abs_integral.map(|x| {
                if status == Status::Diverged {
                    T::infinity()
                } else {
                    x
                }
            }),
        }
    }

    fn size(&self, x: &[T]) -> T {
        let d = self.f.dim();
        let v = self.f.norm(&x[..d]);
        if self.aug {
            v.max(x[d].abs())
        } else {
            v
        }
    }

    /// Evaluates both rules on `[lo, hi]`. `None` signals a `+-inf` sample.
    fn eval_cell(&mut self, lo: T, hi: T) -> Result<Option<CellEstimate<T>>> {
        self.cells_used += 1;
        let d = self.f.dim();
        let xs = self.pair.abscissae(lo, hi);
        self.samples.clear();
        self.samples.resize(xs.len() * self.dim, T::zero());
        for (x, row) in xs.iter().zip(self.samples.chunks_mut(self.dim)) {
            self.f.eval(*x, &mut row[..d])?;
            let w = self.m.density(*x)?;
            for v in row[..d].iter_mut() {
                *v = *v * w;
            }
            if self.aug {
                row[d] = self.f.norm(&row[..d]);
            }
            if row.iter().any(|v| v.is_nan()) {
                return Err(Error::NonFinite(x.as_f64()));
            }
            if row.iter().any(|v| v.is_infinite()) {
                return Ok(None);
            }
        }
        let (k, g) = self
            .pair
            .apply(&self.samples, self.dim, (hi - lo) / T::of(2.0));
        let diff: Vec<T> = k.iter().zip(&g).map(|(a, b)| *a - *b).collect();
        let err = self.size(&diff);
        if !k.iter().all(|v| v.is_finite()) || !err.is_finite() {
            return Ok(None);
        }
        Ok(Some(CellEstimate {
            lo,
            hi,
            value: k,
            err,
        }))
    }

    /// One cell per regular piece, to size the relative tolerance before any
    /// cell is accepted.
    fn prepass(&mut self, knots: &[T], is_singular: &dyn Fn(T) -> bool) -> Result<()> {
        let mut sum = vec![T::zero(); self.dim];
        for w in knots.windows(2) {
            let (u, v) = (w[0], w[1]);
            if u >= v || is_singular(u) || is_singular(v) {
                continue;
            }
            if let Some(c) = self.eval_cell(u, v)? {
                for (s, x) in sum.iter_mut().zip(&c.value) {
                    *s = *s + *x;
                }
                self.pending.push(c);
            }
        }
        self.scale = self.size(&sum);
        if !self.scale.is_finite() {
            self.scale = T::zero();
        }
        Ok(())
    }

    /// Adaptive bisection of a regular piece; accepted cells go to
    /// `self.accepted`. `len` is the reference length for tolerance shares.
    /// Returns the piece's value alongside the flow signal.
    fn adaptive_value(&mut self, lo: T, hi: T, tol: T, len: T) -> Result<(Flow, Vec<T>)> {
        let mut sum = vec![T::zero(); self.dim];
        let mut stack = vec![(lo, hi)];
        let two = T::of(2.0);
        while let Some((u, v)) = stack.pop() {
            let cached = self
                .pending
                .iter()
                .position(|c| c.lo == u && c.hi == v)
                .map(|i| self.pending.swap_remove(i));
            let c = match cached {
                Some(c) => c,
                None => {
                    if self.cells_used >= self.cfg.max_cells {
                        return Ok((Flow::Exhausted, sum));
                    }
                    match self.eval_cell(u, v)? {
                        Some(c) => c,
                        None => return Ok((Flow::Diverged, sum)),
                    }
                }
            };
            let mid = u + (v - u) / two;
            let splittable = u < mid && mid < v;
            let cell_tol =
                (tol * (v - u) / len).max(self.cfg.rel_tol * self.scale * (v - u) / self.total);
            let too_wide = self.h_max.is_some_and(|h| v - u > h);
            let roundoff = c.err <= T::epsilon() * T::of(64.0) * self.size(&c.value);
            if splittable && (too_wide || (c.err > cell_tol && !roundoff)) {
                stack.push((mid, v));
                stack.push((u, mid));
            } else {
                self.accept(c, &mut sum);
            }
        }
        Ok((Flow::Continue, sum))
    }

    fn accept(&mut self, c: CellEstimate<T>, sum: &mut [T]) {
        for (s, v) in sum.iter_mut().zip(&c.value) {
            *s = *s + *v;
        }
        self.err_total = self.err_total + c.err;
        debug_assert!(c.lo < c.hi);
        self.accepted.push((c.lo, c.value));
    }

    fn adaptive(&mut self, lo: T, hi: T, tol: T, len: T) -> Result<Flow> {
        Ok(self.adaptive_value(lo, hi, tol, len)?.0)
    }

    /// Consumes the piece between the singular point `s` and the regular end
    /// `e` with cells `[s + r^(j+1) (e - s), s + r^j (e - s)]`.
    fn singular_segment(&mut self, s: T, e: T, tol: T) -> Result<Flow> {
        let r = self.cfg.singular_shrink_ratio;
        let len = (e - s).abs();
        let tail_tol = tol * T::of(TAIL_SHARE);
        let cell_tol = tol - tail_tol;
        let mut outer = e;
        let mut partial = vec![T::zero(); self.dim];
        let mut sizes: Vec<T> = Vec::new();
        let mut stagnant = 0usize;
        for j in 0..self.cfg.max_shrink_steps {
            let inner = s + (outer - s) * r;
            if inner == s || inner == outer {
                break;
            }
            let (u, v) = if s < e {
                (inner, outer)
            } else {
                (outer, inner)
            };
            let width = v - u;
            let (flow, c) = self.adaptive_value(u, v, cell_tol * width / len, width)?;
            match flow {
                Flow::Continue => {}
                other => return Ok(other),
            }
            for (p, x) in partial.iter_mut().zip(&c) {
                *p = *p + *x;
            }
            if !(self.size(&partial) <= self.cfg.divergence_threshold) {
                return Ok(Flow::Diverged);
            }
            sizes.push(self.size(&c));
            outer = inner;
            if j < 7 {
                continue;
            }
            let recent = envelope(&sizes, j);
            if recent == T::zero() {
                return Ok(Flow::Continue);
            }
            // decay rate per step: the slowest of the last three 3-step ratios
            let q = (0..3).fold(T::zero(), |m, i| {
                m.max(
                    (envelope(&sizes, j - i) / envelope(&sizes, j - i - 3))
                        .powf(T::one() / T::of(3.0)),
                )
            });
            if !(q < T::one() - T::of(1e-6)) {
                stagnant += 1;
                if j >= 64 && stagnant >= 32 {
                    return Ok(Flow::Diverged);
                }
                continue;
            }
            stagnant = 0;
            // project the last three contributions forward at rate q, so one
            // large older value does not dominate the envelope
            let projected = (0..3).fold(T::zero(), |m, i| m.max(sizes[j - i] * q.powi(i as i32)));
            let tail = projected * q / (T::one() - q);
            if tail <= tail_tol.max(self.cfg.rel_tol * self.size(&partial)) {
                self.err_total = self.err_total + tail;
                return Ok(Flow::Continue);
            }
        }
        // ran into the floating point floor or the step cap
        self.err_total = self.err_total
            + sizes.last().map_or(tail_tol, |_| {
                envelope(&sizes, sizes.len() - 1).max(tail_tol)
            });
        Ok(Flow::Exhausted)
    }
}

/// Largest of the step sizes `j - 2 ..= j`.
fn envelope<T: Scalar>(sizes: &[T], j: usize) -> T {
    sizes[j.saturating_sub(2)..=j]
        .iter()
        .fold(T::zero(), |m, v| m.max(*v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FunctionSpec, Spike, VectorFunctionSpec};
    use crate::quadrature::Raw;

    fn scalar(f: FunctionSpec) -> VectorFunctionSpec {
        VectorFunctionSpec::scalar(f)
    }

    #[test]
    fn affine_and_pathological() {
        let m = WeightedMeasure::<f64>::unit();
        let r = hk_integrate(
            &scalar(FunctionSpec::identity()),
            &m,
            &QuadratureConfig::with_tol(1e-9),
        )
        .unwrap();
        assert!(r.is_converged());
        assert!((r.scalar() - 0.5).abs() <= 1e-9);
        assert!(r.error_estimate <= 1e-9);

        let hk = scalar(FunctionSpec::hk_pathological(2.0, 2.0).unwrap());
        let r = hk_integrate(&hk, &m, &QuadratureConfig::with_tol(1e-6)).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.scalar() - 1f64.sin()).abs() <= 1e-6, "{}", r.scalar());
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let m = WeightedMeasure::<f64>::unit();
        let f = scalar(FunctionSpec::monomial(-0.5).unwrap());
        for backend in [Backend::Hk, Backend::Lebesgue] {
            let r = integrate(&f, &m, &QuadratureConfig::with_tol(1e-8), backend).unwrap();
            assert!(r.is_converged(), "{backend:?}");
            assert!((r.scalar() - 2.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn nonintegrable_singularity_diverges() {
        let m = WeightedMeasure::<f64>::unit();
        let inv = ScalarFnHelper::inv();
        let r = hk_integrate(&inv, &m, &QuadratureConfig::default()).unwrap();
        assert_eq!(r.status, Status::Diverged);
        assert!(r.scalar().is_infinite());
    }

    struct ScalarFnHelper;
    impl ScalarFnHelper {
        fn inv() -> crate::quadrature::ScalarFn<impl Fn(f64) -> Result<f64> + Sync> {
            crate::quadrature::ScalarFn::new(|t: f64| Ok(1.0 / t)).with_singular_points(vec![0.0])
        }
    }

    #[test]
    fn spikes_are_invisible() {
        let m = WeightedMeasure::<f64>::unit();
        let f = scalar(
            FunctionSpec::spikes(vec![Spike {
                point: 0.5,
                height: 1e6,
            }])
            .unwrap(),
        );
        let cfg = QuadratureConfig {
            h_max: Some(1.0 / 1024.0),
            ..QuadratureConfig::with_tol(1e-9)
        };
        let r = hk_integrate(&Raw(&f), &m, &cfg).unwrap();
        assert!(r.scalar().abs() <= 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let m = WeightedMeasure::<f64>::unit();
        let f = scalar(FunctionSpec::trig(1.0, 2000.0, 0.0).unwrap());
        let cfg = QuadratureConfig {
            max_cells: 16,
            ..QuadratureConfig::with_tol(1e-12)
        };
        let r = hk_integrate(&f, &m, &cfg).unwrap();
        assert_eq!(r.status, Status::BudgetExhausted);
        assert!(r.cells_used <= 16);
    }

    #[test]
    fn lebesgue_backend_reports_abs_integral() {
        let m = WeightedMeasure::<f64>::unit();
        let f = scalar(FunctionSpec::trig(1.0, 2.0 * std::f64::consts::PI, 0.0).unwrap());
        let r = integrate(
            &f,
            &m,
            &QuadratureConfig::with_tol(1e-10),
            Backend::Lebesgue,
        )
        .unwrap();
        assert!(r.scalar().abs() < 1e-10);
        assert!((r.abs_integral.unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn weighted_measure() {
        let m = WeightedMeasure::<f64>::unit()
            .with_weight(FunctionSpec::constant(3.0))
            .unwrap();
        let r = hk_integrate(
            &scalar(FunctionSpec::identity()),
            &m,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((r.scalar() - 1.5).abs() < 1e-8);
    }

    #[test]
    fn f32_run() {
        let m = WeightedMeasure::<f32>::unit();
        let cfg = QuadratureConfig::<f32>::with_tol(1e-5);
        let r = hk_integrate(&scalar(FunctionSpec::monomial(2.0).unwrap()), &m, &cfg).unwrap();
        assert!(r.is_converged());
        assert!((r.scalar() - 1.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn config_validation() {
        let base = QuadratureConfig::<f64>::default();
        assert!(base.validate(0.0, 1.0).is_ok());
        assert!(QuadratureConfig { tol: 0.0, ..base }
            .validate(0.0, 1.0)
            .is_err());
        assert!(QuadratureConfig {
            max_cells: 3,
            ..base
        }
        .validate(0.0, 1.0)
        .is_err());
        assert!(QuadratureConfig {
            h_max: Some(2.0),
            ..base
        }
        .validate(0.0, 1.0)
        .is_err());
        assert!(QuadratureConfig {
            singular_shrink_ratio: 1.0,
            ..base
        }
        .validate(0.0, 1.0)
        .is_err());
    }
}
