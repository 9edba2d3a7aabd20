use crate::catalog::{NormSpec, VectorFunctionSpec};
use crate::error::Result;
use crate::Scalar;

/// Anything the integrator can sample: a vector-valued map on an interval with
/// declared singular points and breakpoints.
pub trait Integrand<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    /// Writes the value at `t` into `out` (length [`dim`](Self::dim)).
    fn eval(&self, t: T, out: &mut [T]) -> Result<()>;

    /// Points where the value is undefined or unbounded; treated as improper
    /// endpoints.
    fn singular_points(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Jump locations; used as cell boundaries so no rule straddles them.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Norm of the target space.
    fn norm(&self, x: &[T]) -> T;
}

impl<T: Scalar> Integrand<T> for VectorFunctionSpec {
    fn dim(&self) -> usize {
        VectorFunctionSpec::dim(self)
    }

    fn eval(&self, t: T, out: &mut [T]) -> Result<()> {
        self.evaluate_into(t, out)
    }

    fn singular_points(&self) -> Vec<f64> {
        VectorFunctionSpec::singular_points(self)
    }

    fn breakpoints(&self) -> Vec<f64> {
        VectorFunctionSpec::breakpoints(self)
    }

    fn norm(&self, x: &[T]) -> T {
        VectorFunctionSpec::norm(self).norm(x)
    }
}

/// Samples through `evaluate_raw`, so spikes and exception values are seen.
#[derive(Debug, Clone, Copy)]
pub struct Raw<'a>(pub &'a VectorFunctionSpec);

impl<T: Scalar> Integrand<T> for Raw<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, t: T, out: &mut [T]) -> Result<()> {
        self.0.evaluate_raw_into(t, out)
    }

    fn singular_points(&self) -> Vec<f64> {
        self.0.singular_points()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.0.breakpoints()
    }

    fn norm(&self, x: &[T]) -> T {
        self.0.norm().norm(x)
    }
}

/// A scalar closure with declared metadata.
pub struct ScalarFn<F> {
    f: F,
    singular: Vec<f64>,
    breaks: Vec<f64>,
}

impl<F> ScalarFn<F> {
    pub fn new(f: F) -> Self {
        Self {
            f,
            singular: Vec::new(),
            breaks: Vec::new(),
        }
    }

    pub fn with_singular_points(mut self, points: Vec<f64>) -> Self {
        self.singular = points;
        self
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breaks = points;
        self
    }
}

impl<T: Scalar, F: Fn(T) -> Result<T> + Sync> Integrand<T> for ScalarFn<F> {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, t: T, out: &mut [T]) -> Result<()> {
        out[0] = (self.f)(t)?;
        Ok(())
    }

    fn singular_points(&self) -> Vec<f64> {
        self.singular.clone()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn norm(&self, x: &[T]) -> T {
        NormSpec::euclidean().norm(x)
    }
}
