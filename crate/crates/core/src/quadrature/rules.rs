//! Nested Gauss-Kronrod pairs on a single cell.
//!
//! Both rules of a pair share sample points, so one pass over the cell gives
//! the coarse and the refined estimate. All weights are positive, so each
//! estimate is a tagged Riemann sum over a partition of the cell into
//! sub-cells of length `w_i * h`.

// Nodes and weights are quoted to the digits of the standard tables.
#![allow(clippy::excessive_precision)]

use crate::Scalar;

/// A Gauss rule embedded in a Kronrod extension on `[-1, 1]`.
///
/// `nodes` holds the non-negative Kronrod abscissae in decreasing order, the
/// last one being 0; the Gauss nodes are those with odd index.
#[derive(Debug)]
pub struct KronrodPair {
    pub nodes: &'static [f64],
    pub kronrod_weights: &'static [f64],
    /// Weights of the Gauss nodes `nodes[1], nodes[3], ...`, plus the centre
    /// weight when the Gauss rule has odd order.
    pub gauss_weights: &'static [f64],
    pub gauss_has_centre: bool,
}

pub static GK15: KronrodPair = KronrodPair {
    nodes: &[
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.0,
    ],
    kronrod_weights: &[
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ],
    gauss_weights: &[
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ],
    gauss_has_centre: true,
};

pub static GK21: KronrodPair = KronrodPair {
    nodes: &[
        0.995657163025808080735527280689003,
        0.973906528517171720077964012084452,
        0.930157491355708226001207180059508,
        0.865063366688984510732096688423493,
        0.780817726586416897063717578345042,
        0.679409568299024406234327365114874,
        0.562757134668604683339000099272694,
        0.433395394129247190799265943165784,
        0.294392862701460198131126603103866,
        0.148874338981631210884826001129720,
        0.0,
    ],
    kronrod_weights: &[
        0.011694638867371874278064396062192,
        0.032558162307964727478818972459390,
        0.054755896574351996031381300244580,
        0.075039674810919952767043140916190,
        0.093125454583697605535065465083366,
        0.109387158802297641899210590325805,
        0.123491976262065851077208707224200,
        0.134709217311473325928054001771707,
        0.142775938577060080797094273138717,
        0.147739104901338491374841515972068,
        0.149445554002916905664936468389821,
    ],
    gauss_weights: &[
        0.066671344308688137593568809893332,
        0.149451349150580593145776339657697,
        0.219086362515982043995534934228163,
        0.269266719309996355091226921569469,
        0.295524224714752870173892994651338,
    ],
    gauss_has_centre: false,
};

impl KronrodPair {
    /// Number of integrand evaluations per cell.
    pub fn points(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Sample points of the rule on `[lo, hi]`, left to right.
    pub fn abscissae<T: Scalar>(&self, lo: T, hi: T) -> Vec<T> {
        let centre = (lo + hi) / T::of(2.0);
        let half = (hi - lo) / T::of(2.0);
        let k = self.nodes.len();
        let mut xs = Vec::with_capacity(self.points());
        for &x in &self.nodes[..k - 1] {
            xs.push(centre - half * T::of(x));
        }
        xs.push(centre);
        for &x in self.nodes[..k - 1].iter().rev() {
            xs.push(centre + half * T::of(x));
        }
        xs
    }

    /// Applies both rules to samples laid out as in [`abscissae`](Self::abscissae).
    ///
    /// `samples` is row-major, `dim` values per point. Returns the Kronrod and
    /// Gauss estimates.
    pub fn apply<T: Scalar>(&self, samples: &[T], dim: usize, half_width: T) -> (Vec<T>, Vec<T>) {
        let k = self.nodes.len();
        let centre = k - 1;
        let mut kron = vec![T::zero(); dim];
        let mut gauss = vec![T::zero(); dim];
        for j in 0..k - 1 {
            let left = &samples[j * dim..(j + 1) * dim];
            let mirror = 2 * centre - j;
            let right = &samples[mirror * dim..(mirror + 1) * dim];
            let wk = T::of(self.kronrod_weights[j]);
            let gauss_w = if j % 2 == 1 {
                Some(T::of(self.gauss_weights[j / 2]))
            } else {
                None
            };
            for d in 0..dim {
                let pair = left[d] + right[d];
                kron[d] = kron[d] + wk * pair;
                if let Some(wg) = gauss_w {
                    gauss[d] = gauss[d] + wg * pair;
                }
            }
        }
        let mid = &samples[centre * dim..(centre + 1) * dim];
        let wk = T::of(self.kronrod_weights[k - 1]);
        for d in 0..dim {
            kron[d] = (kron[d] + wk * mid[d]) * half_width;
            if self.gauss_has_centre {
                let wg = T::of(*self.gauss_weights.last().expect("gauss weights"));
                gauss[d] = gauss[d] + wg * mid[d];
            }
            gauss[d] = gauss[d] * half_width;
        }
        (kron, gauss)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_monomial(pair: &KronrodPair, deg: i32) -> (f64, f64) {
        let xs = pair.abscissae(0.0_f64, 1.0);
        let samples: Vec<f64> = xs.iter().map(|x| x.powi(deg)).collect();
        let (k, g) = pair.apply(&samples, 1, 0.5);
        (k[0], g[0])
    }

    #[test]
    fn gk15_degrees_of_exactness() {
        for deg in 0..=22 {
            let exact = 1.0 / (deg as f64 + 1.0);
            let (k, g) = integrate_monomial(&GK15, deg);
            assert!((k - exact).abs() < 1e-14, "K15 deg {deg}");
            if deg <= 13 {
                assert!((g - exact).abs() < 1e-14, "G7 deg {deg}");
            }
        }
        let (_, g) = integrate_monomial(&GK15, 14);
        assert!((g - 1.0 / 15.0).abs() > 1e-10);
    }

    #[test]
    fn gk21_degrees_of_exactness() {
        for deg in 0..=31 {
            let exact = 1.0 / (deg as f64 + 1.0);
            let (k, g) = integrate_monomial(&GK21, deg);
            assert!((k - exact).abs() < 1e-14, "K21 deg {deg}");
            if deg <= 19 {
                assert!((g - exact).abs() < 1e-14, "G10 deg {deg}");
            }
        }
    }

    #[test]
    fn abscissae_are_interior_and_sorted() {
        for pair in [&GK15, &GK21] {
            let xs = pair.abscissae(2.0_f64, 3.0);
            assert_eq!(xs.len(), pair.points());
            assert!(xs.windows(2).all(|w| w[0] < w[1]));
            assert!(xs[0] > 2.0 && *xs.last().unwrap() < 3.0);
        }
    }
}
