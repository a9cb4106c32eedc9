//! Efros composition for the family `tau(t, u) = sqrt(t^2 - u^2)`.
//!
//! The base identity in two dimensions is
//! `L[J0(k sqrt(t^2 - u^2)) Theta(t - u)](s) = exp(-u P) / P` with
//! `P = sqrt(s^2 + k^2)`. Integrating it against `f(u) du` gives the image
//! `f^(P) / P`. In space, `J0(k tau)` is the transform of the isotropic shell
//! `delta(r - tau) / (2 pi r)`, and the `u` integral collapses on the roots of
//! `tau(t, u) = r`, which yields the space-time side of row 2.1.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sqrt_s2_k2, PairDescriptor, TestOriginal};
use crate::error::{Error, Result};
use crate::laplace::TimeOriginal;
use crate::numerics::{bessel_j, BesselOrder};
use crate::radial_fourier::Dimension;

/// A solution `u` of `tau(t, u) = r` with `jacobian = |d tau / d u|` there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfrosRoot {
    pub u: f64,
    pub jacobian: f64,
}

/// Roots of `sqrt(t^2 - u^2) = r`: one root `u = sqrt(t^2 - r^2)` with
/// jacobian `u / r` when `0 < r < t`, none otherwise.
pub fn roots_tau(r: f64, t: f64) -> Vec<EfrosRoot> {
    if r > 0.0 && r < t {
        let u = (t * t - r * r).sqrt();
        vec![EfrosRoot { u, jacobian: u / r }]
    } else {
        Vec::new()
    }
}

impl PairDescriptor {
    /// Roots of the row's Efros map, or `None` for rows without one.
    pub fn efros_roots(&self, r: f64, t: f64) -> Option<Vec<EfrosRoot>> {
        self.has_efros_tau.then(|| roots_tau(r, t))
    }
}

/// The base original `t -> J0(k sqrt(t^2 - u^2))`, zero for `t < u`.
pub fn base_pair_original(k: f64, u: f64) -> TimeOriginal {
    let mut original = TimeOriginal::new(
        move |t| {
            if t < u {
                0.0
            } else {
                bessel_j(BesselOrder::integer(0), k * (t * t - u * u).sqrt()).unwrap_or(f64::NAN)
            }
        },
        0.0,
    );
    if u > 0.0 {
        original.breakpoints.push(u);
    }
    original
}

/// The base image `exp(-u P) / P`, `P = sqrt(s^2 + k^2)`.
pub fn base_pair_image(k: f64, u: f64, s: Complex64) -> Complex64 {
    let p = sqrt_s2_k2(s, k);
    (-u * p).exp() / p
}

/// Both sides of the base identity integrated against `f(u) du`.
#[derive(Clone, Debug)]
pub struct ComposedPair {
    f: TestOriginal,
}

impl ComposedPair {
    /// `sum_n f(u_n) / (2 pi r |d tau / d u|(u_n))`, which simplifies to
    /// `f(u_1) / (2 pi u_1)`; the `r = 0` value is that limit.
    pub fn spacetime_side(&self, r: f64, t: f64) -> f64 {
        if r == 0.0 && t > 0.0 {
            return self.f.f(t) / (2.0 * PI * t);
        }
        roots_tau(r, t)
            .iter()
            .map(|root| self.f.f(root.u) / (2.0 * PI * r * root.jacobian))
            .sum()
    }

    /// `int f(u) exp(-u P) / P du = f^(P) / P`.
    pub fn fl_side(&self, k: f64, s: Complex64) -> Complex64 {
        let p = sqrt_s2_k2(s, k);
        self.f.fhat(p) / p
    }
}

/// Composes the two-dimensional base pair with `f`; only `d = 2` carries the
/// `J0` base identity.
pub fn efros_compose(f: &TestOriginal, d: Dimension) -> Result<ComposedPair> {
    if d.get() != 2 {
        return Err(Error::DimensionConstraint {
            pair: "efros".into(),
            d: d.get(),
            constraint: "d = 2".into(),
        });
    }
    Ok(ComposedPair { f: f.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace::forward_laplace;
    use crate::numerics::QuadratureSpec;
    use crate::pairs::{catalog_list, lookup, parse_original};

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn roots_examples() {
        let roots = roots_tau(3.0, 5.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].u - 4.0).abs() < 1e-15 && (roots[0].jacobian - 4.0 / 3.0).abs() < 1e-15);
        assert!(roots_tau(5.0, 3.0).is_empty());
        assert!(roots_tau(2.0, 2.0).is_empty());
        assert!(lookup("1.1").unwrap().efros_roots(1.0, 2.0).is_none());
        assert_eq!(lookup("2.1").unwrap().efros_roots(3.0, 5.0).unwrap(), roots);
    }

    #[test]
    fn composition_lands_on_the_two_dimensional_row() {
        let row = lookup("2.1").unwrap();
        let d = dim(2);
        for f in catalog_list() {
            let pair = efros_compose(&f, d).unwrap();
            for (r, t) in [(0.0, 1.0), (0.3, 0.5), (3.0, 5.0), (1.0, 4.0), (2.0, 1.0)] {
                let want = row.eval_spacetime(d, &f, r, t).unwrap();
                let got = pair.spacetime_side(r, t);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1e-300),
                    "{} r={r} t={t}",
                    f.id
                );
            }
            for k in [0.0, 0.5, 1.0, 2.0] {
                for s in [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(2.5, 3.0),
                    Complex64::new(1.5, -7.0),
                ] {
                    let got = pair.fl_side(k, s);
                    let want = row.fl_value(d, k, s, |w| f.fhat(w));
                    assert!((got - want).norm() <= 1e-12 * want.norm(), "{} k={k}", f.id);
                }
            }
        }
        let f = parse_original("exp_decay:1").unwrap();
        let pair = efros_compose(&f, d).unwrap();
        assert!(
            (pair.fl_side(1.0, Complex64::new(1.0, 0.0)).re - 0.292_893_218_813_452_5).abs()
                < 1e-15
        );
        assert!((pair.spacetime_side(3.0, 5.0) - 7.287_561_162_570_484e-4).abs() < 1e-15);
        let unit = efros_compose(&parse_original("unit").unwrap(), d).unwrap();
        assert_eq!(
            unit.fl_side(0.0, Complex64::new(1.0, 0.0)),
            Complex64::new(1.0, 0.0)
        );
        assert!(efros_compose(&f, dim(3)).is_err());
    }

    #[test]
    fn base_pair_holds_numerically() {
        let spec = QuadratureSpec::default();
        for (k, u) in [(1.0, 0.5), (0.0, 1.0), (1.0, 0.0), (2.0, 1.5)] {
            let original = base_pair_original(k, u);
            for s in [1.0, 2.0] {
                let s = Complex64::new(s, 0.0);
                let got = forward_laplace(&original, s, &spec).unwrap().value;
                let want = base_pair_image(k, u, s);
                assert!(
                    (got - want).norm() < 1e-9 * want.norm(),
                    "k={k} u={u}: {got} vs {want}"
                );
            }
        }
    }
}
