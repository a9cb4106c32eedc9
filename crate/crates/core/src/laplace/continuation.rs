//! Rational approximation in barycentric form by the AAA algorithm
//! (Nakatsukasa, Sete and Trefethen), used to continue numerically sampled
//! Laplace images off the line where they were computed.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `r(z) = sum_j w_j f_j / (z - z_j) / sum_j w_j / (z - z_j)`.
#[derive(Clone, Debug)]
pub struct RationalApproximant {
    support: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl RationalApproximant {
    /// Greedy AAA fit: adds the worst-approximated sample as a support point
    /// until the maximum deviation is below `rel_tol * max |F|` or
    /// `max_terms` support points are in use.
    pub fn fit(
        points: &[Complex64],
        values: &[Complex64],
        rel_tol: f64,
        max_terms: usize,
    ) -> Result<Self> {
        if points.len() != values.len() || points.is_empty() {
            return Err(Error::Domain(
                "AAA needs equally many points and values".into(),
            ));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite("AAA sample values must be finite".into()));
        }
        let m = points.len();
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tol = rel_tol * scale;
        let mean = values.iter().fold(Complex64::new(0.0, 0.0), |a, v| a + v) / m as f64;
        let mut approx = vec![mean; m];
        let mut chosen: Vec<usize> = Vec::new();
        let mut in_support = vec![false; m];
        let mut weights: Vec<Complex64>;
        let limit = max_terms.min(m / 2).max(1);
        loop {
            let j = (0..m)
                .filter(|&i| !in_support[i])
                .max_by(|&a, &b| {
                    (values[a] - approx[a])
                        .norm()
                        .total_cmp(&(values[b] - approx[b]).norm())
                })
                .expect("more samples than support points");
            chosen.push(j);
            in_support[j] = true;
            let rows: Vec<usize> = (0..m).filter(|&i| !in_support[i]).collect();
            let n = chosen.len();
            let loewner = DMatrix::from_fn(rows.len(), n, |r, c| {
                let i = rows[r];
                let k = chosen[c];
                (values[i] - values[k]) / (points[i] - points[k])
            });
            let svd = loewner.svd(false, true);
            let v_t = svd.v_t.ok_or_else(|| {
                Error::NotConverged("AAA singular value decomposition failed".into())
            })?;
            let smallest = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("nonempty");
            weights = (0..n).map(|c| v_t[(smallest, c)].conj()).collect();
            let candidate = RationalApproximant {
                support: chosen.iter().map(|&k| points[k]).collect(),
                values: chosen.iter().map(|&k| values[k]).collect(),
                weights: weights.clone(),
            };
            for i in 0..m {
                approx[i] = if in_support[i] {
                    values[i]
                } else {
                    candidate.eval(points[i])
                };
            }
            let err = (0..m)
                .map(|i| (values[i] - approx[i]).norm())
                .fold(0.0, f64::max);
            if err <= tol || n >= limit {
                break;
            }
        }
        Ok(RationalApproximant {
            support: chosen.iter().map(|&k| points[k]).collect(),
            values: chosen.iter().map(|&k| values[k]).collect(),
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((&zj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let diff = z - zj;
            if diff.norm() == 0.0 {
                return fj;
            }
            let c = wj / diff;
            num += c * fj;
            den += c;
        }
        num / den
    }

    /// Poles of the approximant: the finite eigenvalues of the pencil
    /// `(E, B)` with `E = [[0, w^T], [1, diag(z)]]` and `B = diag(0, 1, ..., 1)`,
    /// obtained from the standard eigenproblem of `(E - c B)^{-1} B`.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.support.len();
        if n < 2 {
            return Ok(Vec::new());
        }
        let centre = self
            .support
            .iter()
            .fold(Complex64::new(0.0, 0.0), |a, z| a + z)
            / n as f64;
        let spread = self
            .support
            .iter()
            .map(|z| (z - centre).norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let shift = centre + Complex64::new(0.3172 * spread, 0.2213 * spread);
        let size = n + 1;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let e = DMatrix::from_fn(size, size, |i, j| match (i, j) {
            (0, 0) => zero,
            (0, j) => self.weights[j - 1],
            (_, 0) => one,
            (i, j) if i == j => self.support[i - 1],
            _ => zero,
        });
        let b = DMatrix::from_fn(size, size, |i, j| if i == j && i > 0 { one } else { zero });
        let shifted = &e - &b * shift;
        let inv = shifted.try_inverse().ok_or_else(|| {
            Error::NotConverged("AAA pole pencil is singular at the shift".into())
        })?;
        let m = inv * b;
        let schur = Schur::try_new(m, 1e-15, 10_000).ok_or_else(|| {
            Error::NotConverged("eigenvalues of the AAA pencil did not converge".into())
        })?;
        let mu = schur.eigenvalues().ok_or_else(|| {
            Error::NotConverged("eigenvalues of the AAA pencil are unavailable".into())
        })?;
        let largest = mu.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(mu
            .iter()
            .filter(|v| v.norm() > 1e-12 * largest)
            .map(|v| shift + one / v)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line_samples(f: impl Fn(Complex64) -> Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut pts = vec![c(1.0, 0.0)];
        for i in 0..30 {
            let y = 0.05 * (1200f64).powf(i as f64 / 29.0);
            pts.push(c(1.0, y));
            pts.push(c(1.0, -y));
        }
        let vals = pts.iter().map(|&z| f(z)).collect();
        (pts, vals)
    }

    #[test]
    fn recovers_a_rational_function_and_its_poles() {
        let f = |s: Complex64| 1.0 / ((s + 1.0) * (s * s + 4.0));
        let (pts, vals) = line_samples(f);
        let r = RationalApproximant::fit(&pts, &vals, 1e-13, 40).unwrap();
        for z in [c(-3.0, 0.5), c(-0.5, 1.0), c(0.2, -5.0), c(-10.0, 10.0)] {
            assert!(
                (r.eval(z) - f(z)).norm() < 1e-10 * f(z).norm().max(1e-3),
                "z={z}"
            );
        }
        let mut poles = r.poles().unwrap();
        poles.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert_eq!(poles.len(), 3, "{poles:?}");
        assert!((poles[0] - c(0.0, -2.0)).norm() < 1e-8);
        assert!((poles[1] - c(-1.0, 0.0)).norm() < 1e-8);
        assert!((poles[2] - c(0.0, 2.0)).norm() < 1e-8);
    }

    #[test]
    fn interpolates_at_support_points() {
        let f = |s: Complex64| (s + 3.0).ln();
        let (pts, vals) = line_samples(f);
        let r = RationalApproximant::fit(&pts, &vals, 1e-13, 40).unwrap();
        assert!(!r.is_empty());
        for (p, v) in pts.iter().zip(&vals) {
            assert!((r.eval(*p) - v).norm() < 1e-11);
        }
    }
}
