//! Numerical forward Laplace transforms at complex `s` and Talbot inversion.

mod continuation;
mod talbot;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_adaptive, integrate_oscillatory, integrate_semi_infinite_scaled, IntegralResult,
    OscillatoryKernel, QuadratureSpec,
};

pub use continuation::RationalApproximant;
pub use talbot::{inverse_laplace, TalbotResult};

/// Default distance kept between `Re s` and the growth abscissa.
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Beyond this `|Im s|` the forward transform switches to the zero-partition
/// oscillatory engine on unbounded supports.
const OSCILLATORY_IM_THRESHOLD: f64 = 50.0;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A Dirac atom `weight * delta(t - location)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A Laplace original: a function of `t >= 0` bounded by `C exp(sigma0 t)`,
/// optionally carrying one Dirac atom that is always transformed analytically.
#[derive(Clone)]
pub struct TimeOriginal {
    eval: RealFn,
    pub sigma0: f64,
    pub atom: Option<Atom>,
    pub support_upper: f64,
    /// Interior points where the function is not smooth (jumps, kinks).
    pub breakpoints: Vec<f64>,
}

impl fmt::Debug for TimeOriginal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeOriginal")
            .field("sigma0", &self.sigma0)
            .field("atom", &self.atom)
            .field("support_upper", &self.support_upper)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl TimeOriginal {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, sigma0: f64) -> Self {
        TimeOriginal {
            eval: Arc::new(eval),
            sigma0,
            atom: None,
            support_upper: f64::INFINITY,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_atom(mut self, location: f64, weight: f64) -> Self {
        self.atom = Some(Atom { location, weight });
        self
    }

    pub fn with_support_upper(mut self, upper: f64) -> Self {
        self.support_upper = upper;
        self
    }

    /// The smooth part at `t`; zero for `t < 0` and beyond the support.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.support_upper {
            0.0
        } else {
            (self.eval)(t)
        }
    }

    /// `f(t - a) Theta(t - a)`, whose image is `exp(-a s) f^(s)`.
    pub fn shifted(&self, a: f64) -> TimeOriginal {
        let inner = self.clone();
        let mut breakpoints: Vec<f64> = self.breakpoints.iter().map(|b| b + a).collect();
        breakpoints.insert(0, a);
        TimeOriginal {
            eval: Arc::new(move |t| if t < a { 0.0 } else { inner.eval(t - a) }),
            sigma0: self.sigma0,
            atom: self.atom.map(|at| Atom {
                location: at.location + a,
                weight: at.weight,
            }),
            support_upper: self.support_upper + a,
            breakpoints,
        }
    }

    /// `exp(-b t) f(t)`, whose image is `f^(s + b)`.
    pub fn damped(&self, b: f64) -> TimeOriginal {
        let inner = self.clone();
        TimeOriginal {
            eval: Arc::new(move |t| (-b * t).exp() * inner.eval(t)),
            sigma0: self.sigma0 - b,
            atom: self.atom.map(|at| Atom {
                location: at.location,
                weight: at.weight * (-b * at.location).exp(),
            }),
            support_upper: self.support_upper,
            breakpoints: self.breakpoints.clone(),
        }
    }

    /// `alpha f + beta g` for originals without atoms.
    pub fn linear_combination(
        alpha: f64,
        f: &TimeOriginal,
        beta: f64,
        g: &TimeOriginal,
    ) -> Result<TimeOriginal> {
        if f.atom.is_some() || g.atom.is_some() {
            return Err(Error::Domain(
                "linear combinations of originals with atoms are not supported".into(),
            ));
        }
        let (f2, g2) = (f.clone(), g.clone());
        let mut breakpoints: Vec<f64> = f
            .breakpoints
            .iter()
            .chain(&g.breakpoints)
            .copied()
            .collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(TimeOriginal {
            eval: Arc::new(move |t| alpha * f2.eval(t) + beta * g2.eval(t)),
            sigma0: f.sigma0.max(g.sigma0),
            atom: None,
            support_upper: f.support_upper.max(g.support_upper),
            breakpoints,
        })
    }
}

/// A Laplace image, analytic for `Re s > sigma0`.
///
/// `singular_height` bounds `|Im|` of the singularities off the real axis; the
/// Talbot contour is widened to enclose them.
#[derive(Clone)]
pub struct LaplaceImage {
    eval: ComplexFn,
    pub sigma0: f64,
    pub singular_height: f64,
}

impl fmt::Debug for LaplaceImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplaceImage")
            .field("sigma0", &self.sigma0)
            .field("singular_height", &self.singular_height)
            .finish()
    }
}

impl LaplaceImage {
    pub fn new(eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static, sigma0: f64) -> Self {
        LaplaceImage {
            eval: Arc::new(eval),
            sigma0,
            singular_height: 0.0,
        }
    }

    pub fn with_singular_height(mut self, height: f64) -> Self {
        self.singular_height = height;
        self
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        (self.eval)(s)
    }

    /// `exp(-a s) F(s)`.
    pub fn shifted(&self, a: f64) -> LaplaceImage {
        let inner = self.clone();
        LaplaceImage {
            eval: Arc::new(move |s| (-a * s).exp() * inner.eval(s)),
            sigma0: self.sigma0,
            singular_height: self.singular_height,
        }
    }

    /// `F(s + b)`.
    pub fn damped(&self, b: f64) -> LaplaceImage {
        let inner = self.clone();
        LaplaceImage {
            eval: Arc::new(move |s| inner.eval(s + b)),
            sigma0: self.sigma0 - b,
            singular_height: self.singular_height,
        }
    }
}

/// `int_0^inf exp(-s t) f(t) dt` plus the closed-form image of the atom.
pub fn forward_laplace(
    f: &TimeOriginal,
    s: Complex64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<Complex64>> {
    spec.validate()?;
    if !(s.re > f.sigma0 + DEFAULT_MARGIN) || !s.im.is_finite() {
        return Err(Error::Domain(format!(
            "Re s = {} must exceed the growth abscissa {} by {DEFAULT_MARGIN}",
            s.re, f.sigma0
        )));
    }
    let integrand = |t: f64| {
        let v = f.eval(t);
        if v == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (-s * t).exp() * v
        }
    };
    // Integrate piecewise between breakpoints, then the tail.
    let mut cuts: Vec<f64> = f
        .breakpoints
        .iter()
        .copied()
        .filter(|&b| b > 0.0 && b < f.support_upper)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = cuts.len() + 1;
    let piece_spec = spec.scaled(1.0 / pieces as f64);
    let mut total = IntegralResult::exact_zero();
    let mut lo = 0.0;
    for &c in &cuts {
        let piece = integrate_adaptive(integrand, lo, c, &piece_spec)?;
        total = total.plus(piece, spec);
        lo = c;
    }
    let tail = if f.support_upper.is_finite() {
        integrate_adaptive(integrand, lo, f.support_upper, &piece_spec)?
    } else if s.im.abs() > OSCILLATORY_IM_THRESHOLD {
        let envelope = |t: f64| (-s.re * t).exp() * f.eval(t);
        let omega = s.im.abs();
        let re = integrate_oscillatory(
            envelope,
            OscillatoryKernel::Cos { omega },
            lo,
            &piece_spec.scaled(0.5),
        )?;
        let im = integrate_oscillatory(
            envelope,
            OscillatoryKernel::Sin { omega },
            lo,
            &piece_spec.scaled(0.5),
        )?;
        let sign = -s.im.signum();
        let error = re.error_estimate + im.error_estimate;
        let value = Complex64::new(re.value, sign * im.value);
        IntegralResult {
            value,
            error_estimate: error,
            converged: re.converged
                && im.converged
                && error <= piece_spec.tolerance_for(value.norm()),
            evaluations: re.evaluations + im.evaluations,
        }
    } else {
        let decay = s.re - f.sigma0;
        let scale = (1.0 / decay).clamp(0.1, 1.0);
        integrate_semi_infinite_scaled(integrand, lo, scale, &piece_spec)?
    };
    total = total.plus(tail, spec);
    if let Some(atom) = f.atom {
        total.value += atom.weight * (-s * atom.location).exp();
        total.converged =
            total.converged && total.error_estimate <= spec.tolerance_for(total.value.norm());
    }
    Ok(total)
}

/// Round trip `f -> forward_laplace -> inverse_laplace` on a grid of times.
///
/// Talbot nodes lie far to the left of any line where the forward integral
/// converges, so the numeric image is sampled on `Re s = sigma0 + 1` and
/// continued analytically by a rational (AAA) approximant, which is then
/// inverted. Returns the largest `|f_rt(t) - f(t)| / max(|f(t)|, 1e-12)`.
pub fn roundtrip_check(
    f: &TimeOriginal,
    t_grid: &[f64],
    nodes: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if f.atom.is_some() {
        return Err(Error::Domain(
            "round trip needs an original without atoms".into(),
        ));
    }
    if t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::Domain(
            "round-trip times must be positive and finite".into(),
        ));
    }
    let image = continued_image(f, spec)?;
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let got = inverse_laplace(&image, t, nodes)?.value;
        let want = f.eval(t);
        worst = worst.max((got - want).abs() / want.abs().max(1e-12));
    }
    Ok(worst)
}

/// The numeric image of `f` on the line `Re s = sigma0 + 1`, continued to the
/// whole plane by a rational approximant and packaged for inversion.
pub fn continued_image(f: &TimeOriginal, spec: &QuadratureSpec) -> Result<LaplaceImage> {
    let line = f.sigma0 + 1.0;
    let mut points = Vec::new();
    points.push(Complex64::new(line, 0.0));
    let count = 40;
    let (lo, hi): (f64, f64) = (0.05, 60.0);
    for i in 0..count {
        let y = lo * (hi / lo).powf(i as f64 / (count - 1) as f64);
        points.push(Complex64::new(line, y));
        points.push(Complex64::new(line, -y));
    }
    for dx in [0.5, 1.0, 2.0, 4.0, 8.0] {
        points.push(Complex64::new(line + dx, 0.0));
    }
    let values = points
        .iter()
        .map(|&s| forward_laplace(f, s, spec)?.into_value("forward Laplace sample"))
        .collect::<Result<Vec<_>>>()?;
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(LaplaceImage::new(|_| Complex64::new(0.0, 0.0), f.sigma0));
    }
    let approx = RationalApproximant::fit(&points, &values, 1e-13, 60)?;
    // Held-out check between the sample points.
    for i in 0..count - 1 {
        let y = lo * (hi / lo).powf((i as f64 + 0.5) / (count - 1) as f64);
        let s = Complex64::new(line, y);
        let want = forward_laplace(f, s, spec)?.into_value("forward Laplace check")?;
        let err = (approx.eval(s) - want).norm();
        if err > 1e-9 * scale {
            return Err(Error::NotConverged(format!(
                "rational continuation of the numeric image misses a held-out point by {err:e}"
            )));
        }
    }
    let height = approx
        .poles()?
        .iter()
        .filter(|p| p.re > f.sigma0 - 50.0)
        .map(|p| p.im.abs())
        .fold(0.0, f64::max);
    let abscissa = f.sigma0;
    Ok(LaplaceImage::new(move |s| approx.eval(s), abscissa).with_singular_height(height))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn forward_examples() {
        let f = TimeOriginal::new(|t: f64| (-t).exp(), -1.0);
        let v = forward_laplace(&f, c(1.0, 0.0), &spec()).unwrap();
        assert!(v.converged && (v.value - c(0.5, 0.0)).norm() < 1e-12);
        let one = TimeOriginal::new(|_| 1.0, 0.0);
        let v = forward_laplace(&one, c(2.0, 0.0), &spec()).unwrap();
        assert!((v.value - c(0.5, 0.0)).norm() < 1e-12);
        let atom = TimeOriginal::new(|_| 0.0, 0.0).with_atom(1.5, 1.0);
        let s = c(0.7, 2.0);
        let v = forward_laplace(&atom, s, &spec()).unwrap();
        assert!((v.value - (-1.5 * s).exp()).norm() < 1e-15);
    }

    #[test]
    fn forward_on_complex_and_large_imaginary_arguments() {
        let f = TimeOriginal::new(|t: f64| t * (-t).exp(), -1.0);
        for s in [c(0.5, 3.0), c(0.2, -10.0), c(1.0, 75.0), c(0.1, -200.0)] {
            let v = forward_laplace(&f, s, &spec()).unwrap();
            let want = 1.0 / ((s + 1.0) * (s + 1.0));
            assert!(v.converged, "{s}: {v:?}");
            assert!(
                (v.value - want).norm() < 1e-11,
                "{s}: {} vs {want}",
                v.value
            );
        }
    }

    #[test]
    fn forward_rejects_points_left_of_the_abscissa() {
        let f = TimeOriginal::new(|t: f64| t.exp(), 1.0);
        assert!(forward_laplace(&f, c(1.05, 0.0), &spec()).is_err());
        assert!(forward_laplace(&f, c(1.2, 0.0), &spec()).is_ok());
    }

    #[test]
    fn compact_support() {
        // indicator of [0, 2]: (1 - e^{-2s}) / s
        let f = TimeOriginal::new(|_| 1.0, 0.0).with_support_upper(2.0);
        let s = c(0.5, 1.0);
        let v = forward_laplace(&f, s, &spec()).unwrap();
        assert!((v.value - (1.0 - (-2.0 * s).exp()) / s).norm() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        let img = LaplaceImage::new(|s| 1.0 / s, 0.0);
        assert!((inverse_laplace(&img, 3.0, 32).unwrap().value - 1.0).abs() < 1e-10);
        let img = LaplaceImage::new(|s| 1.0 / (s + 1.0), -1.0);
        let v = inverse_laplace(&img, 1.0, 32).unwrap().value;
        assert!((v - (-1.0f64).exp()).abs() < 1e-10);
        let img = LaplaceImage::new(|s| 1.0 / (s * s + 1.0), 0.0).with_singular_height(1.0);
        let v = inverse_laplace(&img, std::f64::consts::FRAC_PI_2, 48)
            .unwrap()
            .value;
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn roundtrip_examples() {
        let f = TimeOriginal::new(|t: f64| (-t).exp(), -1.0);
        assert!(roundtrip_check(&f, &[0.5, 1.0, 2.0], 48, &spec()).unwrap() <= 1e-8);
        let f = TimeOriginal::new(|t: f64| t * (-t).exp(), -1.0);
        assert!(roundtrip_check(&f, &[1.0], 48, &spec()).unwrap() <= 1e-8);
        let zero = TimeOriginal::new(|_| 0.0, 0.0);
        assert_eq!(
            roundtrip_check(&zero, &[1.0, 2.0], 48, &spec()).unwrap(),
            0.0
        );
        let atom = TimeOriginal::new(|_| 0.0, 0.0).with_atom(0.0, 1.0);
        assert!(roundtrip_check(&atom, &[1.0], 48, &spec()).is_err());
    }
}
