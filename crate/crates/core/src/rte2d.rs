//! Isotropic radiative transfer in two dimensions.
//!
//! With celerity `c`, extinction length `ell` and an isotropic point source of
//! energy `A0` at `t = 0`, the directional average of the radiance is
//!
//! `i(r, t) = A0/(2 pi) [delta(r - ct)/r + exp(q/ell)/(ell q) Theta(ct - r)] exp(-ct/ell)`
//!
//! with `q = sqrt(c^2 t^2 - r^2)`. Its Fourier-Laplace image is
//! `A0 g(k, s + c/ell) / (1 - (c/ell) g(k, s + c/ell))` with the averaged
//! ballistic image `g(k, s) = 1/sqrt(s^2 + c^2 k^2)`. Directions are averaged
//! over the unit circle with normalised measure `dtheta / (2 pi)`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{inverse_laplace, LaplaceImage, TimeOriginal};
use crate::numerics::{bessel_j, integrate_adaptive, BesselOrder, IntegralResult, QuadratureSpec};
use crate::pairs::sqrt_s2_k2;
use crate::verify::{assemble, EngineSettings, PointOutcome, SamplePoint, VerificationReport};

/// Default relative tolerance of the transfer mixed-domain check.
pub const DEFAULT_RTE_TOLERANCE: f64 = 1e-5;

/// Physical parameters of the transfer problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportParams {
    /// Wave celerity (length per time).
    pub c: f64,
    /// Extinction length.
    pub ell: f64,
    /// Initial energy.
    #[serde(rename = "A0")]
    pub a0: f64,
}

impl TransportParams {
    pub fn new(c: f64, ell: f64, a0: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("ell", ell), ("A0", a0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(TransportParams { c, ell, a0 })
    }

    /// Extinction rate `c / ell`.
    pub fn rate(&self) -> f64 {
        self.c / self.ell
    }
}

/// The intensity at `(r, t)`, split into the regular part and the weight of
/// the ballistic shell `delta(r - ct)/r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityValue {
    pub smooth: f64,
    pub ballistic_weight: f64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "time must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// The space-time intensity. The ballistic shell sits at `r = ct`, where the
/// regular part is infinite, so that radius is rejected.
pub fn intensity(p: &TransportParams, r: f64, t: f64) -> Result<IntensityValue> {
    check_time(t)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "radius must be finite and >= 0, got {r}"
        )));
    }
    let ct = p.c * t;
    if r == ct {
        return Err(Error::Edge(format!(
            "r = ct = {ct} carries the ballistic shell"
        )));
    }
    let norm = p.a0 / (2.0 * PI);
    let smooth = if r < ct {
        let q = ((ct - r) * (ct + r)).sqrt();
        norm * ((q - ct) / p.ell).exp() / (p.ell * q)
    } else {
        0.0
    };
    Ok(IntensityValue {
        smooth,
        ballistic_weight: norm * (-ct / p.ell).exp(),
    })
}

/// `1/sqrt(s^2 + c^2 k^2)` on the principal branch.
pub fn fl_greens_avg(p: &TransportParams, k: f64, s: Complex64) -> Result<Complex64> {
    let ck = p.c * k;
    let w = s * s + ck * ck;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::Branch(format!(
            "s^2 + c^2 k^2 = {w} lies on the branch cut"
        )));
    }
    Ok(1.0 / w.sqrt())
}

/// `A0 g(k, s + c/ell) / (1 - (c/ell) g(k, s + c/ell))` for `Re s > 0`.
pub fn fl_intensity(p: &TransportParams, k: f64, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "fl_intensity needs Re s > 0, got {s}"
        )));
    }
    let g = fl_greens_avg(p, k, s + p.rate())?;
    let denominator = 1.0 - p.rate() * g;
    if denominator.norm() == 0.0 {
        return Err(Error::Pole(format!("diffusive pole at k={k}, s={s}")));
    }
    Ok(p.a0 * g / denominator)
}

/// [`fl_intensity`] continued to the whole plane minus the cut
/// `Re s = -c/ell, |Im s| <= ck`, for contour inversion.
pub fn fl_intensity_continued(p: &TransportParams, k: f64, s: Complex64) -> Complex64 {
    let g = 1.0 / sqrt_s2_k2(s + p.rate(), p.c * k);
    p.a0 * g / (1.0 - p.rate() * g)
}

/// The image at wavenumber `k` as an invertible [`LaplaceImage`]. Its
/// rightmost singularity is the diffusive pole
/// `-c/ell + sqrt((c/ell)^2 - c^2 k^2)` when `k < 1/ell`, otherwise the branch
/// points `-c/ell +- ick`.
pub fn intensity_image(p: &TransportParams, k: f64) -> LaplaceImage {
    let rate = p.rate();
    let ck = p.c * k;
    let abscissa = if ck < rate {
        -rate + ((rate - ck) * (rate + ck)).sqrt()
    } else {
        -rate
    };
    let params = *p;
    LaplaceImage::new(move |s| fl_intensity_continued(&params, k, s), abscissa)
        .with_singular_height(ck)
}

/// Fourier-Laplace image of the radiance in the direction at angle `theta`
/// to the wave vector:
/// `(A0 + (c/ell) i(k, s)) / (s + c/ell + i c k cos(theta))`.
pub fn fl_radiance(p: &TransportParams, k: f64, theta: f64, s: Complex64) -> Result<Complex64> {
    let average = fl_intensity(p, k, s)?;
    let directional = 1.0 / (s + p.rate() + Complex64::new(0.0, p.c * k * theta.cos()));
    Ok(directional * (p.a0 + p.rate() * average))
}

/// The resolvent original `delta(t) + (c/ell) exp(ct/ell)` with image
/// `s / (s - c/ell)`.
pub fn resolvent_original(p: &TransportParams) -> TimeOriginal {
    let rate = p.rate();
    TimeOriginal::new(move |t| rate * (rate * t).exp(), rate).with_atom(0.0, 1.0)
}

/// `s / (s - c/ell)`.
pub fn resolvent_image(p: &TransportParams) -> LaplaceImage {
    let rate = p.rate();
    LaplaceImage::new(move |s| s / (s - rate), rate)
}

/// `2 pi int_0^{ct} r smooth(r, t) J0(k r) dr` with `r = ct sin(theta)`,
/// which removes the inverse square root at the light cone.
pub fn smooth_transform(
    p: &TransportParams,
    k: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    check_time(t)?;
    let ct = p.c * t;
    let factor = p.a0 * ct / p.ell;
    let j0 = BesselOrder::integer(0);
    let integrand = |theta: f64| {
        let (sin, cos) = theta.sin_cos();
        let kernel = if k == 0.0 {
            1.0
        } else {
            bessel_j(j0, k * ct * sin).unwrap_or(f64::NAN)
        };
        factor * sin * (ct * (cos - 1.0) / p.ell).exp() * kernel
    };
    integrate_adaptive(integrand, 0.0, 0.5 * PI, spec)
}

/// Total energy at time `t`: the plane integral of the regular part plus the
/// ballistic content `A0 exp(-ct/ell)`. Equals `A0` exactly.
pub fn check_energy(p: &TransportParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let smooth = smooth_transform(p, 0.0, t, spec)?.into_value("smooth energy")?;
    Ok(smooth + p.a0 * (-p.c * t / p.ell).exp())
}

/// Compares the transform of the space-time intensity with the inverted
/// Fourier-Laplace image at `(k, t)` samples. The shell transforms in closed
/// form to `A0 J0(kct) exp(-ct/ell)`; the regular part is integrated
/// numerically.
pub fn verify_rte_mixed(
    p: &TransportParams,
    samples: &[(f64, f64)],
    settings: EngineSettings,
    tolerance: f64,
) -> Result<VerificationReport> {
    TransportParams::new(p.c, p.ell, p.a0)?;
    settings.quadrature.validate()?;
    let started = Instant::now();
    let outcomes = samples
        .par_iter()
        .map(|&(k, t)| {
            let point = || -> Result<(f64, f64)> {
                if !(k >= 0.0) || !k.is_finite() {
                    return Err(Error::Domain(format!(
                        "wavenumber must be finite and >= 0, got {k}"
                    )));
                }
                check_time(t)?;
                let rhs = inverse_laplace(&intensity_image(p, k), t, settings.nodes)?.value;
                let ct = p.c * t;
                let shell = p.a0 * bessel_j(BesselOrder::integer(0), k * ct)? * (-ct / p.ell).exp();
                let smooth = smooth_transform(p, k, t, &settings.quadrature)?
                    .into_value("smooth transform")?;
                Ok((shell + smooth, rhs))
            };
            match point() {
                Ok((lhs, rhs)) => PointOutcome {
                    lhs,
                    rhs,
                    error: None,
                },
                Err(e) => PointOutcome {
                    lhs: f64::NAN,
                    rhs: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let points = samples
        .iter()
        .map(|&(k, t)| SamplePoint::Mixed { k, t })
        .collect();
    Ok(assemble(
        "rte2d".into(),
        2,
        format!("resolvent c={} ell={} A0={}", p.c, p.ell, p.a0),
        points,
        outcomes,
        tolerance,
        settings,
        started,
    ))
}
