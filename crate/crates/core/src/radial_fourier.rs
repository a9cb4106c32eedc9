//! Isotropic Fourier analysis in `d` dimensions.
//!
//! For a function depending only on `r = |x|` the Fourier transform with kernel
//! `exp(-i k.x)` reduces to
//!
//! ```text
//! f^(k) = S_d int_0^inf f(r) r^{d-1} g_d(k, r) dr
//! f(r)  = S_d / (2 pi)^d int_0^inf f^(k) k^{d-1} g_d(k, r) dk
//! ```
//!
//! where `g_d(k, r)` is the average of `exp(-i k.x)` over the sphere of radius
//! `r`, a scaled Bessel function.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    bessel_j, bessel_j_scaled, gamma_fn, integrate_adaptive, integrate_oscillatory,
    integrate_semi_infinite_scaled, BesselOrder, IntegralResult, OscillatoryKernel, QuadratureSpec,
};

/// A spatial dimension `d >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Ok(Dimension(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Order `d/2 - 1` of the Bessel function in the kernel.
    pub fn bessel_order(self) -> BesselOrder {
        BesselOrder::for_dimension(self.0).expect("d >= 1")
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a profile decays at large argument; informs the quadrature strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayClass {
    Compact,
    Exponential,
    Gaussian,
    Algebraic,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of a nonnegative radius (or wavenumber) with support and
/// smoothness metadata.
///
/// Values outside `[support_lower, support_upper]` are zero. The singularity
/// flags declare integrable inverse-square-root type behaviour at the ends of
/// the support, which the transforms remove by a quadratic substitution.
#[derive(Clone)]
pub struct RadialProfile {
    eval: ScalarFn,
    pub support_lower: f64,
    pub support_upper: f64,
    pub singular_at_support_edge: bool,
    pub singular_at_origin: bool,
    pub decay_class: DecayClass,
    /// Characteristic length of the profile, used to size the first
    /// quadrature panel on unbounded supports.
    pub scale: f64,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support_lower", &self.support_lower)
            .field("support_upper", &self.support_upper)
            .field("singular_at_support_edge", &self.singular_at_support_edge)
            .field("singular_at_origin", &self.singular_at_origin)
            .field("decay_class", &self.decay_class)
            .field("scale", &self.scale)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, decay_class: DecayClass) -> Self {
        RadialProfile {
            eval: Arc::new(eval),
            support_lower: 0.0,
            support_upper: f64::INFINITY,
            singular_at_support_edge: false,
            singular_at_origin: false,
            decay_class,
            scale: 1.0,
        }
    }

    pub fn zero() -> Self {
        RadialProfile::new(|_| 0.0, DecayClass::Compact).with_support(0.0, 0.0)
    }

    pub fn with_support(mut self, lower: f64, upper: f64) -> Self {
        self.support_lower = lower;
        self.support_upper = upper;
        if upper.is_finite() {
            self.decay_class = DecayClass::Compact;
        }
        self
    }

    pub fn with_edge_singularity(mut self) -> Self {
        self.singular_at_support_edge = true;
        self
    }

    pub fn with_origin_singularity(mut self) -> Self {
        self.singular_at_origin = true;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// The profile value; zero outside the support.
    pub fn eval(&self, r: f64) -> f64 {
        if r < self.support_lower || r > self.support_upper {
            0.0
        } else {
            (self.eval)(r)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.support_lower >= 0.0)
            || !(self.support_upper >= self.support_lower)
            || !self.support_lower.is_finite()
        {
            return Err(Error::Domain(format!(
                "invalid profile support [{}, {}]",
                self.support_lower, self.support_upper
            )));
        }
        if self.singular_at_support_edge && !self.support_upper.is_finite() {
            return Err(Error::Domain(
                "an edge singularity needs a finite support edge".into(),
            ));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::Domain(format!(
                "profile scale must be positive, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

/// Measure of the unit sphere in `R^d`, `S_d = 2 pi^{d/2} / Gamma(d/2)`.
pub fn sphere_measure(d: Dimension) -> f64 {
    match d.get() {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let half = d.as_f64() / 2.0;
            2.0 * PI.powf(half) / gamma_fn(half).expect("d/2 > 0")
        }
    }
}

/// `(2 pi)^{d/2} / S_d = 2^{d/2 - 1} Gamma(d/2)`.
fn kernel_constant(d: Dimension) -> f64 {
    let half = d.as_f64() / 2.0;
    2f64.powf(half - 1.0) * gamma_fn(half).expect("d/2 > 0")
}

/// The sphere-averaged plane wave `g_d(k, x) = ((2 pi)^{d/2} / S_d) (kx)^{1-d/2} J_{d/2-1}(kx)`,
/// equal to 1 at `kx = 0`. Uses `cos`, `J_0` and `sin z / z` for `d = 1, 2, 3`.
pub fn kernel_ghat(d: Dimension, k: f64, x: f64) -> f64 {
    let z = k * x;
    match d.get() {
        1 => z.cos(),
        2 => bessel_j(BesselOrder::integer(0), z.abs()).unwrap_or(f64::NAN),
        3 => {
            if z.abs() < 1e-4 {
                let z2 = z * z;
                1.0 - z2 / 6.0 * (1.0 - z2 / 20.0)
            } else {
                z.sin() / z
            }
        }
        _ => kernel_ghat_bessel(d, k, x),
    }
}

/// The kernel evaluated from the general Bessel formula for any `d`.
pub fn kernel_ghat_bessel(d: Dimension, k: f64, x: f64) -> f64 {
    let z = (k * x).abs();
    kernel_constant(d) * bessel_j_scaled(d.bessel_order(), z).unwrap_or(f64::NAN)
}

/// Forward radial Fourier transform `S_d int f(r) r^{d-1} g_d(k, r) dr`.
pub fn forward(
    d: Dimension,
    f: &RadialProfile,
    k: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    radial_integral(d, f, k, sphere_measure(d), spec)
}

/// Inverse radial Fourier transform `S_d / (2 pi)^d int f^(k) k^{d-1} g_d(k, r) dk`.
pub fn inverse(
    d: Dimension,
    fhat: &RadialProfile,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    let norm = sphere_measure(d) / (2.0 * PI).powi(d.get() as i32);
    radial_integral(d, fhat, r, norm, spec)
}

/// `prefactor * int_0^inf p(x) x^{d-1} g_d(y, x) dx`.
fn radial_integral(
    d: Dimension,
    p: &RadialProfile,
    y: f64,
    prefactor: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    spec.validate()?;
    p.validate()?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "transform variable must be finite and >= 0, got {y}"
        )));
    }
    let dm1 = (d.get() - 1) as i32;
    let integrand = |x: f64| {
        let v = p.eval(x);
        if v == 0.0 {
            0.0
        } else {
            v * x.powi(dm1) * kernel_ghat(d, y, x)
        }
    };
    let (lo, hi) = (p.support_lower, p.support_upper);
    if hi == lo {
        return Ok(IntegralResult::exact_zero());
    }
    let result = if hi.is_finite() {
        finite_support(&integrand, p, spec)?
    } else {
        // Optional singular head handled by substitution, then the tail.
        let mut head = IntegralResult::exact_zero();
        let mut start = lo;
        if p.singular_at_origin {
            let width = if y > 0.0 {
                p.scale.min(PI / y)
            } else {
                p.scale
            };
            head = substituted_lower(&integrand, lo, lo + width, &spec.scaled(0.5))?;
            start = lo + width;
        }
        let tail = if y == 0.0 {
            integrate_semi_infinite_scaled(&integrand, start, p.scale, &spec.scaled(0.5))?
        } else {
            oscillatory_tail(d, p, y, start, &spec.scaled(0.5))?
        };
        head.plus(tail, spec)
    };
    Ok(result.scale(prefactor))
}

fn finite_support<F: Fn(f64) -> f64>(
    integrand: &F,
    p: &RadialProfile,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    let (lo, hi) = (p.support_lower, p.support_upper);
    match (p.singular_at_origin, p.singular_at_support_edge) {
        (false, false) => integrate_adaptive(integrand, lo, hi, spec),
        (true, false) => substituted_lower(integrand, lo, hi, spec),
        (false, true) => substituted_upper(integrand, lo, hi, spec),
        (true, true) => {
            let mid = 0.5 * (lo + hi);
            let half = spec.scaled(0.5);
            let a = substituted_lower(integrand, lo, mid, &half)?;
            let b = substituted_upper(integrand, mid, hi, &half)?;
            Ok(a.plus(b, spec))
        }
    }
}

/// `int_lo^hi f` with `x = lo + w^2`, regularising `(x - lo)^{-1/2}`.
fn substituted_lower<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    integrate_adaptive(
        |w: f64| 2.0 * w * f(lo + w * w),
        0.0,
        (hi - lo).sqrt(),
        spec,
    )
}

/// `int_lo^hi f` with `x = hi - w^2`, regularising `(hi - x)^{-1/2}`.
fn substituted_upper<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    integrate_adaptive(
        |w: f64| 2.0 * w * f(hi - w * w),
        0.0,
        (hi - lo).sqrt(),
        spec,
    )
}

/// `int_start^inf p(x) x^{d-1} g_d(y, x) dx` for `y > 0` with the kernel's
/// oscillation factored out for the zero-partition engine.
fn oscillatory_tail(
    d: Dimension,
    p: &RadialProfile,
    y: f64,
    start: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    let dm1 = (d.get() - 1) as i32;
    match d.get() {
        1 => integrate_oscillatory(
            |x| p.eval(x),
            OscillatoryKernel::Cos { omega: y },
            start,
            spec,
        ),
        3 => integrate_oscillatory(
            |x| p.eval(x) * x / y,
            OscillatoryKernel::Sin { omega: y },
            start,
            spec,
        ),
        _ => {
            let order = d.bessel_order();
            let nu = order.value();
            let c = kernel_constant(d) * y.powf(-nu);
            integrate_oscillatory(
                move |x| {
                    let v = p.eval(x);
                    if v == 0.0 {
                        0.0
                    } else {
                        c * v * x.powi(dm1) * x.powf(-nu)
                    }
                },
                OscillatoryKernel::Bessel { order, omega: y },
                start,
                spec,
            )
        }
    }
}

/// Standard profiles with closed-form images, used by tests and the CLI.
pub mod profiles {
    use super::*;

    /// `exp(-r^2 / 2)`.
    pub fn gaussian() -> RadialProfile {
        RadialProfile::new(|r| (-0.5 * r * r).exp(), DecayClass::Gaussian)
    }

    /// `(2 pi)^{d/2} exp(-k^2 / 2)`, the image of [`gaussian`].
    pub fn gaussian_image(d: Dimension) -> RadialProfile {
        let c = (2.0 * PI).powf(d.as_f64() / 2.0);
        RadialProfile::new(move |k| c * (-0.5 * k * k).exp(), DecayClass::Gaussian)
    }

    /// `exp(-r)`.
    pub fn exponential() -> RadialProfile {
        RadialProfile::new(|r| (-r).exp(), DecayClass::Exponential)
    }

    /// `Gamma((d+1)/2) 2^d pi^{(d-1)/2} / (1 + k^2)^{(d+1)/2}`, the image of
    /// [`exponential`].
    pub fn exponential_image(d: Dimension) -> RadialProfile {
        let n = d.as_f64();
        let c =
            gamma_fn((n + 1.0) / 2.0).expect("positive") * 2f64.powf(n) * PI.powf((n - 1.0) / 2.0);
        RadialProfile::new(
            move |k| c * (1.0 + k * k).powf(-(n + 1.0) / 2.0),
            DecayClass::Algebraic,
        )
    }

    /// The screened Coulomb (Yukawa) profile `exp(-r) / r` for `d >= 2`. In
    /// `d = 1` the screened Green's function is `exp(-r)` itself, so this
    /// returns [`exponential`] there.
    pub fn yukawa(d: Dimension) -> RadialProfile {
        if d.get() == 1 {
            return exponential();
        }
        RadialProfile::new(|r| (-r).exp() / r, DecayClass::Exponential)
    }

    /// The image of [`yukawa`]:
    /// `Gamma((d-1)/2) 2^{d-1} pi^{(d-1)/2} / (1 + k^2)^{(d-1)/2}` for `d >= 2`.
    pub fn yukawa_image(d: Dimension) -> RadialProfile {
        if d.get() == 1 {
            return exponential_image(d);
        }
        let n = d.as_f64();
        let c = gamma_fn((n - 1.0) / 2.0).expect("positive")
            * 2f64.powf(n - 1.0)
            * PI.powf((n - 1.0) / 2.0);
        RadialProfile::new(
            move |k| c * (1.0 + k * k).powf(-(n - 1.0) / 2.0),
            DecayClass::Algebraic,
        )
    }

    /// Looks up a profile by name: `gaussian`, `exponential`, `yukawa` and
    /// their images `gaussian-image`, `exponential-image`, `yukawa-image`.
    pub fn named(name: &str, d: Dimension) -> Result<RadialProfile> {
        match name {
            "gaussian" => Ok(gaussian()),
            "gaussian-image" => Ok(gaussian_image(d)),
            "exponential" => Ok(exponential()),
            "exponential-image" => Ok(exponential_image(d)),
            "yukawa" => Ok(yukawa(d)),
            "yukawa-image" => Ok(yukawa_image(d)),
            other => Err(Error::Domain(format!(
                "unknown profile '{other}' (expected gaussian, exponential, yukawa or their -image forms)"
            ))),
        }
    }

    pub const NAMES: [&str; 6] = [
        "gaussian",
        "gaussian-image",
        "exponential",
        "exponential-image",
        "yukawa",
        "yukawa-image",
    ];
}
