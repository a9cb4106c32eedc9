//! Adaptive Gauss-Kronrod quadrature on finite intervals and geometric
//! panelling for semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and work limits shared by all quadrature engines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Number of kernel-zero cells the oscillatory engine may visit.
    pub max_oscillation_cells: usize,
    /// Panels of a semi-infinite integral whose contribution is below this
    /// magnitude count as negligible tail.
    pub truncation_threshold: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            max_oscillation_cells: 200,
            truncation_threshold: 1e-300,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_subdivisions: usize,
        max_oscillation_cells: usize,
        truncation_threshold: f64,
    ) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
            max_oscillation_cells,
            truncation_threshold,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if self.max_oscillation_cells < 4 {
            return Err(Error::InvalidConfig(
                "max_oscillation_cells must be at least 4".into(),
            ));
        }
        if !(self.truncation_threshold >= 0.0) {
            return Err(Error::InvalidConfig(
                "truncation_threshold must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    /// The same work limits with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

/// Scalar types the engines can integrate.
pub trait QuadValue:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn finite(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Outcome of a quadrature. `converged` implies
/// `error_estimate <= max(abs_tol, rel_tol * |value|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult<V> {
    pub value: V,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl<V: QuadValue> IntegralResult<V> {
    pub fn exact_zero() -> Self {
        IntegralResult {
            value: V::zero(),
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        }
    }

    /// The value when converged, otherwise a [`Error::NotConverged`] error.
    pub fn into_value(self, what: &str) -> Result<V> {
        if self.converged && self.value.finite() {
            Ok(self.value)
        } else {
            Err(Error::NotConverged(format!(
                "{what}: value {:?}, error estimate {:e} after {} evaluations",
                self.value, self.error_estimate, self.evaluations
            )))
        }
    }

    /// Sum of two independent pieces, converged only if both are and the
    /// combined error meets the tolerance.
    pub fn plus(self, other: Self, spec: &QuadratureSpec) -> Self {
        let value = self.value + other.value;
        let error_estimate = self.error_estimate + other.error_estimate;
        IntegralResult {
            value,
            error_estimate,
            converged: self.converged
                && other.converged
                && error_estimate <= spec.tolerance_for(value.magnitude()),
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        IntegralResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_863_107_980,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Cell<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Cell<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Cell<V> {}
impl<V> PartialOrd for Cell<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Cell<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss-Kronrod 21-point cell: (Kronrod value, error estimate).
///
/// The estimate follows the usual rescaling of `|K - G|` with a roundoff floor
/// of a few ulps of the absolute integral.
fn gk21<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> (V, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::zero();
    let mut resabs = fc.magnitude() * WGK[10];
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    err = err.max(4.0 * f64::EPSILON * resabs);
    (value, err)
}

/// Adaptive bisection with the 21-point Gauss-Kronrod rule.
///
/// The rule never samples the interval endpoints, so integrable endpoint
/// singularities are allowed.
pub fn integrate_adaptive<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<V>> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "finite bounds required, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::Domain(format!(
            "lower bound {a} exceeds upper bound {b}"
        )));
    }
    if a == b {
        return Ok(IntegralResult::exact_zero());
    }
    let (value, error) = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut total = value;
    let mut total_error = error;
    let mut heap = BinaryHeap::new();
    heap.push(Cell { a, b, value, error });
    let mut subdivisions = 1;
    loop {
        if !total.finite() {
            return Ok(IntegralResult {
                value: total,
                error_estimate: f64::INFINITY,
                converged: false,
                evaluations,
            });
        }
        let tol = spec.tolerance_for(total.magnitude());
        if total_error <= tol {
            return Ok(IntegralResult {
                value: total,
                error_estimate: total_error,
                converged: true,
                evaluations,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            break;
        }
        let worst = match heap.pop() {
            Some(cell) => cell,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // The cell cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        heap.push(Cell {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Cell {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        // Re-sum from scratch now and then to stop drift in the running total.
        if subdivisions % 64 == 0 {
            total = heap.iter().fold(V::zero(), |acc, c| acc + c.value);
            total_error = heap.iter().map(|c| c.error).sum();
        } else {
            total = total - worst.value + v1 + v2;
            total_error = total_error - worst.error + e1 + e2;
        }
    }
    let total: V = heap.iter().fold(V::zero(), |acc, c| acc + c.value);
    let total_error: f64 = heap.iter().map(|c| c.error).sum();
    let converged = total.finite() && total_error <= spec.tolerance_for(total.magnitude());
    Ok(IntegralResult {
        value: total,
        error_estimate: total_error,
        converged,
        evaluations,
    })
}

/// `int_a^inf f` with unit initial panel length; see
/// [`integrate_semi_infinite_scaled`].
pub fn integrate_semi_infinite<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<V>> {
    integrate_semi_infinite_scaled(f, a, 1.0, spec)
}

const MAX_PANELS: usize = 120;

/// `int_a^inf f` over successive panels whose lengths double, starting with
/// `scale`. Stops once two consecutive panels are negligible against the
/// running total; flags non-convergence if the tail does not die out.
pub fn integrate_semi_infinite_scaled<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<V>> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::Domain(format!(
            "finite lower bound required, got {a}"
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!(
            "panel scale must be positive, got {scale}"
        )));
    }
    let (first, gross) = panel_sum(&f, a, scale, spec, spec.rel_tol);
    let net = first.value.magnitude();
    if first.converged || !first.value.finite() || !(net > 0.0) || gross <= net {
        return Ok(first);
    }
    // Panels cancel: tighten their relative share by the cancellation ratio.
    let (second, _) = panel_sum(&f, a, scale, spec, spec.rel_tol * net / gross);
    let evaluations = first.evaluations + second.evaluations;
    Ok(IntegralResult {
        evaluations,
        ..second
    })
}

/// Geometric panels from `a`; returns the result judged against `spec` and
/// the sum of the panel magnitudes.
fn panel_sum<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
    panel_rel_tol: f64,
) -> (IntegralResult<V>, f64) {
    // Panel p gets 2^-(p+2) of the absolute tolerance so the shares sum below it.
    let mut panel_spec = QuadratureSpec {
        rel_tol: 0.25 * panel_rel_tol,
        abs_tol: 0.5 * spec.abs_tol,
        ..*spec
    };
    let mut total = V::zero();
    let mut gross = 0.0;
    let mut total_error = 0.0;
    let mut evaluations = 0;
    let mut all_converged = true;
    let mut quiet = 0;
    let mut lo = a;
    let mut width = scale;
    for panel in 0..MAX_PANELS {
        let hi = lo + width;
        panel_spec.abs_tol *= 0.5;
        let piece = match integrate_adaptive(f, lo, hi, &panel_spec) {
            Ok(piece) => piece,
            Err(_) => break,
        };
        evaluations += piece.evaluations;
        all_converged &= piece.converged;
        total = total + piece.value;
        gross += piece.value.magnitude();
        total_error += piece.error_estimate;
        if !total.finite() {
            break;
        }
        let negligible = piece.value.magnitude() + piece.error_estimate
            <= (0.25 * spec.tolerance_for(total.magnitude())).max(spec.truncation_threshold);
        quiet = if negligible { quiet + 1 } else { 0 };
        // An identically zero start may just mean the mass lies further out.
        if quiet >= 2 && (total.magnitude() > 0.0 || panel >= 8) {
            let converged = all_converged && total_error <= spec.tolerance_for(total.magnitude());
            return (
                IntegralResult {
                    value: total,
                    error_estimate: total_error,
                    converged,
                    evaluations,
                },
                gross,
            );
        }
        lo = hi;
        width *= 2.0;
        if !lo.is_finite() {
            break;
        }
    }
    let result = IntegralResult {
        value: total,
        error_estimate: total_error.max(f64::MIN_POSITIVE),
        converged: false,
        evaluations,
    };
    (result, gross)
}
