//! Registry of simultaneous Fourier-Laplace double-transform pairs.
//!
//! Each row relates a space-time function of `(r, t)` built from an auxiliary
//! Laplace original `f` to its combined image in `(k, s)`, which is always of
//! the form `psi(k, s) f^(phi(k, s))`. Type-1 rows have `phi = s`; type-2 rows
//! hand `f^` a genuinely `k`-dependent argument.

mod catalog;
mod efros;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial_fourier::{sphere_measure, Dimension};

pub use catalog::{catalog_list, parse_original, TestOriginal};
pub use efros::{
    base_pair_image, base_pair_original, efros_compose, roots_tau, ComposedPair, EfrosRoot,
};

/// Identifier of a registry row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairId {
    #[serde(rename = "1.1")]
    R1_1,
    #[serde(rename = "1.2")]
    R1_2,
    #[serde(rename = "1.3")]
    R1_3,
    #[serde(rename = "1.4")]
    R1_4,
    #[serde(rename = "1.5")]
    R1_5,
    #[serde(rename = "2.1")]
    R2_1,
    #[serde(rename = "2.2")]
    R2_2,
    #[serde(rename = "2.3")]
    R2_3,
    #[serde(rename = "2.4")]
    R2_4,
}

/// The name accepted by [`lookup`] for row 2.1 in two dimensions.
pub const ALIAS_2D: &str = "2D-SDT";

impl PairId {
    pub const ALL: [PairId; 9] = [
        PairId::R1_1,
        PairId::R1_2,
        PairId::R1_3,
        PairId::R1_4,
        PairId::R1_5,
        PairId::R2_1,
        PairId::R2_2,
        PairId::R2_3,
        PairId::R2_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PairId::R1_1 => "1.1",
            PairId::R1_2 => "1.2",
            PairId::R1_3 => "1.3",
            PairId::R1_4 => "1.4",
            PairId::R1_5 => "1.5",
            PairId::R2_1 => "2.1",
            PairId::R2_2 => "2.2",
            PairId::R2_3 => "2.3",
            PairId::R2_4 => "2.4",
        }
    }

    pub fn parse(id: &str) -> Result<PairId> {
        PairId::ALL
            .into_iter()
            .find(|p| p.as_str() == id)
            .ok_or_else(|| Error::UnknownPair(id.to_string()))
    }

    /// 1 for `phi = s`, 2 for `k`-dependent `phi`.
    pub fn kind(self) -> u8 {
        match self {
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 | PairId::R1_4 | PairId::R1_5 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dimensions a row admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimConstraint {
    Any,
    AtLeast(u32),
    /// Exactly this dimension (used by the two-dimensional alias).
    Exactly(u32),
}

impl DimConstraint {
    pub fn admits(self, d: Dimension) -> bool {
        match self {
            DimConstraint::Any => true,
            DimConstraint::AtLeast(m) => d.get() >= m,
            DimConstraint::Exactly(m) => d.get() == m,
        }
    }
}

impl fmt::Display for DimConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimConstraint::Any => f.write_str("d >= 1"),
            DimConstraint::AtLeast(m) => write!(f, "d >= {m}"),
            DimConstraint::Exactly(m) => write!(f, "d = {m}"),
        }
    }
}

/// One space-time term `weight * f(argument)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceTimeTerm {
    pub weight: f64,
    pub argument: f64,
}

/// A registry row. Immutable; evaluation is pure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDescriptor {
    pub id: PairId,
    pub dim_constraint: DimConstraint,
    /// Offset `a` of row 1.5; `None` for every other row.
    pub parameter_a: Option<f64>,
    pub st_formula: String,
    pub fl_formula: String,
    pub note: String,
    /// Whether the row carries the Efros data `tau(t, u) = sqrt(t^2 - u^2)`.
    pub has_efros_tau: bool,
}

/// `sqrt(s^2 + k^2)` continued as `s sqrt(1 + k^2 / s^2)`.
///
/// This is the principal root for `Re s > 0`; elsewhere its only cut is the
/// segment `[-ik, ik]`, so the continuation is analytic on every Talbot
/// contour enclosing that segment.
pub fn sqrt_s2_k2(s: Complex64, k: f64) -> Complex64 {
    if k == 0.0 {
        return s;
    }
    if s.norm() == 0.0 {
        return Complex64::new(0.0, k);
    }
    let q = Complex64::new(k, 0.0) / s;
    s * (1.0 + q * q).sqrt()
}

/// `z^p` on the principal branch, exact for integer `p`.
fn cpow(z: Complex64, p: f64) -> Complex64 {
    if p == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if p.fract() == 0.0 && p.abs() < 64.0 {
        z.powi(p as i32)
    } else {
        z.powf(p)
    }
}

fn real_pow(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() < 64.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

/// Looks up a row by id (`"1.1"` .. `"2.4"`) or by the alias `"2D-SDT"`,
/// which returns row 2.1 restricted to `d = 2`.
pub fn lookup(id: &str) -> Result<PairDescriptor> {
    if id == ALIAS_2D {
        let mut row = descriptor(PairId::R2_1);
        row.dim_constraint = DimConstraint::Exactly(2);
        row.note = "two-dimensional alias of row 2.1".into();
        return Ok(row);
    }
    Ok(descriptor(PairId::parse(id)?))
}

/// All nine rows in order.
pub fn registry() -> Vec<PairDescriptor> {
    PairId::ALL.into_iter().map(descriptor).collect()
}

/// The row 1.5 offset used by [`lookup`].
pub const DEFAULT_A: f64 = 1.0;

fn descriptor(id: PairId) -> PairDescriptor {
    let (constraint, st, fl, note) = match id {
        PairId::R1_1 => (
            DimConstraint::AtLeast(2),
            "pi S_{d-1} / (2 pi)^d * (1/r) f(t - r) Theta(t - r)",
            "(s^2 + k^2)^{(1-d)/2} f^(s)",
            "S_{d-1} is the measure of the unit sphere in d-1 dimensions",
        ),
        PairId::R1_2 => (
            DimConstraint::Any,
            "(2 pi r)^{-d/2} f(t - r) Theta(t - r)",
            "(s + sqrt(s^2 + k^2))^{1-d/2} / sqrt(s^2 + k^2) f^(s)",
            "",
        ),
        PairId::R1_3 => (
            DimConstraint::AtLeast(3),
            "(d/2 - 1) (2 pi)^{-d/2} r^{-d/2-1} f(t - r) Theta(t - r)",
            "(s + sqrt(s^2 + k^2))^{1-d/2} f^(s)",
            "d = 2 excluded (vanishing prefactor); d = 1 excluded (r^{-3/2} not integrable)",
        ),
        PairId::R1_4 => (
            DimConstraint::Any,
            "pi^{-d/2} f(t - r^2) Theta(t - r^2)",
            "s^{-d/2} exp(-k^2 / 4s) f^(s)",
            "",
        ),
        PairId::R1_5 => (
            DimConstraint::Any,
            "(2 pi)^{-d/2} (a + R)^{1-d/2} / R * f(t + a - R) Theta(t + a - R), R = sqrt(r^2 + a^2)",
            "exp(-a (sqrt(s^2 + k^2) - s)) (s + sqrt(s^2 + k^2))^{1-d/2} / sqrt(s^2 + k^2) f^(s)",
            "requires a > 0; a = 0 reduces to row 1.2",
        ),
        PairId::R2_1 => (
            DimConstraint::Any,
            "(2 pi)^{-d/2} (t + q)^{1-d/2} / q * f(q) Theta(t - r), q = sqrt(t^2 - r^2)",
            "(s + sqrt(s^2 + k^2))^{1-d/2} / sqrt(s^2 + k^2) f^(sqrt(s^2 + k^2))",
            "Efros family tau = sqrt(t^2 - u^2); alias 2D-SDT for d = 2",
        ),
        PairId::R2_2 => (
            DimConstraint::Any,
            "(2 pi)^{-d/2} r^{2-d} (2t)^{d/2-2} f(r^2 / 4t)",
            "s^{-d/2} f^(k^2 / s)",
            "needs an original with negative growth abscissa",
        ),
        PairId::R2_3 => (
            DimConstraint::Any,
            "(2 pi)^{-d/2} r^{2-d} t^{d/2-2} f((r^2 - t^2) / 2t) Theta(r - t)",
            "(s + sqrt(s^2 + k^2))^{1-d/2} / sqrt(s^2 + k^2) f^(sqrt(s^2 + k^2) - s)",
            "support r > t; needs an original with negative growth abscissa",
        ),
        PairId::R2_4 => (
            DimConstraint::Any,
            "2 (2 pi)^{-d/2} r^{2-d} / q * [(t - q)^{d/2-1} f((t + q)/2) + (t + q)^{d/2-1} f((t - q)/2)] Theta(t - 2r), q = sqrt(t^2 - 4r^2)",
            "s^{-d/2} f^(s + k^2 / 4s)",
            "space-time side summed over both Efros roots u = (t +- q)/2 of r = sqrt(u (t - u))",
        ),
    };
    PairDescriptor {
        id,
        dim_constraint: constraint,
        parameter_a: (id == PairId::R1_5).then_some(DEFAULT_A),
        st_formula: st.into(),
        fl_formula: fl.into(),
        note: note.into(),
        has_efros_tau: id == PairId::R2_1,
    }
}

impl PairDescriptor {
    /// Row 1.5 with offset `a > 0`.
    pub fn with_parameter_a(&self, a: f64) -> Result<PairDescriptor> {
        if self.id != PairId::R1_5 {
            return Err(Error::Domain(format!("row {} has no parameter a", self.id)));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("row 1.5 needs a > 0, got {a}")));
        }
        Ok(PairDescriptor {
            parameter_a: Some(a),
            ..self.clone()
        })
    }

    /// Row 1.5 at `a = 0`, which coincides with row 1.2. Only meant for
    /// checking that degeneracy.
    pub fn degenerate_1_5() -> PairDescriptor {
        PairDescriptor {
            parameter_a: Some(0.0),
            ..descriptor(PairId::R1_5)
        }
    }

    fn a(&self) -> f64 {
        self.parameter_a.unwrap_or(0.0)
    }

    pub fn admits(&self, d: Dimension) -> bool {
        self.dim_constraint.admits(d)
    }

    pub fn check_dimension(&self, d: Dimension) -> Result<()> {
        if self.admits(d) {
            Ok(())
        } else {
            Err(Error::DimensionConstraint {
                pair: self.id.to_string(),
                d: d.get(),
                constraint: self.dim_constraint.to_string(),
            })
        }
    }

    /// Whether the space-time side is nonzero at `(r, t)` (the Theta factor).
    pub fn st_support(&self, r: f64, t: f64) -> bool {
        match self.id {
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 | PairId::R2_1 => r < t,
            PairId::R1_4 => r * r < t,
            PairId::R1_5 => {
                let a = self.a();
                t + a - (r * r + a * a).sqrt() > 0.0
            }
            PairId::R2_2 => true,
            PairId::R2_3 => r > t,
            PairId::R2_4 => 2.0 * r < t,
        }
    }

    /// The radial interval carrying the space-time side at time `t`.
    pub fn st_support_interval(&self, t: f64) -> (f64, f64) {
        match self.id {
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 | PairId::R2_1 => (0.0, t),
            PairId::R1_4 => (0.0, t.sqrt()),
            PairId::R1_5 => {
                let a = self.a();
                (0.0, ((t + a) * (t + a) - a * a).sqrt())
            }
            PairId::R2_2 => (0.0, f64::INFINITY),
            PairId::R2_3 => (t, f64::INFINITY),
            PairId::R2_4 => (0.0, 0.5 * t),
        }
    }

    /// Whether the prefactor blows up like an inverse square root at the
    /// outer support edge (rows 2.1 and 2.4).
    pub fn edge_singular(&self) -> bool {
        matches!(self.id, PairId::R2_1 | PairId::R2_4)
    }

    /// Whether `r^{d-1}` times the space-time side behaves like `r^{-1/2}`
    /// at the origin.
    pub fn origin_singular(&self, d: Dimension) -> bool {
        matches!((self.id, d.get()), (PairId::R1_2, 1) | (PairId::R1_3, 3))
    }

    /// Whether `(r, t)` lies on the declared edge set where the space-time
    /// prefactor is infinite.
    pub fn on_edge(&self, r: f64, t: f64) -> bool {
        match self.id {
            PairId::R2_1 => r == t,
            PairId::R2_4 => 2.0 * r == t,
            _ => false,
        }
    }

    /// Argument handed to `f` on the space-time side. Row 2.4 has two; this
    /// returns the larger root `(t + q)/2`.
    pub fn st_argument(&self, r: f64, t: f64) -> f64 {
        match self.id {
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 => t - r,
            PairId::R1_4 => t - r * r,
            PairId::R1_5 => {
                let a = self.a();
                t + a - (r * r + a * a).sqrt()
            }
            PairId::R2_1 => (t * t - r * r).sqrt(),
            PairId::R2_2 => r * r / (4.0 * t),
            PairId::R2_3 => (r * r - t * t) / (2.0 * t),
            PairId::R2_4 => 0.5 * (t + (t * t - 4.0 * r * r).sqrt()),
        }
    }

    /// Multiplier of `f` on the space-time side (first term for row 2.4).
    pub fn st_prefactor(&self, r: f64, t: f64, d: Dimension) -> f64 {
        self.st_terms(r, t, d)[0].weight
    }

    /// The space-time side as a sum of `weight * f(argument)` terms, valid
    /// inside the support. Row 2.4 has two terms, every other row one.
    pub fn st_terms(&self, r: f64, t: f64, d: Dimension) -> Vec<SpaceTimeTerm> {
        let n = d.as_f64();
        let nu = n / 2.0 - 1.0;
        let tp = (2.0 * PI).powf(-n / 2.0);
        let one = |weight: f64| {
            vec![SpaceTimeTerm {
                weight,
                argument: self.st_argument(r, t),
            }]
        };
        match self.id {
            PairId::R1_1 => {
                let dm1 = Dimension::new(d.get() - 1).expect("row 1.1 has d >= 2");
                one(PI * sphere_measure(dm1) / (2.0 * PI).powi(d.get() as i32) / r)
            }
            PairId::R1_2 => one((2.0 * PI * r).powf(-n / 2.0)),
            PairId::R1_3 => one(nu * tp * r.powf(-n / 2.0 - 1.0)),
            PairId::R1_4 => one(PI.powf(-n / 2.0)),
            PairId::R1_5 => {
                let a = self.a();
                let big_r = (r * r + a * a).sqrt();
                one(tp * real_pow(a + big_r, -nu) / big_r)
            }
            PairId::R2_1 => {
                let q = (t * t - r * r).sqrt();
                one(tp * real_pow(t + q, -nu) / q)
            }
            PairId::R2_2 => one(tp * real_pow(r, 2.0 - n) / real_pow(2.0 * t, 2.0 - n / 2.0)),
            PairId::R2_3 => one(tp * real_pow(r, 2.0 - n) / real_pow(t, 2.0 - n / 2.0)),
            PairId::R2_4 => {
                let q = (t * t - 4.0 * r * r).sqrt();
                let base = 2.0 * tp / q;
                // (t - q)^nu r^{2-d} = (4 / (t + q))^nu since t - q = 4 r^2 / (t + q).
                let near = base * real_pow(4.0 / (t + q), nu);
                let far = base * real_pow(t + q, nu) * real_pow(r, 2.0 - n);
                vec![
                    SpaceTimeTerm {
                        weight: near,
                        argument: 0.5 * (t + q),
                    },
                    SpaceTimeTerm {
                        weight: far,
                        argument: 2.0 * r * r / (t + q),
                    },
                ]
            }
        }
    }

    /// `phi(k, s)`, the argument handed to `f^`.
    pub fn fl_phi(&self, k: f64, s: Complex64) -> Complex64 {
        match self.id {
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 | PairId::R1_4 | PairId::R1_5 => s,
            PairId::R2_1 => sqrt_s2_k2(s, k),
            PairId::R2_2 => k * k / s,
            PairId::R2_3 => sqrt_s2_k2(s, k) - s,
            PairId::R2_4 => s + k * k / (4.0 * s),
        }
    }

    /// `psi(k, s)`, the multiplier of `f^`.
    pub fn fl_psi(&self, k: f64, s: Complex64, d: Dimension) -> Complex64 {
        let n = d.as_f64();
        let nu = n / 2.0 - 1.0;
        let p = || sqrt_s2_k2(s, k);
        let kernel = || {
            let p = p();
            cpow(s + p, -nu) / p
        };
        match self.id {
            PairId::R1_1 => cpow(p(), 1.0 - n),
            PairId::R1_2 | PairId::R2_1 | PairId::R2_3 => kernel(),
            PairId::R1_3 => cpow(s + p(), -nu),
            PairId::R1_4 => cpow(s, -n / 2.0) * (-k * k / (4.0 * s)).exp(),
            PairId::R1_5 => {
                let a = self.a();
                let pv = p();
                (-a * (pv - s)).exp() * cpow(s + pv, -nu) / pv
            }
            PairId::R2_2 | PairId::R2_4 => cpow(s, -n / 2.0),
        }
    }

    /// Whether `psi` or `phi` involves `sqrt(s^2 + k^2)` (branch points at
    /// `+- ik`).
    pub fn uses_sqrt(&self) -> bool {
        matches!(
            self.id,
            PairId::R1_1 | PairId::R1_2 | PairId::R1_3 | PairId::R1_5 | PairId::R2_1 | PairId::R2_3
        )
    }

    /// The points `s` mapped onto a pole `p` of `f^` by `phi`.
    pub fn preimages_of_pole(&self, k: f64, p: Complex64) -> Vec<Complex64> {
        let k2 = k * k;
        match self.id.kind() {
            1 => vec![p],
            _ => match self.id {
                PairId::R2_1 => {
                    let r = (p * p - k2).sqrt();
                    vec![r, -r]
                }
                PairId::R2_2 => {
                    if p.norm() == 0.0 {
                        Vec::new()
                    } else {
                        vec![k2 / p]
                    }
                }
                PairId::R2_3 => {
                    if p.norm() == 0.0 {
                        Vec::new()
                    } else {
                        vec![(k2 - p * p) / (2.0 * p)]
                    }
                }
                PairId::R2_4 => {
                    let r = (p * p - k2).sqrt();
                    vec![(p + r) / 2.0, (p - r) / 2.0]
                }
                _ => unreachable!("type-1 rows handled above"),
            },
        }
    }

    /// Abscissa and singular height of `s -> psi f^(phi)` for an original
    /// with the given image poles and algebraic decay order of `f^`.
    ///
    /// The abscissa is the largest real part of any singularity, and at least
    /// 0 because of the branch points of `s^{-d/2}` and `sqrt(s^2 + k^2)` on the
    /// imaginary axis. Rows 2.2 and 2.4 in even dimension with `k > 0` are
    /// analytic at `s = 0` when `f^` decays at least like `w^{-d/2}`; there the
    /// abscissa is that of the mapped poles alone.
    pub fn image_singularities(
        &self,
        d: Dimension,
        k: f64,
        poles: &[Complex64],
        decay_order: f64,
    ) -> (f64, f64) {
        let mapped: Vec<Complex64> = poles
            .iter()
            .flat_map(|&p| self.preimages_of_pole(k, p))
            .collect();
        let pole_re = mapped
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let pole_im = mapped.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let height = if self.uses_sqrt() {
            pole_im.max(k)
        } else {
            pole_im
        };
        let analytic_at_origin = matches!(self.id, PairId::R2_2 | PairId::R2_4)
            && d.get() % 2 == 0
            && k > 0.0
            && decay_order >= d.as_f64() / 2.0;
        let abscissa = if analytic_at_origin && pole_re.is_finite() {
            pole_re
        } else {
            pole_re.max(0.0)
        };
        (abscissa, height)
    }

    /// `psi(k, s) F(phi(k, s))` for any image `F`, on the analytic
    /// continuation used by the Talbot contour; no validity check.
    pub fn fl_value(
        &self,
        d: Dimension,
        k: f64,
        s: Complex64,
        image: impl Fn(Complex64) -> Complex64,
    ) -> Complex64 {
        self.fl_psi(k, s, d) * image(self.fl_phi(k, s))
    }

    /// The space-time side `st_support ? sum weight * f(argument) : 0`.
    pub fn eval_spacetime(&self, d: Dimension, f: &TestOriginal, r: f64, t: f64) -> Result<f64> {
        self.check_dimension(d)?;
        if !(r >= 0.0) || !(t > 0.0) || !r.is_finite() || !t.is_finite() {
            return Err(Error::Domain(format!(
                "need r >= 0 and t > 0, got r={r}, t={t}"
            )));
        }
        if self.on_edge(r, t) {
            return Err(Error::Edge(format!(
                "row {} is singular at r={r}, t={t}",
                self.id
            )));
        }
        if !self.st_support(r, t) {
            return Ok(0.0);
        }
        let value: f64 = self
            .st_terms(r, t, d)
            .iter()
            .map(|term| {
                if term.weight == 0.0 {
                    0.0
                } else {
                    term.weight * f.f(term.argument)
                }
            })
            .sum();
        if !value.is_finite() {
            return Err(Error::Edge(format!(
                "row {} is singular at r={r} (d={d})",
                self.id
            )));
        }
        Ok(value)
    }

    /// `psi(k, s) f^(phi(k, s))`, requiring `Re phi > sigma0` of `f`.
    pub fn eval_fl(
        &self,
        d: Dimension,
        f: &TestOriginal,
        k: f64,
        s: Complex64,
    ) -> Result<Complex64> {
        self.check_dimension(d)?;
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "wavenumber must be finite and >= 0, got {k}"
            )));
        }
        let phi = self.fl_phi(k, s);
        if !(phi.re > f.original.sigma0) {
            return Err(Error::Branch(format!(
                "Re phi(k={k}, s={s}) = {} does not exceed the abscissa {} of {}",
                phi.re, f.original.sigma0, f.id
            )));
        }
        Ok(self.fl_psi(k, s, d) * f.fhat(phi))
    }
}
