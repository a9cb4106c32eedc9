//! Mixed-domain verification of the pair registry.
//!
//! Each identity is checked at wavenumber and time `(k, t)`. The left side
//! applies one numeric radial Fourier transform to the space-time side at
//! fixed `t`; the right side applies one Talbot inversion to the
//! Fourier-Laplace side at fixed `k`.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{forward_laplace, inverse_laplace, LaplaceImage};
use crate::numerics::QuadratureSpec;
use crate::pairs::{
    base_pair_image, base_pair_original, catalog_list, registry, PairDescriptor, PairId,
    TestOriginal,
};
use crate::radial_fourier::{forward, DecayClass, Dimension, RadialProfile};

/// Version of the report layout.
pub const REPORT_SCHEMA: u32 = 1;
/// Default relative tolerance of mixed-domain checks.
pub const DEFAULT_MIXED_TOLERANCE: f64 = 1e-6;
/// Relative tolerance of the base-pair check.
pub const BASE_PAIR_TOLERANCE: f64 = 1e-8;
/// Below this magnitude errors are measured in absolute terms.
pub const ABS_FLOOR: f64 = 1e-12;
/// Smallest absolute tolerance requested from the left-side quadrature.
pub const LHS_ABS_TOL_FLOOR: f64 = 1e-15;
/// Maximum deviation allowed between a catalog image and the numeric
/// transform of its original before any pair run.
pub const CATALOG_CONSISTENCY: f64 = 1e-9;
/// Default wavenumbers of the sample grid.
pub const DEFAULT_K: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
/// Default times of the sample grid.
pub const DEFAULT_T: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 5.0];

/// Engine settings recorded with every report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineSettings {
    pub quadrature: QuadratureSpec,
    pub nodes: usize,
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings {
            quadrature: QuadratureSpec::default(),
            nodes: 48,
        }
    }
}

impl EngineSettings {
    /// Quadrature tolerances halved and inversion nodes doubled.
    pub fn refined(&self) -> EngineSettings {
        EngineSettings {
            quadrature: self.quadrature.scaled(0.5),
            nodes: 2 * self.nodes,
        }
    }
}

/// A sample point: `(k, t)` for mixed checks, `(k, u, s)` for the base pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SamplePoint {
    Base { k: f64, u: f64, s: f64 },
    Mixed { k: f64, t: f64 },
}

/// Outcome of one verification run. Failed points carry `NaN` values, which
/// serialize as `null`, and a message in `point_errors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub pair_id: String,
    pub dimension: u32,
    pub test_original: String,
    pub sample_points: Vec<SamplePoint>,
    #[serde(with = "nan_as_null")]
    pub lhs_values: Vec<f64>,
    #[serde(with = "nan_as_null")]
    pub rhs_values: Vec<f64>,
    #[serde(with = "nan_as_null")]
    pub abs_errors: Vec<f64>,
    #[serde(with = "nan_as_null")]
    pub rel_errors: Vec<f64>,
    pub point_errors: Vec<Option<String>>,
    pub tolerance: f64,
    pub abs_floor: f64,
    pub passed: bool,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
    pub engine_settings: EngineSettings,
}

impl VerificationReport {
    /// Largest relative error over the points that were evaluated.
    pub fn max_rel_error(&self) -> f64 {
        self.rel_errors
            .iter()
            .copied()
            .filter(|e| !e.is_nan())
            .fold(0.0, f64::max)
    }

    pub fn failed_points(&self) -> usize {
        self.point_errors.iter().filter(|e| e.is_some()).count()
    }

    /// The report with `wall_time` cleared, for bitwise comparison of runs.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport {
            wall_time: 0.0,
            ..self.clone()
        }
    }
}

/// A registry row and original combination left out of [`verify_all`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub pair_id: String,
    pub dimension: u32,
    pub test_original: String,
    pub reason: String,
}

/// Everything [`verify_all`] produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<SkipRecord>,
}

impl VerificationSummary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// `|lhs - rhs| / max(|lhs|, |rhs|)`, falling back to the absolute error when
/// both sides are below [`ABS_FLOOR`] (near zero crossings of the identity).
pub fn relative_error(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    let abs = (lhs - rhs).abs();
    if scale < ABS_FLOOR {
        abs
    } else {
        abs / scale
    }
}

pub(crate) struct PointOutcome {
    pub(crate) lhs: f64,
    pub(crate) rhs: f64,
    pub(crate) error: Option<String>,
}

pub(crate) fn assemble(
    pair_id: String,
    dimension: u32,
    test_original: String,
    sample_points: Vec<SamplePoint>,
    outcomes: Vec<PointOutcome>,
    tolerance: f64,
    settings: EngineSettings,
    started: Instant,
) -> VerificationReport {
    let mut report = VerificationReport {
        schema: REPORT_SCHEMA,
        pair_id,
        dimension,
        test_original,
        sample_points,
        lhs_values: Vec::with_capacity(outcomes.len()),
        rhs_values: Vec::with_capacity(outcomes.len()),
        abs_errors: Vec::with_capacity(outcomes.len()),
        rel_errors: Vec::with_capacity(outcomes.len()),
        point_errors: Vec::with_capacity(outcomes.len()),
        tolerance,
        abs_floor: ABS_FLOOR,
        passed: true,
        wall_time: 0.0,
        engine_settings: settings,
    };
    for outcome in outcomes {
        let (abs, rel) = if outcome.error.is_none() {
            (
                (outcome.lhs - outcome.rhs).abs(),
                relative_error(outcome.lhs, outcome.rhs),
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        report.passed &= outcome.error.is_none() && rel <= tolerance;
        report.lhs_values.push(outcome.lhs);
        report.rhs_values.push(outcome.rhs);
        report.abs_errors.push(abs);
        report.rel_errors.push(rel);
        report.point_errors.push(outcome.error);
    }
    report.wall_time = started.elapsed().as_secs_f64();
    report
}

/// Checks `L[J0(k sqrt(t^2 - u^2)) Theta(t - u)](s) = exp(-u P) / P` at real
/// `s` by numeric forward Laplace quadrature.
pub fn verify_base_pair(
    k: f64,
    u: f64,
    s_grid: &[f64],
    settings: EngineSettings,
) -> Result<VerificationReport> {
    settings.quadrature.validate()?;
    if !(k >= 0.0) || !(u >= 0.0) || !k.is_finite() || !u.is_finite() {
        return Err(Error::Domain(format!(
            "base pair needs finite k, u >= 0, got k={k}, u={u}"
        )));
    }
    let started = Instant::now();
    let original = base_pair_original(k, u);
    let outcomes = s_grid
        .par_iter()
        .map(|&s| {
            let z = Complex64::new(s, 0.0);
            let rhs = base_pair_image(k, u, z).re;
            match forward_laplace(&original, z, &settings.quadrature)
                .and_then(|r| r.into_value("base pair Laplace quadrature"))
            {
                Ok(lhs) => PointOutcome {
                    lhs: lhs.re,
                    rhs,
                    error: None,
                },
                Err(e) => PointOutcome {
                    lhs: f64::NAN,
                    rhs,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let points = s_grid
        .iter()
        .map(|&s| SamplePoint::Base { k, u, s })
        .collect();
    Ok(assemble(
        "base".into(),
        2,
        format!("J0 base k={k} u={u}"),
        points,
        outcomes,
        BASE_PAIR_TOLERANCE,
        settings,
        started,
    ))
}

/// The space-time side of `row` at time `t` as a radial profile, with the
/// support and singularity metadata the quadrature needs.
pub fn spacetime_profile(
    row: &PairDescriptor,
    d: Dimension,
    f: &TestOriginal,
    t: f64,
) -> Result<RadialProfile> {
    row.check_dimension(d)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "time must be positive and finite, got {t}"
        )));
    }
    let (lo, hi) = row.st_support_interval(t);
    let (row_c, f_c) = (row.clone(), f.clone());
    let eval = move |r: f64| -> f64 {
        row_c
            .st_terms(r, t, d)
            .iter()
            .map(|term| {
                if term.weight == 0.0 {
                    0.0
                } else {
                    term.weight * f_c.f(term.argument)
                }
            })
            .sum()
    };
    let mut profile = RadialProfile::new(eval, DecayClass::Gaussian).with_support(lo, hi);
    if row.edge_singular() {
        profile = profile.with_edge_singularity();
    }
    if row.origin_singular(d) {
        profile = profile.with_origin_singularity();
    }
    if !hi.is_finite() {
        profile = profile.with_scale(if row.id == PairId::R2_2 {
            (4.0 * t).sqrt()
        } else {
            1.0
        });
    }
    Ok(profile)
}

/// The Fourier-Laplace side of `row` at wavenumber `k` as an invertible
/// image, with abscissa and singular height from the mapped poles of `f^`.
pub fn fl_image(
    row: &PairDescriptor,
    d: Dimension,
    f: &TestOriginal,
    k: f64,
) -> Result<LaplaceImage> {
    row.check_dimension(d)?;
    let (abscissa, height) = row.image_singularities(d, k, &f.image_poles, f.image_decay_order);
    let (row_c, f_c) = (row.clone(), f.clone());
    Ok(
        LaplaceImage::new(move |s| row_c.fl_value(d, k, s, |w| f_c.fhat(w)), abscissa)
            .with_singular_height(height),
    )
}

/// Why `f` cannot be paired with `row`, if it cannot: rows whose `phi` tends
/// to 0 as `Re s` grows need an original with negative growth abscissa.
pub fn incompatibility(row: &PairDescriptor, f: &TestOriginal) -> Option<String> {
    let needs_negative = matches!(row.id, PairId::R2_2 | PairId::R2_3);
    (needs_negative && f.sigma0() >= 0.0).then(|| {
        format!(
            "Re phi tends to 0 for large Re s, so row {} needs sigma0 < 0; {} has sigma0 = {}",
            row.id,
            f.id,
            f.sigma0()
        )
    })
}

fn mixed_point(
    row: &PairDescriptor,
    d: Dimension,
    f: &TestOriginal,
    k: f64,
    t: f64,
    settings: &EngineSettings,
) -> PointOutcome {
    let fail = |lhs: f64, rhs: f64, e: Error| PointOutcome {
        lhs,
        rhs,
        error: Some(e.to_string()),
    };
    if !(k >= 0.0) || !k.is_finite() || !(t > 0.0) || !t.is_finite() {
        return fail(
            f64::NAN,
            f64::NAN,
            Error::Domain(format!("sample (k={k}, t={t}) outside k >= 0, t > 0")),
        );
    }
    let rhs =
        match fl_image(row, d, f, k).and_then(|image| inverse_laplace(&image, t, settings.nodes)) {
            Ok(r) => r.value,
            Err(e) => return fail(f64::NAN, f64::NAN, e),
        };
    // The absolute tolerance follows the size of the reference value so that
    // tiny values are still resolved, down to the roundoff level of the
    // Gauss-Kronrod error estimate.
    let spec = QuadratureSpec {
        abs_tol: settings
            .quadrature
            .abs_tol
            .min((settings.quadrature.rel_tol * rhs.abs()).max(LHS_ABS_TOL_FLOOR)),
        ..settings.quadrature
    };
    let lhs = spacetime_profile(row, d, f, t)
        .and_then(|profile| forward(d, &profile, k, &spec))
        .and_then(|r| r.into_value("space-time radial transform"));
    match lhs {
        Ok(lhs) => PointOutcome {
            lhs,
            rhs,
            error: None,
        },
        Err(e) => fail(f64::NAN, rhs, e),
    }
}

/// Verifies one row for one dimension and original on the given `(k, t)`
/// samples, in parallel with results kept in sample order.
pub fn verify_pair_mixed(
    row: &PairDescriptor,
    d: Dimension,
    f: &TestOriginal,
    samples: &[(f64, f64)],
    settings: EngineSettings,
    tolerance: f64,
) -> Result<VerificationReport> {
    row.check_dimension(d)?;
    settings.quadrature.validate()?;
    if settings.nodes < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 inversion nodes, got {}",
            settings.nodes
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if let Some(reason) = incompatibility(row, f) {
        return Err(Error::Branch(reason));
    }
    let deviation = f.image_consistency(&QuadratureSpec::default())?;
    if deviation > CATALOG_CONSISTENCY {
        return Err(Error::NotConverged(format!(
            "closed-form image of {} deviates from its numeric transform by {deviation:e}",
            f.id
        )));
    }
    let started = Instant::now();
    let outcomes = samples
        .par_iter()
        .map(|&(k, t)| mixed_point(row, d, f, k, t, &settings))
        .collect();
    let points = samples
        .iter()
        .map(|&(k, t)| SamplePoint::Mixed { k, t })
        .collect();
    Ok(assemble(
        row.id.to_string(),
        d.get(),
        f.id.clone(),
        points,
        outcomes,
        tolerance,
        settings,
        started,
    ))
}

/// The default 20-point grid `DEFAULT_K x DEFAULT_T`.
pub fn default_grid() -> Vec<(f64, f64)> {
    DEFAULT_K
        .iter()
        .flat_map(|&k| DEFAULT_T.iter().map(move |&t| (k, t)))
        .collect()
}

/// Runs every registry row for every admissible dimension in `dims` and
/// every compatible catalog original on the default grid. Incompatible
/// combinations are listed in `skipped`. When `output` is given the summary
/// is written there as JSON.
pub fn verify_all(
    dims: &[Dimension],
    tolerance: f64,
    settings: EngineSettings,
    output: Option<&Path>,
) -> Result<VerificationSummary> {
    verify_selected(
        &registry(),
        dims,
        &catalog_list(),
        tolerance,
        settings,
        output,
    )
}

/// [`verify_all`] restricted to the given rows and originals.
pub fn verify_selected(
    rows: &[PairDescriptor],
    dims: &[Dimension],
    originals: &[TestOriginal],
    tolerance: f64,
    settings: EngineSettings,
    output: Option<&Path>,
) -> Result<VerificationSummary> {
    let grid = default_grid();
    let mut summary = VerificationSummary {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for row in rows {
        for &d in dims {
            if !row.admits(d) {
                continue;
            }
            for f in originals {
                if let Some(reason) = incompatibility(row, f) {
                    summary.skipped.push(SkipRecord {
                        pair_id: row.id.to_string(),
                        dimension: d.get(),
                        test_original: f.id.clone(),
                        reason,
                    });
                    continue;
                }
                summary
                    .reports
                    .push(verify_pair_mixed(row, d, f, &grid, settings, tolerance)?);
            }
        }
    }
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&summary)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(summary)
}

/// Serializes `NaN` entries as `null` and reads them back.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
        let opt: Vec<Option<f64>> = values.iter().map(|v| (!v.is_nan()).then_some(*v)).collect();
        opt.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<f64>, D::Error> {
        let opt: Vec<Option<f64>> = Vec::deserialize(deserializer)?;
        Ok(opt.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
    }
}
