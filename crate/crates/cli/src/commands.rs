//! The four subcommands. Each returns `Ok(true)` when every requested check or
//! row succeeded, `Ok(false)` when some did not, and `Err` for invalid input.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sdt_core::numerics::QuadratureSpec;
use sdt_core::pairs::{catalog_list, lookup, parse_original, registry, PairDescriptor, PairId};
use sdt_core::radial_fourier::{forward, inverse, profiles, Dimension};
use sdt_core::rte2d::{check_energy, intensity, TransportParams};
use sdt_core::verify::{
    incompatibility, verify_pair_mixed, EngineSettings, SamplePoint, VerificationReport, DEFAULT_K,
    DEFAULT_MIXED_TOLERANCE, DEFAULT_T,
};

use crate::output::{emit, num, Table};
use crate::{
    Cli, Command, Direction, Format, GlobalOpts, PairsArgs, RteArgs, TransformArgs, VerifyArgs,
};

pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Pairs(args) => pairs(&cli.global, args),
        Command::Verify(args) => verify(&cli.global, args),
        Command::Rte(args) => rte(&cli.global, args),
        Command::Transform(args) => transform(&cli.global, args),
    }
}

fn quadrature(global: &GlobalOpts) -> Result<QuadratureSpec> {
    let mut spec = QuadratureSpec::default();
    if let Some(tol) = global.tol {
        spec.rel_tol = tol;
    }
    spec.validate()?;
    Ok(spec)
}

fn render(table: &Table, format: Format, command: &str) -> Result<String> {
    match format {
        Format::Csv => table.to_csv(),
        Format::TextTable => Ok(table.to_text()),
        Format::JsonReport => {
            bail!("--format json-report is available for `pairs` and `verify`, not `{command}`")
        }
    }
}

fn pairs(global: &GlobalOpts, args: &PairsArgs) -> Result<bool> {
    let rows = match &args.id {
        Some(id) => vec![lookup(id)?],
        None => registry(),
    };
    let format = global.format.unwrap_or(Format::TextTable);
    let text = if format == Format::JsonReport {
        serde_json::to_string_pretty(&rows)? + "\n"
    } else {
        let mut table = Table::new(vec![
            "id",
            "dimensions",
            "space-time side",
            "Fourier-Laplace side",
            "note",
        ]);
        for row in &rows {
            table.push(vec![
                row.id.to_string(),
                row.dim_constraint.to_string(),
                row.st_formula.clone(),
                row.fl_formula.clone(),
                row.note.clone(),
            ]);
        }
        render(&table, format, "pairs")?
    };
    emit(global.out.as_deref(), &text)?;
    Ok(true)
}

fn dimension(d: u32) -> Result<Dimension> {
    Dimension::new(d).with_context(|| format!("invalid dimension {d}"))
}

fn verify(global: &GlobalOpts, args: &VerifyArgs) -> Result<bool> {
    let tolerance = global.tol.unwrap_or(DEFAULT_MIXED_TOLERANCE);
    if !(tolerance > 0.0) {
        bail!("--tol must be positive, got {tolerance}");
    }
    let settings = EngineSettings {
        quadrature: QuadratureSpec::default(),
        nodes: global.nodes,
    };
    let dims = args
        .dim
        .iter()
        .map(|&d| dimension(d))
        .collect::<Result<Vec<_>>>()?;

    let explicit_pair = args.pair != "all";
    let mut rows: Vec<PairDescriptor> = if explicit_pair {
        vec![lookup(&args.pair)?]
    } else {
        registry()
    };
    if let Some(a) = args.a {
        if explicit_pair && rows[0].id != PairId::R1_5 {
            bail!("--a applies to row 1.5 only");
        }
        for row in rows.iter_mut().filter(|row| row.id == PairId::R1_5) {
            *row = row.with_parameter_a(a)?;
        }
    }
    if explicit_pair {
        for &d in &dims {
            rows[0].check_dimension(d)?;
        }
    }
    let explicit_original = args.original != "all";
    let originals = if explicit_original {
        vec![parse_original(&args.original)?]
    } else {
        catalog_list()
    };

    let ks = args.k.clone().unwrap_or_else(|| DEFAULT_K.to_vec());
    let ts = args.t.clone().unwrap_or_else(|| DEFAULT_T.to_vec());
    let samples: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| ts.iter().map(move |&t| (k, t)))
        .collect();
    if samples.is_empty() {
        bail!("the sample grid is empty");
    }

    let mut reports = Vec::new();
    for row in &rows {
        for &d in dims.iter().filter(|&&d| row.admits(d)) {
            for f in &originals {
                if let Some(reason) = incompatibility(row, f) {
                    if explicit_pair && explicit_original {
                        bail!("row {} cannot be checked with {}: {reason}", row.id, f.id);
                    }
                    eprintln!("skipped row {} d={} {}: {reason}", row.id, d.get(), f.id);
                    continue;
                }
                let report = verify_pair_mixed(row, d, f, &samples, settings, tolerance)?;
                reports.push(if args.timing {
                    report
                } else {
                    report.without_timing()
                });
            }
        }
    }
    if reports.is_empty() {
        bail!("no row, dimension and original combination is admissible");
    }

    let text = match global.format.unwrap_or(Format::TextTable) {
        Format::JsonReport => serde_json::to_string_pretty(&reports)? + "\n",
        Format::Csv => point_table(&reports).to_csv()?,
        Format::TextTable => summary_table(&reports).to_text(),
    };
    emit(global.out.as_deref(), &text)?;
    let passed = reports.iter().filter(|r| r.passed).count();
    eprintln!("{passed} of {} reports passed", reports.len());
    Ok(passed == reports.len())
}

fn summary_table(reports: &[VerificationReport]) -> Table {
    let mut table = Table::new(vec![
        "pair",
        "d",
        "original",
        "points",
        "failed points",
        "max rel error",
        "tolerance",
        "status",
    ]);
    for r in reports {
        table.push(vec![
            r.pair_id.clone(),
            r.dimension.to_string(),
            r.test_original.clone(),
            r.sample_points.len().to_string(),
            r.failed_points().to_string(),
            format!("{:.3e}", r.max_rel_error()),
            num(r.tolerance),
            if r.passed { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    table
}

fn point_table(reports: &[VerificationReport]) -> Table {
    let mut table = Table::new(vec![
        "pair",
        "d",
        "original",
        "k",
        "t",
        "lhs",
        "rhs",
        "abs_error",
        "rel_error",
        "passed",
        "error",
    ]);
    for r in reports {
        for (i, point) in r.sample_points.iter().enumerate() {
            let (k, t) = match *point {
                SamplePoint::Mixed { k, t } => (k, t),
                SamplePoint::Base { k, s, .. } => (k, s),
            };
            let ok = r.point_errors[i].is_none() && r.rel_errors[i] <= r.tolerance;
            table.push(vec![
                r.pair_id.clone(),
                r.dimension.to_string(),
                r.test_original.clone(),
                num(k),
                num(t),
                num(r.lhs_values[i]),
                num(r.rhs_values[i]),
                num(r.abs_errors[i]),
                num(r.rel_errors[i]),
                ok.to_string(),
                r.point_errors[i].clone().unwrap_or_default(),
            ]);
        }
    }
    table
}

/// `<stem>_energy.<ext>` next to `out`.
fn companion_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "rte".into());
    let name = match out.extension() {
        Some(ext) => format!("{stem}_energy.{}", ext.to_string_lossy()),
        None => format!("{stem}_energy"),
    };
    out.with_file_name(name)
}

fn rte(global: &GlobalOpts, args: &RteArgs) -> Result<bool> {
    let p = TransportParams::new(args.c, args.ell, args.a0)?;
    let spec = quadrature(global)?;
    let format = global.format.unwrap_or(Format::Csv);
    if args.r.is_empty() && !args.energy {
        bail!("give radii with --r, or ask for --energy");
    }
    for &r in &args.r {
        if !(r >= 0.0) || !r.is_finite() {
            bail!("radii must be finite and nonnegative, got {r}");
        }
    }

    let mut table = Table::new(vec!["r", "t", "smooth", "ballistic_weight"]);
    for &t in &args.t {
        for &r in &args.r {
            let value = intensity(&p, r, t).with_context(|| format!("grid point r={r}, t={t}"))?;
            table.push(vec![
                num(r),
                num(t),
                num(value.smooth),
                num(value.ballistic_weight),
            ]);
        }
    }
    let energy = if args.energy {
        let mut energy = Table::new(vec!["t", "energy"]);
        for &t in &args.t {
            energy.push(vec![
                num(t),
                num(check_energy(&p, t, &spec).with_context(|| format!("energy at t={t}"))?),
            ]);
        }
        Some(render(&energy, format, "rte")?)
    } else {
        None
    };

    let mut main = if args.r.is_empty() {
        String::new()
    } else {
        render(&table, format, "rte")?
    };
    match (energy, &args.energy_out, &global.out) {
        (Some(text), Some(path), _) => emit(Some(path), &text)?,
        (Some(text), None, Some(out)) => emit(Some(&companion_path(out)), &text)?,
        (Some(text), None, None) => {
            if !main.is_empty() {
                main.push('\n');
            }
            main += &text;
        }
        (None, _, _) => {}
    }
    if !main.is_empty() {
        emit(global.out.as_deref(), &main)?;
    }
    Ok(true)
}

fn transform(global: &GlobalOpts, args: &TransformArgs) -> Result<bool> {
    let d = dimension(args.dim)?;
    let profile = profiles::named(&args.profile, d)?;
    let spec = quadrature(global)?;
    let format = global.format.unwrap_or(Format::Csv);
    let mut table = Table::new(vec!["x", "value", "error_estimate", "converged"]);
    let mut all_converged = true;
    for &x in &args.x {
        let result = match args.direction {
            Direction::Forward => forward(d, &profile, x, &spec),
            Direction::Inverse => inverse(d, &profile, x, &spec),
        };
        let (value, error, converged) = match result {
            Ok(r) => (r.value, r.error_estimate, r.converged),
            Err(e) => {
                eprintln!("x={x}: {e}");
                (f64::NAN, f64::NAN, false)
            }
        };
        all_converged &= converged;
        table.push(vec![num(x), num(value), num(error), converged.to_string()]);
    }
    emit(global.out.as_deref(), &render(&table, format, "transform")?)?;
    Ok(all_converged)
}
