//! File-driven command-line front end for the plate/elasticity
//! boundary-data toolkit.
//!
//! Exit codes: 0 success / condition holds, 1 check failed, 2 invalid
//! input, 3 inadmissible data. Failure paths emit a JSON object on stderr.

use clap::{Parser, Subcommand};
use platekit::boundary_data::{
    admissibility, equal_mod_gauge, read_dataset_file, write_dataset_file, BoundaryDataset,
    DatasetKind, GaugeReport,
};
use platekit::curve::{ClosedCurve, CurveDescriptor};
use platekit::dichotomy::{self, FieldSample};
use platekit::error::PlateError;
use platekit::manufactured::{self, PolyField};
use platekit::nulllag;
use platekit::tensor4::{Tensor4, TensorKind};
use platekit::transforms;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_INADMISSIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "platekit",
    about = "Boundary-data conversions between the Kirchhoff-Love plate and 2D linear elasticity",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert one boundary dataset into its dual counterpart.
    Convert {
        /// Input dataset kind (plate-dirichlet | plate-neumann | elast-dirichlet | elast-neumann).
        #[arg(long)]
        from: String,
        /// Output dataset kind.
        #[arg(long)]
        to: String,
        /// Curve descriptor JSON file.
        #[arg(long)]
        curve: PathBuf,
        /// Input dataset CSV file.
        #[arg(long)]
        data: PathBuf,
        /// Material tensor JSON file (validated if given; the four dataset
        /// conversions themselves are material-independent).
        #[arg(long)]
        tensor: Option<PathBuf>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the gauge/admissibility report JSON (stdout otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Admissibility tolerance (overrides PLATEKIT_TOL).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Generate a manufactured-solution fixture directory.
    Generate {
        /// Polynomial degree of the plate solution (3 or 4).
        #[arg(long)]
        degree: usize,
        /// Material tensor: path to a JSON file, or inline JSON.
        #[arg(long)]
        tensor: String,
        /// Curve descriptor: path to a JSON file, or inline JSON.
        #[arg(long)]
        curve: String,
        /// RNG seed; identical seeds give byte-identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Check roundtrip and cross-route identities on a fixture directory.
    Verify {
        /// Fixture directory produced by `generate`.
        #[arg(long)]
        fixture: PathBuf,
        /// Pass/fail tolerance (overrides PLATEKIT_TOL; default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Classify a sampled compliance-tensor field against the dichotomy condition.
    DichotomyCheck {
        /// JSON array of {"point": [x, y], "tensor": {...}} records.
        #[arg(long)]
        input: PathBuf,
        /// Relative determinant zero-test tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Verify the null-Lagrangian identities and the determinant counterexample.
    Nulllag {
        /// Polynomial degree of the manufactured solution (3 or 4).
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Material tensor: path to a JSON file, or inline JSON.
        #[arg(long)]
        tensor: String,
        /// RNG seed for the manufactured solution.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nodes on the unit circle.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Boundary-vs-area agreement tolerance (overrides PLATEKIT_TOL; default 1e-7).
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let (code, payload) = error_payload(&err);
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            code
        }
    };
    ExitCode::from(code)
}

fn error_payload(err: &PlateError) -> (u8, serde_json::Value) {
    match err {
        PlateError::Inadmissible {
            check,
            residual,
            tol,
        } => (
            EXIT_INADMISSIBLE,
            json!({
                "error": err.to_string(),
                "kind": "inadmissible",
                "check": check,
                "residual": residual,
                "tol": tol,
            }),
        ),
        _ => (
            EXIT_INVALID_INPUT,
            json!({ "error": err.to_string(), "kind": "invalid-input" }),
        ),
    }
}

fn invalid(msg: impl Into<String>) -> PlateError {
    PlateError::Parse(msg.into())
}

/// Default tolerance resolution: explicit flag, then PLATEKIT_TOL, then the
/// built-in default.
fn resolve_tol(flag: Option<f64>, builtin: f64) -> Result<f64, PlateError> {
    if let Some(t) = flag {
        if !(t > 0.0) {
            return Err(invalid(format!("tolerance {t} must be positive")));
        }
        return Ok(t);
    }
    match std::env::var("PLATEKIT_TOL") {
        Ok(s) => {
            let t: f64 = s
                .parse()
                .map_err(|_| invalid(format!("PLATEKIT_TOL = {s:?} is not a number")))?;
            if !(t > 0.0) {
                return Err(invalid(format!("PLATEKIT_TOL = {t} must be positive")));
            }
            Ok(t)
        }
        Err(_) => Ok(builtin),
    }
}

fn load_curve(path: &Path) -> Result<ClosedCurve, PlateError> {
    let text = std::fs::read_to_string(path)?;
    let desc: CurveDescriptor =
        serde_json::from_str(&text).map_err(|e| invalid(format!("curve descriptor: {e}")))?;
    desc.build()
}

/// Parses an argument that is either a path to a JSON file or inline JSON.
fn load_json_arg<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T, PlateError> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path)?
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        return Err(invalid(format!("{what} {arg:?}: no such file")));
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("{what}: {e}")))
}

fn run(cli: Cli) -> Result<u8, PlateError> {
    match cli.command {
        Command::Convert {
            from,
            to,
            curve,
            data,
            tensor,
            out,
            report,
            tol,
        } => convert(&from, &to, &curve, &data, tensor.as_deref(), &out, report.as_deref(), tol),
        Command::Generate {
            degree,
            tensor,
            curve,
            seed,
            out,
        } => generate(degree, &tensor, &curve, seed, &out),
        Command::Verify { fixture, tol } => verify(&fixture, tol),
        Command::DichotomyCheck { input, tol } => dichotomy_check(&input, tol),
        Command::Nulllag {
            degree,
            tensor,
            seed,
            n,
            tol,
        } => nulllag_cmd(degree, &tensor, seed, n, tol),
    }
}

// ---------------------------------------------------------------------------
// convert

#[allow(clippy::too_many_arguments)]
fn convert(
    from: &str,
    to: &str,
    curve_path: &Path,
    data_path: &Path,
    tensor_path: Option<&Path>,
    out: &Path,
    report_path: Option<&Path>,
    tol: Option<f64>,
) -> Result<u8, PlateError> {
    let from = DatasetKind::parse(from)?;
    let to = DatasetKind::parse(to)?;
    let curve = load_curve(curve_path)?;
    let tol = resolve_tol(tol, transforms::DEFAULT_CLOSURE_TOL)?;
    if let Some(p) = tensor_path {
        // validated for early error reporting; the conversions are material-independent
        let _: Tensor4 = load_json_arg(&p.to_string_lossy(), "tensor")?;
    }
    let dataset = read_dataset_file(data_path)?;
    if dataset.kind() != from {
        return Err(PlateError::DatasetKindMismatch(
            from.name(),
            dataset.kind().name(),
        ));
    }
    dataset.check_curve(&curve)?;

    let (converted, gauge): (BoundaryDataset, GaugeReport) = match (&dataset, to) {
        (BoundaryDataset::ElastNeumann(d), DatasetKind::PlateDirichlet) => {
            let (pd, g) = transforms::traction_to_plate_dirichlet(&curve, d, tol)?;
            (BoundaryDataset::PlateDirichlet(pd), g)
        }
        (BoundaryDataset::PlateDirichlet(d), DatasetKind::ElastNeumann) => {
            let t = transforms::plate_dirichlet_to_traction(&curve, d);
            (
                BoundaryDataset::ElastNeumann(t),
                GaugeReport {
                    ambiguity: "none".into(),
                    ..GaugeReport::default()
                },
            )
        }
        (BoundaryDataset::ElastDirichlet(d), DatasetKind::PlateNeumann) => {
            let m = transforms::displacement_to_moments(&curve, d);
            (
                BoundaryDataset::PlateNeumann(m),
                GaugeReport {
                    ambiguity: "none".into(),
                    ..GaugeReport::default()
                },
            )
        }
        (BoundaryDataset::PlateNeumann(d), DatasetKind::ElastDirichlet) => {
            let (v, g) = transforms::moments_to_displacement(&curve, d, tol)?;
            (BoundaryDataset::ElastDirichlet(v), g)
        }
        _ => {
            return Err(invalid(format!(
                "illegal conversion pair {} -> {}; legal pairs: \
                 elast-neumann -> plate-dirichlet, plate-dirichlet -> elast-neumann, \
                 elast-dirichlet -> plate-neumann, plate-neumann -> elast-dirichlet",
                from.name(),
                to.name()
            )))
        }
    };

    write_dataset_file(out, &curve, &converted)?;
    let adm = admissibility(&curve, &converted)?;
    let report = json!({
        "from": from.name(),
        "to": to.name(),
        "nodes": converted.len(),
        "gauge": gauge,
        "admissibility": adm,
        "out": out.to_string_lossy(),
    });
    let text = serde_json::to_string_pretty(&report).unwrap();
    match report_path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// generate

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    /// Monomial terms (i, j, coefficient) of the plate solution u.
    terms: Vec<(usize, usize, f64)>,
    degree: usize,
    seed: u64,
}

fn generate(
    degree: usize,
    tensor_arg: &str,
    curve_arg: &str,
    seed: u64,
    out: &Path,
) -> Result<u8, PlateError> {
    let tensor: Tensor4 = load_json_arg(tensor_arg, "tensor")?;
    // the manufactured machinery needs the plate stiffness (elastic kind);
    // a compliance input is mapped through the duality first
    let stiffness = match tensor.kind {
        TensorKind::Elastic => tensor,
        TensorKind::Compliance => tensor.duality(),
    };
    let desc: CurveDescriptor = load_json_arg(curve_arg, "curve")?;
    let curve = desc.build()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = manufactured::random_plate_solution(&mut rng, degree, &stiffness)?;
    let data = manufactured::eval_all_boundary_data(&u, &stiffness, &curve)?;

    std::fs::create_dir_all(out)?;
    std::fs::write(
        out.join("curve.json"),
        serde_json::to_string_pretty(curve.descriptor()).unwrap() + "\n",
    )?;
    std::fs::write(
        out.join("tensor.json"),
        serde_json::to_string_pretty(&stiffness).unwrap() + "\n",
    )?;
    std::fs::write(
        out.join("solution.json"),
        serde_json::to_string_pretty(&SolutionFile {
            terms: u.terms(),
            degree,
            seed,
        })
        .unwrap()
            + "\n",
    )?;
    let sets: [(&str, BoundaryDataset); 4] = [
        (
            "plate-dirichlet.csv",
            BoundaryDataset::PlateDirichlet(data.plate_dirichlet),
        ),
        (
            "plate-neumann.csv",
            BoundaryDataset::PlateNeumann(data.plate_neumann),
        ),
        (
            "elast-dirichlet.csv",
            BoundaryDataset::ElastDirichlet(data.elast_dirichlet),
        ),
        (
            "elast-neumann.csv",
            BoundaryDataset::ElastNeumann(data.elast_neumann),
        ),
    ];
    for (name, d) in &sets {
        write_dataset_file(&out.join(name), &curve, d)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "out": out.to_string_lossy(),
            "degree": degree,
            "seed": seed,
            "nodes": curve.len(),
            "files": sets.iter().map(|(n, _)| *n).chain(
                ["curve.json", "tensor.json", "solution.json"]).collect::<Vec<_>>(),
        }))
        .unwrap()
    );
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct CheckResult {
    check: String,
    max_dev: f64,
    tol: f64,
    pass: bool,
}

fn verify(fixture: &Path, tol: Option<f64>) -> Result<u8, PlateError> {
    let tol = resolve_tol(tol, 1e-9)?;
    let curve = load_curve(&fixture.join("curve.json"))?;
    let read = |name: &str| read_dataset_file(&fixture.join(name));
    let pd = match read("plate-dirichlet.csv")? {
        BoundaryDataset::PlateDirichlet(d) => d,
        other => {
            return Err(PlateError::DatasetKindMismatch(
                "plate-dirichlet",
                other.kind().name(),
            ))
        }
    };
    let pn = match read("plate-neumann.csv")? {
        BoundaryDataset::PlateNeumann(d) => d,
        other => {
            return Err(PlateError::DatasetKindMismatch(
                "plate-neumann",
                other.kind().name(),
            ))
        }
    };
    let ed = match read("elast-dirichlet.csv")? {
        BoundaryDataset::ElastDirichlet(d) => d,
        other => {
            return Err(PlateError::DatasetKindMismatch(
                "elast-dirichlet",
                other.kind().name(),
            ))
        }
    };
    let en = match read("elast-neumann.csv")? {
        BoundaryDataset::ElastNeumann(d) => d,
        other => {
            return Err(PlateError::DatasetKindMismatch(
                "elast-neumann",
                other.kind().name(),
            ))
        }
    };

    let mut results: Vec<CheckResult> = Vec::new();
    let push = |check: &str, dev: f64, results: &mut Vec<CheckResult>| {
        results.push(CheckResult {
            check: check.into(),
            max_dev: dev,
            tol,
            pass: dev <= tol,
        });
    };

    // R1 forward: traction -> plate Dirichlet, vs stored, mod affine gauge.
    // Inadmissible input is reported as a failed check, not an abort.
    let pd_rec = match transforms::traction_to_plate_dirichlet(&curve, &en, tol.max(1e-6)) {
        Ok((rec, _)) => {
            let (_, dev) = equal_mod_gauge(
                &curve,
                &BoundaryDataset::PlateDirichlet(rec.clone()),
                &BoundaryDataset::PlateDirichlet(pd.clone()),
                tol,
            )?;
            push("r1_traction_to_plate_dirichlet", dev, &mut results);
            Some(rec)
        }
        Err(PlateError::Inadmissible { residual, .. }) => {
            push("r1_traction_to_plate_dirichlet", residual, &mut results);
            None
        }
        Err(e) => return Err(e),
    };

    // R1 reverse: plate Dirichlet -> traction, vs stored
    let en_rec = transforms::plate_dirichlet_to_traction(&curve, &pd);
    let (_, dev) = equal_mod_gauge(
        &curve,
        &BoundaryDataset::ElastNeumann(en_rec),
        &BoundaryDataset::ElastNeumann(en.clone()),
        tol,
    )?;
    push("r1_plate_dirichlet_to_traction", dev, &mut results);

    // R1 roundtrip: traction -> plate Dirichlet -> traction
    if let Some(rec) = &pd_rec {
        let en_round = transforms::plate_dirichlet_to_traction(&curve, rec);
        let (_, dev) = equal_mod_gauge(
            &curve,
            &BoundaryDataset::ElastNeumann(en_round),
            &BoundaryDataset::ElastNeumann(en.clone()),
            tol,
        )?;
        push("r1_roundtrip_traction", dev, &mut results);
    }

    // R2 forward: displacement -> moments, vs stored, mod M_t constant
    let pn_rec = transforms::displacement_to_moments(&curve, &ed);
    let (_, dev) = equal_mod_gauge(
        &curve,
        &BoundaryDataset::PlateNeumann(pn_rec.clone()),
        &BoundaryDataset::PlateNeumann(pn.clone()),
        tol,
    )?;
    push("r2_displacement_to_moments", dev, &mut results);

    // R2 roundtrip: moments -> displacement -> moments
    match transforms::moments_to_displacement(&curve, &pn, tol.max(1e-6)) {
        Ok((ed_rec, _)) => {
            let (_, dev) = equal_mod_gauge(
                &curve,
                &BoundaryDataset::ElastDirichlet(ed_rec.clone()),
                &BoundaryDataset::ElastDirichlet(ed.clone()),
                tol,
            )?;
            push("r2_moments_to_displacement", dev, &mut results);

            let pn_round = transforms::displacement_to_moments(&curve, &ed_rec);
            let (_, dev) = equal_mod_gauge(
                &curve,
                &BoundaryDataset::PlateNeumann(pn_round),
                &BoundaryDataset::PlateNeumann(pn.clone()),
                tol,
            )?;
            push("r2_roundtrip_moments", dev, &mut results);
        }
        Err(PlateError::Inadmissible { residual, .. }) => {
            push("r2_moments_to_displacement", residual, &mut results);
        }
        Err(e) => return Err(e),
    }

    // cross-route: M_n from the displacement route must match the stored
    // moments pointwise (no gauge on M_n)
    let dev = pn_rec
        .m_n
        .iter()
        .zip(&pn.m_n)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    push("cross_route_mn_pointwise", dev, &mut results);

    // cross-route: M_t agrees up to one additive constant; measure the
    // spread of the difference
    let diff: Vec<f64> = pn_rec.m_t.iter().zip(&pn.m_t).map(|(a, b)| a - b).collect();
    let mean = diff.iter().sum::<f64>() / diff.len() as f64;
    let spread = diff.iter().fold(0.0f64, |m, d| m.max((d - mean).abs()));
    push("cross_route_mt_constant_spread", spread, &mut results);

    let all_pass = results.iter().all(|r| r.pass);
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "fixture": fixture.to_string_lossy(),
            "tol": tol,
            "pass": all_pass,
            "checks": results,
        }))
        .unwrap()
    );
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------------------
// dichotomy-check

fn dichotomy_check(input: &Path, tol: Option<f64>) -> Result<u8, PlateError> {
    let tol = resolve_tol(tol, dichotomy::DEFAULT_DET_TOL)?;
    let text = std::fs::read_to_string(input)?;
    let records: Vec<FieldSample> =
        serde_json::from_str(&text).map_err(|e| invalid(format!("dichotomy input: {e}")))?;
    if records.is_empty() {
        return Err(invalid("dichotomy input: empty sample list"));
    }
    let report = dichotomy::classify_records(&records, tol)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(if report.holds() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

// ---------------------------------------------------------------------------
// nulllag

fn nulllag_cmd(
    degree: usize,
    tensor_arg: &str,
    seed: u64,
    n: usize,
    tol: Option<f64>,
) -> Result<u8, PlateError> {
    let tol = resolve_tol(tol, 1e-7)?;
    let tensor: Tensor4 = load_json_arg(tensor_arg, "tensor")?;
    let stiffness = match tensor.kind {
        TensorKind::Elastic => tensor,
        TensorKind::Compliance => tensor.duality(),
    };
    let curve = ClosedCurve::circle(1.0, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: PolyField = manufactured::random_plate_solution(&mut rng, degree, &stiffness)?;
    let data = manufactured::eval_all_boundary_data(&u, &stiffness, &curve)?;
    let reports = nulllag::verify_null_lagrangians(&curve, &u, &stiffness, &data.elast_dirichlet.v)?;
    let counter = nulllag::det_c_hessian_counterexample(&curve, &stiffness, &u)?;
    let pass = reports.iter().all(|r| r.discrepancy <= tol);
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "tol": tol,
            "pass": pass,
            "averages": reports,
            "counterexample": counter,
        }))
        .unwrap()
    );
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
