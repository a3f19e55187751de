//! The four boundary datasets of the plate/elasticity equivalence, each
//! carrying its gauge (the "up to" ambiguity class), plus CSV/JSON
//! serialization with bit-exact round-trips.

use crate::curve::{ClosedCurve, CurveDescriptor};
use crate::error::{PlateError, Result};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

/// Plate Dirichlet data {u, u_n}; gauge: u up to an affine function
/// c.x + d, with u_n shifting consistently by c.n.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateDirichlet {
    pub u: Vec<f64>,
    pub u_n: Vec<f64>,
}

/// Plate Neumann data {M_n, M_t}; gauge: M_t up to an additive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateNeumann {
    pub m_n: Vec<f64>,
    pub m_t: Vec<f64>,
}

/// Elastic Dirichlet data: boundary displacement v; gauge: constant
/// translation.
#[derive(Debug, Clone, PartialEq)]
pub struct ElastDirichlet {
    pub v: Vec<[f64; 2]>,
}

/// Elastic Neumann data: traction sigma n; no gauge, but admissible data
/// must have vanishing net force.
#[derive(Debug, Clone, PartialEq)]
pub struct ElastNeumann {
    pub traction: Vec<[f64; 2]>,
}

/// Any of the four dataset kinds, for file-driven dispatch.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryDataset {
    PlateDirichlet(PlateDirichlet),
    PlateNeumann(PlateNeumann),
    ElastDirichlet(ElastDirichlet),
    ElastNeumann(ElastNeumann),
}

/// Dataset kind tags used in files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    PlateDirichlet,
    PlateNeumann,
    ElastDirichlet,
    ElastNeumann,
}

impl DatasetKind {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetKind::PlateDirichlet => "plate-dirichlet",
            DatasetKind::PlateNeumann => "plate-neumann",
            DatasetKind::ElastDirichlet => "elast-dirichlet",
            DatasetKind::ElastNeumann => "elast-neumann",
        }
    }

    pub fn parse(s: &str) -> Result<DatasetKind> {
        match s {
            "plate-dirichlet" => Ok(DatasetKind::PlateDirichlet),
            "plate-neumann" => Ok(DatasetKind::PlateNeumann),
            "elast-dirichlet" => Ok(DatasetKind::ElastDirichlet),
            "elast-neumann" => Ok(DatasetKind::ElastNeumann),
            _ => Err(PlateError::Parse(format!("unknown dataset kind '{s}'"))),
        }
    }

    /// Value column names in the CSV layout for this kind.
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            DatasetKind::PlateDirichlet => &["u", "u_n"],
            DatasetKind::PlateNeumann => &["M_n", "M_t"],
            DatasetKind::ElastDirichlet => &["v1", "v2"],
            DatasetKind::ElastNeumann => &["sn1", "sn2"],
        }
    }
}

impl BoundaryDataset {
    pub fn kind(&self) -> DatasetKind {
        match self {
            BoundaryDataset::PlateDirichlet(_) => DatasetKind::PlateDirichlet,
            BoundaryDataset::PlateNeumann(_) => DatasetKind::PlateNeumann,
            BoundaryDataset::ElastDirichlet(_) => DatasetKind::ElastDirichlet,
            BoundaryDataset::ElastNeumann(_) => DatasetKind::ElastNeumann,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BoundaryDataset::PlateDirichlet(d) => d.u.len(),
            BoundaryDataset::PlateNeumann(d) => d.m_n.len(),
            BoundaryDataset::ElastDirichlet(d) => d.v.len(),
            BoundaryDataset::ElastNeumann(d) => d.traction.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check_curve(&self, curve: &ClosedCurve) -> Result<()> {
        if self.len() != curve.len() {
            return Err(PlateError::FieldLengthMismatch {
                expected: curve.len(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// The affine function c.x + d removed from plate Dirichlet data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineGauge {
    pub c: [f64; 2],
    pub d: f64,
}

/// Record of the gauge normalization applied to a dataset and any closure
/// residuals observed while producing it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaugeReport {
    /// Ambiguity class: "affine", "translation", "mt-constant" or "none".
    pub ambiguity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine_removed: Option<AffineGauge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translation_removed: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_removed: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residuals: BTreeMap<String, f64>,
}

/// Closure residuals of a dataset, as checked by the downstream transforms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub kind: String,
    pub residuals: BTreeMap<String, f64>,
}

impl PlateDirichlet {
    /// Removes the best-fit affine function (least squares over boundary
    /// nodes, arclength-weighted) from u and the matching c.n from u_n.
    pub fn normalize(&self, curve: &ClosedCurve) -> (PlateDirichlet, GaugeReport) {
        let n = curve.len();
        assert_eq!(self.u.len(), n);
        assert_eq!(self.u_n.len(), n);
        // weighted normal equations for u ~ d + c1 x1 + c2 x2
        let mut m = Matrix3::zeros();
        let mut rhs = Vector3::zeros();
        for j in 0..n {
            let w = curve.ds(j);
            let x = curve.point(j);
            let phi = [1.0, x[0], x[1]];
            for a in 0..3 {
                for b in 0..3 {
                    m[(a, b)] += w * phi[a] * phi[b];
                }
                rhs[a] += w * phi[a] * self.u[j];
            }
        }
        let sol = m.lu().solve(&rhs).unwrap_or_else(Vector3::zeros);
        let (d, c) = (sol[0], [sol[1], sol[2]]);
        let u = (0..n)
            .map(|j| {
                let x = curve.point(j);
                self.u[j] - d - c[0] * x[0] - c[1] * x[1]
            })
            .collect();
        let u_n = (0..n)
            .map(|j| {
                let nj = curve.normal(j);
                self.u_n[j] - c[0] * nj[0] - c[1] * nj[1]
            })
            .collect();
        (
            PlateDirichlet { u, u_n },
            GaugeReport {
                ambiguity: "affine".into(),
                affine_removed: Some(AffineGauge { c, d }),
                ..Default::default()
            },
        )
    }
}

impl ElastDirichlet {
    /// Removes the arclength-weighted mean translation.
    pub fn normalize(&self, curve: &ClosedCurve) -> (ElastDirichlet, GaugeReport) {
        let mean = curve.integrate_vec(&self.v);
        let len = curve.length();
        let shift = [mean[0] / len, mean[1] / len];
        let v = self
            .v
            .iter()
            .map(|p| [p[0] - shift[0], p[1] - shift[1]])
            .collect();
        (
            ElastDirichlet { v },
            GaugeReport {
                ambiguity: "translation".into(),
                translation_removed: Some(shift),
                ..Default::default()
            },
        )
    }
}

impl PlateNeumann {
    /// Removes the arclength-weighted mean of M_t; M_n is exact.
    pub fn normalize(&self, curve: &ClosedCurve) -> (PlateNeumann, GaugeReport) {
        let shift = curve.mean(&self.m_t);
        let m_t = self.m_t.iter().map(|v| v - shift).collect();
        (
            PlateNeumann {
                m_n: self.m_n.clone(),
                m_t,
            },
            GaugeReport {
                ambiguity: "mt-constant".into(),
                constant_removed: Some(shift),
                ..Default::default()
            },
        )
    }
}

impl ElastNeumann {
    /// Identity normalization; tractions have no gauge freedom.
    pub fn normalize(&self, _curve: &ClosedCurve) -> (ElastNeumann, GaugeReport) {
        (
            self.clone(),
            GaugeReport {
                ambiguity: "none".into(),
                ..Default::default()
            },
        )
    }

    /// Net force and net torque of the traction field.
    pub fn net_force(&self, curve: &ClosedCurve) -> [f64; 2] {
        curve.integrate_vec(&self.traction)
    }

    pub fn net_torque(&self, curve: &ClosedCurve) -> f64 {
        let f: Vec<f64> = (0..curve.len())
            .map(|j| {
                let x = curve.point(j);
                let t = self.traction[j];
                x[0] * t[1] - x[1] * t[0]
            })
            .collect();
        curve.integrate(&f)
    }
}

/// Canonical gauge fixing for any dataset kind.
pub fn normalize(curve: &ClosedCurve, d: &BoundaryDataset) -> Result<(BoundaryDataset, GaugeReport)> {
    d.check_curve(curve)?;
    Ok(match d {
        BoundaryDataset::PlateDirichlet(d) => {
            let (nd, r) = d.normalize(curve);
            (BoundaryDataset::PlateDirichlet(nd), r)
        }
        BoundaryDataset::PlateNeumann(d) => {
            let (nd, r) = d.normalize(curve);
            (BoundaryDataset::PlateNeumann(nd), r)
        }
        BoundaryDataset::ElastDirichlet(d) => {
            let (nd, r) = d.normalize(curve);
            (BoundaryDataset::ElastDirichlet(nd), r)
        }
        BoundaryDataset::ElastNeumann(d) => {
            let (nd, r) = d.normalize(curve);
            (BoundaryDataset::ElastNeumann(nd), r)
        }
    })
}

/// Compares two datasets of the same kind modulo gauge; returns the maximum
/// pointwise deviation of the canonical forms and whether it is within tol.
pub fn equal_mod_gauge(
    curve: &ClosedCurve,
    d1: &BoundaryDataset,
    d2: &BoundaryDataset,
    tol: f64,
) -> Result<(bool, f64)> {
    if d1.kind() != d2.kind() {
        return Err(PlateError::DatasetKindMismatch(
            d1.kind().name(),
            d2.kind().name(),
        ));
    }
    let (n1, _) = normalize(curve, d1)?;
    let (n2, _) = normalize(curve, d2)?;
    let dev = max_deviation(&n1, &n2);
    Ok((dev <= tol, dev))
}

fn max_deviation(a: &BoundaryDataset, b: &BoundaryDataset) -> f64 {
    let pair = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
    };
    let pair2 = |x: &[[f64; 2]], y: &[[f64; 2]]| {
        x.iter().zip(y).fold(0.0f64, |m, (p, q)| {
            m.max((p[0] - q[0]).abs()).max((p[1] - q[1]).abs())
        })
    };
    match (a, b) {
        (BoundaryDataset::PlateDirichlet(a), BoundaryDataset::PlateDirichlet(b)) => {
            pair(&a.u, &b.u).max(pair(&a.u_n, &b.u_n))
        }
        (BoundaryDataset::PlateNeumann(a), BoundaryDataset::PlateNeumann(b)) => {
            pair(&a.m_n, &b.m_n).max(pair(&a.m_t, &b.m_t))
        }
        (BoundaryDataset::ElastDirichlet(a), BoundaryDataset::ElastDirichlet(b)) => {
            pair2(&a.v, &b.v)
        }
        (BoundaryDataset::ElastNeumann(a), BoundaryDataset::ElastNeumann(b)) => {
            pair2(&a.traction, &b.traction)
        }
        _ => unreachable!("kind checked by caller"),
    }
}

/// Closure residuals relevant to the downstream transforms.
pub fn admissibility(curve: &ClosedCurve, d: &BoundaryDataset) -> Result<AdmissibilityReport> {
    d.check_curve(curve)?;
    let mut residuals = BTreeMap::new();
    match d {
        BoundaryDataset::ElastNeumann(d) => {
            let f = d.net_force(curve);
            residuals.insert("net_force_1".into(), f[0]);
            residuals.insert("net_force_2".into(), f[1]);
            residuals.insert("net_force_norm".into(), (f[0] * f[0] + f[1] * f[1]).sqrt());
            residuals.insert("net_torque".into(), d.net_torque(curve));
        }
        BoundaryDataset::PlateNeumann(d) => {
            // closure of v_t = -M_t n + M_n t
            let w: Vec<[f64; 2]> = (0..curve.len())
                .map(|j| {
                    let nj = curve.normal(j);
                    let tj = curve.tangent(j);
                    [
                        -d.m_t[j] * nj[0] + d.m_n[j] * tj[0],
                        -d.m_t[j] * nj[1] + d.m_n[j] * tj[1],
                    ]
                })
                .collect();
            let r = curve.integrate_vec(&w);
            residuals.insert("vt_closure_1".into(), r[0]);
            residuals.insert("vt_closure_2".into(), r[1]);
        }
        BoundaryDataset::PlateDirichlet(_) | BoundaryDataset::ElastDirichlet(_) => {}
    }
    Ok(AdmissibilityReport {
        kind: d.kind().name().into(),
        residuals,
    })
}

// ---------------------------------------------------------------------------
// serialization

/// JSON envelope describing a dataset file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetEnvelope {
    pub kind: DatasetKind,
    pub curve: CurveDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeReport>,
    pub columns: Vec<String>,
    /// Relative path of the CSV data file, when stored on disk.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_file: Option<String>,
}

fn fmt17(v: f64) -> String {
    format!("{v:.17e}")
}

/// Writes a dataset as CSV with columns node_index, s, x1, x2, then the
/// kind-specific value columns, with 17 significant digits.
pub fn write_dataset_csv<W: Write>(
    out: W,
    curve: &ClosedCurve,
    d: &BoundaryDataset,
) -> Result<()> {
    d.check_curve(curve)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["node_index".to_string(), "s".into(), "x1".into(), "x2".into()];
    header.extend(d.kind().columns().iter().map(|s| s.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    let s = curve.arclengths();
    for j in 0..curve.len() {
        let x = curve.point(j);
        let mut rec = vec![j.to_string(), fmt17(s[j]), fmt17(x[0]), fmt17(x[1])];
        match d {
            BoundaryDataset::PlateDirichlet(d) => {
                rec.push(fmt17(d.u[j]));
                rec.push(fmt17(d.u_n[j]));
            }
            BoundaryDataset::PlateNeumann(d) => {
                rec.push(fmt17(d.m_n[j]));
                rec.push(fmt17(d.m_t[j]));
            }
            BoundaryDataset::ElastDirichlet(d) => {
                rec.push(fmt17(d.v[j][0]));
                rec.push(fmt17(d.v[j][1]));
            }
            BoundaryDataset::ElastNeumann(d) => {
                rec.push(fmt17(d.traction[j][0]));
                rec.push(fmt17(d.traction[j][1]));
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> PlateError {
    PlateError::Parse(e.to_string())
}

/// Reads a dataset CSV; the kind is inferred from the header columns.
pub fn read_dataset_csv<R: Read>(input: R) -> Result<BoundaryDataset> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header.len() < 6 {
        return Err(PlateError::Parse(format!(
            "expected at least 6 columns, got {}",
            header.len()
        )));
    }
    let value_cols: Vec<&str> = header[4..].iter().map(|s| s.as_str()).collect();
    let kind = [
        DatasetKind::PlateDirichlet,
        DatasetKind::PlateNeumann,
        DatasetKind::ElastDirichlet,
        DatasetKind::ElastNeumann,
    ]
    .into_iter()
    .find(|k| k.columns() == value_cols.as_slice())
    .ok_or_else(|| PlateError::Parse(format!("unrecognized value columns {value_cols:?}")))?;

    let mut col_a = Vec::new();
    let mut col_b = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let parse = |idx: usize| -> Result<f64> {
            rec.get(idx)
                .ok_or_else(|| PlateError::Parse("short record".into()))?
                .trim()
                .parse::<f64>()
                .map_err(|e| PlateError::Parse(e.to_string()))
        };
        col_a.push(parse(4)?);
        col_b.push(parse(5)?);
    }
    Ok(match kind {
        DatasetKind::PlateDirichlet => BoundaryDataset::PlateDirichlet(PlateDirichlet {
            u: col_a,
            u_n: col_b,
        }),
        DatasetKind::PlateNeumann => BoundaryDataset::PlateNeumann(PlateNeumann {
            m_n: col_a,
            m_t: col_b,
        }),
        DatasetKind::ElastDirichlet => BoundaryDataset::ElastDirichlet(ElastDirichlet {
            v: col_a.into_iter().zip(col_b).map(|(a, b)| [a, b]).collect(),
        }),
        DatasetKind::ElastNeumann => BoundaryDataset::ElastNeumann(ElastNeumann {
            traction: col_a.into_iter().zip(col_b).map(|(a, b)| [a, b]).collect(),
        }),
    })
}

pub fn write_dataset_file(
    path: &Path,
    curve: &ClosedCurve,
    d: &BoundaryDataset,
) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_dataset_csv(std::io::BufWriter::new(f), curve, d)
}

pub fn read_dataset_file(path: &Path) -> Result<BoundaryDataset> {
    let f = std::fs::File::open(path)?;
    read_dataset_csv(std::io::BufReader::new(f))
}
