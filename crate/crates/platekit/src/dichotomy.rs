//! Dichotomy-condition machinery: the quartic coefficients read off the
//! compliance tensor, the 7x7 resultant-style matrix M, and pointwise
//! classification of a sampled tensor field.

use crate::error::{PlateError, Result};
use crate::tensor4::{Tensor4, TensorKind};
use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

pub type Matrix7 = SMatrix<f64, 7, 7>;

/// Default relative tolerance for the determinant zero test.
pub const DEFAULT_DET_TOL: f64 = 1e-9;

/// Coefficients of the symbol quartic
/// p(s) = a0 + a1 s + a2 s^2 + a3 s^3 + a4 s^4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DichotomyCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl DichotomyCoeffs {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        DichotomyCoeffs { a0, a1, a2, a3, a4 }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a0, self.a1, self.a2, self.a3, self.a4]
    }

    pub fn scale(&self, s: f64) -> DichotomyCoeffs {
        DichotomyCoeffs::new(
            self.a0 * s,
            self.a1 * s,
            self.a2 * s,
            self.a3 * s,
            self.a4 * s,
        )
    }
}

/// Reads the quartic coefficients off a compliance tensor:
/// a0 = A0, a1 = 4 C0, a2 = 2 B0 + 4 E0, a3 = 4 D0, a4 = F0,
/// where A0..F0 is the compliance component naming
/// (A0 = S0_2222, B0 = S0_1122, C0 = -S0_2212, D0 = -S0_1112,
/// E0 = S0_1212, F0 = S0_1111).
pub fn coeffs_from_compliance(s0: &Tensor4) -> Result<DichotomyCoeffs> {
    if s0.kind != TensorKind::Compliance {
        return Err(PlateError::KindMismatch {
            expected: "compliance",
            got: s0.kind.name(),
        });
    }
    Ok(DichotomyCoeffs::new(
        s0.a,
        4.0 * s0.c,
        2.0 * s0.b + 4.0 * s0.e,
        4.0 * s0.d,
        s0.f,
    ))
}

/// Builds the 7x7 matrix M(x): three shifted copies of (a0..a4) and four
/// shifted copies of the derivative coefficients (4a0, 3a1, 2a2, a3).
pub fn build_m(a: &DichotomyCoeffs) -> Matrix7 {
    let p = [a.a0, a.a1, a.a2, a.a3, a.a4];
    let dp = [4.0 * a.a0, 3.0 * a.a1, 2.0 * a.a2, a.a3];
    let mut m = Matrix7::zeros();
    for r in 0..3 {
        for (k, &v) in p.iter().enumerate() {
            m[(r, r + k)] = v;
        }
    }
    for r in 0..4 {
        for (k, &v) in dp.iter().enumerate() {
            m[(3 + r, r + k)] = v;
        }
    }
    m
}

/// Determinant of M via LU with partial pivoting.
pub fn det_m(a: &DichotomyCoeffs) -> f64 {
    build_m(a).lu().determinant()
}

fn max_row_norm(m: &Matrix7) -> f64 {
    (0..7)
        .map(|r| m.row(r).iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max)
}

/// The outcome of the pointwise classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "violations", rename_all = "kebab-case")]
pub enum Classification {
    /// Normalized |det M| > tol at every sample.
    PositiveEverywhere,
    /// Normalized |det M| <= tol at every sample.
    ZeroEverywhere,
    /// Mixed signs of the test: the listed sample indices disagree with the
    /// majority branch.
    Violated(Vec<usize>),
}

/// One classified sample point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DichotomySample {
    pub point: [f64; 2],
    pub coeffs: DichotomyCoeffs,
    pub det_m: f64,
    /// |det M| / a0.
    pub normalized_abs_det: f64,
    /// true when |det M| <= tol * (max row norm of M)^7.
    pub is_zero: bool,
}

/// Classification of a sampled compliance-tensor field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub samples: Vec<DichotomySample>,
    pub classification: Classification,
    pub tol: f64,
    /// The smoothness hypothesis on the coefficient field is not checked;
    /// the classification is purely pointwise on the supplied samples.
    pub smoothness_checked: bool,
}

impl DichotomyReport {
    /// True when the condition holds: either branch of the dichotomy.
    pub fn holds(&self) -> bool {
        !matches!(self.classification, Classification::Violated(_))
    }
}

fn classify_samples(samples: Vec<DichotomySample>, tol: f64) -> DichotomyReport {
    let zeros: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_zero)
        .map(|(i, _)| i)
        .collect();
    let classification = if zeros.is_empty() {
        Classification::PositiveEverywhere
    } else if zeros.len() == samples.len() {
        Classification::ZeroEverywhere
    } else {
        // report the minority branch as the offending samples
        let positives: Vec<usize> = samples
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero)
            .map(|(i, _)| i)
            .collect();
        if positives.len() < zeros.len() {
            Classification::Violated(positives)
        } else {
            Classification::Violated(zeros)
        }
    };
    DichotomyReport {
        samples,
        classification,
        tol,
        smoothness_checked: false,
    }
}

/// Classifies a field given directly by coefficient samples.
pub fn classify_coeff_field(
    points: &[[f64; 2]],
    coeffs: &[DichotomyCoeffs],
    tol: f64,
) -> Result<DichotomyReport> {
    if points.len() != coeffs.len() {
        return Err(PlateError::FieldLengthMismatch {
            expected: points.len(),
            got: coeffs.len(),
        });
    }
    let mut samples = Vec::with_capacity(points.len());
    for (i, (&point, a)) in points.iter().zip(coeffs).enumerate() {
        if a.a0 <= 0.0 {
            return Err(PlateError::NonPositiveA0(a.a0, i));
        }
        let m = build_m(a);
        let det = m.lu().determinant();
        let scale = max_row_norm(&m).powi(7);
        let is_zero = det.abs() <= tol * scale;
        samples.push(DichotomySample {
            point,
            coeffs: *a,
            det_m: det,
            normalized_abs_det: det.abs() / a.a0,
            is_zero,
        });
    }
    Ok(classify_samples(samples, tol))
}

/// Classifies a compliance-tensor field sampled at points.
pub fn classify_field(
    points: &[[f64; 2]],
    tensors: &[Tensor4],
    tol: f64,
) -> Result<DichotomyReport> {
    if points.len() != tensors.len() {
        return Err(PlateError::FieldLengthMismatch {
            expected: points.len(),
            got: tensors.len(),
        });
    }
    let coeffs: Result<Vec<DichotomyCoeffs>> =
        tensors.iter().map(coeffs_from_compliance).collect();
    classify_coeff_field(points, &coeffs?, tol)
}

/// One record of the JSON field format consumed by the CLI:
/// `[{"point": [x, y], "tensor": {...}}, ...]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: [f64; 2],
    pub tensor: Tensor4,
}

/// Classifies a field supplied as JSON records.
pub fn classify_records(records: &[FieldSample], tol: f64) -> Result<DichotomyReport> {
    let points: Vec<[f64; 2]> = records.iter().map(|r| r.point).collect();
    let tensors: Vec<Tensor4> = records.iter().map(|r| r.tensor.clone()).collect();
    classify_field(&points, &tensors, tol)
}
