//! Fourth-order symmetric tensors in 2D: storage, contraction, the
//! rotational conjugation map, the plate/elasticity duality, isotropic
//! constructors and convexity checks.
//!
//! Components are stored under the six-letter naming convention used for
//! anisotropic compliance tensors:
//!
//! ```text
//! compliance S:  S1111 = F, S1122 = B, S1112 = -D, S2212 = -C, S1212 = E, S2222 = A
//! elastic    C:  C1111 = A, C1122 = B, C1112 =  C, C2212 =  D, C1212 = E, C2222 = F
//! ```
//!
//! so that the duality map `C = R S R` is the identity on the stored letters
//! with the kind flag toggled.

use crate::error::{PlateError, Result};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

/// Relative tolerance for symmetry validation of full-component input.
pub const SYMMETRY_TOL: f64 = 1e-12;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Symmetric 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 {
        a11: 0.0,
        a12: 0.0,
        a22: 0.0,
    };

    pub fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Sym2 { a11, a12, a22 }
    }

    pub fn identity() -> Self {
        Sym2::new(1.0, 0.0, 1.0)
    }

    /// Frobenius inner product A:B.
    pub fn dot(&self, other: &Sym2) -> f64 {
        self.a11 * other.a11 + self.a22 * other.a22 + 2.0 * self.a12 * other.a12
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    /// Conjugation by the quarter-turn: `R_perp^T A R_perp`.
    ///
    /// For a symmetric matrix this swaps the diagonal and flips the sign of
    /// the off-diagonal entry.
    pub fn rotated(&self) -> Sym2 {
        Sym2::new(self.a22, -self.a12, self.a11)
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2::new(self.a11 * s, self.a12 * s, self.a22 * s)
    }

    pub fn add(&self, other: &Sym2) -> Sym2 {
        Sym2::new(
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a22 + other.a22,
        )
    }

    pub fn sub(&self, other: &Sym2) -> Sym2 {
        Sym2::new(
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a22 - other.a22,
        )
    }

    /// Matrix-vector product A v.
    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a12 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.a11,
            (1, 1) => self.a22,
            (0, 1) | (1, 0) => self.a12,
            _ => panic!("Sym2 index out of range"),
        }
    }
}

/// Conjugation of a general (not necessarily symmetric) 2x2 matrix by the
/// quarter-turn matrix `R_perp = [[0,1],[-1,0]]`: returns `R_perp^T A R_perp`.
pub fn rotate2(a: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    // R_perp^T A R_perp = [[a22, -a21], [-a12, a11]]
    [[a[1][1], -a[1][0]], [-a[0][1], a[0][0]]]
}

/// Whether a tensor plays the stiffness or the compliance role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    Elastic,
    Compliance,
}

impl TensorKind {
    pub fn name(&self) -> &'static str {
        match self {
            TensorKind::Elastic => "elastic",
            TensorKind::Compliance => "compliance",
        }
    }

    pub fn toggled(&self) -> TensorKind {
        match self {
            TensorKind::Elastic => TensorKind::Compliance,
            TensorKind::Compliance => TensorKind::Elastic,
        }
    }
}

/// Fourth-order 2D tensor with minor and major symmetry, stored as six
/// independent components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tensor4 {
    pub kind: TensorKind,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
}

fn voigt(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (0, 1) | (1, 0) => 2,
        _ => panic!("tensor index out of range"),
    }
}

impl Tensor4 {
    pub fn new(kind: TensorKind, a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Tensor4 {
            kind,
            a,
            b,
            c,
            d,
            e,
            f,
        }
    }

    pub fn zero(kind: TensorKind) -> Self {
        Tensor4::new(kind, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// Raw (unweighted) component for the Voigt pairs p,q in {11, 22, 12}.
    fn raw(&self, p: usize, q: usize) -> f64 {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        match self.kind {
            TensorKind::Compliance => match (p, q) {
                (0, 0) => self.f,  // S1111
                (1, 1) => self.a,  // S2222
                (0, 1) => self.b,  // S1122
                (0, 2) => -self.d, // S1112
                (1, 2) => -self.c, // S2212
                (2, 2) => self.e,  // S1212
                _ => unreachable!(),
            },
            TensorKind::Elastic => match (p, q) {
                (0, 0) => self.a, // C1111
                (1, 1) => self.f, // C2222
                (0, 1) => self.b, // C1122
                (0, 2) => self.c, // C1112
                (1, 2) => self.d, // C2212
                (2, 2) => self.e, // C1212
                _ => unreachable!(),
            },
        }
    }

    /// Full index accessor T_ijkl with indices in {0, 1}.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.raw(voigt(i, j), voigt(k, l))
    }

    /// Builds a tensor from all 16 components, validating minor and major
    /// symmetry to relative tolerance `SYMMETRY_TOL`.
    pub fn from_full(kind: TensorKind, t: &[[[[f64; 2]; 2]; 2]; 2]) -> Result<Tensor4> {
        let mut scale: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        scale = scale.max(t[i][j][k][l].abs());
                    }
                }
            }
        }
        let mut max_dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let v = t[i][j][k][l];
                        max_dev = max_dev.max((v - t[j][i][k][l]).abs());
                        max_dev = max_dev.max((v - t[i][j][l][k]).abs());
                        max_dev = max_dev.max((v - t[k][l][i][j]).abs());
                    }
                }
            }
        }
        let tol = SYMMETRY_TOL * scale.max(1.0);
        if max_dev > tol {
            return Err(PlateError::SymmetryViolation { max_dev, tol });
        }
        let (a, f) = match kind {
            TensorKind::Compliance => (t[1][1][1][1], t[0][0][0][0]),
            TensorKind::Elastic => (t[0][0][0][0], t[1][1][1][1]),
        };
        let b = t[0][0][1][1];
        let e = t[0][1][0][1];
        let (c, d) = match kind {
            TensorKind::Compliance => (-t[1][1][0][1], -t[0][0][0][1]),
            TensorKind::Elastic => (t[0][0][0][1], t[1][1][0][1]),
        };
        Ok(Tensor4::new(kind, a, b, c, d, e, f))
    }

    /// Contraction (T A)_ij = sum_kl T_ijkl A_kl.
    pub fn apply(&self, x: &Sym2) -> Sym2 {
        let row = |p: usize| {
            self.raw(p, 0) * x.a11 + self.raw(p, 1) * x.a22 + 2.0 * self.raw(p, 2) * x.a12
        };
        Sym2::new(row(0), row(2), row(1))
    }

    /// The duality map `T -> R T R` (conjugation by the quarter-turn on both
    /// slots), toggling the kind flag. Maps a plate stiffness to the
    /// compliance of the equivalent 2D elastic medium and back.
    pub fn duality(&self) -> Tensor4 {
        // (R T R) A = rotate2( T ( rotate2(A) ) )
        let basis = [
            Sym2::new(1.0, 0.0, 0.0),
            Sym2::new(0.0, 0.0, 1.0),
            Sym2::new(0.0, 1.0, 0.0),
        ];
        let mut m = [[0.0f64; 3]; 3];
        for (q, eq) in basis.iter().enumerate() {
            let img = self.apply(&eq.rotated()).rotated();
            m[0][q] = img.a11;
            m[1][q] = img.a22;
            m[2][q] = img.a12;
        }
        // columns for 11, 22 are direct; the 12 column was fed 2*E12 worth of
        // off-diagonal weight already through apply, so m[p][2] is T'_{p,12}*2
        // divided back out:
        let kind = self.kind.toggled();
        let raw = |p: usize, q: usize| if q == 2 { m[p][q] / 2.0 } else { m[p][q] };
        let (a, f) = match kind {
            TensorKind::Compliance => (raw(1, 1), raw(0, 0)),
            TensorKind::Elastic => (raw(0, 0), raw(1, 1)),
        };
        let b = raw(0, 1);
        let e = raw(2, 2);
        let (c, d) = match kind {
            TensorKind::Compliance => (-raw(1, 2), -raw(0, 2)),
            TensorKind::Elastic => (raw(0, 2), raw(1, 2)),
        };
        Tensor4::new(kind, a, b, c, d, e, f)
    }

    /// Symmetric 3x3 matrix representation in the orthonormal (Mandel) basis
    /// {e11, e22, sqrt2 e12}; represents the quadratic form A -> (TA):A
    /// exactly.
    pub fn mandel(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.raw(0, 0),
            self.raw(0, 1),
            SQRT_2 * self.raw(0, 2),
            self.raw(0, 1),
            self.raw(1, 1),
            SQRT_2 * self.raw(1, 2),
            SQRT_2 * self.raw(0, 2),
            SQRT_2 * self.raw(1, 2),
            2.0 * self.raw(2, 2),
        )
    }

    /// Strong convexity margin: the infimum of (TA):A over unit symmetric A,
    /// i.e. the smallest eigenvalue of the Mandel representation. Negative
    /// values signal loss of convexity.
    pub fn convexity_margin(&self) -> f64 {
        let eig = self.mandel().symmetric_eigenvalues();
        eig.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Isotropic plate stiffness from bending stiffness `b` and Poisson
    /// coefficient `nu`:
    /// `C_ijkl = B(1-nu)/2 (d_ik d_jl + d_il d_jk) + B nu d_ij d_kl`.
    pub fn isotropic_plate(b: f64, nu: f64) -> Result<Tensor4> {
        if !(b > 0.0) {
            return Err(PlateError::InvalidModuli(format!(
                "bending stiffness B = {b} must be positive"
            )));
        }
        if !(-1.0 < nu && nu < 1.0) {
            return Err(PlateError::InvalidModuli(format!(
                "Poisson coefficient nu = {nu} must lie in (-1, 1)"
            )));
        }
        Ok(Tensor4::new(
            TensorKind::Elastic,
            b,
            b * nu,
            0.0,
            0.0,
            b * (1.0 - nu) / 2.0,
            b,
        ))
    }

    /// Isotropic compliance from bulk modulus `kappa` and shear modulus `mu`:
    /// `S_ijkl = 1/(4 mu) (d_ik d_jl + d_il d_jk) + 1/4 (1/kappa - 1/mu) d_ij d_kl`.
    pub fn isotropic_compliance(kappa: f64, mu: f64) -> Result<Tensor4> {
        if !(kappa > 0.0) || !(mu > 0.0) {
            return Err(PlateError::InvalidModuli(format!(
                "moduli kappa = {kappa}, mu' = {mu} must be positive"
            )));
        }
        let s1111 = 1.0 / (2.0 * mu) + 0.25 * (1.0 / kappa - 1.0 / mu);
        let s1122 = 0.25 * (1.0 / kappa - 1.0 / mu);
        Ok(Tensor4::new(
            TensorKind::Compliance,
            s1111, // A = S2222 = S1111 by isotropy
            s1122,
            0.0,
            0.0,
            1.0 / (4.0 * mu), // E = S1212
            s1111,
        ))
    }

    /// Scales every component.
    pub fn scale(&self, s: f64) -> Tensor4 {
        Tensor4::new(
            self.kind,
            self.a * s,
            self.b * s,
            self.c * s,
            self.d * s,
            self.e * s,
            self.f * s,
        )
    }
}

/// JSON form of a tensor: either the six explicit components with a kind
/// flag, or the isotropic plate shorthand `{"isotropic": {"B":..., "nu":...}}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Tensor4Json {
    Isotropic {
        isotropic: IsotropicSpec,
    },
    Full {
        kind: TensorKind,
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
        #[serde(rename = "C")]
        c: f64,
        #[serde(rename = "D")]
        d: f64,
        #[serde(rename = "E")]
        e: f64,
        #[serde(rename = "F")]
        f: f64,
    },
}

#[derive(Debug, Deserialize)]
struct IsotropicSpec {
    #[serde(rename = "B")]
    b: f64,
    nu: f64,
}

impl<'de> Deserialize<'de> for Tensor4 {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = Tensor4Json::deserialize(deserializer)?;
        match raw {
            Tensor4Json::Isotropic { isotropic } => {
                Tensor4::isotropic_plate(isotropic.b, isotropic.nu)
                    .map_err(serde::de::Error::custom)
            }
            Tensor4Json::Full {
                kind,
                a,
                b,
                c,
                d,
                e,
                f,
            } => Ok(Tensor4::new(kind, a, b, c, d, e, f)),
        }
    }
}

/// Isotropic material description; any consistent subset of fields may be
/// present and [`IsotropicModuli::complete`] fills in what is derivable.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct IsotropicModuli {
    /// Bending stiffness B.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bending: Option<f64>,
    /// Poisson coefficient nu.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    /// Young's modulus E.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub young: Option<f64>,
    /// Lame coefficient lambda.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Lame coefficient mu.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Plate thickness h.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    /// Bulk modulus kappa of the dual compliance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Shear modulus mu' of the dual compliance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_prime: Option<f64>,
}

impl IsotropicModuli {
    /// Fills every field derivable from the supplied subset:
    ///
    /// - `E = mu (2 mu + 3 lambda) / (mu + lambda)`, `nu = lambda / (2 (mu + lambda))`
    /// - `mu = E / (2 (1 + nu))`, `lambda = 2 nu mu / (1 - 2 nu)`
    /// - `B = h^3/12 * E / (1 - nu^2)`
    /// - `kappa = 2 / (B (1 + nu))`, `mu' = 2 / (B (1 - nu))`
    pub fn complete(&self) -> Result<IsotropicModuli> {
        let mut m = *self;
        if let (Some(lambda), Some(mu)) = (m.lambda, m.mu) {
            if mu + lambda == 0.0 {
                return Err(PlateError::InvalidModuli("mu + lambda = 0".into()));
            }
            m.young.get_or_insert(mu * (2.0 * mu + 3.0 * lambda) / (mu + lambda));
            m.nu.get_or_insert(lambda / (2.0 * (mu + lambda)));
        }
        if let (Some(e), Some(nu)) = (m.young, m.nu) {
            if m.mu.is_none() {
                m.mu = Some(e / (2.0 * (1.0 + nu)));
            }
            if m.lambda.is_none() {
                if 1.0 - 2.0 * nu == 0.0 {
                    return Err(PlateError::InvalidModuli("nu = 1/2".into()));
                }
                let mu = m.mu.unwrap();
                m.lambda = Some(2.0 * nu * mu / (1.0 - 2.0 * nu));
            }
            if let Some(h) = m.thickness {
                if nu.abs() >= 1.0 {
                    return Err(PlateError::InvalidModuli(format!("nu = {nu} out of (-1,1)")));
                }
                m.bending
                    .get_or_insert(h * h * h / 12.0 * e / (1.0 - nu * nu));
            }
        }
        if let (Some(b), Some(nu)) = (m.bending, m.nu) {
            if nu.abs() >= 1.0 || b == 0.0 {
                return Err(PlateError::InvalidModuli(format!("B = {b}, nu = {nu}")));
            }
            m.kappa.get_or_insert(2.0 / (b * (1.0 + nu)));
            m.mu_prime.get_or_insert(2.0 / (b * (1.0 - nu)));
        }
        Ok(m)
    }

    /// Checks the physical-range invariants on whichever fields are present.
    pub fn validate_physical(&self) -> Result<()> {
        if let Some(mu) = self.mu {
            if mu <= 0.0 {
                return Err(PlateError::InvalidModuli(format!("mu = {mu} <= 0")));
            }
            if let Some(lambda) = self.lambda {
                if 2.0 * mu + 3.0 * lambda <= 0.0 {
                    return Err(PlateError::InvalidModuli(format!(
                        "2 mu + 3 lambda = {} <= 0",
                        2.0 * mu + 3.0 * lambda
                    )));
                }
            }
        }
        if let Some(nu) = self.nu {
            if !(-1.0 < nu && nu < 1.0) {
                return Err(PlateError::InvalidModuli(format!("nu = {nu} out of (-1,1)")));
            }
        }
        if let Some(b) = self.bending {
            if b <= 0.0 {
                return Err(PlateError::InvalidModuli(format!("B = {b} <= 0")));
            }
        }
        if let Some(h) = self.thickness {
            if h <= 0.0 {
                return Err(PlateError::InvalidModuli(format!("h = {h} <= 0")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_tensor(rng: &mut StdRng, kind: TensorKind) -> Tensor4 {
        Tensor4::new(
            kind,
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    fn random_sym2(rng: &mut StdRng) -> Sym2 {
        Sym2::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    // Independent oracle: full 16-term index sum for the contraction.
    fn apply_oracle(t: &Tensor4, x: &Sym2) -> Sym2 {
        let xm = [[x.a11, x.a12], [x.a12, x.a22]];
        let mut out = [[0.0f64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[i][j] += t.get(i, j, k, l) * xm[k][l];
                    }
                }
            }
        }
        Sym2::new(out[0][0], out[0][1], out[1][1])
    }

    #[test]
    fn apply_matches_index_sum_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_tensor(&mut rng, TensorKind::Elastic);
            let x = random_sym2(&mut rng);
            let got = t.apply(&x);
            let want = apply_oracle(&t, &x);
            assert_abs_diff_eq!(got.a11, want.a11, epsilon = 1e-14);
            assert_abs_diff_eq!(got.a12, want.a12, epsilon = 1e-14);
            assert_abs_diff_eq!(got.a22, want.a22, epsilon = 1e-14);
        }
    }

    #[test]
    fn apply_isotropic_identity_on_i2() {
        // B=1, nu=0 acting on I2: C_ijkl d_kl = delta-pair sum = I2
        let t = Tensor4::isotropic_plate(1.0, 0.0).unwrap();
        let r = t.apply(&Sym2::identity());
        assert_abs_diff_eq!(r.a11, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.a12, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.a22, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_isotropic_nu03_on_i2() {
        let t = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let r = t.apply(&Sym2::identity());
        // (1 + nu) I2
        assert_abs_diff_eq!(r.a11, 1.3, epsilon = 1e-15);
        assert_abs_diff_eq!(r.a22, 1.3, epsilon = 1e-15);
        assert_abs_diff_eq!(r.a12, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_zero_matrix() {
        let mut rng = StdRng::seed_from_u64(3);
        let t = random_tensor(&mut rng, TensorKind::Compliance);
        let r = t.apply(&Sym2::ZERO);
        assert_eq!((r.a11, r.a12, r.a22), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rotate2_hand_cases() {
        let r = rotate2([[2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(r, [[0.0, 0.0], [0.0, 2.0]]);
        let r = rotate2([[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(r, [[0.0, -1.0], [-1.0, 0.0]]);
    }

    #[test]
    fn rotate2_involution() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = [
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            ];
            assert_eq!(rotate2(rotate2(a)), a);
        }
    }

    #[test]
    fn duality_component_map() {
        // C1111 = S2222 = A, C1122 = S2211 = B, C1112 = -S2212 = C,
        // C2212 = -S1112 = D, C1212 = S1212 = E, C2222 = S1111 = F.
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..30 {
            let s = random_tensor(&mut rng, TensorKind::Compliance);
            let c = s.duality();
            assert_eq!(c.kind, TensorKind::Elastic);
            assert_abs_diff_eq!(c.get(0, 0, 0, 0), s.get(1, 1, 1, 1), epsilon = 1e-15);
            assert_abs_diff_eq!(c.get(0, 0, 1, 1), s.get(1, 1, 0, 0), epsilon = 1e-15);
            assert_abs_diff_eq!(c.get(0, 0, 0, 1), -s.get(1, 1, 0, 1), epsilon = 1e-15);
            assert_abs_diff_eq!(c.get(1, 1, 0, 1), -s.get(0, 0, 0, 1), epsilon = 1e-15);
            assert_abs_diff_eq!(c.get(0, 1, 0, 1), s.get(0, 1, 0, 1), epsilon = 1e-15);
            assert_abs_diff_eq!(c.get(1, 1, 1, 1), s.get(0, 0, 0, 0), epsilon = 1e-15);
            // letters pass through unchanged
            assert_eq!((c.a, c.b, c.c, c.d, c.e, c.f), (s.a, s.b, s.c, s.d, s.e, s.f));
        }
    }

    #[test]
    fn duality_involution() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..30 {
            let s = random_tensor(&mut rng, TensorKind::Compliance);
            let back = s.duality().duality();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn duality_of_isotropic_plate_is_isotropic_compliance() {
        // R-conjugation is the identity on isotropic tensors, so the dual
        // compliance has the same eigenvalues as the plate tensor:
        // 1/(2 kappa) = B(1+nu) and 1/(2 mu') = B(1-nu).
        let (b, nu) = (1.7, 0.3);
        let c = Tensor4::isotropic_plate(b, nu).unwrap();
        let s = c.duality();
        let kappa = 1.0 / (2.0 * b * (1.0 + nu));
        let mu = 1.0 / (2.0 * b * (1.0 - nu));
        let want = Tensor4::isotropic_compliance(kappa, mu).unwrap();
        assert_abs_diff_eq!(s.a, want.a, epsilon = 1e-14);
        assert_abs_diff_eq!(s.b, want.b, epsilon = 1e-14);
        assert_abs_diff_eq!(s.c, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.d, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.e, want.e, epsilon = 1e-14);
        assert_abs_diff_eq!(s.f, want.f, epsilon = 1e-14);
    }

    #[test]
    fn isotropic_plate_components() {
        let c = Tensor4::isotropic_plate(1.0, 0.0).unwrap();
        assert_eq!(c.get(0, 0, 0, 0), 1.0);
        assert_eq!(c.get(0, 0, 1, 1), 0.0);
        assert_eq!(c.get(0, 1, 0, 1), 0.5);
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        assert_abs_diff_eq!(c.get(0, 0, 1, 1), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(0, 1, 0, 1), 0.35, epsilon = 1e-15);
    }

    #[test]
    fn isotropic_plate_rejects_bad_moduli() {
        assert!(Tensor4::isotropic_plate(-1.0, 0.0).is_err());
        assert!(Tensor4::isotropic_plate(1.0, 1.0).is_err());
    }

    #[test]
    fn full_accessor_symmetry() {
        let mut rng = StdRng::seed_from_u64(23);
        let t = random_tensor(&mut rng, TensorKind::Compliance);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let v = t.get(i, j, k, l);
                        assert_eq!(v, t.get(j, i, k, l));
                        assert_eq!(v, t.get(i, j, l, k));
                        assert_eq!(v, t.get(k, l, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn from_full_roundtrip_and_symmetry_check() {
        let mut rng = StdRng::seed_from_u64(29);
        let t = random_tensor(&mut rng, TensorKind::Elastic);
        let mut full = [[[[0.0f64; 2]; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        full[i][j][k][l] = t.get(i, j, k, l);
                    }
                }
            }
        }
        let t2 = Tensor4::from_full(TensorKind::Elastic, &full).unwrap();
        assert_eq!(t, t2);
        full[0][1][0][0] += 1e-6;
        assert!(Tensor4::from_full(TensorKind::Elastic, &full).is_err());
    }

    #[test]
    fn convexity_margin_isotropic() {
        // Eigenvalues of the isotropic plate form: 2B (trace mode, with nu=0
        // split B(1+nu), B(1-nu)) and B(1-nu) twice on the deviatoric modes.
        let b = 1.0;
        for &nu in &[0.0, 0.3, -0.4] {
            let t = Tensor4::isotropic_plate(b, nu).unwrap();
            let margin = t.convexity_margin();
            let want = (b * (1.0 - nu)).min(b * (1.0 + nu));
            assert_abs_diff_eq!(margin, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn convexity_margin_dense_sampling_oracle() {
        // Margin must lower-bound (TA):A over sampled unit symmetric A and be
        // attained to sampling resolution.
        let mut rng = StdRng::seed_from_u64(31);
        let t = random_tensor(&mut rng, TensorKind::Elastic);
        let margin = t.convexity_margin();
        let mut min_seen = f64::INFINITY;
        for _ in 0..20000 {
            let a = random_sym2(&mut rng);
            let n = a.norm();
            if n < 1e-8 {
                continue;
            }
            let u = a.scale(1.0 / n);
            let q = t.apply(&u).dot(&u);
            assert!(q >= margin - 1e-10);
            min_seen = min_seen.min(q);
        }
        assert!(min_seen - margin < 0.05, "sampled min {min_seen} vs margin {margin}");
    }

    #[test]
    fn convexity_margin_zero_tensor() {
        assert_eq!(Tensor4::zero(TensorKind::Elastic).convexity_margin(), 0.0);
    }

    #[test]
    fn margin_invariant_under_duality() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..30 {
            let s = random_tensor(&mut rng, TensorKind::Compliance);
            let d = (s.duality().convexity_margin() - s.convexity_margin()).abs();
            assert!(d <= 1e-12, "margin drift {d}");
        }
    }

    #[test]
    fn apply_self_adjoint() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..30 {
            let t = random_tensor(&mut rng, TensorKind::Elastic);
            let x = random_sym2(&mut rng);
            let y = random_sym2(&mut rng);
            assert_abs_diff_eq!(t.apply(&x).dot(&y), t.apply(&y).dot(&x), epsilon = 1e-14);
        }
    }

    #[test]
    fn moduli_lame_to_young() {
        let m = IsotropicModuli {
            lambda: Some(0.0),
            mu: Some(1.0),
            ..Default::default()
        }
        .complete()
        .unwrap();
        assert_abs_diff_eq!(m.young.unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.nu.unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn moduli_bending_to_dual() {
        let m = IsotropicModuli {
            bending: Some(1.0),
            nu: Some(0.0),
            ..Default::default()
        }
        .complete()
        .unwrap();
        assert_abs_diff_eq!(m.kappa.unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mu_prime.unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn moduli_thickness_cubic_scaling() {
        let base = IsotropicModuli {
            young: Some(3.0),
            nu: Some(0.25),
            thickness: Some(1.0),
            ..Default::default()
        }
        .complete()
        .unwrap();
        let doubled = IsotropicModuli {
            young: Some(3.0),
            nu: Some(0.25),
            thickness: Some(2.0),
            ..Default::default()
        }
        .complete()
        .unwrap();
        assert_abs_diff_eq!(
            doubled.bending.unwrap(),
            8.0 * base.bending.unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn moduli_underdetermined_or_singular() {
        let m = IsotropicModuli {
            lambda: Some(1.0),
            mu: Some(-1.0),
            ..Default::default()
        };
        assert!(m.complete().is_err()); // mu + lambda = 0
        let m = IsotropicModuli {
            mu: Some(1.0),
            ..Default::default()
        }
        .complete()
        .unwrap();
        assert!(m.young.is_none());
    }

    #[test]
    fn tensor_json_roundtrip_and_shorthand() {
        let t = Tensor4::new(TensorKind::Compliance, 1.0, 0.5, -0.25, 0.125, 2.0, 3.0);
        let s = serde_json::to_string(&t).unwrap();
        let back: Tensor4 = serde_json::from_str(&s).unwrap();
        assert_eq!(t, back);

        let iso: Tensor4 = serde_json::from_str(r#"{"isotropic": {"B": 1.0, "nu": 0.3}}"#).unwrap();
        assert_eq!(iso, Tensor4::isotropic_plate(1.0, 0.3).unwrap());
    }
}
