//! Exact polynomial manufactured solutions: Airy functions, stresses,
//! strains, and compatible displacements, all in exact coefficient
//! arithmetic. Only boundary sampling introduces floating point, so these
//! fields serve as machine-precision oracles for the boundary transforms.

use crate::boundary_data::{ElastDirichlet, ElastNeumann, PlateDirichlet, PlateNeumann};
use crate::curve::ClosedCurve;
use crate::error::{PlateError, Result};
use crate::tensor4::{Sym2, Tensor4, TensorKind};
use crate::transforms;
use rand::Rng;

/// Degree cap for polynomial arithmetic.
pub const MAX_DEGREE: usize = 12;

const COEFF_TOL: f64 = 1e-12;

/// Bivariate polynomial in x1, x2 with dense coefficient storage;
/// `coeff(i, j)` multiplies `x1^i x2^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    // (MAX_DEGREE+1) x (MAX_DEGREE+1) grid, row i = power of x1
    c: Vec<f64>,
}

const W: usize = MAX_DEGREE + 1;

impl PolyField {
    pub fn zero() -> Self {
        PolyField { c: vec![0.0; W * W] }
    }

    pub fn monomial(i: usize, j: usize, coeff: f64) -> Self {
        assert!(i < W && j < W, "degree cap exceeded");
        let mut p = PolyField::zero();
        p.c[i * W + j] = coeff;
        p
    }

    pub fn constant(v: f64) -> Self {
        PolyField::monomial(0, 0, v)
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i < W && j < W {
            self.c[i * W + j]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < W && j < W, "degree cap exceeded");
        self.c[i * W + j] = v;
    }

    pub fn degree(&self) -> usize {
        let mut d = 0;
        for i in 0..W {
            for j in 0..W {
                if self.c[i * W + j] != 0.0 {
                    d = d.max(i + j);
                }
            }
        }
        d
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    pub fn add(&self, other: &PolyField) -> PolyField {
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        PolyField { c }
    }

    pub fn sub(&self, other: &PolyField) -> PolyField {
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect();
        PolyField { c }
    }

    pub fn scale(&self, s: f64) -> PolyField {
        PolyField {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul(&self, other: &PolyField) -> PolyField {
        assert!(
            self.degree() + other.degree() <= MAX_DEGREE,
            "product degree exceeds cap"
        );
        let mut out = PolyField::zero();
        for i in 0..W {
            for j in 0..W {
                let a = self.c[i * W + j];
                if a == 0.0 {
                    continue;
                }
                for k in 0..W - i {
                    for l in 0..W - j {
                        let b = other.c[k * W + l];
                        if b != 0.0 {
                            out.c[(i + k) * W + (j + l)] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Partial derivative with respect to x1.
    pub fn dx1(&self) -> PolyField {
        let mut out = PolyField::zero();
        for i in 1..W {
            for j in 0..W {
                out.c[(i - 1) * W + j] = self.c[i * W + j] * i as f64;
            }
        }
        out
    }

    /// Partial derivative with respect to x2.
    pub fn dx2(&self) -> PolyField {
        let mut out = PolyField::zero();
        for i in 0..W {
            for j in 1..W {
                out.c[i * W + (j - 1)] = self.c[i * W + j] * j as f64;
            }
        }
        out
    }

    /// Antiderivative in x1 with zero constant of integration.
    pub fn int_x1(&self) -> PolyField {
        let mut out = PolyField::zero();
        for i in 0..W - 1 {
            for j in 0..W {
                if self.c[i * W + j] != 0.0 {
                    out.c[(i + 1) * W + j] = self.c[i * W + j] / (i + 1) as f64;
                }
            }
        }
        out
    }

    pub fn int_x2(&self) -> PolyField {
        let mut out = PolyField::zero();
        for i in 0..W {
            for j in 0..W - 1 {
                if self.c[i * W + j] != 0.0 {
                    out.c[i * W + (j + 1)] = self.c[i * W + j] / (j + 1) as f64;
                }
            }
        }
        out
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        // Horner in x1 over polynomials in x2
        let mut acc = 0.0;
        for i in (0..W).rev() {
            let mut row = 0.0;
            for j in (0..W).rev() {
                row = row * x[1] + self.c[i * W + j];
            }
            acc = acc * x[0] + row;
        }
        acc
    }

    pub fn gradient(&self) -> Vec2Poly {
        Vec2Poly {
            x: self.dx1(),
            y: self.dx2(),
        }
    }

    /// Terms of the polynomial as (i, j, coeff) triples.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..W {
            for j in 0..W {
                if self.c[i * W + j] != 0.0 {
                    out.push((i, j, self.c[i * W + j]));
                }
            }
        }
        out
    }

    pub fn from_terms(terms: &[(usize, usize, f64)]) -> PolyField {
        let mut p = PolyField::zero();
        for &(i, j, v) in terms {
            p.c[i * W + j] += v;
        }
        p
    }
}

/// Symmetric-matrix-valued polynomial field.
#[derive(Debug, Clone, PartialEq)]
pub struct Sym2Poly {
    pub a11: PolyField,
    pub a12: PolyField,
    pub a22: PolyField,
}

impl Sym2Poly {
    pub fn zero() -> Self {
        Sym2Poly {
            a11: PolyField::zero(),
            a12: PolyField::zero(),
            a22: PolyField::zero(),
        }
    }

    pub fn eval(&self, x: [f64; 2]) -> Sym2 {
        Sym2::new(self.a11.eval(x), self.a12.eval(x), self.a22.eval(x))
    }

    /// Row-wise divergence (d_j A_ij).
    pub fn div(&self) -> Vec2Poly {
        Vec2Poly {
            x: self.a11.dx1().add(&self.a12.dx2()),
            y: self.a12.dx1().add(&self.a22.dx2()),
        }
    }

    /// Conjugation by the quarter-turn, entrywise:
    /// `R_perp^T A R_perp = [[a22, -a12], [-a12, a11]]`.
    pub fn rotated(&self) -> Sym2Poly {
        Sym2Poly {
            a11: self.a22.clone(),
            a12: self.a12.scale(-1.0),
            a22: self.a11.clone(),
        }
    }

    pub fn det(&self) -> PolyField {
        self.a11.mul(&self.a22).sub(&self.a12.mul(&self.a12))
    }

    pub fn trace(&self) -> PolyField {
        self.a11.add(&self.a22)
    }

    pub fn sub(&self, other: &Sym2Poly) -> Sym2Poly {
        Sym2Poly {
            a11: self.a11.sub(&other.a11),
            a12: self.a12.sub(&other.a12),
            a22: self.a22.sub(&other.a22),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.a11
            .max_abs_coeff()
            .max(self.a12.max_abs_coeff())
            .max(self.a22.max_abs_coeff())
    }
}

/// Vector-valued polynomial field.
#[derive(Debug, Clone, PartialEq)]
pub struct Vec2Poly {
    pub x: PolyField,
    pub y: PolyField,
}

impl Vec2Poly {
    pub fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        [self.x.eval(p), self.y.eval(p)]
    }

    pub fn div(&self) -> PolyField {
        self.x.dx1().add(&self.y.dx2())
    }

    /// Symmetric gradient of the field viewed as a displacement.
    pub fn sym_grad(&self) -> Sym2Poly {
        Sym2Poly {
            a11: self.x.dx1(),
            a12: self.x.dx2().add(&self.y.dx1()).scale(0.5),
            a22: self.y.dx2(),
        }
    }
}

/// Hessian matrix of a scalar polynomial.
pub fn hessian(u: &PolyField) -> Sym2Poly {
    Sym2Poly {
        a11: u.dx1().dx1(),
        a12: u.dx1().dx2(),
        a22: u.dx2().dx2(),
    }
}

/// Airy stress: `sigma = R_perp^T (hess u) R_perp`; divergence-free by
/// construction.
pub fn stress_from_airy(u: &PolyField) -> Sym2Poly {
    hessian(u).rotated()
}

/// Applies a constant fourth-order tensor to a matrix polynomial field,
/// entrywise on coefficients.
pub fn apply_tensor(t: &Tensor4, a: &Sym2Poly) -> Sym2Poly {
    let comp = |i: usize, j: usize| {
        a.a11
            .scale(t.get(i, j, 0, 0))
            .add(&a.a22.scale(t.get(i, j, 1, 1)))
            .add(&a.a12.scale(2.0 * t.get(i, j, 0, 1)))
    };
    Sym2Poly {
        a11: comp(0, 0),
        a12: comp(0, 1),
        a22: comp(1, 1),
    }
}

/// Hooke's law `eps = S sigma` with a constant compliance tensor.
pub fn strain_from_stress(sigma: &Sym2Poly, s: &Tensor4) -> Result<Sym2Poly> {
    if s.kind != TensorKind::Compliance {
        return Err(PlateError::KindMismatch {
            expected: "compliance",
            got: s.kind.name(),
        });
    }
    Ok(apply_tensor(s, sigma))
}

/// The plate operator `div div (C hess u)` applied symbolically.
pub fn plate_operator(c: &Tensor4, u: &PolyField) -> PolyField {
    let m = apply_tensor(c, &hessian(u));
    m.a11
        .dx1()
        .dx1()
        .add(&m.a12.dx1().dx2().scale(2.0))
        .add(&m.a22.dx2().dx2())
}

/// Integrates an exact gradient (p, q) to a potential f with f(0,0) = 0.
/// Fails if the field is not curl-free to coefficient tolerance.
fn integrate_gradient(p: &PolyField, q: &PolyField) -> Result<PolyField> {
    let curl = p.dx2().sub(&q.dx1());
    let scale = p.max_abs_coeff().max(q.max_abs_coeff()).max(1.0);
    if !curl.is_zero(COEFF_TOL * scale) {
        return Err(PlateError::IncompatibleStrain(curl.max_abs_coeff()));
    }
    let f0 = p.int_x1();
    let rem = q.sub(&f0.dx2());
    // rem must depend on x2 only
    for (i, _, v) in rem.terms() {
        if i > 0 && v.abs() > COEFF_TOL * scale {
            return Err(PlateError::IncompatibleStrain(v.abs()));
        }
    }
    let mut rem_x2 = PolyField::zero();
    for (i, j, v) in rem.terms() {
        if i == 0 {
            rem_x2.set_coeff(0, j, v);
        }
    }
    Ok(f0.add(&rem_x2.int_x2()))
}

/// Reconstructs a polynomial displacement v with sym grad v = eps exactly,
/// gauged by v(base) = 0 and skew grad v(base) = 0.
pub fn displacement_from_strain(eps: &Sym2Poly, base: [f64; 2]) -> Result<Vec2Poly> {
    // compatibility: e11,22 + e22,11 - 2 e12,12 = 0
    let compat = eps
        .a11
        .dx2()
        .dx2()
        .add(&eps.a22.dx1().dx1())
        .sub(&eps.a12.dx1().dx2().scale(2.0));
    let scale = eps.max_abs_coeff().max(1.0);
    if !compat.is_zero(COEFF_TOL * scale) {
        return Err(PlateError::IncompatibleStrain(compat.max_abs_coeff()));
    }
    // rotation omega = (v2,1 - v1,2)/2 from its gradient
    let omega_x = eps.a12.dx1().sub(&eps.a11.dx2());
    let omega_y = eps.a22.dx1().sub(&eps.a12.dx2());
    let omega0 = integrate_gradient(&omega_x, &omega_y)?;
    let omega = omega0.sub(&PolyField::constant(omega0.eval(base)));
    // grad v1 = (e11, e12 - omega), grad v2 = (e12 + omega, e22)
    let v1 = integrate_gradient(&eps.a11, &eps.a12.sub(&omega))?;
    let v2 = integrate_gradient(&eps.a12.add(&omega), &eps.a22)?;
    let v1 = v1.sub(&PolyField::constant(v1.eval(base)));
    let v2 = v2.sub(&PolyField::constant(v2.eval(base)));
    Ok(Vec2Poly { x: v1, y: v2 })
}

/// Basis of polynomial solutions of the plate equation up to the given
/// degree (at most 4): every polynomial of degree <= 3 solves it for any
/// constant tensor; among the five quartic monomials one linear constraint
/// survives, so its 4-dimensional nullspace is appended.
pub fn plate_kernel_basis(c: &Tensor4, degree: usize) -> Result<Vec<PolyField>> {
    if degree > 4 {
        return Err(PlateError::DegreeTooHigh { got: degree, cap: 4 });
    }
    let mut basis = Vec::new();
    for d in 0..=degree.min(3) {
        for i in (0..=d).rev() {
            basis.push(PolyField::monomial(i, d - i, 1.0));
        }
    }
    if degree == 4 {
        // apply the operator to each quartic monomial: each maps to a constant
        let mut row = [0.0f64; 5];
        for (idx, r) in row.iter_mut().enumerate() {
            let m = PolyField::monomial(4 - idx, idx, 1.0);
            *r = plate_operator(c, &m).coeff(0, 0);
        }
        // nullspace of the 1x5 row, built against a pivot entry
        let (pivot, &pv) = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        if pv.abs() < 1e-14 {
            // degenerate operator: all quartics solve the equation
            for idx in 0..5 {
                basis.push(PolyField::monomial(4 - idx, idx, 1.0));
            }
        } else {
            for idx in 0..5 {
                if idx == pivot {
                    continue;
                }
                let mut p = PolyField::monomial(4 - idx, idx, 1.0);
                let corr = PolyField::monomial(4 - pivot, pivot, -row[idx] / pv);
                p = p.add(&corr);
                basis.push(p);
            }
        }
    }
    Ok(basis)
}

/// All four exact boundary datasets of a manufactured plate solution `u`
/// with constant stiffness `c` on the given curve.
#[derive(Debug, Clone)]
pub struct ManufacturedData {
    pub plate_dirichlet: PlateDirichlet,
    pub plate_neumann: PlateNeumann,
    pub elast_dirichlet: ElastDirichlet,
    pub elast_neumann: ElastNeumann,
    /// Displacement oracle used for the elastic Dirichlet trace.
    pub displacement: Vec2Poly,
    /// Stress oracle.
    pub stress: Sym2Poly,
}

/// Evaluates exact traces of all four boundary datasets.
///
/// `c` must be elastic-kind; the compliance of the equivalent elastic medium
/// is its duality image. The PDE residual of `u` is verified symbolically
/// first.
pub fn eval_all_boundary_data(
    u: &PolyField,
    c: &Tensor4,
    curve: &ClosedCurve,
) -> Result<ManufacturedData> {
    if c.kind != TensorKind::Elastic {
        return Err(PlateError::KindMismatch {
            expected: "elastic",
            got: c.kind.name(),
        });
    }
    let residual = plate_operator(c, u);
    let scale = u.max_abs_coeff().max(1.0);
    if !residual.is_zero(1e-10 * scale) {
        return Err(PlateError::PdeResidual(residual.max_abs_coeff()));
    }
    let grad = u.gradient();
    let n = curve.len();
    let mut u_trace = Vec::with_capacity(n);
    let mut un_trace = Vec::with_capacity(n);
    for j in 0..n {
        let x = curve.point(j);
        let nj = curve.normal(j);
        u_trace.push(u.eval(x));
        let g = grad.eval(x);
        un_trace.push(g[0] * nj[0] + g[1] * nj[1]);
    }
    let plate_dirichlet = PlateDirichlet {
        u: u_trace,
        u_n: un_trace,
    };

    let stress = stress_from_airy(u);
    let traction: Vec<[f64; 2]> = (0..n)
        .map(|j| stress.eval(curve.point(j)).mul_vec(curve.normal(j)))
        .collect();
    let elast_neumann = ElastNeumann { traction };

    let s = c.duality();
    let strain = strain_from_stress(&stress, &s)?;
    let base = curve.point(curve.base_index());
    let displacement = displacement_from_strain(&strain, base)?;
    let v: Vec<[f64; 2]> = (0..n).map(|j| displacement.eval(curve.point(j))).collect();
    let elast_dirichlet = ElastDirichlet { v };

    let plate_neumann = transforms::plate_neumann_via_psi(curve, u, c)?;

    Ok(ManufacturedData {
        plate_dirichlet,
        plate_neumann,
        elast_dirichlet,
        elast_neumann,
        displacement,
        stress,
    })
}

/// Random polynomial plate solution of the given degree (coefficients in
/// [-1, 1]); for degree <= 3 any polynomial qualifies, for degree 4 a random
/// combination of the kernel basis is drawn.
pub fn random_plate_solution<R: Rng>(rng: &mut R, degree: usize, c: &Tensor4) -> Result<PolyField> {
    let basis = plate_kernel_basis(c, degree)?;
    let mut u = PolyField::zero();
    for b in &basis {
        u = u.add(&b.scale(rng.gen_range(-1.0..1.0)));
    }
    Ok(u)
}

/// Random strongly convex anisotropic elastic tensor: a convex isotropic
/// core plus a bounded random perturbation, rejected if the margin dips
/// below 0.2.
pub fn random_convex_tensor<R: Rng>(rng: &mut R) -> Tensor4 {
    loop {
        let base = Tensor4::isotropic_plate(1.0, rng.gen_range(-0.3..0.3)).unwrap();
        let t = Tensor4::new(
            TensorKind::Elastic,
            base.a + rng.gen_range(-0.2..0.2),
            base.b + rng.gen_range(-0.2..0.2),
            rng.gen_range(-0.15..0.15),
            rng.gen_range(-0.15..0.15),
            base.e + rng.gen_range(-0.15..0.15),
            base.f + rng.gen_range(-0.2..0.2),
        );
        if t.convexity_margin() > 0.2 {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn x1() -> PolyField {
        PolyField::monomial(1, 0, 1.0)
    }
    fn x2() -> PolyField {
        PolyField::monomial(0, 1, 1.0)
    }

    #[test]
    fn hessian_cubic() {
        // u = x1^3 -> hess = diag(6 x1, 0)
        let u = PolyField::monomial(3, 0, 1.0);
        let h = hessian(&u);
        assert_eq!(h.a11, x1().scale(6.0));
        assert!(h.a12.is_zero(0.0));
        assert!(h.a22.is_zero(0.0));
    }

    #[test]
    fn hessian_bilinear() {
        let u = PolyField::monomial(1, 1, 1.0);
        let h = hessian(&u);
        assert_eq!(h.a12, PolyField::constant(1.0));
        assert!(h.a11.is_zero(0.0) && h.a22.is_zero(0.0));
    }

    #[test]
    fn hessian_x1sq_x2sq() {
        let u = PolyField::monomial(2, 2, 1.0);
        let h = hessian(&u);
        assert_eq!(h.a11, PolyField::monomial(0, 2, 2.0));
        assert_eq!(h.a12, PolyField::monomial(1, 1, 4.0));
        assert_eq!(h.a22, PolyField::monomial(2, 0, 2.0));
    }

    #[test]
    fn airy_half_norm_squared_gives_identity() {
        // u = |x|^2 / 2 -> sigma = I2
        let u = PolyField::monomial(2, 0, 0.5).add(&PolyField::monomial(0, 2, 0.5));
        let s = stress_from_airy(&u);
        assert_eq!(s.a11, PolyField::constant(1.0));
        assert!(s.a12.is_zero(0.0));
        assert_eq!(s.a22, PolyField::constant(1.0));
    }

    #[test]
    fn airy_x1sq() {
        let u = PolyField::monomial(2, 0, 1.0);
        let s = stress_from_airy(&u);
        assert!(s.a11.is_zero(0.0));
        assert_eq!(s.a22, PolyField::constant(2.0));
    }

    #[test]
    fn airy_stress_divergence_free() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let mut u = PolyField::zero();
            for d in 0..=3usize {
                for i in 0..=d {
                    u = u.add(&PolyField::monomial(i, d - i, rng.gen_range(-1.0..1.0)));
                }
            }
            let d = stress_from_airy(&u).div();
            assert!(d.x.is_zero(1e-13));
            assert!(d.y.is_zero(1e-13));
        }
    }

    #[test]
    fn hooke_isotropic_identity_stress() {
        // sigma = I2 -> eps = 1/(2 kappa) I2 per the isotropic Hooke form
        let kappa = 2.0;
        let s = Tensor4::isotropic_compliance(kappa, 2.0).unwrap();
        let sigma = Sym2Poly {
            a11: PolyField::constant(1.0),
            a12: PolyField::zero(),
            a22: PolyField::constant(1.0),
        };
        let eps = strain_from_stress(&sigma, &s).unwrap();
        assert_abs_diff_eq!(eps.a11.coeff(0, 0), 1.0 / (2.0 * kappa), epsilon = 1e-15);
        assert_abs_diff_eq!(eps.a22.coeff(0, 0), 1.0 / (2.0 * kappa), epsilon = 1e-15);
        assert!(eps.a12.is_zero(1e-15));
    }

    #[test]
    fn hooke_trace_free_stress() {
        let (kappa, mu) = (3.0, 1.5);
        let s = Tensor4::isotropic_compliance(kappa, mu).unwrap();
        let sigma = Sym2Poly {
            a11: x1(),
            a12: x2(),
            a22: x1().scale(-1.0),
        };
        let eps = strain_from_stress(&sigma, &s).unwrap();
        // trace-free: eps = sigma / (2 mu')
        assert!(eps.a11.sub(&sigma.a11.scale(1.0 / (2.0 * mu))).is_zero(1e-14));
        assert!(eps.a12.sub(&sigma.a12.scale(1.0 / (2.0 * mu))).is_zero(1e-14));
    }

    #[test]
    fn hooke_rejects_elastic_kind() {
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        assert!(strain_from_stress(&Sym2Poly::zero(), &c).is_err());
    }

    #[test]
    fn displacement_pure_dilation() {
        let eps = Sym2Poly {
            a11: PolyField::constant(1.0),
            a12: PolyField::zero(),
            a22: PolyField::constant(1.0),
        };
        let v = displacement_from_strain(&eps, [0.5, -0.25]).unwrap();
        // v = x - base
        assert_abs_diff_eq!(v.eval([0.5, -0.25])[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.eval([1.5, 0.75])[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.eval([1.5, 0.75])[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn displacement_zero_strain() {
        let v = displacement_from_strain(&Sym2Poly::zero(), [0.0, 0.0]).unwrap();
        assert!(v.x.is_zero(0.0) && v.y.is_zero(0.0));
    }

    #[test]
    fn displacement_recovers_strain() {
        // eps = [[x2, 0], [0, 0]] is compatible
        let eps = Sym2Poly {
            a11: x2(),
            a12: PolyField::zero(),
            a22: PolyField::zero(),
        };
        let v = displacement_from_strain(&eps, [0.0, 0.0]).unwrap();
        let back = v.sym_grad();
        assert!(back.sub(&eps).max_abs_coeff() <= 1e-14);
    }

    #[test]
    fn displacement_rejects_incompatible() {
        // eps = [[x2^2, 0], [0, 0]]: e11,22 = 2 != 0
        let eps = Sym2Poly {
            a11: PolyField::monomial(0, 2, 1.0),
            a12: PolyField::zero(),
            a22: PolyField::zero(),
        };
        assert!(displacement_from_strain(&eps, [0.0, 0.0]).is_err());
    }

    #[test]
    fn displacement_roundtrip_random() {
        let mut rng = StdRng::seed_from_u64(9);
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let s = c.duality();
        for _ in 0..10 {
            let u = random_plate_solution(&mut rng, 3, &c).unwrap();
            let eps = strain_from_stress(&stress_from_airy(&u), &s).unwrap();
            let v = displacement_from_strain(&eps, [0.2, 0.1]).unwrap();
            let back = v.sym_grad();
            assert!(back.sub(&eps).max_abs_coeff() <= 1e-12);
            // gauge: v(base) = 0 and skew grad v(base) = 0
            let vb = v.eval([0.2, 0.1]);
            assert!(vb[0].abs() <= 1e-13 && vb[1].abs() <= 1e-13);
            let skew = v.y.dx1().sub(&v.x.dx2()).eval([0.2, 0.1]);
            assert!(skew.abs() <= 1e-12);
        }
    }

    #[test]
    fn eps_identity_under_duality() {
        // C hess u = R_perp^T eps R_perp when C = R S R, coefficientwise
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..10 {
            let c = random_convex_tensor(&mut rng);
            let s = c.duality();
            let u = random_plate_solution(&mut rng, 3, &c).unwrap();
            let lhs = apply_tensor(&c, &hessian(&u));
            let eps = strain_from_stress(&stress_from_airy(&u), &s).unwrap();
            let rhs = eps.rotated();
            assert!(lhs.sub(&rhs).max_abs_coeff() <= 1e-13);
        }
    }

    #[test]
    fn kernel_basis_cubics() {
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let basis = plate_kernel_basis(&c, 3).unwrap();
        assert_eq!(basis.len(), 10);
        for b in &basis {
            assert!(plate_operator(&c, b).is_zero(1e-14));
        }
    }

    #[test]
    fn kernel_basis_quartics() {
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let basis = plate_kernel_basis(&c, 4).unwrap();
        assert_eq!(basis.len(), 14);
        for b in &basis {
            assert!(plate_operator(&c, b).is_zero(1e-12));
        }
        // the biharmonic constraint excludes |x|^4
        let bad = PolyField::monomial(4, 0, 1.0)
            .add(&PolyField::monomial(2, 2, 2.0))
            .add(&PolyField::monomial(0, 4, 1.0));
        assert!(!plate_operator(&c, &bad).is_zero(1e-6));
        // x1^3 x2 is biharmonic and lies in the kernel
        let good = PolyField::monomial(3, 1, 1.0);
        assert!(plate_operator(&c, &good).is_zero(1e-14));
    }

    #[test]
    fn kernel_basis_degree_cap() {
        let c = Tensor4::isotropic_plate(1.0, 0.0).unwrap();
        assert!(plate_kernel_basis(&c, 5).is_err());
    }

    #[test]
    fn plate_operator_biharmonic() {
        // isotropic C with B = 1: div div (C hess u) = B * biharmonic(u)
        let c = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let u = PolyField::monomial(4, 0, 1.0); // x1^4 -> u_xxxx = 24
        let r = plate_operator(&c, &u);
        assert_abs_diff_eq!(r.coeff(0, 0), 24.0, epsilon = 1e-12);
    }

    #[test]
    fn poly_eval_and_mul() {
        let p = x1().add(&x2().scale(2.0)); // x1 + 2 x2
        let q = p.mul(&p);
        assert_abs_diff_eq!(q.eval([1.0, 2.0]), 25.0, epsilon = 1e-14);
        assert_eq!(q.degree(), 2);
        assert_eq!(p.dx2(), PolyField::constant(2.0));
    }
}
