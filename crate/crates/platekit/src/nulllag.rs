//! Null-Lagrangian verification: boundary-determined averages of the
//! Hessian, the moment tensor and the Hessian determinant, the area
//! quadrature oracle they are checked against, and the counterexample
//! showing the determinant of the moment tensor is not boundary-determined.

use crate::curve::ClosedCurve;
use crate::error::{PlateError, Result};
use crate::manufactured::{apply_tensor, hessian, PolyField};
use crate::tensor4::{Sym2, Tensor4};
use serde::{Deserialize, Serialize};

/// One boundary-vs-area comparison of an averaged quantity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AverageReport {
    pub quantity: String,
    /// Average (1/|Omega|) of the quantity computed from boundary data only.
    pub boundary_avg: Vec<f64>,
    /// Average from area quadrature of the interior field.
    pub area_avg: Vec<f64>,
    /// Unnormalized boundary integral (the average times |Omega|).
    pub boundary_integral: Vec<f64>,
    pub area_integral: Vec<f64>,
    pub discrepancy: f64,
    pub domain_area: f64,
}

impl AverageReport {
    fn from_pair(
        quantity: &str,
        boundary: Vec<f64>,
        area_vals: Vec<f64>,
        domain_area: f64,
    ) -> AverageReport {
        let discrepancy = boundary
            .iter()
            .zip(&area_vals)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        AverageReport {
            quantity: quantity.into(),
            boundary_integral: boundary.iter().map(|v| v * domain_area).collect(),
            area_integral: area_vals.iter().map(|v| v * domain_area).collect(),
            boundary_avg: boundary,
            area_avg: area_vals,
            discrepancy,
            domain_area,
        }
    }
}

fn sym_outer_avg(curve: &ClosedCurve, field: &[[f64; 2]]) -> Sym2 {
    // (1/|Omega|) closed-integral sym(field x n) ds
    let n = curve.len();
    let mut acc = [0.0f64; 3];
    for j in 0..n {
        let nj = curve.normal(j);
        let w = curve.ds(j);
        acc[0] += w * field[j][0] * nj[0];
        acc[1] += w * 0.5 * (field[j][0] * nj[1] + field[j][1] * nj[0]);
        acc[2] += w * field[j][1] * nj[1];
    }
    let area = curve.signed_area();
    Sym2::new(acc[0] / area, acc[1] / area, acc[2] / area)
}

/// Average Hessian from boundary data only: `int u_,ij = closed-int u_,i n_j ds`.
pub fn avg_hessian_boundary(curve: &ClosedCurve, grad_u: &[[f64; 2]]) -> Sym2 {
    sym_outer_avg(curve, grad_u)
}

/// Average strain from the boundary displacement:
/// `<eps> = (1/|Omega|) closed-int sym(v x n) ds`.
pub fn avg_strain_boundary(curve: &ClosedCurve, v: &[[f64; 2]]) -> Sym2 {
    sym_outer_avg(curve, v)
}

/// Average moment tensor `<C hess u>` from boundary displacement data, via
/// `C hess u = R_perp^T eps R_perp`.
pub fn avg_c_hessian_boundary(curve: &ClosedCurve, v: &[[f64; 2]]) -> Sym2 {
    avg_strain_boundary(curve, v).rotated()
}

/// Average Hessian determinant from boundary data only. The second
/// derivatives on the boundary are reconstructed tangentially from grad u:
/// `int det hess u = closed-int u_,1 ((hess u) t)_2 ds`.
pub fn avg_det_hessian_boundary(curve: &ClosedCurve, grad_u: &[[f64; 2]]) -> f64 {
    let hess_t = curve.d_dt_vec(grad_u);
    let f: Vec<f64> = (0..curve.len())
        .map(|j| grad_u[j][0] * hess_t[j][1])
        .collect();
    curve.integrate(&f) / curve.signed_area()
}

// ---------------------------------------------------------------------------
// area quadrature oracle

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of
/// degree 2n - 1. Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor-product quadrature nodes and weights for the disk of the given
/// radius: Gauss-Legendre in the radius (with the polar weight r folded in)
/// times equispaced angles. Exact for polynomials of total degree
/// min(2 n_r - 2, n_theta - 1).
pub fn disk_quadrature(radius: f64, n_r: usize, n_theta: usize) -> Vec<([f64; 2], f64)> {
    let (gl_nodes, gl_weights) = gauss_legendre(n_r);
    let dtheta = std::f64::consts::TAU / n_theta as f64;
    let mut out = Vec::with_capacity(n_r * n_theta);
    for i in 0..n_r {
        // map [-1,1] -> [0, radius]
        let r = radius * 0.5 * (gl_nodes[i] + 1.0);
        let wr = radius * 0.5 * gl_weights[i] * r;
        for k in 0..n_theta {
            let th = dtheta * k as f64;
            out.push(([r * th.cos(), r * th.sin()], wr * dtheta));
        }
    }
    out
}

/// Tensor-product Gauss quadrature on the rectangle [x0,x1] x [y0,y1].
pub fn rectangle_quadrature(
    x_range: [f64; 2],
    y_range: [f64; 2],
    n: usize,
) -> Vec<([f64; 2], f64)> {
    let (nodes, weights) = gauss_legendre(n);
    let hx = 0.5 * (x_range[1] - x_range[0]);
    let hy = 0.5 * (y_range[1] - y_range[0]);
    let cx = 0.5 * (x_range[0] + x_range[1]);
    let cy = 0.5 * (y_range[0] + y_range[1]);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((
                [cx + hx * nodes[i], cy + hy * nodes[j]],
                hx * hy * weights[i] * weights[j],
            ));
        }
    }
    out
}

/// Integrates a callable over the unit disk with orders sufficient for
/// polynomials of total degree `max_degree`.
pub fn integrate_disk(f: impl Fn([f64; 2]) -> f64, radius: f64, max_degree: usize) -> f64 {
    let n_r = max_degree / 2 + 2;
    let n_theta = (max_degree + 2).max(8);
    disk_quadrature(radius, n_r, n_theta)
        .into_iter()
        .map(|(x, w)| f(x) * w)
        .sum()
}

/// Exact area integral of a polynomial over the disk.
pub fn integrate_poly_disk(p: &PolyField, radius: f64) -> f64 {
    integrate_disk(|x| p.eval(x), radius, p.degree())
}

// ---------------------------------------------------------------------------
// verification drivers

/// Boundary-vs-area reports for the three plate null-Lagrangians of a
/// manufactured solution u with stiffness c on the unit-disk boundary.
///
/// `v` is the boundary displacement of the equivalent elastic problem
/// (needed for the `<C hess u>` boundary route).
pub fn verify_null_lagrangians(
    curve: &ClosedCurve,
    u: &PolyField,
    c: &Tensor4,
    v: &[[f64; 2]],
) -> Result<Vec<AverageReport>> {
    let area = curve.signed_area();
    let grad = u.gradient();
    let grad_nodes: Vec<[f64; 2]> = (0..curve.len())
        .map(|j| grad.eval(curve.point(j)))
        .collect();

    let hess = hessian(u);
    let deg = u.degree().max(2);
    let mut reports = Vec::new();

    let b = avg_hessian_boundary(curve, &grad_nodes);
    let a = [
        integrate_poly_disk(&hess.a11, 1.0) / area,
        integrate_poly_disk(&hess.a12, 1.0) / area,
        integrate_poly_disk(&hess.a22, 1.0) / area,
    ];
    reports.push(AverageReport::from_pair(
        "avg_hessian",
        vec![b.a11, b.a12, b.a22],
        a.to_vec(),
        area,
    ));

    let ch = apply_tensor(c, &hess);
    let b = avg_c_hessian_boundary(curve, v);
    let a = [
        integrate_poly_disk(&ch.a11, 1.0) / area,
        integrate_poly_disk(&ch.a12, 1.0) / area,
        integrate_poly_disk(&ch.a22, 1.0) / area,
    ];
    reports.push(AverageReport::from_pair(
        "avg_moment_tensor",
        vec![b.a11, b.a12, b.a22],
        a.to_vec(),
        area,
    ));

    let b = avg_det_hessian_boundary(curve, &grad_nodes);
    let det = hess.det();
    let a = integrate_poly_disk(&det, 1.0) / area;
    let _ = deg;
    reports.push(AverageReport::from_pair(
        "avg_det_hessian",
        vec![b],
        vec![a],
        area,
    ));
    Ok(reports)
}

/// Result of the equal-boundary-data pair test showing `<det C hess u>` is
/// not boundary-determined while `<det hess u>` is.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// `<det C hess u>` for u1 and for u2 = u1 + (1 - |x|^2)^2.
    pub det_c_u1: f64,
    pub det_c_u2: f64,
    pub separation: f64,
    /// Control: `<det hess u>` for the same pair, which must agree.
    pub det_u1: f64,
    pub det_u2: f64,
    pub control_discrepancy: f64,
    pub domain_area: f64,
}

/// Builds the pair u1 and u2 = u1 + w with the bump w = (1 - |x|^2)^2 that
/// has identically zero Dirichlet data on the unit circle, and compares the
/// area averages of det(C hess u) and det(hess u) for the pair.
pub fn det_c_hessian_counterexample(
    curve: &ClosedCurve,
    c: &Tensor4,
    u1: &PolyField,
) -> Result<CounterexampleReport> {
    let w = bump_quartic();
    // the construction needs w = w_n = 0 on the curve: the unit circle
    for j in 0..curve.len() {
        let x = curve.point(j);
        if w.eval(x).abs() > 1e-10 {
            return Err(PlateError::DegenerateCurve(
                "counterexample bump requires the unit circle as boundary".into(),
            ));
        }
    }
    let u2 = u1.add(&w);
    let area = curve.signed_area();

    let det_c = |u: &PolyField| {
        let ch = apply_tensor(c, &hessian(u));
        integrate_poly_disk(&ch.det(), 1.0) / area
    };
    let det_plain = |u: &PolyField| integrate_poly_disk(&hessian(u).det(), 1.0) / area;

    let det_c_u1 = det_c(u1);
    let det_c_u2 = det_c(&u2);
    let det_u1 = det_plain(u1);
    let det_u2 = det_plain(&u2);
    Ok(CounterexampleReport {
        det_c_u1,
        det_c_u2,
        separation: (det_c_u1 - det_c_u2).abs(),
        det_u1,
        det_u2,
        control_discrepancy: (det_u1 - det_u2).abs(),
        domain_area: area,
    })
}

/// The bump (1 - x1^2 - x2^2)^2.
pub fn bump_quartic() -> PolyField {
    let one_minus = PolyField::constant(1.0)
        .sub(&PolyField::monomial(2, 0, 1.0))
        .sub(&PolyField::monomial(0, 2, 1.0));
    one_minus.mul(&one_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::{self};
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn circle(n: usize) -> ClosedCurve {
        ClosedCurve::circle(1.0, n).unwrap()
    }

    #[test]
    fn quadrature_constant_over_disk() {
        let v = integrate_disk(|_| 1.0, 1.0, 0);
        assert_abs_diff_eq!(v, PI, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_x1_squared() {
        let v = integrate_disk(|x| x[0] * x[0], 1.0, 2);
        assert_abs_diff_eq!(v, PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_odd_vanishes() {
        let v = integrate_disk(|x| x[0], 1.0, 1);
        assert!(v.abs() <= 1e-14);
    }

    #[test]
    fn quadrature_rectangle() {
        // int_0^1 int_0^2 x y^2 = 1/2 * 8/3 = 4/3
        let q = rectangle_quadrature([0.0, 1.0], [0.0, 2.0], 6);
        let v: f64 = q.iter().map(|(x, w)| x[0] * x[1] * x[1] * w).sum();
        assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn gauss_legendre_degree_exactness() {
        let (nodes, weights) = gauss_legendre(5);
        // exact for x^8 on [-1,1]: 2/9
        let v: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| x.powi(8) * w)
            .sum();
        assert_abs_diff_eq!(v, 2.0 / 9.0, epsilon = 1e-13);
    }

    #[test]
    fn avg_hessian_quadratic() {
        // u = |x|^2/2: hess = I2
        let c = circle(256);
        let grad: Vec<[f64; 2]> = c.sample_vec(|x| x);
        let h = avg_hessian_boundary(&c, &grad);
        assert_abs_diff_eq!(h.a11, 1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(h.a12, 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(h.a22, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn avg_hessian_affine_is_zero() {
        let c = circle(128);
        let grad: Vec<[f64; 2]> = vec![[2.0, -1.0]; 128];
        let h = avg_hessian_boundary(&c, &grad);
        assert!(h.norm() <= 1e-12);
    }

    #[test]
    fn avg_strain_dilation() {
        let c = circle(256);
        let v: Vec<[f64; 2]> = c.sample_vec(|x| x);
        let e = avg_strain_boundary(&c, &v);
        assert_abs_diff_eq!(e.a11, 1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(e.a22, 1.0, epsilon = 1e-11);
        let e0 = avg_strain_boundary(&c, &vec![[1.0, 2.0]; 256]);
        assert!(e0.norm() <= 1e-12);
    }

    #[test]
    fn avg_det_hessian_quadratic_and_saddle() {
        let c = circle(256);
        // u = |x|^2/2 -> det hess = 1
        let grad: Vec<[f64; 2]> = c.sample_vec(|x| x);
        assert_abs_diff_eq!(avg_det_hessian_boundary(&c, &grad), 1.0, epsilon = 1e-10);
        // u = x1 x2 -> det hess = -1
        let grad: Vec<[f64; 2]> = c.sample_vec(|x| [x[1], x[0]]);
        assert_abs_diff_eq!(avg_det_hessian_boundary(&c, &grad), -1.0, epsilon = 1e-10);
    }

    #[test]
    fn null_lagrangians_random_cubic() {
        let curve = circle(256);
        let mut rng = StdRng::seed_from_u64(101);
        let tensor = manufactured::random_convex_tensor(&mut rng);
        let u = manufactured::random_plate_solution(&mut rng, 3, &tensor).unwrap();
        let data = manufactured::eval_all_boundary_data(&u, &tensor, &curve).unwrap();
        let v: Vec<[f64; 2]> = data.elast_dirichlet.v.clone();
        let reports = verify_null_lagrangians(&curve, &u, &tensor, &v).unwrap();
        for r in &reports {
            assert!(r.discrepancy <= 1e-7, "{}: {}", r.quantity, r.discrepancy);
        }
    }

    #[test]
    fn averages_gauge_invariant() {
        let c = circle(256);
        // affine shift of u changes grad u by a constant; <hess> unchanged
        let grad: Vec<[f64; 2]> = c.sample_vec(|x| [x[0] * x[0], x[1]]);
        let shifted: Vec<[f64; 2]> = grad.iter().map(|g| [g[0] + 3.0, g[1] - 1.0]).collect();
        let d = avg_hessian_boundary(&c, &grad).sub(&avg_hessian_boundary(&c, &shifted));
        assert!(d.norm() <= 1e-11);
        let det_d = (avg_det_hessian_boundary(&c, &grad)
            - avg_det_hessian_boundary(&c, &shifted))
        .abs();
        assert!(det_d <= 1e-10);
    }

    #[test]
    fn counterexample_isotropic() {
        let curve = circle(256);
        let tensor = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        let u1 = PolyField::monomial(3, 0, 1.0);
        let rep = det_c_hessian_counterexample(&curve, &tensor, &u1).unwrap();
        assert!(rep.control_discrepancy <= 1e-8, "control {}", rep.control_discrepancy);
        assert!(rep.separation > 1e-3, "separation {}", rep.separation);
    }

    #[test]
    fn counterexample_degenerates_for_identity_tensor() {
        // C with C A = A: det C hess u = det hess u, so the separation closes
        let curve = circle(256);
        let ident = Tensor4::isotropic_plate(1.0, 0.0).unwrap();
        let u1 = PolyField::monomial(3, 0, 1.0);
        let rep = det_c_hessian_counterexample(&curve, &ident, &u1).unwrap();
        assert!(rep.separation <= 1e-8, "separation {}", rep.separation);
    }

    #[test]
    fn counterexample_requires_unit_circle() {
        let curve = ClosedCurve::circle(2.0, 64).unwrap();
        let tensor = Tensor4::isotropic_plate(1.0, 0.3).unwrap();
        assert!(det_c_hessian_counterexample(&curve, &tensor, &PolyField::monomial(3, 0, 1.0)).is_err());
    }
}
