//! The four boundary-data conversions between 2D elasticity and the
//! Kirchhoff-Love plate, plus the psi-potential route to plate Neumann data.
//!
//! The key structural fact: every second derivative of u needed on the
//! boundary is obtained as a tangential derivative of already-recovered
//! boundary fields, so no normal derivatives of data are ever required.

use crate::boundary_data::{
    ElastDirichlet, ElastNeumann, GaugeReport, PlateDirichlet, PlateNeumann,
};
use crate::curve::ClosedCurve;
use crate::error::{PlateError, Result};
use crate::manufactured::{apply_tensor, hessian, plate_operator, PolyField};
use crate::tensor4::{Tensor4, TensorKind};

/// Default relative tolerance for closure / admissibility checks.
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-6;

fn inf_norm_vec(f: &[[f64; 2]]) -> f64 {
    f.iter()
        .fold(0.0f64, |m, v| m.max(v[0].abs()).max(v[1].abs()))
}

fn inf_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Recovers plate Dirichlet data {u, u_n} from an equilibrated traction:
/// `R_perp^T sigma n = (hess u) t`, integrated once for grad u and once more
/// (via u_t) for u. Output is in canonical affine gauge; the grad-u and u
/// closure residuals are recorded in the report.
pub fn traction_to_plate_dirichlet(
    curve: &ClosedCurve,
    data: &ElastNeumann,
    tol: f64,
) -> Result<(PlateDirichlet, GaugeReport)> {
    let n = curve.len();
    assert_eq!(data.traction.len(), n);
    let scale = inf_norm_vec(&data.traction) * curve.length();
    let force = data.net_force(curve);
    let force_norm = (force[0] * force[0] + force[1] * force[1]).sqrt();
    if force_norm > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(PlateError::Inadmissible {
            check: "net_force",
            residual: force_norm,
            tol: tol * scale,
        });
    }
    // g = R_perp^T sigma n = (grad u)_{,t} per (hess u) t
    let g: Vec<[f64; 2]> = data.traction.iter().map(|w| [-w[1], w[0]]).collect();
    let (grad_u, grad_res) = curve.integrate_from_vec(&g);
    let mut u_n = Vec::with_capacity(n);
    let mut u_t = Vec::with_capacity(n);
    for j in 0..n {
        let nj = curve.normal(j);
        let tj = curve.tangent(j);
        u_n.push(grad_u[j][0] * nj[0] + grad_u[j][1] * nj[1]);
        u_t.push(grad_u[j][0] * tj[0] + grad_u[j][1] * tj[1]);
    }
    let (u, u_res) = curve.integrate_from(&u_t);
    let ut_scale = inf_norm(&u_t) * curve.length();
    if u_res.abs() > tol * ut_scale.max(f64::MIN_POSITIVE) {
        // the u_t closure obstruction is the net torque of the traction
        return Err(PlateError::Inadmissible {
            check: "u_t_closure",
            residual: u_res.abs(),
            tol: tol * ut_scale,
        });
    }
    let (normalized, mut report) = PlateDirichlet { u, u_n }.normalize(curve);
    report.residuals.insert("grad_u_closure_1".into(), grad_res[0]);
    report.residuals.insert("grad_u_closure_2".into(), grad_res[1]);
    report.residuals.insert("u_closure".into(), u_res);
    report.residuals.insert("net_force_norm".into(), force_norm);
    Ok((normalized, report))
}

/// The inverse direction: from {u, u_n}, rebuild grad u on the boundary,
/// differentiate tangentially for (hess u) t, and rotate back to sigma n.
pub fn plate_dirichlet_to_traction(curve: &ClosedCurve, data: &PlateDirichlet) -> ElastNeumann {
    let n = curve.len();
    assert_eq!(data.u.len(), n);
    assert_eq!(data.u_n.len(), n);
    let u_t = curve.d_dt(&data.u);
    let grad_u: Vec<[f64; 2]> = (0..n)
        .map(|j| {
            let nj = curve.normal(j);
            let tj = curve.tangent(j);
            [
                data.u_n[j] * nj[0] + u_t[j] * tj[0],
                data.u_n[j] * nj[1] + u_t[j] * tj[1],
            ]
        })
        .collect();
    let hess_t = curve.d_dt_vec(&grad_u);
    // sigma n = R_perp (hess u) t
    let traction = hess_t.iter().map(|w| [w[1], -w[0]]).collect();
    ElastNeumann { traction }
}

/// Moments from the boundary displacement: `M_n = t.(grad v)t`,
/// `M_t = -n.(grad v)t`, with `(grad v)t` computed as the tangential
/// derivative of v.
pub fn displacement_to_moments(curve: &ClosedCurve, data: &ElastDirichlet) -> PlateNeumann {
    let n = curve.len();
    assert_eq!(data.v.len(), n);
    let v_t = curve.d_dt_vec(&data.v);
    let mut m_n = Vec::with_capacity(n);
    let mut m_t = Vec::with_capacity(n);
    for j in 0..n {
        let nj = curve.normal(j);
        let tj = curve.tangent(j);
        m_n.push(tj[0] * v_t[j][0] + tj[1] * v_t[j][1]);
        m_t.push(-(nj[0] * v_t[j][0] + nj[1] * v_t[j][1]));
    }
    PlateNeumann { m_n, m_t }
}

/// Boundary displacement from the moments: integrates
/// `v_t = -M_t n + M_n t` along the curve. Output is in canonical
/// translation gauge; the closure residual is recorded.
pub fn moments_to_displacement(
    curve: &ClosedCurve,
    data: &PlateNeumann,
    tol: f64,
) -> Result<(ElastDirichlet, GaugeReport)> {
    let n = curve.len();
    assert_eq!(data.m_n.len(), n);
    assert_eq!(data.m_t.len(), n);
    let w: Vec<[f64; 2]> = (0..n)
        .map(|j| {
            let nj = curve.normal(j);
            let tj = curve.tangent(j);
            [
                -data.m_t[j] * nj[0] + data.m_n[j] * tj[0],
                -data.m_t[j] * nj[1] + data.m_n[j] * tj[1],
            ]
        })
        .collect();
    let (v, res) = curve.integrate_from_vec(&w);
    let scale = inf_norm_vec(&w) * curve.length();
    let res_norm = (res[0] * res[0] + res[1] * res[1]).sqrt();
    if res_norm > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(PlateError::Inadmissible {
            check: "vt_closure",
            residual: res_norm,
            tol: tol * scale,
        });
    }
    let (normalized, mut report) = ElastDirichlet { v }.normalize(curve);
    report.residuals.insert("vt_closure_1".into(), res[0]);
    report.residuals.insert("vt_closure_2".into(), res[1]);
    Ok((normalized, report))
}

/// Plate Neumann data of an exact polynomial plate solution via the
/// stream-potential psi: `psi_{,t} = div(C hess u).n` integrated from the
/// base node with psi(base) = 0, then `M_t = psi + (C hess u)n.t` and
/// `M_n = (C hess u)n.n`.
pub fn plate_neumann_via_psi(
    curve: &ClosedCurve,
    u: &PolyField,
    c: &Tensor4,
) -> Result<PlateNeumann> {
    if c.kind != TensorKind::Elastic {
        return Err(PlateError::KindMismatch {
            expected: "elastic",
            got: c.kind.name(),
        });
    }
    let pde = plate_operator(c, u);
    let scale = u.max_abs_coeff().max(1.0);
    if !pde.is_zero(1e-10 * scale) {
        return Err(PlateError::PdeResidual(pde.max_abs_coeff()));
    }
    let m = apply_tensor(c, &hessian(u));
    let d = m.div();
    let n = curve.len();
    let q: Vec<f64> = (0..n)
        .map(|j| {
            let x = curve.point(j);
            let nj = curve.normal(j);
            let dv = d.eval(x);
            dv[0] * nj[0] + dv[1] * nj[1]
        })
        .collect();
    let (psi, q_res) = curve.integrate_from(&q);
    let q_scale = inf_norm(&q) * curve.length();
    if q_res.abs() > DEFAULT_CLOSURE_TOL * q_scale.max(1e-12) {
        return Err(PlateError::Inadmissible {
            check: "psi_closure",
            residual: q_res.abs(),
            tol: DEFAULT_CLOSURE_TOL * q_scale,
        });
    }
    let mut m_n = Vec::with_capacity(n);
    let mut m_t = Vec::with_capacity(n);
    for j in 0..n {
        let x = curve.point(j);
        let nj = curve.normal(j);
        let tj = curve.tangent(j);
        let mn_vec = m.eval(x).mul_vec(nj);
        m_n.push(mn_vec[0] * nj[0] + mn_vec[1] * nj[1]);
        m_t.push(psi[j] + mn_vec[0] * tj[0] + mn_vec[1] * tj[1]);
    }
    Ok(PlateNeumann { m_n, m_t })
}
