//! Browser bindings: thin JSON-string wrappers around the platekit core for
//! the static demo page. Every function returns a JSON string; failures are
//! reported as `{"error": "..."}` rather than thrown.

use platekit::boundary_data::equal_mod_gauge;
use platekit::boundary_data::BoundaryDataset;
use platekit::curve::CurveDescriptor;
use platekit::dichotomy::{self, DichotomyCoeffs};
use platekit::manufactured;
use platekit::nulllag;
use platekit::tensor4::{Tensor4, TensorKind};
use platekit::transforms;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Builds a manufactured plate solution on the given curve, evaluates all
/// four boundary datasets, runs both roundtrips, and returns everything the
/// page needs for plotting:
/// curve nodes, the four datasets, and the roundtrip deviations.
#[wasm_bindgen]
pub fn boundary_data_demo(curve_json: &str, tensor_json: &str, degree: usize, seed: u64) -> String {
    let inner = || -> Result<String, Box<dyn std::error::Error>> {
        let desc: CurveDescriptor = serde_json::from_str(curve_json)?;
        let curve = desc.build()?;
        let tensor: Tensor4 = serde_json::from_str(tensor_json)?;
        let stiffness = match tensor.kind {
            TensorKind::Elastic => tensor,
            TensorKind::Compliance => tensor.duality(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = manufactured::random_plate_solution(&mut rng, degree, &stiffness)?;
        let data = manufactured::eval_all_boundary_data(&u, &stiffness, &curve)?;

        let (pd_rec, _) =
            transforms::traction_to_plate_dirichlet(&curve, &data.elast_neumann, 1e-6)?;
        let (_, r1_dev) = equal_mod_gauge(
            &curve,
            &BoundaryDataset::PlateDirichlet(pd_rec),
            &BoundaryDataset::PlateDirichlet(data.plate_dirichlet.clone()),
            1e-9,
        )?;
        let (v_rec, _) =
            transforms::moments_to_displacement(&curve, &data.plate_neumann, 1e-6)?;
        let (_, r2_dev) = equal_mod_gauge(
            &curve,
            &BoundaryDataset::ElastDirichlet(v_rec),
            &BoundaryDataset::ElastDirichlet(data.elast_dirichlet.clone()),
            1e-9,
        )?;

        Ok(json!({
            "points": curve.points(),
            "s": curve.arclengths(),
            "u": data.plate_dirichlet.u,
            "u_n": data.plate_dirichlet.u_n,
            "m_n": data.plate_neumann.m_n,
            "m_t": data.plate_neumann.m_t,
            "v": data.elast_dirichlet.v,
            "traction": data.elast_neumann.traction,
            "solution_terms": u.terms(),
            "roundtrip_r1_deviation": r1_dev,
            "roundtrip_r2_deviation": r2_dev,
        })
        .to_string())
    };
    inner().unwrap_or_else(err_json)
}

/// Converts a traction given as two arrays (sn1, sn2) on the curve into
/// plate Dirichlet data, reporting the gauge and closure residuals, or the
/// admissibility failure.
#[wasm_bindgen]
pub fn traction_to_plate_demo(curve_json: &str, traction_json: &str) -> String {
    let inner = || -> Result<String, Box<dyn std::error::Error>> {
        let desc: CurveDescriptor = serde_json::from_str(curve_json)?;
        let curve = desc.build()?;
        let traction: Vec<[f64; 2]> = serde_json::from_str(traction_json)?;
        let data = platekit::boundary_data::ElastNeumann { traction };
        match transforms::traction_to_plate_dirichlet(&curve, &data, 1e-6) {
            Ok((pd, gauge)) => Ok(json!({
                "s": curve.arclengths(),
                "u": pd.u,
                "u_n": pd.u_n,
                "gauge": gauge,
            })
            .to_string()),
            Err(e) => Ok(err_json(e)),
        }
    };
    inner().unwrap_or_else(err_json)
}

/// Classifies a list of quartic coefficient samples `[[a0..a4], ...]`
/// against the dichotomy condition.
#[wasm_bindgen]
pub fn dichotomy_demo(coeffs_json: &str, tol: f64) -> String {
    let inner = || -> Result<String, Box<dyn std::error::Error>> {
        let raw: Vec<[f64; 5]> = serde_json::from_str(coeffs_json)?;
        let coeffs: Vec<DichotomyCoeffs> = raw
            .iter()
            .map(|a| DichotomyCoeffs::new(a[0], a[1], a[2], a[3], a[4]))
            .collect();
        let points: Vec<[f64; 2]> = (0..coeffs.len()).map(|i| [i as f64, 0.0]).collect();
        let report = dichotomy::classify_coeff_field(&points, &coeffs, tol)?;
        Ok(serde_json::to_string(&report)?)
    };
    inner().unwrap_or_else(err_json)
}

/// Runs the null-Lagrangian boundary-vs-area comparison and the determinant
/// counterexample on the unit circle for the given tensor.
#[wasm_bindgen]
pub fn nulllag_demo(tensor_json: &str, degree: usize, seed: u64) -> String {
    let inner = || -> Result<String, Box<dyn std::error::Error>> {
        let tensor: Tensor4 = serde_json::from_str(tensor_json)?;
        let stiffness = match tensor.kind {
            TensorKind::Elastic => tensor,
            TensorKind::Compliance => tensor.duality(),
        };
        let curve = platekit::curve::ClosedCurve::circle(1.0, 256)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = manufactured::random_plate_solution(&mut rng, degree, &stiffness)?;
        let data = manufactured::eval_all_boundary_data(&u, &stiffness, &curve)?;
        let reports =
            nulllag::verify_null_lagrangians(&curve, &u, &stiffness, &data.elast_dirichlet.v)?;
        let counter = nulllag::det_c_hessian_counterexample(&curve, &stiffness, &u)?;
        Ok(json!({ "averages": reports, "counterexample": counter }).to_string())
    };
    inner().unwrap_or_else(err_json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_data_demo_returns_arrays() {
        let out = boundary_data_demo(
            r#"{"type":"circle","radius":1.0,"N":64}"#,
            r#"{"isotropic":{"B":1.0,"nu":0.3}}"#,
            3,
            1,
        );
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_null(), "{out}");
        assert_eq!(v["u"].as_array().unwrap().len(), 64);
        assert!(v["roundtrip_r1_deviation"].as_f64().unwrap() <= 1e-9);
        assert!(v["roundtrip_r2_deviation"].as_f64().unwrap() <= 1e-9);
    }

    #[test]
    fn traction_demo_reports_inadmissible() {
        let traction: Vec<[f64; 2]> = vec![[1.0, 0.0]; 64];
        let out = traction_to_plate_demo(
            r#"{"type":"circle","radius":1.0,"N":64}"#,
            &serde_json::to_string(&traction).unwrap(),
        );
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].as_str().unwrap().contains("inadmissible"));
    }

    #[test]
    fn dichotomy_demo_classifies() {
        let out = dichotomy_demo("[[1,0,2,0,1],[1,0,2,0,1]]", 1e-9);
        assert!(out.contains("zero-everywhere"), "{out}");
        let out = dichotomy_demo("[[1,0,5,0,4],[1,0,2,0,1]]", 1e-9);
        assert!(out.contains("violated"), "{out}");
    }

    #[test]
    fn nulllag_demo_runs() {
        let out = nulllag_demo(r#"{"isotropic":{"B":1.0,"nu":0.3}}"#, 3, 2);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_null(), "{out}");
        assert!(v["counterexample"]["separation"].as_f64().unwrap() > 1e-3);
    }
}
