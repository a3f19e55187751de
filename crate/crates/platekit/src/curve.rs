//! Discrete calculus on a smooth closed positively-oriented boundary curve.
//!
//! Nodes are equispaced in a periodic parameter p in [0, 2pi). Tangential
//! derivatives use trigonometric (spectral) differentiation in p followed by
//! the chain rule with the parametrization speed |x'(p)|, so results are
//! machine-accurate on trigonometric-polynomial data. Quadrature is the
//! trapezoidal rule in p, spectrally accurate for smooth integrands.

use crate::error::{PlateError, Result};
use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Minimum node count accepted by the constructors.
pub const MIN_NODES: usize = 16;

/// A discretized smooth closed curve, counterclockwise, with analytic
/// geometry at each node.
#[derive(Debug, Clone)]
pub struct ClosedCurve {
    points: Vec<[f64; 2]>,
    tangent: Vec<[f64; 2]>,
    normal: Vec<[f64; 2]>,
    /// |x'(p)| at each node.
    speed: Vec<f64>,
    base_index: usize,
    descriptor: CurveDescriptor,
}

/// Serializable description of a curve, enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CurveShape {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    /// Star-shaped curve r(p) = r0 (1 + sum_k cos_k cos(kp) + sin_k sin(kp)).
    Custom {
        r0: f64,
        #[serde(default)]
        cos_coeffs: Vec<f64>,
        #[serde(default)]
        sin_coeffs: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDescriptor {
    #[serde(flatten)]
    pub shape: CurveShape,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub base_index: usize,
}

impl CurveDescriptor {
    pub fn build(&self) -> Result<ClosedCurve> {
        let curve = match self.shape {
            CurveShape::Circle { radius } => ClosedCurve::circle(radius, self.n)?,
            CurveShape::Ellipse { a, b } => ClosedCurve::ellipse(a, b, self.n)?,
            CurveShape::Custom {
                r0,
                ref cos_coeffs,
                ref sin_coeffs,
            } => ClosedCurve::smooth(r0, cos_coeffs, sin_coeffs, self.n)?,
        };
        curve.with_base_index(self.base_index)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_NODES || n % 2 != 0 {
        return Err(PlateError::DegenerateCurve(format!(
            "node count {n} must be even and at least {MIN_NODES}"
        )));
    }
    Ok(())
}

impl ClosedCurve {
    /// Circle of the given radius centered at the origin.
    pub fn circle(radius: f64, n: usize) -> Result<ClosedCurve> {
        if !(radius > 0.0) {
            return Err(PlateError::DegenerateCurve(format!("radius {radius} <= 0")));
        }
        ClosedCurve::smooth(radius, &[], &[], n)
    }

    /// Axis-aligned ellipse with semi-axes `a`, `b` centered at the origin.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<ClosedCurve> {
        check_n(n)?;
        if !(a > 0.0) || !(b > 0.0) {
            return Err(PlateError::DegenerateCurve(format!("semi-axes {a}, {b}")));
        }
        let mut points = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        let mut speed = Vec::with_capacity(n);
        for j in 0..n {
            let p = TAU * j as f64 / n as f64;
            let (s, c) = p.sin_cos();
            points.push([a * c, b * s]);
            let v = [-a * s, b * c];
            let sp = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let t = [v[0] / sp, v[1] / sp];
            tangent.push(t);
            normal.push([t[1], -t[0]]);
            speed.push(sp);
        }
        let curve = ClosedCurve {
            points,
            tangent,
            normal,
            speed,
            base_index: 0,
            descriptor: CurveDescriptor {
                shape: CurveShape::Ellipse { a, b },
                n,
                base_index: 0,
            },
        };
        curve.validate_orientation()?;
        Ok(curve)
    }

    /// Star-shaped curve with radius r(p) = r0 (1 + sum_k ck cos kp + sk sin kp).
    pub fn smooth(r0: f64, cos_coeffs: &[f64], sin_coeffs: &[f64], n: usize) -> Result<ClosedCurve> {
        check_n(n)?;
        if !(r0 > 0.0) {
            return Err(PlateError::DegenerateCurve(format!("r0 = {r0} <= 0")));
        }
        let mut points = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        let mut speed = Vec::with_capacity(n);
        for j in 0..n {
            let p = TAU * j as f64 / n as f64;
            let (sp_, cp_) = p.sin_cos();
            let mut r = 1.0;
            let mut dr = 0.0;
            for (k, &ck) in cos_coeffs.iter().enumerate() {
                let kk = (k + 1) as f64;
                r += ck * (kk * p).cos();
                dr -= ck * kk * (kk * p).sin();
            }
            for (k, &sk) in sin_coeffs.iter().enumerate() {
                let kk = (k + 1) as f64;
                r += sk * (kk * p).sin();
                dr += sk * kk * (kk * p).cos();
            }
            r *= r0;
            dr *= r0;
            if r <= 0.0 {
                return Err(PlateError::DegenerateCurve(format!(
                    "radius r({p}) = {r} is not positive"
                )));
            }
            points.push([r * cp_, r * sp_]);
            // x' = dr * u + r * u_perp, u = (cos, sin), u_perp = (-sin, cos)
            let v = [dr * cp_ - r * sp_, dr * sp_ + r * cp_];
            let sv = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let t = [v[0] / sv, v[1] / sv];
            tangent.push(t);
            normal.push([t[1], -t[0]]);
            speed.push(sv);
        }
        let curve = ClosedCurve {
            points,
            tangent,
            normal,
            speed,
            base_index: 0,
            descriptor: CurveDescriptor {
                shape: CurveShape::Custom {
                    r0,
                    cos_coeffs: cos_coeffs.to_vec(),
                    sin_coeffs: sin_coeffs.to_vec(),
                },
                n,
                base_index: 0,
            },
        };
        curve.validate_orientation()?;
        Ok(curve)
    }

    fn validate_orientation(&self) -> Result<()> {
        if self.signed_area() <= 0.0 {
            return Err(PlateError::ClockwiseOrientation);
        }
        Ok(())
    }

    pub fn with_base_index(mut self, k0: usize) -> Result<ClosedCurve> {
        if k0 >= self.len() {
            return Err(PlateError::DegenerateCurve(format!(
                "base index {k0} out of range for {} nodes",
                self.len()
            )));
        }
        self.base_index = k0;
        self.descriptor.base_index = k0;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn descriptor(&self) -> &CurveDescriptor {
        &self.descriptor
    }

    pub fn point(&self, j: usize) -> [f64; 2] {
        self.points[j]
    }

    pub fn tangent(&self, j: usize) -> [f64; 2] {
        self.tangent[j]
    }

    pub fn normal(&self, j: usize) -> [f64; 2] {
        self.normal[j]
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Arclength weight of node j (speed times the parameter step).
    pub fn ds(&self, j: usize) -> f64 {
        self.speed[j] * TAU / self.len() as f64
    }

    /// Arclength positions s_j measured from node 0 (trapezoidal, exact for
    /// our analytic speeds up to spectral accuracy).
    pub fn arclengths(&self) -> Vec<f64> {
        let (anti, _) = antiderivative_p(&self.speed);
        let dp = TAU / self.len() as f64;
        let mean: f64 = self.speed.iter().sum::<f64>() / self.len() as f64;
        (0..self.len())
            .map(|j| anti[j] - anti[0] + mean * dp * j as f64)
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.integrate(&vec![1.0; self.len()])
    }

    pub fn signed_area(&self) -> f64 {
        // 1/2 closed-integral (x1 dx2 - x2 dx1)
        let dp = TAU / self.len() as f64;
        let mut acc = 0.0;
        for j in 0..self.len() {
            let x = self.points[j];
            let v = [
                self.tangent[j][0] * self.speed[j],
                self.tangent[j][1] * self.speed[j],
            ];
            acc += x[0] * v[1] - x[1] * v[0];
        }
        0.5 * acc * dp
    }

    /// Samples a scalar function of position at the nodes.
    pub fn sample(&self, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
        self.points.iter().map(|&x| f(x)).collect()
    }

    /// Samples a vector function of position at the nodes.
    pub fn sample_vec(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Vec<[f64; 2]> {
        self.points.iter().map(|&x| f(x)).collect()
    }

    /// Closed path integral of f with respect to arclength.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len());
        let dp = TAU / self.len() as f64;
        f.iter()
            .zip(&self.speed)
            .map(|(fi, si)| fi * si)
            .sum::<f64>()
            * dp
    }

    /// Closed path integral of a vector field, componentwise.
    pub fn integrate_vec(&self, f: &[[f64; 2]]) -> [f64; 2] {
        assert_eq!(f.len(), self.len());
        let dp = TAU / self.len() as f64;
        let mut acc = [0.0, 0.0];
        for (fi, si) in f.iter().zip(&self.speed) {
            acc[0] += fi[0] * si;
            acc[1] += fi[1] * si;
        }
        [acc[0] * dp, acc[1] * dp]
    }

    /// Arclength-weighted mean of f over the curve.
    pub fn mean(&self, f: &[f64]) -> f64 {
        self.integrate(f) / self.length()
    }

    /// Tangential (arclength) derivative of a smooth periodic scalar field.
    pub fn d_dt(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.len());
        let df = derivative_p(f);
        df.iter().zip(&self.speed).map(|(d, s)| d / s).collect()
    }

    /// Tangential derivative of a vector field, componentwise.
    pub fn d_dt_vec(&self, f: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let fx: Vec<f64> = f.iter().map(|v| v[0]).collect();
        let fy: Vec<f64> = f.iter().map(|v| v[1]).collect();
        let dx = self.d_dt(&fx);
        let dy = self.d_dt(&fy);
        dx.into_iter().zip(dy).map(|(a, b)| [a, b]).collect()
    }

    /// Second-order central-difference fallback for non-smooth data.
    pub fn d_dt_central(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.len());
        let n = self.len();
        let dp = TAU / n as f64;
        (0..n)
            .map(|j| {
                let fp = f[(j + 1) % n];
                let fm = f[(j + n - 1) % n];
                (fp - fm) / (2.0 * dp) / self.speed[j]
            })
            .collect()
    }

    /// Arclength antiderivative F with F(base) = 0 at the curve's base node,
    /// plus the closure residual (the closed integral of f ds, which must
    /// vanish for f to be the tangential derivative of a periodic field).
    pub fn integrate_from(&self, f: &[f64]) -> (Vec<f64>, f64) {
        self.integrate_from_index(f, self.base_index)
    }

    pub fn integrate_from_index(&self, f: &[f64], k0: usize) -> (Vec<f64>, f64) {
        assert_eq!(f.len(), self.len());
        let n = self.len();
        let dp = TAU / n as f64;
        let h: Vec<f64> = f.iter().zip(&self.speed).map(|(fi, si)| fi * si).collect();
        let (g, mean) = antiderivative_p(&h);
        let vals: Vec<f64> = (0..n).map(|j| g[j] + mean * dp * j as f64).collect();
        let off = vals[k0];
        let residual = mean * TAU;
        (vals.into_iter().map(|v| v - off).collect(), residual)
    }

    /// Vector version of [`ClosedCurve::integrate_from`].
    pub fn integrate_from_vec(&self, f: &[[f64; 2]]) -> (Vec<[f64; 2]>, [f64; 2]) {
        let fx: Vec<f64> = f.iter().map(|v| v[0]).collect();
        let fy: Vec<f64> = f.iter().map(|v| v[1]).collect();
        let (gx, rx) = self.integrate_from(&fx);
        let (gy, ry) = self.integrate_from(&fy);
        (
            gx.into_iter().zip(gy).map(|(a, b)| [a, b]).collect(),
            [rx, ry],
        )
    }
}

/// Spectral derivative with respect to the periodic parameter p.
fn derivative_p(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut buf: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = wavenumber(k, n);
        // the Nyquist mode has no well-defined derivative; drop it
        let factor = if k == n / 2 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(0.0, kk)
        };
        *c *= factor / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Antiderivative in p of the mean-zero part, plus the mean itself.
/// The full antiderivative is `G(p) + mean * p`.
fn antiderivative_p(f: &[f64]) -> (Vec<f64>, f64) {
    let n = f.len();
    let mut buf: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let mean = buf[0].re / n as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = wavenumber(k, n);
        if k == 0 || k == n / 2 {
            *c = Complex::new(0.0, 0.0);
        } else {
            *c = *c / Complex::new(0.0, kk) / n as f64;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    (buf.into_iter().map(|c| c.re).collect(), mean)
}

fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Angle of node j on an n-node curve (the parameter value).
pub fn node_angle(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}
