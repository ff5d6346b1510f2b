//! Curvature data of explicit metrics: round `S⁴`, Fubini–Study `ℂP²`,
//! products of round 2-spheres, and the cohomogeneity-one Grove–Ziller
//! metrics on the disk bundle `ν(ℂP¹)` together with their glued Cheeger
//! metrics on `ℂP²#ℂP²`.
//!
//! Along a horizontal geodesic the Grove–Ziller curvature operator is block
//! diagonal in the frame two-vectors `(f₂₃, f₁₄), (f₃₁, f₂₄), (f₁₂, f₃₄)`,
//! where `f₁` is tangent to the circle fibres and `f₄ = ∂_r`. With
//! `fᵢ = eᵢ` these are the `K` entries `(5,4), (−2,−3), (0,1)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::exterior::{CurvatureOperator, ExteriorError};
use crate::smallmat::RealMatrix;
use crate::thorpe::shifted_min_eigenvalue;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no admissible profile: {0}")]
    Infeasible(String),
    #[error("radius {r} outside [0, {max}]")]
    OutOfRange { r: f64, max: f64 },
    #[error("profile violates {0}")]
    Profile(String),
}

/// Curvature quantities at one point of a model metric.
#[derive(Clone, Debug)]
pub struct MetricPointData {
    pub label: String,
    pub r: CurvatureOperator,
    pub ric: RealMatrix,
    pub scal: f64,
    /// The feasible shift when it is unique.
    pub tau: Option<f64>,
}

impl MetricPointData {
    pub fn from_operator(label: impl Into<String>, r: CurvatureOperator, tau: Option<f64>) -> Self {
        let ric = r.ricci();
        let scal = r.scal();
        Self { label: label.into(), r, ric, scal, tau }
    }

    /// `|tr Ric − scal|`.
    pub fn trace_defect(&self) -> f64 {
        (self.ric.trace() - self.scal).abs()
    }

    /// `½scal·g − Ric`.
    pub fn half_scal_minus_ric(&self) -> RealMatrix {
        &RealMatrix::identity(4).scale(0.5 * self.scal) - &self.ric
    }
}

/// Fubini–Study metric with sectional curvature in `[1, 4]`, complex orientation.
pub fn fubini_study() -> MetricPointData {
    let sdasd = RealMatrix::from_diag(&[0.0, 0.0, 6.0, 2.0, 2.0, 2.0]);
    let r = CurvatureOperator::from_sdasd(&sdasd).expect("Fubini-Study operator is Bianchi");
    MetricPointData::from_operator("fubini-study", r, None)
}

/// Fubini–Study with the opposite orientation.
pub fn fubini_study_reversed() -> MetricPointData {
    let fs = fubini_study();
    MetricPointData::from_operator("fubini-study-reversed", fs.r.reversed(), None)
}

/// Round sphere of the given radius.
pub fn round_sphere(radius: f64) -> Result<MetricPointData, FamilyError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(FamilyError::Parameter(format!("radius must be positive, got {radius}")));
    }
    let r = CurvatureOperator::new(RealMatrix::identity(6).scale(1.0 / (radius * radius)))?;
    Ok(MetricPointData::from_operator(format!("round-sphere({radius})"), r, None))
}

/// `S²(a) × S²(b)` with factors spanned by `e₁, e₂` and `e₃, e₄`.
pub fn product_spheres(a: f64, b: f64) -> Result<MetricPointData, FamilyError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(FamilyError::Parameter(format!("radii must be positive, got {a}, {b}")));
    }
    let r = CurvatureOperator::new(RealMatrix::from_diag(&[1.0 / (a * a), 1.0 / (b * b), 0.0, 0.0, 0.0, 0.0]))?;
    Ok(MetricPointData::from_operator(format!("product-spheres({a},{b})"), r, Some(0.0)))
}

// ---------------------------------------------------------------------------
// Quadrature

const GL_POINTS: usize = 32;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
            w[n - 1 - i] = w[i];
        }
        (x, w)
    })
}

/// `∫ₐᵇ f` by composite Gauss–Legendre over `panels` equal pieces.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        total += 0.5 * h * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + 0.5 * h * xi)).sum::<f64>();
    }
    total
}

// ---------------------------------------------------------------------------
// Grove–Ziller profiles

/// Values of a profile `φ` at one radius. `neg_ratio = −φ″/φ`, continued to
/// `r = 0` by its limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileValues {
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
    pub neg_ratio: f64,
}

type ProfileFn = Arc<dyn Fn(f64) -> ProfileValues + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// `φ′ = p(φ/b)` with `p(u) = ½(1−u²)^{3/4} e^{−γu²}`.
    Concave { gamma: f64 },
    /// `φ′(r) = ½ψ(r/r₀)` with a smooth step `ψ`.
    Mollifier,
    Custom(ProfileFn),
}

/// A warping profile on `[0, r_max]` with plateau value `b` from `r₀` on.
#[derive(Clone)]
pub struct GzProfile {
    b: f64,
    r0: f64,
    rmax: f64,
    shape: Shape,
}

impl fmt::Debug for GzProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match &self.shape {
            Shape::Concave { gamma } => format!("Concave {{ gamma: {gamma} }}"),
            Shape::Mollifier => "Mollifier".to_string(),
            Shape::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("GzProfile")
            .field("b", &self.b)
            .field("r0", &self.r0)
            .field("rmax", &self.rmax)
            .field("shape", &shape)
            .finish()
    }
}

/// Integrand of `r(t)` for the concave shape after the substitution `u = 1 − t⁴`.
fn concave_integrand(gamma: f64, s: f64) -> f64 {
    let s4 = s.powi(4);
    8.0 * (gamma * (1.0 - s4).powi(2)).exp() * (2.0 - s4).powf(-0.75)
}

/// `r₀ / b` for the concave shape.
pub fn concave_plateau_ratio(gamma: f64) -> f64 {
    integrate(|s| concave_integrand(gamma, s), 0.0, 1.0, 2)
}

/// Smallest `γ` for which the concave shape satisfies the curvature
/// condition `(4 − 3u²)(3/(2(1−u²)) + 2γ) ≥ 9` on `[0, 1)`.
pub fn concave_gamma_threshold() -> f64 {
    // Maximize 9/(4 − 3s) − 3/(2(1 − s)) over s = u² by golden section.
    let f = |s: f64| 9.0 / (4.0 - 3.0 * s) - 1.5 / (1.0 - s);
    let (mut a, mut b) = (0.0, 0.9);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-14 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * f(0.5 * (a + b))
}

fn smooth_step_parts(x: f64) -> (f64, f64) {
    // ψ(x) = A/(A+B) with A = h(0.9 − x), B = h(x − 0.3), h(t) = e^{−1/t}.
    let h = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let dh = |t: f64| if t > 0.0 { (-1.0 / t).exp() / (t * t) } else { 0.0 };
    let a = h(0.9 - x);
    let b = h(x - 0.3);
    let da = -dh(0.9 - x);
    let db = dh(x - 0.3);
    let s = a + b;
    (a / s, (da * b - a * db) / (s * s))
}

impl GzProfile {
    /// Concave profile with plateau `b` reached exactly at `r0`. The shape
    /// parameter is solved from `r0 = b·I(γ)`; needs `r0 ≥ b·I(0)`.
    pub fn concave(b: f64, r0: f64, rmax: f64) -> Result<Self, FamilyError> {
        check_params(b, r0, rmax)?;
        let target = r0 / b;
        let min_ratio = concave_plateau_ratio(0.0);
        if target < min_ratio {
            return Err(FamilyError::Infeasible(format!(
                "r0/b = {target:.6} is below the shortest concave profile ratio {min_ratio:.6}"
            )));
        }
        let mut hi = 1.0;
        while concave_plateau_ratio(hi) < target {
            hi *= 2.0;
            if hi > 600.0 {
                return Err(FamilyError::Parameter(format!("r0/b = {target} is too large")));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-15 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if concave_plateau_ratio(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self { b, r0, rmax, shape: Shape::Concave { gamma: 0.5 * (lo + hi) } })
    }

    /// Profile exactly linear (`φ = r/2`) on `[0, 0.3r0]` and constant from
    /// `0.9r0` on; its plateau value `b = φ(r0)` is an output.
    pub fn mollifier(r0: f64, rmax: f64) -> Result<Self, FamilyError> {
        check_params(1.0, r0, rmax)?;
        let mut p = Self { b: 1.0, r0, rmax, shape: Shape::Mollifier };
        p.b = p.mollifier_phi(r0);
        Ok(p)
    }

    /// User-supplied profile, validated at `samples` points.
    pub fn custom(b: f64, r0: f64, rmax: f64, f: ProfileFn, samples: usize) -> Result<Self, FamilyError> {
        check_params(b, r0, rmax)?;
        let p = Self { b, r0, rmax, shape: Shape::Custom(f) };
        p.check_invariants(samples)?;
        Ok(p)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn rmax(&self) -> f64 {
        self.rmax
    }

    /// Shape parameter of the concave profile.
    pub fn gamma(&self) -> Option<f64> {
        match self.shape {
            Shape::Concave { gamma } => Some(gamma),
            _ => None,
        }
    }

    fn mollifier_phi(&self, r: f64) -> f64 {
        let lin = 0.3 * self.r0;
        if r <= lin {
            return 0.5 * r;
        }
        let end = r.min(0.9 * self.r0);
        let bridge = integrate(|s| 0.5 * smooth_step_parts(s / self.r0).0, lin, end, 16);
        0.5 * lin + bridge
    }

    /// Parameter `t ∈ [0, 1]` with `r = b∫ₜ¹ g`, for the concave shape.
    fn concave_t(&self, gamma: f64, r: f64) -> f64 {
        if r >= self.r0 {
            return 0.0;
        }
        if r <= 0.0 {
            return 1.0;
        }
        let f = |t: f64| self.b * integrate(|s| concave_integrand(gamma, s), t, 1.0, 1) - r;
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut t = 1.0 - r / self.r0;
        for _ in 0..200 {
            let v = f(t);
            if v > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let step = v / (self.b * concave_integrand(gamma, t));
            let mut next = t + step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 || hi - lo <= 1e-16 {
                t = next;
                break;
            }
            t = next;
        }
        t
    }

    /// `φ, φ′, φ″, −φ″/φ` at radius `r ∈ [0, r_max]`.
    pub fn eval(&self, r: f64) -> Result<ProfileValues, FamilyError> {
        if !(0.0..=self.rmax).contains(&r) {
            return Err(FamilyError::OutOfRange { r, max: self.rmax });
        }
        Ok(match &self.shape {
            Shape::Concave { gamma } => {
                let g = *gamma;
                let t = self.concave_t(g, r);
                let t4 = t.powi(4);
                let u = 1.0 - t4;
                let w = 2.0 - t4;
                let decay = (-g * u * u).exp();
                let p = 0.5 * t.powi(3) * w.powf(0.75) * decay;
                let neg_ratio =
                    0.25 * decay * decay * (1.5 * t * t * w.sqrt() + 2.0 * g * t.powi(6) * w.powf(1.5)) / (self.b * self.b);
                let phi = self.b * u;
                ProfileValues { phi, dphi: p, ddphi: -phi * neg_ratio, neg_ratio }
            }
            Shape::Mollifier => {
                let x = r / self.r0;
                if x <= 0.3 {
                    ProfileValues { phi: 0.5 * r, dphi: 0.5, ddphi: 0.0, neg_ratio: 0.0 }
                } else if x >= 0.9 {
                    ProfileValues { phi: self.b, dphi: 0.0, ddphi: 0.0, neg_ratio: 0.0 }
                } else {
                    let (psi, dpsi) = smooth_step_parts(x);
                    let phi = self.mollifier_phi(r);
                    let ddphi = 0.5 * dpsi / self.r0;
                    ProfileValues { phi, dphi: 0.5 * psi, ddphi, neg_ratio: -ddphi / phi }
                }
            }
            Shape::Custom(f) => f(r),
        })
    }

    /// Checks `φ(0) = 0`, `φ′(0) = ½`, `φ′ ≥ 0`, `φ″ ≤ 0` and `φ = b` past `r₀`
    /// at `samples` evenly spaced radii.
    pub fn check_invariants(&self, samples: usize) -> Result<(), FamilyError> {
        let at0 = self.eval(0.0)?;
        if at0.phi.abs() > 1e-12 {
            return Err(FamilyError::Profile(format!("phi(0) = 0 (got {:.3e})", at0.phi)));
        }
        if (at0.dphi - 0.5).abs() > 1e-12 {
            return Err(FamilyError::Profile(format!("phi'(0) = 1/2 (got {:.15})", at0.dphi)));
        }
        let n = samples.max(2);
        for k in 0..n {
            let r = self.rmax * k as f64 / (n - 1) as f64;
            let v = self.eval(r)?;
            if v.dphi < -1e-12 {
                return Err(FamilyError::Profile(format!("phi' >= 0 at r = {r} (got {:.3e})", v.dphi)));
            }
            if v.ddphi > 1e-12 {
                return Err(FamilyError::Profile(format!("phi'' <= 0 at r = {r} (got {:.3e})", v.ddphi)));
            }
            if r >= self.r0 && (v.phi - self.b).abs() > 1e-12 {
                return Err(FamilyError::Profile(format!("phi = b on the plateau at r = {r} (got {})", v.phi)));
            }
        }
        Ok(())
    }
}

fn check_params(b: f64, r0: f64, rmax: f64) -> Result<(), FamilyError> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(FamilyError::Parameter(format!("b must be positive, got {b}")));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(FamilyError::Parameter(format!("r0 must be positive, got {r0}")));
    }
    if !(rmax >= r0 && rmax.is_finite()) {
        return Err(FamilyError::Parameter(format!("rmax = {rmax} must be at least r0 = {r0}")));
    }
    Ok(())
}

/// The default profile: concave with plateau `b` from `r0`.
pub fn gz_profile(b: f64, r0: f64, rmax: f64) -> Result<GzProfile, FamilyError> {
    GzProfile::concave(b, r0, rmax)
}

/// Curvature operator of the Grove–Ziller metric from profile values.
pub fn gz_operator(b: f64, v: &ProfileValues) -> Result<CurvatureOperator, FamilyError> {
    let b2 = b * b;
    let b4 = b2 * b2;
    let phi2 = v.phi * v.phi;
    let mut m = RealMatrix::zeros(6, 6);
    // (f₂₃, f₁₄) = (K5, K4)
    m[(5, 5)] = (4.0 * b2 - 3.0 * phi2) / (4.0 * b4);
    m[(4, 4)] = v.neg_ratio;
    m[(4, 5)] = -v.dphi / b2;
    m[(5, 4)] = m[(4, 5)];
    // (f₃₁, f₂₄) = (−K2, −K3) and (f₁₂, f₃₄) = (K0, K1)
    for (i, j) in [(2, 3), (0, 1)] {
        m[(i, i)] = phi2 / (4.0 * b4);
        m[(i, j)] = v.dphi / (2.0 * b2);
        m[(j, i)] = m[(i, j)];
    }
    Ok(CurvatureOperator::new(m)?)
}

/// The closed-form Ricci diagonal and scalar curvature of the Grove–Ziller metric.
pub fn gz_ricci_formula(b: f64, v: &ProfileValues) -> ([f64; 4], f64) {
    let b2 = b * b;
    let b4 = b2 * b2;
    let phi2 = v.phi * v.phi;
    let side = 1.0 / b2 - phi2 / (2.0 * b4);
    let ric = [phi2 / (2.0 * b4) + v.neg_ratio, side, side, v.neg_ratio];
    let scal = 2.0 / b2 - phi2 / (2.0 * b4) + 2.0 * v.neg_ratio;
    (ric, scal)
}

/// Curvature data of the Grove–Ziller metric at radius `r`.
pub fn gz_curvature_at(p: &GzProfile, r: f64) -> Result<MetricPointData, FamilyError> {
    let v = p.eval(r)?;
    let op = gz_operator(p.b, &v)?;
    let tau = 0.0 - v.dphi / (2.0 * p.b * p.b);
    Ok(MetricPointData::from_operator(format!("grove-ziller(r={r})"), op, Some(tau)))
}

/// Result of sweeping `R + τ★ ⪰ 0` over a profile.
#[derive(Clone, Debug)]
pub struct GzValidation {
    pub points: usize,
    pub worst_min_eigenvalue: f64,
    pub worst_r: f64,
    pub first_violation: Option<(f64, f64)>,
}

impl GzValidation {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `R(r) + τ(r)★ ⪰ 0` with `τ = −φ′/2b²` at `grid` evenly spaced radii.
pub fn validate_gz(p: &GzProfile, grid: usize) -> Result<GzValidation, FamilyError> {
    let n = grid.max(2);
    let mut worst = (f64::INFINITY, 0.0);
    let mut first = None;
    for k in 0..n {
        let r = p.rmax * k as f64 / (n - 1) as f64;
        let d = gz_curvature_at(p, r)?;
        let tau = d.tau.expect("Grove-Ziller data carries a shift");
        let lam = shifted_min_eigenvalue(d.r.matrix(), tau);
        let scale = d.r.spectral_norm().max(1e-300);
        if lam < worst.0 {
            worst = (lam, r);
        }
        if lam < -1e-9 * scale && first.is_none() {
            first = Some((r, lam));
        }
    }
    Ok(GzValidation { points: n, worst_min_eigenvalue: worst.0, worst_r: worst.1, first_violation: first })
}

/// Cheeger metric on `ℂP²#ℂP²`: two copies of the Grove–Ziller metric glued
/// along `S³(2b)`, parametrized by `r ∈ [0, 2r_max]`.
pub fn cheeger_glued(p: &GzProfile, r: f64) -> Result<MetricPointData, FamilyError> {
    let total = 2.0 * p.rmax;
    if !(0.0..=total).contains(&r) {
        return Err(FamilyError::OutOfRange { r, max: total });
    }
    let local = if r > p.rmax { (total - r).max(0.0) } else { r };
    let mut d = gz_curvature_at(p, local)?;
    d.label = format!("cheeger(r={r})");
    Ok(d)
}

/// True when `r` lies on the cylindrical neck `[r₀, 2r_max − r₀]`.
pub fn on_neck(p: &GzProfile, r: f64) -> bool {
    r >= p.r0 && r <= 2.0 * p.rmax - p.r0
}
