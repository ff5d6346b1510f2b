//! Feasible shifts `τ` with `R + τ★ ⪰ 0`.
//!
//! `λ(τ) = λ_min(R + τ★)` is a minimum of affine functions of `τ`, hence
//! concave, so the feasible set is a closed interval. It is found by a
//! golden-section search for the peak of `λ` followed by bisection on each
//! flank.

use thiserror::Error;

use crate::exterior::{hodge_star, sec_min_bruteforce, CurvatureOperator, Plane};
use crate::smallmat::{RealMatrix, SelfAdjoint};

/// Tolerances for interval location, relative to the scale `‖R‖₂` (or 1 for `R = 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThorpeTolerances {
    /// `λ(τ) ≥ −feasibility·scale` counts as positive semidefinite.
    pub feasibility: f64,
    /// Threshold for the endpoint crossing; tighter than `feasibility` so that
    /// single-point intervals come out with width well under `1e-6`.
    pub endpoint: f64,
    /// `λ(τ) ≥ strict·scale` counts as positive definite.
    pub strict: f64,
    /// Grid density of the brute-force consistency check in [`sec_nonneg`].
    pub check_density: usize,
}

impl Default for ThorpeTolerances {
    fn default() -> Self {
        Self { feasibility: 1e-9, endpoint: 1e-13, strict: 1e-9, check_density: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThorpeError {
    #[error("certificate inconsistent with brute-force sectional curvature: {0}")]
    Inconsistent(String),
}

/// The closed set `{τ : R + τ★ ⪰ 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauInterval {
    /// `(τ_min, τ_max)`, or `None` when no shift works.
    pub bounds: Option<(f64, f64)>,
    /// Maximizer of `λ`.
    pub peak_tau: f64,
    /// `max_τ λ(τ)`.
    pub peak_value: f64,
    /// Some `τ` makes `R + τ★` positive definite.
    pub strict: bool,
    /// Scale used for the relative tolerances.
    pub scale: f64,
}

impl TauInterval {
    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn width(&self) -> Option<f64> {
        self.bounds.map(|(a, b)| b - a)
    }

    pub fn midpoint(&self) -> Option<f64> {
        self.bounds.map(|(a, b)| 0.5 * (a + b))
    }

    pub fn contains(&self, tau: f64, slack: f64) -> bool {
        self.bounds.is_some_and(|(a, b)| tau >= a - slack && tau <= b + slack)
    }
}

/// `λ_min(R + τ★)`.
pub fn shifted_min_eigenvalue(r: &RealMatrix, tau: f64) -> f64 {
    let m = r + &hodge_star().scale(tau);
    m.min_eigenvalue().expect("symmetric input")
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)].into_iter().fold((x, fx), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// Bisection between an infeasible `bad` and a feasible `good`.
fn crossing(f: &impl Fn(f64) -> f64, mut bad: f64, mut good: f64, level: f64, tol: f64) -> f64 {
    while (good - bad).abs() > tol {
        let mid = 0.5 * (bad + good);
        if f(mid) >= level {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

pub fn tau_interval(r: &CurvatureOperator) -> TauInterval {
    tau_interval_with(r, &ThorpeTolerances::default())
}

pub fn tau_interval_with(r: &CurvatureOperator, tol: &ThorpeTolerances) -> TauInterval {
    let norm = r.spectral_norm();
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let bracket = norm + 1.0;
    let m = r.matrix();
    let lambda = |t: f64| shifted_min_eigenvalue(m, t);

    let (peak_tau, peak_value) = golden_max(lambda, -bracket, bracket, 1e-12 * bracket);
    let strict = peak_value >= tol.strict * scale;
    if peak_value < -tol.feasibility * scale {
        return TauInterval { bounds: None, peak_tau, peak_value, strict, scale };
    }
    let level = -tol.endpoint * scale;
    let bounds = if peak_value < level {
        (peak_tau, peak_tau)
    } else {
        let step = 1e-14 * bracket;
        let lo = crossing(&lambda, -bracket, peak_tau, level, step);
        let hi = crossing(&lambda, bracket, peak_tau, level, step);
        (lo, hi)
    };
    TauInterval { bounds: Some(bounds), peak_tau, peak_value, strict, scale }
}

/// Outcome of the Finsler–Thorpe test for `sec ≥ 0`.
#[derive(Clone, Debug)]
pub enum SecCertificate {
    /// `R + τ★ ⪰ 0`.
    Feasible { tau: f64, interval: TauInterval },
    /// A plane with negative sectional curvature.
    Counterexample { plane: Plane, sec: f64, interval: TauInterval },
}

impl SecCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SecCertificate::Feasible { .. })
    }

    pub fn interval(&self) -> &TauInterval {
        match self {
            SecCertificate::Feasible { interval, .. } | SecCertificate::Counterexample { interval, .. } => interval,
        }
    }
}

pub fn sec_nonneg(r: &CurvatureOperator) -> Result<SecCertificate, ThorpeError> {
    sec_nonneg_with(r, &ThorpeTolerances::default())
}

/// Certifies `sec ≥ 0` by a feasible shift, or refutes it with a plane. Both
/// branches are cross-checked against a brute-force scan.
pub fn sec_nonneg_with(r: &CurvatureOperator, tol: &ThorpeTolerances) -> Result<SecCertificate, ThorpeError> {
    let interval = tau_interval_with(r, tol);
    let scan = sec_min_bruteforce(r.matrix(), tol.check_density);
    match interval.midpoint() {
        Some(tau) => {
            if scan.value < -1e-6 * interval.scale {
                return Err(ThorpeError::Inconsistent(format!(
                    "shift {tau:.6e} is feasible but a plane has sec = {:.6e}",
                    scan.value
                )));
            }
            Ok(SecCertificate::Feasible { tau, interval })
        }
        None => {
            if scan.value >= 0.0 {
                return Err(ThorpeError::Inconsistent(format!(
                    "no feasible shift (peak {:.6e}) but minimal sec found is {:.6e}",
                    interval.peak_value, scan.value
                )));
            }
            Ok(SecCertificate::Counterexample { plane: scan.plane, sec: scan.value, interval })
        }
    }
}

/// Requested sign of a shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauSign {
    Nonpositive,
    Nonnegative,
}

pub fn sign_constrained_tau(r: &CurvatureOperator, sign: TauSign) -> Option<f64> {
    sign_constrained_tau_with(r, sign, &ThorpeTolerances::default())
}

/// A feasible `τ` of the requested sign, if one exists.
pub fn sign_constrained_tau_with(r: &CurvatureOperator, sign: TauSign, tol: &ThorpeTolerances) -> Option<f64> {
    let interval = tau_interval_with(r, tol);
    let (a, b) = interval.bounds?;
    let (lo, hi) = match sign {
        TauSign::Nonpositive => (a, b.min(0.0)),
        TauSign::Nonnegative => (a.max(0.0), b),
    };
    let feasible = |t: f64| shifted_min_eigenvalue(r.matrix(), t) >= -tol.feasibility * interval.scale;
    let candidate = if lo > hi {
        0.0
    } else if hi - lo <= 1e-9 {
        match sign {
            TauSign::Nonpositive => hi,
            TauSign::Nonnegative => lo,
        }
    } else {
        0.5 * (lo + hi)
    };
    if feasible(candidate) {
        Some(candidate)
    } else if feasible(0.0) {
        Some(0.0)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs() -> CurvatureOperator {
        CurvatureOperator::from_sdasd(&RealMatrix::from_diag(&[0.0, 0.0, 6.0, 2.0, 2.0, 2.0])).unwrap()
    }

    #[test]
    fn fubini_study_interval() {
        let i = tau_interval(&fs());
        let (a, b) = i.bounds.unwrap();
        assert!(a.abs() < 1e-6 && (b - 2.0).abs() < 1e-6, "{a} {b}");
        let (a, b) = tau_interval(&fs().reversed()).bounds.unwrap();
        assert!((a + 2.0).abs() < 1e-6 && b.abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn round_sphere_interval() {
        let i = tau_interval(&CurvatureOperator::identity());
        let (a, b) = i.bounds.unwrap();
        assert!((a + 1.0).abs() < 1e-9 && (b - 1.0).abs() < 1e-9);
        assert!(i.strict);
    }

    #[test]
    fn product_interval_is_a_point() {
        let r = CurvatureOperator::new(RealMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        let i = tau_interval(&r);
        let (a, b) = i.bounds.unwrap();
        assert!(b - a <= 1e-6 && a.abs() <= 1e-6, "{a} {b}");
        assert!(!i.strict);
    }

    #[test]
    fn certificates() {
        match sec_nonneg(&CurvatureOperator::identity()).unwrap() {
            SecCertificate::Feasible { tau, .. } => assert!(tau.abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let r = CurvatureOperator::new(RealMatrix::from_diag(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        match sec_nonneg(&r).unwrap() {
            SecCertificate::Counterexample { plane, sec, .. } => {
                assert!(sec < 0.0);
                assert!((r.sec(&plane) - sec).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn signed_shifts() {
        let t = sign_constrained_tau(&fs().reversed(), TauSign::Nonpositive).unwrap();
        assert!((-2.0..=0.0).contains(&t));
        let t = sign_constrained_tau(&CurvatureOperator::identity(), TauSign::Nonpositive).unwrap();
        assert!(t <= 0.0);
        assert_eq!(sign_constrained_tau(&fs(), TauSign::Nonpositive), Some(0.0));
        let t = sign_constrained_tau(&fs(), TauSign::Nonnegative).unwrap();
        assert!(t > 0.0 && t <= 2.0);
        let r = CurvatureOperator::new(RealMatrix::from_diag(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(sign_constrained_tau(&r, TauSign::Nonnegative), None);
    }

    #[test]
    fn asymmetric_sd_asd_blocks() {
        let r = CurvatureOperator::from_sdasd(&RealMatrix::from_diag(&[3.0, 2.0, 1.0, 2.0, 2.0, 2.0])).unwrap();
        let (a, b) = tau_interval(&r).bounds.unwrap();
        assert!((a + 1.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9, "{a} {b}");
    }
}
