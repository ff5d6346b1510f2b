//! Curvature endomorphisms of the twisted spinor bundle `S(W)⊗S(V)`.
//!
//! For `R` acting on Λ²V and `L = ∧²l` with `l: W → V`,
//!
//! ```text
//! 𝓡(R, L) = −2 Σᵢ Ξ(βᵢ) ⊗ Ξ(R L βᵢ)
//! 𝓣(R, L) = −Σᵢ (Ξ(L*αᵢ)⊗1 + 1⊗Ξ(αᵢ)) ∘ (Ξ(L*Rαᵢ)⊗1 + 1⊗Ξ(Rαᵢ))
//! ```
//!
//! where `Ξ = Ξ₀⁻¹`, `{βᵢ}` and `{αᵢ}` are orthonormal bases of Λ²W and Λ²V,
//! and `L* = ∧²(lᵀ)`.

use rand::Rng;
use thiserror::Error;

use crate::clifford::{tensor_chirality_blocks, CliffordRep, Sector};
use crate::exterior::{hodge_star, is_nonincreasing, wedge2, CurvatureOperator, ExteriorError};
use crate::smallmat::{largest_singular_value, svd, CMatrix, LinalgError, RealMatrix, SelfAdjoint};
use crate::thorpe::{shifted_min_eigenvalue, tau_interval};

/// Relative slack for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeitzError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("expected a 4x4 map, got {rows}x{cols}")]
    MapShape { rows: usize, cols: usize },
    #[error("curvature operator has no feasible shift, so sec >= 0 fails")]
    SecNotNonnegative,
    #[error("exterior square of the map is not nonincreasing (largest singular value {largest:.6e})")]
    NotAreaNonincreasing { largest: f64 },
    #[error("shift tau = {tau:.6e} must be nonpositive")]
    TauPositive { tau: f64 },
    #[error("R + tau* is not positive semidefinite at tau = {tau:.6e} (min eigenvalue {min_eigenvalue:.6e})")]
    ShiftInfeasible { tau: f64, min_eigenvalue: f64 },
    #[error("rigidity hypothesis fails: min eig(scal/2 g - Ric) = {upper:.6e}, min eig(Ric) = {lower:.6e}")]
    RigidityHypothesis { upper: f64, lower: f64 },
}

/// Which construction produced an endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndoKind {
    R,
    T,
    Other,
}

/// A 16×16 endomorphism of `S(W)⊗S(V)`.
#[derive(Clone, Debug)]
pub struct SpinorEndo {
    pub matrix: CMatrix,
    pub kind: EndoKind,
}

impl SpinorEndo {
    /// Restriction to one of the four chirality sectors.
    pub fn restrict(&self, sector: Sector) -> CMatrix {
        self.matrix.restrict(&sector.indices())
    }

    pub fn min_eigenvalue_on(&self, sector: Sector) -> f64 {
        self.restrict(sector).min_eigenvalue().expect("endomorphism is Hermitian")
    }

    pub fn max_eigenvalue_on(&self, sector: Sector) -> f64 {
        self.restrict(sector).max_eigenvalue().expect("endomorphism is Hermitian")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.matrix.hermitian_defect()
    }

    /// Norm of the parts that mix chirality sectors.
    pub fn sector_mixing(&self) -> f64 {
        tensor_chirality_blocks(&self.matrix).off_diagonal_norm()
    }
}

fn check_map(l: &RealMatrix) -> Result<(), WeitzError> {
    if l.rows() != 4 || l.cols() != 4 {
        return Err(WeitzError::MapShape { rows: l.rows(), cols: l.cols() });
    }
    Ok(())
}

fn on_w(x: &CMatrix) -> CMatrix {
    x.kron(&CMatrix::identity(4))
}

fn on_v(x: &CMatrix) -> CMatrix {
    CMatrix::identity(4).kron(x)
}

/// `𝓡(R, L)` summed over the columns of `basis` (orthonormal in Λ²W).
pub fn build_r_endo_in_basis(r: &CurvatureOperator, l: &RealMatrix, basis: &RealMatrix) -> Result<SpinorEndo, WeitzError> {
    check_map(l)?;
    let rep = CliffordRep::standard();
    let rl = r.matrix() * &wedge2(l);
    let mut m = CMatrix::zeros(16, 16);
    for i in 0..6 {
        let beta = basis.column(i);
        let image = rl.mul_vec(&beta);
        m += &rep.xi0_inv(&beta).kron(&rep.xi0_inv(&image));
    }
    Ok(SpinorEndo { matrix: m.scale_real(-2.0), kind: EndoKind::R })
}

/// `𝓡(R, L)` in the basis `K`.
pub fn build_r_endo(r: &CurvatureOperator, l: &RealMatrix) -> Result<SpinorEndo, WeitzError> {
    build_r_endo_in_basis(r, l, &RealMatrix::identity(6))
}

/// `𝓣(R, L)` summed over the columns of `basis` (orthonormal in Λ²V). `R`
/// need only be symmetric.
pub fn build_t_endo_in_basis(r: &RealMatrix, l: &RealMatrix, basis: &RealMatrix) -> Result<SpinorEndo, WeitzError> {
    check_map(l)?;
    if r.rows() != 6 || r.cols() != 6 {
        return Err(ExteriorError::Shape { expected: "6x6", rows: r.rows(), cols: r.cols() }.into());
    }
    let allowed = crate::smallmat::SYMMETRY_TOL * r.frobenius_norm();
    if r.asymmetry() > allowed {
        return Err(LinalgError::NotSelfAdjoint { asymmetry: r.asymmetry(), allowed }.into());
    }
    let rep = CliffordRep::standard();
    let l_adj = wedge2(&l.transpose());
    let mut m = CMatrix::zeros(16, 16);
    for i in 0..6 {
        let alpha = basis.column(i);
        let r_alpha = r.mul_vec(&alpha);
        let left = &on_w(&rep.xi0_inv(&l_adj.mul_vec(&alpha))) + &on_v(&rep.xi0_inv(&alpha));
        let right = &on_w(&rep.xi0_inv(&l_adj.mul_vec(&r_alpha))) + &on_v(&rep.xi0_inv(&r_alpha));
        m += &(&left * &right);
    }
    Ok(SpinorEndo { matrix: m.scale_real(-1.0), kind: EndoKind::T })
}

/// `𝓣(R, L)` in the basis `K`.
pub fn build_t_endo(r: &RealMatrix, l: &RealMatrix) -> Result<SpinorEndo, WeitzError> {
    build_t_endo_in_basis(r, l, &RealMatrix::identity(6))
}

/// `tr(L* ∘ R ∘ L)`.
pub fn pulled_back_trace(r: &CurvatureOperator, l: &RealMatrix) -> f64 {
    let w = wedge2(l);
    (&(&w.transpose() * r.matrix()) * &w).trace()
}

/// Comparison of `𝓡` with `𝓣 − ¼tr(L*RL) − ⅛scal`.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub residual: f64,
    pub allowed: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.allowed
    }
}

pub fn check_rt_identity(r: &CurvatureOperator, l: &RealMatrix) -> Result<IdentityCheck, WeitzError> {
    let rr = build_r_endo(r, l)?;
    let tt = build_t_endo(r.matrix(), l)?;
    let shift = 0.25 * pulled_back_trace(r, l) + 0.125 * r.scal();
    let rhs = &tt.matrix - &CMatrix::identity(16).scale_real(shift);
    let residual = (&rr.matrix - &rhs).frobenius_norm();
    let allowed = 1e-9 * (1.0 + r.spectral_norm() * largest_singular_value(l).powi(4));
    Ok(IdentityCheck { residual, allowed })
}

/// `½scal_R − tr(L*RL)` with its two sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceBound {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

fn require_area_nonincreasing(l: &RealMatrix) -> Result<(), WeitzError> {
    let w = wedge2(l);
    if !is_nonincreasing(&w) {
        return Err(WeitzError::NotAreaNonincreasing { largest: largest_singular_value(&w) });
    }
    Ok(())
}

/// Evaluates the bound without checking hypotheses.
pub fn trace_bound_unchecked(r: &CurvatureOperator, l: &RealMatrix) -> TraceBound {
    let lhs = pulled_back_trace(r, l);
    let rhs = 0.5 * r.scal();
    TraceBound { lhs, rhs, slack: rhs - lhs }
}

/// `tr(L*RL) ≤ ½scal_R` for `sec_R ≥ 0` and area-nonincreasing `l`.
pub fn trace_bound(r: &CurvatureOperator, l: &RealMatrix) -> Result<TraceBound, WeitzError> {
    check_map(l)?;
    if tau_interval(r).is_empty() {
        return Err(WeitzError::SecNotNonnegative);
    }
    require_area_nonincreasing(l)?;
    Ok(trace_bound_unchecked(r, l))
}

/// Minimum eigenvalues of `½scal·g − Ric` and of `Ric`.
pub fn rigidity_margins(r: &CurvatureOperator) -> (f64, f64) {
    let ric = r.ricci();
    let upper = &RealMatrix::identity(4).scale(0.5 * r.scal()) - &ric;
    (upper.min_eigenvalue().expect("symmetric"), ric.min_eigenvalue().expect("symmetric"))
}

/// Smallest trace-bound slack found over random non-isometric competitors.
#[derive(Clone, Debug)]
pub struct RigidityProbe {
    pub min_slack: f64,
    pub worst_map: RealMatrix,
    pub samples: usize,
}

/// Samples area-nonincreasing maps that are not isometries and records the
/// smallest slack of the trace bound. Requires `½scal·g ≻ Ric ≻ 0`.
pub fn rigidity_probe<G: Rng>(r: &CurvatureOperator, samples: usize, rng: &mut G) -> Result<RigidityProbe, WeitzError> {
    let (upper, lower) = rigidity_margins(r);
    if upper <= 1e-9 || lower <= 1e-9 {
        return Err(WeitzError::RigidityHypothesis { upper, lower });
    }
    if tau_interval(r).is_empty() {
        return Err(WeitzError::SecNotNonnegative);
    }
    let mut best: Option<(f64, RealMatrix)> = None;
    for _ in 0..samples {
        let l = crate::sampling::random_area_nonincreasing_non_isometry(rng);
        let slack = trace_bound_unchecked(r, &l).slack;
        if best.as_ref().is_none_or(|(s, _)| slack < *s) {
            best = Some((slack, l));
        }
    }
    let (min_slack, worst_map) = best.unwrap_or((f64::INFINITY, RealMatrix::identity(4)));
    Ok(RigidityProbe { min_slack, worst_map, samples })
}

/// Pointwise certificate behind the extremality argument for one competitor.
#[derive(Clone, Debug)]
pub struct ExtremalityReport {
    pub tau: f64,
    pub area_nonincreasing: bool,
    /// `scal_N ≥ scal_M` within tolerance.
    pub scal_inequality: bool,
    /// Min eigenvalue of `𝓣(R+τ★, L)` on `S⁺⊗S⁺`.
    pub t_shifted_min: f64,
    /// Min eigenvalue of `−τ𝓣(★, L)` on `S⁺⊗S⁺`.
    pub t_star_min: f64,
    /// Min eigenvalue of their sum, which equals `𝓣(R, L)` on `S⁺⊗S⁺`.
    pub t_sum_min: f64,
    /// `‖𝓣(R+τ★) − τ𝓣(★) − 𝓣(R)‖` on `S⁺⊗S⁺`.
    pub decomposition_residual: f64,
    pub trace_bound: TraceBound,
    /// Min eigenvalue of `¼scal_N + 𝓡(R, L)` on `S⁺⊗S⁺`, minus `¼(scal_N − scal_M)`.
    pub weitzenboeck_gap: f64,
    /// `½scal·g ≻ Ric ≻ 0` at the point.
    pub rigidity_hypothesis: bool,
    /// The competitor's differential is an isometry.
    pub isometry: bool,
    pub scal_m: f64,
    pub scal_n: f64,
    /// Tolerance used for the sign checks.
    pub tolerance: f64,
}

impl ExtremalityReport {
    /// All positivity checks hold within tolerance.
    pub fn positivity_holds(&self) -> bool {
        let t = -self.tolerance;
        self.t_shifted_min >= t && self.t_star_min >= t && self.t_sum_min >= t && self.trace_bound.slack >= t
    }

    /// The gap is nonnegative (the operator inequality behind the argument).
    pub fn gap_holds(&self) -> bool {
        self.weitzenboeck_gap >= -self.tolerance
    }
}

/// Builds the certificate for a point of `M` with curvature `R_M`, a
/// nonpositive feasible shift `τ`, the competitor's scalar curvature and its
/// differential `l`.
pub fn extremality_certificate(r: &CurvatureOperator, tau: f64, scal_n: f64, l: &RealMatrix) -> Result<ExtremalityReport, WeitzError> {
    check_map(l)?;
    if tau > 0.0 {
        return Err(WeitzError::TauPositive { tau });
    }
    let scale = 1.0 + r.spectral_norm();
    let tolerance = PSD_TOL * scale;
    let min_eig = shifted_min_eigenvalue(r.matrix(), tau);
    if min_eig < -tolerance {
        return Err(WeitzError::ShiftInfeasible { tau, min_eigenvalue: min_eig });
    }
    require_area_nonincreasing(l)?;

    let pp = Sector::PLUS_PLUS;
    let shifted = build_t_endo(&r.shifted(tau), l)?;
    let star_part = build_t_endo(&hodge_star(), l)?;
    let t_plain = build_t_endo(r.matrix(), l)?;
    let shifted_pp = shifted.restrict(pp);
    let star_pp = star_part.restrict(pp).scale_real(-tau);
    let sum_pp = &shifted_pp + &star_pp;
    let decomposition_residual = (&sum_pp - &t_plain.restrict(pp)).frobenius_norm();

    let scal_m = r.scal();
    let rr = build_r_endo(r, l)?;
    let lifted = &rr.restrict(pp) + &CMatrix::identity(4).scale_real(0.25 * scal_n);
    let weitzenboeck_gap = lifted.min_eigenvalue()? - 0.25 * (scal_n - scal_m);

    let (upper, lower) = rigidity_margins(r);
    let isometry = svd(l)?.singular_values.iter().all(|s| (s - 1.0).abs() <= 1e-9);

    Ok(ExtremalityReport {
        tau,
        area_nonincreasing: true,
        scal_inequality: scal_n >= scal_m - tolerance,
        t_shifted_min: shifted_pp.min_eigenvalue()?,
        t_star_min: star_pp.min_eigenvalue()?,
        t_sum_min: sum_pp.min_eigenvalue()?,
        decomposition_residual,
        trace_bound: trace_bound_unchecked(r, l),
        weitzenboeck_gap,
        rigidity_hypothesis: upper > 1e-9 && lower > 1e-9,
        isometry,
        scal_m,
        scal_n,
        tolerance,
    })
}

/// `Σᵢ Ξ(αᵢ)Ξ(Sαᵢ)` on `S`; for Bianchi `S` this is `−⅛scal_S·Id`.
pub fn spinor_curvature_contraction(s: &RealMatrix) -> CMatrix {
    let rep = CliffordRep::standard();
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..6 {
        let mut a = [0.0; 6];
        a[i] = 1.0;
        m += &(&rep.xi0_inv(&a) * &rep.xi0_inv(&s.mul_vec(&a)));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_area_nonincreasing, random_bianchi, random_map, random_rotation, rng_for};

    fn fs() -> CurvatureOperator {
        CurvatureOperator::from_sdasd(&RealMatrix::from_diag(&[0.0, 0.0, 6.0, 2.0, 2.0, 2.0])).unwrap()
    }

    #[test]
    fn zero_inputs_give_zero() {
        let l = RealMatrix::identity(4);
        assert_eq!(build_r_endo(&CurvatureOperator::zero(), &l).unwrap().frobenius_norm(), 0.0);
        let z = RealMatrix::zeros(4, 4);
        assert_eq!(build_r_endo(&fs(), &z).unwrap().frobenius_norm(), 0.0);
        assert_eq!(build_t_endo(&RealMatrix::zeros(6, 6), &l).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn identity_cases_of_the_rt_identity() {
        let c = check_rt_identity(&CurvatureOperator::identity(), &RealMatrix::identity(4)).unwrap();
        assert!(c.residual <= 1e-10, "{}", c.residual);
        let c = check_rt_identity(&fs(), &RealMatrix::identity(4).scale(0.5)).unwrap();
        assert!(c.residual <= 1e-10, "{}", c.residual);
    }

    #[test]
    fn rt_identity_random() {
        let mut rng = rng_for(11, 0);
        for _ in 0..20 {
            let r = random_bianchi(&mut rng);
            let l = random_map(&mut rng);
            let c = check_rt_identity(&r, &l).unwrap();
            assert!(c.passed(), "{} > {}", c.residual, c.allowed);
        }
    }

    #[test]
    fn scalar_contraction() {
        let mut rng = rng_for(12, 0);
        let r = random_bianchi(&mut rng);
        let m = spinor_curvature_contraction(r.matrix());
        let expect = CMatrix::identity(4).scale_real(-r.scal() / 8.0);
        assert!((&m - &expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn endomorphisms_are_hermitian_and_sector_preserving() {
        let mut rng = rng_for(13, 0);
        let r = random_bianchi(&mut rng);
        let l = random_map(&mut rng);
        for e in [build_r_endo(&r, &l).unwrap(), build_t_endo(r.matrix(), &l).unwrap()] {
            assert!(e.hermitian_defect() <= 1e-10 * e.frobenius_norm());
            assert!(e.sector_mixing() <= 1e-12 * (1.0 + e.frobenius_norm()));
        }
    }

    #[test]
    fn basis_independence() {
        let mut rng = rng_for(14, 0);
        let r = random_bianchi(&mut rng);
        let l = random_map(&mut rng);
        let q = random_rotation(6, &mut rng);
        let a = build_r_endo(&r, &l).unwrap();
        let b = build_r_endo_in_basis(&r, &l, &q).unwrap();
        assert!((&a.matrix - &b.matrix).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
        let a = build_t_endo(r.matrix(), &l).unwrap();
        let b = build_t_endo_in_basis(r.matrix(), &l, &q).unwrap();
        assert!((&a.matrix - &b.matrix).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn star_positivity_on_chiral_sectors() {
        let mut rng = rng_for(15, 0);
        for _ in 0..20 {
            let l = random_area_nonincreasing(&mut rng);
            let t = build_t_endo(&hodge_star(), &l).unwrap();
            assert!(t.min_eigenvalue_on(Sector::PLUS_PLUS) >= -1e-9);
            assert!(t.max_eigenvalue_on(Sector::MINUS_MINUS) <= 1e-9);
        }
    }

    #[test]
    fn trace_bound_examples() {
        let r = CurvatureOperator::identity();
        let b = trace_bound(&r, &RealMatrix::identity(4)).unwrap();
        assert!(b.slack.abs() < 1e-10);
        let b = trace_bound(&r, &RealMatrix::zeros(4, 4)).unwrap();
        assert!((b.slack - 6.0).abs() < 1e-12);
        let b = trace_bound(&r, &RealMatrix::from_diag(&[1.0, 1.0, 1.0, 0.5])).unwrap();
        assert!((b.slack - 2.25).abs() < 1e-12);
        let neg = CurvatureOperator::new(RealMatrix::from_diag(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(trace_bound(&neg, &RealMatrix::identity(4)), Err(WeitzError::SecNotNonnegative)));
        assert!(matches!(
            trace_bound(&r, &RealMatrix::identity(4).scale(1.1)),
            Err(WeitzError::NotAreaNonincreasing { .. })
        ));
    }

    #[test]
    fn rigidity_probe_requires_hypothesis() {
        let flat = CurvatureOperator::zero();
        let mut rng = rng_for(16, 0);
        assert!(matches!(rigidity_probe(&flat, 10, &mut rng), Err(WeitzError::RigidityHypothesis { .. })));
        let p = rigidity_probe(&CurvatureOperator::identity(), 100, &mut rng).unwrap();
        assert!(p.min_slack > 0.0);
    }

    #[test]
    fn certificate_on_reversed_fubini_study() {
        let r = fs().reversed();
        let rep = extremality_certificate(&r, -1.0, r.scal(), &RealMatrix::identity(4)).unwrap();
        assert!(rep.positivity_holds(), "{rep:?}");
        assert!(rep.gap_holds(), "{rep:?}");
        assert!(rep.isometry && rep.scal_inequality && rep.rigidity_hypothesis);
        assert!(rep.decomposition_residual < 1e-12);
    }

    #[test]
    fn certificate_preconditions() {
        let r = fs().reversed();
        let l = RealMatrix::identity(4);
        assert!(matches!(extremality_certificate(&r, 0.5, 24.0, &l), Err(WeitzError::TauPositive { .. })));
        assert!(matches!(extremality_certificate(&r, -3.0, 24.0, &l), Err(WeitzError::ShiftInfeasible { .. })));
        assert!(matches!(
            extremality_certificate(&r, -1.0, 24.0, &l.scale(2.0)),
            Err(WeitzError::NotAreaNonincreasing { .. })
        ));
    }

    #[test]
    fn homothety_flags_scal() {
        let r = fs().reversed();
        let c = 1.5;
        let rep = extremality_certificate(&r, -1.0, r.scal() / (c * c), &RealMatrix::identity(4).scale(1.0 / c)).unwrap();
        assert!(!rep.scal_inequality);
        assert!(!rep.isometry);
        assert!(rep.weitzenboeck_gap.is_finite());
    }

    #[test]
    fn zero_map_gap_on_round_sphere() {
        let r = CurvatureOperator::identity();
        let rep = extremality_certificate(&r, 0.0, r.scal(), &RealMatrix::zeros(4, 4)).unwrap();
        // 𝓡 vanishes for l = 0, leaving ¼scal_M.
        assert!((rep.weitzenboeck_gap - 3.0).abs() < 1e-12);
    }
}
