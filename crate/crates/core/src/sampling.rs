//! Seeded random generators for curvature operators, maps and boundary data.
//!
//! Every sample gets its own ChaCha stream keyed by `(seed, index)`, so
//! sweeps produce identical results whether run serially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exterior::{wedge2, CurvatureOperator};
use crate::smallmat::{orthonormalize_columns, RealMatrix, SelfAdjoint};

/// Generator for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `(G + Gᵀ)/2` with standard Gaussian `G`.
pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> RealMatrix {
    gaussian_matrix(n, n, rng).symmetrized()
}

/// Haar-like rotation (determinant +1).
pub fn random_rotation<R: Rng>(n: usize, rng: &mut R) -> RealMatrix {
    orthonormalize_columns(&gaussian_matrix(n, n, rng))
}

/// `GᵀG` with standard Gaussian `G`.
pub fn random_psd<R: Rng>(n: usize, rng: &mut R) -> RealMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g.transpose() * &g).symmetrized()
}

/// Bianchi projection of a random symmetric matrix.
pub fn random_bianchi<R: Rng>(rng: &mut R) -> CurvatureOperator {
    CurvatureOperator::bianchi_projection(&random_symmetric(6, rng)).expect("projection is Bianchi")
}

/// An operator with `sec ≥ 0` together with a feasible shift: if `S ⪰ 0` and
/// `R` is its Bianchi projection, then `R + (tr(★S)/6)★ = S`.
pub fn random_sec_nonneg<R: Rng>(rng: &mut R) -> (CurvatureOperator, f64) {
    let s = random_psd(6, rng);
    let tau = crate::exterior::star_trace(&s) / 6.0;
    let r = CurvatureOperator::bianchi_projection(&s).expect("projection is Bianchi");
    (r, tau)
}

/// An operator for which the shift `τ = target` is feasible, with `target`
/// uniform in `[−1, 0]` or `[0, 1]`: a random projected PSD matrix lifted by
/// the smallest multiple of the identity that makes `R + τ★ ⪰ 0`.
pub fn random_sec_nonneg_signed<R: Rng>(nonpositive: bool, rng: &mut R) -> (CurvatureOperator, f64) {
    let r = CurvatureOperator::bianchi_projection(&random_psd(6, rng)).expect("projection is Bianchi");
    let magnitude: f64 = rng.random_range(0.0..1.0);
    let tau = if nonpositive { -magnitude } else { magnitude };
    let floor = r.shifted(tau).min_eigenvalue().expect("symmetric");
    let lift = (-floor).max(0.0);
    let r = CurvatureOperator::new(r.matrix() + &RealMatrix::identity(6).scale(lift)).expect("identity is Bianchi");
    (r, tau)
}

/// Random map `ℝ⁴ → ℝ⁴` with Gaussian entries.
pub fn random_map<R: Rng>(rng: &mut R) -> RealMatrix {
    gaussian_matrix(4, 4, rng)
}

/// `U·diag(λ)·Vᵀ` with random rotations `U, V`.
pub fn map_with_singular_values<R: Rng>(lambda: [f64; 4], rng: &mut R) -> RealMatrix {
    let u = random_rotation(4, rng);
    let v = random_rotation(4, rng);
    &(&u * &RealMatrix::from_diag(&lambda)) * &v.transpose()
}

/// Singular values uniform on `[0, 2]⁴` conditioned on `λᵢλⱼ ≤ 1` for `i ≠ j`.
pub fn area_nonincreasing_singular_values<R: Rng>(rng: &mut R) -> [f64; 4] {
    loop {
        let lam: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..2.0));
        let ok = (0..4).all(|i| (i + 1..4).all(|j| lam[i] * lam[j] <= 1.0));
        if ok {
            return lam;
        }
    }
}

/// A map whose exterior square is nonincreasing.
pub fn random_area_nonincreasing<R: Rng>(rng: &mut R) -> RealMatrix {
    let lam = area_nonincreasing_singular_values(rng);
    map_with_singular_values(lam, rng)
}

/// An area-nonincreasing map that is at least `0.01` away from an isometry in
/// some singular value.
pub fn random_area_nonincreasing_non_isometry<R: Rng>(rng: &mut R) -> RealMatrix {
    loop {
        let lam = area_nonincreasing_singular_values(rng);
        if lam.iter().any(|x| (x - 1.0).abs() >= 0.01) {
            return map_with_singular_values(lam, rng);
        }
    }
}

/// Area-nonincreasing map with one singular value above 1 (so the map itself
/// stretches some direction).
pub fn random_stretching_area_nonincreasing<R: Rng>(rng: &mut R) -> RealMatrix {
    let big: f64 = rng.random_range(1.05..2.5);
    let cap = 1.0 / big;
    let lam = [big, rng.random_range(0.0..cap), rng.random_range(0.0..cap), rng.random_range(0.0..cap)];
    map_with_singular_values(lam, rng)
}

/// Mixture used by the Finsler–Thorpe oracle: nonnegative operators, generic
/// ones, and small perturbations of nonnegative ones near the boundary.
pub fn random_mixed_bianchi<R: Rng>(rng: &mut R) -> CurvatureOperator {
    match rng.random_range(0..4u8) {
        0 => random_sec_nonneg(rng).0,
        1 => random_bianchi(rng),
        2 => {
            // Rank-deficient PSD part forces sec = 0 somewhere; a small kick
            // lands on either side of the boundary.
            let g = gaussian_matrix(3, 6, rng);
            let s = (&g.transpose() * &g).symmetrized();
            let base = CurvatureOperator::bianchi_projection(&s).expect("Bianchi");
            let kick = random_bianchi(rng).scaled(rng.random_range(-0.05..0.05));
            CurvatureOperator::new(base.matrix() + kick.matrix()).expect("sum of Bianchi operators")
        }
        _ => {
            let (r, _) = random_sec_nonneg(rng);
            let shift: f64 = rng.random_range(-1.0..0.5);
            CurvatureOperator::new(r.matrix() + &RealMatrix::identity(6).scale(shift)).expect("Bianchi")
        }
    }
}

/// Random positive-semidefinite 3×3 second fundamental form.
pub fn random_psd3<R: Rng>(rng: &mut R) -> RealMatrix {
    let scale: f64 = rng.random_range(0.1..2.0);
    let g = gaussian_matrix(3, 3, rng);
    let rank: usize = rng.random_range(1..=3);
    let g = RealMatrix::from_fn(3, 3, |i, j| if i < rank { g[(i, j)] } else { 0.0 });
    (&g.transpose() * &g).symmetrized().scale(scale)
}

/// Exterior square of a random area-nonincreasing map.
pub fn random_nonincreasing_wedge2<R: Rng>(rng: &mut R) -> RealMatrix {
    wedge2(&random_area_nonincreasing(rng))
}
