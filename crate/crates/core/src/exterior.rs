//! Two-vectors on ℝ⁴, the Hodge star and algebraic curvature operators.
//!
//! Two-vectors are stored in the ordered basis
//! `K = (e₁∧e₂, e₃∧e₄, e₁∧e₃, e₄∧e₂, e₁∧e₄, e₂∧e₃)`, in which the Hodge
//! star pairs consecutive entries. The self-dual/anti-self-dual basis is
//! reached through [`change_of_basis_sdasd`].

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use thiserror::Error;

use crate::smallmat::{dot, largest_singular_value, norm, LinalgError, RealMatrix, SelfAdjoint};

/// Index pairs (0-based) of the basis `K`.
pub const K_PAIRS: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (3, 1), (0, 3), (1, 2)];

/// Relative tolerance on `|tr(★R)|` for the first Bianchi identity.
pub const BIANCHI_TOL: f64 = 1e-10;

/// Largest accepted residual of the Plücker quadric for a plane.
pub const DECOMPOSABLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExteriorError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    Shape { expected: &'static str, rows: usize, cols: usize },
    #[error("first Bianchi identity fails: |tr(*R)| = {residual:.3e} exceeds {allowed:.3e}")]
    NotBianchi { residual: f64, allowed: f64 },
    #[error("two-vector is not a unit decomposable plane (quadric residual {residual:.3e})")]
    NotDecomposable { residual: f64 },
}

/// Position and sign of `eᵢ∧eⱼ` in the basis `K`, or `None` when `i == j`.
pub fn basis_index(i: usize, j: usize) -> Option<(usize, f64)> {
    if i == j {
        return None;
    }
    K_PAIRS.iter().enumerate().find_map(|(k, &(a, b))| {
        if (a, b) == (i, j) {
            Some((k, 1.0))
        } else if (a, b) == (j, i) {
            Some((k, -1.0))
        } else {
            None
        }
    })
}

/// Coordinates of `x∧y` in `K`.
pub fn wedge_vectors(x: &[f64], y: &[f64]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (k, &(a, b)) in K_PAIRS.iter().enumerate() {
        out[k] = x[a] * y[b] - x[b] * y[a];
    }
    out
}

/// The skew 4×4 matrix `Σ ωₖ (e_a e_bᵀ − e_b e_aᵀ)`, i.e. the endomorphism
/// `z ↦ Σ ωₖ (⟨e_a,z⟩e_b − ⟨e_b,z⟩e_a)`.
pub fn two_vector_endomorphism(omega: &[f64]) -> RealMatrix {
    let mut m = RealMatrix::zeros(4, 4);
    for (k, &(a, b)) in K_PAIRS.iter().enumerate() {
        m[(b, a)] += omega[k];
        m[(a, b)] -= omega[k];
    }
    m
}

/// Matrix of `∧²l` in the basis `K`.
pub fn wedge2(l: &RealMatrix) -> RealMatrix {
    assert_eq!((l.rows(), l.cols()), (4, 4), "wedge2 expects a 4x4 map");
    RealMatrix::from_fn(6, 6, |m, k| {
        let (a, b) = K_PAIRS[k];
        let (c, d) = K_PAIRS[m];
        l[(c, a)] * l[(d, b)] - l[(d, a)] * l[(c, b)]
    })
}

/// True iff every singular value is at most `1 + 1e-12`.
pub fn is_nonincreasing(m: &RealMatrix) -> bool {
    largest_singular_value(m) <= 1.0 + 1e-12
}

/// The Hodge star in `K`: `diag(H, H, H)` with `H = [[0,1],[1,0]]`.
pub fn hodge_star() -> RealMatrix {
    RealMatrix::from_fn(6, 6, |i, j| if i / 2 == j / 2 && i != j { 1.0 } else { 0.0 })
}

/// Orthogonal matrix whose columns are the self-dual basis
/// `(e₁₂+e₃₄, e₁₃+e₄₂, e₁₄+e₂₃)/√2` followed by the anti-self-dual one.
pub fn change_of_basis_sdasd() -> RealMatrix {
    static P: OnceLock<RealMatrix> = OnceLock::new();
    P.get_or_init(|| {
        let mut p = RealMatrix::zeros(6, 6);
        for pair in 0..3 {
            p[(2 * pair, pair)] = FRAC_1_SQRT_2;
            p[(2 * pair + 1, pair)] = FRAC_1_SQRT_2;
            p[(2 * pair, pair + 3)] = FRAC_1_SQRT_2;
            p[(2 * pair + 1, pair + 3)] = -FRAC_1_SQRT_2;
        }
        p
    })
    .clone()
}

/// `∧²diag(1,1,1,−1)`: conjugating by it reverses the orientation.
pub fn orientation_flip() -> RealMatrix {
    RealMatrix::from_diag(&[1.0, -1.0, 1.0, -1.0, -1.0, 1.0])
}

/// `tr(★S)` for a 6×6 matrix in `K`.
pub fn star_trace(s: &RealMatrix) -> f64 {
    (0..3).map(|p| s[(2 * p, 2 * p + 1)] + s[(2 * p + 1, 2 * p)]).sum()
}

fn check_six(m: &RealMatrix) -> Result<(), ExteriorError> {
    if m.rows() != 6 || m.cols() != 6 {
        return Err(ExteriorError::Shape { expected: "6x6", rows: m.rows(), cols: m.cols() });
    }
    Ok(())
}

fn check_symmetric(m: &RealMatrix) -> Result<(), ExteriorError> {
    let asym = m.asymmetry();
    let allowed = crate::smallmat::SYMMETRY_TOL * m.frobenius_norm();
    if asym > allowed {
        return Err(LinalgError::NotSelfAdjoint { asymmetry: asym, allowed }.into());
    }
    Ok(())
}

/// A symmetric operator on Λ²ℝ⁴ in the basis `K` satisfying the first
/// Bianchi identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    matrix: RealMatrix,
}

impl CurvatureOperator {
    /// Validates shape, symmetry and the Bianchi identity. The stored matrix is
    /// the exact symmetrization of the input.
    pub fn new(matrix: RealMatrix) -> Result<Self, ExteriorError> {
        check_six(&matrix)?;
        check_symmetric(&matrix)?;
        let matrix = matrix.symmetrized();
        let residual = star_trace(&matrix).abs();
        let allowed = BIANCHI_TOL * matrix.frobenius_norm();
        if residual > allowed {
            return Err(ExteriorError::NotBianchi { residual, allowed });
        }
        Ok(Self { matrix })
    }

    /// Operator given in the self-dual/anti-self-dual basis.
    pub fn from_sdasd(matrix: &RealMatrix) -> Result<Self, ExteriorError> {
        check_six(matrix)?;
        let p = change_of_basis_sdasd();
        Self::new(&(&p * matrix) * &p.transpose())
    }

    /// Orthogonal projection of a symmetric matrix onto the Bianchi subspace:
    /// `S − (tr(★S)/6)·★`.
    pub fn bianchi_projection(s: &RealMatrix) -> Result<Self, ExteriorError> {
        check_six(s)?;
        check_symmetric(s)?;
        let s = s.symmetrized();
        let c = star_trace(&s) / 6.0;
        let projected = &s - &hodge_star().scale(c);
        Self::new(projected)
    }

    pub fn zero() -> Self {
        Self { matrix: RealMatrix::zeros(6, 6) }
    }

    pub fn identity() -> Self {
        Self { matrix: RealMatrix::identity(6) }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.matrix
    }

    /// Matrix in the self-dual/anti-self-dual basis.
    pub fn to_sdasd(&self) -> RealMatrix {
        let p = change_of_basis_sdasd();
        &(&p.transpose() * &self.matrix) * &p
    }

    /// The same operator read with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let d = orientation_flip();
        Self { matrix: &(&d * &self.matrix) * &d }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { matrix: self.matrix.scale(s) }
    }

    /// `|tr(★R)|`.
    pub fn bianchi_residual(&self) -> f64 {
        star_trace(&self.matrix).abs()
    }

    /// Spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        crate::smallmat::spectral_norm_sym(&self.matrix).expect("stored matrix is symmetric")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    /// `R + τ★`.
    pub fn shifted(&self, tau: f64) -> RealMatrix {
        &self.matrix + &hodge_star().scale(tau)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.min_eigenvalue().expect("stored matrix is symmetric")
    }

    pub fn apply(&self, omega: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(omega)
    }

    /// `Ric(x, y) = Σᵢ ⟨R(eᵢ∧x), eᵢ∧y⟩`.
    pub fn ricci(&self) -> RealMatrix {
        let mut ric = RealMatrix::zeros(4, 4);
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for i in 0..4 {
                    if let (Some((p, sp)), Some((q, sq))) = (basis_index(i, a), basis_index(i, b)) {
                        s += sp * sq * self.matrix[(p, q)];
                    }
                }
                ric[(a, b)] = s;
            }
        }
        ric
    }

    /// `scal = 2 tr R`.
    pub fn scal(&self) -> f64 {
        2.0 * self.matrix.trace()
    }

    /// `sec(σ) = ⟨Rσ, σ⟩`.
    pub fn sec(&self, plane: &Plane) -> f64 {
        self.matrix.quadratic_form(&plane.sigma)
    }
}

/// An oriented 2-plane `σ = α + β` with `α ∈ Λ⁺`, `β ∈ Λ⁻`, both of norm `1/√2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    alpha: [f64; 3],
    beta: [f64; 3],
    sigma: [f64; 6],
}

impl Plane {
    /// From self-dual and anti-self-dual directions (normalized internally).
    ///
    /// # Panics
    /// If either direction is zero.
    pub fn from_sd_asd(alpha: [f64; 3], beta: [f64; 3]) -> Self {
        let na = norm(&alpha);
        let nb = norm(&beta);
        assert!(na > 0.0 && nb > 0.0, "plane components must be nonzero");
        let alpha = alpha.map(|x| x / na);
        let beta = beta.map(|x| x / nb);
        let mut coords = [0.0; 6];
        coords[..3].copy_from_slice(&alpha);
        coords[3..].copy_from_slice(&beta);
        let sigma = change_of_basis_sdasd().mul_vec(&coords).iter().map(|x| x * FRAC_1_SQRT_2).collect::<Vec<_>>();
        Self { alpha, beta, sigma: sigma.try_into().unwrap() }
    }

    /// The plane spanned by `x, y`, oriented by the pair.
    pub fn from_vectors(x: &[f64], y: &[f64]) -> Result<Self, ExteriorError> {
        let w = wedge_vectors(x, y);
        let n = norm(&w);
        if n == 0.0 {
            return Err(ExteriorError::NotDecomposable { residual: 1.0 });
        }
        Self::from_two_vector(&w.map(|c| c / n))
    }

    /// Validates a two-vector given in `K`: it must be a unit vector on the
    /// Plücker quadric `⟨★σ,σ⟩ = 0`.
    pub fn from_two_vector(sigma: &[f64]) -> Result<Self, ExteriorError> {
        let star = hodge_star();
        let residual = star.quadratic_form(sigma).abs().max((dot(sigma, sigma) - 1.0).abs());
        if sigma.len() != 6 || residual > DECOMPOSABLE_TOL {
            return Err(ExteriorError::NotDecomposable { residual });
        }
        let coords = change_of_basis_sdasd().transpose().mul_vec(sigma);
        let alpha = [coords[0], coords[1], coords[2]];
        let beta = [coords[3], coords[4], coords[5]];
        Ok(Self::from_sd_asd(alpha, beta))
    }

    /// Unit self-dual direction.
    pub fn alpha(&self) -> [f64; 3] {
        self.alpha
    }

    /// Unit anti-self-dual direction.
    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    /// Coordinates of `σ` in `K`.
    pub fn two_vector(&self) -> [f64; 6] {
        self.sigma
    }

    /// An orthonormal pair `(x, y)` with `x∧y = σ`.
    pub fn spanning_vectors(&self) -> ([f64; 4], [f64; 4]) {
        // σ kills the plane's complement and rotates the plane by a quarter turn.
        let m = two_vector_endomorphism(&self.sigma);
        let mut best = [0.0; 4];
        let mut best_norm = -1.0;
        for k in 0..4 {
            let mut e = [0.0; 4];
            e[k] = 1.0;
            let img = m.mul_vec(&e);
            let n = norm(&img);
            if n > best_norm {
                best_norm = n;
                best = [img[0] / n, img[1] / n, img[2] / n, img[3] / n];
            }
        }
        let y = m.mul_vec(&best);
        let ny = norm(&y);
        let y = [y[0] / ny, y[1] / ny, y[2] / ny, y[3] / ny];
        (best, y)
    }
}

/// Minimum (or maximum) of `sec` located by a grid scan plus local polishing.
#[derive(Clone, Debug)]
pub struct SecExtremum {
    pub value: f64,
    pub plane: Plane,
    /// Best value on the raw grid before polishing.
    pub grid_value: f64,
}

/// `n` nearly uniform points on the unit 2-sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let th = golden * i as f64;
            [r * th.cos(), r * th.sin(), z]
        })
        .collect()
}

/// Blocks of a 6×6 matrix in the SD/ASD basis: `[[A, B], [Bᵀ, C]]`.
struct SdAsdForm {
    a: [[f64; 3]; 3],
    b: [[f64; 3]; 3],
    c: [[f64; 3]; 3],
}

impl SdAsdForm {
    fn new(r: &RealMatrix) -> Self {
        let p = change_of_basis_sdasd();
        let m = &(&p.transpose() * r) * &p;
        let mut f = Self { a: [[0.0; 3]; 3], b: [[0.0; 3]; 3], c: [[0.0; 3]; 3] };
        for i in 0..3 {
            for j in 0..3 {
                f.a[i][j] = m[(i, j)];
                f.b[i][j] = m[(i, j + 3)];
                f.c[i][j] = m[(i + 3, j + 3)];
            }
        }
        f
    }

    fn value(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += x[i] * self.a[i][j] * x[j] + 2.0 * x[i] * self.b[i][j] * y[j] + y[i] * self.c[i][j] * y[j];
            }
        }
        0.5 * s
    }

    fn gradient(&self, x: &[f64; 3], y: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
        let mut gx = [0.0; 3];
        let mut gy = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                gx[i] += self.a[i][j] * x[j] + self.b[i][j] * y[j];
                gy[i] += self.c[i][j] * y[j] + self.b[j][i] * x[j];
            }
        }
        (gx, gy)
    }
}

fn tangent(g: [f64; 3], p: &[f64; 3]) -> [f64; 3] {
    let c = dot(&g, p);
    [g[0] - c * p[0], g[1] - c * p[1], g[2] - c * p[2]]
}

fn retract(p: &[f64; 3], d: &[f64; 3], t: f64) -> [f64; 3] {
    let q = [p[0] - t * d[0], p[1] - t * d[1], p[2] - t * d[2]];
    let n = norm(&q);
    q.map(|v| v / n)
}

/// Riemannian gradient descent on S²×S² with Armijo backtracking.
fn polish(form: &SdAsdForm, mut x: [f64; 3], mut y: [f64; 3]) -> (f64, [f64; 3], [f64; 3]) {
    let mut f = form.value(&x, &y);
    let mut step: f64 = 1.0;
    for _ in 0..500 {
        let (gx, gy) = form.gradient(&x, &y);
        let dx = tangent(gx, &x);
        let dy = tangent(gy, &y);
        let g2 = dot(&dx, &dx) + dot(&dy, &dy);
        if g2.sqrt() <= 1e-15 * (1.0 + f.abs()) {
            break;
        }
        step = (step * 2.0).min(4.0);
        let mut accepted = false;
        while step > 1e-14 {
            let nx = retract(&x, &dx, step);
            let ny = retract(&y, &dy, step);
            let nf = form.value(&nx, &ny);
            if nf <= f - 1e-4 * step * g2 {
                // Overlong steps can bounce across a minimum; shorten while that helps.
                let (mut bx, mut by, mut bf) = (nx, ny, nf);
                while step > 1e-14 {
                    let hx = retract(&x, &dx, 0.5 * step);
                    let hy = retract(&y, &dy, 0.5 * step);
                    let hf = form.value(&hx, &hy);
                    if hf >= bf {
                        break;
                    }
                    (bx, by, bf) = (hx, hy, hf);
                    step *= 0.5;
                }
                x = bx;
                y = by;
                f = bf;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, x, y)
}

/// Minimum of `sec_R` over a Fibonacci product grid of `density²` planes,
/// refined by local descent from the best few grid points.
///
/// # Panics
/// If `density < 8`.
pub fn sec_min_bruteforce(r: &RealMatrix, density: usize) -> SecExtremum {
    assert!(density >= 8, "grid density must be at least 8");
    let form = SdAsdForm::new(r);
    let pts = fibonacci_sphere(density);
    let cy: Vec<f64> = pts
        .iter()
        .map(|y| (0..3).map(|i| (0..3).map(|j| y[i] * form.c[i][j] * y[j]).sum::<f64>()).sum())
        .collect();

    const KEEP: usize = 4;
    let mut best: Vec<(f64, usize, usize)> = Vec::with_capacity(KEEP + 1);
    for (ix, x) in pts.iter().enumerate() {
        let mut ax = 0.0;
        let mut bx = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                ax += x[i] * form.a[i][j] * x[j];
                bx[j] += x[i] * form.b[i][j];
            }
        }
        for (iy, y) in pts.iter().enumerate() {
            let v = 0.5 * (ax + 2.0 * dot(&bx, y) + cy[iy]);
            if best.len() < KEEP || v < best[best.len() - 1].0 {
                let pos = best.partition_point(|e| e.0 <= v);
                best.insert(pos, (v, ix, iy));
                best.truncate(KEEP);
            }
        }
    }

    let grid_value = best[0].0;
    let mut winner = (grid_value, pts[best[0].1], pts[best[0].2]);
    for &(_, ix, iy) in &best {
        let (f, x, y) = polish(&form, pts[ix], pts[iy]);
        if f < winner.0 {
            winner = (f, x, y);
        }
    }
    let plane = Plane::from_sd_asd(winner.1, winner.2);
    SecExtremum { value: winner.0.min(grid_value), plane, grid_value }
}

/// Maximum of `sec_R`, as `−min(sec_{−R})`.
pub fn sec_max_bruteforce(r: &RealMatrix, density: usize) -> SecExtremum {
    let m = sec_min_bruteforce(&r.scale(-1.0), density);
    SecExtremum { value: -m.value, plane: m.plane, grid_value: -m.grid_value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    fn fs() -> CurvatureOperator {
        CurvatureOperator::from_sdasd(&RealMatrix::from_diag(&[0.0, 0.0, 6.0, 2.0, 2.0, 2.0])).unwrap()
    }

    #[test]
    fn wedge2_identity_and_diagonal() {
        assert!(approx(&wedge2(&RealMatrix::identity(4)), &RealMatrix::identity(6), 0.0));
        let lam = [2.0, 3.0, 5.0, 7.0];
        let w = wedge2(&RealMatrix::from_diag(&lam));
        for (k, &(a, b)) in K_PAIRS.iter().enumerate() {
            assert_eq!(w[(k, k)], lam[a] * lam[b]);
        }
    }

    #[test]
    fn wedge2_matches_wedge_of_images() {
        let l = RealMatrix::from_fn(4, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * i as f64);
        let w = wedge2(&l);
        for (k, &(a, b)) in K_PAIRS.iter().enumerate() {
            let img = wedge_vectors(&l.column(a), &l.column(b));
            for m in 0..6 {
                assert!((w[(m, k)] - img[m]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn nonincreasing_examples() {
        assert!(is_nonincreasing(&RealMatrix::identity(4).scale(0.5)));
        let d = RealMatrix::from_diag(&[2.0, 0.4, 0.4, 0.4]);
        assert!(!is_nonincreasing(&d));
        assert!(is_nonincreasing(&wedge2(&d)));
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = RealMatrix::from_rows(&[
            [c, -s, 0.0, 0.0],
            [s, c, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(is_nonincreasing(&rot));
    }

    #[test]
    fn star_structure() {
        let star = hodge_star();
        assert!(approx(&(&star * &star), &RealMatrix::identity(6), 0.0));
        for p in 0..3 {
            assert_eq!(star[(2 * p, 2 * p + 1)], 1.0);
            assert_eq!(star[(2 * p + 1, 2 * p)], 1.0);
        }
        let p = change_of_basis_sdasd();
        assert!(approx(&(&p.transpose() * &p), &RealMatrix::identity(6), 1e-15));
        let conj = &(&p.transpose() * &star) * &p;
        let expect = RealMatrix::from_diag(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
        assert!(approx(&conj, &expect, 1e-15));
    }

    #[test]
    fn star_matches_volume_form() {
        // ⟨★α, β⟩ vol = α∧β, checked on basis pairs via 4-permutation signs.
        let star = hodge_star();
        for (i, &(a, b)) in K_PAIRS.iter().enumerate() {
            for (j, &(c, d)) in K_PAIRS.iter().enumerate() {
                let idx = [a, b, c, d];
                let mut sorted = idx;
                sorted.sort();
                let wedge = if sorted == [0, 1, 2, 3] { permutation_sign(&idx) } else { 0.0 };
                assert_eq!(star[(i, j)], wedge, "pair {i},{j}");
            }
        }
    }

    fn permutation_sign(p: &[usize; 4]) -> f64 {
        let mut s = 1.0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    }

    #[test]
    fn reversal_negates_star() {
        let d = orientation_flip();
        let conj = &(&d * &hodge_star()) * &d;
        assert!(approx(&conj, &hodge_star().scale(-1.0), 0.0));
    }

    #[test]
    fn bianchi_rejection_and_projection() {
        let err = CurvatureOperator::new(hodge_star()).unwrap_err();
        assert!(matches!(err, ExteriorError::NotBianchi { .. }));
        let s = RealMatrix::from_fn(6, 6, |i, j| ((i + j) % 4) as f64 + if i == j { 1.0 } else { 0.0 });
        let r = CurvatureOperator::bianchi_projection(&s).unwrap();
        assert!(r.bianchi_residual() <= 1e-14);
    }

    #[test]
    fn sec_identity_is_one() {
        let r = CurvatureOperator::identity();
        let p = Plane::from_sd_asd([1.0, 2.0, 3.0], [-1.0, 0.5, 0.0]);
        assert!((r.sec(&p) - 1.0).abs() < 1e-15);
        let m = sec_min_bruteforce(r.matrix(), 16);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_sec_values() {
        let r = CurvatureOperator::new(RealMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        let e = |k: usize| {
            let mut v = [0.0; 4];
            v[k] = 1.0;
            v
        };
        assert!((r.sec(&Plane::from_vectors(&e(0), &e(1)).unwrap()) - 1.0).abs() < 1e-15);
        assert!(r.sec(&Plane::from_vectors(&e(0), &e(2)).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_nondecomposable() {
        let mut s = [0.0; 6];
        s[0] = FRAC_1_SQRT_2;
        s[1] = FRAC_1_SQRT_2;
        assert!(matches!(Plane::from_two_vector(&s), Err(ExteriorError::NotDecomposable { .. })));
    }

    #[test]
    fn plane_invariants() {
        let p = Plane::from_sd_asd([0.3, -1.0, 2.0], [1.0, 1.0, 1.0]);
        let s = p.two_vector();
        assert!(hodge_star().quadratic_form(&s).abs() < 1e-15);
        assert!((norm(&s) - 1.0).abs() < 1e-15);
        let (x, y) = p.spanning_vectors();
        let w = wedge_vectors(&x, &y);
        for k in 0..6 {
            assert!((w[k] - s[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn ricci_examples() {
        let r = CurvatureOperator::identity();
        assert!(approx(&r.ricci(), &RealMatrix::identity(4).scale(3.0), 1e-15));
        assert_eq!(r.scal(), 12.0);
        let z = CurvatureOperator::zero();
        assert_eq!(z.ricci().frobenius_norm(), 0.0);
        assert_eq!(z.scal(), 0.0);
        let f = fs();
        assert!((f.ricci().trace() - f.scal()).abs() < 1e-12);
        assert!(approx(&f.ricci(), &RealMatrix::identity(4).scale(6.0), 1e-12));
    }

    #[test]
    fn fubini_study_sec_range() {
        let f = fs();
        let lo = sec_min_bruteforce(f.matrix(), 40);
        let hi = sec_max_bruteforce(f.matrix(), 40);
        assert!((lo.value - 1.0).abs() < 1e-9, "{}", lo.value);
        assert!((hi.value - 4.0).abs() < 1e-9, "{}", hi.value);
        assert!((f.sec(&lo.plane) - lo.value).abs() < 1e-12);
    }

    #[test]
    fn detects_negative_sec() {
        let r = RealMatrix::from_diag(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let m = sec_min_bruteforce(&r, 20);
        assert!(m.value < -0.5);
        let r = CurvatureOperator::new(r).unwrap();
        assert!(r.sec(&m.plane) < -0.5);
    }
}
