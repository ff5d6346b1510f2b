//! A fixed matrix model of `Cl(ℝ⁴) ⊗ ℂ` acting on `S = ℂ⁴`.
//!
//! Generators (with `eᵢ² = −1`) are built from Pauli matrices,
//! `e₁ = iσ₁⊗σ₀, e₂ = iσ₂⊗σ₀, e₃ = iσ₃⊗σ₁, e₄ = iσ₃⊗σ₂`, and then
//! conjugated by the permutation `(0,3,1,2)` of the standard basis. In the
//! resulting basis the complex volume element `ω = −e₁e₂e₃e₄` is
//! `diag(1,1,−1,−1)`, so `S⁺` is spanned by the first two basis vectors.
//!
//! On `S(W)⊗S(V)` the `W` factor is the outer (slow) index: basis vector
//! `4w + v` corresponds to `s_w ⊗ s_v`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::exterior::K_PAIRS;
use crate::smallmat::CMatrix;

const PERM: [usize; 4] = [0, 3, 1, 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(k: usize) -> CMatrix {
    let z = c(0.0, 0.0);
    let rows = match k {
        0 => [[c(1.0, 0.0), z], [z, c(1.0, 0.0)]],
        1 => [[z, c(1.0, 0.0)], [c(1.0, 0.0), z]],
        2 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        3 => [[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]],
        _ => unreachable!(),
    };
    CMatrix::from_fn(2, 2, |i, j| rows[i][j])
}

/// Chirality of a spinor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    /// Basis indices of `S^±` in the adapted basis.
    pub fn indices(self) -> [usize; 2] {
        match self {
            Chirality::Plus => [0, 1],
            Chirality::Minus => [2, 3],
        }
    }
}

/// One of the four summands `S^±(W) ⊗ S^±(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sector {
    pub w: Chirality,
    pub v: Chirality,
}

impl Sector {
    pub const PLUS_PLUS: Sector = Sector { w: Chirality::Plus, v: Chirality::Plus };
    pub const PLUS_MINUS: Sector = Sector { w: Chirality::Plus, v: Chirality::Minus };
    pub const MINUS_PLUS: Sector = Sector { w: Chirality::Minus, v: Chirality::Plus };
    pub const MINUS_MINUS: Sector = Sector { w: Chirality::Minus, v: Chirality::Minus };
    pub const ALL: [Sector; 4] = [Self::PLUS_PLUS, Self::PLUS_MINUS, Self::MINUS_PLUS, Self::MINUS_MINUS];

    /// Indices of this sector inside the 16-dimensional tensor product.
    pub fn indices(self) -> [usize; 4] {
        let w = self.w.indices();
        let v = self.v.indices();
        [4 * w[0] + v[0], 4 * w[0] + v[1], 4 * w[1] + v[0], 4 * w[1] + v[1]]
    }
}

/// Clifford generators, volume element and chirality projectors.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub generators: [CMatrix; 4],
    pub omega: CMatrix,
    pub proj_plus: CMatrix,
    pub proj_minus: CMatrix,
}

impl CliffordRep {
    fn build() -> Self {
        let i = c(0.0, 1.0);
        let raw = [
            pauli(1).kron(&pauli(0)).scale(i),
            pauli(2).kron(&pauli(0)).scale(i),
            pauli(3).kron(&pauli(1)).scale(i),
            pauli(3).kron(&pauli(2)).scale(i),
        ];
        let generators = raw.map(|g| CMatrix::from_fn(4, 4, |a, b| g[(PERM[a], PERM[b])]));
        let prod = &(&(&generators[0] * &generators[1]) * &generators[2]) * &generators[3];
        let omega = prod.scale_real(-1.0);
        let id = CMatrix::identity(4);
        let proj_plus = (&id + &omega).scale_real(0.5);
        let proj_minus = (&id - &omega).scale_real(0.5);
        Self { generators, omega, proj_plus, proj_minus }
    }

    /// The shared instance.
    pub fn standard() -> &'static CliffordRep {
        static REP: OnceLock<CliffordRep> = OnceLock::new();
        REP.get_or_init(Self::build)
    }

    /// Clifford multiplication by `v = Σ vᵢeᵢ`.
    pub fn gamma(&self, v: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for (k, &x) in v.iter().enumerate().take(4) {
            if x != 0.0 {
                m += &self.generators[k].scale_real(x);
            }
        }
        m
    }

    /// `Ξ₀⁻¹` on a two-vector in the basis `K`: `eₐ∧e_b ↦ ½eₐe_b`.
    pub fn xi0_inv(&self, alpha: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for (k, &(a, b)) in K_PAIRS.iter().enumerate() {
            if alpha[k] != 0.0 {
                m += &(&self.generators[a] * &self.generators[b]).scale_real(0.5 * alpha[k]);
            }
        }
        m
    }
}

/// `gamma` on the standard representation.
pub fn gamma(v: &[f64]) -> CMatrix {
    CliffordRep::standard().gamma(v)
}

/// `Ξ₀⁻¹` on the standard representation.
pub fn xi0_inv(alpha: &[f64]) -> CMatrix {
    CliffordRep::standard().xi0_inv(alpha)
}

/// Chirality blocks `[[++, +−], [−+, −−]]` of an endomorphism of `S`.
#[derive(Clone, Debug)]
pub struct SpinorBlocks {
    pub blocks: [[CMatrix; 2]; 2],
}

impl SpinorBlocks {
    pub fn diagonal(&self, c: Chirality) -> &CMatrix {
        let k = (c == Chirality::Minus) as usize;
        &self.blocks[k][k]
    }

    /// Frobenius norm of the chirality-changing part.
    pub fn off_diagonal_norm(&self) -> f64 {
        self.blocks[0][1].frobenius_norm().hypot(self.blocks[1][0].frobenius_norm())
    }

    pub fn diagonal_norm(&self) -> f64 {
        self.blocks[0][0].frobenius_norm().hypot(self.blocks[1][1].frobenius_norm())
    }
}

/// Splits a 4×4 endomorphism of `S` by chirality.
pub fn chirality_blocks(m: &CMatrix) -> SpinorBlocks {
    assert_eq!((m.rows(), m.cols()), (4, 4));
    let p = Chirality::Plus.indices();
    let q = Chirality::Minus.indices();
    SpinorBlocks {
        blocks: [[m.block(&p, &p), m.block(&p, &q)], [m.block(&q, &p), m.block(&q, &q)]],
    }
}

/// Blocks of a 16×16 endomorphism of `S(W)⊗S(V)` between the four sectors,
/// indexed in the order of [`Sector::ALL`].
#[derive(Clone, Debug)]
pub struct TensorBlocks {
    pub blocks: Vec<Vec<CMatrix>>,
}

impl TensorBlocks {
    pub fn diagonal(&self, s: Sector) -> &CMatrix {
        let k = Sector::ALL.iter().position(|&t| t == s).unwrap();
        &self.blocks[k][k]
    }

    /// Frobenius norm of all blocks mixing different sectors.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    s += self.blocks[i][j].frobenius_norm().powi(2);
                }
            }
        }
        s.sqrt()
    }
}

/// Splits a 16×16 endomorphism of `S(W)⊗S(V)` by sector.
pub fn tensor_chirality_blocks(m: &CMatrix) -> TensorBlocks {
    assert_eq!((m.rows(), m.cols()), (16, 16));
    let blocks = Sector::ALL
        .iter()
        .map(|r| Sector::ALL.iter().map(|c| m.block(&r.indices(), &c.indices())).collect())
        .collect();
    TensorBlocks { blocks }
}
