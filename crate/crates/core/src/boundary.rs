//! Boundary terms: the operator `Q` built from a second fundamental form and
//! the endomorphism `A = −½H_N − 𝓡(Q, L′)` on the boundary spinors.

use thiserror::Error;

use crate::clifford::Sector;
use crate::exterior::{wedge_vectors, CurvatureOperator, ExteriorError};
use crate::smallmat::{dot, CMatrix, LinalgError, RealMatrix, SelfAdjoint};
use crate::weitzenbock::{build_r_endo, build_t_endo, SpinorEndo, WeitzError, EndoKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Weitz(#[from] WeitzError),
    #[error("second fundamental form must be 3x3, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("boundary frame is not orthonormal (defect {defect:.3e})")]
    Frame { defect: f64 },
    #[error("second fundamental form is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})")]
    Indefinite { min_eigenvalue: f64 },
}

/// Second fundamental form of `∂M` (inward normal), an orthonormal frame
/// `(ν̃, f₂, f₃, f₄)` adapted to the boundary, and the mean curvature of the
/// competitor's boundary.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    ii: RealMatrix,
    frame: RealMatrix,
    mean_curvature_n: f64,
}

impl BoundaryData {
    /// Standard frame: `ν̃ = −e₁` and `fᵢ = eᵢ`.
    pub fn new(ii: RealMatrix, mean_curvature_n: f64) -> Result<Self, BoundaryError> {
        Self::with_rotation(ii, mean_curvature_n, &RealMatrix::identity(4))
    }

    /// Frame obtained by applying the rotation `q` to the standard one.
    pub fn with_rotation(ii: RealMatrix, mean_curvature_n: f64, q: &RealMatrix) -> Result<Self, BoundaryError> {
        if ii.rows() != 3 || ii.cols() != 3 {
            return Err(BoundaryError::Shape { rows: ii.rows(), cols: ii.cols() });
        }
        let allowed = crate::smallmat::SYMMETRY_TOL * ii.frobenius_norm();
        if ii.asymmetry() > allowed {
            return Err(LinalgError::NotSelfAdjoint { asymmetry: ii.asymmetry(), allowed }.into());
        }
        let mut frame = q.clone();
        for i in 0..4 {
            frame[(i, 0)] = -q[(i, 0)];
        }
        let defect = (&(&frame.transpose() * &frame) - &RealMatrix::identity(4)).frobenius_norm();
        if defect > 1e-12 {
            return Err(BoundaryError::Frame { defect });
        }
        Ok(Self { ii: ii.symmetrized(), frame, mean_curvature_n })
    }

    pub fn second_fundamental_form(&self) -> &RealMatrix {
        &self.ii
    }

    pub fn mean_curvature_n(&self) -> f64 {
        self.mean_curvature_n
    }

    /// `H_M = tr II`.
    pub fn mean_curvature_m(&self) -> f64 {
        self.ii.trace()
    }

    /// Unit normal `ν̃`.
    pub fn normal(&self) -> Vec<f64> {
        self.frame.column(0)
    }

    /// Boundary frame vector `f_{i+2}` for `i ∈ {0,1,2}`.
    pub fn tangent(&self, i: usize) -> Vec<f64> {
        self.frame.column(i + 1)
    }

    /// The isometric extension `l′` with `l′(eᵢ) = fᵢ` and `l′(ν) = ν̃`, `ν = −e₁`.
    pub fn boundary_map(&self) -> RealMatrix {
        let mut l = self.frame.clone();
        for i in 0..4 {
            l[(i, 0)] = -self.frame[(i, 0)];
        }
        l
    }
}

/// `Q = Σ IIᵢⱼ (ν̃∧fᵢ)(ν̃∧fⱼ)ᵀ`.
pub fn build_q(bd: &BoundaryData) -> Result<CurvatureOperator, BoundaryError> {
    let nu = bd.normal();
    let planes: Vec<[f64; 6]> = (0..3).map(|i| wedge_vectors(&nu, &bd.tangent(i))).collect();
    let q = RealMatrix::from_fn(6, 6, |a, b| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += bd.ii[(i, j)] * planes[i][a] * planes[j][b];
            }
        }
        s
    });
    Ok(CurvatureOperator::new(q)?)
}

/// `A = −½H_N·Id − 𝓡(Q, L′)`.
pub fn build_a_endo(bd: &BoundaryData) -> Result<SpinorEndo, BoundaryError> {
    let q = build_q(bd)?;
    let r = build_r_endo(&q, &bd.boundary_map())?;
    let m = &CMatrix::identity(16).scale_real(-0.5 * bd.mean_curvature_n) - &r.matrix;
    Ok(SpinorEndo { matrix: m, kind: EndoKind::Other })
}

/// Summary of the boundary estimate at a point.
#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub q_spectrum: Vec<f64>,
    pub trace_q: f64,
    pub trace_ii: f64,
    pub bianchi_residual: f64,
    /// Min eigenvalue of `−A − ½(H_N − H_M)` on `S⁺⊗S⁺`.
    pub bound: f64,
    /// Min eigenvalue of `𝓣(Q, L′)` on `S⁺⊗S⁺`, which the bound should equal.
    pub t_min: f64,
}

/// Evaluates the bound without requiring `II ⪰ 0`.
pub fn mean_curvature_bound_unchecked(bd: &BoundaryData) -> Result<f64, BoundaryError> {
    let a = build_a_endo(bd)?;
    let shift = 0.5 * (bd.mean_curvature_n - bd.mean_curvature_m());
    let m = &(-&a.restrict(Sector::PLUS_PLUS)) - &CMatrix::identity(4).scale_real(shift);
    Ok(m.min_eigenvalue()?)
}

/// Min eigenvalue of `−A − ½(H_N − H_M)` on `S⁺⊗S⁺`; requires `II ⪰ 0`.
pub fn mean_curvature_bound(bd: &BoundaryData) -> Result<f64, BoundaryError> {
    let min_eigenvalue = bd.ii.min_eigenvalue()?;
    if min_eigenvalue < -1e-12 * (1.0 + bd.ii.frobenius_norm()) {
        return Err(BoundaryError::Indefinite { min_eigenvalue });
    }
    mean_curvature_bound_unchecked(bd)
}

pub fn boundary_report(bd: &BoundaryData) -> Result<BoundaryReport, BoundaryError> {
    let q = build_q(bd)?;
    let bound = mean_curvature_bound(bd)?;
    let t_min = build_t_endo(q.matrix(), &bd.boundary_map())?.min_eigenvalue_on(Sector::PLUS_PLUS);
    Ok(BoundaryReport {
        q_spectrum: q.matrix().eigenvalues()?,
        trace_q: q.matrix().trace(),
        trace_ii: bd.ii.trace(),
        bianchi_residual: q.bianchi_residual(),
        bound,
        t_min,
    })
}

/// `Q` vanishes on two-vectors tangent to the boundary.
pub fn tangential_leak(bd: &BoundaryData) -> Result<f64, BoundaryError> {
    let q = build_q(bd)?;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let w = wedge_vectors(&bd.tangent(i), &bd.tangent(j));
            let img = q.apply(&w);
            worst = worst.max(dot(&img, &img).sqrt());
        }
    }
    Ok(worst)
}
