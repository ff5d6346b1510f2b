//! Index formulas and competitor-class predicates in exact rational arithmetic.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("degree must be nonzero")]
    ZeroDegree,
    #[error("Betti number {name} must be nonnegative, got {value}")]
    NegativeBetti { name: &'static str, value: i64 },
    #[error("missing field {0}")]
    Missing(&'static str),
}

/// Topological input: Euler characteristic and signatures, the degree of the
/// competitor map and optional Betti numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TopologyData {
    pub euler_m: i64,
    pub sigma_m: i64,
    pub sigma_n: i64,
    pub deg: i64,
    /// `b₀(∂M)`.
    pub b0_boundary: Option<i64>,
    /// `b₂(∂M)`.
    pub b2_boundary: Option<i64>,
    /// `b₂(M)`.
    pub b2_m: Option<i64>,
}

impl TopologyData {
    pub fn closed(euler_m: i64, sigma_m: i64, sigma_n: i64, deg: i64) -> Self {
        Self { euler_m, sigma_m, sigma_n, deg, ..Self::default() }
    }

    pub fn with_boundary(mut self, b0: i64, b2: i64) -> Self {
        self.b0_boundary = Some(b0);
        self.b2_boundary = Some(b2);
        self
    }

    pub fn with_b2(mut self, b2: i64) -> Self {
        self.b2_m = Some(b2);
        self
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        if self.deg == 0 {
            return Err(TopologyError::ZeroDegree);
        }
        for (name, v) in [("b0dM", self.b0_boundary), ("b2dM", self.b2_boundary), ("b2M", self.b2_m)] {
            if let Some(value) = v {
                if value < 0 {
                    return Err(TopologyError::NegativeBetti { name, value });
                }
            }
        }
        Ok(())
    }

    fn boundary_bettis(&self) -> Result<(i64, i64), TopologyError> {
        let b0 = self.b0_boundary.ok_or(TopologyError::Missing("b0dM"))?;
        let b2 = self.b2_boundary.ok_or(TopologyError::Missing("b2dM"))?;
        Ok((b0, b2))
    }
}

/// An index value; non-integers point at inconsistent input data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexValue {
    pub value: Rational,
}

impl IndexValue {
    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn warning(&self) -> Option<String> {
        (!self.is_integer()).then(|| {
            format!("index {} is not an integer; check the signature convention of the input", self.value)
        })
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `−σ(N)/4 + deg·(3σ(M)/4 + χ(M)/2)`.
pub fn index_closed(t: &TopologyData) -> Result<IndexValue, TopologyError> {
    t.validate()?;
    let value = -r(t.sigma_n) / 4 + r(t.deg) * (r(3 * t.sigma_m) / 4 + r(t.euler_m) / 2);
    Ok(IndexValue { value })
}

/// `¼(−σ(N) + 2χ(M) + 3σ(M) + 2b₀(∂M) + 2b₂(∂M))`.
pub fn index_boundary(t: &TopologyData) -> Result<IndexValue, TopologyError> {
    t.validate()?;
    let (b0, b2) = t.boundary_bettis()?;
    let value = r(-t.sigma_n + 2 * t.euler_m + 3 * t.sigma_m + 2 * b0 + 2 * b2) / 4;
    Ok(IndexValue { value })
}

/// `2χ(M) + 3σ(M) > σ(N)/deg`.
pub fn in_c0(t: &TopologyData) -> Result<bool, TopologyError> {
    t.validate()?;
    Ok(r(2 * t.euler_m + 3 * t.sigma_m) > Rational::new(t.sigma_n, t.deg))
}

/// `4 + (1/deg − 1)·b₂(M) > 0`.
pub fn in_c0_self(t: &TopologyData) -> Result<bool, TopologyError> {
    t.validate()?;
    let b2 = t.b2_m.ok_or(TopologyError::Missing("b2M"))?;
    Ok(r(4) + (Rational::new(1, t.deg) - r(1)) * r(b2) > Rational::zero())
}

fn boundary_sum(t: &TopologyData) -> Result<i64, TopologyError> {
    let (b0, b2) = t.boundary_bettis()?;
    Ok(2 * t.euler_m + 3 * t.sigma_m + 2 * b0 + 2 * b2)
}

/// `2χ(M) + 3σ(M) + 2b₀(∂M) + 2b₂(∂M) > σ(N)`.
pub fn in_c_boundary(t: &TopologyData) -> Result<bool, TopologyError> {
    t.validate()?;
    Ok(boundary_sum(t)? > t.sigma_n)
}

/// The boundary sum equals 4 and `|σ(N)| < 4`.
pub fn in_c_loc(t: &TopologyData) -> Result<bool, TopologyError> {
    t.validate()?;
    Ok(boundary_sum(t)? == 4 && t.sigma_n.abs() < 4)
}

/// Membership in each class, or the reason it cannot be decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub c0: Result<bool, TopologyError>,
    pub c0_self: Result<bool, TopologyError>,
    pub c_boundary: Result<bool, TopologyError>,
    pub c_loc: Result<bool, TopologyError>,
}

pub fn class_predicates(t: &TopologyData) -> ClassReport {
    ClassReport { c0: in_c0(t), c0_self: in_c0_self(t), c_boundary: in_c_boundary(t), c_loc: in_c_loc(t) }
}

/// `2χ + 3σ − σ(N)` for a self-map of degree one of a simply-connected closed
/// manifold with `b₊, b₋`; equals `4 + 4b₊`.
pub fn simply_connected_sum(b_plus: i64, b_minus: i64) -> i64 {
    let chi = 2 + b_plus + b_minus;
    let sigma = b_plus - b_minus;
    2 * chi + 3 * sigma - sigma
}
