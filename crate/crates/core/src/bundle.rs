//! The co-Higgs bundle data model on `P^1`.
//!
//! A bundle is stored split, as its degree vector `(d_1, ..., d_k)`, together
//! with the Higgs field in the affine chart `z`. Entry `(i, j)` of `phi` is a
//! section of `O(d_i - d_j + 2)`. Sections of `O(d)` change chart by
//! `s(w) = w^d s(1/w)`; the sign of `d/dz = -w^2 d/dw` is dropped, since
//! it changes nothing up to isomorphism.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{GaussQ, PolyMatrix, ScalarMatrix, UniPoly};
use crate::rng::Lcg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("a bundle needs rank at least 1")]
    EmptyRank,
    #[error("phi is {rows}x{cols} but there are {rank} degrees")]
    ShapeMismatch { rows: usize, cols: usize, rank: usize },
    #[error("entry ({row}, {col}) is not holomorphic at infinity")]
    NotHolomorphicAtInfinity { row: usize, col: usize },
    #[error("conjugation requires all splitting degrees equal")]
    UnequalDegrees,
    #[error("conjugating matrix is singular or has the wrong size")]
    BadConjugator,
}

/// `V = O(d_1) + ... + O(d_k)` with Higgs field `phi` in the `z`-chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BundleJson")]
pub struct CoHiggsBundleP1 {
    degrees: Vec<i64>,
    phi: PolyMatrix,
}

#[derive(Deserialize)]
struct BundleJson {
    degrees: Vec<i64>,
    phi: PolyMatrix,
}

impl TryFrom<BundleJson> for CoHiggsBundleP1 {
    type Error = BundleError;
    fn try_from(j: BundleJson) -> Result<Self, BundleError> {
        CoHiggsBundleP1::new(j.degrees, j.phi)
    }
}

/// One entry of `phi` whose degree exceeds what its line bundle allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub degree: i64,
    /// `d_i - d_j + 2`; negative bounds force the entry to vanish.
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl CoHiggsBundleP1 {
    /// Shape-checked constructor; degree bounds are checked by [`Self::validate`].
    pub fn new(degrees: Vec<i64>, phi: PolyMatrix) -> Result<Self, BundleError> {
        if degrees.is_empty() {
            return Err(BundleError::EmptyRank);
        }
        if phi.rows() != degrees.len() || phi.cols() != degrees.len() {
            return Err(BundleError::ShapeMismatch { rows: phi.rows(), cols: phi.cols(), rank: degrees.len() });
        }
        Ok(CoHiggsBundleP1 { degrees, phi })
    }

    pub fn from_int_entries(degrees: Vec<i64>, entries: &[&[&[i64]]]) -> Result<Self, BundleError> {
        let rows = entries.iter().map(|r| r.iter().map(|c| UniPoly::from_ints(c)).collect()).collect();
        let phi = PolyMatrix::from_rows(rows).map_err(|_| BundleError::ShapeMismatch {
            rows: entries.len(),
            cols: 0,
            rank: degrees.len(),
        })?;
        Self::new(degrees, phi)
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    /// The twist `d_i - d_j + 2` of entry `(i, j)`.
    pub fn entry_twist(&self, i: usize, j: usize) -> i64 {
        self.degrees[i] - self.degrees[j] + 2
    }

    pub fn validate(&self) -> ValidationReport {
        let violations: Vec<Violation> = self
            .phi
            .entries()
            .filter_map(|(i, j, p)| {
                let bound = self.entry_twist(i, j);
                let degree = p.degree_i64();
                (!p.is_zero() && degree > bound).then_some(Violation { row: i, col: j, degree, bound })
            })
            .collect();
        ValidationReport { valid: violations.is_empty(), violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    /// `phi~_ij(w) = w^(d_i - d_j + 2) phi_ij(1/w)`.
    pub fn to_infinity_chart(&self) -> Result<PolyMatrix, BundleError> {
        transition(&self.degrees, &self.phi)
    }

    /// Same degree data, Higgs field replaced.
    pub fn with_phi(&self, phi: PolyMatrix) -> Result<Self, BundleError> {
        Self::new(self.degrees.clone(), phi)
    }

    /// `g phi g^-1` for a constant invertible `g`; only an automorphism of
    /// `V` when all degrees agree.
    pub fn conjugate(&self, g: &ScalarMatrix) -> Result<Self, BundleError> {
        if self.degrees.iter().any(|d| *d != self.degrees[0]) {
            return Err(BundleError::UnequalDegrees);
        }
        if g.rows() != self.rank() || g.cols() != self.rank() {
            return Err(BundleError::BadConjugator);
        }
        let ginv = g.inverse().map_err(|_| BundleError::BadConjugator)?;
        let lift = |m: &ScalarMatrix| m.map(|c| UniPoly::constant(c.clone()));
        let phi = lift(g).mul(&self.phi).mul(&lift(&ginv));
        self.with_phi(phi)
    }
}

/// The chart change for an endomorphism-valued section: applying it to a
/// `z`-chart matrix gives the `w`-chart matrix and vice versa.
pub fn transition(degrees: &[i64], phi: &PolyMatrix) -> Result<PolyMatrix, BundleError> {
    let mut out = PolyMatrix::zeros(phi.rows(), phi.cols());
    for (i, j, p) in phi.entries() {
        if p.is_zero() {
            continue;
        }
        let twist = degrees[i] - degrees[j] + 2;
        let q = usize::try_from(twist)
            .ok()
            .and_then(|t| p.reversed(t))
            .ok_or(BundleError::NotHolomorphicAtInfinity { row: i, col: j })?;
        out.set(i, j, q);
    }
    Ok(out)
}

/// `O + T` with `phi(lambda, X) = (X, 0)`: degrees `[0, 2]`, `phi_12 = 1`.
pub fn canonical_o_plus_t() -> CoHiggsBundleP1 {
    CoHiggsBundleP1::from_int_entries(vec![0, 2], &[&[&[], &[1]], &[&[], &[]]]).expect("2x2")
}

/// Trivial rank-`k` bundle whose entries are quadratics with integer
/// coefficients in `[-height, height]`, drawn row-major (constant term first)
/// from [`Lcg`] seeded with `seed`.
pub fn random_trivial_bundle(k: usize, seed: u64, height: u64) -> CoHiggsBundleP1 {
    random_bundle(&vec![0; k], seed, height)
}

/// Random valid Higgs field on the given splitting type: entry `(i, j)` gets
/// `max(d_i - d_j + 3, 0)` coefficients, drawn row-major as in
/// [`random_trivial_bundle`].
pub fn random_bundle(degrees: &[i64], seed: u64, height: u64) -> CoHiggsBundleP1 {
    let k = degrees.len();
    let mut rng = Lcg::new(seed);
    let phi = PolyMatrix::from_fn(k, k, |i, j| {
        let len = (degrees[i] - degrees[j] + 3).max(0) as usize;
        UniPoly::new((0..len).map(|_| GaussQ::from_int(rng.int_in(height))).collect())
    });
    CoHiggsBundleP1::new(degrees.to_vec(), phi).expect("square by construction")
}
