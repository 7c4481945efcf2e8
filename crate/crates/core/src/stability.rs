//! Slope stability.
//!
//! In rank 2 a `phi`-invariant line subbundle `L` carries `phi` as a section
//! of `O(2)`, that is an eigenvalue `y = lambda(z)` of degree at most 2 lying
//! on the spectral curve. So the invariant line subbundles are the eigenlines
//! of the polynomial eigen-sections, and stability is decided by comparing
//! their degrees with the slope. In higher rank only the spectral criterion
//! (reduced and irreducible curve, hence no invariant subsheaves) is used.

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::bundle::CoHiggsBundleP1;
use crate::exactalg::{poly_gcd, poly_sqrt, GaussQ, UniPoly};
use crate::spectral::{char_poly, Irreducibility, SpectralCurve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("operation needs rank 2, got rank {0}")]
    RankNotTwo(usize),
    #[error("lambda is not an eigen-section of phi")]
    NotEigenSection,
    #[error("bundle fails validation")]
    InvalidBundle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Stable,
    Semistable,
    Unstable,
    StableBySpectral,
    Unknown,
}

/// An eigen-section together with the degree of its saturated eigenline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub lambda: UniPoly,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witnesses: Vec<Witness>,
}

/// `(sum d_i) / k`.
pub fn slope(b: &CoHiggsBundleP1) -> BigRational {
    let total: i64 = b.degrees().iter().sum();
    BigRational::new(total.into(), (b.rank() as i64).into())
}

/// Outcome of looking for polynomial eigen-sections of a rank-2 curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenSections {
    /// All eigen-sections, which are `Q(i)`-rational (possibly none).
    Rational(Vec<UniPoly>),
    /// The discriminant is a non-square constant times a square: two
    /// eigen-sections exist over `C` but not over `Q(i)`.
    Irrational,
}

fn classify_eigen_sections(s: &SpectralCurve) -> Result<EigenSections, StabilityError> {
    if s.rank() != 2 {
        return Err(StabilityError::RankNotTwo(s.rank()));
    }
    let a1 = &s.coefficients()[0];
    let disc = s.rank2_discriminant();
    let half = GaussQ::from_ratio(1, 2);
    if let Some(root) = poly_sqrt(&disc) {
        let plus = (&-a1 + &root).scale(&half);
        let minus = (&-a1 - &root).scale(&half);
        let mut out = vec![plus];
        if minus != out[0] {
            out.push(minus);
        }
        return Ok(EigenSections::Rational(out));
    }
    if poly_sqrt(&disc.monic()).is_some() {
        return Ok(EigenSections::Irrational);
    }
    Ok(EigenSections::Rational(Vec::new()))
}

/// Polynomial sections `y = lambda(z)` of a rank-2 spectral curve with
/// coefficients in `Q(i)`. Empty when the discriminant is not a square.
pub fn eigen_sections_rank2(s: &SpectralCurve) -> Result<Vec<UniPoly>, StabilityError> {
    Ok(match classify_eigen_sections(s)? {
        EigenSections::Rational(v) => v,
        EigenSections::Irrational => Vec::new(),
    })
}

/// Degree of the saturated line subbundle `ker(phi - lambda)`.
pub fn invariant_subbundle_degree(b: &CoHiggsBundleP1, lambda: &UniPoly) -> Result<i64, StabilityError> {
    if b.rank() != 2 {
        return Err(StabilityError::RankNotTwo(b.rank()));
    }
    let curve = char_poly(b).map_err(|_| StabilityError::InvalidBundle)?;
    if !curve.polynomial().substitute_y(lambda).is_zero() {
        return Err(StabilityError::NotEigenSection);
    }
    let phi = b.phi();
    let d = b.degrees();
    // Rows of phi - lambda are proportional; either adjugate column spans the kernel.
    let mut v = [phi.get(0, 1).clone(), lambda - phi.get(0, 0)];
    if v.iter().all(UniPoly::is_zero) {
        v = [lambda - phi.get(1, 1), phi.get(1, 0).clone()];
    }
    if v.iter().all(UniPoly::is_zero) {
        // phi = lambda * Id: every line is invariant, the largest is O(max d).
        return Ok(*d.iter().max().expect("rank 2"));
    }
    let g = poly_gcd(&v[0], &v[1]);
    let c = v
        .iter()
        .zip(d)
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, &di)| di - p.div_exact(&g).expect("gcd divides").degree_i64())
        .min()
        .expect("v is nonzero");
    Ok(c)
}

fn verdict_from_witnesses(b: &CoHiggsBundleP1, witnesses: Vec<Witness>) -> StabilityVerdict {
    let mu = slope(b);
    let worst = witnesses.iter().map(|w| BigRational::from_integer(w.degree.into())).max();
    let status = match worst {
        None => StabilityStatus::Stable,
        Some(c) if c > mu => StabilityStatus::Unstable,
        Some(c) if c == mu => StabilityStatus::Semistable,
        Some(_) => StabilityStatus::Stable,
    };
    StabilityVerdict { status, witnesses }
}

/// Exact stability decision in rank 2. Returns `Unknown` only when the
/// eigen-sections exist over `C` but not over `Q(i)`.
pub fn decide_rank2(b: &CoHiggsBundleP1) -> Result<StabilityVerdict, StabilityError> {
    if b.rank() != 2 {
        return Err(StabilityError::RankNotTwo(b.rank()));
    }
    let curve = char_poly(b).map_err(|_| StabilityError::InvalidBundle)?;
    let sections = match classify_eigen_sections(&curve)? {
        EigenSections::Rational(v) => v,
        EigenSections::Irrational => {
            return Ok(StabilityVerdict { status: StabilityStatus::Unknown, witnesses: Vec::new() });
        }
    };
    let witnesses = sections
        .into_iter()
        .map(|lambda| {
            let degree = invariant_subbundle_degree(b, &lambda)?;
            Ok(Witness { lambda, degree })
        })
        .collect::<Result<Vec<_>, StabilityError>>()?;
    Ok(verdict_from_witnesses(b, witnesses))
}

/// Sufficient criterion in any rank: a reduced irreducible spectral curve
/// admits no invariant subsheaves. `false` means inconclusive.
pub fn stable_by_spectral(b: &CoHiggsBundleP1) -> bool {
    let Ok(curve) = char_poly(b) else { return false };
    curve.is_reduced() && curve.is_irreducible() == Ok(Irreducibility::True)
}

/// Rank 1 is always stable, rank 2 is decided exactly, higher rank falls back
/// to the spectral criterion.
pub fn decide(b: &CoHiggsBundleP1) -> Result<StabilityVerdict, StabilityError> {
    match b.rank() {
        1 => {
            char_poly(b).map_err(|_| StabilityError::InvalidBundle)?;
            Ok(StabilityVerdict { status: StabilityStatus::Stable, witnesses: Vec::new() })
        }
        2 => decide_rank2(b),
        _ => {
            char_poly(b).map_err(|_| StabilityError::InvalidBundle)?;
            let status =
                if stable_by_spectral(b) { StabilityStatus::StableBySpectral } else { StabilityStatus::Unknown };
            Ok(StabilityVerdict { status, witnesses: Vec::new() })
        }
    }
}
