//! Hypercohomology of `O(V) --phi--> O(V(2))` on `P^1`, computed in Čech
//! bases for the cover `{z != inf}, {z != 0}`.
//!
//! `H^0(O(d))` has basis `z^0..z^d`. A Čech 1-cochain is a Laurent
//! polynomial on the overlap; modulo coboundaries (exponents `>= 0` from the
//! `z` chart, exponents `<= d` from the `w` chart) `H^1(O(d))` has basis
//! `z^(d+1)..z^(-1)`. The hypercohomology dimensions come from the two
//! induced maps:
//!
//! ```text
//! h0 = ker(H^0 map),  h1 = coker(H^0 map) + ker(H^1 map),  h2 = coker(H^1 map)
//! ```

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bundle::CoHiggsBundleP1;
use crate::exactalg::ScalarMatrix;
use crate::spectral::{char_poly, ZeroSectionIntersection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("bundle fails validation")]
    InvalidBundle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CechKind {
    H0,
    H1,
}

/// Monomial basis of `H^0(O(d))` or `H^1(O(d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CechSpace {
    pub degree: i64,
    pub kind: CechKind,
}

impl CechSpace {
    pub fn h0(degree: i64) -> Self {
        CechSpace { degree, kind: CechKind::H0 }
    }

    pub fn h1(degree: i64) -> Self {
        CechSpace { degree, kind: CechKind::H1 }
    }

    /// Exponents of `z` spanning the space, in increasing order.
    pub fn exponents(&self) -> std::ops::Range<i64> {
        match self.kind {
            CechKind::H0 => 0..(self.degree + 1).max(0),
            CechKind::H1 => (self.degree + 1).min(0)..0,
        }
    }

    pub fn dim(&self) -> usize {
        let r = self.exponents();
        (r.end - r.start) as usize
    }

    /// Position of `z^e` in the basis, if present.
    pub fn index_of(&self, e: i64) -> Option<usize> {
        let r = self.exponents();
        r.contains(&e).then(|| (e - r.start) as usize)
    }
}

fn block_offsets(spaces: &[CechSpace]) -> Vec<usize> {
    let mut out = Vec::with_capacity(spaces.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in spaces {
        acc += s.dim();
        out.push(acc);
    }
    out
}

/// Matrix of multiplication by `phi` from `sum_j source_j` to `sum_i target_i`.
/// Products landing outside a target basis are dropped: for `H^0` this never
/// happens on a valid bundle, for `H^1` it is the quotient by coboundaries.
fn section_map(b: &CoHiggsBundleP1, kind: CechKind) -> Result<ScalarMatrix, CohomologyError> {
    if !b.is_valid() {
        return Err(CohomologyError::InvalidBundle);
    }
    let make = |d: i64| CechSpace { degree: d, kind };
    let src: Vec<CechSpace> = b.degrees().iter().map(|&d| make(d)).collect();
    let dst: Vec<CechSpace> = b.degrees().iter().map(|&d| make(d + 2)).collect();
    let (so, to) = (block_offsets(&src), block_offsets(&dst));
    let mut m = ScalarMatrix::zeros(to[dst.len()], so[src.len()]);
    for (i, j, p) in b.phi().entries() {
        for e in src[j].exponents() {
            let col = so[j] + src[j].index_of(e).expect("in range");
            for (n, c) in p.coeffs().iter().enumerate() {
                if let Some(r) = dst[i].index_of(e + n as i64) {
                    let row = to[i] + r;
                    let v = m.get(row, col) + c;
                    m.set(row, col, v);
                }
            }
        }
    }
    Ok(m)
}

/// `phi` on global sections, `sum H^0(O(d_j)) -> sum H^0(O(d_i + 2))`.
pub fn section_map_h0(b: &CoHiggsBundleP1) -> Result<ScalarMatrix, CohomologyError> {
    section_map(b, CechKind::H0)
}

/// `phi` on `H^1`: multiply, then keep the window `z^(d_i+3)..z^(-1)`.
pub fn section_map_h1(b: &CoHiggsBundleP1) -> Result<ScalarMatrix, CohomologyError> {
    section_map(b, CechKind::H1)
}

/// Section-space dimension of the reduced scheme `S ∩ Z`, or `NA` when the
/// intersection is not transversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroLocusDim {
    Count(usize),
    NotApplicable,
}

impl ZeroLocusDim {
    pub fn count(&self) -> Option<usize> {
        match self {
            ZeroLocusDim::Count(n) => Some(*n),
            ZeroLocusDim::NotApplicable => None,
        }
    }
}

impl fmt::Display for ZeroLocusDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroLocusDim::Count(n) => write!(f, "{n}"),
            ZeroLocusDim::NotApplicable => f.write_str("NA"),
        }
    }
}

impl Serialize for ZeroLocusDim {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ZeroLocusDim::Count(n) => serializer.serialize_u64(*n as u64),
            ZeroLocusDim::NotApplicable => serializer.serialize_str("NA"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypercohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub index: i64,
    pub zero_locus_dim: ZeroLocusDim,
}

impl HypercohomologyReport {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.h0, self.h1, self.h2)
    }
}

pub fn hypercohomology(b: &CoHiggsBundleP1) -> Result<HypercohomologyReport, CohomologyError> {
    let m0 = section_map_h0(b)?;
    let m1 = section_map_h1(b)?;
    let (r0, r1) = (m0.rank(), m1.rank());
    let h0 = m0.cols() - r0;
    let h1 = (m0.rows() - r0) + (m1.cols() - r1);
    let h2 = m1.rows() - r1;
    Ok(HypercohomologyReport {
        h0,
        h1,
        h2,
        index: h0 as i64 - h1 as i64 + h2 as i64,
        zero_locus_dim: zero_locus_section_dim(b)?,
    })
}

/// Number of distinct points of `S ∩ Z` when the intersection is transversal.
pub fn zero_locus_section_dim(b: &CoHiggsBundleP1) -> Result<ZeroLocusDim, CohomologyError> {
    let curve = char_poly(b).map_err(|_| CohomologyError::InvalidBundle)?;
    Ok(match curve.zero_section_intersection() {
        ZeroSectionIntersection::Points(c) if c.transversal => ZeroLocusDim::Count(c.distinct_points),
        _ => ZeroLocusDim::NotApplicable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub status: TheoremStatus,
    pub details: String,
}

/// When `S` meets the zero section transversally, cohomology is concentrated
/// in degree 1 with `h1` equal to the number of intersection points.
pub fn theorem_check(b: &CoHiggsBundleP1) -> TheoremCheck {
    let skipped = |details: String| TheoremCheck { status: TheoremStatus::Skipped, details };
    let Ok(curve) = char_poly(b) else {
        return skipped("bundle fails validation".into());
    };
    let counts = match curve.zero_section_intersection() {
        ZeroSectionIntersection::Degenerate => {
            return skipped("spectral curve contains the zero section".into());
        }
        ZeroSectionIntersection::Points(c) if !c.transversal => {
            return skipped(format!(
                "intersection with the zero section is not transversal ({} distinct points, multiplicity {})",
                c.distinct_points, c.total_multiplicity
            ));
        }
        ZeroSectionIntersection::Points(c) => c,
    };
    let report = hypercohomology(b).expect("validated above");
    let expected = counts.distinct_points;
    let ok = report.h0 == 0 && report.h2 == 0 && report.h1 == expected;
    TheoremCheck {
        status: if ok { TheoremStatus::Pass } else { TheoremStatus::Fail },
        details: format!(
            "h = ({}, {}, {}), {} transversal intersection points",
            report.h0, report.h1, report.h2, expected
        ),
    }
}
