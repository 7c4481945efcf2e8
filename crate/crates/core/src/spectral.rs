//! Spectral curves `S = {det(y - phi(z)) = 0}` in the total space of `O(2)`.
//!
//! `y` is the fibre coordinate over the `z`-chart and `eta = w^2 y` the one
//! over `w = 1/z`. With `F(z, y) = y^k + a_1(z) y^(k-1) + ... + a_k(z)`, each
//! `a_j` is a section of `O(2j)`, so the curve never meets the divisor at
//! infinity of the fibres and is covered by the two affine charts.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::CoHiggsBundleP1;
use crate::exactalg::{
    gaussian_rational_roots, poly_gcd, poly_sqrt, resultant_y, squarefree_part, BiPoly, GaussQ, UniPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("bundle fails degree validation")]
    InvalidBundle,
    #[error("coefficient a_{j} has degree {degree} > {bound}")]
    CoefficientDegree { j: usize, degree: i64, bound: i64 },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("polynomial is not monic in y")]
    NotMonic,
    #[error("spectral curve is not reduced")]
    NotReduced,
    #[error("spectral curve is not certified smooth")]
    NotSmooth,
}

/// `F(z, y) = y^k + sum_j a_j(z) y^(k-j)`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson")]
pub struct SpectralCurve {
    k: usize,
    a: Vec<UniPoly>,
}

#[derive(Deserialize)]
struct CurveJson {
    k: usize,
    a: Vec<UniPoly>,
}

impl TryFrom<CurveJson> for SpectralCurve {
    type Error = SpectralError;
    fn try_from(j: CurveJson) -> Result<Self, SpectralError> {
        SpectralCurve::from_coefficients(j.k, j.a)
    }
}

impl fmt::Debug for SpectralCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpectralCurve[{}]", self.polynomial())
    }
}

impl SpectralCurve {
    /// Builds the curve from `a_1..a_k`, checking `deg a_j <= 2j`.
    pub fn from_coefficients(k: usize, a: Vec<UniPoly>) -> Result<Self, SpectralError> {
        if a.len() != k {
            return Err(SpectralError::CoefficientCount { expected: k, got: a.len() });
        }
        for (idx, c) in a.iter().enumerate() {
            let j = idx + 1;
            let bound = 2 * j as i64;
            if c.degree_i64() > bound {
                return Err(SpectralError::CoefficientDegree { j, degree: c.degree_i64(), bound });
            }
        }
        Ok(SpectralCurve { k, a })
    }

    /// Reads the `a_j` off a polynomial monic in `y`.
    pub fn from_polynomial(f: &BiPoly) -> Result<Self, SpectralError> {
        let k = f.degree_y().unwrap_or(0);
        if f.leading_y() != Some(&UniPoly::one()) {
            return Err(SpectralError::NotMonic);
        }
        Self::from_coefficients(k, (1..=k).map(|j| f.coeff(k - j)).collect())
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    /// `a_1..a_k`.
    pub fn coefficients(&self) -> &[UniPoly] {
        &self.a
    }

    /// `r(z) = F(z, 0) = a_k(z)`, the restriction to the zero section.
    pub fn zero_section_restriction(&self) -> UniPoly {
        self.a.last().cloned().unwrap_or_else(UniPoly::one)
    }

    pub fn polynomial(&self) -> BiPoly {
        let mut coeffs = vec![UniPoly::one(); self.k + 1];
        for (idx, c) in self.a.iter().enumerate() {
            coeffs[self.k - idx - 1] = c.clone();
        }
        BiPoly::new(coeffs)
    }

    /// `F~(w, eta) = eta^k + sum_j w^(2j) a_j(1/w) eta^(k-j)`.
    pub fn infinity_chart_polynomial(&self) -> BiPoly {
        let mut coeffs = vec![UniPoly::one(); self.k + 1];
        for (idx, c) in self.a.iter().enumerate() {
            let j = idx + 1;
            coeffs[self.k - j] = c.reversed(2 * j).expect("deg a_j <= 2j");
        }
        BiPoly::new(coeffs)
    }

    /// The `y`-discriminant in the `z`-chart, as `Res_y(F, F_y)`.
    pub fn discriminant(&self) -> UniPoly {
        let f = self.polynomial();
        resultant_y(&f, &f.derivative_y())
    }

    /// The `eta`-discriminant in the `w`-chart.
    pub fn infinity_discriminant(&self) -> UniPoly {
        let f = self.infinity_chart_polynomial();
        resultant_y(&f, &f.derivative_y())
    }

    /// Whether `gcd_y(F, F_y)` over `Q(i)(z)` is constant.
    pub fn is_reduced(&self) -> bool {
        let f = self.polynomial();
        f.gcd_y(&f.derivative_y()).degree_y() == Some(0)
    }

    /// Tri-state smoothness: squarefree discriminants in both charts certify
    /// smoothness, a `Q(i)`-rational zero of `(F, F_y, F_z)` certifies a
    /// singularity, anything else is left undetermined.
    pub fn smoothness(&self) -> Result<Smoothness, SpectralError> {
        if !self.is_reduced() {
            return Err(SpectralError::NotReduced);
        }
        let dz = self.discriminant();
        let dw = self.infinity_discriminant();
        if is_squarefree(&dz) && is_squarefree(&dw) {
            return Ok(Smoothness::Smooth);
        }
        let charts = [(Chart::Z, self.polynomial(), dz), (Chart::W, self.infinity_chart_polynomial(), dw)];
        for (chart, f, disc) in charts {
            if let Some(p) = find_singular_point(&f, &disc) {
                return Ok(Smoothness::Singular(SingularPoint { chart, base: p.0, fibre: p.1 }));
            }
        }
        Ok(Smoothness::Undetermined)
    }

    pub fn is_irreducible(&self) -> Result<Irreducibility, SpectralError> {
        if !self.is_reduced() {
            return Err(SpectralError::NotReduced);
        }
        if self.k == 1 {
            return Ok(Irreducibility::True);
        }
        if self.k == 2 {
            // F = (y - l1)(y - l2) over C iff the discriminant is a constant
            // times a square.
            let disc = self.rank2_discriminant();
            let monic = disc.monic();
            return Ok(if poly_sqrt(&monic).is_some() { Irreducibility::False } else { Irreducibility::True });
        }
        Ok(match self.smoothness()? {
            Smoothness::Smooth => Irreducibility::True,
            _ => Irreducibility::Unknown,
        })
    }

    /// `a_1^2 - 4 a_2` (rank 2 only).
    pub fn rank2_discriminant(&self) -> UniPoly {
        let a1 = &self.a[0];
        let a2 = &self.a[1];
        &(a1 * a1) - &a2.scale(&GaussQ::from_int(4))
    }

    /// Interior lattice points of the Newton polygon; requires a certified
    /// smooth curve.
    pub fn genus(&self) -> Result<Genus, SpectralError> {
        if self.smoothness()? != Smoothness::Smooth {
            return Err(SpectralError::NotSmooth);
        }
        Ok(match newton_polygon_interior_points(&self.polynomial().support()) {
            Some(g) => Genus::Value(g),
            None => Genus::NotComputed,
        })
    }

    pub fn zero_section_intersection(&self) -> ZeroSectionIntersection {
        let r = self.zero_section_restriction();
        let Some(deg) = r.degree() else {
            return ZeroSectionIntersection::Degenerate;
        };
        let total = 2 * self.k;
        let sf = squarefree_part(&r).expect("nonzero");
        let finite_distinct = sf.degree().unwrap_or(0);
        let squarefree = finite_distinct == deg;
        let infinity_multiplicity = total - deg;
        ZeroSectionIntersection::Points(IntersectionCounts {
            total_multiplicity: total,
            finite_multiplicity: deg,
            finite_distinct,
            finite_roots_squarefree: squarefree,
            infinity_multiplicity,
            distinct_points: finite_distinct + usize::from(infinity_multiplicity > 0),
            transversal: squarefree && infinity_multiplicity <= 1,
        })
    }
}

fn is_squarefree(p: &UniPoly) -> bool {
    !p.is_zero() && poly_gcd(p, &p.derivative()).is_constant()
}

/// A `Q(i)`-rational point where `F`, `F_y` and `F_z` all vanish, searched
/// over the rational roots of the repeated part of the discriminant.
fn find_singular_point(f: &BiPoly, disc: &UniPoly) -> Option<(GaussQ, GaussQ)> {
    if disc.is_zero() {
        return None;
    }
    let repeated = poly_gcd(disc, &disc.derivative());
    let fy = f.derivative_y();
    let fz = f.derivative_z();
    for z0 in gaussian_rational_roots(&repeated) {
        let g = poly_gcd(&poly_gcd(&f.eval_z(&z0), &fy.eval_z(&z0)), &fz.eval_z(&z0));
        if let Some(y0) = gaussian_rational_roots(&g).into_iter().next() {
            return Some((z0, y0));
        }
    }
    None
}

/// Interior lattice-point count by Pick's theorem, `None` for a polygon of
/// zero area.
pub fn newton_polygon_interior_points(points: &[(i64, i64)]) -> Option<u64> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return None;
    }
    let n = hull.len();
    let mut twice_area = 0i64;
    let mut boundary = 0i64;
    for i in 0..n {
        let (x0, y0) = hull[i];
        let (x1, y1) = hull[(i + 1) % n];
        twice_area += x0 * y1 - x1 * y0;
        boundary += num_integer::gcd((x1 - x0).abs(), (y1 - y0).abs());
    }
    let twice_area = twice_area.abs();
    if twice_area == 0 {
        return None;
    }
    // A = I + B/2 - 1
    Some(((twice_area - boundary + 2) / 2) as u64)
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// `det(y I - phi(z))` for a valid bundle.
pub fn char_poly(b: &CoHiggsBundleP1) -> Result<SpectralCurve, SpectralError> {
    if !b.is_valid() {
        return Err(SpectralError::InvalidBundle);
    }
    let k = b.rank();
    let c = b.phi().char_poly_coeffs().expect("square");
    let a: Vec<UniPoly> = (1..=k).map(|j| c[k - j].clone()).collect();
    let curve = SpectralCurve::from_coefficients(k, a)?;
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Z,
    W,
}

/// A singular point `(base, fibre)`: `(z, y)` in chart `Z`, `(w, eta)` in chart `W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub chart: Chart,
    pub base: GaussQ,
    pub fibre: GaussQ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Smoothness {
    Smooth,
    Singular(SingularPoint),
    Undetermined,
}

impl Smoothness {
    pub fn label(&self) -> &'static str {
        match self {
            Smoothness::Smooth => "smooth",
            Smoothness::Singular(_) => "singular",
            Smoothness::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    True,
    False,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Genus {
    Value(u64),
    NotComputed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntersectionCounts {
    /// Always `2k`.
    pub total_multiplicity: usize,
    /// `deg r`.
    pub finite_multiplicity: usize,
    pub finite_distinct: usize,
    pub finite_roots_squarefree: bool,
    /// `2k - deg r`, the order of `w^(2k) r(1/w)` at `w = 0`.
    pub infinity_multiplicity: usize,
    pub distinct_points: usize,
    pub transversal: bool,
}

/// `S` intersected with the zero section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSectionIntersection {
    /// `r = 0`: the spectral curve contains the zero section.
    Degenerate,
    Points(IntersectionCounts),
}

impl ZeroSectionIntersection {
    pub fn is_transversal(&self) -> bool {
        matches!(self, ZeroSectionIntersection::Points(c) if c.transversal)
    }
}
