//! Gaussian-rational roots of univariate polynomials.
//!
//! Roots are located numerically (Durand-Kerner) and then snapped to the
//! lattice `(1/lc) Z[i]` that must contain every `Q(i)`-rational root of a
//! polynomial with Gaussian-integer coefficients and leading coefficient
//! `lc`. Every reported root is confirmed by exact evaluation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::{squarefree_part, GaussQ, UniPoly};

const MAX_ITER: usize = 500;

/// Approximate complex roots with multiplicity, by Durand-Kerner iteration.
pub fn approx_roots(p: &UniPoly) -> Vec<Complex64> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let lc = p.leading().unwrap().to_complex();
    let c: Vec<Complex64> = p.coeffs().iter().map(|a| a.to_complex() / lc).collect();
    let eval = |x: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, a| acc * x + a);
    let bound = 1.0 + c[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * (bound / 2.0).max(0.5)).collect();
    for _ in 0..MAX_ITER {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let denom = (0..deg).filter(|&j| j != i).fold(Complex64::one(), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                z[i] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

fn round_to_int(x: f64) -> Option<BigInt> {
    if !x.is_finite() {
        return None;
    }
    BigInt::from_f64(x.round())
}

/// Distinct roots of `p` that lie in `Q(i)`.
///
/// The search is complete whenever the floating-point approximations are
/// accurate to better than half a lattice step; roots it fails to snap are
/// simply not reported.
pub fn gaussian_rational_roots(p: &UniPoly) -> Vec<GaussQ> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = squarefree_part(p).expect("nonzero");
    // Clear denominators: integral coefficients with leading coefficient lc.
    let den = sf.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let scale = GaussQ::from_real(BigRational::from_integer(den));
    let integral = sf.scale(&scale);
    let lc = integral.leading().unwrap().clone();
    let lc_c = lc.to_complex();

    let mut roots = Vec::new();
    for approx in approx_roots(&sf) {
        let w = approx * lc_c;
        let (Some(re), Some(im)) = (round_to_int(w.re), round_to_int(w.im)) else { continue };
        let lattice = GaussQ::new(BigRational::from_integer(re), BigRational::from_integer(im));
        let candidate = &lattice / &lc;
        if sf.eval(&candidate).is_zero() && !roots.contains(&candidate) {
            roots.push(candidate);
        }
    }
    roots.sort_by(|a: &GaussQ, b: &GaussQ| {
        let (ar, ai) = (a.re().to_f64().unwrap_or(0.0), a.im().to_f64().unwrap_or(0.0));
        let (br, bi) = (b.re().to_f64().unwrap_or(0.0), b.im().to_f64().unwrap_or(0.0));
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    roots
}
