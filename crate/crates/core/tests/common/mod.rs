//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use cohiggs::bundle::{random_bundle, CoHiggsBundleP1};
use cohiggs::exactalg::{approx_roots, kernel_basis, BiPoly, GaussQ, PolyMatrix, ScalarMatrix, UniPoly};
use cohiggs::rng::Lcg;
use cohiggs::spectral::{char_poly, SpectralCurve};
use cohiggs::stability::{slope, StabilityStatus};
use num_rational::BigRational;
use num_traits::Zero;

/// `h^0(O(d))` and `h^1(O(d))` on the projective line.
pub fn line_bundle_cohomology(d: i64) -> (usize, usize) {
    ((d + 1).max(0) as usize, (-d - 1).max(0) as usize)
}

/// With `phi = 0` the complex `V -> V(2)` splits, so the hypercohomology is
/// `(h0(V), h1(V) + h0(V(2)), h1(V(2)))`.
pub fn zero_phi_hypercohomology(degrees: &[i64]) -> (usize, usize, usize) {
    let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
    for &di in degrees {
        let (x, y) = line_bundle_cohomology(di);
        let (u, v) = line_bundle_cohomology(di + 2);
        a += x;
        b += y;
        c += u;
        d += v;
    }
    (a, b + c, d)
}

/// Riemann-Hurwitz for a `k`-sheeted cover of the line with only simple
/// branch points: counts numerically distinct roots of the discriminant in
/// both charts. `None` if some branch point is not simple.
pub fn riemann_hurwitz_genus(c: &SpectralCurve) -> Option<u64> {
    let k = c.rank() as i64;
    let disc = c.discriminant();
    let total = 2 * k * (k - 1);
    let deg = disc.degree()? as i64;
    let roots = approx_roots(&disc);
    let distinct =
        roots.iter().enumerate().all(|(i, r)| roots.iter().enumerate().all(|(j, s)| i == j || (r - s).norm() > 1e-6));
    if !distinct || total - deg > 1 {
        return None;
    }
    Some((1 - k + total / 2) as u64)
}

// Brute-force stability oracle. Candidate eigen-sections come from
// interpolating the eigenvalues of phi at three points; the maximal
// invariant line subsheaf is found by solving (phi - lambda) s = 0 for s in
// H^0(V(-c)) for each c from the top down.

fn quadratic_roots(b1: &GaussQ, b0: &GaussQ) -> Option<Vec<GaussQ>> {
    // y^2 + b1 y + b0
    let disc = &(b1 * b1) - &(b0 * &GaussQ::from_int(4));
    let r = disc.sqrt()?;
    let half = GaussQ::from_ratio(1, 2);
    Some(vec![&(&-b1 + &r) * &half, &(&-b1 - &r) * &half])
}

fn interpolate(xs: &[GaussQ; 3], ys: &[GaussQ; 3]) -> UniPoly {
    let mut out = UniPoly::zero();
    for i in 0..3 {
        let mut basis = UniPoly::constant(ys[i].clone());
        for j in 0..3 {
            if i != j {
                let inv = (&xs[i] - &xs[j]).inv().unwrap();
                basis = &basis * &UniPoly::new(vec![&-&xs[j] * &inv, inv]);
            }
        }
        out = &out + &basis;
    }
    out
}

/// `true` when the fibre discriminant has a numerically simple root, so no
/// eigen-section exists even over `C`.
fn has_simple_branch_point(f: &BiPoly) -> bool {
    let (b1, b0) = (f.coeff(1), f.coeff(0));
    let disc = &(&b1 * &b1) - &b0.scale(&GaussQ::from_int(4));
    let roots = approx_roots(&disc);
    roots.iter().enumerate().any(|(i, r)| roots.iter().enumerate().all(|(j, s)| i == j || (r - s).norm() > 1e-5))
        || disc.degree().is_some_and(|d| d % 2 == 1)
}

/// `None` when eigen-sections exist over `C` but not over `Q(i)`.
pub fn oracle_eigen_sections(b: &CoHiggsBundleP1) -> Option<Vec<UniPoly>> {
    let c = char_poly(b).unwrap();
    let f = c.polynomial();
    let xs = [GaussQ::from_int(0), GaussQ::from_int(1), GaussQ::from_int(2)];
    let mut roots = Vec::new();
    for x in &xs {
        let fx = f.eval_z(x);
        match quadratic_roots(&fx.coeff(1), &fx.coeff(0)) {
            Some(r) => roots.push(r),
            None if has_simple_branch_point(&f) => return Some(Vec::new()),
            None => return None,
        }
    }
    let mut out: Vec<UniPoly> = Vec::new();
    for r0 in &roots[0] {
        for r1 in &roots[1] {
            for r2 in &roots[2] {
                let lam = interpolate(&xs, &[r0.clone(), r1.clone(), r2.clone()]);
                if f.substitute_y(&lam).is_zero() && !out.contains(&lam) {
                    out.push(lam);
                }
            }
        }
    }
    Some(out)
}

pub fn oracle_max_invariant_degree(b: &CoHiggsBundleP1, lam: &UniPoly) -> i64 {
    let d = b.degrees();
    let hi = d.iter().max().unwrap() + 2;
    let lo = d.iter().min().unwrap() - 6;
    for c in (lo..=hi).rev() {
        // unknowns: coefficients of s_i in H^0(O(d_i - c))
        let lens: Vec<usize> = d.iter().map(|&di| (di - c + 1).max(0) as usize).collect();
        let offs = [0, lens[0]];
        let n = lens[0] + lens[1];
        if n == 0 {
            continue;
        }
        let mut eqs: Vec<Vec<GaussQ>> = Vec::new();
        for i in 0..2 {
            let mut rows: Vec<Vec<GaussQ>> = Vec::new();
            for j in 0..2 {
                let mut e = b.phi().get(i, j).clone();
                if i == j {
                    e = &e - lam;
                }
                for k in 0..lens[j] {
                    for (m, coef) in e.coeffs().iter().enumerate() {
                        let deg = m + k;
                        while rows.len() <= deg {
                            rows.push(vec![GaussQ::zero(); n]);
                        }
                        rows[deg][offs[j] + k] += coef;
                    }
                }
            }
            eqs.extend(rows);
        }
        if eqs.is_empty() {
            return c;
        }
        let m = ScalarMatrix::from_rows(eqs).unwrap();
        if !kernel_basis(&m).is_empty() {
            return c;
        }
    }
    panic!("no invariant subsheaf found for an eigen-section");
}

pub fn oracle_status(b: &CoHiggsBundleP1) -> Option<StabilityStatus> {
    let sections = oracle_eigen_sections(b)?;
    let mu = slope(b);
    let worst = sections.iter().map(|l| BigRational::from_integer(oracle_max_invariant_degree(b, l).into())).max();
    Some(match worst {
        None => StabilityStatus::Stable,
        Some(c) if c > mu => StabilityStatus::Unstable,
        Some(c) if c == mu => StabilityStatus::Semistable,
        Some(_) => StabilityStatus::Stable,
    })
}

/// Rank-2 bundle on a random splitting type with one off-diagonal entry
/// zeroed two times out of three, so that invariant subbundles are common.
pub fn random_reducible(seed: u64) -> CoHiggsBundleP1 {
    let mut rng = Lcg::new(seed);
    let degrees = vec![rng.int_between(-3, 3), rng.int_between(-3, 3)];
    let b = random_bundle(&degrees, seed ^ 0x5eed, 3);
    let mut phi: PolyMatrix = b.phi().clone();
    match rng.int_between(0, 2) {
        0 => phi.set(1, 0, UniPoly::zero()),
        1 => phi.set(0, 1, UniPoly::zero()),
        _ => {}
    }
    b.with_phi(phi).unwrap()
}
