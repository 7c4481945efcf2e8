use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{poly_gcd, GaussQ, PolyMatrix, UniPoly};

/// A polynomial in `y` whose coefficients are polynomials in `z`:
/// `F(z, y) = sum_j coeffs[j](z) y^j`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: UniPoly) -> Self {
        Self::new(vec![c])
    }

    /// `y - p(z)`.
    pub fn y_minus(p: &UniPoly) -> Self {
        Self::new(vec![-p, UniPoly::one()])
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    /// Coefficient of `y^j`.
    pub fn coeff(&self, j: usize) -> UniPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(UniPoly::zero)
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_y(&self) -> Option<&UniPoly> {
        self.coeffs.last()
    }

    pub fn derivative_y(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(&GaussQ::from_int(j as i64))).collect())
    }

    pub fn derivative_z(&self) -> Self {
        Self::new(self.coeffs.iter().map(UniPoly::derivative).collect())
    }

    /// `F(z0, y)` as a polynomial in `y`.
    pub fn eval_z(&self, z0: &GaussQ) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(z0)).collect())
    }

    /// `F(z, y0)` as a polynomial in `z`.
    pub fn eval_y(&self, y0: &GaussQ) -> UniPoly {
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| &acc.scale(y0) + c)
    }

    /// `F(z, lambda(z))`.
    pub fn substitute_y(&self, lambda: &UniPoly) -> UniPoly {
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| &(&acc * lambda) + c)
    }

    pub fn eval(&self, z0: &GaussQ, y0: &GaussQ) -> GaussQ {
        self.eval_z(z0).eval(y0)
    }

    /// Exponent pairs `(z-degree, y-degree)` of the nonzero monomials.
    pub fn support(&self) -> Vec<(i64, i64)> {
        let mut pts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    pts.push((i as i64, j as i64));
                }
            }
        }
        pts
    }

    /// Monic gcd (in `z`) of all coefficients.
    pub fn content(&self) -> UniPoly {
        self.coeffs.iter().fold(UniPoly::zero(), |g, c| poly_gcd(&g, c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.div_exact(&c).expect("content divides")).collect())
    }

    fn scale_poly(&self, p: &UniPoly) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * p).collect())
    }

    fn shift_y(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![UniPoly::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Pseudo-remainder of `self` by `d` in `y`, with no division in `z`.
    fn pseudo_rem(&self, d: &BiPoly) -> BiPoly {
        let dd = d.degree_y().expect("nonzero divisor");
        let lc = d.leading_y().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree_y() {
            if rd < dd {
                break;
            }
            let t = d.shift_y(rd - dd).scale_poly(r.leading_y().unwrap());
            r = &r.scale_poly(&lc) - &t;
        }
        r
    }

    /// Gcd in `y` over the fraction field `Q(i)(z)`, returned as a primitive
    /// polynomial in `Q(i)[z][y]` (primitive pseudo-remainder sequence).
    pub fn gcd_y(&self, other: &BiPoly) -> BiPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree_y() < b.degree_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    pub fn display_in(&self, zvar: &str, yvar: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let ypart = match j {
                0 => String::new(),
                1 => yvar.to_string(),
                _ => format!("{yvar}^{j}"),
            };
            let cs = c.display_in(zvar);
            let term = if j == 0 {
                cs
            } else if cs == "1" {
                ypart
            } else if cs == "-1" {
                format!("-{ypart}")
            } else {
                format!("({cs})*{ypart}")
            };
            parts.push(term);
        }
        let mut out = String::new();
        for p in parts {
            if !out.is_empty() && !p.starts_with('-') {
                out.push('+');
            }
            out.push_str(&p);
        }
        out
    }
}

impl<'a> Add<&'a BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &'a BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }
}

impl<'a> Sub<&'a BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &'a BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect())
    }
}

impl<'a> Mul<&'a BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &'a BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![UniPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z", "y"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[{self}]")
    }
}

/// Resultant with respect to `y`: the determinant of the Sylvester matrix
/// whose first `deg_y G` rows hold the coefficients of `F` (highest power
/// first) and whose last `deg_y F` rows hold those of `G`.
///
/// With this layout `Res(y - p, y - q) = p - q` and
/// `Res(y^2 + a y + b, 2y + a) = -(a^2 - 4b)`.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> UniPoly {
    let (Some(m), Some(n)) = (f.degree_y(), g.degree_y()) else {
        return UniPoly::zero();
    };
    let size = m + n;
    let mut syl = PolyMatrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            syl.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            syl.set(n + r, r + k, c.clone());
        }
    }
    syl.det().expect("square Sylvester matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    /// Scalar determinant by Leibniz expansion over all permutations.
    fn leibniz_det(m: &[Vec<GaussQ>]) -> GaussQ {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], true)];
            }
            let mut out = Vec::new();
            for (p, even) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let moved = n - 1 - pos;
                    out.push((q, even == (moved.is_multiple_of(2))));
                }
            }
            out
        }
        let n = m.len();
        let mut acc = GaussQ::zero();
        for (p, even) in perms(n) {
            let t = (0..n).fold(GaussQ::one(), |a, i| &a * &m[i][p[i]]);
            if even {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        acc
    }

    /// Sylvester determinant of `F(z0, .)` and `G(z0, .)` from scratch,
    /// keeping the formal degrees of the bivariate inputs.
    fn sylvester_at(f: &BiPoly, g: &BiPoly, z0: &GaussQ) -> GaussQ {
        let m = f.degree_y().unwrap();
        let n = g.degree_y().unwrap();
        let fc: Vec<GaussQ> = (0..=m).rev().map(|j| f.coeff(j).eval(z0)).collect();
        let gc: Vec<GaussQ> = (0..=n).rev().map(|j| g.coeff(j).eval(z0)).collect();
        let size = m + n;
        let mut rows = vec![vec![GaussQ::zero(); size]; size];
        for r in 0..n {
            for (k, c) in fc.iter().enumerate() {
                rows[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in gc.iter().enumerate() {
                rows[n + r][r + k] = c.clone();
            }
        }
        leibniz_det(&rows)
    }

    #[test]
    fn resultant_examples() {
        let y = BiPoly::new(vec![UniPoly::zero(), UniPoly::one()]);
        assert!(resultant_y(&y, &y).is_zero());

        let p = up(&[3, 1, 2]);
        let q = up(&[-1, 0, 5]);
        assert_eq!(resultant_y(&BiPoly::y_minus(&p), &BiPoly::y_minus(&q)), &p - &q);

        let a = up(&[1, -2, 1]);
        let b = up(&[0, 3, 0, 1]);
        let f = BiPoly::new(vec![b.clone(), a.clone(), UniPoly::one()]);
        let disc = &(&a * &a) - &b.scale(&GaussQ::from_int(4));
        // Sylvester oracle at a few points fixes the constant to -1.
        for z0 in [0, 1, 2, -3] {
            let z0 = GaussQ::from_int(z0);
            assert_eq!(sylvester_at(&f, &f.derivative_y(), &z0), -disc.eval(&z0));
        }
        assert_eq!(resultant_y(&f, &f.derivative_y()), -&disc);
    }

    #[test]
    fn gcd_in_y_over_fraction_field() {
        // F = (y - z)(y + z^2), G = (y - z)(2y + 1): common factor y - z.
        let l = BiPoly::y_minus(&up(&[0, 1]));
        let f = &l * &BiPoly::y_minus(&up(&[0, 0, -1]));
        let g = &l * &BiPoly::new(vec![up(&[1]), up(&[2])]);
        assert_eq!(f.gcd_y(&g).degree_y(), Some(1));
        let h = BiPoly::y_minus(&up(&[5, 0, 1]));
        assert_eq!(f.gcd_y(&h).degree_y(), Some(0));
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec(prop::collection::vec(-4i64..=4, 0..3), 1..4)
            .prop_map(|cs| BiPoly::new(cs.iter().map(|c| UniPoly::from_ints(c)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn resultant_vanishes_iff_common_factor(a in arb_bipoly(), b in arb_bipoly(), c in arb_bipoly()) {
            let f = &a * &c;
            let g = &b * &c;
            for (f, g) in [(&f, &g), (&a, &b)] {
                prop_assume!(!f.is_zero() && !g.is_zero());
                let res = resultant_y(f, g);
                let common = f.gcd_y(g).degree_y().unwrap_or(0) > 0;
                prop_assert_eq!(res.is_zero(), common);
            }
        }

        #[test]
        fn resultant_matches_pointwise_sylvester(a in arb_bipoly(), b in arb_bipoly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let res = resultant_y(&a, &b);
            for z0 in [-1i64, 0, 2] {
                let z0 = GaussQ::from_int(z0);
                prop_assert_eq!(res.eval(&z0), sylvester_at(&a, &b, &z0));
            }
        }
    }
}
