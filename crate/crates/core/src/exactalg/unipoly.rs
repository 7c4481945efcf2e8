use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, GaussQ};

/// Dense univariate polynomial over `Q(i)`; `coeffs[n]` multiplies `x^n`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and [`UniPoly::degree`] returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<GaussQ>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussQ>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussQ::from_int(c)).collect())
    }

    pub fn constant(c: GaussQ) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: GaussQ, n: usize) -> Self {
        let mut coeffs = vec![GaussQ::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(GaussQ::one(), 1)
    }

    pub fn coeffs(&self) -> &[GaussQ] {
        &self.coeffs
    }

    /// Coefficient of `x^n`, zero beyond the degree.
    pub fn coeff(&self, n: usize) -> GaussQ {
        self.coeffs.get(n).cloned().unwrap_or_else(GaussQ::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussQ> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &GaussQ) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c * &GaussQ::from_int(n as i64)).collect())
    }

    pub fn eval(&self, x: &GaussQ) -> GaussQ {
        self.coeffs.iter().rev().fold(GaussQ::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussQ::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `x^n p(1/x)`, or `None` if `n < deg p` (the result would not be a polynomial).
    pub fn reversed(&self, n: usize) -> Option<Self> {
        match self.degree() {
            None => Some(Self::zero()),
            Some(d) if d > n => None,
            Some(_) => {
                let mut coeffs = vec![GaussQ::zero(); n + 1];
                for (k, c) in self.coeffs.iter().enumerate() {
                    coeffs[n - k] = c.clone();
                }
                Some(Self::new(coeffs))
            }
        }
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &UniPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division over the field: `self = q * d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::ZeroPolynomial)?;
        let inv_lc = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussQ::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= &t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly, AlgebraError> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly, AlgebraError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision)
        }
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Human-readable rendering in the named variable, e.g. `z^2 - 1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_real() || c.re().is_zero() { c.to_string() } else { format!("({c})") };
            let body = match (n, cs.as_str()) {
                (0, _) => cs.clone(),
                (_, "1") => String::new(),
                (_, "-1") => "-".to_string(),
                _ => format!("{cs}*"),
            };
            let mono = match n {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{n}"),
            };
            if !out.is_empty() && !body.starts_with('-') {
                out.push('+');
            }
            out.push_str(&body);
            out.push_str(&mono);
        }
        out
    }
}

impl Zero for UniPoly {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for UniPoly {
    fn one() -> Self {
        Self::constant(GaussQ::one())
    }
}

impl<'a> Add<&'a UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &'a UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &'a UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &'a UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![GaussQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]", self.display_in("z"))
    }
}

/// Serialized as the ascending coefficient list of Gaussian-rational strings.
impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<GaussQ>::deserialize(deserializer).map(UniPoly::new)
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &UniPoly, q: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = if r.is_zero() { r } else { r.monic() };
    }
    a.monic()
}

/// Monic product of the distinct irreducible factors, `p / gcd(p, p')`.
pub fn squarefree_part(p: &UniPoly) -> Result<UniPoly, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let g = poly_gcd(p, &p.derivative());
    Ok(p.div_exact(&g)?.monic())
}

/// Exact polynomial square root over `Q(i)`.
///
/// The root is normalized so that its leading coefficient has positive real
/// part (positive imaginary part when the real part is zero).
pub fn poly_sqrt(p: &UniPoly) -> Option<UniPoly> {
    let deg = match p.degree() {
        None => return Some(UniPoly::zero()),
        Some(d) => d,
    };
    if deg % 2 == 1 {
        return None;
    }
    let half = deg / 2;
    let lead = p.leading().unwrap().sqrt()?;
    // Solve for the coefficients of q from the top down:
    // p[half + j] = sum_{a + b = half + j} q[a] q[b].
    let two_lead_inv = (&lead + &lead).inv().unwrap();
    let mut q = vec![GaussQ::zero(); half + 1];
    q[half] = lead;
    for k in (0..half).rev() {
        // coefficient of x^(half + k) in q^2 involves q[k] linearly via 2 q[half] q[k]
        let target = p.coeff(half + k);
        let mut acc = GaussQ::zero();
        for a in (k + 1)..=half {
            let b = half + k - a;
            if b > k && b <= half {
                acc += &(&q[a] * &q[b]);
            }
        }
        q[k] = &(&target - &acc) * &two_lead_inv;
    }
    let root = UniPoly::new(q);
    if &root * &root == *p {
        Some(root)
    } else {
        None
    }
}
