//! Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ParseGaussError;

/// An element of `Q(i)`.
///
/// Both parts are stored as reduced `BigRational`s with positive denominators,
/// so derived equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussQ {
    re: BigRational,
    im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussQ { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(BigRational::new(num.into(), den.into()))
    }

    /// `re + im * i` from machine integers.
    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussQ { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussQ { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussQ { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Exact square root in `Q(i)`, if one exists.
    ///
    /// The returned root has non-negative real part, and non-negative
    /// imaginary part when the real part vanishes.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.im.is_zero() {
            return if self.re.is_positive() {
                rational_sqrt(&self.re).map(Self::from_real)
            } else {
                rational_sqrt(&-self.re.clone()).map(|r| GaussQ { re: BigRational::zero(), im: r })
            };
        }
        // (x + y i)^2 = a + b i  =>  x^2 = (a + |z|) / 2, y = b / (2x)
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x = rational_sqrt(&((&self.re + modulus) / &two))?;
        let y = &self.im / (&two * &x);
        Some(GaussQ { re: x, im: y }.normalized_sign())
    }

    /// Returns `self` or `-self`, whichever has positive real part
    /// (positive imaginary part when the real part vanishes).
    pub fn normalized_sign(self) -> Self {
        if self.re.is_negative() || (self.re.is_zero() && self.im.is_negative()) {
            -self
        } else {
            self
        }
    }

    /// Least common multiple of the two denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Zero for GaussQ {
    fn zero() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussQ {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussQ {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<GaussQ> for GaussQ {
            type Output = GaussQ;
            fn $method(self, rhs: GaussQ) -> GaussQ {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussQ> for GaussQ {
            type Output = GaussQ;
            fn $method(self, rhs: &'a GaussQ) -> GaussQ {
                (&self).$method(rhs)
            }
        }
    };
}

impl<'a> Add<&'a GaussQ> for &GaussQ {
    type Output = GaussQ;
    fn add(self, rhs: &'a GaussQ) -> GaussQ {
        GaussQ { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussQ> for &GaussQ {
    type Output = GaussQ;
    fn sub(self, rhs: &'a GaussQ) -> GaussQ {
        GaussQ { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussQ> for &GaussQ {
    type Output = GaussQ;
    fn mul(self, rhs: &'a GaussQ) -> GaussQ {
        GaussQ { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl<'a> Div<&'a GaussQ> for &GaussQ {
    type Output = GaussQ;
    /// Panics on division by zero, like the rational division it wraps.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a GaussQ) -> GaussQ {
        self * &rhs.inv().expect("division by zero in Q(i)")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        -self.clone()
    }
}

impl AddAssign<&GaussQ> for GaussQ {
    fn add_assign(&mut self, rhs: &GaussQ) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussQ> for GaussQ {
    fn sub_assign(&mut self, rhs: &GaussQ) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussQ> for GaussQ {
    fn mul_assign(&mut self, rhs: &GaussQ) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical whitespace-free form: `a/b`, `c/di`, `a/b+c/di`, `a/b-c/di`.
impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im))
            }
        }
    }
}

impl fmt::Debug for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Scans a signed rational `[+-]digits[/digits]` starting at `pos`.
/// Returns the value and the position after it; `None` means no digits were found.
fn scan_rational(
    chars: &[(usize, char)],
    mut pos: usize,
) -> Result<(Option<BigRational>, bool, usize), ParseGaussError> {
    let mut negative = false;
    let mut signed = false;
    if let Some(&(_, c)) = chars.get(pos) {
        if c == '+' || c == '-' {
            negative = c == '-';
            signed = true;
            pos += 1;
        }
    }
    let start = pos;
    while chars.get(pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
        pos += 1;
    }
    if start == pos {
        return Ok((None, signed, pos));
    }
    let digits: String = chars[start..pos].iter().map(|(_, c)| *c).collect();
    let num: BigInt = digits.parse().expect("ascii digits");
    let mut value = BigRational::from_integer(num);
    if chars.get(pos).is_some_and(|(_, c)| *c == '/') {
        let slash = pos;
        pos += 1;
        let dstart = pos;
        while chars.get(pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            pos += 1;
        }
        if dstart == pos {
            return Err(ParseGaussError::new(position_of(chars, slash + 1), "expected denominator digits"));
        }
        let ddigits: String = chars[dstart..pos].iter().map(|(_, c)| *c).collect();
        let den: BigInt = ddigits.parse().expect("ascii digits");
        if den.is_zero() {
            return Err(ParseGaussError::new(position_of(chars, dstart), "zero denominator"));
        }
        value /= BigRational::from_integer(den);
    }
    if negative {
        value = -value;
    }
    Ok((Some(value), signed, pos))
}

fn position_of(chars: &[(usize, char)], idx: usize) -> usize {
    chars.get(idx).map(|(p, _)| *p).unwrap_or_else(|| chars.last().map(|(p, c)| p + c.len_utf8()).unwrap_or(0))
}

impl FromStr for GaussQ {
    type Err = ParseGaussError;

    /// Accepts `a`, `a/b`, `c/di`, `a/b+c/di`, `i`, `-i`, `2+i`, with
    /// arbitrary interior whitespace. Error positions are byte offsets into `s`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(ParseGaussError::new(0, "empty number"));
        }
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        let mut pos = 0;
        let mut terms = 0;
        while pos < chars.len() {
            if terms == 2 {
                return Err(ParseGaussError::new(position_of(&chars, pos), "unexpected trailing input"));
            }
            let term_start = pos;
            let (value, signed, next) = scan_rational(&chars, pos)?;
            if terms == 1 && !signed {
                return Err(ParseGaussError::new(position_of(&chars, term_start), "expected '+' or '-'"));
            }
            let negative = signed && chars[term_start].1 == '-';
            pos = next;
            if chars.get(pos).is_some_and(|(_, c)| *c == 'i') {
                pos += 1;
                let v = value.unwrap_or_else(|| if negative { -BigRational::one() } else { BigRational::one() });
                im += v;
            } else {
                match value {
                    Some(v) => re += v,
                    None => {
                        return Err(ParseGaussError::new(position_of(&chars, pos), "expected digits or 'i'"));
                    }
                }
            }
            terms += 1;
        }
        Ok(GaussQ { re, im })
    }
}

impl Serialize for GaussQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| serde::de::Error::custom(format!("{e} in {s:?}")))
    }
}
