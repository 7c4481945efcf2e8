use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussQ, UniPoly};

pub const NVARS: usize = 4;

/// The four variables of the local model, in exponent-vector order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z1 = 0,
    Z2 = 1,
    Zbar1 = 2,
    Zbar2 = 3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Z1, Var::Z2, Var::Zbar1, Var::Zbar2];

    pub fn name(self) -> &'static str {
        match self {
            Var::Z1 => "z1",
            Var::Z2 => "z2",
            Var::Zbar1 => "zb1",
            Var::Zbar2 => "zb2",
        }
    }

    /// The antiholomorphic partner of a holomorphic coordinate.
    pub fn conjugate(self) -> Var {
        match self {
            Var::Z1 => Var::Zbar1,
            Var::Z2 => Var::Zbar2,
            Var::Zbar1 => Var::Z1,
            Var::Zbar2 => Var::Z2,
        }
    }
}

/// Sparse polynomial in `z1, z2, zb1, zb2` over `Q(i)`. No stored term has
/// a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<[u32; NVARS], GaussQ>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussQ::one())
    }

    pub fn constant(c: GaussQ) -> Self {
        Self::term(c, [0; NVARS])
    }

    pub fn term(c: GaussQ, exps: [u32; NVARS]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        Self::term(GaussQ::one(), e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; NVARS], GaussQ)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    /// Embeds `p(x)` with `x` the given variable.
    pub fn from_unipoly(p: &UniPoly, v: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(n, c)| {
            let mut e = [0; NVARS];
            e[v as usize] = n as u32;
            (e, c.clone())
        }))
    }

    fn add_term(&mut self, e: [u32; NVARS], c: &GaussQ) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(GaussQ::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; NVARS], &GaussQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    /// Formal partial derivative, treating the four variables as independent.
    pub fn derivative(&self, v: Var) -> Self {
        let k = v as usize;
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[k] -= 1;
            (e2, c * &GaussQ::from_int(e[k] as i64))
        }))
    }

    /// True when no antiholomorphic variable occurs.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|e| e[Var::Zbar1 as usize] == 0 && e[Var::Zbar2 as usize] == 0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v as usize] > 0)
    }

    pub fn eval(&self, point: &[GaussQ; NVARS]) -> GaussQ {
        self.terms.iter().fold(GaussQ::zero(), |acc, (e, c)| {
            let m = (0..NVARS).fold(c.clone(), |m, k| &m * &point[k].pow(e[k]));
            &acc + &m
        })
    }
}

impl<'a> Add<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let mut e = *ea;
                for k in 0..NVARS {
                    e[k] += eb[k];
                }
                out.add_term(e, &(a * b));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = Var::ALL
                .iter()
                .filter(|v| e[**v as usize] > 0)
                .map(|v| match e[*v as usize] {
                    1 => v.name().to_string(),
                    n => format!("{}^{}", v.name(), n),
                })
                .collect();
            let cs = if c.is_real() || c.re().is_zero() { c.to_string() } else { format!("({c})") };
            let body = match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs.clone(),
                (false, "1") => mono.join("*"),
                (false, "-1") => format!("-{}", mono.join("*")),
                (false, _) => format!("{}*{}", cs, mono.join("*")),
            };
            if !first && !body.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{self}]")
    }
}
