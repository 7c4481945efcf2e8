//! Nahm's equations `dT1/dt = [T2, T3]` (and cyclic) in floating point.
//!
//! The flow is the spectral form of the B-field action on `P^1`: with
//!
//! ```text
//! A(z) = (T1 + i T2) + 2i T3 z + (T1 - i T2) z^2,    B(z) = i T3 + (T1 - i T2) z
//! ```
//!
//! the equations are equivalent to a Lax equation `dA/dt = s [A, B]` for a
//! sign `s` that [`lax_consistency_oracle`] determines numerically. The
//! characteristic polynomial of `A(z)`, i.e. the spectral curve, is constant
//! along the flow.
//!
//! Integration is classical fixed-step RK4. A state whose operator norm
//! passes the blow-up threshold stops the integration with
//! [`NahmError::PoleEncountered`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Lcg;

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_BLOWUP: f64 = 1e8;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NahmError {
    #[error("solution blew up near t = {t}")]
    PoleEncountered { t: f64 },
    #[error("neither Lax sign reproduces the Nahm equations (residuals {plus:e}, {minus:e})")]
    NoConsistentSign { plus: f64, minus: f64 },
    #[error("matrix dimensions: {0}")]
    Dimension(String),
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// `(t, T1, T2, T3)` with square matrices of a common size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NahmState {
    pub t: f64,
    pub t1: CMatrix,
    pub t2: CMatrix,
    pub t3: CMatrix,
}

impl NahmState {
    pub fn new(t: f64, t1: CMatrix, t2: CMatrix, t3: CMatrix) -> Result<Self, NahmError> {
        let k = t1.nrows();
        if [&t1, &t2, &t3].iter().any(|m| m.nrows() != k || m.ncols() != k) {
            return Err(NahmError::Dimension("T1, T2, T3 must be square of one size".into()));
        }
        Ok(NahmState { t, t1, t2, t3 })
    }

    pub fn rank(&self) -> usize {
        self.t1.nrows()
    }

    fn matrices(&self) -> [&CMatrix; 3] {
        [&self.t1, &self.t2, &self.t3]
    }

    /// Largest operator norm of the three matrices.
    pub fn max_norm(&self) -> f64 {
        self.matrices().iter().map(|m| operator_norm(m)).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another state of the same size.
    pub fn distance(&self, other: &NahmState) -> f64 {
        self.matrices()
            .iter()
            .zip(other.matrices())
            .flat_map(|(a, b)| (*a - b).iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.matrices().iter().all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    pub fn traces(&self) -> [Complex64; 3] {
        [self.t1.trace(), self.t2.trace(), self.t3.trace()]
    }

    pub fn lax(&self) -> LaxPair {
        LaxPair::from_state(self)
    }
}

fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `([T2, T3], [T3, T1], [T1, T2])`.
pub fn nahm_rhs(s: &NahmState) -> [CMatrix; 3] {
    [commutator(&s.t2, &s.t3), commutator(&s.t3, &s.t1), commutator(&s.t1, &s.t2)]
}

/// Coefficients `A_0, A_1, A_2` of `A(z)`; `B(z) = A_1 / 2 + A_2 z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxPair {
    pub a: [CMatrix; 3],
}

impl LaxPair {
    pub fn from_state(s: &NahmState) -> Self {
        LaxPair { a: [&s.t1 + &s.t2 * I, &s.t3 * (I * 2.0), &s.t1 - &s.t2 * I] }
    }

    pub fn b(&self) -> [CMatrix; 2] {
        [&self.a[1] * Complex64::new(0.5, 0.0), self.a[2].clone()]
    }

    /// Inverse of [`Self::from_state`].
    pub fn to_state(&self, t: f64) -> NahmState {
        let half = Complex64::new(0.5, 0.0);
        let t1 = (&self.a[0] + &self.a[2]) * half;
        let t2 = (&self.a[0] - &self.a[2]) * (half / I);
        let t3 = &self.a[1] * (half / I);
        NahmState { t, t1, t2, t3 }
    }

    pub fn eval(&self, z: Complex64) -> CMatrix {
        &self.a[0] + &self.a[1] * z + &self.a[2] * (z * z)
    }

    /// Coefficients of `[A(z), B(z)]` in `z^0..z^3`.
    pub fn bracket(&self) -> [CMatrix; 4] {
        let [b0, b1] = self.b();
        let a = &self.a;
        [
            commutator(&a[0], &b0),
            commutator(&a[0], &b1) + commutator(&a[1], &b0),
            commutator(&a[1], &b1) + commutator(&a[2], &b0),
            commutator(&a[2], &b1),
        ]
    }
}

/// Coefficients `c_0..c_k` of `det(y I - M)` by Faddeev-LeVerrier.
pub fn char_poly_f64(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut mk = CMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk + CMatrix::identity(n, n) * c[n - k + 1];
        c[n - k] = -(m * &mk).trace() / k as f64;
    }
    c
}

/// Residuals `max_j |dA_j - s [A, B]_j|` for `s = +1` and `s = -1`.
pub fn lax_residuals(s: &NahmState) -> (f64, f64) {
    let [d1, d2, d3] = nahm_rhs(s);
    let lax = s.lax();
    let d_a = [&d1 + &d2 * I, &d3 * (I * 2.0), &d1 - &d2 * I, CMatrix::zeros(s.rank(), s.rank())];
    let br = lax.bracket();
    let residual = |sign: f64| {
        d_a.iter()
            .zip(&br)
            .map(|(d, b)| (d - b * c64(sign)).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };
    (residual(1.0), residual(-1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaxConsistency {
    pub sign: i32,
    pub residual: f64,
}

const ORACLE_TOL: f64 = 1e-12;

/// Fixes the sign in `dA/dt = s [A, B]` by matching coefficients on random data.
pub fn lax_consistency_oracle(k: usize, seed: u64) -> Result<LaxConsistency, NahmError> {
    let s = random_state(k, seed);
    let (plus, minus) = lax_residuals(&s);
    let scale = s.max_norm().max(1.0).powi(2);
    match (plus <= ORACLE_TOL * scale, minus <= ORACLE_TOL * scale) {
        (true, false) => Ok(LaxConsistency { sign: 1, residual: plus }),
        (false, true) => Ok(LaxConsistency { sign: -1, residual: minus }),
        _ => Err(NahmError::NoConsistentSign { plus, minus }),
    }
}

fn lax_sign() -> Result<f64, NahmError> {
    Ok(lax_consistency_oracle(2, 0x1a5)?.sign as f64)
}

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub dt: f64,
    pub blowup: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator { dt: DEFAULT_DT, blowup: DEFAULT_BLOWUP }
    }
}

impl Integrator {
    pub fn with_dt(dt: f64) -> Self {
        Integrator { dt, ..Self::default() }
    }

    /// `n = ceil(|duration| / dt)` equal steps covering `duration`.
    fn steps(&self, duration: f64) -> Result<(usize, f64), NahmError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(NahmError::InvalidStep(self.dt));
        }
        let n = (duration.abs() / self.dt).ceil() as usize;
        Ok(if n == 0 { (0, 0.0) } else { (n, duration / n as f64) })
    }

    fn check(&self, x: &[CMatrix; 3], t: f64) -> Result<(), NahmError> {
        // Frobenius bounds the operator norm from above, so the SVD only runs
        // when the cheap bound is inconclusive.
        let bad = x.iter().any(|m| {
            m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
                || (m.norm() > self.blowup && operator_norm(m) > self.blowup)
        });
        if bad {
            Err(NahmError::PoleEncountered { t })
        } else {
            Ok(())
        }
    }

    /// RK4 for a system of three matrices, calling `visit` after every step.
    fn run(
        &self,
        x0: [CMatrix; 3],
        t0: f64,
        duration: f64,
        f: impl Fn(&[CMatrix; 3]) -> [CMatrix; 3],
        mut visit: impl FnMut(usize, f64, &[CMatrix; 3]),
    ) -> Result<[CMatrix; 3], NahmError> {
        let (n, h) = self.steps(duration)?;
        let mut x = x0;
        let axpy = |x: &[CMatrix; 3], k: &[CMatrix; 3], c: f64| -> [CMatrix; 3] {
            [&x[0] + &k[0] * c64(c), &x[1] + &k[1] * c64(c), &x[2] + &k[2] * c64(c)]
        };
        for step in 1..=n {
            let k1 = f(&x);
            let k2 = f(&axpy(&x, &k1, h / 2.0));
            let k3 = f(&axpy(&x, &k2, h / 2.0));
            let k4 = f(&axpy(&x, &k3, h));
            let t = t0 + h * step as f64;
            for j in 0..3 {
                x[j] += (&k1[j] + &k2[j] * c64(2.0) + &k3[j] * c64(2.0) + &k4[j]) * c64(h / 6.0);
            }
            self.check(&x, t)?;
            visit(step, t, &x);
        }
        Ok(x)
    }

    /// Integrates Nahm's equations from `s0.t` to `s0.t + duration`
    /// (negative durations run backwards).
    pub fn integrate(&self, s0: &NahmState, duration: f64) -> Result<NahmState, NahmError> {
        self.trajectory(s0, duration, 0).map(|(end, _)| end)
    }

    /// As [`Self::integrate`], also recording the state every `every` steps
    /// (never when `every == 0`).
    pub fn trajectory(
        &self,
        s0: &NahmState,
        duration: f64,
        every: usize,
    ) -> Result<(NahmState, Vec<NahmState>), NahmError> {
        let mut rec = Vec::new();
        if every > 0 {
            rec.push(s0.clone());
        }
        let f = |x: &[CMatrix; 3]| {
            let s = NahmState { t: 0.0, t1: x[0].clone(), t2: x[1].clone(), t3: x[2].clone() };
            nahm_rhs(&s)
        };
        let x = self.run([s0.t1.clone(), s0.t2.clone(), s0.t3.clone()], s0.t, duration, f, |step, t, x| {
            if every > 0 && step % every == 0 {
                rec.push(NahmState { t, t1: x[0].clone(), t2: x[1].clone(), t3: x[2].clone() });
            }
        })?;
        let [t1, t2, t3] = x;
        Ok((NahmState { t: s0.t + duration, t1, t2, t3 }, rec))
    }

    /// Integrates the Lax equation for the coefficients of `A(z)` and
    /// converts back.
    pub fn lax_flow(&self, s0: &NahmState, duration: f64) -> Result<NahmState, NahmError> {
        let sign = lax_sign()?;
        let f = |x: &[CMatrix; 3]| {
            let [c0, c1, c2, _] = LaxPair { a: x.clone() }.bracket();
            [c0 * c64(sign), c1 * c64(sign), c2 * c64(sign)]
        };
        let x = self.run(s0.lax().a, s0.t, duration, f, |_, _, _| {})?;
        Ok(LaxPair { a: x }.to_state(s0.t + duration))
    }
}

pub fn integrate(s0: &NahmState, duration: f64, dt: f64) -> Result<NahmState, NahmError> {
    Integrator::with_dt(dt).integrate(s0, duration)
}

pub fn lax_flow(s0: &NahmState, duration: f64, dt: f64) -> Result<NahmState, NahmError> {
    Integrator::with_dt(dt).lax_flow(s0, duration)
}

/// Sample points `0.9 exp(2 pi i (m + 1/2) / n)` used for spectral comparisons.
pub fn sample_points(n: usize) -> Vec<Complex64> {
    (0..n).map(|m| Complex64::from_polar(0.9, 2.0 * PI * (m as f64 + 0.5) / n as f64)).collect()
}

/// Largest change of a characteristic-polynomial coefficient of `A(z)` at
/// the sample points between two states.
pub fn spectral_distance(a: &NahmState, b: &NahmState, samples: usize) -> f64 {
    let (la, lb) = (a.lax(), b.lax());
    sample_points(samples)
        .into_iter()
        .flat_map(|z| {
            let (ca, cb) = (char_poly_f64(&la.eval(z)), char_poly_f64(&lb.eval(z)));
            ca.into_iter().zip(cb).map(|(x, y)| (x - y).norm()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

pub fn isospectral_drift(s0: &NahmState, duration: f64, dt: f64, samples: usize) -> Result<f64, NahmError> {
    let end = integrate(s0, duration, dt)?;
    Ok(spectral_distance(s0, &end, samples))
}

/// Largest change of `tr A(z)` at the sample points.
pub fn trace_drift(a: &NahmState, b: &NahmState, samples: usize) -> f64 {
    let (la, lb) = (a.lax(), b.lax());
    sample_points(samples).into_iter().map(|z| (la.eval(z).trace() - lb.eval(z).trace()).norm()).fold(0.0, f64::max)
}

/// Spin-`(k-1)/2` generators `e_a = -i J_a`, satisfying `[e_1, e_2] = e_3`
/// cyclically. For `k = 2` these are `-(i/2) sigma_a`.
pub fn su2_triple(k: usize) -> [CMatrix; 3] {
    let j = (k as f64 - 1.0) / 2.0;
    let m = |r: usize| j - r as f64;
    // J+ has entries <m+1|J+|m> = sqrt(j(j+1) - m(m+1)).
    let jp = CMatrix::from_fn(k, k, |r, c| {
        if r + 1 == c {
            Complex64::new((j * (j + 1.0) - m(c) * (m(c) + 1.0)).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(k, k, |r, c| if r == c { Complex64::new(m(r), 0.0) } else { Complex64::new(0.0, 0.0) });
    [jx * -I, jy * -I, jz * -I]
}

/// The closed-form solution `T_a(t) = e_a / (c - t)`.
pub fn pole_solution(k: usize, c: f64, t: f64) -> NahmState {
    let s = Complex64::new(1.0 / (c - t), 0.0);
    let [e1, e2, e3] = su2_triple(k);
    NahmState { t, t1: e1 * s, t2: e2 * s, t3: e3 * s }
}

/// Entries with real and imaginary parts uniform in `[-0.5, 0.5)`, drawn
/// `T1, T2, T3` in turn, row-major, real part first.
pub fn random_state(k: usize, seed: u64) -> NahmState {
    let mut rng = Lcg::new(seed);
    let mut draw = || {
        CMatrix::from_fn(k, k, |_, _| {
            let re = rng.unit_f64() - 0.5;
            Complex64::new(re, rng.unit_f64() - 0.5)
        })
    };
    let (t1, t2, t3) = (draw(), draw(), draw());
    NahmState { t: 0.0, t1, t2, t3 }
}

// JSON: {"k": k, "t": t, "T1": [[re, im], ...], ...}, matrices flattened row-major.

#[derive(Serialize, Deserialize)]
struct StateJson {
    k: usize,
    #[serde(default)]
    t: f64,
    #[serde(rename = "T1")]
    t1: Vec<[f64; 2]>,
    #[serde(rename = "T2")]
    t2: Vec<[f64; 2]>,
    #[serde(rename = "T3")]
    t3: Vec<[f64; 2]>,
}

fn flatten(m: &CMatrix) -> Vec<[f64; 2]> {
    // nalgebra stores column-major; emit row-major.
    (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
        .collect()
}

fn unflatten(k: usize, v: &[[f64; 2]], name: &str) -> Result<CMatrix, NahmError> {
    if v.len() != k * k {
        return Err(NahmError::Dimension(format!("{name} has {} entries, expected {}", v.len(), k * k)));
    }
    Ok(CMatrix::from_fn(k, k, |r, c| Complex64::new(v[r * k + c][0], v[r * k + c][1])))
}

impl Serialize for NahmState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateJson { k: self.rank(), t: self.t, t1: flatten(&self.t1), t2: flatten(&self.t2), t3: flatten(&self.t3) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NahmState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = StateJson::deserialize(deserializer)?;
        if j.k == 0 {
            return Err(serde::de::Error::custom("k must be at least 1"));
        }
        let m = |v: &[[f64; 2]], name| unflatten(j.k, v, name).map_err(serde::de::Error::custom);
        let (t1, t2, t3) = (m(&j.t1, "T1")?, m(&j.t2, "T2")?, m(&j.t3, "T3")?);
        Ok(NahmState { t: j.t, t1, t2, t3 })
    }
}
