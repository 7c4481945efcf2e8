//! The B-field action for exact `B = dbar(theta)`.
//!
//! With `theta = sum_a f_a dz_a`, the operator `dbar_A` becomes
//! `dbar_A + i_phi B`, and `Phi = sum_a f_a phi^a` satisfies
//! `exp(-Phi) dbar exp(Phi) = dbar(Phi) = i_phi B` as soon as `Phi` commutes
//! with `dbar(Phi)`. Everything here checks those polynomial identities
//! exactly, in the local model with holomorphic coordinates `z1, z2` and
//! their conjugates `zb1, zb2`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::{BundleError, CoHiggsBundleP1};
use crate::exactalg::{GaussQ, MultiPoly, MultiPolyMatrix, PolyMatrix, UniPoly, Var, NVARS};
use crate::rng::Lcg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BFieldError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("theta: {0}")]
    BadTheta(String),
    #[error("gauge identities fail, transformed bundle is not holomorphic in the old frame")]
    NotGaugeEquivalent,
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// `theta = sum_a f_a dz_a` in one or two holomorphic variables, defining
/// the exact form `B = dbar(theta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DolbeaultB {
    f: Vec<MultiPoly>,
}

impl DolbeaultB {
    /// `f` has one entry per holomorphic variable; an entry for one variable
    /// may only involve `z1, zb1`.
    pub fn new(f: Vec<MultiPoly>) -> Result<Self, BFieldError> {
        match f.len() {
            1 => {
                if f[0].uses(Var::Z2) || f[0].uses(Var::Zbar2) {
                    return Err(BFieldError::BadTheta("one-variable theta uses z2 or zb2".into()));
                }
            }
            2 => {}
            n => return Err(BFieldError::BadTheta(format!("expected 1 or 2 functions, got {n}"))),
        }
        Ok(DolbeaultB { f })
    }

    pub fn one_variable(f: MultiPoly) -> Result<Self, BFieldError> {
        Self::new(vec![f])
    }

    pub fn vars(&self) -> usize {
        self.f.len()
    }

    pub fn theta(&self) -> &[MultiPoly] {
        &self.f
    }

    fn antiholomorphic(&self) -> &'static [Var] {
        if self.vars() == 1 {
            &[Var::Zbar1]
        } else {
            &[Var::Zbar1, Var::Zbar2]
        }
    }

    /// `b[a][c] = d f_a / d zb_c`, the coefficient of `dzb_c ^ dz_a` in `B`.
    pub fn b(&self) -> Vec<Vec<MultiPoly>> {
        self.f.iter().map(|fa| self.antiholomorphic().iter().map(|&v| fa.derivative(v)).collect()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: [u32; NVARS],
    coeff: GaussQ,
}

#[derive(Serialize, Deserialize)]
struct ThetaJson {
    vars: usize,
    f: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f2: Option<Vec<TermJson>>,
}

fn terms_to_poly(t: Vec<TermJson>) -> MultiPoly {
    MultiPoly::from_terms(t.into_iter().map(|t| (t.monomial, t.coeff)))
}

fn poly_to_terms(p: &MultiPoly) -> Vec<TermJson> {
    p.terms().map(|(e, c)| TermJson { monomial: *e, coeff: c.clone() }).collect()
}

impl Serialize for DolbeaultB {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ThetaJson { vars: self.vars(), f: poly_to_terms(&self.f[0]), f2: self.f.get(1).map(poly_to_terms) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DolbeaultB {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ThetaJson::deserialize(deserializer)?;
        let mut f = vec![terms_to_poly(j.f)];
        match (j.vars, j.f2) {
            (1, None) => {}
            (2, f2) => f.push(f2.map(terms_to_poly).unwrap_or_else(MultiPoly::zero)),
            (1, Some(_)) => return Err(serde::de::Error::custom("f2 given for a one-variable theta")),
            (n, _) => return Err(serde::de::Error::custom(format!("vars must be 1 or 2, got {n}"))),
        }
        DolbeaultB::new(f).map_err(serde::de::Error::custom)
    }
}

/// Random `theta` with up to six terms of degree at most 2 in each variable.
pub fn random_theta(vars: usize, seed: u64, height: u64) -> DolbeaultB {
    let mut rng = Lcg::new(seed);
    let active: &[usize] = if vars == 1 { &[0, 2] } else { &[0, 1, 2, 3] };
    let f = (0..vars.clamp(1, 2))
        .map(|_| {
            let n = rng.int_between(2, 6);
            MultiPoly::from_terms((0..n).map(|_| {
                let mut e = [0u32; NVARS];
                for &k in active {
                    e[k] = rng.int_between(0, 2) as u32;
                }
                let mut c = rng.int_in(height);
                if c == 0 {
                    c = 1;
                }
                (e, GaussQ::from_int(c))
            }))
        })
        .collect();
    DolbeaultB::new(f).expect("variables match")
}

fn embed(phi: &PolyMatrix, v: Var) -> MultiPolyMatrix {
    phi.map(|p| MultiPoly::from_unipoly(p, v))
}

fn dbar(m: &MultiPolyMatrix, v: Var) -> MultiPolyMatrix {
    m.map(|p| p.derivative(v))
}

/// `Phi = sum_a f_a phi^a`.
fn contract(phis: &[MultiPolyMatrix], theta: &DolbeaultB) -> Result<MultiPolyMatrix, BFieldError> {
    if phis.len() != theta.vars() {
        return Err(BFieldError::ShapeMismatch(format!(
            "{} Higgs field components for a theta in {} variables",
            phis.len(),
            theta.vars()
        )));
    }
    let n = phis[0].rows();
    if phis.iter().any(|p| p.rows() != n || p.cols() != n) {
        return Err(BFieldError::ShapeMismatch("Higgs field components must be square of equal size".into()));
    }
    let mut out = MultiPolyMatrix::zeros(n, n);
    for (p, f) in phis.iter().zip(theta.theta()) {
        out = out.add(&p.scale_entries(f));
    }
    Ok(out)
}

/// `[Phi, d Phi / d zb_c]` for each antiholomorphic direction `c`. All of them
/// vanish exactly when the exponential gauge transformation produces `i_phi B`.
pub fn commutator_obstruction(
    phis: &[MultiPolyMatrix],
    theta: &DolbeaultB,
) -> Result<Vec<MultiPolyMatrix>, BFieldError> {
    let big_phi = contract(phis, theta)?;
    Ok(theta.antiholomorphic().iter().map(|&v| big_phi.commutator(&dbar(&big_phi, v)).expect("square")).collect())
}

/// Outcome of the symbolic gauge check in one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeCheck {
    pub passed: bool,
    /// `dbar(f phi) - (df/dzb) phi`.
    pub derivative_defect: MultiPolyMatrix,
    /// `[f phi, dbar(f phi)]`.
    pub commutator_defect: MultiPolyMatrix,
    /// For nilpotent `phi` the exponential is a finite sum, and
    /// `exp(-f phi) dbar exp(f phi) - (df/dzb) phi` is computed outright.
    pub series_defect: Option<MultiPolyMatrix>,
}

impl GaugeCheck {
    pub fn residual_terms(&self) -> usize {
        let count = |m: &MultiPolyMatrix| m.entries().map(|(_, _, p)| p.num_terms()).sum::<usize>();
        count(&self.derivative_defect) + count(&self.commutator_defect) + self.series_defect.as_ref().map_or(0, count)
    }
}

fn require_one_variable(theta: &DolbeaultB) -> Result<&MultiPoly, BFieldError> {
    if theta.vars() != 1 {
        return Err(BFieldError::BadTheta("expected a one-variable theta".into()));
    }
    Ok(&theta.theta()[0])
}

fn nilpotent_exp(m: &MultiPolyMatrix, sign: i64) -> Option<MultiPolyMatrix> {
    let n = m.rows();
    let mut term = MultiPolyMatrix::identity(n);
    let mut sum = term.clone();
    for k in 1..=n {
        term = term.mul(m).scale(&GaussQ::from_ratio(sign, k as i64));
        sum = sum.add(&term);
    }
    term.mul(m).is_zero().then_some(sum)
}

pub fn gauge_equivalence_check(b: &CoHiggsBundleP1, theta: &DolbeaultB) -> Result<GaugeCheck, BFieldError> {
    let f = require_one_variable(theta)?;
    let phi = embed(b.phi(), Var::Z1);
    let big_phi = phi.scale_entries(f);
    let d_big_phi = dbar(&big_phi, Var::Zbar1);
    let ip_b = phi.scale_entries(&f.derivative(Var::Zbar1));
    let derivative_defect = d_big_phi.sub(&ip_b);
    let commutator_defect = big_phi.commutator(&d_big_phi).expect("square");
    let series_defect = match (nilpotent_exp(&big_phi, -1), nilpotent_exp(&big_phi, 1)) {
        (Some(minus), Some(plus)) => Some(minus.mul(&dbar(&plus, Var::Zbar1)).sub(&ip_b)),
        _ => None,
    };
    let passed = derivative_defect.is_zero()
        && commutator_defect.is_zero()
        && series_defect.as_ref().is_none_or(|m| m.is_zero());
    Ok(GaugeCheck { passed, derivative_defect, commutator_defect, series_defect })
}

/// `dbar_B = dbar_A + i_phi B`, described by its `dzb` coefficient. The Higgs
/// field is unchanged and stays holomorphic for the new operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedDbar {
    /// `(df/dzb) phi`.
    pub term: MultiPolyMatrix,
    pub phi: PolyMatrix,
}

pub fn transformed_dbar(b: &CoHiggsBundleP1, theta: &DolbeaultB) -> Result<TransformedDbar, BFieldError> {
    let f = require_one_variable(theta)?;
    let term = embed(b.phi(), Var::Z1).scale_entries(&f.derivative(Var::Zbar1));
    Ok(TransformedDbar { term, phi: b.phi().clone() })
}

/// Holomorphic description of `(V, dbar_B, phi)`: in frames `exp(-f phi) s`
/// the Higgs field becomes `exp(-f phi) phi exp(f phi)`, which the gauge
/// identities force back to `phi`. That conjugation is carried out here as
/// `phi + [phi, f phi] + ...`, truncated because `[phi, f phi]` is checked
/// to vanish, and the result must be free of `zb`.
pub fn apply_exact_bfield(b: &CoHiggsBundleP1, theta: &DolbeaultB) -> Result<CoHiggsBundleP1, BFieldError> {
    let check = gauge_equivalence_check(b, theta)?;
    if !check.passed {
        return Err(BFieldError::NotGaugeEquivalent);
    }
    let f = require_one_variable(theta)?;
    let phi = embed(b.phi(), Var::Z1);
    let first_order = phi.commutator(&phi.scale_entries(f)).expect("square");
    if !first_order.is_zero() {
        return Err(BFieldError::NotGaugeEquivalent);
    }
    let conj = phi.add(&first_order);
    if conj.entries().any(|(_, _, p)| !p.is_holomorphic() || p.uses(Var::Z2)) {
        return Err(BFieldError::NotGaugeEquivalent);
    }
    let back = PolyMatrix::from_fn(conj.rows(), conj.cols(), |i, j| {
        let p = conj.get(i, j);
        let deg = p.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![GaussQ::from_int(0); deg + 1];
        for (e, c) in p.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        UniPoly::new(coeffs)
    });
    Ok(b.with_phi(back)?)
}

/// The line bundle `L_B` on the total space of `T P^1`, given by the single
/// transition function `exp(h y)` with `h = t / z` on the chart overlap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LBTransition {
    pub t: GaussQ,
}

impl LBTransition {
    /// `h = t z^-1` as `(coefficient, exponent of z)`.
    pub fn h(&self) -> (GaussQ, i32) {
        (self.t.clone(), -1)
    }

    /// Transition functions multiply, exponents add.
    pub fn compose(&self, other: &LBTransition) -> LBTransition {
        LBTransition { t: &self.t + &other.t }
    }

    pub fn inverse(&self) -> LBTransition {
        LBTransition { t: -&self.t }
    }

    pub fn is_identity(&self) -> bool {
        num_traits::Zero::is_zero(&self.t)
    }

    /// `exp(h y)` at `y = 0`, exactly.
    pub fn restrict_to_zero_section(&self) -> GaussQ {
        GaussQ::from_int(1)
    }

    /// `exp(t y / z)` at a point of the overlap.
    pub fn eval(&self, z: Complex64, y: Complex64) -> Complex64 {
        (self.t.to_complex() * y / z).exp()
    }
}

impl fmt::Display for LBTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(({})*y/z)", self.t)
    }
}

pub fn lb_transition(t: GaussQ) -> LBTransition {
    LBTransition { t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{canonical_o_plus_t, random_bundle, random_trivial_bundle};
    use crate::cohomology::hypercohomology;
    use crate::exactalg::ScalarMatrix;
    use crate::spectral::char_poly;
    use crate::stability::decide;
    use proptest::prelude::*;

    fn mono(c: i64, e: [u32; NVARS]) -> MultiPoly {
        MultiPoly::term(GaussQ::from_int(c), e)
    }

    fn constant(m: &ScalarMatrix) -> MultiPolyMatrix {
        m.map(|c| MultiPoly::constant(c.clone()))
    }

    /// `p(v) I + m`.
    fn shifted(p: &[i64], v: Var, m: &MultiPolyMatrix) -> MultiPolyMatrix {
        let s = MultiPoly::from_unipoly(&UniPoly::from_ints(p), v);
        MultiPolyMatrix::identity(m.rows()).scale_entries(&s).add(m)
    }

    fn generic_theta2() -> DolbeaultB {
        let f1 = &mono(1, [1, 0, 1, 0]) + &mono(2, [0, 1, 0, 2]);
        let f2 = &mono(1, [0, 0, 2, 0]) + &mono(-3, [1, 1, 0, 1]);
        DolbeaultB::new(vec![f1, f2]).unwrap()
    }

    #[test]
    fn theta_validation_and_b() {
        assert!(DolbeaultB::one_variable(MultiPoly::var(Var::Z2)).is_err());
        assert!(DolbeaultB::new(vec![]).is_err());
        let th = DolbeaultB::one_variable(&mono(1, [1, 0, 1, 0]) + &mono(1, [0, 0, 2, 0])).unwrap();
        assert_eq!(th.b()[0][0], &mono(1, [1, 0, 0, 0]) + &mono(2, [0, 0, 1, 0]));
    }

    #[test]
    fn theta_json_round_trip() {
        let th = generic_theta2();
        let s = serde_json::to_string(&th).unwrap();
        assert!(s.contains("\"vars\":2"));
        assert_eq!(serde_json::from_str::<DolbeaultB>(&s).unwrap(), th);
        let one: DolbeaultB = serde_json::from_str(r#"{"vars":1,"f":[{"monomial":[1,0,1,0],"coeff":"1/2"}]}"#).unwrap();
        assert_eq!(one.theta()[0], MultiPoly::term(GaussQ::from_ratio(1, 2), [1, 0, 1, 0]));
        assert!(serde_json::from_str::<DolbeaultB>(r#"{"vars":3,"f":[]}"#).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let n = constant(&ScalarMatrix::from_int_rows(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]));
        let th = generic_theta2();
        let obs = commutator_obstruction(&[n.clone(), n.clone()], &th).unwrap();
        assert!(obs.iter().all(|m| m.is_zero()));

        let p1 = shifted(&[1, 0, 1], Var::Z1, &n);
        let p2 = shifted(&[0, 2], Var::Z2, &n.mul(&n));
        assert!(commutator_obstruction(&[p1, p2], &th).unwrap().iter().all(|m| m.is_zero()));

        let a = constant(&ScalarMatrix::from_int_rows(&[&[0, 1], &[0, 0]]));
        let b = constant(&ScalarMatrix::from_int_rows(&[&[0, 0], &[1, 0]]));
        assert!(commutator_obstruction(&[a.clone(), b], &th).unwrap().iter().any(|m| !m.is_zero()));
        assert!(commutator_obstruction(&[a], &th).is_err());
    }

    // Independent expansion: [Phi, d_c Phi] = (f1 d_c f2 - f2 d_c f1) [phi1, phi2]
    // for holomorphic phi1, phi2.
    #[test]
    fn obstruction_matches_wronskian_formula() {
        let th = generic_theta2();
        let a = shifted(&[0, 1], Var::Z1, &constant(&ScalarMatrix::from_int_rows(&[&[1, 2], &[3, 4]])));
        let b = shifted(&[2, 0, 1], Var::Z2, &constant(&ScalarMatrix::from_int_rows(&[&[0, -1], &[5, 1]])));
        let comm = a.commutator(&b).unwrap();
        let obs = commutator_obstruction(&[a, b], &th).unwrap();
        let (f1, f2) = (&th.theta()[0], &th.theta()[1]);
        for (k, v) in [Var::Zbar1, Var::Zbar2].into_iter().enumerate() {
            let w = &(f1 * &f2.derivative(v)) - &(f2 * &f1.derivative(v));
            assert_eq!(obs[k], comm.scale_entries(&w));
        }
    }

    #[test]
    fn gauge_check_examples() {
        let zzb = mono(1, [1, 0, 1, 0]);
        let zb2 = mono(1, [0, 0, 2, 0]);
        for b in [canonical_o_plus_t(), random_trivial_bundle(3, 5, 4), random_bundle(&[2], 1, 3)] {
            for f in [zzb.clone(), &zb2 + &zzb] {
                let th = DolbeaultB::one_variable(f).unwrap();
                let c = gauge_equivalence_check(&b, &th).unwrap();
                assert!(c.passed);
                assert_eq!(c.residual_terms(), 0);
            }
        }
        let c = gauge_equivalence_check(&canonical_o_plus_t(), &DolbeaultB::one_variable(zzb).unwrap()).unwrap();
        assert!(c.series_defect.is_some());
        assert!(gauge_equivalence_check(&canonical_o_plus_t(), &generic_theta2()).is_err());
    }

    #[test]
    fn transformed_dbar_examples() {
        let b = canonical_o_plus_t();
        let zero = DolbeaultB::one_variable(MultiPoly::zero()).unwrap();
        assert!(transformed_dbar(&b, &zero).unwrap().term.is_zero());

        let th = random_theta(1, 3, 4);
        let t = transformed_dbar(&b, &th).unwrap();
        assert_eq!(t.phi, *b.phi());
        for (i, j, p) in t.term.entries() {
            if i >= j {
                assert!(p.is_zero());
            }
        }

        let x = UniPoly::from_ints(&[1, -2, 3]);
        let b1 = CoHiggsBundleP1::new(vec![0], PolyMatrix::from_rows(vec![vec![x.clone()]]).unwrap()).unwrap();
        let t = transformed_dbar(&b1, &DolbeaultB::one_variable(MultiPoly::var(Var::Zbar1)).unwrap()).unwrap();
        assert_eq!(*t.term.get(0, 0), MultiPoly::from_unipoly(&x, Var::Z1));
    }

    #[test]
    fn lb_transition_group() {
        let id = lb_transition(GaussQ::from_int(0));
        assert!(id.is_identity());
        let t = lb_transition(GaussQ::from_ratio(3, 2));
        assert_eq!(t.restrict_to_zero_section(), GaussQ::from_int(1));
        assert!(t.compose(&t.inverse()).is_identity());
        assert_eq!(t.compose(&lb_transition(GaussQ::from_int(1))).t, GaussQ::from_ratio(5, 2));
        let one = lb_transition(GaussQ::from_int(1));
        assert_eq!(one.to_string(), "exp((1)*y/z)");
        let z = Complex64::new(0.5, 0.25);
        let y = Complex64::new(-1.0, 2.0);
        assert!((one.eval(z, y) - (y / z).exp()).norm() < 1e-12);
        assert_eq!(one.eval(z, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(one.h(), (GaussQ::from_int(1), -1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn obstruction_vanishes_iff_commuting(
            a in prop::collection::vec(-2i64..=2, 4),
            c in prop::collection::vec(-2i64..=2, 4),
        ) {
            let ma = constant(&ScalarMatrix::from_int_rows(&[&a[..2], &a[2..]]));
            let mc = constant(&ScalarMatrix::from_int_rows(&[&c[..2], &c[2..]]));
            let p1 = shifted(&[0, 1], Var::Z1, &ma);
            let p2 = shifted(&[1, 0, 1], Var::Z2, &mc);
            let commuting = p1.commutator(&p2).unwrap().is_zero();
            let obs = commutator_obstruction(&[p1, p2], &generic_theta2()).unwrap();
            prop_assert_eq!(obs.iter().all(|m| m.is_zero()), commuting);
        }

        #[test]
        fn invariants_survive_exact_bfield(seed in any::<u64>(), k in 1usize..=3) {
            let b = random_trivial_bundle(k, seed, 3);
            let th = random_theta(1, seed ^ 1, 3);
            let nb = apply_exact_bfield(&b, &th).unwrap();
            prop_assert_eq!(char_poly(&nb).unwrap(), char_poly(&b).unwrap());
            prop_assert_eq!(hypercohomology(&nb).unwrap(), hypercohomology(&b).unwrap());
            prop_assert_eq!(decide(&nb).unwrap(), decide(&b).unwrap());
        }
    }
}
