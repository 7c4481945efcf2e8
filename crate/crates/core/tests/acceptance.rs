//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cohiggs::bfield::{
    apply_exact_bfield, commutator_obstruction, gauge_equivalence_check, random_theta, transformed_dbar,
};
use cohiggs::bundle::{canonical_o_plus_t, random_bundle, random_trivial_bundle, CoHiggsBundleP1};
use cohiggs::cohomology::{hypercohomology, theorem_check, TheoremStatus, ZeroLocusDim};
use cohiggs::exactalg::{GaussQ, MultiPoly, MultiPolyMatrix, PolyMatrix, ScalarMatrix, UniPoly, Var};
use cohiggs::nahm::{
    integrate, isospectral_drift, lax_consistency_oracle, lax_flow, pole_solution, random_state, spectral_distance,
};
use cohiggs::rng::Lcg;
use cohiggs::spectral::{char_poly, Genus, Smoothness, ZeroSectionIntersection};
use cohiggs::stability::{decide, decide_rank2, StabilityStatus};
use common::{oracle_status, random_reducible, riemann_hurwitz_genus, zero_phi_hypercohomology};
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn genus_law() -> Outcome {
    let start = Instant::now();
    let (mut skipped, mut hurwitz) = (0, 0);
    for (k, want, count) in [(2usize, 1u64, 20), (3, 4, 10)] {
        let mut found = 0;
        let mut seed = 0;
        while found < count {
            let c = char_poly(&random_trivial_bundle(k, seed, 3)).unwrap();
            seed += 1;
            let g = match c.genus() {
                Ok(g) => g,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            ensure(g == Genus::Value(want), || format!("k={k} seed={}: genus {g:?}", seed - 1))?;
            if let Some(rh) = riemann_hurwitz_genus(&c) {
                ensure(rh == want, || format!("k={k} seed={}: Riemann-Hurwitz gives {rh}", seed - 1))?;
                hurwitz += 1;
            }
            found += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("20 curves k=2 genus 1, 10 curves k=3 genus 4, {hurwitz} confirmed by Riemann-Hurwitz ({skipped} singular draws skipped, {secs:.2}s)"))
}

fn vanishing_theorem() -> Outcome {
    let mut skipped = 0;
    for k in 1..=3usize {
        let mut found = 0;
        let mut seed = 0;
        while found < 20 {
            let b = random_trivial_bundle(k, seed, 3);
            seed += 1;
            let c = char_poly(&b).unwrap();
            let generic = matches!(c.zero_section_intersection(), ZeroSectionIntersection::Points(p) if p.transversal);
            if !generic {
                skipped += 1;
                continue;
            }
            let h = hypercohomology(&b).unwrap();
            ensure(h.dims() == (0, 2 * k, 0), || format!("k={k} seed={}: {:?}", seed - 1, h.dims()))?;
            ensure(h.zero_locus_dim == ZeroLocusDim::Count(2 * k), || format!("zero locus {:?}", h.zero_locus_dim))?;
            let t = theorem_check(&b);
            ensure(t.status == TheoremStatus::Pass, || format!("k={k} seed={}: {}", seed - 1, t.details))?;
            found += 1;
        }
    }
    Ok(format!("60 instances give (0, 2k, 0) with 2k zero-section points ({skipped} non-transversal draws skipped)"))
}

fn index_invariance() -> Outcome {
    let mut rng = Lcg::new(2024);
    for n in 0..100 {
        let k = rng.int_between(1, 4) as usize;
        let degrees: Vec<i64> = (0..k).map(|_| rng.int_between(-5, 5)).collect();
        let b = random_bundle(&degrees, 1000 + n, 3);
        ensure(b.is_valid(), || format!("instance {n} invalid"))?;
        let h = hypercohomology(&b).unwrap();
        let euler = h.h0 as i64 - h.h1 as i64 + h.h2 as i64;
        ensure(euler == -2 * k as i64 && h.index == euler, || format!("instance {n}: {:?}", h.dims()))?;
        let zero = b.with_phi(PolyMatrix::zeros(k, k)).unwrap();
        let hz = hypercohomology(&zero).unwrap();
        let want = zero_phi_hypercohomology(&degrees);
        ensure(hz.dims() == want, || format!("instance {n}: phi=0 gives {:?}, expected {want:?}", hz.dims()))?;
        ensure(hz.index == h.index, || format!("instance {n}: index depends on phi"))?;
        ensure(euler.unsigned_abs() as usize == k * 2, || format!("instance {n}: |index| != rk * 2"))?;
    }
    Ok("100 bundles, ranks 1..4, degrees in [-5, 5]: index -2k, equal to the phi = 0 value".into())
}

fn canonical_example() -> Outcome {
    let b = canonical_o_plus_t();
    let c = char_poly(&b).unwrap();
    ensure(c.rank() == 2 && c.coefficients().iter().all(|a| a.is_zero()), || {
        format!("char poly {:?}", c.polynomial())
    })?;
    ensure(!c.is_reduced(), || "reported reduced".into())?;
    ensure(c.zero_section_intersection() == ZeroSectionIntersection::Degenerate, || "S and Z not degenerate".into())?;
    let h = hypercohomology(&b).unwrap();
    ensure(h.dims() == (1, 5, 0), || format!("{:?}", h.dims()))?;
    Ok("O+T: y^2, non-reduced, degenerate intersection, (1, 5, 0)".into())
}

fn rank_one() -> Outcome {
    let mut rng = Lcg::new(77);
    let mut found = 0;
    while found < 10 {
        let d = rng.int_between(-4, 3);
        let x = UniPoly::new((0..3).map(|_| GaussQ::from_int(rng.int_in(4))).collect());
        let disc = &(x.coeff(1) * x.coeff(1)) - &(&(x.coeff(0) * x.coeff(2)) * &GaussQ::from_int(4));
        if x.degree() != Some(2) || disc.is_zero() {
            continue;
        }
        let b = CoHiggsBundleP1::new(vec![d], PolyMatrix::from_rows(vec![vec![x.clone()]]).unwrap()).unwrap();
        let h = hypercohomology(&b).unwrap();
        ensure(h.dims() == (0, 2, 0), || format!("d={d}, X={x}: {:?}", h.dims()))?;
        found += 1;
    }
    Ok("10 line bundles O(d), d in [-4, 3], X with simple zeros: (0, 2, 0)".into())
}

fn stability() -> Outcome {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut matched = 0;
    let mut undecided = 0;
    let mut smooth = 0;
    let mut seed = 0;
    while matched < 50 {
        let b = random_reducible(seed);
        seed += 1;
        let v = decide_rank2(&b).unwrap();
        let Some(expected) = oracle_status(&b) else {
            undecided += 1;
            continue;
        };
        ensure(v.status == expected, || format!("seed {}: {:?} vs oracle {expected:?}", seed - 1, v.status))?;
        let c = char_poly(&b).unwrap();
        if c.is_reduced() && c.smoothness().unwrap() == Smoothness::Smooth {
            smooth += 1;
            ensure(v.status == StabilityStatus::Stable, || format!("seed {}: smooth but {:?}", seed - 1, v.status))?;
        }
        *counts.entry(format!("{expected:?}").to_lowercase()).or_default() += 1;
        matched += 1;
    }
    for s in ["stable", "semistable", "unstable"] {
        ensure(counts.contains_key(s), || format!("no {s} instance among {counts:?}"))?;
    }
    Ok(format!(
        "50 instances agree with the oracle {counts:?}, {smooth} smooth ones stable ({undecided} oracle-undecided skipped)"
    ))
}

fn constant(m: &ScalarMatrix) -> MultiPolyMatrix {
    m.map(|c| MultiPoly::constant(c.clone()))
}

fn shifted(p: &UniPoly, v: Var, m: &MultiPolyMatrix) -> MultiPolyMatrix {
    MultiPolyMatrix::identity(m.rows()).scale_entries(&MultiPoly::from_unipoly(p, v)).add(m)
}

fn random_poly(rng: &mut Lcg, len: usize) -> UniPoly {
    UniPoly::new((0..len).map(|_| GaussQ::from_int(rng.int_in(3))).collect())
}

fn random_scalar(rng: &mut Lcg, n: usize, strictly_upper: bool) -> ScalarMatrix {
    ScalarMatrix::from_fn(
        n,
        n,
        |i, j| {
            if strictly_upper && i >= j {
                GaussQ::zero()
            } else {
                GaussQ::from_int(rng.int_in(3))
            }
        },
    )
}

fn gauge_equivalence() -> Outcome {
    let mut rng = Lcg::new(4242);
    for n in 0..20u64 {
        let k = rng.int_between(1, 3) as usize;
        let degrees: Vec<i64> = (0..k).map(|_| rng.int_between(-2, 2)).collect();
        let b = random_bundle(&degrees, 500 + n, 3);
        let theta = random_theta(1, 900 + n, 3);
        let g = gauge_equivalence_check(&b, &theta).unwrap();
        ensure(g.passed && g.residual_terms() == 0, || format!("pair {n}: {} residual terms", g.residual_terms()))?;
    }
    let mut commuting = 0;
    let mut non_commuting = 0;
    let mut attempt = 0u64;
    while commuting < 10 || non_commuting < 10 {
        attempt += 1;
        let theta = random_theta(2, 7000 + attempt, 3);
        let n = rng.int_between(2, 3) as usize;
        let (p, q) = (random_poly(&mut rng, 3), random_poly(&mut rng, 3));
        if commuting < 10 {
            let nil = constant(&random_scalar(&mut rng, n, true));
            let phis = [shifted(&p, Var::Z1, &nil), shifted(&q, Var::Z2, &nil.mul(&nil))];
            let obs = commutator_obstruction(&phis, &theta).unwrap();
            ensure(obs.iter().all(|m| m.is_zero()), || format!("commuting pair {attempt}: obstruction nonzero"))?;
            commuting += 1;
        }
        if non_commuting < 10 {
            let a = constant(&random_scalar(&mut rng, n, false));
            let c = constant(&random_scalar(&mut rng, n, false));
            let phis = [shifted(&p, Var::Z1, &a), shifted(&q, Var::Z2, &c)];
            if phis[0].commutator(&phis[1]).unwrap().is_zero() {
                continue;
            }
            let obs = commutator_obstruction(&phis, &theta).unwrap();
            ensure(obs.iter().any(|m| !m.is_zero()), || format!("non-commuting pair {attempt}: obstruction zero"))?;
            non_commuting += 1;
        }
    }
    Ok("20 gauge checks pass; obstruction zero on 10 commuting and nonzero on 10 non-commuting pairs".into())
}

fn nahm_flow() -> Outcome {
    let start = Instant::now();
    let s0 = pole_solution(2, 2.0, 0.0);
    let reg = integrate(&s0, 1.0, 1e-3).map_err(|e| e.to_string())?.distance(&pole_solution(2, 2.0, 1.0));
    ensure(reg <= 1e-8, || format!("pole regression {reg:e}"))?;
    let (mut drift, mut agree, mut resid) = (0.0f64, 0.0f64, 0.0f64);
    for k in [2, 3] {
        for seed in 0..5 {
            let s = random_state(k, seed);
            drift = drift.max(isospectral_drift(&s, 1.0, 1e-3, 5).map_err(|e| e.to_string())?);
            let a = integrate(&s, 1.0, 1e-3).map_err(|e| e.to_string())?;
            let b = lax_flow(&s, 1.0, 1e-3).map_err(|e| e.to_string())?;
            agree = agree.max(a.distance(&b));
            drift = drift.max(spectral_distance(&s, &a, 5));
        }
        resid = resid.max(lax_consistency_oracle(k, 1).map_err(|e| e.to_string())?.residual);
    }
    ensure(drift <= 1e-8, || format!("isospectral drift {drift:e}"))?;
    ensure(agree <= 1e-8, || format!("integrate vs lax_flow {agree:e}"))?;
    ensure(resid <= 1e-12, || format!("lax residual {resid:e}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "pole error {reg:.1e}, drift {drift:.1e}, lax agreement {agree:.1e}, lax residual {resid:.1e} ({secs:.2}s)"
    ))
}

fn bfield_invariance() -> Outcome {
    let mut rng = Lcg::new(99);
    for n in 0..10u64 {
        let k = rng.int_between(1, 3) as usize;
        let degrees: Vec<i64> = (0..k).map(|_| rng.int_between(-2, 2)).collect();
        let b = random_bundle(&degrees, 300 + n, 3);
        let theta = random_theta(1, 600 + n, 3);
        let td = transformed_dbar(&b, &theta).unwrap();
        ensure(td.phi == *b.phi(), || format!("instance {n}: phi changed"))?;
        let nb = apply_exact_bfield(&b, &theta).map_err(|e| format!("instance {n}: {e}"))?;
        ensure(hypercohomology(&nb).unwrap() == hypercohomology(&b).unwrap(), || format!("instance {n}: cohomology"))?;
        ensure(decide(&nb).unwrap() == decide(&b).unwrap(), || format!("instance {n}: stability"))?;
        ensure(char_poly(&nb).unwrap() == char_poly(&b).unwrap(), || format!("instance {n}: spectral curve"))?;
    }
    Ok("10 instances keep their hypercohomology and stability verdict".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("genus law", genus_law),
        ("vanishing theorem and point count", vanishing_theorem),
        ("index invariance", index_invariance),
        ("O+T example", canonical_example),
        ("rank one", rank_one),
        ("rank-2 stability vs brute force", stability),
        ("gauge equivalence and commutator obstruction", gauge_equivalence),
        ("Nahm flow", nahm_flow),
        ("B-field invariance", bfield_invariance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(d) => println!("PASS criterion {}: {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
