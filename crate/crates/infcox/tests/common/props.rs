//! Randomized invariants shared by `properties.rs` and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use infcox::field::{FieldConfig, FieldElem};
use infcox::laurent::LaurentPoly2;
use infcox::semidegree::Semidegree;
use infcox::series::{exp, Dwps, Exp};

pub const CASES: u32 = 1000;
const SEED: [u8; 32] = *b"infcox-property-suite-fixed-seed";

pub fn runner() -> TestRunner {
    let cfg = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn lift<T>(r: infcox::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

fn arb_coeff() -> impl Strategy<Value = FieldElem> {
    prop_oneof![
        (1i64..=4, any::<bool>()).prop_map(|(v, s)| FieldElem::from_i64(if s { v } else { -v })),
        (1i64..=3, 2i64..=3).prop_map(|(n, d)| FieldElem::from_ratio(n, d)),
        (0i64..4).prop_map(|k| FieldElem::root_of_unity(4, k)),
    ]
}

fn arb_exp(lo: i64, hi: i64) -> impl Strategy<Value = Exp> {
    prop::sample::select(vec![1i64, 2, 3, 4, 6]).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| exp(n, d)))
}

/// Finite series with exponents in `[lo, hi]` and denominators dividing 12.
pub fn arb_series(lo: i64, hi: i64, max_terms: usize) -> impl Strategy<Value = Dwps> {
    prop::collection::vec((arb_exp(lo, hi), arb_coeff()), 0..=max_terms).prop_map(Dwps::from_terms)
}

pub fn arb_semidegree() -> impl Strategy<Value = Semidegree> {
    (arb_series(-2, 3, 3), 1i64..=12, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(phi, k, d)| {
        let low = phi.order().unwrap_or(exp(2, 1));
        Semidegree::new(phi, low - exp(k, d)).expect("r below the support")
    })
}

pub fn arb_poly() -> impl Strategy<Value = LaurentPoly2> {
    prop::collection::vec(((-1i64..=3, 0i64..=3), -3i64..=3), 1..=5)
        .prop_map(|ts| LaurentPoly2::from_terms(ts.into_iter().map(|(m, c)| (m, FieldElem::from_i64(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// `c *_{pde} phi = c^e *_{pd} phi = c^{de} *_p phi`.
pub fn star_composition() -> Result<(), String> {
    let strat = (arb_series(-3, 3, 4), arb_coeff(), 1i64..=3, 1i64..=3);
    runner()
        .run(&strat, |(phi, c, d, e)| {
            let p = phi.polydromy();
            let a = lift(phi.star(&c, p * d * e))?;
            let b = lift(phi.star(&lift(c.pow(e))?, p * d))?;
            let z = lift(phi.star(&lift(c.pow(d * e))?, p))?;
            check(a == b && b == z, || format!("star mismatch for {phi:?}"))
        })
        .map_err(|e| e.to_string())
}

/// Conjugates share Puiseux data, and `deg(phi - conj_j)` is the largest
/// exponent `q/p` with `j q != 0 mod p`.
pub fn conjugacy_invariance() -> Result<(), String> {
    let cfg = FieldConfig::default();
    runner()
        .run(&arb_series(-3, 3, 4), |phi| {
            let p = phi.polydromy();
            let data = phi.analyze();
            for (j, conj) in lift(phi.conjugates(&cfg))?.iter().enumerate() {
                check(conj.analyze() == data, || format!("pairs differ at j = {j}"))?;
                let expected = phi
                    .terms()
                    .iter()
                    .map(|(e, _)| *e)
                    .find(|e| (e * Exp::from_integer(p)).to_integer() * j as i64 % p != 0);
                let found = phi.sub(conj).degree();
                check(found == expected, || format!("deg(phi - conj_{j}) = {found:?}, expected {expected:?}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `delta(fg) = delta(f) + delta(g)`, the ultrametric inequality and
/// `lc(fg) = lc(f) lc(g)`.
pub fn delta_lc_multiplicative() -> Result<(), String> {
    let strat = (arb_semidegree(), arb_poly(), arb_poly());
    runner()
        .run(&strat, |(delta, f, g)| {
            let (vf, lf) = lift(delta.eval_lc(&f))?;
            let (vg, lg) = lift(delta.eval_lc(&g))?;
            let (vfg, lfg) = lift(delta.eval_lc(&f.mul(&g)))?;
            check(vfg == vf + vg, || format!("delta(fg) = {vfg}, sum {}", vf + vg))?;
            check(lfg == lf.mul(&lg), || "lc not multiplicative".into())?;
            let s = f.add(&g);
            if !s.is_zero() {
                let vs = lift(delta.eval(&s))?;
                check(vs <= vf.max(vg), || "ultrametric bound".into())?;
                if vf != vg {
                    check(vs == vf.max(vg), || "strict ultrametric equality".into())?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `lc(f) = xi^s h(xi^{p_{l+1}})`.
pub fn lc_shape() -> Result<(), String> {
    runner()
        .run(&(arb_semidegree(), arb_poly()), |(delta, f)| {
            let lc = lift(delta.lc(&f))?;
            let step = delta.formal().p_last() as usize;
            let support: Vec<usize> =
                lc.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect();
            let s = support[0];
            check(support.iter().all(|k| (k - s) % step == 0), || format!("support {support:?}, step {step}"))
        })
        .map_err(|e| e.to_string())
}

fn epsilon(delta: &Semidegree, conjugates: &[Dwps]) -> Exp {
    conjugates
        .iter()
        .map(|psi| match delta.phi().sub(psi).degree() {
            Some(e) if e > delta.r() => e,
            _ => delta.r(),
        })
        .min()
        .expect("at least one conjugate")
}

/// Two series near the generic series of `delta`: a truncation of `phi`
/// followed by random lower terms.
fn arb_comparison() -> impl Strategy<Value = (Semidegree, Dwps, Dwps)> {
    arb_semidegree().prop_flat_map(|delta| {
        let n = delta.phi().terms().len();
        let tail = |delta: &Semidegree| {
            let low = delta.r().floor().to_integer() - 1;
            (0..=n, arb_series(low, 3, 2))
        };
        (Just(delta.clone()), tail(&delta), tail(&delta)).prop_map(|(delta, (k1, t1), (k2, t2))| {
            let head = |k: usize| Dwps::from_terms(delta.phi().terms()[..k].iter().cloned());
            let build = |k: usize, t: &Dwps| {
                let h = head(k);
                let cut = h.order();
                let below = Dwps::from_terms(t.terms().iter().filter(|(e, _)| cut.is_none_or(|c| *e < c)).cloned());
                h.add(&below)
            };
            let (a, b) = (build(k1, &t1), build(k2, &t2));
            (delta, a, b)
        })
    })
}

/// If `eps_1 >= eps_2` then `delta(g_1)/deg_y g_1 >= delta(g_2)/deg_y g_2`.
pub fn delta_comparison() -> Result<(), String> {
    let cfg = FieldConfig::default();
    runner()
        .run(&arb_comparison(), |(delta, psi1, psi2)| {
            let c1 = lift(psi1.conjugates(&cfg))?;
            let c2 = lift(psi2.conjugates(&cfg))?;
            let (e1, e2) = (epsilon(&delta, &c1), epsilon(&delta, &c2));
            let g1 = lift(psi1.minpoly(&cfg))?.0;
            let g2 = lift(psi2.minpoly(&cfg))?.0;
            let lhs = lift(delta.eval(&g1))? * g2.deg_y();
            let rhs = lift(delta.eval(&g2))? * g1.deg_y();
            if e1 >= e2 {
                check(lhs >= rhs, || format!("eps {e1} >= {e2} but ratio order reversed"))?;
            }
            if e2 >= e1 {
                check(rhs >= lhs, || format!("eps {e2} >= {e1} but ratio order reversed"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// The minimal polynomial vanishes at every conjugate.
pub fn minpoly_resubstitution() -> Result<(), String> {
    let cfg = FieldConfig::default();
    runner()
        .run(&arb_series(-3, 3, 4), |phi| {
            let (g, _) = lift(phi.minpoly(&cfg))?;
            check(g.deg_y() == phi.polydromy(), || "deg_y of minpoly".into())?;
            for conj in lift(phi.conjugates(&cfg))? {
                check(g.eval_y(&conj).is_zero(), || format!("minpoly nonzero at {conj:?}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("star composition", star_composition as fn() -> Result<(), String>),
        ("conjugacy invariance", conjugacy_invariance),
        ("delta and lc multiplicativity", delta_lc_multiplicative),
        ("lc shape", lc_shape),
        ("delta comparison", delta_comparison),
        ("minpoly resubstitution", minpoly_resubstitution),
    ]
}
