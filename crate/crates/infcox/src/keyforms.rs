//! Key forms of a semidegree and the classification they drive.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::laurent::LaurentPoly2;
use crate::roots::dwps_roots;
use crate::semidegree::{gcd_all, Semidegree};
use crate::series::{cmp_series, Dwps, Exp};

const MAX_FORMS: usize = 4096;

/// Key forms `x, y, ..., f_n` with their values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyFormSeq {
    pub forms: Vec<LaurentPoly2>,
    pub values: Vec<i64>,
    pub last_is_polynomial: bool,
    pub all_polynomial: bool,
    pub delta_of_last: i64,
}

impl KeyFormSeq {
    pub fn last(&self) -> &LaurentPoly2 {
        self.forms.last().expect("at least x and y")
    }
}

/// Verdicts for a single semidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemidegreeClass {
    pub last_keyform_polynomial: bool,
    pub nonneg: bool,
}

/// Verdicts for a list of semidegrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub per_semidegree: Vec<SemidegreeClass>,
    pub in_s_num: bool,
    pub in_s_pol: bool,
    pub in_s_pol_plus: bool,
}

/// Finds `beta` with `target = sum beta_j values_j`, `0 <= beta_j < alpha_j`
/// for `j >= 1` and `beta_0` free.
fn decompose(target: i64, values: &[i64], alphas: &[i64]) -> Option<Vec<i64>> {
    fn go(j: usize, rest: i64, values: &[i64], alphas: &[i64], beta: &mut Vec<i64>) -> bool {
        if j == 0 {
            if rest % values[0] == 0 {
                beta[0] = rest / values[0];
                return true;
            }
            return false;
        }
        for b in 0..alphas[j] {
            beta[j] = b;
            if go(j - 1, rest - b * values[j], values, alphas, beta) {
                return true;
            }
        }
        false
    }
    let mut beta = vec![0i64; values.len()];
    if go(values.len() - 1, target, values, alphas, &mut beta) {
        Some(beta)
    } else {
        None
    }
}

/// Builds the key forms without the root check.
pub fn key_forms_unverified(delta: &Semidegree) -> Result<KeyFormSeq> {
    let mut forms = vec![LaurentPoly2::x(), LaurentPoly2::y()];
    let (v1, lc1) = delta.eval_lc(&forms[1])?;
    let mut values = vec![delta.p_tilde(), v1];
    let mut lcs = vec![FieldElem::one(), lc1.leading()];
    let mut alphas = vec![1i64];
    let mut done = !lc1.is_constant();
    while !done {
        let k = forms.len() - 1;
        if k >= MAX_FORMS {
            return Err(Error::KeyFormVerification("key form sequence did not terminate".into()));
        }
        let g = gcd_all(&values[..k]);
        let alpha = g / g.gcd(&values[k]);
        alphas.push(alpha);
        let beta = decompose(alpha * values[k], &values[..k], &alphas)
            .ok_or_else(|| Error::KeyFormVerification(format!("value {} not decomposable", alpha * values[k])))?;
        let mut mono = LaurentPoly2::one().shift_x(beta[0]);
        let mut mono_lc = FieldElem::one();
        for j in 1..k {
            if beta[j] > 0 {
                mono = mono.mul(&forms[j].pow(beta[j] as u32));
                mono_lc = mono_lc.mul(&lcs[j].pow(beta[j])?);
            }
        }
        let theta = lcs[k].pow(alpha)?.div(&mono_lc)?;
        let next = forms[k].pow(alpha as u32).sub(&mono.scale(&theta));
        if next.is_zero() {
            return Err(Error::KeyFormVerification("key form vanished".into()));
        }
        let (v, lc) = delta.eval_lc(&next)?;
        done = !lc.is_constant();
        forms.push(next);
        values.push(v);
        lcs.push(lc.leading());
    }
    let last_is_polynomial = forms.last().unwrap().is_polynomial();
    let all_polynomial = forms.iter().all(LaurentPoly2::is_polynomial);
    Ok(KeyFormSeq { delta_of_last: *values.last().unwrap(), forms, values, last_is_polynomial, all_polynomial })
}

/// Key forms, checked against the roots of the last one.
pub fn key_forms(delta: &Semidegree, cfg: &FieldConfig) -> Result<KeyFormSeq> {
    let seq = key_forms_unverified(delta)?;
    verify_root_agreement(seq.last(), delta.phi(), delta.r(), cfg)
        .map_err(|e| match e {
            Error::KeyFormVerification(m) => Error::KeyFormVerification(format!("{} for {}", m, delta)),
            other => other,
        })?;
    Ok(seq)
}

/// Checks that `f` is monic in `y` of degree the polydromy of `phi` and that
/// its roots, truncated above `r`, are exactly the conjugates of `phi`.
pub fn verify_root_agreement(f: &LaurentPoly2, phi: &Dwps, r: Exp, cfg: &FieldConfig) -> Result<()> {
    let p = phi.polydromy();
    if f.deg_y() != p {
        return Err(Error::KeyFormVerification(format!("y-degree {} differs from polydromy {}", f.deg_y(), p)));
    }
    let lead = f.lc_y();
    if lead != Dwps::monomial(FieldElem::one(), Exp::from_integer(0)) {
        return Err(Error::KeyFormVerification(format!("leading y-coefficient {} is not 1", lead)));
    }
    let roots = dwps_roots(f, r - Exp::from_integer(1), cfg)?;
    let mut got: Vec<Dwps> = roots.truncations().iter().map(|s| s.truncate_above(r)).collect();
    let mut want = phi.conjugates(cfg)?;
    got.sort_by(cmp_series);
    want.sort_by(cmp_series);
    if got != want {
        return Err(Error::KeyFormVerification(format!(
            "roots of {} do not match the conjugates of {} above {}",
            f,
            phi,
            crate::series::fmt_exp(&r)
        )));
    }
    Ok(())
}

pub fn classify_semidegree(delta: &Semidegree, cfg: &FieldConfig) -> Result<SemidegreeClass> {
    let seq = key_forms(delta, cfg)?;
    Ok(SemidegreeClass { last_keyform_polynomial: seq.last_is_polynomial, nonneg: seq.delta_of_last >= 0 })
}

pub fn classify_surface(deltas: &[Semidegree], cfg: &FieldConfig) -> Result<Classification> {
    let per: Vec<SemidegreeClass> = deltas.iter().map(|d| classify_semidegree(d, cfg)).collect::<Result<_>>()?;
    let in_s_num = per.iter().all(|c| c.last_keyform_polynomial || c.nonneg);
    let in_s_pol = per.iter().all(|c| c.last_keyform_polynomial);
    let in_s_pol_plus = in_s_pol && per.iter().all(|c| c.nonneg);
    Ok(Classification { per_semidegree: per, in_s_num, in_s_pol, in_s_pol_plus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp;

    fn s(terms: &[(i64, i64, i64)]) -> Dwps {
        Dwps::from_terms(terms.iter().map(|&(c, n, d)| (exp(n, d), FieldElem::from_i64(c))))
    }

    fn texts(seq: &KeyFormSeq) -> Vec<String> {
        seq.forms.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn table_first_row() {
        let cfg = FieldConfig::default();
        for (q, p) in [(3, 2), (1, 1), (-5, 3)] {
            let d = Semidegree::new(Dwps::zero(), exp(q, p)).unwrap();
            assert_eq!(texts(&key_forms(&d, &cfg).unwrap()), vec!["x", "y"]);
        }
    }

    #[test]
    fn table_second_row() {
        let cfg = FieldConfig::default();
        let d = Semidegree::new(s(&[(1, 5, 2)]), exp(1, 1)).unwrap();
        assert_eq!(texts(&key_forms(&d, &cfg).unwrap()), vec!["x", "y", "y^2 - x^5"]);
        let d = Semidegree::new(s(&[(3, 5, 2)]), exp(-7, 3)).unwrap();
        assert_eq!(texts(&key_forms(&d, &cfg).unwrap()), vec!["x", "y", "y^2 - 9*x^5"]);
    }

    #[test]
    fn table_third_row() {
        let cfg = FieldConfig::default();
        let d = Semidegree::new(s(&[(1, 5, 2), (1, -3, 2)]), exp(-5, 2)).unwrap();
        let seq = key_forms(&d, &cfg).unwrap();
        assert_eq!(texts(&seq), vec!["x", "y", "y^2 - x^5", "y^2 - x^5 - 2*x"]);
        assert_eq!(seq.delta_of_last, 0);
        assert!(seq.last_is_polynomial);
    }

    #[test]
    fn table_fourth_row() {
        let cfg = FieldConfig::default();
        let d = Semidegree::new(s(&[(1, 5, 2), (1, -1, 1), (1, -3, 2)]), exp(-5, 2)).unwrap();
        let seq = key_forms(&d, &cfg).unwrap();
        assert_eq!(
            texts(&seq),
            vec!["x", "y", "y^2 - x^5", "y^2 - 2*x^-1*y - x^5", "y^2 - 2*x^-1*y - x^5 - 2*x"]
        );
        assert_eq!(seq.delta_of_last, 0);
        assert!(!seq.last_is_polynomial && !seq.all_polynomial);
    }

    #[test]
    fn classification_examples() {
        let cfg = FieldConfig::default();
        let row3 = Semidegree::new(s(&[(1, 5, 2), (1, -3, 2)]), exp(-5, 2)).unwrap();
        let row4 = Semidegree::new(s(&[(1, 5, 2), (1, -1, 1), (1, -3, 2)]), exp(-5, 2)).unwrap();
        let neg = Semidegree::new(s(&[(1, -1, 2)]), exp(-1, 1)).unwrap();
        let c = |d: &Semidegree| classify_semidegree(d, &cfg).unwrap();
        assert_eq!(c(&row3), SemidegreeClass { last_keyform_polynomial: true, nonneg: true });
        assert_eq!(c(&row4), SemidegreeClass { last_keyform_polynomial: false, nonneg: true });
        assert_eq!(c(&neg), SemidegreeClass { last_keyform_polynomial: false, nonneg: false });
        let seq = key_forms(&neg, &cfg).unwrap();
        assert_eq!(seq.last().to_string(), "y^2 - x^-1");
        assert!(seq.delta_of_last < 0);
        let v = classify_surface(&[row3.clone()], &cfg).unwrap();
        assert!(v.in_s_num && v.in_s_pol && v.in_s_pol_plus);
        let v = classify_surface(&[row4], &cfg).unwrap();
        assert!(v.in_s_num && !v.in_s_pol && !v.in_s_pol_plus);
        let v = classify_surface(&[row3, neg], &cfg).unwrap();
        assert!(!v.in_s_num);
    }

    #[test]
    fn cyclotomic_coefficients() {
        let cfg = FieldConfig::default();
        let i = FieldElem::root_of_unity(4, 1);
        let phi = Dwps::from_terms(vec![(exp(2, 3), i.clone()), (exp(1, 3), FieldElem::from_i64(1))]);
        let d = Semidegree::new(phi, exp(-1, 1)).unwrap();
        let seq = key_forms(&d, &cfg).unwrap();
        assert_eq!(seq.last().deg_y(), 3);
    }
}
