//! Truncated power series operations on graded polynomials, Newton's
//! identities and generalized binomial coefficients.
//!
//! The series routines work degree by degree: a series is split into its
//! homogeneous components and inverse, exp and log are obtained from the
//! usual recurrences, so nothing above the truncation degree is formed.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::poly::{Poly, PolyRing};
use crate::ring::{int, Rational};

fn bound(p: &Poly) -> Result<u32, Error> {
    p.ring()
        .trunc()
        .ok_or_else(|| Error::MissingTruncation("series operations need a truncated ring".into()))
}

/// Degree-zero part as a plain rational, if it has no weight-zero variables.
fn rational_constant(p: &Poly) -> Option<Rational> {
    let c0 = p.component(0);
    match c0.len() {
        0 => Some(Rational::zero()),
        1 => {
            let (m, c) = c0.terms().next().unwrap();
            m.exps.iter().all(|&e| e == 0).then(|| c.clone())
        }
        _ => None,
    }
}

fn sum(ring: &Arc<PolyRing>, parts: &[Poly]) -> Poly {
    let mut out = Poly::zero(ring);
    for p in parts {
        out.add_assign(p);
    }
    out
}

pub fn series_inv(s: &Poly) -> Result<Poly, Error> {
    let top = bound(s)?;
    let c0 = rational_constant(s).filter(|c| !c.is_zero()).ok_or(Error::NonUnitConstantTerm)?;
    let inv0 = Rational::one() / &c0;
    let p = s.components(top);
    let mut q: Vec<Poly> = vec![Poly::constant(s.ring(), inv0.clone())];
    for d in 1..=top as usize {
        let mut acc = Poly::zero(s.ring());
        for j in 1..=d {
            if !p[j].is_zero() && !q[d - j].is_zero() {
                acc.add_assign(&p[j].mul(&q[d - j]));
            }
        }
        q.push(acc.scale(&-&inv0));
    }
    Ok(sum(s.ring(), &q))
}

pub fn series_exp(s: &Poly) -> Result<Poly, Error> {
    let top = bound(s)?;
    if !s.component(0).is_zero() {
        return Err(Error::BadConstantTerm);
    }
    let l = s.components(top);
    let mut p: Vec<Poly> = vec![Poly::one(s.ring())];
    for d in 1..=top as usize {
        let mut acc = Poly::zero(s.ring());
        for j in 1..=d {
            if !l[j].is_zero() && !p[d - j].is_zero() {
                acc.add_scaled(&l[j].mul(&p[d - j]), &int(j as i64));
            }
        }
        p.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(d))));
    }
    Ok(sum(s.ring(), &p))
}

pub fn series_log(s: &Poly) -> Result<Poly, Error> {
    let top = bound(s)?;
    if rational_constant(s) != Some(Rational::one()) {
        return Err(Error::BadConstantTerm);
    }
    let p = s.components(top);
    let mut l: Vec<Poly> = vec![Poly::zero(s.ring())];
    for d in 1..=top as usize {
        let mut acc = Poly::zero(s.ring());
        for j in 1..d {
            if !l[j].is_zero() && !p[d - j].is_zero() {
                acc.add_scaled(&l[j].mul(&p[d - j]), &int(j as i64));
            }
        }
        let ld = p[d].sub(&acc.scale(&Rational::new(BigInt::one(), BigInt::from(d))));
        l.push(ld);
    }
    Ok(sum(s.ring(), &l))
}

/// Power sums `p_0..p_D` of a virtual bundle from its Chern classes
/// `chern[k-1] = c_k`, with `p_0` the virtual rank.
pub fn newton_power_sums(ring: &Arc<PolyRing>, chern: &[Poly], rank: i64, d: usize) -> Vec<Poly> {
    let c = |k: usize| -> Poly { chern.get(k - 1).cloned().unwrap_or_else(|| Poly::zero(ring)) };
    let mut p = vec![Poly::constant(ring, int(rank))];
    for k in 1..=d {
        let mut acc = c(k).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let term = c(i).mul(&p[k - i]);
            acc.add_scaled(&term, &int(if i % 2 == 1 { 1 } else { -1 }));
        }
        p.push(acc);
    }
    p
}

/// Chern classes `c_1..c_D` from power sums `p_0..p_D` (inverse of
/// [`newton_power_sums`]; `p_0` is not used).
pub fn chern_from_power_sums(ring: &Arc<PolyRing>, p: &[Poly], d: usize) -> Vec<Poly> {
    let mut c = vec![Poly::one(ring)];
    for k in 1..=d {
        let mut acc = Poly::zero(ring);
        for i in 1..=k {
            let term = c[k - i].mul(&p[i]);
            acc.add_scaled(&term, &int(if i % 2 == 1 { 1 } else { -1 }));
        }
        c.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
    }
    c.remove(0);
    c
}

/// `m (m-1) ... (m-k+1) / k!` for any integer `m`.
pub fn generalized_binomial(m: i64, k: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(m - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    fn uni(trunc: u32) -> Arc<PolyRing> {
        PolyRing::new(vec![("t".into(), 1)], Some(trunc))
    }

    fn from_coeffs(r: &Arc<PolyRing>, cs: &[Rational]) -> Poly {
        Poly::from_terms(r, cs.iter().enumerate().map(|(k, c)| (vec![k as u16], c.clone())))
    }

    fn coeffs(p: &Poly, top: u32) -> Vec<Rational> {
        (0..=top).map(|k| p.coeff(&[k as u16])).collect()
    }

    #[test]
    fn inverse_examples() {
        let r = uni(3);
        assert_eq!(series_inv(&Poly::one(&r)).unwrap(), Poly::one(&r));
        let g = series_inv(&from_coeffs(&r, &[int(1), int(-1)])).unwrap();
        assert_eq!(coeffs(&g, 3), vec![int(1); 4]);
        let r2 = uni(2);
        let s = from_coeffs(&r2, &[int(1), rat(1, 2), rat(1, 12)]);
        // long division: 1/(1 + t/2 + t^2/12) = 1 - t/2 + (1/4 - 1/12) t^2
        assert_eq!(coeffs(&series_inv(&s).unwrap(), 2), vec![int(1), rat(-1, 2), rat(1, 6)]);
        assert_eq!(series_inv(&Poly::var(&r, 0)), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn exp_log_examples() {
        let r = uni(3);
        assert_eq!(series_exp(&Poly::zero(&r)).unwrap(), Poly::one(&r));
        let l = series_log(&from_coeffs(&r, &[int(1), int(1)])).unwrap();
        assert_eq!(coeffs(&l, 3), vec![int(0), int(1), rat(-1, 2), rat(1, 3)]);
        let r2 = uni(2);
        let e = series_exp(&Poly::var(&r2, 0)).unwrap();
        assert_eq!(coeffs(&e, 2), vec![int(1), int(1), rat(1, 2)]);
        assert_eq!(series_exp(&Poly::one(&r)), Err(Error::BadConstantTerm));
        assert_eq!(series_log(&Poly::var(&r, 0)), Err(Error::BadConstantTerm));
    }

    #[test]
    fn unbounded_ring_is_rejected() {
        let r = PolyRing::new(vec![("t".into(), 1)], None);
        assert!(matches!(series_inv(&Poly::one(&r)), Err(Error::MissingTruncation(_))));
    }

    #[test]
    fn newton_examples() {
        let r = PolyRing::new(vec![("t".into(), 1), ("c1".into(), 1), ("c2".into(), 2)], Some(6));
        let zero = newton_power_sums(&r, &[], 0, 3);
        assert!(zero.iter().all(|p| p.is_zero()));
        let t = Poly::var(&r, 0);
        let line = newton_power_sums(&r, &[t.clone()], 1, 3);
        assert_eq!(line[0], Poly::one(&r));
        assert_eq!(line[3], t.pow(3));
        let c1 = Poly::var(&r, 1);
        let c2 = Poly::var(&r, 2);
        let p = newton_power_sums(&r, &[c1.clone(), c2.clone()], 2, 2);
        assert_eq!(p[2], c1.mul(&c1).sub(&c2.scale(&int(2))));
    }

    #[test]
    fn binomials() {
        assert_eq!(generalized_binomial(7, 0), int(1));
        assert_eq!(generalized_binomial(-1, 2), int(1));
        assert_eq!(generalized_binomial(3, 2), int(3));
        assert_eq!(generalized_binomial(2, 3), int(0));
        // sign identity binom(m,k) = (-1)^k binom(-m+k-1, k)
        for m in -5..6 {
            for k in 0..6 {
                let s = if k % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(generalized_binomial(m, k), s * generalized_binomial(-m + k as i64 - 1, k));
            }
        }
    }

    fn arb_series(top: u32) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-6i64..7, -6i64..7), (top as usize + 1) * 3)
    }

    /// Bivariate series in (t, u) with small integer coefficients.
    fn bivariate(r: &Arc<PolyRing>, raw: &[(i64, i64)], top: u32) -> Poly {
        let mut terms = Vec::new();
        let mut it = raw.iter();
        for a in 0..=top {
            for b in 0..=(top - a) {
                if let Some(&(n, d)) = it.next() {
                    let d = if d == 0 { 1 } else { d };
                    terms.push((vec![a as u16, b as u16], rat(n, d)));
                }
            }
        }
        Poly::from_terms(r, terms)
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(raw in arb_series(4)) {
            let r = PolyRing::new(vec![("t".into(), 1), ("u".into(), 1)], Some(4));
            let s = bivariate(&r, &raw, 4);
            let s = s.sub(&s.component(0));
            let e = series_exp(&s).unwrap();
            prop_assert_eq!(series_log(&e).unwrap(), s);
        }

        #[test]
        fn inverse_is_inverse(raw in arb_series(4)) {
            let r = PolyRing::new(vec![("t".into(), 1), ("u".into(), 1)], Some(4));
            let s = bivariate(&r, &raw, 4);
            let s = s.sub(&s.component(0)).add(&Poly::constant(&r, int(3)));
            let inv = series_inv(&s).unwrap();
            prop_assert_eq!(s.mul(&inv), Poly::one(&r));
        }

        #[test]
        fn newton_round_trip(raw in proptest::collection::vec(-5i64..6, 5), rank in -3i64..4) {
            let vars = (1..=5).map(|k| (format!("p{k}"), k)).collect();
            let r = PolyRing::new(vars, Some(5));
            let mut p = vec![Poly::constant(&r, int(rank))];
            for k in 1..=5usize {
                p.push(Poly::var(&r, k - 1).add(&Poly::monomial(&r, {
                    let mut e = vec![0; 5];
                    if k > 1 { e[0] = k as u16; }
                    e
                }, int(raw[k - 1]))));
            }
            let c = chern_from_power_sums(&r, &p, 5);
            let back = newton_power_sums(&r, &c, rank, 5);
            prop_assert_eq!(back, p);
        }

        #[test]
        fn ring_axioms(a in arb_series(3), b in arb_series(3), c in arb_series(3)) {
            let r = PolyRing::new(vec![("t".into(), 1), ("u".into(), 1)], Some(6));
            let (a, b, c) = (bivariate(&r, &a, 3), bivariate(&r, &b, 3), bivariate(&r, &c, 3));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn truncation_coherence(a in arb_series(3), b in arb_series(3)) {
            let lo = PolyRing::new(vec![("t".into(), 1), ("u".into(), 1)], Some(3));
            let hi = PolyRing::new(vec![("t".into(), 1), ("u".into(), 1)], Some(6));
            let prod_hi = bivariate(&hi, &a, 3).mul(&bivariate(&hi, &b, 3));
            let prod_lo = bivariate(&lo, &a, 3).mul(&bivariate(&lo, &b, 3));
            let map = [Some(0), Some(1)];
            prop_assert_eq!(prod_hi.transfer(&lo, &map), prod_lo);
        }
    }
}
