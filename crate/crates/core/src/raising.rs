//! Raising operators, the normalized series `Q_y`, twisted classes of
//! virtual bundles and theta polynomials.
//!
//! Operator expressions with only nonnegative powers are handled as ordinary
//! polynomials in a working ring that extends a base ring by variables
//! `R_1..R_s`. Theta polynomials carry negative powers; they are never
//! expanded as series but evaluated directly at a base index vector, where
//! the expansion is finite.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use crate::error::Error;
use crate::poly::{Poly, PolyRing};
use crate::ring::{int, Rational, YPoly};
use crate::series::{generalized_binomial, newton_power_sums, series_exp, series_inv, series_log};

/// Coefficients of `t / (1 - e^{-t})` up to `t^d`.
fn todd_coeffs(d: usize) -> Vec<Rational> {
    let r = PolyRing::new(vec![("t".into(), 1)], Some(d as u32));
    let mut fact = Rational::one();
    let mut terms = Vec::new();
    for k in 0..=d {
        fact *= int(k as i64 + 1);
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        terms.push((vec![k as u16], sign / &fact));
    }
    let inv = series_inv(&Poly::from_terms(&r, terms)).expect("unit constant term");
    (0..=d).map(|k| inv.coeff(&[k as u16])).collect()
}

/// `Q_y(a) = a(1+y)/(1 - e^{-a(1+y)}) - a y`, coefficients of `a^0..a^d`.
pub fn qy_series(d: usize) -> Vec<YPoly> {
    let b = todd_coeffs(d);
    let one_plus_y = YPoly::from_ints(&[1, 1]);
    (0..=d)
        .map(|k| {
            let mut c = one_plus_y.pow(k as u32).scale(&b[k]);
            if k == 1 {
                c = &c - &YPoly::y();
            }
            c
        })
        .collect()
}

/// Coefficients of `log Q_y(a)`, starting with the (zero) constant term.
pub fn log_qy_series(d: usize) -> Vec<YPoly> {
    let r = PolyRing::new(vec![("y".into(), 0), ("a".into(), 1)], Some(d as u32));
    let q = qy_series(d);
    let mut terms = Vec::new();
    for (k, c) in q.iter().enumerate() {
        for (j, cj) in c.coeffs().iter().enumerate() {
            terms.push((vec![j as u16, k as u16], cj.clone()));
        }
    }
    let l = series_log(&Poly::from_terms(&r, terms)).expect("constant term 1");
    let by_a = l.split_y(0);
    (0..=d).map(|k| by_a.get(&vec![0, k as u16]).cloned().unwrap_or_default()).collect()
}

/// A slot's virtual bundle: its virtual rank and Chern classes `c_1, c_2, ...`
/// as elements of the base ring.
#[derive(Clone, Debug)]
pub struct EntrySpec {
    pub rank: i64,
    pub chern: Vec<Poly>,
}

impl EntrySpec {
    /// `c_m`, with `c_0 = 1` and `c_m = 0` for negative `m` or beyond the data.
    pub fn c(&self, ring: &Arc<PolyRing>, m: i64) -> Poly {
        if m < 0 {
            Poly::zero(ring)
        } else if m == 0 {
            Poly::one(ring)
        } else {
            self.chern.get(m as usize - 1).cloned().unwrap_or_else(|| Poly::zero(ring))
        }
    }
}

/// The base ring extended by raising-operator variables.
#[derive(Clone, Debug)]
pub struct OpContext {
    pub base: Arc<PolyRing>,
    pub work: Arc<PolyRing>,
    /// Index of the weight-zero variable `y` in the base ring, if symbolic.
    pub iy: Option<usize>,
    /// Fixed value of `y`, if any.
    pub y: Option<Rational>,
    pub slots: usize,
    /// Degree bound of applied classes (the base ring's truncation).
    pub trunc: u32,
    /// Degree bound of operator series (the working ring's truncation).
    pub budget: u32,
}

impl OpContext {
    /// `base` must be truncated; `R_1..R_slots` are appended after its variables.
    pub fn new(base: &Arc<PolyRing>, iy: Option<usize>, y: Option<Rational>, slots: usize) -> Result<OpContext, Error> {
        let trunc = base
            .trunc()
            .ok_or_else(|| Error::MissingTruncation("operator calculus needs a truncated base ring".into()))?;
        Self::with_budget(base, iy, y, slots, trunc)
    }

    /// As [`OpContext::new`], with operator series truncated at `budget`.
    pub fn with_budget(
        base: &Arc<PolyRing>,
        iy: Option<usize>,
        y: Option<Rational>,
        slots: usize,
        budget: u32,
    ) -> Result<OpContext, Error> {
        let trunc = base
            .trunc()
            .ok_or_else(|| Error::MissingTruncation("operator calculus needs a truncated base ring".into()))?;
        let mut vars: Vec<(String, u32)> =
            base.names().iter().cloned().zip(base.weights().iter().cloned()).collect();
        for i in 1..=slots {
            vars.push((format!("R{i}"), 1));
        }
        let work = match base.coinvariant_block() {
            Some((start, n)) => PolyRing::with_coinvariant(vars, Some(budget), start, n),
            None => PolyRing::new(vars, Some(budget)),
        };
        Ok(OpContext { base: base.clone(), work, iy, y, slots, trunc, budget })
    }

    fn r_index(&self, slot: usize) -> usize {
        self.base.nvars() + slot
    }

    /// `R_{slot+1}` (slots are zero-based).
    pub fn r(&self, slot: usize) -> Poly {
        Poly::var(&self.work, self.r_index(slot))
    }

    pub fn embed(&self, p: &Poly) -> Poly {
        let map: Vec<Option<usize>> = (0..self.base.nvars()).map(Some).collect();
        p.transfer(&self.work, &map)
    }

    pub fn lift(&self, p: &YPoly) -> Poly {
        Poly::from_ypoly(&self.work, p, self.iy, self.y.as_ref())
    }

    pub fn lift_base(&self, p: &YPoly) -> Poly {
        Poly::from_ypoly(&self.base, p, self.iy, self.y.as_ref())
    }

    /// Splits a working-ring polynomial by its `R` exponents.
    pub fn split_r(&self, p: &Poly) -> BTreeMap<Vec<i64>, Poly> {
        let nb = self.base.nvars();
        let mut groups: BTreeMap<Vec<i64>, Vec<(Vec<u16>, Rational)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let b: Vec<i64> = m.exps[nb..].iter().map(|&e| e as i64).collect();
            groups.entry(b).or_default().push((m.exps[..nb].to_vec(), c.clone()));
        }
        groups.into_iter().map(|(b, t)| (b, Poly::from_terms(&self.base, t))).collect()
    }

    fn check_entries(&self, entries: &[EntrySpec]) -> Result<(), Error> {
        for (i, e) in entries.iter().enumerate() {
            if e.chern.len() < self.budget as usize {
                return Err(Error::InsufficientChernData {
                    slot: i + 1,
                    have: e.chern.len(),
                    need: self.budget as usize,
                });
            }
        }
        Ok(())
    }
}

fn linear_form(ctx: &OpContext, combo: &[(usize, i64)]) -> Poly {
    let mut l = Poly::zero(&ctx.work);
    for &(slot, m) in combo {
        l.add_scaled(&ctx.r(slot), &int(m));
    }
    l
}

fn substitute(ctx: &OpContext, coeffs: &[YPoly], arg: &Poly) -> Poly {
    let mut out = Poly::zero(&ctx.work);
    let mut pw = Poly::one(&ctx.work);
    for c in coeffs {
        if !c.is_zero() {
            out.add_assign(&ctx.lift(c).mul(&pw));
        }
        pw = pw.mul(arg);
        if pw.is_zero() {
            break;
        }
    }
    out
}

/// `Q_y` evaluated at an integer combination of raising operators.
pub fn ty_linear(ctx: &OpContext, combo: &[(usize, i64)]) -> Poly {
    substitute(ctx, &qy_series(ctx.budget as usize), &linear_form(ctx, combo))
}

/// `log Q_y` at an integer combination of raising operators.
pub fn log_ty_linear(ctx: &OpContext, combo: &[(usize, i64)]) -> Poly {
    substitute(ctx, &log_qy_series(ctx.budget as usize), &linear_form(ctx, combo))
}

/// `log T_y(R_slot (x) E) = sum_m l_m sum_k binom(m,k) R^{m-k} p_k(E)`.
pub fn log_ty_twist(ctx: &OpContext, entry: &EntrySpec, slot: usize) -> Result<Poly, Error> {
    ctx.check_entries(std::slice::from_ref(entry)).map_err(|e| match e {
        Error::InsufficientChernData { have, need, .. } => Error::InsufficientChernData { slot: slot + 1, have, need },
        other => other,
    })?;
    let d = ctx.budget as usize;
    let chern: Vec<Poly> = entry.chern.iter().take(d).map(|c| ctx.embed(c)).collect();
    let p = newton_power_sums(&ctx.work, &chern, entry.rank, d);
    let l = log_qy_series(d);
    let r = ctx.r(slot);
    let rpow: Vec<Poly> = (0..=d).map(|k| r.pow(k as u32)).collect();
    let mut out = Poly::zero(&ctx.work);
    for (m, lm) in l.iter().enumerate().skip(1) {
        if lm.is_zero() {
            continue;
        }
        let mut inner = Poly::zero(&ctx.work);
        for k in 0..=m {
            inner.add_scaled(&rpow[m - k].mul(&p[k]), &generalized_binomial(m as i64, k as u32));
        }
        out.add_assign(&ctx.lift(lm).mul(&inner));
    }
    Ok(out)
}

pub fn ty_twist(ctx: &OpContext, entry: &EntrySpec, slot: usize) -> Result<Poly, Error> {
    series_exp(&log_ty_twist(ctx, entry, slot)?)
}

/// `c(E (x) L)` with `c_1(L) = R_slot`: `sum_k c_k(E) (1+R)^{e-k}`.
pub fn virtual_chern_twisted(ctx: &OpContext, entry: &EntrySpec, slot: usize) -> Result<Poly, Error> {
    ctx.check_entries(std::slice::from_ref(entry))?;
    let d = ctx.budget as usize;
    let r = ctx.r(slot);
    let mut out = Poly::zero(&ctx.work);
    for k in 0..=d {
        let ck = ctx.embed(&entry.c(&ctx.base, k as i64));
        if ck.is_zero() {
            continue;
        }
        let mut binom_series = Poly::zero(&ctx.work);
        for j in 0..=(d - k) {
            binom_series.add_scaled(&r.pow(j as u32), &generalized_binomial(entry.rank - k as i64, j as u32));
        }
        out.add_assign(&ck.mul(&binom_series));
    }
    Ok(out)
}

fn check_rho(rho: &[usize]) -> Result<(), Error> {
    for (i, &r) in rho.iter().enumerate() {
        if r > i {
            return Err(Error::InvalidRho { index: i + 1, value: r });
        }
    }
    Ok(())
}

/// Theta polynomial evaluated at the base index `mu`: final index vectors
/// with their integer coefficients.
///
/// Every pair `j < i` contributes `(1 - R_j/R_i)/(1 + R_j/R_i)` when
/// `j+1 <= rho_i` (one-based) and `1 - R_j/R_i` otherwise, expanded in
/// powers of `R_j/R_i`. Slots are processed from the last one down; a slot
/// is never lowered below zero, which keeps the sum finite.
pub fn theta_terms(mu: &[i64], rho: &[usize]) -> Result<BTreeMap<Vec<i64>, i64>, Error> {
    check_rho(rho)?;
    assert_eq!(mu.len(), rho.len());
    let mut out = BTreeMap::new();
    if mu.iter().any(|&m| m < 0) {
        return Ok(out);
    }
    let mut cur = mu.to_vec();
    theta_rec(mu.len(), rho, &mut cur, 1, &mut out);
    out.retain(|_, c| *c != 0);
    Ok(out)
}

fn theta_rec(i: usize, rho: &[usize], cur: &mut Vec<i64>, coeff: i64, out: &mut BTreeMap<Vec<i64>, i64>) {
    if i == 0 {
        *out.entry(cur.clone()).or_insert(0) += coeff;
        return;
    }
    let slot = i - 1;
    let budget = cur[slot];
    lower_rec(slot, 0, budget, rho, cur, coeff, out);
}

/// Chooses the exponent of `R_j/R_slot` for `j = 0..slot`.
fn lower_rec(
    slot: usize,
    j: usize,
    budget: i64,
    rho: &[usize],
    cur: &mut Vec<i64>,
    coeff: i64,
    out: &mut BTreeMap<Vec<i64>, i64>,
) {
    if j == slot {
        theta_rec(slot, rho, cur, coeff, out);
        return;
    }
    let pfaff_pair = j < rho[slot];
    let max_e = if pfaff_pair { budget } else { budget.min(1) };
    for e in 0..=max_e {
        let c = if e == 0 {
            1
        } else if pfaff_pair {
            if e % 2 == 0 { 2 } else { -2 }
        } else {
            -1
        };
        cur[slot] -= e;
        cur[j] += e;
        lower_rec(slot, j + 1, budget - e, rho, cur, coeff * c, out);
        cur[slot] += e;
        cur[j] -= e;
    }
}

/// Operator series in `R_1..R_s` with possibly negative exponents and
/// coefficients in the base ring.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries {
    pub slots: usize,
    pub trunc: u32,
    pub terms: BTreeMap<Vec<i64>, Poly>,
}

impl OperatorSeries {
    pub fn from_working(ctx: &OpContext, p: &Poly) -> OperatorSeries {
        OperatorSeries { slots: ctx.slots, trunc: ctx.budget, terms: ctx.split_r(p) }
    }

    /// Back to a working-ring polynomial; all exponents must be nonnegative.
    pub fn to_working(&self, ctx: &OpContext) -> Poly {
        let nb = ctx.base.nvars();
        let mut terms = Vec::new();
        for (a, c) in &self.terms {
            assert!(a.iter().all(|&e| e >= 0), "negative exponent in a polynomial operator");
            for (m, q) in c.terms() {
                let mut e = m.exps.clone();
                e.extend(a.iter().map(|&x| x as u16));
                debug_assert_eq!(e.len(), nb + ctx.slots);
                terms.push((e, q.clone()));
            }
        }
        Poly::from_terms(&ctx.work, terms)
    }

    /// Product, keeping terms with `sum(a) + deg(coeff) <= trunc`.
    pub fn mul(&self, other: &OperatorSeries) -> OperatorSeries {
        let mut terms: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let shift: i64 = e.iter().sum();
                let room = self.trunc as i64 - shift.max(0);
                if room < 0 {
                    continue;
                }
                let c = ca.mul_trunc(cb, Some(room as u32));
                if c.is_zero() {
                    continue;
                }
                terms.entry(e).or_insert_with(|| Poly::zero(ca.ring())).add_assign(&c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        OperatorSeries { slots: self.slots, trunc: self.trunc, terms }
    }
}

/// The theta operator, expanded as far as it can act on `lambda`.
pub fn theta_operator(ctx: &OpContext, lambda: &[i64], rho: &[usize]) -> Result<OperatorSeries, Error> {
    let terms = theta_terms(lambda, rho)?
        .into_iter()
        .map(|(idx, c)| {
            let a: Vec<i64> = idx.iter().zip(lambda).map(|(x, l)| x - l).collect();
            (a, Poly::constant(&ctx.base, int(c)))
        })
        .collect();
    Ok(OperatorSeries { slots: lambda.len(), trunc: ctx.trunc, terms })
}

/// `prod_i c(i)_{idx_i}` in the base ring.
pub fn chern_product(ring: &Arc<PolyRing>, entries: &[EntrySpec], idx: &[i64], bound: Option<u32>) -> Poly {
    let mut acc = Poly::one(ring);
    for (e, &m) in entries.iter().zip(idx) {
        if m == 0 {
            continue;
        }
        acc = acc.mul_trunc(&e.c(ring, m), bound);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Each term `(a, coeff)` gives `coeff * prod_i c(i)_{base_i + a_i}`.
pub fn apply_operator(ctx: &OpContext, op: &OperatorSeries, base: &[i64], entries: &[EntrySpec]) -> Poly {
    assert_eq!(base.len(), op.slots);
    let mut out = Poly::zero(&ctx.base);
    for (a, c) in &op.terms {
        let idx: Vec<i64> = base.iter().zip(a).map(|(x, y)| x + y).collect();
        let prod = chern_product(&ctx.base, entries, &idx, Some(ctx.trunc));
        out.add_assign(&c.mul(&prod));
    }
    out
}

/// `sum_b P_b * Theta(lambda + b)` for a prefactor `P` with nonnegative
/// powers of the raising operators.
pub fn apply_with_theta(
    ctx: &OpContext,
    prefactor: &Poly,
    lambda: &[i64],
    rho: &[usize],
    entries: &[EntrySpec],
) -> Result<Poly, Error> {
    check_rho(rho)?;
    let weight: i64 = lambda.iter().sum();
    let mut by_index: HashMap<Vec<i64>, Poly> = HashMap::new();
    for (b, coeff) in ctx.split_r(prefactor) {
        let mu: Vec<i64> = lambda.iter().zip(&b).map(|(l, x)| l + x).collect();
        if weight + b.iter().sum::<i64>() > ctx.trunc as i64 {
            continue;
        }
        for (idx, c) in theta_terms(&mu, rho)? {
            by_index
                .entry(idx)
                .or_insert_with(|| Poly::zero(&ctx.base))
                .add_scaled(&coeff, &int(c));
        }
    }
    let mut keys: Vec<_> = by_index.keys().cloned().collect();
    keys.sort();
    let mut out = Poly::zero(&ctx.base);
    for idx in keys {
        let coeff = &by_index[&idx];
        if coeff.is_zero() {
            continue;
        }
        let deg: i64 = idx.iter().sum();
        let prod = chern_product(&ctx.base, entries, &idx, Some(ctx.trunc));
        if prod.is_zero() {
            continue;
        }
        let room = ctx.trunc as i64 - deg;
        out.add_assign(&coeff.truncate(room.max(0) as u32).mul(&prod));
    }
    Ok(out)
}

/// Value of the two-slot Pfaffian entry at indices `(a, b)`.
fn pfaffian_pair(ring: &Arc<PolyRing>, ei: &EntrySpec, ej: &EntrySpec, a: i64, b: i64, bound: Option<u32>) -> Poly {
    let mut out = ei.c(ring, a).mul_trunc(&ej.c(ring, b), bound);
    for k in 1..=b.max(0) {
        let t = ei.c(ring, a + k).mul_trunc(&ej.c(ring, b - k), bound);
        out.add_scaled(&t, &int(if k % 2 == 0 { 2 } else { -2 }));
    }
    out
}

fn pfaffian(m: &[Vec<Poly>], rows: &[usize], ring: &Arc<PolyRing>, bound: Option<u32>) -> Poly {
    if rows.is_empty() {
        return Poly::one(ring);
    }
    let first = rows[0];
    let mut out = Poly::zero(ring);
    for (pos, &other) in rows.iter().enumerate().skip(1) {
        let rest: Vec<usize> = rows.iter().copied().filter(|&r| r != first && r != other).collect();
        let minor = pfaffian(m, &rest, ring, bound);
        let t = m[first][other].mul_trunc(&minor, bound);
        out.add_scaled(&t, &int(if pos % 2 == 1 { 1 } else { -1 }));
    }
    out
}

/// Schur Pfaffian of two-slot values; an odd number of slots is padded with
/// a slot of index 0 whose entry is 1.
pub fn pfaffian_theta(ring: &Arc<PolyRing>, lambda: &[i64], entries: &[EntrySpec], bound: Option<u32>) -> Poly {
    let mut lam = lambda.to_vec();
    let mut ents = entries.to_vec();
    if lam.len() % 2 == 1 {
        lam.push(0);
        ents.push(EntrySpec { rank: 0, chern: Vec::new() });
    }
    let n = lam.len();
    let mut m = vec![vec![Poly::zero(ring); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            m[i][j] = pfaffian_pair(ring, &ents[i], &ents[j], lam[i], lam[j], bound);
        }
    }
    let rows: Vec<usize> = (0..n).collect();
    pfaffian(&m, &rows, ring, bound)
}

/// `det[c(i)_{lambda_i + j - i}]`.
pub fn schur_det_theta(ring: &Arc<PolyRing>, lambda: &[i64], entries: &[EntrySpec], bound: Option<u32>) -> Poly {
    let n = lambda.len();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| entries[i].c(ring, lambda[i] + j as i64 - i as i64)).collect())
        .collect();
    fn det(m: &[Vec<Poly>], cols: &[usize], row: usize, ring: &Arc<PolyRing>, bound: Option<u32>) -> Poly {
        if cols.is_empty() {
            return Poly::one(ring);
        }
        let mut out = Poly::zero(ring);
        for (pos, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = m[row][c].mul_trunc(&det(m, &rest, row + 1, ring, bound), bound);
            out.add_scaled(&t, &int(if pos % 2 == 0 { 1 } else { -1 }));
        }
        out
    }
    let cols: Vec<usize> = (0..n).collect();
    det(&m, &cols, 0, ring, bound)
}

/// Base ring with inert symbols `c(i)_m` (weight `m`) for `i = 1..slots`,
/// `m = 1..trunc`, optionally preceded by a weight-zero `y`.
pub fn abstract_ring(slots: usize, trunc: u32, symbolic_y: bool) -> (Arc<PolyRing>, Option<usize>) {
    let mut vars = Vec::new();
    if symbolic_y {
        vars.push(("y".to_string(), 0));
    }
    for i in 1..=slots {
        for m in 1..=trunc {
            vars.push((format!("c({i})_{m}"), m));
        }
    }
    (PolyRing::new(vars, Some(trunc)), symbolic_y.then_some(0))
}

/// Inert entries `c(i)_m` of [`abstract_ring`].
pub fn abstract_entries(ring: &Arc<PolyRing>, ranks: &[i64]) -> Vec<EntrySpec> {
    let trunc = ring.trunc().expect("abstract ring is truncated");
    ranks
        .iter()
        .enumerate()
        .map(|(i, &rank)| EntrySpec {
            rank,
            chern: (1..=trunc)
                .map(|m| Poly::var(ring, ring.var_index(&format!("c({})_{m}", i + 1)).unwrap()))
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    fn ctx(slots: usize, trunc: u32, symbolic: bool, y: Option<Rational>) -> (OpContext, Vec<EntrySpec>) {
        let (base, iy) = abstract_ring(slots, trunc, symbolic);
        let entries = abstract_entries(&base, &vec![0; slots]);
        (OpContext::new(&base, iy, y, slots).unwrap(), entries)
    }

    fn sym(ring: &Arc<PolyRing>, i: usize, m: usize) -> Poly {
        Poly::var(ring, ring.var_index(&format!("c({i})_{m}")).unwrap())
    }

    #[test]
    fn qy_low_order() {
        let q = qy_series(2);
        assert_eq!(q[0], YPoly::one());
        assert_eq!(q[1], YPoly::from_coeffs(vec![rat(1, 2), rat(-1, 2)]));
        assert_eq!(q[2], YPoly::from_coeffs(vec![rat(1, 12), rat(1, 6), rat(1, 12)]));
        let at = |y: i64| q.iter().map(|c| c.eval(&int(y))).collect::<Vec<_>>();
        assert_eq!(at(-1), vec![int(1), int(1), int(0)]);
        assert_eq!(at(0), vec![int(1), rat(1, 2), rat(1, 12)]);
        // at y = 1 the series is a/tanh(a), whose a^2 coefficient is 1/3
        assert_eq!(at(1)[2], rat(1, 3));
    }

    #[test]
    fn ty_linear_examples() {
        let (c, _) = ctx(2, 1, false, Some(int(-1)));
        assert_eq!(ty_linear(&c, &[(0, 1)]), Poly::one(&c.work).add(&c.r(0)));
        let (c, _) = ctx(2, 1, true, None);
        let half = |p: &Poly| p.scale(&rat(1, 2));
        let one_minus_y = Poly::one(&c.work).sub(&Poly::var(&c.work, 0));
        let expect = Poly::one(&c.work).add(&half(&one_minus_y.mul(&c.r(1).sub(&c.r(0)))));
        assert_eq!(ty_linear(&c, &[(1, 1), (0, -1)]), expect);
        let expect2 = Poly::one(&c.work).add(&one_minus_y.mul(&c.r(1)));
        assert_eq!(ty_linear(&c, &[(1, 2)]), expect2);
        // the log form exponentiates back
        assert_eq!(series_exp(&log_ty_linear(&c, &[(1, 2)])).unwrap(), expect2);
    }

    #[test]
    fn twist_of_zero_and_line_bundles() {
        let (c, _) = ctx(1, 4, true, None);
        let zero = EntrySpec { rank: 0, chern: vec![Poly::zero(&c.base); 4] };
        assert_eq!(ty_twist(&c, &zero, 0).unwrap(), Poly::one(&c.work));
        // a line bundle with root t = c(1)_1 (take c_k = 0 for k > 1)
        let t = sym(&c.base, 1, 1);
        let mut ch = vec![Poly::zero(&c.base); 4];
        ch[0] = t.clone();
        let line = EntrySpec { rank: 1, chern: ch };
        let arg = c.r(0).add(&c.embed(&t));
        let expect = substitute(&c, &qy_series(4), &arg);
        assert_eq!(ty_twist(&c, &line, 0).unwrap(), expect);
    }

    #[test]
    fn twist_collapses_to_total_chern_class() {
        let (c, entries) = ctx(1, 3, false, Some(int(-1)));
        let e = EntrySpec { rank: 2, chern: entries[0].chern.clone() };
        let tw = ty_twist(&c, &e, 0).unwrap();
        let r0 = c.split_r(&tw).remove(&vec![0]).unwrap();
        let expect = Poly::one(&c.base).add(&sym(&c.base, 1, 1)).add(&sym(&c.base, 1, 2)).add(&sym(&c.base, 1, 3));
        assert_eq!(r0, expect);
    }

    #[test]
    fn virtual_chern_examples() {
        let (c, _) = ctx(1, 3, false, Some(int(-1)));
        let trivial = EntrySpec { rank: -2, chern: vec![Poly::zero(&c.base); 3] };
        let mut expect = Poly::zero(&c.work);
        for j in 0..=3 {
            expect.add_scaled(&c.r(0).pow(j), &generalized_binomial(-2, j));
        }
        assert_eq!(virtual_chern_twisted(&c, &trivial, 0).unwrap(), expect);
        let c1 = sym(&c.base, 1, 1);
        let mut ch = vec![Poly::zero(&c.base); 3];
        ch[0] = c1.clone();
        let line = EntrySpec { rank: 1, chern: ch };
        let v = virtual_chern_twisted(&c, &line, 0).unwrap();
        assert_eq!(v.component(1), c.r(0).add(&c.embed(&c1)));
        let short = EntrySpec { rank: 1, chern: vec![] };
        assert!(matches!(virtual_chern_twisted(&c, &short, 0), Err(Error::InsufficientChernData { .. })));
    }

    #[test]
    fn theta_examples() {
        let (c, e) = ctx(2, 3, false, Some(int(-1)));
        let b = &c.base;
        let op = theta_operator(&c, &[1], &[0]).unwrap();
        let (c1, e1) = ctx(1, 3, false, Some(int(-1)));
        assert_eq!(apply_operator(&c1, &theta_operator(&c1, &[1], &[0]).unwrap(), &[1], &e1), sym(&c1.base, 1, 1));
        assert_eq!(op.terms.len(), 1);
        let det = sym(b, 1, 2).mul(&sym(b, 2, 1)).sub(&sym(b, 1, 3));
        let op0 = theta_operator(&c, &[2, 1], &[0, 0]).unwrap();
        assert_eq!(apply_operator(&c, &op0, &[2, 1], &e), det);
        let pf = sym(b, 1, 2).mul(&sym(b, 2, 1)).sub(&sym(b, 1, 3).scale(&int(2)));
        let op1 = theta_operator(&c, &[2, 1], &[0, 1]).unwrap();
        assert_eq!(apply_operator(&c, &op1, &[2, 1], &e), pf);
        assert_eq!(pfaffian_theta(b, &[2, 1], &e, Some(3)), pf);
        assert_eq!(schur_det_theta(b, &[2, 1], &e, Some(3)), det);
        assert!(matches!(theta_terms(&[2, 1], &[0, 2]), Err(Error::InvalidRho { .. })));
    }

    #[test]
    fn pfaffian_and_determinant_examples() {
        let (c, e) = ctx(2, 4, false, Some(int(-1)));
        let b = &c.base;
        assert_eq!(pfaffian_theta(b, &[2], &e[..1], Some(4)), sym(b, 1, 2));
        let expect = sym(b, 1, 3).mul(&sym(b, 2, 1)).sub(&sym(b, 1, 4).scale(&int(2)));
        assert_eq!(pfaffian_theta(b, &[3, 1], &e, Some(4)), expect);
        assert_eq!(schur_det_theta(b, &[1], &e[..1], Some(4)), sym(b, 1, 1));
        let expect = sym(b, 1, 1).mul(&sym(b, 2, 1)).sub(&sym(b, 1, 2));
        assert_eq!(schur_det_theta(b, &[1, 1], &e, Some(4)), expect);
    }

    #[test]
    fn apply_examples() {
        let (c, e) = ctx(2, 7, false, Some(int(-1)));
        let b = &c.base;
        let id = OperatorSeries::from_working(&c, &Poly::one(&c.work));
        assert_eq!(apply_operator(&c, &id, &[4, 2], &e), sym(b, 1, 4).mul(&sym(b, 2, 2)));
        let r1 = OperatorSeries::from_working(&c, &c.r(0));
        assert_eq!(apply_operator(&c, &r1, &[4, 2], &e), sym(b, 1, 5).mul(&sym(b, 2, 2)));
        let mut terms = BTreeMap::new();
        terms.insert(vec![3, -3], Poly::one(b));
        let cube = OperatorSeries { slots: 2, trunc: 7, terms };
        assert!(apply_operator(&c, &cube, &[2, 1], &e).is_zero());
    }

    #[test]
    fn theta_is_degree_preserving() {
        for rho in [[0, 0, 0], [0, 1, 1], [0, 1, 2], [0, 0, 1]] {
            for (idx, _) in theta_terms(&[5, 3, 1], &rho).unwrap() {
                assert_eq!(idx.iter().sum::<i64>(), 9);
                assert!(idx.iter().all(|&x| x >= 0));
            }
        }
    }

    fn strict_partitions(max_size: i64, max_len: usize) -> Vec<Vec<i64>> {
        fn rec(rest: i64, below: i64, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if len == 0 {
                return;
            }
            for p in (1..below.min(rest + 1)).rev() {
                cur.push(p);
                rec(rest - p, p, len - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(max_size, max_size + 1, max_len, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn pfaffian_agrees_with_theta() {
        let (c, e) = ctx(4, 8, false, Some(int(-1)));
        for lam in strict_partitions(8, 4) {
            let s = lam.len();
            let rho: Vec<usize> = (0..s).collect();
            let op = theta_operator(&c, &lam, &rho).unwrap();
            let mut padded = lam.clone();
            padded.resize(4, 0);
            let mut op4 = OperatorSeries { slots: 4, trunc: 8, terms: BTreeMap::new() };
            for (a, coef) in op.terms {
                let mut a4 = a.clone();
                a4.resize(4, 0);
                op4.terms.insert(a4, coef);
            }
            let via_theta = apply_operator(&c, &op4, &padded, &e);
            assert_eq!(via_theta, pfaffian_theta(&c.base, &lam, &e[..s], Some(8)), "lambda {lam:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn twist_is_multiplicative(a in proptest::collection::vec(-3i64..4, 6), ra in -2i64..3, rb in -2i64..3) {
            // two entries with random Chern data in the symbols of slot 1
            let (c, _) = ctx(1, 5, true, None);
            let base = &c.base;
            let mk = |coef: &[i64]| -> Vec<Poly> {
                (1..=5).map(|m| {
                    let mut p = sym(base, 1, m);
                    if m <= coef.len() { p = p.scale(&int(coef[m - 1])); }
                    p
                }).collect()
            };
            let ea = EntrySpec { rank: ra, chern: mk(&a[..3]) };
            let eb = EntrySpec { rank: rb, chern: mk(&a[3..]) };
            // c(A + B) = c(A) c(B)
            let total = |e: &EntrySpec| {
                let mut t = Poly::one(base);
                for x in &e.chern { t = t.add(x); }
                t
            };
            let sum_total = total(&ea).mul(&total(&eb));
            let sum_chern: Vec<Poly> = (1..=5).map(|m| sum_total.component(m)).collect();
            let es = EntrySpec { rank: ra + rb, chern: sum_chern };
            let lhs = ty_twist(&c, &es, 0).unwrap();
            let rhs = ty_twist(&c, &ea, 0).unwrap().mul(&ty_twist(&c, &eb, 0).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
