//! Sparse graded polynomials over the rationals.
//!
//! Every variable carries a nonnegative degree weight. A ring may carry a
//! truncation degree (terms above it are dropped on construction and in
//! products) and a block of variables reduced modulo the coinvariant ideal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::ring::{int, Rational, YPoly};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub deg: u32,
    pub exps: Vec<u16>,
}

struct Coinvariant {
    start: usize,
    n: usize,
    memo: Mutex<HashMap<Vec<u16>, Arc<Vec<(Vec<u16>, Rational)>>>>,
}

impl Coinvariant {
    fn in_normal_form(&self, block: &[u16]) -> bool {
        block.iter().enumerate().all(|(k, &e)| (e as usize) < self.n - k)
    }

    /// Normal form of one monomial in the staircase basis.
    fn normal_form(&self, block: &[u16]) -> Arc<Vec<(Vec<u16>, Rational)>> {
        if let Some(hit) = self.memo.lock().unwrap().get(block) {
            return hit.clone();
        }
        let n = self.n;
        let res = match (0..n).find(|&k| block[k] as usize >= n - k) {
            None => vec![(block.to_vec(), Rational::one())],
            Some(k) => {
                // x_k^d = x_k^d - h_d(x_0, ..., x_k) modulo the ideal
                let d = n - k;
                let mut base = block.to_vec();
                base[k] -= d as u16;
                let mut acc: HashMap<Vec<u16>, Rational> = HashMap::new();
                for m in compositions(d, k + 1) {
                    if m[k] as usize == d {
                        continue;
                    }
                    let mut e = base.clone();
                    for (off, &a) in m.iter().enumerate() {
                        e[off] += a;
                    }
                    for (f, c) in self.normal_form(&e).iter() {
                        *acc.entry(f.clone()).or_insert_with(Rational::zero) -= c;
                    }
                }
                let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort();
                v
            }
        };
        let res = Arc::new(res);
        self.memo.lock().unwrap().insert(block.to_vec(), res.clone());
        res
    }
}

/// All exponent vectors of length `parts` summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<u16>> {
    fn rec(total: usize, parts: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if parts == 1 {
            cur.push(total as u16);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=total {
            cur.push(a as u16);
            rec(total - a, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
    trunc: Option<u32>,
    coinv: Option<Coinvariant>,
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyRing")
            .field("names", &self.names)
            .field("weights", &self.weights)
            .field("trunc", &self.trunc)
            .field("coinvariant", &self.coinv.as_ref().map(|c| (c.start, c.n)))
            .finish()
    }
}

impl PolyRing {
    pub fn new(vars: Vec<(String, u32)>, trunc: Option<u32>) -> Arc<PolyRing> {
        Arc::new(Self::build(vars, trunc, None))
    }

    /// Variables `start..start+n` (all of weight 1) are reduced modulo the
    /// ideal of positive-degree symmetric polynomials in them.
    pub fn with_coinvariant(
        vars: Vec<(String, u32)>,
        trunc: Option<u32>,
        start: usize,
        n: usize,
    ) -> Arc<PolyRing> {
        assert!(start + n <= vars.len());
        assert!(vars[start..start + n].iter().all(|v| v.1 == 1));
        let coinv = Coinvariant { start, n, memo: Mutex::new(HashMap::new()) };
        Arc::new(Self::build(vars, trunc, Some(coinv)))
    }

    fn build(vars: Vec<(String, u32)>, trunc: Option<u32>, coinv: Option<Coinvariant>) -> PolyRing {
        let (names, weights) = vars.into_iter().unzip();
        PolyRing { names, weights, trunc, coinv }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn coinvariant_block(&self) -> Option<(usize, usize)> {
        self.coinv.as_ref().map(|c| (c.start, c.n))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree_of(&self, exps: &[u16]) -> u32 {
        exps.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    fn keeps(&self, deg: u32) -> bool {
        self.trunc.is_none_or(|t| deg <= t)
    }

    /// Adds `c * x^exps` into `acc`, reducing the coinvariant block.
    fn accumulate(&self, acc: &mut HashMap<Vec<u16>, Rational>, exps: Vec<u16>, c: Rational) {
        if let Some(cv) = &self.coinv {
            let block = &exps[cv.start..cv.start + cv.n];
            if !cv.in_normal_form(block) {
                for (nf, nc) in cv.normal_form(block).iter() {
                    let mut e = exps.clone();
                    e[cv.start..cv.start + cv.n].copy_from_slice(nf);
                    *acc.entry(e).or_insert_with(Rational::zero) += &c * nc;
                }
                return;
            }
        }
        *acc.entry(exps).or_insert_with(Rational::zero) += c;
    }
}

#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Mono, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Poly {
        Poly::from_terms(ring, [(vec![0; ring.nvars()], c)])
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Poly::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Poly {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Poly::from_terms(ring, [(e, Rational::one())])
    }

    pub fn monomial(ring: &Arc<PolyRing>, exps: Vec<u16>, c: Rational) -> Poly {
        Poly::from_terms(ring, [(exps, c)])
    }

    /// Builds a polynomial from raw terms, merging duplicates, reducing the
    /// coinvariant block and applying the truncation.
    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Vec<u16>, Rational)>,
    {
        let mut acc = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars(), "exponent vector length");
            if c.is_zero() || !ring.keeps(ring.degree_of(&e)) {
                continue;
            }
            ring.accumulate(&mut acc, e, c);
        }
        Poly::collect(ring, acc)
    }

    fn collect(ring: &Arc<PolyRing>, acc: HashMap<Vec<u16>, Rational>) -> Poly {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Mono { deg: ring.degree_of(&e), exps: e }, c))
            .collect();
        Poly { ring: ring.clone(), terms }
    }

    /// A polynomial in the weight-zero variable `iy` with the given coefficients.
    pub fn from_ypoly(ring: &Arc<PolyRing>, p: &YPoly, iy: Option<usize>, y: Option<&Rational>) -> Poly {
        match (iy, y) {
            (_, Some(v)) => Poly::constant(ring, p.eval(v)),
            (Some(i), None) => Poly::from_terms(
                ring,
                p.coeffs().iter().enumerate().map(|(k, c)| {
                    let mut e = vec![0; ring.nvars()];
                    e[i] = k as u16;
                    (e, c.clone())
                }),
            ),
            (None, None) => Poly::constant(
                ring,
                p.as_constant().expect("y-dependent coefficient in a ring without y"),
            ),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> Rational {
        let m = Mono { deg: self.ring.degree_of(exps), exps: exps.to_vec() };
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest degree of a stored term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.deg)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.deg)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    pub fn component(&self, d: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.deg == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Homogeneous components `0..=top`.
    pub fn components(&self, top: u32) -> Vec<Poly> {
        let mut out: Vec<Poly> = (0..=top).map(|_| Poly::zero(&self.ring)).collect();
        for (m, c) in &self.terms {
            if m.deg <= top {
                out[m.deg as usize].terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn truncate(&self, d: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.deg <= d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    fn same_ring(&self, other: &Poly) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring.names == other.ring.names,
            "mixing polynomials from different rings"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(m);
            }
        }
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        self.same_ring(other);
        for (m, c) in &other.terms {
            let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot += a * c;
            if slot.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_trunc(other, self.ring.trunc)
    }

    /// Product keeping only terms of degree at most `bound`.
    pub fn mul_trunc(&self, other: &Poly, bound: Option<u32>) -> Poly {
        self.same_ring(other);
        let bound = match (bound, self.ring.trunc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let n = self.ring.nvars();
        let mut acc: HashMap<Vec<u16>, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            if bound.is_some_and(|t| ma.deg > t) {
                break;
            }
            for (mb, cb) in &other.terms {
                if bound.is_some_and(|t| ma.deg + mb.deg > t) {
                    break;
                }
                let e: Vec<u16> = (0..n).map(|k| ma.exps[k] + mb.exps[k]).collect();
                self.ring.accumulate(&mut acc, e, ca * cb);
            }
        }
        Poly::collect(&self.ring, acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.ring);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Substitutes a rational value for variable `i`.
    pub fn eval_var(&self, i: usize, v: &Rational) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.exps.clone();
            let k = std::mem::take(&mut e[i]);
            let mut c = c.clone();
            for _ in 0..k {
                c *= v;
            }
            (e, c)
        });
        Poly::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Moves the polynomial into `target`: variable `i` goes to `map[i]`.
    /// Terms using a variable mapped to `None` must not occur.
    pub fn transfer(&self, target: &Arc<PolyRing>, map: &[Option<usize>]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u16; target.nvars()];
            for (i, &a) in m.exps.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let j = map[i].expect("variable has no image in the target ring");
                e[j] += a;
            }
            (e, c.clone())
        });
        Poly::from_terms(target, terms.collect::<Vec<_>>())
    }

    /// Groups terms by the exponent of variable `iy`, giving a polynomial in
    /// `y` per remaining monomial.
    pub fn split_y(&self, iy: usize) -> BTreeMap<Vec<u16>, YPoly> {
        let mut out: BTreeMap<Vec<u16>, Vec<Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.exps.clone();
            let k = std::mem::take(&mut e[iy]) as usize;
            let v = out.entry(e).or_default();
            if v.len() <= k {
                v.resize(k + 1, Rational::zero());
            }
            v[k] += c;
        }
        out.into_iter().map(|(e, v)| (e, YPoly::from_coeffs(v))).filter(|(_, p)| !p.is_zero()).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.names[i].clone()
                    } else {
                        format!("{}^{}", self.ring.names[i], e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}
