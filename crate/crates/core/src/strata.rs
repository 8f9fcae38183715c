//! Stratification of a locus by jump sequences `k`, and the inclusion-exclusion
//! recovering the class of the locus from classes of resolutions.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cells::CellModel;
use crate::error::Error;
use crate::loci::{resolution_class, rho_of, Family, LocusSpec, Model};
use crate::partition::{strict_inside, Partition};
use crate::poly::Poly;
use crate::ring::{int, Rational, YPoly};

pub use crate::partition::count_strict_inside;

/// Weakly increasing jump sequence, one-based values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KSeq(pub Vec<i64>);

impl KSeq {
    pub fn identity(s: usize) -> KSeq {
        KSeq((1..=s as i64).collect())
    }

    /// `sum (k_i - i)`
    pub fn kbar(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &k)| k - (i as i64 + 1)).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.kbar() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataTerm {
    pub lambda_plus: Partition,
    pub kseq: KSeq,
    pub weight: YPoly,
}

/// `rho_k` (one-based) of the spec, `None` past the last slot.
fn rho_at(rho: &[usize], k: i64) -> Option<i64> {
    rho.get((k - 1) as usize).map(|&r| r as i64)
}

fn upper_bound(spec: &LocusSpec, i: usize) -> i64 {
    (spec.n + 1 - spec.q[i]).min(spec.n + 1 - spec.p)
}

fn admissible(spec: &LocusSpec, rho: &[usize], k: &[i64]) -> bool {
    let (q, a) = (&spec.q, spec.a());
    if a >= 1 && a < k.len() {
        let slack = -q[a] + 0.max(q[a - 1] + q[a] - 1);
        if k[a] - k[a - 1] > slack {
            return false;
        }
    }
    // rho is only defined on 1..=s; a step that needs it further out is rejected
    for i in (a + 1)..k.len() {
        match (rho_at(rho, k[i - 1]), rho_at(rho, k[i])) {
            (Some(r0), Some(r1)) => {
                if k[i] - k[i - 1] + r0 - r1 > q[i - 1] - q[i] {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Admissible sequences, in lexicographic order.
pub fn enumerate_k(spec: &LocusSpec) -> Vec<KSeq> {
    fn rec(spec: &LocusSpec, rho: &[usize], cur: &mut Vec<i64>, out: &mut Vec<KSeq>) {
        let i = cur.len();
        if i == spec.s() {
            if admissible(spec, rho, cur) {
                out.push(KSeq(cur.clone()));
            }
            return;
        }
        let lo = (i as i64 + 1).max(cur.last().copied().unwrap_or(1));
        for k in lo..=upper_bound(spec, i) {
            cur.push(k);
            rec(spec, rho, cur, out);
            cur.pop();
        }
    }
    let rho = spec.rho();
    let mut out = Vec::new();
    rec(spec, &rho, &mut Vec::new(), &mut out);
    out
}

/// The partition of the stratum indexed by `k`.
pub fn lambda_plus(spec: &LocusSpec, k: &KSeq) -> Result<Partition, Error> {
    let (q, p, a) = (&spec.q, spec.p, spec.a());
    let k = &k.0;
    if k.len() != spec.s() {
        return Err(Error::InvalidSpec(format!("k has length {}, expected {}", k.len(), spec.s())));
    }
    let rho = spec.rho();
    let len = *k.last().unwrap() as usize;
    let mut parts: Vec<Option<i64>> = vec![None; len];
    for i in 0..spec.s() {
        let pos = (k[i] - 1) as usize;
        if parts[pos].is_some() {
            continue;
        }
        let v = if i < a {
            q[i] + p - 1
        } else {
            let r = rho_at(&rho, k[i]).ok_or_else(|| {
                Error::AmbiguousFill(format!("k = {k:?}: rho_{} is undefined for s = {}", k[i], spec.s()))
            })?;
            q[i] + p - 1 + k[i] - r
        };
        parts[pos] = Some(v);
    }
    // strict below position k_a, weak above it
    let ka = if a == 0 { 0 } else { k[a - 1] };
    let mut lam = vec![0i64; len];
    for m in (0..len).rev() {
        lam[m] = match parts[m] {
            Some(v) => v,
            None if (m as i64 + 1) < ka => lam[m + 1] + 1,
            None => lam[m + 1],
        };
    }
    for m in 0..len.saturating_sub(1) {
        let strict = (m as i64 + 1) < ka;
        if lam[m] < lam[m + 1] || (strict && lam[m] == lam[m + 1]) {
            return Err(Error::AmbiguousFill(format!("k = {k:?} anchors {parts:?} admit no fill")));
        }
    }
    if lam.iter().any(|&x| x <= 0) {
        return Err(Error::AmbiguousFill(format!("k = {k:?} gives nonpositive parts {lam:?}")));
    }
    Ok(Partition::new(lam))
}

/// `(-y)^d`
pub fn chi_y_affine(d: usize) -> YPoly {
    YPoly::neg_y_pow(d)
}

/// Strata with weights `(-y)^kbar`; sequences whose fill fails are dropped and
/// reported in the second component.
pub fn strata_expansion(spec: &LocusSpec) -> (Vec<StrataTerm>, Vec<String>) {
    let mut terms = Vec::new();
    let mut dropped = Vec::new();
    for k in enumerate_k(spec) {
        match lambda_plus(spec, &k) {
            Ok(lp) => {
                let weight = chi_y_affine(k.kbar().max(0) as usize);
                terms.push(StrataTerm { lambda_plus: lp, kseq: k, weight });
            }
            Err(e) => dropped.push(format!("q = {:?}, k = {:?}: {e}", spec.q, k.0)),
        }
    }
    (terms, dropped)
}

/// The spec with the same family, `n` and `p` whose partition is `lam`.
pub fn spec_from_partition(lam: &Partition, p: i64, n: i64, family: Family) -> Result<LocusSpec, Error> {
    let (mut found, notes) = preimages(lam, p, n, family);
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::NoPreimage(format!("{lam} with p = {p}, n = {n}: {}", notes.join("; ")))),
        _ => {
            let qs: Vec<_> = found.iter().map(|s| s.q.clone()).collect();
            Err(Error::AmbiguousPreimage(format!("{lam} with p = {p}, n = {n}: {qs:?}")))
        }
    }
}

/// Spec of the stratum `k`. When the partition has several preimages, the one
/// keeping each negative `q_i` at its anchor `k_i` is chosen.
pub fn stratum_spec(spec: &LocusSpec, k: &KSeq) -> Result<LocusSpec, Error> {
    let lam = lambda_plus(spec, k)?;
    let (mut found, notes) = preimages(&lam, spec.p, spec.n, spec.family);
    match found.len() {
        0 => return Err(Error::NoPreimage(format!("stratum {:?} of q = {:?}: {lam}: {}", k.0, spec.q, notes.join("; ")))),
        1 => return Ok(found.pop().unwrap()),
        _ => {}
    }
    let mut anchored: Vec<LocusSpec> = found
        .iter()
        .filter(|sp| {
            k.0.iter()
                .enumerate()
                .filter(|&(i, _)| spec.q[i] < 0 && k.0[..i].iter().all(|&x| x != k.0[i]))
                .all(|(i, &ki)| sp.q.get((ki - 1) as usize) == Some(&spec.q[i]))
        })
        .cloned()
        .collect();
    if anchored.len() == 1 {
        return Ok(anchored.pop().unwrap());
    }
    let qs: Vec<_> = found.iter().map(|s| s.q.clone()).collect();
    Err(Error::AmbiguousPreimage(format!("stratum {:?} of q = {:?}: {lam} has {qs:?}", k.0, spec.q)))
}

/// Every valid spec with partition `lam`, and notes on rejected candidates.
fn preimages(lam: &Partition, p: i64, n: i64, family: Family) -> (Vec<LocusSpec>, Vec<String>) {
    fn extend(parts: &[i64], p: i64, n: i64, q: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = q.len();
        if i == parts.len() {
            out.push(q.clone());
            return;
        }
        for c in -n + 1..0 {
            q.push(c);
            if c + p - 1 + i as i64 + 1 - rho_of(q)[i] as i64 == parts[i] {
                extend(parts, p, n, q, out);
            }
            q.pop();
        }
    }
    let parts = lam.parts();
    let prefix = parts.iter().take_while(|&&x| x > p - 1).count();
    let mut found = Vec::new();
    let mut notes = Vec::new();
    for a in 0..=prefix {
        let mut cands = Vec::new();
        let mut q: Vec<i64> = parts[..a].iter().map(|&x| x - p + 1).collect();
        extend(parts, p, n, &mut q, &mut cands);
        if cands.is_empty() {
            notes.push(format!("split {a}: no negative tail"));
        }
        for q in cands {
            match LocusSpec::new(family, n, p, q.clone()) {
                Ok(sp) if sp.lambda() == *lam => found.push(sp),
                Ok(_) => notes.push(format!("split {a}: q = {q:?} does not round-trip")),
                Err(e) => notes.push(format!("split {a}: q = {q:?}: {e}")),
            }
        }
    }
    (found, notes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub spec: LocusSpec,
    pub lambda: Partition,
    pub coeff: YPoly,
}

/// `T_y` of a locus as a combination of resolution classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotivicExpansion {
    pub spec: LocusSpec,
    /// Sorted by `(|lambda|, lambda)`; zero coefficients are kept.
    pub terms: Vec<ExpansionTerm>,
    pub diagnostics: Vec<String>,
}

impl MotivicExpansion {
    pub fn coeff(&self, lam: &Partition) -> YPoly {
        self.terms.iter().find(|t| t.lambda == *lam).map(|t| t.coeff.clone()).unwrap_or_default()
    }

    /// `sum c_mu(y) * resolution_class(mu)` in the model.
    pub fn evaluate(&self, model: &dyn Model) -> Result<Poly, Error> {
        let ring = model.base();
        let mut out = Poly::zero(ring);
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let c = Poly::from_ypoly(ring, &t.coeff, model.iy(), model.y());
            out.add_assign(&c.mul(&resolution_class(&t.spec, model)?));
        }
        Ok(out)
    }
}

const MAX_DEPTH: usize = 64;

/// How a resolution is split into closures of strata.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrataSource {
    /// Fibers of the resolution over the Schubert cells of the ambient space.
    #[default]
    Cells,
    /// The `k`-sequence rules of [`strata_expansion`].
    Rules,
}

struct Solver {
    source: StrataSource,
    memo: HashMap<LocusSpec, BTreeMap<LocusSpec, YPoly>>,
    diagnostics: Vec<String>,
}

impl Solver {
    /// Non-identity strata of `spec` with their weights.
    fn strata(&mut self, spec: &LocusSpec) -> Result<Vec<(LocusSpec, YPoly)>, Error> {
        match self.source {
            StrataSource::Rules => {
                let (terms, dropped) = strata_expansion(spec);
                self.diagnostics.extend(dropped.into_iter().map(|d| format!("dropped empty stratum: {d}")));
                terms
                    .iter()
                    .filter(|t| !t.kseq.is_identity())
                    .map(|t| Ok((stratum_spec(spec, &t.kseq)?, t.weight.clone())))
                    .collect()
            }
            StrataSource::Cells => {
                let cells = CellModel::shared(spec.family, spec.n, spec.p);
                let top = cells.cell_of(spec)?;
                let mut out = Vec::new();
                for (c, g) in cells.resolution_expansion(spec)? {
                    if c == top {
                        if g != YPoly::one() {
                            return Err(Error::InvalidSpec(format!("resolution of q = {:?} is not birational", spec.q)));
                        }
                        continue;
                    }
                    let sub = cells.spec_of(c).cloned().ok_or_else(|| {
                        Error::NoPreimage(format!("cell {:?} below q = {:?} is not a locus", cells.cells[c], spec.q))
                    })?;
                    out.push((sub, g));
                }
                Ok(out)
            }
        }
    }

    // T(spec) = resolution(spec) - sum over proper strata w * T(stratum)
    fn solve(&mut self, spec: &LocusSpec, depth: usize) -> Result<BTreeMap<LocusSpec, YPoly>, Error> {
        if let Some(v) = self.memo.get(spec) {
            return Ok(v.clone());
        }
        if depth > MAX_DEPTH {
            return Err(Error::RecursionDepthExceeded(MAX_DEPTH));
        }
        let mut out: BTreeMap<LocusSpec, YPoly> = BTreeMap::new();
        out.insert(spec.clone(), YPoly::one());
        for (sub, w) in self.strata(spec)? {
            if sub.lambda().size() <= spec.lambda().size() {
                self.diagnostics.push(format!("stratum {} of {} does not raise the size", sub.lambda(), spec.lambda()));
            }
            for (sp, c) in self.solve(&sub, depth + 1)? {
                let e = out.entry(sp).or_default();
                *e = &*e - &(&w * &c);
            }
        }
        self.memo.insert(spec.clone(), out.clone());
        Ok(out)
    }
}

/// Inverts the strata relations recursively, returning the coefficient of each
/// resolution class. Strata come from the cell decomposition.
pub fn motivic_class_of_locus(spec: &LocusSpec) -> Result<MotivicExpansion, Error> {
    motivic_class_with(spec, StrataSource::Cells)
}

pub fn motivic_class_with(spec: &LocusSpec, source: StrataSource) -> Result<MotivicExpansion, Error> {
    spec.validate()?;
    let mut solver = Solver { source, memo: HashMap::new(), diagnostics: Vec::new() };
    let coeffs = solver.solve(spec, 0)?;
    let mut terms: Vec<ExpansionTerm> = coeffs
        .into_iter()
        .map(|(sp, coeff)| ExpansionTerm { lambda: sp.lambda(), spec: sp, coeff })
        .collect();
    terms.sort_by(|x, y| (x.lambda.size(), &x.lambda).cmp(&(y.lambda.size(), &y.lambda)));
    let mut diagnostics = solver.diagnostics;
    diagnostics.dedup();
    Ok(MotivicExpansion { spec: spec.clone(), terms, diagnostics })
}

/// Dual, inside the staircase `(n, ..., 1)`, of the strict partition with parts
/// `n + 1 - g_i` made strict from the right.
pub fn nu_of(g: &[i64], n: i64) -> Partition {
    let s = g.len();
    let mut tilde = vec![0i64; s];
    for i in (0..s).rev() {
        let v = n + 1 - g[i];
        tilde[i] = if i + 1 < s { v.max(tilde[i + 1] + 1) } else { v };
    }
    Partition::new((1..=n).rev().filter(|x| !tilde.contains(x)).collect())
}

/// Componentwise minimal `beta` with `i <= beta_i <= k_i`, `beta_s = k_s`, and
/// `beta_i = k_i` where `q_i + k_i >= q_{i+1} + k_{i+1} + 1`.
pub fn beta_of(k: &KSeq, q: &[i64]) -> Vec<i64> {
    let k = &k.0;
    let s = k.len();
    let mut beta = Vec::with_capacity(s);
    for i in 0..s {
        let fixed = i + 1 == s || q[i] + k[i] > q[i + 1] + k[i + 1];
        let prev = beta.last().copied().unwrap_or(1);
        beta.push(if fixed { k[i] } else { (i as i64 + 1).max(prev) });
    }
    beta
}

/// `sum (-y)^|nu'|` over strict `nu(beta) <= nu' <= nu(k)`.
pub fn d_k_coefficient(k: &KSeq, q: &[i64], n: i64) -> YPoly {
    let lo = nu_of(&beta_of(k, q), n);
    let hi = nu_of(&k.0, n);
    strict_inside(&hi)
        .iter()
        .filter(|nu| nu.contains(&lo))
        .fold(YPoly::zero(), |acc, nu| acc + chi_y_affine(nu.size() as usize))
}

fn binom(a: i64, b: i64) -> Rational {
    if b < 0 || a < 0 || b > a {
        return int(0);
    }
    let mut r = int(1);
    for t in 0..b {
        r = r * int(a - t) / int(t + 1);
    }
    r
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = int(1);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != int(0)) else {
            return int(0);
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / m[c][c].clone();
            for cc in c..n {
                let v = m[c][cc].clone() * &f;
                m[r][cc] -= v;
            }
        }
    }
    d
}

/// Binomial-determinant count of strict partitions inside `nu`. Experimental:
/// this does not agree with [`count_strict_inside`] in general.
pub fn gessel_viennot_count(nu: &Partition) -> Rational {
    let s = nu.len();
    let first: Vec<Vec<Rational>> = (1..=s as i64)
        .map(|i| (1..=s as i64).map(|j| binom(nu.part(j as usize - 1) + j - i + 1, 1 + j - i)).collect())
        .collect();
    let mut total = det(first);
    for k in 1..s as i64 {
        let m: Vec<Vec<Rational>> = (1..=k).map(|i| (1..=k).map(|j| binom(k - i + 2, 1 + j - i)).collect()).collect();
        total += det(m);
    }
    total
}
