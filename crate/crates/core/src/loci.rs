//! Isotropic (type C) and odd orthogonal (type B) degeneracy loci: input
//! validation, the partition `lambda(p, q)`, and the classes of their
//! resolutions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::{Poly, PolyRing};
use crate::raising::{abstract_entries, abstract_ring, apply_with_theta, log_ty_linear, log_ty_twist, theta_terms};
use crate::raising::{chern_product, virtual_chern_twisted, EntrySpec, OpContext};
use crate::ring::{int, pow2, Rational};
use crate::series::{series_exp, series_inv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    B,
    C,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Family::B { "B" } else { "C" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocusSpec {
    pub family: Family,
    pub n: i64,
    pub p: i64,
    pub q: Vec<i64>,
}

/// `rho_i = #{ j < i : q_j >= 1 - q_i }`.
pub fn rho_of(q: &[i64]) -> Vec<usize> {
    (0..q.len()).map(|i| (0..i).filter(|&j| q[j] >= 1 - q[i]).count()).collect()
}

impl LocusSpec {
    pub fn new(family: Family, n: i64, p: i64, q: Vec<i64>) -> Result<LocusSpec, Error> {
        let spec = LocusSpec { family, n, p, q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        let (n, p, q) = (self.n, self.p, &self.q);
        if n < 1 {
            return bad(format!("n = {n} must be positive"));
        }
        if p < 1 || p > n {
            return bad(format!("p = {p} must lie in 1..={n}"));
        }
        if q.is_empty() {
            return bad("q is empty".into());
        }
        if q.len() as i64 > n + 1 - p {
            return bad(format!("length {} exceeds n + 1 - p = {}", q.len(), n + 1 - p));
        }
        if let Some(&x) = q.iter().find(|&&x| x == 0 || x <= -n || x > n) {
            return bad(format!("q entry {x} outside -n < q <= n, q != 0"));
        }
        if q.windows(2).any(|w| w[0] <= w[1]) {
            return bad(format!("q = {q:?} is not strictly decreasing"));
        }
        let mut abs: Vec<i64> = q.iter().map(|x| x.abs()).collect();
        abs.sort();
        if abs.windows(2).any(|w| w[0] == w[1]) {
            return bad(format!("q = {q:?} repeats an absolute value"));
        }
        self.lambda_parts()?;
        Ok(())
    }

    pub fn s(&self) -> usize {
        self.q.len()
    }

    /// Number of positive entries of `q`.
    pub fn a(&self) -> usize {
        self.q.iter().filter(|&&x| x > 0).count()
    }

    pub fn rho(&self) -> Vec<usize> {
        rho_of(&self.q)
    }

    /// `lambda_i = q_i + p - 1` for `i <= a`, `q_i + p - 1 + i - rho_i` after.
    fn lambda_parts(&self) -> Result<Vec<i64>, Error> {
        let rho = self.rho();
        let a = self.a();
        let lam: Vec<i64> = (0..self.s())
            .map(|i| {
                let base = self.q[i] + self.p - 1;
                if i < a {
                    base
                } else {
                    base + (i as i64 + 1) - rho[i] as i64
                }
            })
            .collect();
        let part = Partition::try_new(lam.clone())
            .ok_or_else(|| Error::InvalidSpec(format!("lambda {lam:?} is not a partition")))?;
        if part.len() != lam.len() {
            return Err(Error::InvalidSpec(format!("lambda {lam:?} has a zero part")));
        }
        if !part.is_k_strict(self.p - 1) {
            return Err(Error::InvalidSpec(format!("lambda {lam:?} is not {}-strict", self.p - 1)));
        }
        Ok(lam)
    }

    pub fn lambda(&self) -> Partition {
        Partition::new(self.lambda_parts().expect("validated spec"))
    }

    /// Virtual rank of the slot-`i` bundle (zero-based), by rank count. In
    /// family B the ambient rank is one larger on the positive slots.
    pub fn entry_rank(&self, i: usize) -> i64 {
        let q = self.q[i];
        match (self.family, q > 0) {
            (Family::C, true) => self.p + q - 2,
            _ => self.p + q - 1,
        }
    }

    /// The Lagrangian (family C, p = 1) Schubert case.
    pub fn is_lagrangian_schubert(&self) -> bool {
        self.family == Family::C && self.p == 1
    }
}

pub fn lambda_of(spec: &LocusSpec) -> Result<Partition, Error> {
    spec.validate()?;
    Ok(spec.lambda())
}

/// A ring together with the Chern data of each slot of a locus.
pub trait Model {
    fn base(&self) -> &Arc<PolyRing>;
    /// Index of a symbolic `y` in the base ring.
    fn iy(&self) -> Option<usize>;
    /// Fixed value of `y`.
    fn y(&self) -> Option<&Rational>;
    fn entries(&self, spec: &LocusSpec) -> Result<Vec<EntrySpec>, Error>;

    fn trunc(&self) -> u32 {
        self.base().trunc().expect("model rings are truncated")
    }
}

/// Inert Chern symbols `c(i)_m`; the truncation degree must be given.
pub struct AbstractModel {
    ring: Arc<PolyRing>,
    iy: Option<usize>,
    y: Option<Rational>,
    slots: usize,
}

impl AbstractModel {
    pub fn new(slots: usize, trunc: u32, y: Option<Rational>) -> AbstractModel {
        let (ring, iy) = abstract_ring(slots, trunc, y.is_none());
        AbstractModel { ring, iy, y, slots }
    }

    pub fn for_spec(spec: &LocusSpec, trunc: u32, y: Option<Rational>) -> AbstractModel {
        AbstractModel::new(spec.s(), trunc, y)
    }
}

impl Model for AbstractModel {
    fn base(&self) -> &Arc<PolyRing> {
        &self.ring
    }
    fn iy(&self) -> Option<usize> {
        self.iy
    }
    fn y(&self) -> Option<&Rational> {
        self.y.as_ref()
    }
    fn entries(&self, spec: &LocusSpec) -> Result<Vec<EntrySpec>, Error> {
        if spec.s() > self.slots {
            return Err(Error::InvalidSpec(format!("{} slots needed, model has {}", spec.s(), self.slots)));
        }
        let ranks: Vec<i64> = (0..spec.s()).map(|i| spec.entry_rank(i)).collect();
        Ok(abstract_entries(&self.ring, &ranks))
    }
}

fn context(spec: &LocusSpec, model: &dyn Model) -> Result<(OpContext, Vec<EntrySpec>, Vec<i64>, Vec<usize>), Error> {
    spec.validate()?;
    let lam = spec.lambda_parts()?;
    let rho = spec.rho();
    let d = model.trunc();
    let budget = (d as i64 - lam.iter().sum::<i64>()).max(0) as u32;
    let ctx = OpContext::with_budget(model.base(), model.iy(), model.y().cloned(), spec.s(), budget)?;
    let entries = model.entries(spec)?;
    Ok((ctx, entries, lam, rho))
}

/// Factors in front of the theta polynomial, as a sum of logarithms.
fn prefactor_log(ctx: &OpContext, spec: &LocusSpec, entries: &[EntrySpec], rho: &[usize]) -> Result<Poly, Error> {
    let s = spec.s();
    let mut l = Poly::zero(&ctx.work);
    for i in 0..s {
        for j in 0..rho[i] {
            l.add_assign(&log_ty_linear(ctx, &[(i, 1), (j, 1)]));
        }
        for j in 0..i {
            l.add_assign(&log_ty_linear(ctx, &[(i, 1), (j, -1)]).neg());
        }
        l.add_assign(&log_ty_twist(ctx, &entries[i], i)?.neg());
    }
    match spec.family {
        Family::C => {
            if s as i64 == spec.n + 1 - spec.p {
                l.add_assign(&log_ty_linear(ctx, &[(s - 1, 2)]));
            }
        }
        Family::B => {
            let r = (s as i64).min(spec.n - spec.p).max(0) as usize;
            for i in 0..r {
                l.add_assign(&log_ty_linear(ctx, &[(i, 2)]));
            }
        }
    }
    Ok(l)
}

fn family_scalar(spec: &LocusSpec) -> Rational {
    match spec.family {
        Family::C => int(1),
        Family::B => Rational::from_integer(1.into()) / pow2(spec.a() as u32),
    }
}

/// Class of the resolution of the locus, before capping with the ambient class.
pub fn resolution_class(spec: &LocusSpec, model: &dyn Model) -> Result<Poly, Error> {
    let (ctx, entries, lam, rho) = context(spec, model)?;
    let prefactor = series_exp(&prefactor_log(&ctx, spec, &entries, &rho)?)?;
    let out = apply_with_theta(&ctx, &prefactor, &lam, &rho, &entries)?;
    Ok(out.scale(&family_scalar(spec)))
}

/// The same class at `y = -1`, assembled from twisted Chern classes.
pub fn csm_resolution_class(spec: &LocusSpec, model: &dyn Model) -> Result<Poly, Error> {
    let (ctx, entries, lam, rho) = context(spec, model)?;
    let s = spec.s();
    let one = Poly::one(&ctx.work);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..s {
        for j in 0..rho[i] {
            num = num.mul(&one.add(&ctx.r(i)).add(&ctx.r(j)));
        }
        for j in 0..i {
            den = den.mul(&one.add(&ctx.r(i)).sub(&ctx.r(j)));
        }
        den = den.mul(&virtual_chern_twisted(&ctx, &entries[i], i)?);
    }
    match spec.family {
        Family::C => {
            if s as i64 == spec.n + 1 - spec.p {
                num = num.mul(&one.add(&ctx.r(s - 1).scale(&int(2))));
            }
        }
        Family::B => {
            let r = (s as i64).min(spec.n - spec.p).max(0) as usize;
            for i in 0..r {
                num = num.mul(&one.add(&ctx.r(i).scale(&int(2))));
            }
        }
    }
    let prefactor = num.mul(&series_inv(&den)?);
    let out = apply_with_theta(&ctx, &prefactor, &lam, &rho, &entries)?;
    Ok(out.scale(&family_scalar(spec)))
}

/// `Theta_lambda^rho` applied to the entries.
pub fn theta_class(spec: &LocusSpec, model: &dyn Model) -> Result<Poly, Error> {
    let (ctx, entries, lam, rho) = context(spec, model)?;
    let mut out = Poly::zero(&ctx.base);
    for (idx, c) in theta_terms(&lam, &rho)? {
        out.add_scaled(&chern_product(&ctx.base, &entries, &idx, Some(ctx.trunc)), &int(c));
    }
    Ok(out)
}

/// Degree-`|lambda|` component of [`resolution_class`]: the theta polynomial,
/// divided by `2^a` in family B.
pub fn fundamental_class(spec: &LocusSpec, model: &dyn Model) -> Result<Poly, Error> {
    Ok(theta_class(spec, model)?.scale(&family_scalar(spec)))
}

/// Every valid spec with the given family and `n`.
pub fn all_specs(family: Family, n: i64) -> Vec<LocusSpec> {
    let mut out = Vec::new();
    let values: Vec<i64> = (-n + 1..=n).rev().filter(|&x| x != 0).collect();
    for p in 1..=n {
        let max_len = (n + 1 - p) as usize;
        let m = values.len();
        for mask in 1u32..(1 << m) {
            if mask.count_ones() as usize > max_len {
                continue;
            }
            let q: Vec<i64> = (0..m).filter(|&k| mask & (1 << k) != 0).map(|k| values[k]).collect();
            if let Ok(spec) = LocusSpec::new(family, n, p, q) {
                out.push(spec);
            }
        }
    }
    out
}
