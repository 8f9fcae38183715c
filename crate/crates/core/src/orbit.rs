//! Orbit closures of `O_n` and `Sp_n` on the flag variety `Fl_n`, indexed by
//! vexillary involutions, and their classes in the coinvariant algebra.
//!
//! Sign convention: `x_b = c_1((E_b/E_{b-1})^dual)`, so
//! `c(E_i^dual - E_j) = prod_{b<=i}(1+x_b) / prod_{b<=j}(1-x_b)` and the
//! tangent bundle of `Fl_n` has Chern roots `x_i - x_j`, `i < j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::{Poly, PolyRing};
use crate::raising::{
    apply_with_theta, log_qy_series, log_ty_linear, log_ty_twist, pfaffian_theta, EntrySpec, OpContext,
};
use crate::ring::{int, pow2, Rational, YPoly};
use crate::series::series_exp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    O,
    Sp,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::O => "O",
            Group::Sp => "Sp",
        })
    }
}

/// An involution of `{1..n}`, stored in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Involution(Vec<usize>);

impl Involution {
    pub fn new(values: Vec<usize>) -> Result<Involution, Error> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidInvolution(format!("{values:?} is not a permutation of 1..{n}")));
            }
            seen[v] = true;
        }
        if (1..=n).any(|i| values[values[i - 1] - 1] != i) {
            return Err(Error::InvalidInvolution(format!("{values:?} does not square to the identity")));
        }
        Ok(Involution(values))
    }

    /// Product of disjoint transpositions in `S_n`.
    pub fn from_cycles(n: usize, cycles: &[(usize, usize)]) -> Result<Involution, Error> {
        let mut v: Vec<usize> = (1..=n).collect();
        for &(a, b) in cycles {
            if a == 0 || b == 0 || a > n || b > n || v[a - 1] != a || v[b - 1] != b || a == b {
                return Err(Error::InvalidInvolution(format!("cycles {cycles:?} in S_{n}")));
            }
            v[a - 1] = b;
            v[b - 1] = a;
        }
        Involution::new(v)
    }

    pub fn identity(n: usize) -> Involution {
        Involution((1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `z(i)`, one-based.
    pub fn z(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.z(i) == i).collect()
    }

    /// Rank of the upper-left `i x j` block of the permutation matrix.
    pub fn rank(&self, i: usize, j: usize) -> usize {
        (1..=i.min(self.n())).filter(|&a| self.z(a) <= j).count()
    }

    /// Warnings for inputs outside the group's usual index set.
    pub fn group_warnings(&self, group: Group) -> Vec<String> {
        let fixed = self.fixed_points();
        if group == Group::Sp && !fixed.is_empty() {
            let parity = if self.n().is_multiple_of(2) { "even" } else { "odd" };
            vec![format!(
                "Sp involution {self} has fixed points {fixed:?} (n = {} is {parity}); evaluated by the same formulas",
                self.n()
            )]
        } else {
            Vec::new()
        }
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { "," } else { "" };
        let s: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&s.join(sep))
    }
}

pub type Cell = (usize, usize);

pub fn rothe_diagram(z: &Involution, group: Group) -> BTreeSet<Cell> {
    let n = z.n();
    let mut d = BTreeSet::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let (zi, zj) = (z.z(i), z.z(j));
            let below = match group {
                Group::O => zj <= i,
                Group::Sp => zj < i,
            };
            if zi > zj && below {
                d.insert((i, zj));
            }
        }
    }
    d
}

pub fn essential_set(d: &BTreeSet<Cell>) -> BTreeSet<Cell> {
    d.iter().copied().filter(|&(i, j)| !d.contains(&(i, j + 1)) && !d.contains(&(i + 1, j))).collect()
}

/// `(a, b)` precedes `(i, j)` when `i <= a` and `b <= j`.
fn precedes(x: Cell, y: Cell) -> bool {
    y.0 <= x.0 && x.1 <= y.1
}

fn chain(ess: &BTreeSet<Cell>) -> Option<Vec<Cell>> {
    let mut v: Vec<Cell> = ess.iter().copied().collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    v.windows(2).all(|w| precedes(w[0], w[1])).then_some(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialData {
    pub group: Group,
    pub chain: Vec<Cell>,
    pub ranks: Vec<usize>,
    pub k: Vec<usize>,
    pub lambda: Partition,
    pub ell: usize,
}

/// Only the essential set of the group's own diagram has to be a chain.
pub fn vexillary_data(z: &Involution, group: Group) -> Result<EssentialData, Error> {
    let ess = essential_set(&rothe_diagram(z, group));
    let chain = chain(&ess).ok_or_else(|| Error::NotVexillary(format!("{z}: {group} essential set {ess:?}")))?;
    let ranks: Vec<usize> = chain.iter().map(|&(i, j)| z.rank(i, j)).collect();
    let k: Vec<usize> = chain.iter().zip(&ranks).map(|(&(_, j), &r)| j - r).collect();
    if k.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotVexillary(format!("{z}: jump sequence {k:?} is not increasing")));
    }
    let shift = match group {
        Group::O => 1,
        Group::Sp => 0,
    };
    let mut parts = Vec::new();
    let mut prev = 0;
    for (t, &(i, j)) in chain.iter().enumerate() {
        for kk in prev + 1..=k[t] {
            parts.push(i as i64 - j as i64 + shift + k[t] as i64 - kk as i64);
        }
        prev = k[t];
    }
    let lambda = Partition::try_new(parts.clone())
        .filter(|l| l.len() == parts.len())
        .ok_or_else(|| Error::NotVexillary(format!("{z}: parts {parts:?} do not form a partition")))?;
    let ell = prev;
    Ok(EssentialData { group, chain, ranks, k, lambda, ell })
}

/// How the flag is refined between consecutive essential cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refinement {
    /// Inserted slots use `E_{i_t + (k_t - k)}^dual - E_{j_t}`.
    #[default]
    GrowI,
    /// Inserted slots use `E_{i_t}^dual - E_{j_t - (k_t - k)}`.
    ShrinkJ,
}

/// One slot of the refined flag: `mu` and the entry `c(E_i^dual - E_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagSlot {
    pub mu: i64,
    pub i: usize,
    pub j: usize,
}

impl FlagSlot {
    pub fn rank(&self) -> i64 {
        self.i as i64 - self.j as i64
    }
}

pub fn mu_flag(data: &EssentialData, refinement: Refinement) -> Vec<FlagSlot> {
    let mut out = Vec::with_capacity(data.ell);
    let mut prev = 0;
    for (t, &(i, j)) in data.chain.iter().enumerate() {
        let kt = data.k[t];
        for k in prev + 1..=kt {
            let gap = kt - k;
            let (i, j) = match refinement {
                Refinement::GrowI => (i + gap, j),
                Refinement::ShrinkJ => (i, j - gap),
            };
            out.push(FlagSlot { mu: data.lambda.part(k - 1), i, j });
        }
        prev = kt;
    }
    out
}

/// The coinvariant algebra of `Fl_n` in variables `x1..xn`, optionally with a
/// symbolic `y` (placed first) or a fixed value of `y`.
#[derive(Clone, Debug)]
pub struct FlagModel {
    n: usize,
    ring: Arc<PolyRing>,
    iy: Option<usize>,
    y: Option<Rational>,
}

impl FlagModel {
    /// Truncated at the dimension of `Fl_n`, which loses nothing.
    pub fn new(n: usize, y: Option<Rational>) -> FlagModel {
        FlagModel::with_trunc(n, (n * n.saturating_sub(1) / 2) as u32, y)
    }

    pub fn with_trunc(n: usize, trunc: u32, y: Option<Rational>) -> FlagModel {
        let mut vars = Vec::new();
        if y.is_none() {
            vars.push(("y".to_string(), 0));
        }
        let start = vars.len();
        vars.extend((1..=n).map(|b| (format!("x{b}"), 1)));
        let ring = PolyRing::with_coinvariant(vars, Some(trunc), start, n);
        FlagModel { n, ring, iy: y.is_none().then_some(0), y }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn iy(&self) -> Option<usize> {
        self.iy
    }

    pub fn y(&self) -> Option<&Rational> {
        self.y.as_ref()
    }

    pub fn trunc(&self) -> u32 {
        self.ring.trunc().expect("flag rings are truncated")
    }

    /// `x_b`, one-based.
    pub fn x(&self, b: usize) -> Poly {
        Poly::var(&self.ring, self.iy.map_or(0, |_| 1) + b - 1)
    }

    pub fn class(&self, poly: Poly) -> CoinvariantClass {
        CoinvariantClass { n: self.n, poly }
    }

    /// Chern data of `E_i^dual - E_j`.
    pub fn dual_minus(&self, i: usize, j: usize) -> EntrySpec {
        let one = Poly::one(&self.ring);
        let mut c = one.clone();
        for b in 1..=i {
            c = c.mul(&one.add(&self.x(b)));
        }
        for b in 1..=j {
            let xb = self.x(b);
            let mut geo = one.clone();
            let mut pw = one.clone();
            for _ in 0..self.trunc() {
                pw = pw.mul(&xb);
                if pw.is_zero() {
                    break;
                }
                geo.add_assign(&pw);
            }
            c = c.mul(&geo);
        }
        let chern = (1..=self.trunc()).map(|d| c.component(d)).collect();
        EntrySpec { rank: i as i64 - j as i64, chern }
    }

    /// `sum_{i<j} (x_i - x_j)^m` for `m = 0..=trunc`.
    fn tangent_power_sums(&self) -> Vec<Poly> {
        let d = self.trunc() as usize;
        let mut out = vec![Poly::zero(&self.ring); d + 1];
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                let root = self.x(a).sub(&self.x(b));
                let mut pw = Poly::one(&self.ring);
                for slot in out.iter_mut() {
                    slot.add_assign(&pw);
                    pw = pw.mul(&root);
                }
            }
        }
        out
    }

    /// `T_y(Fl_n)`.
    pub fn ty_flag(&self) -> CoinvariantClass {
        let d = self.trunc() as usize;
        let ps = self.tangent_power_sums();
        let ell = log_qy_series(d);
        let mut l = Poly::zero(&self.ring);
        for m in 1..=d {
            l.add_assign(&Poly::from_ypoly(&self.ring, &ell[m], self.iy, self.y.as_ref()).mul(&ps[m]));
        }
        self.class(series_exp(&l).expect("log has no constant term"))
    }

    /// `c_SM(Fl_n) = prod_{i<j} (1 + x_i - x_j)`.
    pub fn csm_flag(&self) -> CoinvariantClass {
        let one = Poly::one(&self.ring);
        let mut c = one.clone();
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                c = c.mul(&one.add(&self.x(a)).sub(&self.x(b)));
            }
        }
        self.class(c)
    }
}

/// A class in `H^*(Fl_n)` (tensor `Q[y]` when `y` is symbolic), stored in the
/// staircase normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantClass {
    pub n: usize,
    pub poly: Poly,
}

impl CoinvariantClass {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn component(&self, d: u32) -> CoinvariantClass {
        CoinvariantClass { n: self.n, poly: self.poly.component(d) }
    }

    pub fn sub(&self, other: &CoinvariantClass) -> CoinvariantClass {
        CoinvariantClass { n: self.n, poly: self.poly.sub(&other.poly) }
    }

    pub fn mul(&self, other: &CoinvariantClass) -> CoinvariantClass {
        CoinvariantClass { n: self.n, poly: self.poly.mul(&other.poly) }
    }

    pub fn scale(&self, c: &Rational) -> CoinvariantClass {
        CoinvariantClass { n: self.n, poly: self.poly.scale(c) }
    }

    /// Coefficient of the point class `x1^{n-1} x2^{n-2} ... x_{n-1}`.
    pub fn integral(&self) -> YPoly {
        let ring = self.poly.ring();
        let (start, n) = ring.coinvariant_block().expect("coinvariant ring");
        let iy = ring.var_index("y");
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in self.poly.terms() {
            if (0..n).all(|k| m.exps[start + k] as usize == n - 1 - k) {
                let k = iy.map_or(0, |i| m.exps[i] as usize);
                if coeffs.len() <= k {
                    coeffs.resize(k + 1, Rational::zero());
                }
                coeffs[k] += c;
            }
        }
        YPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for CoinvariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Normal form of `f` in the coinvariant algebra of `Fl_n`; the variables of
/// `f` named `x1..xn` (and `y`, if present in both) are carried over.
pub fn coinvariant_reduce(f: &Poly, model: &FlagModel) -> CoinvariantClass {
    let target = model.ring();
    let map: Vec<Option<usize>> = f.ring().names().iter().map(|name| target.var_index(name)).collect();
    model.class(f.transfer(target, &map))
}

fn orbit_setup(
    z: &Involution,
    group: Group,
    model: &FlagModel,
    refinement: Refinement,
) -> Result<(EssentialData, Vec<EntrySpec>), Error> {
    if z.n() != model.n() {
        return Err(Error::InvalidInvolution(format!("{z} is not in S_{}", model.n())));
    }
    let data = vexillary_data(z, group)?;
    let slots = mu_flag(&data, refinement);
    if let Some(s) = slots.iter().find(|s| s.i > z.n()) {
        return Err(Error::InvalidSpec(format!("{z}: refined slot needs E_{} in Fl_{}", s.i, z.n())));
    }
    let entries = slots.iter().map(|s| model.dual_minus(s.i, s.j)).collect();
    Ok((data, entries))
}

fn group_scalar(group: Group, ell: usize) -> Rational {
    match group {
        Group::O => Rational::one(),
        Group::Sp => Rational::one() / pow2(ell as u32),
    }
}

/// Motivic Hirzebruch class of the resolution of the orbit closure of `z`,
/// optionally capped with `T_y(Fl_n)`.
pub fn orbit_motivic_class(
    z: &Involution,
    group: Group,
    model: &FlagModel,
    refinement: Refinement,
    capped: bool,
) -> Result<CoinvariantClass, Error> {
    let (data, entries) = orbit_setup(z, group, model, refinement)?;
    let lam = data.lambda.parts().to_vec();
    let ell = data.ell;
    let weight = data.lambda.size() as u32;
    let trunc = model.trunc();
    let mut out = if weight > trunc {
        Poly::zero(model.ring())
    } else {
        let ctx = OpContext::with_budget(model.ring(), model.iy(), model.y().cloned(), ell, trunc - weight)?;
        let mut l = Poly::zero(&ctx.work);
        for i in 0..ell {
            for j in 0..i {
                l.add_assign(&log_ty_linear(&ctx, &[(i, 1), (j, 1)]));
                l.add_assign(&log_ty_linear(&ctx, &[(i, 1), (j, -1)]).neg());
            }
            l.add_assign(&log_ty_twist(&ctx, &entries[i], i)?.neg());
            if group == Group::Sp {
                l.add_scaled(&log_ty_linear(&ctx, &[(i, 1)]), &int(2));
            }
        }
        let prefactor = series_exp(&l)?;
        let rho: Vec<usize> = (0..ell).collect();
        apply_with_theta(&ctx, &prefactor, &lam, &rho, &entries)?.scale(&group_scalar(group, ell))
    };
    if capped {
        out = out.mul(&model.ty_flag().poly);
    }
    Ok(model.class(out))
}

/// The Pfaffian of the entries (divided by `2^ell` for `Sp`): the class of
/// the orbit closure itself.
pub fn orbit_fundamental_class(
    z: &Involution,
    group: Group,
    model: &FlagModel,
    refinement: Refinement,
) -> Result<CoinvariantClass, Error> {
    let (data, entries) = orbit_setup(z, group, model, refinement)?;
    let pf = pfaffian_theta(model.ring(), data.lambda.parts(), &entries, Some(model.trunc()));
    Ok(model.class(pf.scale(&group_scalar(group, data.ell))))
}

/// Outcome of [`verify_expansion`].
#[derive(Clone, Debug)]
pub struct Verification {
    pub holds: bool,
    pub residual: CoinvariantClass,
}

/// Checks `orbit class of z = sum c * [X_w]` exactly at the model's `y`.
pub fn verify_expansion(
    z: &Involution,
    group: Group,
    claimed: &[(Rational, Involution)],
    model: &FlagModel,
    refinement: Refinement,
) -> Result<Verification, Error> {
    let mut residual = orbit_motivic_class(z, group, model, refinement, false)?;
    for (c, w) in claimed {
        let f = orbit_fundamental_class(w, group, model, refinement)?;
        residual = residual.sub(&f.scale(c));
    }
    Ok(Verification { holds: residual.is_zero(), residual })
}

/// Coefficients of `class` over the candidates' fundamental classes.
pub fn expand_in_orbit_basis(
    class: &CoinvariantClass,
    candidates: &[Involution],
    group: Group,
    model: &FlagModel,
    refinement: Refinement,
) -> Result<Vec<Rational>, Error> {
    let basis = candidates
        .iter()
        .map(|w| orbit_fundamental_class(w, group, model, refinement))
        .collect::<Result<Vec<_>, _>>()?;
    solve(class, &basis)
}

/// Exact least-residual solve `class = sum a_k basis_k` by Gaussian elimination.
fn solve(class: &CoinvariantClass, basis: &[CoinvariantClass]) -> Result<Vec<Rational>, Error> {
    let mut keys: BTreeMap<Vec<u16>, usize> = BTreeMap::new();
    for p in basis.iter().chain(std::iter::once(class)) {
        for (m, _) in p.poly.terms() {
            let next = keys.len();
            keys.entry(m.exps.clone()).or_insert(next);
        }
    }
    let rows = keys.len();
    let cols = basis.len();
    let mut a = vec![vec![Rational::zero(); cols + 1]; rows];
    for (k, p) in basis.iter().enumerate() {
        for (m, c) in p.poly.terms() {
            a[keys[&m.exps]][k] = c.clone();
        }
    }
    for (m, c) in class.poly.terms() {
        a[keys[&m.exps]][cols] = c.clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            return Err(Error::DependentBasis);
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][col];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in 0..=cols {
                    let v = &a[r][c] * &f;
                    a[i][c] -= v;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if let Some(bad) = (r..rows).find(|&i| !a[i][cols].is_zero()) {
        let exps = keys.iter().find(|(_, &v)| v == bad).map(|(k, _)| k.clone()).unwrap_or_default();
        return Err(Error::Unrepresentable(format!("nonzero residual at exponent {exps:?}")));
    }
    Ok(pivots.iter().map(|&p| a[p][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(v: &[usize]) -> Involution {
        Involution::new(v.to_vec()).unwrap()
    }

    fn cells(v: &[Cell]) -> BTreeSet<Cell> {
        v.iter().copied().collect()
    }

    #[test]
    fn validation() {
        assert!(Involution::new(vec![2, 1, 3]).is_ok());
        assert!(Involution::new(vec![2, 3, 1]).is_err());
        assert!(Involution::new(vec![1, 1]).is_err());
        assert_eq!(Involution::from_cycles(5, &[(1, 4), (2, 3)]).unwrap(), inv(&[4, 3, 2, 1, 5]));
        assert!(inv(&[2, 1, 4, 3]).group_warnings(Group::Sp).is_empty());
        assert_eq!(inv(&[4, 3, 2, 1, 5]).group_warnings(Group::Sp).len(), 1);
        assert!(inv(&[4, 3, 2, 1, 5]).group_warnings(Group::O).is_empty());
    }

    #[test]
    fn diagrams() {
        assert_eq!(rothe_diagram(&inv(&[3, 4, 1, 2]), Group::O), cells(&[(1, 1), (2, 1), (2, 2)]));
        assert_eq!(rothe_diagram(&Involution::identity(4), Group::O), BTreeSet::new());
        assert_eq!(rothe_diagram(&inv(&[4, 3, 2, 1, 5]), Group::Sp), cells(&[(2, 1), (3, 1)]));
        assert_eq!(essential_set(&rothe_diagram(&inv(&[3, 4, 1, 2]), Group::O)), cells(&[(2, 2)]));
        assert_eq!(essential_set(&rothe_diagram(&inv(&[2, 1]), Group::O)), cells(&[(1, 1)]));
        assert_eq!(essential_set(&rothe_diagram(&inv(&[4, 3, 2, 1, 5]), Group::Sp)), cells(&[(3, 1)]));
    }

    #[test]
    fn vexillary_partitions() {
        let d = vexillary_data(&inv(&[3, 4, 1, 2]), Group::O).unwrap();
        assert_eq!((d.chain.clone(), d.k.clone()), (vec![(2, 2)], vec![2]));
        assert_eq!(d.lambda, Partition::new(vec![2, 1]));
        assert_eq!(vexillary_data(&inv(&[4, 3, 2, 1]), Group::O).unwrap().lambda, Partition::new(vec![3, 1]));
        assert_eq!(vexillary_data(&inv(&[2, 1]), Group::O).unwrap().lambda, Partition::new(vec![1]));
        assert_eq!(vexillary_data(&inv(&[4, 3, 2, 1, 5]), Group::Sp).unwrap().lambda, Partition::new(vec![2]));
        assert_eq!(vexillary_data(&inv(&[5, 4, 3, 2, 1, 6]), Group::Sp).unwrap().lambda, Partition::new(vec![3, 1]));
        assert_eq!(vexillary_data(&Involution::identity(3), Group::O).unwrap().ell, 0);
        assert!(matches!(vexillary_data(&inv(&[2, 1, 4, 3]), Group::O), Err(Error::NotVexillary(_))));
        assert_eq!(vexillary_data(&inv(&[2, 1, 4, 3]), Group::Sp).unwrap().ell, 0);
    }

    #[test]
    fn flag_entries() {
        let d = vexillary_data(&inv(&[3, 4, 1, 2]), Group::O).unwrap();
        let pairs: Vec<_> = mu_flag(&d, Refinement::GrowI).iter().map(|s| (s.i, s.j)).collect();
        assert_eq!(pairs, vec![(3, 2), (2, 2)]);
        let pairs: Vec<_> = mu_flag(&d, Refinement::ShrinkJ).iter().map(|s| (s.i, s.j)).collect();
        assert_eq!(pairs, vec![(2, 1), (2, 2)]);
        let d = vexillary_data(&inv(&[5, 4, 3, 2, 1, 6]), Group::Sp).unwrap();
        let pairs: Vec<_> = mu_flag(&d, Refinement::GrowI).iter().map(|s| (s.i, s.j)).collect();
        assert_eq!(pairs, vec![(4, 1), (3, 2)]);
    }

    #[test]
    fn reduction() {
        let m = FlagModel::new(3, Some(int(-1)));
        let e1 = m.x(1).add(&m.x(2)).add(&m.x(3));
        assert!(m.class(e1).is_zero());
        let m2 = FlagModel::new(2, Some(int(-1)));
        assert!(m2.class(m2.x(1).mul(&m2.x(1))).is_zero());
        let free = PolyRing::new(vec![("x1".into(), 1), ("x2".into(), 1)], Some(4));
        let f = Poly::var(&free, 0).mul(&Poly::var(&free, 1)).add(&Poly::one(&free));
        assert_eq!(coinvariant_reduce(&f, &m2).poly, Poly::one(m2.ring()));
    }

    #[test]
    fn two_by_two() {
        let m = FlagModel::new(2, Some(int(-1)));
        let z = inv(&[2, 1]);
        let capped = orbit_motivic_class(&z, Group::O, &m, Refinement::GrowI, true).unwrap();
        assert_eq!(capped.poly, m.x(1).scale(&int(2)));
        let fund = orbit_fundamental_class(&z, Group::O, &m, Refinement::GrowI).unwrap();
        assert_eq!(fund.poly, m.x(1).scale(&int(2)));
        let v = verify_expansion(&z, Group::O, &[(int(1), z.clone())], &m, Refinement::GrowI).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn euler_characteristics() {
        let m = FlagModel::new(4, Some(int(-1)));
        let chi = |v: &[usize]| -> YPoly {
            orbit_motivic_class(&inv(v), Group::O, &m, Refinement::GrowI, true).unwrap().integral()
        };
        assert_eq!(chi(&[1, 2, 3, 4]), YPoly::from_ints(&[24]));
        // isotropic line, then any flag of the remaining quotient
        assert_eq!(chi(&[2, 1, 3, 4]), YPoly::from_ints(&[24]));
        // closed orbit: two families of isotropic planes, each a P^1 of P^1s
        assert_eq!(chi(&[4, 3, 2, 1]), YPoly::from_ints(&[8]));
    }

    #[test]
    fn chi_y_of_flag_variety() {
        // prod_{k=1}^{n} (1 + (-y) + ... + (-y)^{k-1})
        let m = FlagModel::new(3, None);
        let expect = YPoly::from_ints(&[1, -1]) * YPoly::from_ints(&[1, -1, 1]);
        assert_eq!(m.ty_flag().integral(), expect);
    }

    #[test]
    fn flag_csm_is_ty_at_minus_one() {
        for n in 1..=4 {
            let m = FlagModel::new(n, Some(int(-1)));
            assert_eq!(m.ty_flag(), m.csm_flag());
        }
    }
}
