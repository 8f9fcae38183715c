//! Cohomology of the Lagrangian Grassmannian `LG(n, 2n)` and the odd
//! orthogonal Grassmannian `OG(n, 2n+1)`, realized by Schur Q-functions in
//! finitely many variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::loci::{Family, LocusSpec, Model};
use crate::partition::{strict_partitions, Partition};
use crate::poly::{compositions, Poly, PolyRing};
use crate::raising::{log_qy_series, pfaffian_theta, EntrySpec};
use crate::ring::{fmt_rat, int, parse_rat, pow2, Rational, YPoly};
use crate::series::{chern_from_power_sums, series_exp};
use crate::strata::motivic_class_of_locus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    /// `LG(n, 2n)`
    Lagrangian(i64),
    /// `OG(n, 2n+1)`
    OddOrthogonal(i64),
}

impl Space {
    pub fn n(&self) -> i64 {
        match *self {
            Space::Lagrangian(n) | Space::OddOrthogonal(n) => n,
        }
    }

    pub fn dim(&self) -> u32 {
        let n = self.n() as u32;
        n * (n + 1) / 2
    }

    pub fn family(&self) -> Family {
        match self {
            Space::Lagrangian(_) => Family::C,
            Space::OddOrthogonal(_) => Family::B,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Lagrangian(n) => write!(f, "LG({n},{})", 2 * n),
            Space::OddOrthogonal(n) => write!(f, "OG({n},{})", 2 * n + 1),
        }
    }
}

/// Schubert expansion: `Q_mu` classes on `LG`, `P_mu` classes on `OG`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertClass {
    pub space: Space,
    pub support: BTreeMap<Partition, YPoly>,
}

impl SchubertClass {
    pub fn coeff(&self, mu: &Partition) -> YPoly {
        self.support.get(mu).cloned().unwrap_or_default()
    }

    /// Support in order of size, then lexicographically.
    pub fn ordered(&self) -> Vec<(Partition, YPoly)> {
        let mut v: Vec<_> = self.support.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| (a.0.size(), &a.0).cmp(&(b.0.size(), &b.0)));
        v
    }

    pub fn of_degree(&self, d: i64) -> Vec<(Partition, YPoly)> {
        self.ordered().into_iter().filter(|(m, _)| m.size() == d).collect()
    }

    /// Coefficient of the point class.
    pub fn integral(&self) -> YPoly {
        self.coeff(&Partition::staircase(self.space.n()))
    }

    pub fn eval_y(&self, y: &Rational) -> SchubertClass {
        let support = self
            .support
            .iter()
            .map(|(m, c)| (m.clone(), YPoly::constant(c.eval(y))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        SchubertClass { space: self.space, support }
    }
}

impl fmt::Display for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.ordered().iter().map(|(m, c)| format!("({c})*s{m}")).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

type XTerms = BTreeMap<Vec<u16>, Rational>;

/// Number of variables that keeps every `Q_mu` with `|mu| <= d` independent.
fn nvars_for(d: u32) -> usize {
    let mut l = 1usize;
    while (l + 1) * (l + 2) / 2 <= d as usize {
        l += 1;
    }
    l
}

/// Backing ring for one space: variables `x_1..x_N`, optionally preceded by `y`.
pub struct GrassmannModel {
    space: Space,
    ring: Arc<PolyRing>,
    iy: Option<usize>,
    y: Option<Rational>,
    nx: usize,
    /// `q_0, ..., q_D`
    q: Vec<Poly>,
    qcache: Mutex<HashMap<Partition, Arc<XTerms>>>,
    cache_dir: Option<PathBuf>,
}

impl GrassmannModel {
    /// Truncated at the dimension of the space; `y = None` keeps `y` symbolic.
    pub fn new(space: Space, y: Option<Rational>) -> GrassmannModel {
        GrassmannModel::with_trunc(space, space.dim(), y)
    }

    pub fn with_trunc(space: Space, trunc: u32, y: Option<Rational>) -> GrassmannModel {
        let nx = nvars_for(trunc);
        let mut vars = Vec::new();
        if y.is_none() {
            vars.push(("y".to_string(), 0));
        }
        for i in 1..=nx {
            vars.push((format!("x{i}"), 1));
        }
        let ring = PolyRing::new(vars, Some(trunc));
        let iy = y.is_none().then_some(0);
        let off = iy.map_or(0, |_| 1);
        let q = (0..=trunc as usize)
            .map(|k| {
                let terms = compositions(k, nx).into_iter().map(|a| {
                    let nz = a.iter().filter(|&&e| e > 0).count() as u32;
                    let mut e = vec![0u16; off];
                    e.extend(a);
                    (e, pow2(nz))
                });
                Poly::from_terms(&ring, terms)
            })
            .collect();
        GrassmannModel { space, ring, iy, y, nx, q, qcache: Mutex::new(HashMap::new()), cache_dir: None }
    }

    /// Reads and writes Q-function expansions under `dir`.
    pub fn with_cache_dir(mut self, dir: impl AsRef<Path>) -> GrassmannModel {
        self.cache_dir = Some(dir.as_ref().to_path_buf());
        self
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// `q_k = c_k(S^dual)`.
    pub fn q(&self, k: i64) -> Poly {
        if k < 0 {
            return Poly::zero(&self.ring);
        }
        self.q.get(k as usize).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    fn x_offset(&self) -> usize {
        self.iy.map_or(0, |_| 1)
    }

    fn q_entry(&self, rank: i64) -> EntrySpec {
        EntrySpec { rank, chern: self.q[1..].to_vec() }
    }

    /// `Q_mu` in the model's variables.
    pub fn qfun(&self, mu: &Partition) -> Poly {
        let terms = self.qfun_terms(mu);
        let off = self.x_offset();
        Poly::from_terms(
            &self.ring,
            terms.iter().map(|(e, c)| {
                let mut v = vec![0u16; off];
                v.extend(e);
                (v, c.clone())
            }),
        )
    }

    fn qfun_terms(&self, mu: &Partition) -> Arc<XTerms> {
        if let Some(t) = self.qcache.lock().unwrap().get(mu) {
            return t.clone();
        }
        let t = Arc::new(self.load_cached(mu).unwrap_or_else(|| {
            let ents = vec![self.q_entry(0); mu.len() + 1];
            let p = pfaffian_theta(&self.ring, mu.parts(), &ents, self.ring.trunc());
            let off = self.x_offset();
            let t: XTerms = p.terms().map(|(m, c)| (m.exps[off..].to_vec(), c.clone())).collect();
            self.store_cached(mu, &t);
            t
        }));
        self.qcache.lock().unwrap().insert(mu.clone(), t.clone());
        t
    }

    fn cache_file(&self, mu: &Partition) -> Option<PathBuf> {
        let parts: Vec<String> = mu.parts().iter().map(|p| p.to_string()).collect();
        let trunc = self.ring.trunc().unwrap_or(0);
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("qfun-v1-N{}-D{}-[{}].json", self.nx, trunc, parts.join("."))))
    }

    fn load_cached(&self, mu: &Partition) -> Option<XTerms> {
        let text = std::fs::read_to_string(self.cache_file(mu)?).ok()?;
        let raw: Vec<(Vec<u16>, String)> = serde_json::from_str(&text).ok()?;
        raw.into_iter().map(|(e, c)| parse_rat(&c).ok().map(|c| (e, c))).collect()
    }

    fn store_cached(&self, mu: &Partition, t: &XTerms) {
        let Some(path) = self.cache_file(mu) else { return };
        let raw: Vec<(&Vec<u16>, String)> = t.iter().map(|(e, c)| (e, fmt_rat(c))).collect();
        if let Ok(text) = serde_json::to_string(&raw) {
            let _ = std::fs::create_dir_all(path.parent().unwrap());
            let _ = std::fs::write(path, text);
        }
    }

    /// Expansion in the Schubert basis; classes with `mu_1 > n` vanish.
    pub fn to_schubert_basis(&self, f: &Poly) -> Result<SchubertClass, Error> {
        let off = self.x_offset();
        let mut rest: BTreeMap<Vec<u16>, YPoly> = BTreeMap::new();
        for (m, c) in f.terms() {
            let k = self.iy.map_or(0, |i| m.exps[i] as usize);
            let e = rest.entry(m.exps[off..].to_vec()).or_default();
            *e = &*e + &YPoly::monomial(c.clone(), k);
        }
        rest.retain(|_, c| !c.is_zero());
        let mut support = BTreeMap::new();
        while let Some((lead, c)) = rest.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let parts: Vec<i64> = lead.iter().map(|&e| e as i64).collect();
            let strict = parts.windows(2).all(|w| w[0] > w[1] || w[1] == 0);
            if !strict {
                return Err(Error::NotInSubring(format!("leading exponent {parts:?} is not strict")));
            }
            let mu = Partition::new(parts);
            let coeff = c.scale(&(int(1) / pow2(mu.len() as u32)));
            for (e, qc) in self.qfun_terms(&mu).iter() {
                let t = rest.entry(e.clone()).or_default();
                *t = &*t - &coeff.scale(qc);
                if t.is_zero() {
                    rest.remove(e);
                }
            }
            if mu.part(0) <= self.space.n() {
                let scaled = match self.space {
                    Space::Lagrangian(_) => coeff,
                    Space::OddOrthogonal(_) => coeff.scale(&pow2(mu.len() as u32)),
                };
                support.insert(mu, scaled);
            }
        }
        Ok(SchubertClass { space: self.space, support })
    }

    /// Inverse of [`GrassmannModel::to_schubert_basis`] on the given support.
    pub fn from_schubert_basis(&self, class: &SchubertClass) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (mu, c) in &class.support {
            let mut c = c.clone();
            if let Space::OddOrthogonal(_) = self.space {
                c = c.scale(&(int(1) / pow2(mu.len() as u32)));
            }
            let c = Poly::from_ypoly(&self.ring, &c, self.iy, self.y.as_ref());
            out.add_assign(&c.mul(&self.qfun(mu)));
        }
        out
    }

    /// Power sums `p_0..p_D` of the tangent bundle.
    fn tangent_power_sums(&self) -> Vec<Poly> {
        let d = self.trunc() as usize;
        let n = self.space.n();
        let off = self.x_offset();
        // p_k(S^dual) = 2 sum x^k for odd k, 0 for even k > 0
        let p: Vec<Poly> = (0..=d)
            .map(|k| {
                if k == 0 {
                    Poly::constant(&self.ring, int(n))
                } else if k % 2 == 1 {
                    let terms = (0..self.nx).map(|i| {
                        let mut e = vec![0u16; off + self.nx];
                        e[off + i] = k as u16;
                        (e, int(2))
                    });
                    Poly::from_terms(&self.ring, terms)
                } else {
                    Poly::zero(&self.ring)
                }
            })
            .collect();
        (0..=d)
            .map(|k| {
                let mut sq = Poly::zero(&self.ring);
                for m in 0..=k {
                    sq.add_scaled(&p[m].mul(&p[k - m]), &binomial(k, m));
                }
                let twist = p[k].scale(&pow2(k as u32));
                match self.space {
                    Space::Lagrangian(_) => sq.add(&twist).scale(&Rational::new(1.into(), 2.into())),
                    Space::OddOrthogonal(_) => {
                        sq.sub(&twist).scale(&Rational::new(1.into(), 2.into())).add(&p[k])
                    }
                }
            })
            .collect()
    }

    /// `T_y` of the space in the model ring.
    pub fn ty_ambient_poly(&self) -> Poly {
        let d = self.trunc() as usize;
        let ps = self.tangent_power_sums();
        let ell = log_qy_series(d);
        let mut l = Poly::zero(&self.ring);
        for m in 1..=d {
            let c = Poly::from_ypoly(&self.ring, &ell[m], self.iy, self.y.as_ref());
            l.add_assign(&c.mul(&ps[m]));
        }
        series_exp(&l).expect("log has no constant term")
    }

    /// Total Chern class of the tangent bundle.
    pub fn csm_ambient_poly(&self) -> Poly {
        let d = self.trunc() as usize;
        let c = chern_from_power_sums(&self.ring, &self.tangent_power_sums(), d);
        c.iter().fold(Poly::one(&self.ring), |acc, x| acc.add(x))
    }

    pub fn ty_ambient(&self) -> SchubertClass {
        self.to_schubert_basis(&self.ty_ambient_poly()).expect("tangent classes are symmetric in Q")
    }

    pub fn csm_ambient(&self) -> SchubertClass {
        self.to_schubert_basis(&self.csm_ambient_poly()).expect("tangent classes are symmetric in Q")
    }

    /// Integral of `T_y` of the space.
    pub fn chi_y(&self) -> YPoly {
        self.ty_ambient().integral()
    }

    /// Entries `c(V - F_q - U)` of a Schubert locus: every slot carries
    /// `c(S^dual)`, with the spec's virtual rank.
    pub fn schubert_locus_entries(&self, spec: &LocusSpec) -> Vec<EntrySpec> {
        (0..spec.s()).map(|i| self.q_entry(spec.entry_rank(i))).collect()
    }

    /// The Schubert locus of `lambda` as a spec with `p = 1`, `q = lambda`.
    pub fn schubert_spec(&self, lambda: &Partition) -> Result<LocusSpec, Error> {
        let spec = LocusSpec::new(self.space.family(), self.space.n(), 1, lambda.parts().to_vec())?;
        if spec.lambda() != *lambda {
            return Err(Error::InvalidSpec(format!("{lambda} is not a Schubert class of {}", self.space)));
        }
        Ok(spec)
    }
}

fn binomial(k: usize, m: usize) -> Rational {
    let mut r = int(1);
    for t in 0..m {
        r = r * int((k - t) as i64) / int(t as i64 + 1);
    }
    r
}

impl Model for GrassmannModel {
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
        Ok(self.schubert_locus_entries(spec))
    }
}

/// Motivic class of a Schubert variety, before and after capping with the
/// class of the space, both in the Schubert basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertResult {
    pub lambda: Partition,
    pub uncapped: SchubertClass,
    pub capped: SchubertClass,
    pub diagnostics: Vec<String>,
}

/// `T_y` (or, with `y = -1`, the CSM class) of the Schubert variety `lambda`;
/// the empty partition gives the whole space.
pub fn schubert_ty(model: &GrassmannModel, lambda: &Partition) -> Result<SchubertResult, Error> {
    let (uncapped, diagnostics) = if lambda.is_empty() {
        (Poly::one(&model.ring), Vec::new())
    } else {
        let ex = motivic_class_of_locus(&model.schubert_spec(lambda)?)?;
        (ex.evaluate(model)?, ex.diagnostics)
    };
    let capped = uncapped.mul(&model.ty_ambient_poly());
    Ok(SchubertResult {
        lambda: lambda.clone(),
        uncapped: model.to_schubert_basis(&uncapped)?,
        capped: model.to_schubert_basis(&capped)?,
        diagnostics,
    })
}

pub fn schubert_csm(space: Space, lambda: &Partition) -> Result<SchubertResult, Error> {
    schubert_ty(&GrassmannModel::new(space, Some(int(-1))), lambda)
}

/// Strict partitions inside the staircase of `n`.
pub fn schubert_indices(n: i64) -> Vec<Partition> {
    strict_partitions(n * (n + 1) / 2, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[i64]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn ints(c: &SchubertClass) -> Vec<Rational> {
        c.ordered().into_iter().map(|(_, v)| v.coeff(0)).collect()
    }

    #[test]
    fn qfun_small() {
        let m = GrassmannModel::with_trunc(Space::Lagrangian(2), 3, Some(int(-1)));
        assert_eq!(m.nx(), 2);
        let q1 = m.qfun(&part(&[1]));
        let x = |i| Poly::var(m.base(), i);
        assert_eq!(q1, x(0).add(&x(1)).scale(&int(2)));
        assert_eq!(m.qfun(&Partition::default()), Poly::one(m.base()));
        let q21 = m.q(2).mul(&m.q(1)).sub(&m.q(3).scale(&int(2)));
        assert_eq!(m.qfun(&part(&[2, 1])), q21);
    }

    #[test]
    fn basis_round_trip() {
        let m = GrassmannModel::with_trunc(Space::Lagrangian(10), 10, Some(int(-1)));
        for mu in strict_partitions(10, 10) {
            let c = m.to_schubert_basis(&m.qfun(&mu)).unwrap();
            assert_eq!(c.support.len(), 1, "{mu}");
            assert_eq!(c.coeff(&mu), YPoly::one());
        }
        let sq = m.qfun(&part(&[1])).mul(&m.qfun(&part(&[1])));
        let c = m.to_schubert_basis(&sq).unwrap();
        assert_eq!(c.coeff(&part(&[2])), YPoly::from_ints(&[2]));
        assert_eq!(c.support.len(), 1);
        let not_sym = Poly::var(m.base(), 0);
        assert!(matches!(m.to_schubert_basis(&not_sym), Err(Error::NotInSubring(_))));
    }

    #[test]
    fn quotient_drops_long_rows() {
        let m = GrassmannModel::new(Space::Lagrangian(2), Some(int(-1)));
        let q2 = m.qfun(&part(&[2]));
        let c = m.to_schubert_basis(&q2.mul(&q2)).unwrap();
        assert!(c.support.is_empty());
    }

    #[test]
    fn projective_line() {
        let m = GrassmannModel::new(Space::Lagrangian(1), Some(int(-1)));
        let c = m.csm_ambient();
        assert_eq!(ints(&c), vec![int(1), int(2)]);
    }

    #[test]
    fn euler_characteristics() {
        for n in 1..=4 {
            for space in [Space::Lagrangian(n), Space::OddOrthogonal(n)] {
                let m = GrassmannModel::new(space, Some(int(-1)));
                assert_eq!(m.csm_ambient().integral(), YPoly::constant(int(1 << n)), "{space}");
                assert_eq!(m.ty_ambient(), m.csm_ambient(), "{space}");
            }
        }
    }

    #[test]
    fn chi_y_of_lagrangian() {
        for n in 1..=3 {
            let m = GrassmannModel::new(Space::Lagrangian(n), None);
            let want = (1..=n as usize).fold(YPoly::one(), |acc, i| acc * (YPoly::one() + YPoly::neg_y_pow(i)));
            assert_eq!(m.chi_y(), want);
        }
    }

    #[test]
    fn fundamental_class_is_leading() {
        for space in [Space::Lagrangian(3), Space::OddOrthogonal(3)] {
            for lam in schubert_indices(3).into_iter().filter(|l| !l.is_empty()) {
                let m = GrassmannModel::new(space, Some(int(-1)));
                let r = schubert_ty(&m, &lam).unwrap();
                let low = r.capped.of_degree(lam.size());
                assert_eq!(low, vec![(lam.clone(), YPoly::one())], "{space} {lam}");
            }
        }
    }

    #[test]
    fn schubert_csm_is_positive_and_counts_cells() {
        for space in [Space::Lagrangian(3), Space::OddOrthogonal(3)] {
            let m = GrassmannModel::new(space, Some(int(-1)));
            let cells = schubert_indices(3);
            for lam in &cells {
                let r = schubert_ty(&m, lam).unwrap();
                for (mu, c) in r.capped.ordered() {
                    let c = c.as_constant().unwrap();
                    assert!(c > int(0), "{space} {lam}: coefficient of {mu} is {c}");
                }
                let chi = cells.iter().filter(|mu| mu.contains(lam)).count() as i64;
                assert_eq!(r.capped.integral(), YPoly::constant(int(chi)), "{space} {lam}");
            }
        }
    }
}
