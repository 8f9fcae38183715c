//! Schubert cells of the isotropic Grassmannian that carries the loci of a
//! given `(family, n, p)`, used to decompose a resolution into closures of
//! cells.
//!
//! The ambient space has a complete isotropic flag `G_1 < G_2 < ...` with
//! `dim G_t = t`; the flag bundle `F_q` of the loci is `G_t` for
//! `t = n + 1 - q` (`q > 0`) or the orthogonal complement of `F_{1-q}`
//! (`q < 0`). A cell is the set of positions where `dim(U cap G_t)` jumps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;
use crate::loci::{all_specs, Family, LocusSpec};
use crate::ring::YPoly;

#[derive(Debug)]
pub struct CellModel {
    pub family: Family,
    pub n: i64,
    pub p: i64,
    /// Rank of `U`.
    pub u: usize,
    /// Rank of the ambient bundle.
    pub ambient: usize,
    /// Jump positions of each cell, increasing.
    pub cells: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    spec_of: HashMap<usize, LocusSpec>,
}

impl CellModel {
    pub fn new(family: Family, n: i64, p: i64) -> CellModel {
        let nn = n as usize;
        let ambient = match family {
            Family::C => 2 * nn,
            Family::B => 2 * nn + 1,
        };
        let u = (n + 1 - p) as usize;
        let mut cells = Vec::new();
        fn rec(start: usize, m: &CellModel, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == m.u {
                out.push(cur.clone());
                return;
            }
            for t in start..=m.ambient {
                if m.family == Family::B && t == m.n as usize + 1 {
                    continue;
                }
                if cur.contains(&(m.ambient + 1 - t)) {
                    continue;
                }
                cur.push(t);
                rec(t + 1, m, cur, out);
                cur.pop();
            }
        }
        let mut m = CellModel {
            family,
            n,
            p,
            u,
            ambient,
            cells: Vec::new(),
            index: HashMap::new(),
            spec_of: HashMap::new(),
        };
        rec(1, &m, &mut Vec::new(), &mut cells);
        m.index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        m.cells = cells;
        for spec in all_specs(family, n).into_iter().filter(|s| s.p == p) {
            if let [c] = m.generic_cells(&m.conditions(&spec))[..] {
                m.spec_of.insert(c, spec);
            }
        }
        m
    }

    /// Shared instance per `(family, n, p)`.
    pub fn shared(family: Family, n: i64, p: i64) -> Arc<CellModel> {
        type Shared = Mutex<HashMap<(Family, i64, i64), Arc<CellModel>>>;
        static CACHE: OnceLock<Shared> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().unwrap().get(&(family, n, p)) {
            return m.clone();
        }
        let m = Arc::new(CellModel::new(family, n, p));
        cache.lock().unwrap().insert((family, n, p), m.clone());
        m
    }

    pub fn flag_dim(&self, q: i64) -> usize {
        let n = self.n;
        let d = match (q > 0, self.family) {
            (true, _) => n + 1 - q,
            (false, Family::C) => n - q,
            (false, Family::B) => n + 1 - q,
        };
        d as usize
    }

    /// `dim(U cap G_t)` on the cell.
    pub fn rank(&self, cell: usize, t: usize) -> usize {
        self.cells[cell].iter().filter(|&&j| j <= t).count()
    }

    pub fn dim(&self, cell: usize) -> i64 {
        let j = &self.cells[cell];
        let mut d: i64 = j.iter().enumerate().map(|(a, &x)| (x - 1 - a) as i64).sum();
        let mirror_sum = self.ambient + 1;
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                if j[a] + j[b] > mirror_sum {
                    d -= 1;
                }
            }
        }
        if self.family == Family::B {
            d -= j.iter().filter(|&&x| x > self.n as usize + 1).count() as i64;
        }
        d
    }

    pub fn codim(&self, cell: usize) -> i64 {
        let top = (0..self.cells.len()).map(|c| self.dim(c)).max().unwrap_or(0);
        top - self.dim(cell)
    }

    /// `a` lies in the closure of `b`.
    pub fn below(&self, a: usize, b: usize) -> bool {
        self.cells[a].iter().zip(&self.cells[b]).all(|(x, y)| x <= y)
    }

    /// Conditions `dim(U cap F_{q_i}) >= i`.
    pub fn conditions(&self, spec: &LocusSpec) -> Vec<(usize, usize)> {
        spec.q.iter().enumerate().map(|(i, &q)| (self.flag_dim(q), i + 1)).collect()
    }

    fn satisfies(&self, cell: usize, conds: &[(usize, usize)]) -> bool {
        conds.iter().all(|&(t, k)| self.rank(cell, t) >= k)
    }

    /// Cells whose closures are the components of the locus cut out by `conds`.
    pub fn generic_cells(&self, conds: &[(usize, usize)]) -> Vec<usize> {
        let ok: Vec<usize> = (0..self.cells.len()).filter(|&c| self.satisfies(c, conds)).collect();
        ok.iter().copied().filter(|&c| !ok.iter().any(|&o| o != c && self.below(c, o))).collect()
    }

    pub fn cell_of(&self, spec: &LocusSpec) -> Result<usize, Error> {
        match self.generic_cells(&self.conditions(spec))[..] {
            [c] => Ok(c),
            _ => Err(Error::InvalidSpec(format!("q = {:?} does not cut out an irreducible locus", spec.q))),
        }
    }

    pub fn spec_of(&self, cell: usize) -> Option<&LocusSpec> {
        self.spec_of.get(&cell)
    }

    pub fn cell_index(&self, jumps: &[usize]) -> Option<usize> {
        self.index.get(jumps).copied()
    }

    /// `chi_y` of the fiber of the resolution of `spec` over a point of the
    /// cell: a tower of projective spaces `P^{dim(U cap F_{q_i}) - i}`.
    pub fn fiber_chi_y(&self, spec: &LocusSpec, cell: usize) -> YPoly {
        let mut out = YPoly::one();
        for (t, i) in self.conditions(spec) {
            let d = self.rank(cell, t);
            if d < i {
                return YPoly::zero();
            }
            let proj = (0..=d - i).fold(YPoly::zero(), |acc, e| acc + YPoly::neg_y_pow(e));
            out = out * proj;
        }
        out
    }

    /// Coefficients `g` with `T(resolution of spec) = sum g(c) T(closure of c)`.
    pub fn resolution_expansion(&self, spec: &LocusSpec) -> Result<Vec<(usize, YPoly)>, Error> {
        let top = self.cell_of(spec)?;
        let mut inside: Vec<usize> = (0..self.cells.len()).filter(|&c| self.below(c, top)).collect();
        inside.sort_by_key(|&c| std::cmp::Reverse(self.dim(c)));
        let mut g: HashMap<usize, YPoly> = HashMap::new();
        let mut out = Vec::new();
        for &c in &inside {
            let mut v = self.fiber_chi_y(spec, c);
            for (&d, gd) in &g {
                if d != c && self.below(c, d) {
                    v = v - gd.clone();
                }
            }
            if !v.is_zero() {
                g.insert(c, v.clone());
                out.push((c, v));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    #[test]
    fn codimension_is_size_of_lambda() {
        for family in [Family::B, Family::C] {
            for n in 1..=4 {
                for p in 1..=n {
                    let m = CellModel::new(family, n, p);
                    for spec in all_specs(family, n).into_iter().filter(|s| s.p == p) {
                        let c = m.cell_of(&spec).unwrap();
                        assert_eq!(m.codim(c), spec.lambda().size(), "{family} {spec:?}");
                        assert_eq!(m.spec_of(c), Some(&spec));
                    }
                }
            }
        }
    }

    #[test]
    fn lagrangian_cells_are_strict_partitions() {
        let m = CellModel::new(Family::C, 3, 1);
        assert_eq!(m.cells.len(), 8);
        let mut sizes: Vec<i64> = (0..8).map(|c| m.codim(c)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 1, 2, 3, 3, 4, 5, 6]);
    }

    #[test]
    fn divisor_of_lg3() {
        // dim(U cap F_1) = d has fiber P^{d-1}
        let m = CellModel::new(Family::C, 3, 1);
        let spec = LocusSpec::new(Family::C, 3, 1, vec![1]).unwrap();
        let got: Vec<(Partition, YPoly)> = m
            .resolution_expansion(&spec)
            .unwrap()
            .into_iter()
            .map(|(c, g)| (m.spec_of(c).unwrap().lambda(), g))
            .collect();
        let want = vec![
            (Partition::new(vec![1]), YPoly::one()),
            (Partition::new(vec![2, 1]), YPoly::neg_y_pow(1)),
            (Partition::new(vec![3, 2, 1]), YPoly::neg_y_pow(2)),
        ];
        assert_eq!(got, want);
    }
}
