//! Resolution and locus classes against chi_y computed from Schubert cells.

use tyclass::cells::CellModel;
use tyclass::grassmann::{schubert_indices, schubert_ty, GrassmannModel, Space};
use tyclass::loci::resolution_class;
use tyclass::ring::YPoly;

fn check(space: Space) {
    let m = GrassmannModel::new(space, None);
    let ambient = m.ty_ambient_poly();
    for lam in schubert_indices(space.n()).into_iter().filter(|l| !l.is_empty()) {
        let spec = m.schubert_spec(&lam).unwrap();
        let cells = CellModel::shared(spec.family, spec.n, spec.p);
        let top = cells.cell_of(&spec).unwrap();
        let below: Vec<usize> = (0..cells.cells.len()).filter(|&c| cells.below(c, top)).collect();

        // affine cells have chi_y = (-y)^dim
        let locus = below.iter().fold(YPoly::zero(), |acc, &c| acc + YPoly::neg_y_pow(cells.dim(c) as usize));
        let tower = below.iter().fold(YPoly::zero(), |acc, &c| {
            acc + cells.fiber_chi_y(&spec, c) * YPoly::neg_y_pow(cells.dim(c) as usize)
        });

        let res = resolution_class(&spec, &m).unwrap().mul(&ambient);
        assert_eq!(m.to_schubert_basis(&res).unwrap().integral(), tower, "{space} {lam} resolution");
        assert_eq!(schubert_ty(&m, &lam).unwrap().capped.integral(), locus, "{space} {lam} locus");
    }
}

#[test]
fn lagrangian_chi_y() {
    check(Space::Lagrangian(3));
}

#[test]
fn odd_orthogonal_chi_y() {
    check(Space::OddOrthogonal(3));
}
