//! Explicit construction of irreducible highest-weight modules with exact
//! rational action matrices.
//!
//! The module is built weight space by weight space, by increasing depth
//! below the highest weight. Candidate vectors `F_i x` spanning a new weight
//! space are sifted with the contravariant form: the Gram matrix of the
//! candidates is assembled from already-known data (`<F_i x, F_j y> =
//! <x, E_i F_j y>`), a maximal positive-definite principal block picks the
//! new basis, and the solve against that block expresses every `F_i x` in
//! the chosen basis. Everything stays in exact rational arithmetic.

use crate::chars::weyl_dim;
use crate::error::{Error, Result};
use crate::lie_algebra::{BasisLabel, ChevalleyAlgebra};
use crate::linalg::{q_from_string, q_to_string, qi, QMat, Q};
use crate::root_data::{RootSystem, Weight};
use num::{One, Signed, Zero};
use serde_json::json;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_DIM_CEILING: u64 = 5000;

pub type SparseVec = Vec<(usize, Q)>;

/// Column-major sparse rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, c) in v {
            for (i, a) in &self.cols[*j] {
                let entry = acc.entry(*i).or_insert_with(Q::zero);
                *entry += a * c;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn compose(&self, inner: &SparseMat) -> SparseMat {
        // self * inner
        SparseMat {
            rows: self.rows,
            cols: inner.cols.iter().map(|col| self.apply(col)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        let mut cols = Vec::with_capacity(self.cols.len());
        for (a, b) in self.cols.iter().zip(&other.cols) {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (i, c) in a {
                *acc.entry(*i).or_insert_with(Q::zero) += c;
            }
            for (i, c) in b {
                *acc.entry(*i).or_insert_with(Q::zero) -= c;
            }
            cols.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        SparseMat { rows: self.rows, cols }
    }

    pub fn scale(&self, t: &Q) -> SparseMat {
        SparseMat {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(i, c)| (*i, c * t)).collect())
                .collect(),
        }
    }

    pub fn commutator(&self, other: &SparseMat) -> SparseMat {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }
}

/// Irreducible module with exact action matrices for every algebra basis label.
#[derive(Clone, Debug)]
pub struct HWModule {
    algebra: Arc<ChevalleyAlgebra>,
    highest_weight: Weight,
    dim: usize,
    basis_weights: Vec<Weight>,
    /// simple-root coordinates of each basis weight
    basis_coords: Vec<Vec<Q>>,
    /// action matrices indexed by algebra basis index
    action: Vec<SparseMat>,
}

pub fn highest_weight_module(
    g: &Arc<ChevalleyAlgebra>,
    lambda: &Weight,
    ceiling: u64,
) -> Result<HWModule> {
    HWModule::build(g, lambda, ceiling)
}

impl HWModule {
    pub fn build(g: &Arc<ChevalleyAlgebra>, lambda: &Weight, ceiling: u64) -> Result<HWModule> {
        let rs = g.root_system().clone();
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(rs.weight_string(lambda)));
        }
        let expected_dim = weyl_dim(&rs, lambda);
        if expected_dim > ceiling {
            return Err(Error::DimensionCeiling { dim: expected_dim, ceiling });
        }
        let rank = rs.rank();
        let lam = rs.weight_to_coords(lambda);

        let mut basis_coords: Vec<Vec<Q>> = vec![lam.clone()];
        let mut by_weight: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
        by_weight.insert(lam.clone(), vec![0]);
        let mut gram: BTreeMap<Vec<Q>, QMat> = BTreeMap::new();
        gram.insert(lam.clone(), {
            let mut m = QMat::zeros(1, 1);
            *m.at_mut(0, 0) = Q::one();
            m
        });
        // e_act[i][b] / f_act[i][b]: action of the i-th simple raising and
        // lowering generator on basis vector b
        let mut e_act: Vec<Vec<SparseVec>> = vec![vec![Vec::new()]; rank];
        let mut f_act: Vec<Vec<Option<SparseVec>>> = vec![vec![None]; rank];

        let mut frontier: Vec<Vec<Q>> = vec![lam.clone()];
        while !frontier.is_empty() {
            let mut next: std::collections::BTreeSet<Vec<Q>> = std::collections::BTreeSet::new();
            for w in &frontier {
                for i in 0..rank {
                    let mut child = w.clone();
                    child[i] -= Q::one();
                    next.insert(child);
                }
            }
            let mut new_frontier = Vec::new();
            for nu in next {
                // candidates (i, x): F_i applied to basis vector x one level up
                let mut cands: Vec<(usize, usize)> = Vec::new();
                for i in 0..rank {
                    let mut parent = nu.clone();
                    parent[i] += Q::one();
                    if let Some(ids) = by_weight.get(&parent) {
                        for &x in ids {
                            cands.push((i, x));
                        }
                    }
                }
                if cands.is_empty() {
                    continue;
                }

                // z[(j,y)] = E_i F_j y for the row generator i of each entry;
                // computed per (i, (j,y)) pair below
                let parent_of = |i: usize, nu: &Vec<Q>| {
                    let mut p = nu.clone();
                    p[i] += Q::one();
                    p
                };

                let nc = cands.len();
                let mut m = QMat::zeros(nc, nc);
                for (col, &(j, y)) in cands.iter().enumerate() {
                    let wy = &basis_coords[y];
                    for (row, &(i, x)) in cands.iter().enumerate() {
                        // z = E_i F_j y = F_j E_i y + delta_ij <wt(y), ai^vee> y
                        let mut z: BTreeMap<usize, Q> = BTreeMap::new();
                        for (b, c) in &e_act[i][y] {
                            if let Some(fb) = f_act[j][*b].as_ref() {
                                for (t, a) in fb {
                                    *z.entry(*t).or_insert_with(Q::zero) += a * c;
                                }
                            }
                        }
                        if i == j {
                            let p = rs.coroot_pairing(wy, i);
                            if !p.is_zero() {
                                *z.entry(y).or_insert_with(Q::zero) += p;
                            }
                        }
                        // <x, z> through the Gram matrix of the parent space
                        let pw = parent_of(i, &nu);
                        let gm = gram.get(&pw).expect("parent space Gram known");
                        let ids = by_weight.get(&pw).expect("parent ids");
                        let xrow = ids.iter().position(|&b| b == x).expect("x in parent");
                        let mut acc = Q::zero();
                        for (t, c) in z {
                            if c.is_zero() {
                                continue;
                            }
                            let trow = ids.iter().position(|&b| b == t).expect("z in parent");
                            acc += gm.at(xrow, trow) * c;
                        }
                        *m.at_mut(row, col) = acc;
                    }
                }
                debug_assert!(m.is_symmetric(), "contravariant form must be symmetric");

                // greedy maximal positive-definite principal block
                let mut selected: Vec<usize> = Vec::new();
                let mut gsel = QMat::zeros(0, 0);
                for c in 0..nc {
                    let k = selected.len();
                    let mut bordered = QMat::zeros(k + 1, k + 1);
                    for (ri, &r) in selected.iter().enumerate() {
                        for (ci, &cc) in selected.iter().enumerate() {
                            *bordered.at_mut(ri, ci) = m.at(r, cc).clone();
                        }
                        *bordered.at_mut(ri, k) = m.at(r, c).clone();
                        *bordered.at_mut(k, ri) = m.at(c, r).clone();
                    }
                    *bordered.at_mut(k, k) = m.at(c, c).clone();
                    let residual = if k == 0 {
                        m.at(c, c).clone()
                    } else {
                        let rhs: Vec<Q> =
                            selected.iter().map(|&r| m.at(r, c).clone()).collect();
                        let beta = gsel.solve(&rhs).expect("selected block nonsingular");
                        let mut res = m.at(c, c).clone();
                        for (b, r) in beta.iter().zip(&rhs) {
                            res -= b * r;
                        }
                        res
                    };
                    assert!(
                        !residual.is_negative(),
                        "contravariant form must be positive semidefinite"
                    );
                    if residual.is_positive() {
                        selected.push(c);
                        gsel = bordered;
                    }
                }

                if selected.is_empty() {
                    // the weight space is zero; every candidate image vanishes
                    for &(j, y) in &cands {
                        f_act[j][y] = Some(Vec::new());
                    }
                    continue;
                }

                // create basis vectors for the selected candidates
                let first_id = basis_coords.len();
                let ids: Vec<usize> =
                    (0..selected.len()).map(|k| first_id + k).collect();
                for _ in &selected {
                    basis_coords.push(nu.clone());
                    for i in 0..rank {
                        e_act[i].push(Vec::new());
                        f_act[i].push(None);
                    }
                }
                by_weight.insert(nu.clone(), ids.clone());
                gram.insert(nu.clone(), gsel.clone());

                // express every candidate in the new basis
                for (c, &(j, y)) in cands.iter().enumerate() {
                    let rhs: Vec<Q> = selected.iter().map(|&r| m.at(r, c).clone()).collect();
                    let beta = gsel.solve(&rhs).expect("nonsingular");
                    let expr: SparseVec = beta
                        .into_iter()
                        .enumerate()
                        .filter(|(_, b)| !b.is_zero())
                        .map(|(k, b)| (ids[k], b))
                        .collect();
                    f_act[j][y] = Some(expr);
                }

                // raising action on the new basis vectors:
                // E_j (F_i x) = F_i (E_j x) + delta_ij <wt(x), aj^vee> x
                for (k, &sel) in selected.iter().enumerate() {
                    let (i, x) = cands[sel];
                    let id = ids[k];
                    let wx = basis_coords[x].clone();
                    for j in 0..rank {
                        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                        for (b, c) in &e_act[j][x] {
                            if let Some(fb) = f_act[i][*b].as_ref() {
                                for (t, a) in fb {
                                    *acc.entry(*t).or_insert_with(Q::zero) += a * c;
                                }
                            }
                        }
                        if i == j {
                            let p = rs.coroot_pairing(&wx, j);
                            if !p.is_zero() {
                                *acc.entry(x).or_insert_with(Q::zero) += p;
                            }
                        }
                        e_act[j][id] =
                            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    }
                }
                new_frontier.push(nu);
            }
            frontier = new_frontier;
        }

        let dim = basis_coords.len();
        if dim as u64 != expected_dim {
            return Err(Error::Internal(format!(
                "constructed dimension {dim} does not match the Weyl formula {expected_dim}"
            )));
        }

        // assemble full action matrices
        let npos = g.num_positive_roots();
        let mut action: Vec<Option<SparseMat>> = vec![None; g.dim()];
        for i in 0..rank {
            // simple raising/lowering generators are the height-1 roots
            let mut e = vec![0i64; rank];
            e[i] = 1;
            let ridx = rs.root_index(&e).expect("simple root");
            let mut emat = SparseMat::zero(dim, dim);
            let mut fmat = SparseMat::zero(dim, dim);
            for b in 0..dim {
                emat.cols[b] = e_act[i][b].clone();
                fmat.cols[b] = f_act[i][b].clone().unwrap_or_default();
            }
            action[g.index_of(BasisLabel::E(ridx))] = Some(emat);
            action[g.index_of(BasisLabel::F(ridx))] = Some(fmat);
            // H_i acts diagonally by the coroot pairing
            let mut hmat = SparseMat::zero(dim, dim);
            for (b, coords) in basis_coords.iter().enumerate() {
                let p = rs.coroot_pairing(coords, i);
                if !p.is_zero() {
                    hmat.cols[b].push((b, p));
                }
            }
            action[g.index_of(BasisLabel::H(i))] = Some(hmat);
        }
        // non-simple root vectors by the extraspecial commutator recursion
        for (gidx, gamma) in rs.positive_roots().iter().enumerate() {
            if RootSystem::height(gamma) == 1 {
                continue;
            }
            let (node, beta_idx, n) = g.extraspecial_of(gidx).expect("non-simple root");
            let mut e = vec![0i64; rank];
            e[node] = 1;
            let alpha_idx = rs.root_index(&e).unwrap();
            let ea = action[g.index_of(BasisLabel::E(alpha_idx))].clone().unwrap();
            let eb = action[g.index_of(BasisLabel::E(beta_idx))]
                .clone()
                .expect("lower root processed first");
            let fa = action[g.index_of(BasisLabel::F(alpha_idx))].clone().unwrap();
            let fb = action[g.index_of(BasisLabel::F(beta_idx))].clone().unwrap();
            let inv_n = Q::one() / qi(n);
            action[g.index_of(BasisLabel::E(gidx))] =
                Some(ea.commutator(&eb).scale(&inv_n));
            action[g.index_of(BasisLabel::F(gidx))] =
                Some(fa.commutator(&fb).scale(&-inv_n));
        }
        let action: Vec<SparseMat> = action.into_iter().map(|m| m.unwrap()).collect();
        let _ = npos;

        let basis_weights: Vec<Weight> = basis_coords
            .iter()
            .map(|v| rs.coords_to_weight(v).expect("integral module weight"))
            .collect();

        Ok(HWModule {
            algebra: g.clone(),
            highest_weight: lambda.clone(),
            dim,
            basis_weights,
            basis_coords,
            action,
        })
    }

    pub fn algebra(&self) -> &Arc<ChevalleyAlgebra> {
        &self.algebra
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        self.algebra.root_system()
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_weights(&self) -> &[Weight] {
        &self.basis_weights
    }

    pub fn basis_coords(&self) -> &[Vec<Q>] {
        &self.basis_coords
    }

    pub fn action(&self, algebra_idx: usize) -> &SparseMat {
        &self.action[algebra_idx]
    }

    pub fn action_of(&self, label: BasisLabel) -> &SparseMat {
        &self.action[self.algebra.index_of(label)]
    }

    /// Apply one basis generator to a vector.
    pub fn act(&self, algebra_idx: usize, v: &SparseVec) -> SparseVec {
        self.action[algebra_idx].apply(v)
    }

    /// Apply a rational combination of generators.
    pub fn act_combination(&self, combo: &[(usize, Q)], v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (idx, coeff) in combo {
            for (i, c) in self.action[*idx].apply(v) {
                let entry = acc.entry(i).or_insert_with(Q::zero);
                *entry += c * coeff;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Verify `rho([x,y]) = [rho(x), rho(y)]` over every pair of algebra
    /// basis elements.
    pub fn verify_brackets(&self) -> bool {
        let g = &self.algebra;
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let lhs = self.action[i].commutator(&self.action[j]);
                let mut rhs = SparseMat::zero(self.dim, self.dim);
                for &(k, c) in g.bracket(i, j) {
                    rhs = rhs.sub(&self.action[k].scale(&-qi(c)));
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Deterministic JSON serialization (weights plus sparse matrices).
    pub fn to_json(&self) -> serde_json::Value {
        let rs = self.root_system();
        let mut mats = serde_json::Map::new();
        for idx in 0..self.algebra.dim() {
            let name = self.algebra.label_name(idx);
            let mut triplets = Vec::new();
            for (col, entries) in self.action[idx].cols.iter().enumerate() {
                for (row, c) in entries {
                    triplets.push(json!([col, row, q_to_string(c)]));
                }
            }
            mats.insert(name, json!(triplets));
        }
        json!({
            "system": rs.system_string(),
            "highest_weight": rs.weight_string(&self.highest_weight),
            "dim": self.dim,
            "basis_weights": self
                .basis_weights
                .iter()
                .map(|w| rs.weight_string(w))
                .collect::<Vec<_>>(),
            "action": serde_json::Value::Object(mats),
        })
    }

    pub fn from_json(g: &Arc<ChevalleyAlgebra>, v: &serde_json::Value) -> Result<HWModule> {
        let rs = g.root_system().clone();
        let bad = |m: &str| Error::Internal(format!("module deserialization: {m}"));
        let sys = v["system"].as_str().ok_or_else(|| bad("system"))?;
        if sys != rs.system_string() {
            return Err(bad("system mismatch"));
        }
        let hw = rs.parse_weight(v["highest_weight"].as_str().ok_or_else(|| bad("hw"))?)?;
        let dim = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let basis_weights: Vec<Weight> = v["basis_weights"]
            .as_array()
            .ok_or_else(|| bad("basis"))?
            .iter()
            .map(|s| rs.parse_weight(s.as_str().unwrap_or_default()))
            .collect::<Result<_>>()?;
        if basis_weights.len() != dim {
            return Err(bad("basis length"));
        }
        let basis_coords: Vec<Vec<Q>> =
            basis_weights.iter().map(|w| rs.weight_to_coords(w)).collect();
        let mats = v["action"].as_object().ok_or_else(|| bad("action"))?;
        let mut action = vec![SparseMat::zero(dim, dim); g.dim()];
        for (name, triplets) in mats {
            let idx = g.parse_label(name)?;
            for t in triplets.as_array().ok_or_else(|| bad("triplets"))? {
                let col = t[0].as_u64().ok_or_else(|| bad("col"))? as usize;
                let row = t[1].as_u64().ok_or_else(|| bad("row"))? as usize;
                let c = q_from_string(t[2].as_str().ok_or_else(|| bad("coeff"))?)
                    .ok_or_else(|| bad("coeff"))?;
                action[idx].cols[col].push((row, c));
            }
        }
        for m in &mut action {
            for col in &mut m.cols {
                col.sort_by_key(|(r, _)| *r);
            }
        }
        Ok(HWModule {
            algebra: g.clone(),
            highest_weight: hw,
            dim,
            basis_weights,
            basis_coords,
            action,
        })
    }
}

/// External tensor product over the product algebra: each factor acts on its
/// own slot. Basis order is row-major in the factor bases.
pub fn external_tensor(
    g12: &Arc<ChevalleyAlgebra>,
    m1: &HWModule,
    m2: &HWModule,
) -> Result<HWModule> {
    let rs = g12.root_system().clone();
    let rs1 = m1.root_system();
    let rs2 = m2.root_system();
    let (r1, r2) = (rs1.rank(), rs2.rank());
    if rs.rank() != r1 + r2 {
        return Err(Error::DimensionMismatch(format!(
            "product rank {} != {} + {}",
            rs.rank(),
            r1,
            r2
        )));
    }
    let dim = m1.dim() * m2.dim();
    let pair = |b1: usize, b2: usize| b1 * m2.dim() + b2;

    let mut basis_weights = Vec::with_capacity(dim);
    for w1 in m1.basis_weights() {
        for w2 in m2.basis_weights() {
            let mut c = w1.0.clone();
            c.extend_from_slice(&w2.0);
            basis_weights.push(Weight(c));
        }
    }
    let basis_coords: Vec<Vec<Q>> =
        basis_weights.iter().map(|w| rs.weight_to_coords(w)).collect();

    // map a product-algebra generator to (slot, factor generator index)
    let locate = |idx: usize| -> (usize, usize) {
        match g12.label_of(idx) {
            BasisLabel::E(r) | BasisLabel::F(r) => {
                let root = &g12.root_system().positive_roots()[r];
                let first_block = root[..r1].iter().any(|&c| c != 0);
                let (slot, sub, subrs): (usize, Vec<i64>, &RootSystem) = if first_block {
                    (0, root[..r1].to_vec(), rs1)
                } else {
                    (1, root[r1..].to_vec(), rs2)
                };
                let sub_idx = subrs.root_index(&sub).expect("factor root");
                let label = match g12.label_of(idx) {
                    BasisLabel::E(_) => BasisLabel::E(sub_idx),
                    BasisLabel::F(_) => BasisLabel::F(sub_idx),
                    BasisLabel::H(_) => unreachable!(),
                };
                let factor_alg = if slot == 0 { m1.algebra() } else { m2.algebra() };
                (slot, factor_alg.index_of(label))
            }
            BasisLabel::H(i) => {
                if i < r1 {
                    (0, m1.algebra().index_of(BasisLabel::H(i)))
                } else {
                    (1, m2.algebra().index_of(BasisLabel::H(i - r1)))
                }
            }
        }
    };

    let mut action = Vec::with_capacity(g12.dim());
    for idx in 0..g12.dim() {
        let (slot, sub_idx) = locate(idx);
        let mut mat = SparseMat::zero(dim, dim);
        if slot == 0 {
            let sub = m1.action(sub_idx);
            for b1 in 0..m1.dim() {
                for b2 in 0..m2.dim() {
                    mat.cols[pair(b1, b2)] =
                        sub.cols[b1].iter().map(|(r, c)| (pair(*r, b2), c.clone())).collect();
                }
            }
        } else {
            let sub = m2.action(sub_idx);
            for b1 in 0..m1.dim() {
                for b2 in 0..m2.dim() {
                    mat.cols[pair(b1, b2)] =
                        sub.cols[b2].iter().map(|(r, c)| (pair(b1, *r), c.clone())).collect();
                }
            }
        }
        action.push(mat);
    }

    let mut hw = m1.highest_weight().0.clone();
    hw.extend_from_slice(&m2.highest_weight().0);

    Ok(HWModule {
        algebra: g12.clone(),
        highest_weight: Weight(hw),
        dim,
        basis_weights,
        basis_coords,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{weight_multiplicity, DEFAULT_DIM_CEILING};
    use crate::lie_algebra::ChevalleyAlgebra;

    fn alg(s: &str) -> Arc<ChevalleyAlgebra> {
        Arc::new(ChevalleyAlgebra::build(Arc::new(RootSystem::parse_system(s).unwrap())))
    }

    fn module(s: &str, w: &[i64]) -> HWModule {
        let g = alg(s);
        HWModule::build(&g, &Weight(w.to_vec()), DEFAULT_DIM_CEILING).unwrap()
    }

    #[test]
    fn sl2_adjoint() {
        let m = module("A1", &[2]);
        assert_eq!(m.dim(), 3);
        let mut weights: Vec<i64> = m.basis_weights().iter().map(|w| w.0[0]).collect();
        weights.sort();
        assert_eq!(weights, vec![-2, 0, 2]);
        assert!(m.verify_brackets());
    }

    #[test]
    fn b2_spin_module() {
        let m = module("B2", &[0, 1]);
        assert_eq!(m.dim(), 4);
        assert!(m.verify_brackets());
    }

    #[test]
    fn a2_adjoint_weight_multiplicities() {
        let m = module("A2", &[1, 1]);
        assert_eq!(m.dim(), 8);
        let zero = m
            .basis_weights()
            .iter()
            .filter(|w| w.0.iter().all(|&c| c == 0))
            .count();
        assert_eq!(zero, 2);
        assert!(m.verify_brackets());
    }

    #[test]
    fn raising_kills_highest_weight_vector() {
        let m = module("C2", &[1, 0]);
        let v: SparseVec = vec![(0, Q::one())];
        for i in 0..m.algebra().num_positive_roots() {
            let idx = m.algebra().index_of(BasisLabel::E(i));
            assert!(m.act(idx, &v).is_empty());
        }
    }

    #[test]
    fn cartan_acts_by_pairings() {
        let m = module("G2", &[1, 0]);
        let rs = m.root_system().clone();
        for b in 0..m.dim() {
            let v: SparseVec = vec![(b, Q::one())];
            for i in 0..rs.rank() {
                let idx = m.algebra().index_of(BasisLabel::H(i));
                let out = m.act(idx, &v);
                let expect = rs.coroot_pairing(&m.basis_coords()[b], i);
                if expect.is_zero() {
                    assert!(out.is_empty());
                } else {
                    assert_eq!(out, vec![(b, expect)]);
                }
            }
        }
    }

    #[test]
    fn sl2_lowering_nilpotency_depth() {
        let g = alg("A1");
        let m = HWModule::build(&g, &Weight(vec![3]), DEFAULT_DIM_CEILING).unwrap();
        let f = g.index_of(BasisLabel::F(0));
        let mut v: SparseVec = vec![(0, Q::one())];
        for _ in 0..3 {
            v = m.act(f, &v);
            assert!(!v.is_empty());
        }
        v = m.act(f, &v);
        assert!(v.is_empty(), "F^4 v = 0 in the 4-dimensional module");
    }

    #[test]
    fn freudenthal_agrees_with_construction() {
        for (sys, w) in [
            ("A2", vec![1i64, 1]),
            ("B2", vec![1, 1]),
            ("C3", vec![0, 1, 0]),
            ("G2", vec![0, 1]),
        ] {
            let g = alg(sys);
            let rs = g.root_system().clone();
            let lam = Weight(w.clone());
            let m = HWModule::build(&g, &lam, DEFAULT_DIM_CEILING).unwrap();
            let mut counts: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
            for c in m.basis_coords() {
                *counts.entry(c.clone()).or_insert(0) += 1;
            }
            for (v, &m) in &counts {
                assert_eq!(
                    weight_multiplicity(&rs, &lam, v).unwrap(),
                    m,
                    "{sys} weight {v:?}"
                );
            }
        }
    }

    #[test]
    fn bracket_compatibility_medium_corpus() {
        for (sys, w) in [
            ("A1", vec![3i64]),
            ("A2", vec![2, 0]),
            ("B2", vec![0, 1]),
            ("C2", vec![1, 0]),
            ("G2", vec![1, 0]),
            ("A3", vec![0, 1, 0]),
        ] {
            let m = module(sys, &w);
            assert!(m.verify_brackets(), "{sys} {w:?}");
        }
    }

    #[test]
    fn rejects_non_dominant_and_oversize() {
        let g = alg("A2");
        assert!(matches!(
            HWModule::build(&g, &Weight(vec![-1, 0]), DEFAULT_DIM_CEILING),
            Err(Error::NotDominant(_))
        ));
        assert!(matches!(
            HWModule::build(&g, &Weight(vec![9, 9]), 50),
            Err(Error::DimensionCeiling { .. })
        ));
    }

    #[test]
    fn external_tensor_dimensions_and_brackets() {
        let g1 = alg("A1");
        let m1 = HWModule::build(&g1, &Weight(vec![1]), DEFAULT_DIM_CEILING).unwrap();
        let g2 = alg("C2");
        let m2 = HWModule::build(&g2, &Weight(vec![1, 0]), DEFAULT_DIM_CEILING).unwrap();
        let g12 = alg("A1xC2");
        let t = external_tensor(&g12, &m1, &m2).unwrap();
        assert_eq!(t.dim(), 8);
        assert!(t.verify_brackets());
    }

    #[test]
    fn external_tensor_matches_direct_product_module() {
        let g1 = alg("A1");
        let m1 = HWModule::build(&g1, &Weight(vec![1]), DEFAULT_DIM_CEILING).unwrap();
        let m2 = HWModule::build(&g1, &Weight(vec![1]), DEFAULT_DIM_CEILING).unwrap();
        let g12 = alg("A1xA1");
        let t = external_tensor(&g12, &m1, &m2).unwrap();
        let d = HWModule::build(&g12, &Weight(vec![1, 1]), DEFAULT_DIM_CEILING).unwrap();
        assert_eq!(t.dim(), d.dim());
        let mut tw: Vec<Weight> = t.basis_weights().to_vec();
        let mut dw: Vec<Weight> = d.basis_weights().to_vec();
        tw.sort();
        dw.sort();
        assert_eq!(tw, dw);
        assert!(t.verify_brackets() && d.verify_brackets());
    }

    #[test]
    fn serialization_roundtrip() {
        let g = alg("B2");
        let m = HWModule::build(&g, &Weight(vec![0, 1]), DEFAULT_DIM_CEILING).unwrap();
        let j = m.to_json();
        let m2 = HWModule::from_json(&g, &j).unwrap();
        assert_eq!(m.dim(), m2.dim());
        assert_eq!(m.basis_weights(), m2.basis_weights());
        for idx in 0..g.dim() {
            assert_eq!(m.action(idx), m2.action(idx));
        }
        // canonical serialization is byte-stable
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            serde_json::to_string(&m2.to_json()).unwrap()
        );
    }
}
