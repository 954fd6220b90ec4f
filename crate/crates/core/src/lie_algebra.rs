//! Chevalley basis with exact integer structure constants, the Casimir
//! element of the Killing form, and the canonical invariant in the third
//! exterior power of the algebra.
//!
//! Basis order: `E_alpha` for positive roots in (height, lex) order, then
//! `F_alpha` in the same order, then the simple coroot generators `H_i`.
//! Signs of the constants `N_{a,b}` are pinned by giving every extraspecial
//! pair the positive sign and propagating through the standard identities;
//! the Jacobi identity is verified exhaustively in tests.

use crate::error::{Error, Result};
use crate::linalg::{q_to_string, qi, QMat, Q};
use crate::root_data::RootSystem;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    E(usize),
    F(usize),
    H(usize),
}

/// Sparse tensor of order 2 or 3 over the algebra basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub order: usize,
    pub coeffs: BTreeMap<Vec<usize>, Q>,
}

impl TensorElement {
    pub fn new(order: usize) -> Self {
        TensorElement { order, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, key: Vec<usize>, c: Q) {
        debug_assert_eq!(key.len(), self.order);
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove; keys with zero coefficient are pruned
            let k: Vec<usize> = self
                .coeffs
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, t: &Q) -> TensorElement {
        let mut out = TensorElement::new(self.order);
        for (k, v) in &self.coeffs {
            out.coeffs.insert(k.clone(), v * t);
        }
        out
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    /// Is `other` a nonzero scalar multiple of `self`?
    pub fn proportional_to(&self, other: &TensorElement) -> Option<Q> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (k0, v0) = self.coeffs.iter().next().unwrap();
        let w0 = other.coeffs.get(k0)?;
        let ratio = w0 / v0;
        if self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        for (k, v) in &self.coeffs {
            if other.coeffs.get(k)? != &(v * &ratio) {
                return None;
            }
        }
        Some(ratio)
    }

    /// Swap two tensor slots.
    pub fn swap_slots(&self, s1: usize, s2: usize) -> TensorElement {
        let mut out = TensorElement::new(self.order);
        for (k, v) in &self.coeffs {
            let mut key = k.clone();
            key.swap(s1, s2);
            out.add_term(key, v.clone());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    root_system: Arc<RootSystem>,
    npos: usize,
    dim: usize,
    /// brackets[i][j] = [x_i, x_j], sparse integer rows
    brackets: Vec<Vec<Vec<(usize, i64)>>>,
    /// for each non-simple positive root: (simple node i, positive root index
    /// of beta, N_{alpha_i, beta}) with gamma = alpha_i + beta
    extraspecial: Vec<Option<(usize, usize, i64)>>,
}

struct NCalc<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(Vec<i64>, Vec<i64>), Q>,
}

impl<'a> NCalc<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        NCalc { rs, memo: HashMap::new() }
    }

    fn is_root(&self, v: &[i64]) -> bool {
        let vq = RootSystem::root_to_q(v);
        self.rs.is_root(&vq)
    }

    fn norm(&self, v: &[i64]) -> Q {
        let vq = RootSystem::root_to_q(v);
        self.rs.inner(&vq, &vq)
    }

    fn is_positive(v: &[i64]) -> bool {
        v.iter().all(|&c| c >= 0)
    }

    /// (height, lex) comparison used for the total order on positive roots.
    fn root_lt(a: &[i64], b: &[i64]) -> bool {
        let (ha, hb) = (a.iter().sum::<i64>(), b.iter().sum::<i64>());
        (ha, a) < (hb, b)
    }

    fn chain_p(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut p = 0;
        loop {
            let probe: Vec<i64> =
                b.iter().zip(a).map(|(x, y)| x - (p + 1) * y).collect();
            if probe.iter().all(|&c| c == 0) || !self.is_root(&probe) {
                return p;
            }
            p += 1;
        }
    }

    /// Minimal special pair (alpha, beta) with alpha + beta = gamma, where
    /// minimality is taken in the same (height, lex) order as `root_lt`; the
    /// first component is always a simple root.
    fn extraspecial_pair(&self, gamma: &[i64]) -> (Vec<i64>, Vec<i64>) {
        for alpha in self.rs.positive_roots() {
            let beta: Vec<i64> = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
            if Self::is_positive(&beta)
                && self.is_root(&beta)
                && Self::root_lt(alpha, &beta)
            {
                return (alpha.clone(), beta);
            }
        }
        unreachable!("every non-simple positive root splits as a special pair")
    }

    /// Structure constant N_{a,b} with [E_a, E_b] = N_{a,b} E_{a+b},
    /// for roots a, b with a + b a root.
    fn n(&mut self, a: &[i64], b: &[i64]) -> Q {
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let val = self.n_inner(a, b);
        self.memo.insert(key, val.clone());
        val
    }

    fn n_inner(&mut self, a: &[i64], b: &[i64]) -> Q {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        debug_assert!(sum.iter().any(|&c| c != 0), "opposite roots have no N");
        if !self.is_root(&sum) {
            return Q::zero();
        }
        let apos = Self::is_positive(a);
        let bpos = Self::is_positive(b);
        match (apos, bpos) {
            (true, true) => {
                if !Self::root_lt(a, b) {
                    return -self.n(b, a);
                }
                let (alpha, beta) = self.extraspecial_pair(&sum);
                if alpha == a {
                    debug_assert_eq!(beta, b);
                    return qi(self.chain_p(a, b) + 1);
                }
                // special but not extraspecial: resolve against the
                // extraspecial pair through the four-root identity
                let gamma_norm = self.norm(&sum);
                let n_ab = self.n(&alpha, &beta);
                let xi = a;
                let eta = b;
                let mut acc = Q::zero();
                let diff1: Vec<i64> = xi.iter().zip(&alpha).map(|(x, y)| x - y).collect();
                if self.is_root(&diff1) {
                    // (xi - alpha) = (beta - eta) as vectors
                    let neg_xi: Vec<i64> = xi.iter().map(|c| -c).collect();
                    let neg_eta: Vec<i64> = eta.iter().map(|c| -c).collect();
                    let t = self.n(&neg_xi, &alpha) * self.n(&beta, &neg_eta);
                    acc += t / self.norm(&diff1);
                }
                let diff2: Vec<i64> = beta.iter().zip(xi).map(|(x, y)| x - y).collect();
                if self.is_root(&diff2) {
                    let neg_xi: Vec<i64> = xi.iter().map(|c| -c).collect();
                    let neg_eta: Vec<i64> = eta.iter().map(|c| -c).collect();
                    let t = self.n(&beta, &neg_xi) * self.n(&alpha, &neg_eta);
                    acc += t / self.norm(&diff2);
                }
                acc * gamma_norm / n_ab
            }
            (false, false) => {
                let na: Vec<i64> = a.iter().map(|c| -c).collect();
                let nb: Vec<i64> = b.iter().map(|c| -c).collect();
                -self.n(&na, &nb)
            }
            (false, true) => -self.n(b, a),
            (true, false) => {
                let v: Vec<i64> = b.iter().map(|c| -c).collect();
                if Self::is_positive(&sum) {
                    // a = v + sum: N_{a,-v} = -(sum,sum)/(a,a) * N_{v,sum}
                    let t = self.n(&v, &sum);
                    -t * self.norm(&sum) / self.norm(a)
                } else {
                    // sum negative: with d = -sum, d + a = v:
                    // N_{a,-v} = (d,d)/(v,v) * N_{d,a}
                    let d: Vec<i64> = sum.iter().map(|c| -c).collect();
                    let t = self.n(&d, a);
                    t * self.norm(&d) / self.norm(&v)
                }
            }
        }
    }
}

pub fn chevalley(rs: Arc<RootSystem>) -> ChevalleyAlgebra {
    ChevalleyAlgebra::build(rs)
}

impl ChevalleyAlgebra {
    pub fn build(rs: Arc<RootSystem>) -> ChevalleyAlgebra {
        let npos = rs.num_positive_roots();
        let rank = rs.rank();
        let dim = 2 * npos + rank;
        let mut calc = NCalc::new(&rs);

        // signed root coords per basis index prefix
        let signed_root = |idx: usize| -> Vec<i64> {
            if idx < npos {
                rs.positive_roots()[idx].clone()
            } else {
                rs.positive_roots()[idx - npos].iter().map(|c| -c).collect()
            }
        };

        let mut brackets: Vec<Vec<Vec<(usize, i64)>>> = vec![vec![Vec::new(); dim]; dim];
        let root_basis_index = |r: &[i64], rs: &RootSystem| -> usize {
            if r.iter().all(|&c| c >= 0) {
                rs.root_index(r).expect("positive root")
            } else {
                let neg: Vec<i64> = r.iter().map(|c| -c).collect();
                npos + rs.root_index(&neg).expect("negative root")
            }
        };

        for i in 0..2 * npos {
            let a = signed_root(i);
            for j in 0..2 * npos {
                if i == j {
                    continue;
                }
                let b = signed_root(j);
                let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if sum.iter().all(|&c| c == 0) {
                    // [E_a, E_{-a}] = H_{a^vee}
                    let (pos, sign): (Vec<i64>, i64) = if NCalc::is_positive(&a) {
                        (a.clone(), 1)
                    } else {
                        (a.iter().map(|c| -c).collect(), -1)
                    };
                    let coro = rs.coroot_coords(&pos);
                    let mut row = Vec::new();
                    for (k, &c) in coro.iter().enumerate() {
                        if c != 0 {
                            row.push((2 * npos + k, sign * c));
                        }
                    }
                    brackets[i][j] = row;
                } else if calc.is_root(&sum) {
                    let n = calc.n(&a, &b);
                    assert!(n.is_integer(), "structure constant must be integral");
                    let n: i64 = n.to_integer().try_into().expect("small integer");
                    if n != 0 {
                        brackets[i][j] = vec![(root_basis_index(&sum, &rs), n)];
                    }
                }
            }
        }
        // [H_i, E_a] and [H_i, H_j]
        for hi in 0..rank {
            let h = 2 * npos + hi;
            for j in 0..2 * npos {
                let b = signed_root(j);
                let pairing: i64 = (0..rank).map(|k| b[k] * rs.cartan_matrix()[k][hi]).sum();
                if pairing != 0 {
                    brackets[h][j] = vec![(j, pairing)];
                    brackets[j][h] = vec![(j, -pairing)];
                }
            }
        }

        // extraspecial pair bookkeeping for representation building
        let mut extraspecial = Vec::with_capacity(npos);
        for gamma in rs.positive_roots() {
            if RootSystem::height(gamma) == 1 {
                extraspecial.push(None);
                continue;
            }
            let (alpha, beta) = calc.extraspecial_pair(gamma);
            let node = alpha.iter().position(|&c| c == 1).unwrap();
            let beta_idx = rs.root_index(&beta).unwrap();
            let n = calc.n(&alpha, &beta);
            assert!(n.is_integer());
            extraspecial.push(Some((node, beta_idx, i64::try_from(n.to_integer()).unwrap())));
        }

        ChevalleyAlgebra { root_system: rs, npos, dim, brackets, extraspecial }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.root_system
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_positive_roots(&self) -> usize {
        self.npos
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn label_of(&self, idx: usize) -> BasisLabel {
        if idx < self.npos {
            BasisLabel::E(idx)
        } else if idx < 2 * self.npos {
            BasisLabel::F(idx - self.npos)
        } else {
            BasisLabel::H(idx - 2 * self.npos)
        }
    }

    pub fn index_of(&self, label: BasisLabel) -> usize {
        match label {
            BasisLabel::E(i) => i,
            BasisLabel::F(i) => self.npos + i,
            BasisLabel::H(i) => 2 * self.npos + i,
        }
    }

    pub fn label_name(&self, idx: usize) -> String {
        match self.label_of(idx) {
            BasisLabel::E(i) => format!("E{:?}", self.root_system.positive_roots()[i]),
            BasisLabel::F(i) => format!("F{:?}", self.root_system.positive_roots()[i]),
            BasisLabel::H(i) => format!("H{}", i + 1),
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let fail = || Error::UnknownLabel(s.to_string());
        if let Some(num) = s.strip_prefix('H') {
            let i: usize = num.trim().parse().map_err(|_| fail())?;
            if i == 0 || i > self.rank() {
                return Err(fail());
            }
            return Ok(self.index_of(BasisLabel::H(i - 1)));
        }
        let (kind, rest) = s.split_at(1);
        let coords: Vec<i64> = rest
            .trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| fail()))
            .collect::<Result<_>>()?;
        let idx = self.root_system.root_index(&coords).ok_or_else(fail)?;
        match kind {
            "E" => Ok(self.index_of(BasisLabel::E(idx))),
            "F" => Ok(self.index_of(BasisLabel::F(idx))),
            _ => Err(fail()),
        }
    }

    /// `[x_i, x_j]` as a sparse integer row over the basis.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.brackets[i][j]
    }

    pub fn extraspecial_of(&self, pos_root_idx: usize) -> Option<(usize, usize, i64)> {
        self.extraspecial[pos_root_idx]
    }

    /// Deterministic text table of all nonzero structure constants.
    pub fn dump_structure_constants(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} dim={}", self.root_system.system_string(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let row = self.bracket(i, j);
                if row.is_empty() {
                    continue;
                }
                let rhs = row
                    .iter()
                    .map(|&(k, c)| format!("{:+}*{}", c, self.label_name(k)))
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(
                    out,
                    "[{}, {}] = {}",
                    self.label_name(i),
                    self.label_name(j),
                    rhs
                );
            }
        }
        out
    }

    /// Killing form as an exact integer matrix (returned over Q).
    pub fn killing_form(&self) -> QMat {
        let dim = self.dim;
        let mut k = QMat::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let mut tr: i128 = 0;
                for d in 0..dim {
                    for &(e, n1) in self.bracket(b, d).iter() {
                        for &(f, n2) in self.bracket(a, e).iter() {
                            if f == d {
                                tr += n1 as i128 * n2 as i128;
                            }
                        }
                    }
                }
                let v = Q::from_integer(tr.into());
                *k.at_mut(a, b) = v.clone();
                *k.at_mut(b, a) = v;
            }
        }
        k
    }

    /// Casimir element of the Killing form as a symmetric 2-tensor.
    pub fn casimir(&self) -> TensorElement {
        let k = self.killing_form();
        let kinv = k.inverse().expect("Killing form of a semisimple algebra is nonsingular");
        let mut c = TensorElement::new(2);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let v = kinv.at(a, b);
                if !v.is_zero() {
                    c.add_term(vec![a, b], v.clone());
                }
            }
        }
        c
    }

    /// Canonical invariant `[c_12, c_23]` in the third exterior power.
    pub fn canonical_element(&self) -> TensorElement {
        let c = self.casimir();
        let mut t = TensorElement::new(3);
        for (kab, vab) in &c.coeffs {
            let (a, b) = (kab[0], kab[1]);
            for (kuv, vuv) in &c.coeffs {
                let (u, v) = (kuv[0], kuv[1]);
                for &(mid, n) in self.bracket(b, u).iter() {
                    t.add_term(vec![a, mid, v], vab * vuv * qi(n));
                }
            }
        }
        t
    }

    /// Explicit root-vector expansion of the canonical invariant, used as an
    /// independently computed cross-check (agrees up to one global scalar).
    pub fn canonical_element_explicit(&self) -> TensorElement {
        let rs = &self.root_system;
        let mut t = TensorElement::new(3);
        for (ai, alpha) in rs.positive_roots().iter().enumerate() {
            let aq = RootSystem::root_to_q(alpha);
            let na = rs.inner(&aq, &aq);
            for (bi, beta) in rs.positive_roots().iter().enumerate() {
                let bq = RootSystem::root_to_q(beta);
                let nb = rs.inner(&bq, &bq);
                let coeff = &na * &nb / qi(4);
                let e_a = self.index_of(BasisLabel::E(ai));
                let f_a = self.index_of(BasisLabel::F(ai));
                let e_b = self.index_of(BasisLabel::E(bi));
                let f_b = self.index_of(BasisLabel::F(bi));
                for &(mid, n) in self.bracket(f_a, e_b).iter() {
                    let c = &coeff * qi(n);
                    add_wedge3(&mut t, e_a, mid, f_b, &c);
                }
            }
        }
        t
    }

    /// Diagonal adjoint action `(ad x ⊗ 1 ⊗ ... + ... ⊗ ad x)` on a tensor.
    pub fn apply_ad(&self, x: usize, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new(t.order);
        for (key, v) in &t.coeffs {
            for slot in 0..t.order {
                for &(img, n) in self.bracket(x, key[slot]).iter() {
                    let mut k = key.clone();
                    k[slot] = img;
                    out.add_term(k, v * qi(n));
                }
            }
        }
        out
    }

    /// Check the Jacobi identity on one basis triple.
    pub fn jacobi_holds(&self, a: usize, b: usize, c: usize) -> bool {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        let mut add = |acc: &mut BTreeMap<usize, i64>, x: usize, y: usize, z: usize| {
            for &(m, n1) in self.bracket(y, z).iter() {
                for &(k, n2) in self.bracket(x, m).iter() {
                    *acc.entry(k).or_insert(0) += n1 * n2;
                }
            }
        };
        add(&mut acc, a, b, c);
        add(&mut acc, b, c, a);
        add(&mut acc, c, a, b);
        acc.values().all(|&v| v == 0)
    }
}

/// Add `coeff * (x wedge y wedge z)` expanded over all six slot orders.
fn add_wedge3(t: &mut TensorElement, x: usize, y: usize, z: usize, coeff: &Q) {
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 0, 2], -1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
    ];
    let v = [x, y, z];
    for (p, sgn) in PERMS {
        t.add_term(vec![v[p[0]], v[p[1]], v[p[2]]], coeff * qi(sgn));
    }
}

/// Total antisymmetry under all slot transpositions.
pub fn is_totally_antisymmetric(t: &TensorElement) -> bool {
    if t.order < 2 {
        return true;
    }
    for s in 0..t.order - 1 {
        let swapped = t.swap_slots(s, s + 1);
        let neg = t.scale(&-Q::one());
        if swapped != neg {
            return false;
        }
    }
    // also check the non-adjacent transposition for order 3
    if t.order == 3 {
        let swapped = t.swap_slots(0, 2);
        if swapped != t.scale(&-Q::one()) {
            return false;
        }
    }
    true
}

/// `g`-invariance: the diagonal adjoint action kills the tensor for every
/// basis element.
pub fn is_invariant(g: &ChevalleyAlgebra, t: &TensorElement) -> bool {
    (0..g.dim()).all(|x| g.apply_ad(x, t).is_zero())
}

pub fn dump_to_string(g: &ChevalleyAlgebra) -> String {
    g.dump_structure_constants()
}

#[allow(dead_code)]
fn q_dbg(x: &Q) -> String {
    q_to_string(x)
}
