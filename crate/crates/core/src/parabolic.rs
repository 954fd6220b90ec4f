//! Parabolic subalgebra combinatorics: radical root sets, abelian and
//! Heisenberg typing, identification of the radical as a module over the
//! semisimple part of the Levi, and Schubert-cell root sets for reduced
//! words.
//!
//! Everything here is root arithmetic; no enveloping-algebra structure is
//! touched. Whether two radical root spaces bracket nontrivially is read off
//! from whether their sum is a root.

use crate::chars::{decompose_character, weyl_dim, DecompositionTable};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::root_data::{RootSystem, SimpleType, Weight};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RadicalType {
    Abelian,
    Heisenberg,
    Other,
}

impl RadicalType {
    pub fn as_str(self) -> &'static str {
        match self {
            RadicalType::Abelian => "Abelian",
            RadicalType::Heisenberg => "Heisenberg",
            RadicalType::Other => "Other",
        }
    }
}

/// Decomposition of the radical as a module over the semisimple part of the
/// Levi subalgebra.
#[derive(Clone, Debug)]
pub struct LeviDecomposition {
    /// `None` when delta is empty (the semisimple part is trivial and every
    /// root space is a one-dimensional module)
    pub levi_system: Option<Arc<RootSystem>>,
    /// map from retained global nodes (sorted) to nodes of `levi_system`
    pub node_map: Vec<(usize, usize)>,
    pub modules: DecompositionTable,
}

#[derive(Clone, Debug)]
pub struct ParabolicData {
    pub root_system: Arc<RootSystem>,
    /// 0-based retained nodes, sorted
    pub delta: Vec<usize>,
    pub radical_roots: Vec<Vec<i64>>,
    pub radical_type: RadicalType,
    pub levi: LeviDecomposition,
}

fn normalize_delta(rs: &RootSystem, delta: &[usize]) -> Result<Vec<usize>> {
    let mut d: Vec<usize> = delta.to_vec();
    d.sort_unstable();
    d.dedup();
    for &i in &d {
        if i >= rs.rank() {
            return Err(Error::BadNode { node: i + 1, rank: rs.rank() });
        }
    }
    Ok(d)
}

/// Positive roots outside the integer span of the retained nodes.
pub fn radical_roots(rs: &RootSystem, delta: &[usize]) -> Result<Vec<Vec<i64>>> {
    let delta = normalize_delta(rs, delta)?;
    let inside: BTreeSet<usize> = delta.iter().copied().collect();
    Ok(rs
        .positive_roots()
        .iter()
        .filter(|r| r.iter().enumerate().any(|(j, &c)| c != 0 && !inside.contains(&j)))
        .cloned()
        .collect())
}

/// Abelian: no two radical roots sum to a root. Heisenberg: exactly one
/// radical root is a sum of two radical roots. Anything else: Other.
pub fn radical_type(rs: &RootSystem, delta: &[usize]) -> Result<RadicalType> {
    let delta = normalize_delta(rs, delta)?;
    if delta.len() == rs.rank() {
        return Err(Error::Internal(
            "radical type needs a proper parabolic (delta must omit a node)".into(),
        ));
    }
    let rad = radical_roots(rs, &delta)?;
    let rad_set: BTreeSet<&Vec<i64>> = rad.iter().collect();
    let mut derived: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (i, a) in rad.iter().enumerate() {
        for b in rad.iter().skip(i + 1) {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if rs.root_index(&sum).is_some() {
                debug_assert!(rad_set.contains(&sum), "radical roots are an ideal");
                derived.insert(sum);
            }
        }
    }
    Ok(match derived.len() {
        0 => RadicalType::Abelian,
        1 => RadicalType::Heisenberg,
        _ => RadicalType::Other,
    })
}

/// Connected components of the sub-diagram on `delta`.
fn components(rs: &RootSystem, delta: &[usize]) -> Vec<Vec<usize>> {
    let cartan = rs.cartan_matrix();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in delta {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut work = vec![start];
        while let Some(u) = work.pop() {
            for &v in delta {
                if !seen.contains(&v) && cartan[u][v] != 0 {
                    seen.insert(v);
                    comp.push(v);
                    work.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Match a connected Cartan sub-block against the standard types; returns the
/// identified type and the map component-node -> standard node.
fn classify_component(rs: &RootSystem, comp: &[usize]) -> (SimpleType, usize, Vec<usize>) {
    let k = comp.len();
    let cartan = rs.cartan_matrix();
    let candidates: Vec<SimpleType> = match k {
        1 => vec![SimpleType::A],
        2 => vec![SimpleType::A, SimpleType::B, SimpleType::C, SimpleType::G],
        4 => vec![SimpleType::A, SimpleType::B, SimpleType::C, SimpleType::D, SimpleType::F],
        6..=8 => vec![SimpleType::A, SimpleType::B, SimpleType::C, SimpleType::D, SimpleType::E],
        _ => vec![SimpleType::A, SimpleType::B, SimpleType::C, SimpleType::D],
    };
    for t in candidates {
        let std = match RootSystem::build(&[(t, k)]) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let std_cartan = std.cartan_matrix();
        // backtracking search for a Cartan-matrix isomorphism
        let mut assign: Vec<Option<usize>> = vec![None; k];
        let mut used = vec![false; k];
        fn rec(
            pos: usize,
            k: usize,
            comp: &[usize],
            cartan: &[Vec<i64>],
            std_cartan: &[Vec<i64>],
            assign: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
        ) -> bool {
            if pos == k {
                return true;
            }
            for target in 0..k {
                if used[target] {
                    continue;
                }
                let ok = (0..pos).all(|prev| {
                    let p = assign[prev].unwrap();
                    cartan[comp[pos]][comp[prev]] == std_cartan[target][p]
                        && cartan[comp[prev]][comp[pos]] == std_cartan[p][target]
                });
                if ok {
                    assign[pos] = Some(target);
                    used[target] = true;
                    if rec(pos + 1, k, comp, cartan, std_cartan, assign, used) {
                        return true;
                    }
                    assign[pos] = None;
                    used[target] = false;
                }
            }
            false
        }
        let cartan_rows: Vec<Vec<i64>> = cartan.clone();
        let std_rows: Vec<Vec<i64>> = std_cartan.clone();
        if rec(0, k, comp, &cartan_rows, &std_rows, &mut assign, &mut used) {
            return (t, k, assign.into_iter().map(|a| a.unwrap()).collect());
        }
    }
    unreachable!("every connected Dynkin sub-diagram has a type")
}

/// Decompose the radical into irreducibles over the semisimple part of the
/// Levi; cross-checked internally by exact character subtraction.
pub fn levi_module_decomposition(rs: &RootSystem, delta: &[usize]) -> Result<LeviDecomposition> {
    let delta = normalize_delta(rs, delta)?;
    let rad = radical_roots(rs, &delta)?;
    if delta.is_empty() {
        return Ok(LeviDecomposition {
            levi_system: None,
            node_map: Vec::new(),
            modules: DecompositionTable::default(),
        });
    }
    let comps = components(rs, &delta);
    let mut factors: Vec<(SimpleType, usize)> = Vec::new();
    // node_map: global node -> levi node index
    let mut node_map: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0;
    for comp in &comps {
        let (t, k, assign) = classify_component(rs, comp);
        factors.push((t, k));
        for (ci, &global) in comp.iter().enumerate() {
            node_map.push((global, offset + assign[ci]));
        }
        offset += k;
    }
    let levi = Arc::new(RootSystem::build(&factors)?);

    // restricted weight of each radical root space over the levi
    let mut chi: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
    for gamma in &rad {
        let mut coeffs = vec![0i64; levi.rank()];
        for &(global, local) in &node_map {
            let pairing: i64 =
                (0..rs.rank()).map(|k| gamma[k] * rs.cartan_matrix()[k][global]).sum();
            coeffs[local] = pairing;
        }
        let coords = levi.weight_to_coords(&Weight(coeffs));
        *chi.entry(coords).or_insert(0) += 1;
    }
    let modules = decompose_character(&levi, chi);
    let total: u64 = modules.entries.iter().map(|(w, &m)| m * weyl_dim(&levi, w)).sum();
    if total as usize != rad.len() {
        return Err(Error::Internal(
            "levi decomposition does not account for every radical root".into(),
        ));
    }
    node_map.sort_unstable();
    Ok(LeviDecomposition { levi_system: Some(levi), node_map, modules })
}

pub fn parabolic_data(rs: &Arc<RootSystem>, delta: &[usize]) -> Result<ParabolicData> {
    let delta = normalize_delta(rs, delta)?;
    let radical = radical_roots(rs, &delta)?;
    let rtype = if delta.len() == rs.rank() {
        RadicalType::Abelian // empty radical
    } else {
        radical_type(rs, &delta)?
    };
    let levi = levi_module_decomposition(rs, &delta)?;
    Ok(ParabolicData {
        root_system: rs.clone(),
        delta,
        radical_roots: radical,
        radical_type: rtype,
        levi,
    })
}

impl ParabolicData {
    /// Lookup of the radical against the named families of quantized
    /// coordinate rings (single omitted node over a simple system).
    pub fn identified_quantized_ring(&self) -> Option<String> {
        let rs = &self.root_system;
        if !rs.is_simple() {
            return None;
        }
        let (t, n) = rs.factors()[0];
        let omitted: Vec<usize> =
            (0..rs.rank()).filter(|i| !self.delta.contains(i)).collect();
        if omitted.len() != 1 {
            return None;
        }
        let i = omitted[0] + 1; // 1-based node
        match (t, i) {
            (SimpleType::A, i) => {
                Some(format!("quantum {}x{} matrices", i, n + 1 - i))
            }
            (SimpleType::B, 1) => Some(format!("quantum Euclidean space O_q^{}", 2 * n - 1)),
            (SimpleType::D, 1) => Some(format!("quantum Euclidean space O_q^{}", 2 * n - 2)),
            (SimpleType::C, i) if i == n => Some("quantum symmetric matrices".into()),
            (SimpleType::D, i) if i == n || i == n - 1 => {
                Some("quantum antisymmetric matrices".into())
            }
            (SimpleType::E, i) if n == 6 && (i == 1 || i == 6) => {
                Some("E6-type quantum algebra (unnamed)".into())
            }
            (SimpleType::E, 7) if n == 7 => Some("E7-type quantum algebra (unnamed)".into()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rs = &self.root_system;
        let levi_system = self
            .levi
            .levi_system
            .as_ref()
            .map(|l| l.system_string())
            .unwrap_or_else(|| "trivial".into());
        let mut modules: Vec<serde_json::Value> = Vec::new();
        if let Some(levi) = &self.levi.levi_system {
            let mut rows: Vec<(String, u64, u64)> = self
                .levi
                .modules
                .entries
                .iter()
                .map(|(w, &m)| (levi.weight_string(w), m, weyl_dim(levi, w)))
                .collect();
            rows.sort();
            for (w, m, d) in rows {
                modules.push(json!({"weight": w, "multiplicity": m, "dim": d}));
            }
        }
        json!({
            "system": rs.system_string(),
            "delta": self.delta.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "dim": self.radical_roots.len(),
            "type": self.radical_type.as_str(),
            "levi_system": levi_system,
            "levi_modules": modules,
            "identified_quantized_ring": self.identified_quantized_ring(),
            "schubert_orientation": "w_inverse",
        })
    }
}

/// Ordered positive roots induced by a reduced word for the longest element
/// extending `word`, flagged by whether the exponent is forced to zero (the
/// unflagged prefix is the cell's root set).
pub fn schubert_cell_root_set(
    rs: &RootSystem,
    word: &[usize],
) -> Result<Vec<(Vec<i64>, bool)>> {
    let w = rs.is_reduced(word).map_err(Error::NotReduced)?;
    // extend to the longest element: while some simple root stays positive,
    // append its reflection
    let mut full = word.to_vec();
    let mut u = w.clone();
    loop {
        let mut found = None;
        for i in 0..rs.rank() {
            let mut e = vec![0i64; rs.rank()];
            e[i] = 1;
            let img = u.apply_int(&e);
            if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) {
                found = Some(i);
                break;
            }
        }
        match found {
            None => break,
            Some(i) => {
                u = u.mul(&rs.simple_reflection(i));
                full.push(i);
            }
        }
    }
    if full.len() != rs.num_positive_roots() {
        return Err(Error::Internal("extension did not reach the longest element".into()));
    }
    // induced ordering: beta_j = s_{i_1} ... s_{i_{j-1}} (alpha_{i_j})
    let mut out = Vec::with_capacity(full.len());
    let mut prefix = crate::root_data::WeylElem::identity(rs.rank());
    for (j, &i) in full.iter().enumerate() {
        let mut e = vec![0i64; rs.rank()];
        e[i] = 1;
        let beta = prefix.apply_int(&e);
        debug_assert!(rs.root_index(&beta).is_some(), "induced vectors are positive roots");
        out.push((beta, j >= word.len()));
        prefix = prefix.mul(&rs.simple_reflection(i));
    }
    Ok(out)
}
