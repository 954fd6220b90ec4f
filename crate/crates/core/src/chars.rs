//! Character-level computations: weight multiplicities by the Freudenthal
//! recursion, the Weyl dimension formula, tensor decomposition by the
//! Brauer-Klimyk shifted-reflection rule, symmetric/exterior square and cube
//! plethysm via Adams operations, and the rigidity test built on the
//! d coefficient.

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::root_data::{RootSystem, Weight};
use num::{One, Signed, Zero};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_DIM_CEILING: u64 = 5000;

/// Weight multiset of a module, full Weyl orbits included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub weights: BTreeMap<Vec<Q>, i64>,
}

impl Character {
    pub fn dim(&self) -> i64 {
        self.weights.values().sum()
    }

    pub fn mult(&self, v: &[Q]) -> i64 {
        self.weights.get(v).copied().unwrap_or(0)
    }
}

/// Multiplicities of irreducibles, keyed by dominant highest weight.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DecompositionTable {
    pub entries: BTreeMap<Weight, u64>,
}

impl DecompositionTable {
    pub fn mult(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn total_dim(&self, rs: &RootSystem) -> u64 {
        self.entries.iter().map(|(w, &m)| m * weyl_dim(rs, w)).sum()
    }

    /// JSON list of `{weight, multiplicity}`, sorted by canonical weight string.
    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let mut rows: Vec<(String, u64)> =
            self.entries.iter().map(|(w, &m)| (rs.weight_string(w), m)).collect();
        rows.sort();
        json!(rows
            .into_iter()
            .map(|(w, m)| json!({"weight": w, "multiplicity": m}))
            .collect::<Vec<_>>())
    }
}

/// Dimension of the irreducible module by the Weyl formula.
pub fn weyl_dim(rs: &RootSystem, lambda: &Weight) -> u64 {
    let lam = rs.weight_to_coords(lambda);
    let rho = rs.rho();
    let mut num = Q::one();
    let mut den = Q::one();
    let lam_rho: Vec<Q> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    for alpha in rs.positive_roots() {
        let aq = RootSystem::root_to_q(alpha);
        num *= rs.inner(&lam_rho, &aq);
        den *= rs.inner(&rho, &aq);
    }
    let d = num / den;
    assert!(d.is_integer() && d.is_positive(), "Weyl dimension must be a positive integer");
    u64::try_from(d.to_integer()).expect("dimension fits u64")
}

fn check_dominant(rs: &RootSystem, lambda: &Weight) -> Result<()> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(rs.weight_string(lambda)));
    }
    Ok(())
}

fn check_ceiling(rs: &RootSystem, lambda: &Weight, ceiling: u64) -> Result<u64> {
    check_dominant(rs, lambda)?;
    let dim = weyl_dim(rs, lambda);
    if dim > ceiling {
        return Err(Error::DimensionCeiling { dim, ceiling });
    }
    Ok(dim)
}

struct CharData {
    /// multiplicities at dominant weights
    dominant: BTreeMap<Vec<Q>, i64>,
    /// full orbit-expanded character
    full: BTreeMap<Vec<Q>, i64>,
}

fn char_cache() -> &'static Mutex<HashMap<(String, String), Arc<CharData>>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, String), Arc<CharData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `lambda - mu` as nonnegative integer simple-root coordinates, when it is one.
fn depth_vector(lam: &[Q], mu: &[Q]) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(lam.len());
    for (a, b) in lam.iter().zip(mu) {
        let d = a - b;
        if !d.is_integer() || d.is_negative() {
            return None;
        }
        out.push(i64::try_from(d.to_integer()).ok()?);
    }
    Some(out)
}

/// A vector is a weight of `V_lambda` iff its dominant representative mu
/// satisfies `lambda - mu` in the nonnegative integer root lattice.
fn in_weight_diagram(rs: &RootSystem, lam: &[Q], v: &[Q]) -> bool {
    let (dom, _) = rs.dominant_representative(v);
    depth_vector(lam, &dom).is_some()
}

fn freudenthal(rs: &RootSystem, lambda: &Weight) -> Arc<CharData> {
    let key = (rs.system_string(), rs.weight_string(lambda));
    if let Some(hit) = char_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }

    let lam = rs.weight_to_coords(lambda);
    let rho = rs.rho();

    // enumerate the full weight diagram
    let mut diagram: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut work = vec![lam.clone()];
    diagram.insert(lam.clone());
    while let Some(v) = work.pop() {
        for i in 0..rs.rank() {
            let mut child = v.clone();
            child[i] -= Q::one();
            if !diagram.contains(&child) && in_weight_diagram(rs, &lam, &child) {
                diagram.insert(child.clone());
                work.push(child);
            }
        }
    }

    let mut dominants: Vec<Vec<Q>> = diagram
        .iter()
        .filter(|v| (0..rs.rank()).all(|i| !rs.coroot_pairing(v, i).is_negative()))
        .cloned()
        .collect();
    dominants.sort_by_key(|v| {
        let depth: Q = lam.iter().zip(v.iter()).map(|(a, b)| a - b).sum();
        (depth.to_integer(), v.clone())
    });

    let lam_rho: Vec<Q> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let norm_lam_rho = rs.inner(&lam_rho, &lam_rho);

    let mut mult: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
    for mu in &dominants {
        if mu == &lam {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mut acc = Q::zero();
        for alpha in rs.positive_roots() {
            let aq = RootSystem::root_to_q(alpha);
            let mut k = 1i64;
            loop {
                let shifted: Vec<Q> = mu
                    .iter()
                    .zip(&aq)
                    .map(|(m, a)| m + a * Q::from_integer(k.into()))
                    .collect();
                if !in_weight_diagram(rs, &lam, &shifted) {
                    break;
                }
                let (dom, _) = rs.dominant_representative(&shifted);
                let m = mult.get(&dom).copied().unwrap_or(0);
                if m != 0 {
                    acc += rs.inner(&shifted, &aq) * Q::from_integer(m.into());
                }
                k += 1;
            }
        }
        let mu_rho: Vec<Q> = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let den = &norm_lam_rho - rs.inner(&mu_rho, &mu_rho);
        let m = acc * Q::from_integer(2.into()) / den;
        assert!(m.is_integer() && m.is_positive(), "Freudenthal multiplicity");
        mult.insert(mu.clone(), i64::try_from(m.to_integer()).expect("multiplicity fits"));
    }

    let mut full: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
    for (mu, &m) in &mult {
        for w in rs.weyl_orbit(mu) {
            full.insert(w, m);
        }
    }

    let data = Arc::new(CharData { dominant: mult, full });
    char_cache().lock().unwrap().insert(key, data.clone());
    data
}

pub fn character(rs: &RootSystem, lambda: &Weight, ceiling: u64) -> Result<Character> {
    check_ceiling(rs, lambda, ceiling)?;
    let data = freudenthal(rs, lambda);
    Ok(Character { weights: data.full.clone() })
}

/// Weight multiplicity of `v` in the irreducible with highest weight `lambda`.
pub fn weight_multiplicity(rs: &RootSystem, lambda: &Weight, v: &[Q]) -> Result<i64> {
    check_dominant(rs, lambda)?;
    let data = freudenthal(rs, lambda);
    let (dom, _) = rs.dominant_representative(v);
    Ok(data.dominant.get(&dom).copied().unwrap_or(0))
}

/// Decompose a virtual character (given as a full weight multiset) into
/// irreducibles by repeatedly stripping a maximal weight.
pub fn decompose_character(rs: &RootSystem, mut chi: BTreeMap<Vec<Q>, i64>) -> DecompositionTable {
    chi.retain(|_, m| *m != 0);
    let mut table = DecompositionTable::default();
    while let Some(top) = chi
        .keys()
        .max_by_key(|v| {
            let h: Q = v.iter().sum();
            (h, (*v).clone())
        })
        .cloned()
    {
        let m = chi[&top];
        assert!(m > 0, "character decomposition hit a negative leading term");
        let w = rs
            .coords_to_weight(&top)
            .expect("maximal weight of a true character is integral");
        assert!(w.is_dominant(), "maximal weight must be dominant");
        let data = freudenthal(rs, &w);
        for (v, &k) in &data.full {
            let entry = chi.entry(v.clone()).or_insert(0);
            *entry -= m * k;
            if *entry == 0 {
                chi.remove(v);
            }
        }
        *table.entries.entry(w).or_insert(0) += u64::try_from(m).unwrap();
    }
    table
}

/// Tensor product decomposition by the shifted-dominance rule: run over the
/// character of one factor, reflect `lambda + rho + nu`, drop wall terms and
/// accumulate signs.
pub fn tensor_decompose(
    rs: &RootSystem,
    lambda: &Weight,
    mu: &Weight,
    ceiling: u64,
) -> Result<DecompositionTable> {
    check_ceiling(rs, lambda, ceiling)?;
    check_ceiling(rs, mu, ceiling)?;
    // loop over the smaller character
    let (big, small) =
        if weyl_dim(rs, lambda) >= weyl_dim(rs, mu) { (lambda, mu) } else { (mu, lambda) };
    let chi = freudenthal(rs, small);
    let big_coords = rs.weight_to_coords(big);
    let rho = rs.rho();

    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (nu, &m) in &chi.full {
        let x: Vec<Q> = big_coords
            .iter()
            .zip(&rho)
            .zip(nu)
            .map(|((a, b), c)| a + b + c)
            .collect();
        let (dom, count) = rs.dominant_representative(&x);
        if (0..rs.rank()).any(|i| rs.coroot_pairing(&dom, i).is_zero()) {
            continue; // stabilized by a wall reflection
        }
        let target: Vec<Q> = dom.iter().zip(&rho).map(|(a, b)| a - b).collect();
        let w = rs.coords_to_weight(&target).expect("integral");
        debug_assert!(w.is_dominant());
        let sign = if count % 2 == 0 { 1 } else { -1 };
        *acc.entry(w).or_insert(0) += sign * m;
    }
    let mut table = DecompositionTable::default();
    for (w, m) in acc {
        if m != 0 {
            assert!(m > 0, "tensor multiplicity must be nonnegative");
            table.entries.insert(w, u64::try_from(m).unwrap());
        }
    }
    Ok(table)
}

fn char_product(a: &BTreeMap<Vec<Q>, i64>, b: &BTreeMap<Vec<Q>, i64>) -> BTreeMap<Vec<Q>, i64> {
    let mut out: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
    for (va, ma) in a {
        for (vb, mb) in b {
            let key: Vec<Q> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
            *out.entry(key).or_insert(0) += ma * mb;
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

/// Adams operation: scale every weight by `k`.
fn adams(chi: &BTreeMap<Vec<Q>, i64>, k: i64) -> BTreeMap<Vec<Q>, i64> {
    chi.iter()
        .map(|(v, &m)| (v.iter().map(|c| c * Q::from_integer(k.into())).collect::<Vec<Q>>(), m))
        .collect()
}

fn char_linear(parts: Vec<(i64, BTreeMap<Vec<Q>, i64>)>, divisor: i64) -> BTreeMap<Vec<Q>, i64> {
    let mut out: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
    for (c, chi) in parts {
        for (v, m) in chi {
            *out.entry(v).or_insert(0) += c * m;
        }
    }
    out.retain(|_, m| *m != 0);
    for m in out.values_mut() {
        assert_eq!(*m % divisor, 0, "plethysm coefficients must divide evenly");
        *m /= divisor;
    }
    out
}

/// Characters of the symmetric and exterior squares.
pub fn sym_ext_square_chars(
    rs: &RootSystem,
    lambda: &Weight,
    ceiling: u64,
) -> Result<(BTreeMap<Vec<Q>, i64>, BTreeMap<Vec<Q>, i64>)> {
    check_ceiling(rs, lambda, ceiling)?;
    let chi = freudenthal(rs, lambda).full.clone();
    let chi2 = char_product(&chi, &chi);
    let psi2 = adams(&chi, 2);
    let sym = char_linear(vec![(1, chi2.clone()), (1, psi2.clone())], 2);
    let ext = char_linear(vec![(1, chi2), (-1, psi2)], 2);
    Ok((sym, ext))
}

pub fn sym_ext_square(
    rs: &RootSystem,
    lambda: &Weight,
    ceiling: u64,
) -> Result<(DecompositionTable, DecompositionTable)> {
    let (s, e) = sym_ext_square_chars(rs, lambda, ceiling)?;
    Ok((decompose_character(rs, s), decompose_character(rs, e)))
}

/// Characters of the symmetric and exterior cubes:
/// `S^3 = (x^3 + 3 x psi2(x) + 2 psi3(x))/6`, `L^3` with the middle sign flipped.
pub fn sym_ext_cube_chars(
    rs: &RootSystem,
    lambda: &Weight,
    ceiling: u64,
) -> Result<(BTreeMap<Vec<Q>, i64>, BTreeMap<Vec<Q>, i64>)> {
    check_ceiling(rs, lambda, ceiling)?;
    let chi = freudenthal(rs, lambda).full.clone();
    let chi2 = char_product(&chi, &chi);
    let chi3 = char_product(&chi2, &chi);
    let psi2 = adams(&chi, 2);
    let psi3 = adams(&chi, 3);
    let mixed = char_product(&chi, &psi2);
    let sym = char_linear(vec![(1, chi3.clone()), (3, mixed.clone()), (2, psi3.clone())], 6);
    let ext = char_linear(vec![(1, chi3), (-3, mixed), (2, psi3)], 6);
    Ok((sym, ext))
}

pub fn sym_ext_cube(
    rs: &RootSystem,
    lambda: &Weight,
    ceiling: u64,
) -> Result<(DecompositionTable, DecompositionTable)> {
    let (s, e) = sym_ext_cube_chars(rs, lambda, ceiling)?;
    Ok((decompose_character(rs, s), decompose_character(rs, e)))
}

/// Signed table `mu -> d_lambda^mu = sum_nu (c+_nu - c-_nu) c_{nu,lambda}^mu`.
pub fn d_table(rs: &RootSystem, lambda: &Weight, ceiling: u64) -> Result<BTreeMap<Weight, i64>> {
    let (s2, l2) = sym_ext_square(rs, lambda, ceiling)?;
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    {
        let mut absorb = |table: &DecompositionTable, sign: i64| -> Result<()> {
            for (nu, &c) in &table.entries {
                let t = tensor_decompose(rs, nu, lambda, u64::MAX)?;
                for (mu, &m) in &t.entries {
                    *out.entry(mu.clone()).or_insert(0) += sign * (c as i64) * (m as i64);
                }
            }
            Ok(())
        };
        absorb(&s2, 1)?;
        absorb(&l2, -1)?;
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

pub fn d_coefficient(rs: &RootSystem, lambda: &Weight, mu: &Weight, ceiling: u64) -> Result<i64> {
    check_dominant(rs, mu)?;
    Ok(d_table(rs, lambda, ceiling)?.get(mu).copied().unwrap_or(0))
}

/// A module is rigid when its symmetric and exterior cubes are exactly the
/// lower bounds carried by the d coefficient: `mult_{S^3}(mu) = max(d, 0)`
/// and `mult_{L^3}(mu) = max(-d, 0)` for every dominant `mu`.
pub fn rigidity_check(rs: &RootSystem, lambda: &Weight, ceiling: u64) -> Result<bool> {
    let (s3, l3) = sym_ext_cube(rs, lambda, ceiling)?;
    let d = d_table(rs, lambda, ceiling)?;
    let mut keys: BTreeSet<Weight> = BTreeSet::new();
    keys.extend(s3.entries.keys().cloned());
    keys.extend(l3.entries.keys().cloned());
    keys.extend(d.keys().cloned());
    for mu in keys {
        let dv = d.get(&mu).copied().unwrap_or(0);
        if s3.mult(&mu) as i64 != dv.max(0) || l3.mult(&mu) as i64 != (-dv).max(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Lambda^2 V_lambda` is a single irreducible.
pub fn lambda2_simple(rs: &RootSystem, lambda: &Weight, ceiling: u64) -> Result<bool> {
    let (_, l2) = sym_ext_square(rs, lambda, ceiling)?;
    Ok(l2.entries.len() == 1 && l2.entries.values().all(|&m| m == 1))
}
