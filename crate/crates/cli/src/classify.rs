//! Classification sweep: enumerate dominant weights up to a coefficient
//! bound, prune with the necessary-condition filters, run the exact
//! canonical-element kernel test on the survivors (and on an audit sample of
//! the pruned weights), and diff the resulting Poisson set against the known
//! classification table.

use crate::cache::{ModuleCache, VERSION};
use anyhow::{Context, Result};
use rpoisson_core::chars::{lambda2_simple, rigidity_check, weyl_dim};
use rpoisson_core::lie_algebra::ChevalleyAlgebra;
use rpoisson_core::poisson::{
    double_root_filter, poisson_module_witness_with, sl2_bound_filter,
};
use rpoisson_core::root_data::{RootSystem, SimpleType, Weight};
use serde_json::json;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub bound: i64,
    pub dim_ceiling: u64,
    pub audit_samples: usize,
    pub audit_dim_cap: u64,
    pub char_cap: u64,
    pub timing: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            bound: 3,
            dim_ceiling: 5000,
            audit_samples: 3,
            audit_dim_cap: 300,
            char_cap: 60,
            timing: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightRecord {
    pub weight: String,
    pub dim: u64,
    pub sl2_bound_ok: bool,
    pub double_root_ok: Option<bool>,
    pub poisson: Option<bool>,
    pub method: &'static str,
    pub rigid: Option<bool>,
    pub lambda2_simple: Option<bool>,
}

impl WeightRecord {
    /// A positive verdict must be consistent with every other signal.
    pub fn consistent(&self) -> bool {
        if self.poisson != Some(true) {
            return true;
        }
        self.sl2_bound_ok
            && self.double_root_ok != Some(false)
            && self.rigid != Some(false)
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "weight": self.weight,
            "dim": self.dim,
            "filter_verdicts": {
                "sl2_bound_ok": self.sl2_bound_ok,
                "double_root_ok": self.double_root_ok,
            },
            "poisson": self.poisson,
            "method": self.method,
            "rigid": self.rigid,
            "lambda2_simple": self.lambda2_simple,
            "consistent": self.consistent(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub system: String,
    pub records: Vec<WeightRecord>,
    pub poisson_set: Vec<String>,
    pub expected: Option<Vec<String>>,
    pub audit_sampled: Vec<String>,
    pub audit_violations: usize,
    pub elapsed_ms: Option<u64>,
    pub bound: i64,
    pub dim_ceiling: u64,
}

impl SweepReport {
    pub fn matches_expected(&self) -> Option<bool> {
        self.expected.as_ref().map(|e| {
            let mut e = e.clone();
            e.sort();
            e == self.poisson_set
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (missing, extra) = match &self.expected {
            None => (Vec::new(), Vec::new()),
            Some(e) => {
                let missing: Vec<String> =
                    e.iter().filter(|w| !self.poisson_set.contains(w)).cloned().collect();
                let extra: Vec<String> = self
                    .poisson_set
                    .iter()
                    .filter(|w| !e.contains(w))
                    .cloned()
                    .collect();
                (missing, extra)
            }
        };
        let mut v = json!({
            "system": self.system,
            "coefficient_bound": self.bound,
            "dim_ceiling": self.dim_ceiling,
            "records": self.records.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "poisson_set": self.poisson_set,
            "expected_poisson_set": self.expected,
            "matches_expected": self.matches_expected(),
            "missing": missing,
            "extra": extra,
            "audit": {
                "sampled": self.audit_sampled,
                "violations": self.audit_violations,
            },
            "version": VERSION,
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms);
        }
        v
    }
}

/// The known Poisson sets for one simple factor, as canonical weight strings.
pub fn expected_poisson_set(t: SimpleType, rank: usize) -> Option<Vec<String>> {
    let fundamental = |i: usize, c: i64| -> String {
        (0..rank)
            .map(|j| if j + 1 == i { c.to_string() } else { "0".into() })
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out: Vec<String> = Vec::new();
    match t {
        SimpleType::A => {
            // natural and dual-natural families plus their squares and the
            // second (co)fundamental ones
            out.push(fundamental(1, 1));
            out.push(fundamental(1, 2));
            out.push(fundamental(rank, 1));
            out.push(fundamental(rank, 2));
            if rank >= 2 {
                out.push(fundamental(2, 1));
                out.push(fundamental(rank - 1, 1));
            }
        }
        SimpleType::B => {
            out.push(fundamental(1, 1));
            if rank == 2 {
                out.push(fundamental(2, 1));
            }
        }
        SimpleType::C => {
            out.push(fundamental(1, 1));
            if rank == 2 {
                out.push(fundamental(2, 1));
            }
        }
        SimpleType::D => {
            out.push(fundamental(1, 1));
            if rank == 4 {
                out.push(fundamental(3, 1));
                out.push(fundamental(4, 1));
            }
            if rank == 5 {
                out.push(fundamental(4, 1));
                out.push(fundamental(5, 1));
            }
        }
        SimpleType::E => {
            if rank == 6 {
                out.push(fundamental(1, 1));
                out.push(fundamental(6, 1));
            } else {
                return Some(Vec::new());
            }
        }
        SimpleType::F | SimpleType::G => return Some(Vec::new()),
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn enumerate_weights(rank: usize, bound: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut current = vec![0i64; rank];
    fn rec(pos: usize, remaining: i64, current: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if pos == current.len() {
            if current.iter().any(|&c| c > 0) {
                out.push(Weight(current.clone()));
            }
            return;
        }
        for c in 0..=remaining {
            current[pos] = c;
            rec(pos + 1, remaining - c, current, out);
        }
        current[pos] = 0;
    }
    rec(0, bound, &mut current, &mut out);
    out
}

/// Small deterministic PRNG for the audit sample (split-mix).
struct AuditRng(u64);

impl AuditRng {
    fn new(seed: &str) -> Self {
        let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
        for b in seed.bytes() {
            h = h.wrapping_mul(0x100_0000_01b3).wrapping_add(b as u64);
        }
        AuditRng(h)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

pub fn classify_system(
    rs: &Arc<RootSystem>,
    opts: &ClassifyOptions,
    cache: &ModuleCache,
) -> Result<SweepReport> {
    let started = std::time::Instant::now();
    let g = Arc::new(ChevalleyAlgebra::build(rs.clone()));
    let c3 = g.canonical_element();
    let weights = enumerate_weights(rs.rank(), opts.bound);

    let evaluate = |lambda: &Weight| -> Result<WeightRecord> {
        let dim = weyl_dim(rs, lambda);
        let sl2_ok = sl2_bound_filter(rs, lambda);
        let dbl = double_root_filter(rs, lambda);
        let survives = sl2_ok && dbl != Some(false);
        let (poisson, method): (Option<bool>, &'static str) = if survives {
            if dim <= opts.dim_ceiling {
                let m = cache.module(&g, lambda, opts.dim_ceiling)?;
                (Some(poisson_module_witness_with(&c3, &m).is_none()), "exact")
            } else {
                (None, "skipped-ceiling")
            }
        } else {
            (Some(false), "filter")
        };
        let (rigid, l2simple) = if rs.is_simple() && dim <= opts.char_cap {
            (
                rigidity_check(rs, lambda, opts.dim_ceiling).ok(),
                lambda2_simple(rs, lambda, opts.dim_ceiling).ok(),
            )
        } else {
            (None, None)
        };
        Ok(WeightRecord {
            weight: rs.weight_string(lambda),
            dim,
            sl2_bound_ok: sl2_ok,
            double_root_ok: dbl,
            poisson,
            method,
            rigid,
            lambda2_simple: l2simple,
        })
    };

    use rayon::prelude::*;
    let mut records: Vec<WeightRecord> = weights
        .par_iter()
        .map(|w| evaluate(w))
        .collect::<Result<Vec<_>>>()
        .context("sweep evaluation")?;

    // audit: re-run the exact test on a deterministic sample of the weights
    // rejected by the filters; none may come back Poisson
    let mut audit_pool: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.method == "filter" && r.dim <= opts.audit_dim_cap)
        .map(|(i, _)| i)
        .collect();
    let mut rng = AuditRng::new(&format!("{}|audit|{}", rs.system_string(), opts.bound));
    let mut audit_sampled = Vec::new();
    let mut audit_violations = 0;
    for _ in 0..opts.audit_samples.min(audit_pool.len()) {
        let pick = (rng.next() % audit_pool.len() as u64) as usize;
        let idx = audit_pool.swap_remove(pick);
        let lambda = rs.parse_weight(&records[idx].weight)?;
        let m = cache.module(&g, &lambda, opts.dim_ceiling)?;
        let verdict = poisson_module_witness_with(&c3, &m).is_none();
        audit_sampled.push(records[idx].weight.clone());
        records[idx].method = "exact-audit";
        records[idx].poisson = Some(verdict);
        if verdict {
            audit_violations += 1;
        }
    }

    records.sort_by(|a, b| a.weight.cmp(&b.weight));
    let poisson_set: Vec<String> = records
        .iter()
        .filter(|r| r.poisson == Some(true))
        .map(|r| r.weight.clone())
        .collect();
    let expected = if rs.is_simple() {
        let (t, n) = rs.factors()[0];
        expected_poisson_set(t, n)
    } else {
        None
    };
    Ok(SweepReport {
        system: rs.system_string(),
        records,
        poisson_set,
        expected,
        audit_sampled,
        audit_violations,
        elapsed_ms: opts.timing.then(|| started.elapsed().as_millis() as u64),
        bound: opts.bound,
        dim_ceiling: opts.dim_ceiling,
    })
}

/// Parse a sweep specification such as `A2-5,B2-4,C2-4,D4-5,G2`, or bare
/// letters with a global maximum rank (`A,B` with `--max-rank 4`).
pub fn parse_type_spec(spec: &str, max_rank: Option<usize>) -> Result<Vec<(SimpleType, usize)>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let letter = part.chars().next().unwrap();
        let t = SimpleType::from_letter(letter)
            .ok_or_else(|| anyhow::anyhow!("unknown type letter {letter:?}"))?;
        let rest = &part[1..];
        let default_min = match t {
            SimpleType::A => 1,
            SimpleType::B | SimpleType::C => 2,
            SimpleType::D => 4,
            SimpleType::E => 6,
            SimpleType::F => 4,
            SimpleType::G => 2,
        };
        let (lo, hi) = if rest.is_empty() {
            let hi = max_rank
                .ok_or_else(|| anyhow::anyhow!("bare type {letter} needs --max-rank"))?;
            (default_min, hi)
        } else if let Some((a, b)) = rest.split_once('-') {
            (a.parse()?, b.parse()?)
        } else {
            let r: usize = rest.parse()?;
            (r, r)
        };
        for rank in lo..=hi {
            // skip ranks invalid for the type instead of failing the sweep
            if RootSystem::build(&[(t, rank)]).is_ok() {
                out.push((t, rank));
            }
        }
    }
    if out.is_empty() {
        anyhow::bail!("type specification {spec:?} selects no systems");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_spec_parsing() {
        let systems = parse_type_spec("A2-5,B2-4,C2-4,D4-5,G2", None).unwrap();
        assert_eq!(systems.len(), 4 + 3 + 3 + 2 + 1);
        let systems = parse_type_spec("A,B", Some(3)).unwrap();
        assert_eq!(
            systems,
            vec![
                (SimpleType::A, 1),
                (SimpleType::A, 2),
                (SimpleType::A, 3),
                (SimpleType::B, 2),
                (SimpleType::B, 3)
            ]
        );
        // D1-D3 are invalid ranks and are skipped silently
        let systems = parse_type_spec("D", Some(5)).unwrap();
        assert_eq!(systems, vec![(SimpleType::D, 4), (SimpleType::D, 5)]);
        assert!(parse_type_spec("X2", None).is_err());
    }

    #[test]
    fn weight_enumeration_counts() {
        // nonzero dominant weights with coefficient sum <= 3 in rank 2:
        // C(2+3,3) - 1 = 9
        assert_eq!(enumerate_weights(2, 3).len(), 9);
        assert_eq!(enumerate_weights(1, 6).len(), 6);
    }

    #[test]
    fn expected_sets_small_ranks() {
        let a1 = expected_poisson_set(SimpleType::A, 1).unwrap();
        assert_eq!(a1, vec!["1", "2"]);
        let a2 = expected_poisson_set(SimpleType::A, 2).unwrap();
        assert_eq!(a2, vec!["0,1", "0,2", "1,0", "2,0"]);
        let b2 = expected_poisson_set(SimpleType::B, 2).unwrap();
        assert_eq!(b2, vec!["0,1", "1,0"]);
        let g2 = expected_poisson_set(SimpleType::G, 2).unwrap();
        assert!(g2.is_empty());
        let d5 = expected_poisson_set(SimpleType::D, 5).unwrap();
        assert_eq!(d5, vec!["0,0,0,0,1", "0,0,0,1,0", "1,0,0,0,0"]);
    }

    #[test]
    fn sl2_sweep_end_to_end() {
        let rs = Arc::new(RootSystem::parse_system("A1").unwrap());
        let opts = ClassifyOptions { bound: 6, ..Default::default() };
        let report = classify_system(&rs, &opts, &ModuleCache::disabled()).unwrap();
        assert_eq!(report.poisson_set, vec!["1", "2"]);
        assert_eq!(report.matches_expected(), Some(true));
        assert_eq!(report.audit_violations, 0);
        assert!(report.records.iter().all(|r| r.consistent()));
    }
}
