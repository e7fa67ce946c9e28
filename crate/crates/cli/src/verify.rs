//! Verification suites behind `gkf verify`.

use std::time::Instant;

use clap::ValueEnum;
use gkf_core::coboundary::betti_row;
use gkf_core::complex::{act, invariant_basis, monomial_basis, CochainVector, Sl2};
use gkf_core::oracle::{brute_force, check_poisson_pairing};
use gkf_core::sl2rep::{
    exterior_power_character, max_degree, trivial_multiplicity, type_character,
};
use gkf_core::{cochain_dimension, count_partitions, enumerate_types, Rational};
use log::info;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::report::CheckOutcome;
use crate::workspace::WorkspaceManifest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn max_weight(self) -> u32 {
        match self {
            Level::Quick => 10,
            Level::Full => 14,
        }
    }
}

const SEED: u64 = 0x6b66_2024;

type Check = Result<String, String>;

fn run(name: &str, f: impl FnOnce() -> Check) -> CheckOutcome {
    let start = Instant::now();
    let r = f();
    let secs = start.elapsed().as_secs_f64();
    info!("{name}: {:.2}s", secs);
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn even_weights(lo: u32, hi: u32) -> impl Iterator<Item = u32> {
    (lo..=hi).filter(|w| w % 2 == 0)
}

pub fn partition_counts() -> Check {
    for m in 1..=12 {
        for w in 0..=30 {
            let n = enumerate_types(m, w, false).len() as u64;
            if n != count_partitions(m, w) {
                return Err(format!(
                    "m={m} w={w}: {n} types, {} partitions",
                    count_partitions(m, w)
                ));
            }
        }
    }
    Ok("m <= 12, w <= 30".into())
}

pub fn exterior_duality() -> Check {
    for l in 0..=9 {
        for k in 0..=l + 1 {
            if exterior_power_character(l, k) != exterior_power_character(l, l + 1 - k) {
                return Err(format!("l={l} k={k}"));
            }
        }
    }
    Ok("l <= 9".into())
}

/// Commutation relations on random cochains of random nonvanishing types.
pub fn sl2_relations(samples: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let types: Vec<_> = (1..=4)
        .flat_map(|m| even_weights(2, 10).flat_map(move |w| enumerate_types(m, w, true)))
        .collect();
    for _ in 0..samples {
        let t = types.choose(&mut rng).expect("types exist");
        let mut v = CochainVector::zero(t.degree(), t.weight());
        for mono in monomial_basis(t, None) {
            if rng.random_bool(0.5) {
                let c = Rational::from(rng.random_range(-9i64..=9));
                v.try_add_term(mono, &c).map_err(|e| e.to_string())?;
            }
        }
        let bracket = |a: Sl2, b: Sl2| {
            let mut out = act(a, &act(b, &v));
            out.add_scaled(&Rational::from(-1), &act(b, &act(a, &v)));
            out
        };
        if bracket(Sl2::H, Sl2::X) != act(Sl2::X, &v).scale(&Rational::from(2))
            || bracket(Sl2::H, Sl2::Y) != act(Sl2::Y, &v).scale(&Rational::from(-2))
            || bracket(Sl2::X, Sl2::Y) != act(Sl2::H, &v)
        {
            return Err(format!("relation fails on a cochain of type ({t})"));
        }
    }
    Ok(format!("{samples} random cochains, seed {seed:#x}"))
}

/// Every invariant basis vector is killed by H, X and Y, and the per-type and
/// total counts agree with the character computation.
pub fn invariants_at(w: u32) -> Check {
    let failures: Vec<String> = (1..=max_degree(w).max(1))
        .into_par_iter()
        .filter_map(|m| {
            let bases = invariant_basis(m, w);
            let total: u64 = bases.iter().map(|b| b.vectors.len() as u64).sum();
            if total != cochain_dimension(m, w) {
                return Some(format!(
                    "w={w} m={m}: {total} vectors, character gives {}",
                    cochain_dimension(m, w)
                ));
            }
            for b in &bases {
                if b.vectors.len() as u64 != trivial_multiplicity(&type_character(&b.signature)) {
                    return Some(format!(
                        "w={w} ({}): count disagrees with character",
                        b.signature
                    ));
                }
                for v in &b.vectors {
                    for g in [Sl2::H, Sl2::X, Sl2::Y] {
                        if !act(g, v).is_zero() {
                            return Some(format!("w={w} ({}): not {g:?}-invariant", b.signature));
                        }
                    }
                }
            }
            None
        })
        .collect();
    match failures.into_iter().min() {
        Some(f) => Err(f),
        None => Ok(format!("w={w}")),
    }
}

pub fn invariants(max_w: u32) -> Check {
    for w in even_weights(2, max_w) {
        invariants_at(w)?;
    }
    Ok(format!("w <= {max_w}"))
}

/// Full pipeline at weight `w`; the pipeline itself rejects d∘d ≠ 0 and
/// incomplete bases.
pub fn complex_at(w: u32) -> Check {
    let r = betti_row(w).map_err(|e| e.to_string())?;
    let betti: Vec<String> = r.betti.iter().map(ToString::to_string).collect();
    Ok(format!("w={w} betti [{}]", betti.join(" ")))
}

pub fn complexes(max_w: u32) -> Check {
    for w in even_weights(2, max_w) {
        complex_at(w)?;
    }
    Ok(format!("d^2 = 0 for w <= {max_w}"))
}

pub fn poisson_pairing() -> Check {
    check_poisson_pairing(8).map(|()| "R <= 8".into())
}

/// Relative complex computed by brute force on the full cochain spaces.
pub fn brute_force_agreement(max_w: u32) -> Check {
    for w in even_weights(2, max_w) {
        let top = max_degree(w);
        let bf = brute_force(w, top);
        if !bf.square_zero {
            return Err(format!("w={w}: d^2 != 0 on the full complex"));
        }
        let r = betti_row(w).map_err(|e| e.to_string())?;
        if bf.dims != r.dims || bf.ranks != r.ranks {
            return Err(format!(
                "w={w}: brute force dims {:?} ranks {:?}, pipeline dims {:?} ranks {:?}",
                bf.dims, bf.ranks, r.dims, r.ranks
            ));
        }
    }
    Ok(format!("w <= {max_w}"))
}

pub fn workspace_digests(ws: &WorkspaceManifest) -> Check {
    let results = ws.verify();
    let bad: Vec<String> = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().err().map(ToString::to_string))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} artifacts", results.len()))
    } else {
        Err(bad.join("; "))
    }
}

/// Runs the suites of `level`, plus the weight-specific checks at `weight`,
/// plus the cache digests when a workspace is open.
pub fn run_suites(
    level: Level,
    weight: Option<u32>,
    ws: Option<&WorkspaceManifest>,
) -> Vec<CheckOutcome> {
    let max_w = level.max_weight();
    let mut out = vec![
        run("partition-counts", partition_counts),
        run("exterior-duality", exterior_duality),
        run("sl2-relations", || sl2_relations(200, SEED)),
        run("invariants", || invariants(max_w)),
        run("d-squared", || complexes(max_w)),
        run("poisson-pairing", poisson_pairing),
    ];
    if level == Level::Full {
        out.push(run("brute-force", || brute_force_agreement(6)));
    }
    if let Some(w) = weight {
        out.push(run(&format!("invariants-w{w}"), || invariants_at(w)));
        out.push(run(&format!("d-squared-w{w}"), || complex_at(w)));
    }
    if let Some(ws) = ws {
        out.push(run("workspace-digests", || workspace_digests(ws)));
    }
    out
}
