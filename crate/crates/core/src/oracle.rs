//! Slow reference computations used to cross-check the main pipeline.
//!
//! Nothing here shares code with the coboundary implementation: brackets are
//! computed on explicit polynomials, and the coboundary of a cochain is obtained
//! by evaluating it on tuples of basis polynomials.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::coboundary::d_generator;
use crate::complex::{act, monomial_basis, CochainVector, DualGenerator, Sl2, WedgeMonomial};
use crate::exactlin::{kernel_basis, matmul, rank, Rational, SparseMatrix};
use crate::partitions::enumerate_types;

/// Polynomial in `x, y` as a map `(i, j) ↦ coefficient of x^i y^j`.
pub type Poly = BTreeMap<(u32, u32), Rational>;

fn factorial(n: u32) -> Rational {
    (2..=n as i64).fold(Rational::one(), |acc, k| acc * Rational::from(k))
}

/// `x^a y^{A−a} / (a! (A−a)!)`, the element dual to `z̄_a^A`.
pub fn basis_polynomial(g: DualGenerator) -> Poly {
    let (a, big_a) = (g.r(), g.big_r());
    let c = (factorial(a) * factorial(big_a - a)).recip();
    BTreeMap::from([((a, big_a - a), c)])
}

fn derivative(p: &Poly, in_x: bool) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), c) in p {
        let (e, key) = if in_x {
            (i, (i.wrapping_sub(1), j))
        } else {
            (j, (i, j.wrapping_sub(1)))
        };
        if e > 0 {
            *out.entry(key).or_insert_with(Rational::zero) += c * &Rational::from(e as i64);
        }
    }
    out
}

fn multiply(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), a) in p {
        for (&(k, l), b) in q {
            *out.entry((i + k, j + l)).or_insert_with(Rational::zero) += a * b;
        }
    }
    out
}

/// Poisson bracket `{f, g} = f_x g_y − f_y g_x`.
pub fn poisson_bracket(f: &Poly, g: &Poly) -> Poly {
    let mut out = multiply(&derivative(f, true), &derivative(g, false));
    for (k, c) in multiply(&derivative(f, false), &derivative(g, true)) {
        *out.entry(k).or_insert_with(Rational::zero) -= &c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `⟨z̄_r^R, p⟩`: the coefficient of `x^r y^{R−r}` times `r!(R−r)!`.
pub fn pair(g: DualGenerator, p: &Poly) -> Rational {
    let (r, big_r) = (g.r(), g.big_r());
    p.get(&(r, big_r - r))
        .map(|c| c * &(factorial(r) * factorial(big_r - r)))
        .unwrap_or_else(Rational::zero)
}

/// Expansion of a polynomial of one degree in the dual generators' partners.
fn expand(p: &Poly) -> Vec<(DualGenerator, Rational)> {
    p.iter()
        .map(|(&(i, j), _)| {
            let g = DualGenerator::new(i, i + j);
            (g, pair(g, p))
        })
        .collect()
}

/// All generators `z̄_r^R` with `3 ≤ R ≤ max_deg`.
fn generators(max_deg: u32) -> Vec<DualGenerator> {
    (3..=max_deg)
        .flat_map(|big_r| (0..=big_r).map(move |r| DualGenerator::new(r, big_r)))
        .collect()
}

/// Checks `⟨d z̄, f∧g⟩ = −⟨z̄, {f, g}⟩` for every generator with `R ≤ max_deg` and
/// every pair of basis polynomials of degree at least 3. Returns the first
/// disagreement.
pub fn check_poisson_pairing(max_deg: u32) -> Result<(), String> {
    for z in generators(max_deg) {
        let dz = d_generator(z);
        let mut seen = 0;
        let gens = generators(z.big_r());
        for (i, &g1) in gens.iter().enumerate() {
            for &g2 in &gens[i + 1..] {
                if g1.weight() + g2.weight() != z.weight() {
                    continue;
                }
                let bracket = poisson_bracket(&basis_polynomial(g1), &basis_polynomial(g2));
                let expected = -pair(z, &bracket);
                let (_, m) = WedgeMonomial::canonicalize(&[g1, g2]).expect("distinct");
                let got = dz.get(&m);
                if got != expected {
                    return Err(format!("d{z} at {m}: {got} vs bracket pairing {expected}"));
                }
                if !got.is_zero() {
                    seen += 1;
                }
            }
        }
        if seen != dz.len() {
            return Err(format!("d{z} has terms outside the bracket pairing"));
        }
    }
    Ok(())
}

/// Every canonical monomial of degree `m` and weight `w`, all H-weights.
pub fn full_monomials(m: u32, w: u32) -> Vec<WedgeMonomial> {
    let mut out: Vec<WedgeMonomial> = enumerate_types(m, w, true)
        .iter()
        .flat_map(|t| monomial_basis(t, None))
        .collect();
    out.sort();
    out
}

fn index(monomials: &[WedgeMonomial]) -> FxHashMap<WedgeMonomial, usize> {
    monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

/// Matrix of `d` on the full monomial spaces, obtained by evaluation:
/// `(dσ)(f₁, …, f_{m+1}) = Σ_{i<j} (−1)^{i+j} σ({f_i, f_j}, f₁, …, f̂_i, …, f̂_j, …)`.
pub fn full_differential(m: u32, w: u32) -> SparseMatrix {
    let cols = full_monomials(m, w);
    let rows = full_monomials(m + 1, w);
    let col_index = index(&cols);
    let mut triplets = Vec::new();
    for (ri, target) in rows.iter().enumerate() {
        let f = target.factors();
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 }; // 1-based (i+1)+(j+1)
                let bracket = poisson_bracket(&basis_polynomial(f[i]), &basis_polynomial(f[j]));
                let rest: Vec<DualGenerator> = f
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, g)| *g)
                    .collect();
                for (h, c) in expand(&bracket) {
                    let mut args = vec![h];
                    args.extend_from_slice(&rest);
                    if let Some((s, mono)) = WedgeMonomial::canonicalize(&args) {
                        if let Some(&ci) = col_index.get(&mono) {
                            triplets.push((ri, ci, c.clone() * Rational::from((sign * s) as i64)));
                        }
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(rows.len(), cols.len(), triplets).expect("in range")
}

/// Invariant subspace of the full degree-`m` space, found by solving all three
/// conditions `H σ = X σ = Y σ = 0` at once. Columns of the result span it.
pub fn full_invariants(m: u32, w: u32) -> SparseMatrix {
    let monomials = full_monomials(m, w);
    let idx = index(&monomials);
    let n = monomials.len();
    let mut triplets = Vec::new();
    for (block, xi) in [Sl2::H, Sl2::X, Sl2::Y].into_iter().enumerate() {
        for (c, mono) in monomials.iter().enumerate() {
            let image = act(xi, &CochainVector::from_monomial(mono.clone()));
            for (t, x) in image.terms() {
                triplets.push((block * n + idx[t], c, x.clone()));
            }
        }
    }
    let conditions = SparseMatrix::from_triplets(3 * n, n, triplets).expect("in range");
    let kernel = kernel_basis(&conditions);
    SparseMatrix::from_columns(n, &kernel).expect("matching dimension")
}

/// Ranks of `d` restricted to invariants, degree by degree (entry `m-1` is
/// the rank leaving degree `m`), together with the invariant dimensions and a
/// flag telling whether `d∘d` vanished on the full spaces.
pub struct BruteForce {
    pub dims: Vec<u64>,
    pub ranks: Vec<u64>,
    pub square_zero: bool,
}

pub fn brute_force(w: u32, top: u32) -> BruteForce {
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    let mut square_zero = true;
    let mut previous: Option<SparseMatrix> = None;
    for m in 1..=top {
        let inv = full_invariants(m, w);
        dims.push(inv.n_cols() as u64);
        let d = full_differential(m, w);
        if let Some(p) = &previous {
            square_zero &= matmul(&d, p).expect("shapes").is_zero();
        }
        let restricted = matmul(&d, &inv).expect("shapes");
        ranks.push(rank(&restricted) as u64);
        previous = Some(d);
    }
    BruteForce {
        dims,
        ranks,
        square_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_quadratics() {
        // {x²/2, y²/2} = xy
        let f = basis_polynomial(DualGenerator::new(2, 2));
        let g = basis_polynomial(DualGenerator::new(0, 2));
        let b = poisson_bracket(&f, &g);
        assert_eq!(b, BTreeMap::from([((1, 1), Rational::one())]));
    }

    #[test]
    fn pairing_matches_generators() {
        assert!(check_poisson_pairing(8).is_ok());
    }

    #[test]
    fn full_complex_weight_two() {
        let bf = brute_force(2, 2);
        assert_eq!(bf.dims, vec![0, 1]);
        assert_eq!(bf.ranks, vec![0, 0]);
        assert!(bf.square_zero);
    }
}
