use gkf_core::coboundary::d_cochain;
use gkf_core::complex::{
    act, invariant_basis, monomial_basis, CochainVector, DualGenerator, Sl2, WedgeMonomial,
};
use gkf_core::exactlin::{
    kernel_basis, kernel_basis_exact, rank, rank_dense_oracle, rank_mod_p, rref_rows,
    solve_in_span, Rational, SparseMatrix, SparseVector, PRIMES,
};
use gkf_core::partitions::{count_partitions, enumerate_types, TypeSignature};
use gkf_core::sl2rep::{
    cochain_dimension, decompose, exterior_power_character, sym_character, tensor,
    trivial_multiplicity, type_character, Decomposition,
};
use proptest::prelude::*;

/// Sparse matrices with small rational entries; about a third of the entries
/// are nonzero, and some rows repeat to force rank deficiency.
fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        let entry = prop_oneof![
            2 => Just((0i64, 1i64)),
            1 => (-9i64..=9, 1i64..=4),
        ];
        (
            prop::collection::vec(prop::collection::vec(entry, c), r),
            prop::collection::vec(any::<bool>(), r),
        )
            .prop_map(move |(rows, dup)| {
                let mut dense: Vec<Vec<Rational>> = rows
                    .into_iter()
                    .map(|row| row.into_iter().map(|(n, d)| Rational::new(n, d)).collect())
                    .collect();
                for i in 1..dense.len() {
                    if dup[i] {
                        let prev = dense[i - 1].clone();
                        dense[i] = prev.iter().zip(&dense[i]).map(|(a, b)| a + b).collect();
                        dense[i - 1] = prev;
                    }
                }
                SparseMatrix::from_dense(c, &dense).unwrap()
            })
    })
}

fn is_null(m: &SparseMatrix, v: &SparseVector) -> bool {
    m.mul_vec(v).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_equals_rank_of_transpose(m in matrix(30, 30)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_agrees_with_dense_elimination(m in matrix(50, 50)) {
        prop_assert_eq!(rank(&m), rank_dense_oracle(&m));
    }

    #[test]
    fn modular_rank_never_exceeds_rank(m in matrix(30, 30)) {
        let r = rank(&m);
        for &p in PRIMES.iter().take(3) {
            if let Some(rp) = rank_mod_p(&m, p) {
                prop_assert!(rp <= r);
            }
        }
        // a tiny prime can drop the rank but never raise it
        if let Some(rp) = rank_mod_p(&m, 5) {
            prop_assert!(rp <= r);
        }
    }

    #[test]
    fn kernel_vectors_are_null_and_complete(m in matrix(30, 30)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len(), m.n_cols() - rank(&m));
        for v in &k {
            prop_assert!(is_null(&m, v));
        }
        prop_assert_eq!(&k, &kernel_basis_exact(&m));
        prop_assert_eq!(rref_rows(k.clone()), k);
    }

    #[test]
    fn solve_then_recombine(m in matrix(12, 20), coeffs in prop::collection::vec(-5i64..=5, 12)) {
        let basis = rref_rows((0..m.n_rows()).map(|r| SparseVector::from_entries(
            m.n_cols(), m.row(r).iter().cloned()).unwrap()).collect());
        let mut target = SparseVector::zero(m.n_cols());
        for (b, &c) in basis.iter().zip(&coeffs) {
            target.add_scaled(&Rational::from(c), b);
        }
        let got = solve_in_span(&basis, &target).unwrap();
        let mut back = SparseVector::zero(m.n_cols());
        for (b, c) in basis.iter().zip(&got) {
            back.add_scaled(c, b);
        }
        prop_assert_eq!(back, target);
    }

    #[test]
    fn matrix_text_round_trip(m in matrix(10, 10)) {
        prop_assert_eq!(SparseMatrix::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn decomposition_round_trip(pairs in prop::collection::vec((0u32..12, 0u64..4), 0..6)) {
        let d = Decomposition::from_multiplicities(pairs);
        let c = d.recombine();
        prop_assert!(c.is_symmetric());
        prop_assert_eq!(decompose(&c).unwrap(), d.clone());
        prop_assert_eq!(trivial_multiplicity(&c), d.multiplicity(0));
        prop_assert_eq!(c.dim(), d.dim());
    }

    #[test]
    fn tensor_is_symmetric_and_commutative(a in 0u32..10, b in 0u32..10, l in 3u32..8, k in 0u32..5) {
        let x = tensor(&sym_character(a), &exterior_power_character(l, k));
        let y = tensor(&exterior_power_character(l, k), &sym_character(a));
        prop_assert!(x.is_symmetric());
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(tensor(&sym_character(a), &sym_character(b)).dim(), ((a + 1) * (b + 1)) as u64);
    }

    #[test]
    fn partition_bijection(parts in prop::collection::vec(1u32..12, 1..10)) {
        let t = TypeSignature::from_partition(&parts);
        let mut sorted = parts.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(t.to_partition(), sorted);
        prop_assert_eq!(t.weight(), parts.iter().sum::<u32>());
        prop_assert_eq!(t.degree(), parts.len() as u32);
        prop_assert_eq!(t.to_string().parse::<TypeSignature>().unwrap(), t);
    }

    #[test]
    fn canonical_sign_is_permutation_parity(
        picks in prop::collection::btree_set((3u32..8, 0u32..8), 1..7),
        seed in any::<u64>(),
    ) {
        let sorted: Vec<DualGenerator> = picks
            .into_iter()
            .filter(|&(l, r)| r <= l)
            .map(|(l, r)| DualGenerator::new(r, l))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        prop_assume!(!sorted.is_empty());
        // Fisher–Yates with a tiny LCG, tracking the parity of the swaps
        let mut perm = sorted.clone();
        let mut state = seed;
        let mut parity = 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            if i != j {
                perm.swap(i, j);
                parity = -parity;
            }
        }
        let (sign, m) = WedgeMonomial::canonicalize(&perm).unwrap();
        prop_assert_eq!(sign, parity);
        prop_assert_eq!(m.factors(), &sorted[..]);
        let (again, m2) = WedgeMonomial::canonicalize(m.factors()).unwrap();
        prop_assert_eq!(again, 1);
        prop_assert_eq!(m2, m);
    }

    #[test]
    fn sl2_relations_on_random_cochains(
        ty in prop::sample::select(vec!["3 4", "3^2 5", "4 5", "3 4 6", "5^2", "3^3 4", "4^2 6"]),
        coeffs in prop::collection::vec(-6i64..=6, 1..40),
    ) {
        let t: TypeSignature = ty.parse().unwrap();
        let monomials = monomial_basis(&t, None);
        let mut v = CochainVector::zero(t.degree(), t.weight());
        for (m, c) in monomials.iter().zip(coeffs.iter().cycle()) {
            v.try_add_term(m.clone(), &Rational::from(*c)).unwrap();
        }
        let bracket = |a: Sl2, b: Sl2| {
            let mut out = act(a, &act(b, &v));
            out.add_scaled(&Rational::from(-1), &act(b, &act(a, &v)));
            out
        };
        prop_assert_eq!(bracket(Sl2::H, Sl2::X), act(Sl2::X, &v).scale(&Rational::from(2)));
        prop_assert_eq!(bracket(Sl2::H, Sl2::Y), act(Sl2::Y, &v).scale(&Rational::from(-2)));
        prop_assert_eq!(bracket(Sl2::X, Sl2::Y), act(Sl2::H, &v));
    }
}

#[test]
fn partition_counts_match_enumeration() {
    for m in 1..=12 {
        for w in 0..=30 {
            let types = enumerate_types(m, w, false);
            assert_eq!(types.len() as u64, count_partitions(m, w), "m={m} w={w}");
            assert!(types.windows(2).all(|p| p[0] < p[1]));
            assert!(types.iter().all(|t| t.degree() == m && t.weight() == w));
        }
    }
}

#[test]
fn exterior_power_duality() {
    for l in 0..=9 {
        for k in 0..=l + 1 {
            assert_eq!(
                exterior_power_character(l, k),
                exterior_power_character(l, l + 1 - k),
                "l={l} k={k}"
            );
        }
    }
}

#[test]
fn weight_zero_monomials_match_character() {
    for w in [4, 6, 8, 10] {
        for m in 1..=6 {
            for t in enumerate_types(m, w, true) {
                let n0 = monomial_basis(&t, Some(0)).len() as u64;
                assert_eq!(n0, type_character(&t).multiplicity(0), "{t}");
            }
        }
    }
}

#[test]
fn invariant_bases_match_characters_and_are_closed() {
    for w in (2..=14).step_by(2) {
        for m in 1..=w {
            let bases = invariant_basis(m, w);
            let total: u64 = bases.iter().map(|b| b.vectors.len() as u64).sum();
            assert_eq!(total, cochain_dimension(m, w), "m={m} w={w}");
            for b in &bases {
                assert_eq!(
                    b.vectors.len() as u64,
                    trivial_multiplicity(&type_character(&b.signature)),
                    "{}",
                    b.signature
                );
                for v in &b.vectors {
                    assert!(act(Sl2::H, v).is_zero());
                    assert!(act(Sl2::X, v).is_zero());
                    assert!(act(Sl2::Y, v).is_zero(), "Y fails on ({})", b.signature);
                }
            }
        }
    }
}

#[test]
fn coboundary_squares_to_zero_on_invariants() {
    for w in (2..=10).step_by(2) {
        for m in 1..=w {
            for b in invariant_basis(m, w) {
                for v in &b.vectors {
                    assert!(
                        d_cochain(&d_cochain(v)).is_zero(),
                        "w={w} ({})",
                        b.signature
                    );
                }
            }
        }
    }
}
