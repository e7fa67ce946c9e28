use gkf_core::coboundary::betti_row;
use gkf_core::exactlin::{rank, rank_dense_oracle, SparseMatrix};
use gkf_core::oracle::{brute_force, check_poisson_pairing, full_invariants};
use gkf_core::sl2rep::{cochain_dimension, max_degree};

#[test]
fn bracket_pairing_up_to_degree_eight() {
    check_poisson_pairing(8).unwrap();
}

#[test]
fn brute_force_full_complex_agrees_up_to_weight_six() {
    for w in [2, 4, 6] {
        let top = max_degree(w);
        let bf = brute_force(w, top);
        let report = betti_row(w).unwrap();
        assert!(bf.square_zero, "w={w}");
        assert_eq!(bf.dims, report.dims, "w={w}");
        assert_eq!(bf.ranks, report.ranks, "w={w}");
    }
}

#[test]
fn three_condition_invariants_match_characters() {
    for w in [2, 4, 6, 8] {
        for m in 1..=max_degree(w) {
            assert_eq!(
                full_invariants(m, w).n_cols() as u64,
                cochain_dimension(m, w),
                "m={m} w={w}"
            );
        }
    }
}

#[test]
fn weight_eight_ranks() {
    let report = betti_row(8).unwrap();
    assert_eq!(report.ranks, vec![0, 0, 4, 1, 0, 0]);
    let b = SparseMatrix::from_i64_rows(5, &[&[-4, -3, -3, -9, 6]]);
    assert_eq!(rank(&b), rank_dense_oracle(&b));
}
