use gkf_core::coboundary::{d_cochain, invariant_bases, NoCheckpoint};
use gkf_core::complex::{act, invariant_basis_for_type, CochainVector, DualGenerator, Sl2};
use gkf_core::Rational;

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Converts coefficients written against the unnormalized dual basis
/// (dual to plain monomials `x^r y^{R−r}`) into the normalized one.
fn from_unnormalized(terms: &[(Rational, &[(u32, u32)])]) -> CochainVector {
    let degree = terms[0].1.len() as u32;
    let weight = terms[0].1.iter().map(|&(_, l)| l - 2).sum();
    CochainVector::from_terms(
        degree,
        weight,
        terms.iter().map(|(c, f)| {
            let scale: i64 = f
                .iter()
                .map(|&(r, l)| factorial(r) * factorial(l - r))
                .product();
            (
                c.clone() / Rational::from(scale),
                f.iter().map(|&(r, l)| DualGenerator::new(r, l)).collect(),
            )
        }),
    )
    .unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn sigma_unnormalized() -> CochainVector {
    from_unnormalized(&[
        (q(10, 1), &[(0, 5), (5, 5)]),
        (q(-2, 1), &[(1, 5), (4, 5)]),
        (q(1, 1), &[(2, 5), (3, 5)]),
    ])
}

fn tau_unnormalized() -> CochainVector {
    let t: &[(Rational, &[(u32, u32)])] = &[
        (q(1, 1), &[(2, 3), (3, 4), (1, 5)]),
        (q(8, 1), &[(1, 3), (4, 4), (1, 5)]),
        (q(-5, 2), &[(1, 3), (3, 4), (2, 5)]),
        (q(1, 1), &[(1, 3), (2, 4), (3, 5)]),
        (q(-6, 1), &[(0, 3), (2, 4), (4, 5)]),
        (q(15, 1), &[(0, 3), (1, 4), (5, 5)]),
        (q(1, 1), &[(1, 3), (1, 4), (4, 5)]),
        (q(-20, 1), &[(1, 3), (0, 4), (5, 5)]),
        (q(-6, 1), &[(0, 3), (4, 4), (2, 5)]),
        (q(9, 2), &[(0, 3), (3, 4), (3, 5)]),
        (q(8, 1), &[(2, 3), (0, 4), (4, 5)]),
        (q(-5, 2), &[(2, 3), (1, 4), (3, 5)]),
        (q(1, 1), &[(2, 3), (2, 4), (2, 5)]),
        (q(-20, 1), &[(2, 3), (4, 4), (0, 5)]),
        (q(-6, 1), &[(3, 3), (0, 4), (3, 5)]),
        (q(9, 2), &[(3, 3), (1, 4), (2, 5)]),
        (q(-6, 1), &[(3, 3), (2, 4), (1, 5)]),
        (q(15, 1), &[(3, 3), (3, 4), (0, 5)]),
    ];
    from_unnormalized(t).scale(&Rational::from(4))
}

#[test]
fn weight_six_two_cochain_matches_after_rescaling() {
    let basis = invariant_basis_for_type(&"5^2".parse().unwrap());
    assert_eq!(basis.len(), 1);
    let lambda = sigma_unnormalized()
        .ratio_to(&basis[0])
        .expect("proportional");
    assert!(!lambda.is_zero());
}

#[test]
fn weight_six_three_cochain_matches_after_rescaling() {
    let tau = tau_unnormalized();
    assert!(act(Sl2::X, &tau).is_zero());
    assert!(act(Sl2::Y, &tau).is_zero());
    let basis = invariant_basis_for_type(&"3 4 5".parse().unwrap());
    assert_eq!(basis.len(), 1);
    assert!(tau.ratio_to(&basis[0]).is_some());
}

#[test]
fn coboundary_of_sigma_is_a_multiple_of_tau() {
    let sigma = sigma_unnormalized();
    let tau = tau_unnormalized();
    let lambda = d_cochain(&sigma).ratio_to(&tau).expect("proportional");
    assert!(!lambda.is_zero());
    println!("d sigma_1 = {lambda} tau_1");
}

#[test]
fn weight_eight_type_table() {
    let table = |m| -> Vec<(String, usize)> {
        invariant_bases(8, m, &NoCheckpoint)
            .unwrap()
            .into_iter()
            .filter(|b| !b.vectors.is_empty())
            .map(|b| (b.signature.to_string(), b.vectors.len()))
            .collect()
    };
    let own = |v: &[(&str, usize)]| -> Vec<(String, usize)> {
        v.iter().map(|(s, n)| (s.to_string(), *n)).collect()
    };
    assert_eq!(
        table(3),
        own(&[("3 4 7", 1), ("3 5 6", 1), ("4^2 6", 1), ("4 5^2", 1)])
    );
    assert_eq!(
        table(4),
        own(&[("3^2 4 6", 1), ("3^2 5^2", 2), ("3 4^2 5", 2)])
    );
    assert_eq!(table(5), own(&[("3^3 4 5", 1)]));
}
