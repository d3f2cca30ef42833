use nonlocal_core::linalg::*;
use num_bigint::BigInt;

fn m(data: &[&[i64]]) -> Vec<Vec<BigInt>> {
    data.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

#[test]
fn ranks() {
    assert_eq!(rank_fraction_free(m(&[&[1, 2], &[2, 4]])), 1);
    assert_eq!(rank_fraction_free(m(&[&[0, 1], &[1, 0]])), 2);
    assert_eq!(rank_fraction_free(m(&[&[2, 3, 5], &[4, 6, 10], &[1, 0, 7], &[3, 3, 12]])), 2);
    assert_eq!(rank_fraction_free(Vec::new()), 0);
    assert_eq!(rank_fraction_free(m(&[&[0, 0], &[0, 0]])), 0);
}
