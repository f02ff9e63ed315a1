use std::collections::HashSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use oddbal_core::enumerator::{count_rank_table, enumerate_sequences};
use oddbal_core::gf::{
    evaluate_v, expand_overpartition, expand_partition, expand_v_at_root, expand_v_rank,
    expand_v_scalar, residue_twist, residue_twist_orthogonal, substitute_root,
};
use proptest::prelude::*;

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn enumeration_matches_generating_function() {
    assert_eq!(count_rank_table(12), expand_v_rank(12));
}

#[test]
fn enumerated_sequences_are_valid_and_distinct() {
    for n in 0..=8 {
        let seqs = enumerate_sequences(n);
        let distinct: HashSet<Vec<u64>> = seqs.iter().map(|s| s.flatten()).collect();
        assert_eq!(distinct.len(), seqs.len(), "n = {n}");
        assert!(seqs
            .iter()
            .all(|s| s.is_valid() && s.n() == n && s.size() == 2 * n + 2));
    }
}

#[test]
fn scalar_expansion_matches_table_totals() {
    let table = expand_v_rank(80);
    assert_eq!(expand_v_scalar(80), table.totals());
    assert_eq!(expand_v_scalar(5), ints(&[1, 2, 5, 9, 16, 29]));
}

#[test]
fn companion_sequences() {
    assert_eq!(
        expand_overpartition(10),
        ints(&[1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232])
    );
    assert_eq!(
        expand_partition(10),
        ints(&[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42])
    );
}

#[test]
fn rank_symmetry_and_class_sums() {
    let table = expand_v_rank(60);
    for (n, m, count) in table.entries() {
        assert_eq!(&table.count(-m, n), count);
    }
    for c in [1, 2, 3, 5, 7, 8] {
        for n in 0..=60 {
            let sum: BigInt = (0..c).map(|a| table.residue_count(a, c, n).unwrap()).sum();
            assert_eq!(Some(sum), table.total(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residue_paths_agree(c in 2i64..=11, a_raw in 0i64..11) {
        let a = a_raw % c;
        let table = expand_v_rank(40);
        let bucketed = table.residue_sequence(a, c);
        prop_assert_eq!(residue_twist(a, c, &table).unwrap(), bucketed.clone());
        prop_assert_eq!(residue_twist_orthogonal(a, c, &table).unwrap(), bucketed);
    }

    #[test]
    fn root_substitution_matches_direct_expansion(c in 2i64..=9, j_raw in 1i64..9) {
        let j = 1 + (j_raw - 1) % (c - 1);
        let order = 30;
        let table = expand_v_rank(order);
        let direct = expand_v_at_root(j, c, order + 1).unwrap();
        let substituted = substitute_root(&table, j, c).unwrap();
        for n in 0..=order {
            prop_assert!(direct.coeff(n).unwrap().equivalent(substituted.coeff(n).unwrap()));
        }
    }

    #[test]
    fn evaluation_matches_table(theta in 0.0f64..std::f64::consts::TAU, r in 0.05f64..0.3, phi in 0.0f64..std::f64::consts::TAU) {
        let w = Complex64::from_polar(1.0, theta);
        let q = Complex64::from_polar(r, phi);
        let table = expand_v_rank(60);
        let mut expected = Complex64::new(0.0, 0.0);
        for (n, m, count) in table.entries() {
            let count: f64 = count.to_string().parse().unwrap();
            expected += w.powi(m as i32) * q.powi(n as i32) * count;
        }
        let got = evaluate_v(w, q, 60).unwrap().value;
        prop_assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1.0));
    }
}
