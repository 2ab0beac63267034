//! Property-based invariants over randomly generated inputs.

use kbredon::exactla::{
    cokernel, direct_sum, is_isomorphic, kernel_basis, smith_normal_form, AbHom, FgAbGroup,
    IntMatrix,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..=5, 0usize..=5).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(-30i64..=30, rows * cols).prop_map(move |entries| {
            IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]))
        })
    })
}

fn small_group() -> impl Strategy<Value = FgAbGroup> {
    (
        0usize..=3,
        proptest::collection::vec(
            prop_oneof![Just(2u64), Just(3), Just(4), Just(6), Just(12)],
            0..=2,
        ),
    )
        .prop_map(|(free, torsion)| FgAbGroup::from_parts(free, &torsion))
}

proptest! {
    #[test]
    fn snf_decomposition_is_valid(a in small_matrix()) {
        let dec = smith_normal_form(&a);
        prop_assert!(dec.u.is_unimodular());
        prop_assert!(dec.v.is_unimodular());
        let uav = dec.u.mul(&a).unwrap().mul(&dec.v).unwrap();
        prop_assert_eq!(&uav, &dec.s);
        let diag = dec.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn snf_invariant_under_transpose(a in small_matrix()) {
        let d1: Vec<BigInt> = smith_normal_form(&a).diagonal();
        let d2: Vec<BigInt> = smith_normal_form(&a.transpose()).diagonal();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn kernel_columns_annihilate(a in small_matrix()) {
        let k = kernel_basis(&a);
        if k.cols() > 0 {
            let prod = a.mul(&k).unwrap();
            prop_assert!(prod.is_zero());
        }
    }

    #[test]
    fn cokernel_of_identity_is_trivial(g in small_group()) {
        let id = AbHom::identity(&g);
        prop_assert!(cokernel(&id).unwrap().0.is_trivial());
    }

    #[test]
    fn direct_sum_is_commutative_up_to_iso(a in small_group(), b in small_group()) {
        let ab = direct_sum(&[a.clone(), b.clone()]).unwrap().group;
        let ba = direct_sum(&[b, a]).unwrap().group;
        prop_assert!(is_isomorphic(&ab, &ba));
    }

    #[test]
    fn presentation_invariant_under_unimodular_relabeling(a in small_matrix()) {
        // coker(A) and coker(U A V) agree for unimodular U, V coming from
        // the Smith decomposition of an unrelated matrix of matching shape
        let g = FgAbGroup::new(a.rows(), a.clone()).unwrap();
        let dec = smith_normal_form(&a);
        let shuffled = dec.u.mul(&a).unwrap().mul(&dec.v).unwrap();
        let h = FgAbGroup::new(a.rows(), shuffled).unwrap();
        prop_assert!(is_isomorphic(&g, &h));
    }
}
