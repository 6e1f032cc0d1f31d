use proptest::prelude::*;

use num_complex::Complex64;
use qdyn::cartan::{AlgebraId, Q, Weight, build_root_system, pairing};
use qdyn::dynamical::{DynParam, TruncationPolicy, Twist, convergence_margin};
use qdyn::linalg::{graded_kron, identity, max_abs, rel_residual};
use qdyn::repspace::{Representation, osp12_rep, spin_rep_sl2, tensor_rep, vector_rep_sln};
use qdyn::rmat::{RData, q_exp, rhat, rhat_inverse};

fn algebra() -> impl Strategy<Value = AlgebraId> {
    prop::sample::select(AlgebraId::ALL.to_vec())
}

fn weight(rank: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec((-6i64..=6, 1i64..=3), rank)
        .prop_map(|c| Weight(c.into_iter().map(|(n, d)| Q::new(n, d)).collect()))
}

fn rep_by_index(i: usize, q: f64) -> Representation {
    match i {
        0 => spin_rep_sl2(0.5, q).unwrap(),
        1 => spin_rep_sl2(1.0, q).unwrap(),
        2 => spin_rep_sl2(1.5, q).unwrap(),
        3 => vector_rep_sln(3, q).unwrap(),
        _ => osp12_rep(q),
    }
}

/// A same-algebra pair of shipped modules.
fn pair_strategy() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![(0usize..3, 0usize..3), Just((3, 3)), Just((4, 4))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        (id, a, b, c, k) in algebra().prop_flat_map(|id| {
            let r = id.rank();
            (Just(id), weight(r), weight(r), weight(r), (-4i64..=4))
        })
    ) {
        let rs = build_root_system(id);
        let p = |x: &Weight, y: &Weight| pairing(x, y, &rs).unwrap();
        prop_assert_eq!(p(&a, &b), p(&b, &a));
        prop_assert_eq!(p(&(&a + &b), &c), p(&a, &c) + p(&b, &c));
        let kq = Q::from_integer(k);
        prop_assert_eq!(p(&a.scale(kq), &c), kq * p(&a, &c));
    }

    #[test]
    fn q_exp_inverse_law((i, j) in pair_strategy(), q in 0.2f64..0.9, s in -2.0f64..2.0) {
        let (r1, r2) = (rep_by_index(i, q), rep_by_index(j, q));
        let deg = if r1.rs.algebra == AlgebraId::Osp12 { 1 } else { 0 };
        let z = graded_kron(&r1.e[0], &r2.f[0], deg, &r1.parities) * Complex64::new(s, 0.0);
        let base = if deg == 1 { -q } else { q * q };
        let a = q_exp(&z, base).unwrap();
        let b = q_exp(&(-&z), 1.0 / base).unwrap();
        prop_assert!(max_abs(&(a * b - identity(z.nrows()))) < 1e-10);
    }

    #[test]
    fn rhat_inverse_is_an_inverse((i, j) in pair_strategy(), q in 0.2f64..0.9) {
        let (r1, r2) = (rep_by_index(i, q), rep_by_index(j, q));
        let d = RData::for_rep(&r1, 0).unwrap();
        let prod = rhat(&r1, &r2, &d).unwrap() * rhat_inverse(&r1, &r2, &d).unwrap();
        prop_assert!(max_abs(&(prod - identity(r1.dim() * r2.dim()))) < 1e-10);
    }

    #[test]
    fn tensor_product_is_associative(i in 0usize..3, j in 0usize..3, k in 0usize..3, q in 0.2f64..0.9) {
        let (a, b, c) = (rep_by_index(i, q), rep_by_index(j, q), rep_by_index(k, q));
        let left = tensor_rep(&tensor_rep(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_rep(&a, &tensor_rep(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&left.weights, &right.weights);
        prop_assert_eq!(&left.parities, &right.parities);
        for g in 0..left.rs.rank {
            prop_assert!(rel_residual(&left.e[g], &right.e[g]) < 1e-13);
            prop_assert!(rel_residual(&left.f[g], &right.f[g]) < 1e-13);
        }
    }

    #[test]
    fn osp_tensor_product_is_associative(q in 0.2f64..0.9) {
        let o = osp12_rep(q);
        let left = tensor_rep(&tensor_rep(&o, &o).unwrap(), &o).unwrap();
        let right = tensor_rep(&o, &tensor_rep(&o, &o).unwrap()).unwrap();
        prop_assert_eq!(&left.parities, &right.parities);
        prop_assert!(rel_residual(&left.e[0], &right.e[0]) < 1e-13);
        prop_assert!(rel_residual(&left.f[0], &right.f[0]) < 1e-13);
    }

    /// F has weight zero and unit diagonal, and is strictly upper in the slot-1 weight.
    #[test]
    fn twist_is_weight_zero_with_unit_diagonal(
        (i, j) in pair_strategy(),
        q in 0.25f64..0.85,
        m in 6.0f64..14.0,
    ) {
        let (r1, r2) = (rep_by_index(i, q), rep_by_index(j, q));
        let mu = DynParam::uniform(r1.rs.rank, m, q);
        prop_assume!(convergence_margin(&r2, &mu).positive);
        let d = RData::for_rep(&r1, 0).unwrap();
        let f = Twist::new(&r1, &r2, &d).unwrap().product(&mu, &TruncationPolicy::default()).unwrap().matrix;
        let n2 = r2.dim();
        let total = |x: usize| &r1.weights[x / n2] + &r2.weights[x % n2];
        for a in 0..f.nrows() {
            prop_assert!((f[(a, a)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for b in 0..f.ncols() {
                if f[(a, b)].norm() > 1e-14 {
                    prop_assert_eq!(total(a), total(b));
                    if a != b {
                        prop_assert!((&r1.weights[a / n2] - &r1.weights[b / n2]).in_positive_cone());
                    }
                }
            }
        }
    }
}
