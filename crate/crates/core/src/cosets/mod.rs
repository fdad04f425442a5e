//! Cosets of Γ₀(N) and Γ₁(N) in SL₂(ℤ), labelled by bottom rows mod N,
//! with generator action tables, ε-conjugation, cusps and Dirichlet characters.

mod character;
mod cusps;
mod mat2;
mod space;

pub use character::Character;
pub use cusps::{cusp_classes, CuspClass, CuspSet};
pub use mat2::Mat2;
pub use space::{ActionTables, CosetSpace, GroupKind, Signed};

/// Builds the coset space of `kind`(N) for weight k.
pub fn build_coset_space(kind: GroupKind, level: i64, weight: i64) -> crate::Result<CosetSpace> {
    CosetSpace::build(kind, level, weight)
}

/// Coset of (lift of `label`)·g with its sign.
pub fn act_coset(space: &CosetSpace, label: usize, g: &Mat2) -> crate::Result<Signed> {
    space.act(label, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word_strategy(max: usize) -> impl Strategy<Value = String> {
        proptest::collection::vec(prop_oneof![Just('S'), Just('T'), Just('t')], 0..=max)
            .prop_map(|v| v.into_iter().collect())
    }

    fn spaces() -> Vec<CosetSpace> {
        vec![
            CosetSpace::build(GroupKind::Gamma0, 5, 4).unwrap(),
            CosetSpace::build(GroupKind::Gamma0, 12, 2).unwrap(),
            CosetSpace::build(GroupKind::Gamma1, 7, 3).unwrap(),
            CosetSpace::build(GroupKind::Gamma1, 8, 4).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(g in word_strategy(8), h in word_strategy(8)) {
            let (g, h) = (Mat2::word(&g), Mat2::word(&h));
            for sp in spaces() {
                for l in 0..sp.index() {
                    let two_steps = sp.act_signed(sp.act(l, &g).unwrap(), &h).unwrap();
                    prop_assert_eq!(two_steps, sp.act(l, &g.mul(&h)).unwrap());
                }
            }
        }

        #[test]
        fn eps_conjugation_compatibility(g in word_strategy(8)) {
            let g = Mat2::word(&g);
            for sp in spaces() {
                for l in 0..sp.index() {
                    // ε(Ag)ε = (εAε)(εgε)
                    let lhs = sp.act(l, &g).unwrap();
                    let lhs = { let (e, s) = sp.eps_table()[lhs.0]; (e, s * lhs.1) };
                    let rhs = sp.act_signed(sp.eps_table()[l], &g.eps_conj()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn table_identities() {
        for sp in spaces() {
            let t = sp.tables();
            let compose = |a: &[Signed], b: &[Signed], l: usize| {
                let (x, s) = a[l];
                let (y, s2) = b[x];
                (y, s * s2)
            };
            for l in 0..sp.index() {
                assert_eq!(compose(&t.s, &t.s, l), t.j[l]);
                assert_eq!(compose(&t.t, &t.t_inv, l), (l, 1));
                assert_eq!(compose(&t.t, &t.s, l), t.u[l]);
                assert_eq!(compose(&t.u, &t.u2, l), t.j[l]);
                let e = sp.eps_table()[l];
                let ee = sp.eps_table()[e.0];
                assert_eq!((ee.0, ee.1 * e.1), (l, 1));
                let expect_j = if sp.contains_minus_one() { 1 } else { -1 };
                assert_eq!(t.j[l], (l, expect_j));
            }
        }
    }

    #[test]
    fn gamma0_2_generator_motion() {
        let sp = CosetSpace::build(GroupKind::Gamma0, 2, 8).unwrap();
        let i = sp.label_of(&Mat2::IDENTITY).unwrap().0;
        let u = sp.label_of(&Mat2::U).unwrap().0;
        assert_eq!(act_coset(&sp, i, &Mat2::S).unwrap().0, u);
        assert_eq!(act_coset(&sp, u, &Mat2::S).unwrap().0, i);
        assert_eq!(act_coset(&sp, u, &Mat2::IDENTITY).unwrap(), (u, 1));
    }
}
