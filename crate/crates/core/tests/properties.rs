use proptest::prelude::*;

use quantale_core::girard::check_quantale;
use quantale_core::io::{parse, StructureFile};
use quantale_core::residuation::{derive_residua, lukasiewicz_chain};
use quantale_core::search::lattices_of_size;
use quantale_core::subspace::trial_rng;
use quantale_core::{zoo, Context64, FiniteLattice, MulTable};

fn small_lattice() -> impl Strategy<Value = FiniteLattice> {
    (1usize..=6).prop_flat_map(|m| {
        let all = lattices_of_size(m);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #[test]
    fn derived_meet_and_join_obey_lattice_laws(l in small_lattice(), picks in prop::collection::vec(0usize..64, 3)) {
        let n = l.len();
        let (a, b, c) = (picks[0] % n, picks[1] % n, picks[2] % n);
        prop_assert_eq!(l.meet(a, b), l.meet(b, a));
        prop_assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
        prop_assert_eq!(l.meet(a, l.join(a, b)), a);
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
        prop_assert!(l.leq(l.meet(a, b), a) && l.leq(a, l.join(a, b)));
    }

    // On a finite lattice a table is residuated exactly when it is a
    // quantale multiplication.
    #[test]
    fn quantale_iff_residuated_on_random_tables(cells in prop::collection::vec(0usize..4, 16), boolean in any::<bool>()) {
        let l = if boolean { zoo::boolean(2) } else { zoo::chain(4) };
        let m = MulTable::new(4, cells).unwrap();
        prop_assert_eq!(check_quantale(&l, &m).passed(), derive_residua(l.poset(), &m).is_ok());
    }

    #[test]
    fn lukasiewicz_files_round_trip(m in 2usize..9) {
        let s = lukasiewicz_chain(m);
        let f = StructureFile::from_poset(s.poset()).with_mul(s.mul_table());
        let back = parse(&f.serialize()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.mul_table().unwrap(), s.mul_table().clone());
    }

    #[test]
    fn subspace_ortho_is_an_involution_and_join_is_an_upper_bound(n in 1usize..6, seed in any::<u64>()) {
        let ctx = Context64::new(n).unwrap();
        let mut rng = trial_rng(seed, 0);
        let s = ctx.random_subspace(&mut rng);
        let t = ctx.random_subspace(&mut rng);
        prop_assert!(ctx.equal(&ctx.ortho(&ctx.ortho(&s).unwrap()).unwrap(), &s).unwrap());
        let j = ctx.join(&s, &t).unwrap();
        prop_assert!(ctx.leq(&s, &j).unwrap() && ctx.leq(&t, &j).unwrap());
        let st = ctx.mul(&s, &t).unwrap();
        prop_assert!(ctx.equal(&st, &ctx.mul(&t, &s).unwrap()).unwrap());
    }
}
