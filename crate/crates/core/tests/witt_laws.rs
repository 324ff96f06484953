use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wittlab_core::exactring::{make_ring, AnyRing, Ring, RingDescriptor};
use wittlab_core::wittcore::{Witt, WittVector};

fn rings() -> Vec<(u64, AnyRing)> {
    vec![
        (3, make_ring(&RingDescriptor::Modular { n: 9 }).unwrap()),
        (2, make_ring(&RingDescriptor::CyclotomicQuotient { p: 2, l: 2 }).unwrap()),
        (2, make_ring(&RingDescriptor::Modular { n: 8 }).unwrap()),
    ]
}

fn triple(w: &Witt<AnyRing>, n: usize, seed: u64) -> [WittVector<<AnyRing as Ring>::Elem>; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [w.sample(n, &mut rng), w.sample(n, &mut rng), w.sample(n, &mut rng)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), which in 0usize..3) {
        let (p, ring) = rings().swap_remove(which);
        let w = Witt::new(ring, p);
        let [x, y, z] = triple(&w, 3, seed);
        prop_assert_eq!(w.add(&x, &y).unwrap(), w.add(&y, &x).unwrap());
        prop_assert_eq!(w.mul(&x, &y).unwrap(), w.mul(&y, &x).unwrap());
        prop_assert_eq!(
            w.add(&w.add(&x, &y).unwrap(), &z).unwrap(),
            w.add(&x, &w.add(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            w.mul(&w.mul(&x, &y).unwrap(), &z).unwrap(),
            w.mul(&x, &w.mul(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            w.mul(&x, &w.add(&y, &z).unwrap()).unwrap(),
            w.add(&w.mul(&x, &y).unwrap(), &w.mul(&x, &z).unwrap()).unwrap()
        );
        prop_assert!(w.is_zero(&w.add(&x, &w.neg(&x).unwrap()).unwrap()));
    }

    #[test]
    fn ghost_map_is_a_ring_homomorphism(seed in any::<u64>(), which in 0usize..3) {
        let (p, ring) = rings().swap_remove(which);
        let w = Witt::new(ring.clone(), p);
        let [x, y, _] = triple(&w, 3, seed);
        let (gx, gy) = (w.ghost(&x), w.ghost(&y));
        let sum: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| ring.add(a, b)).collect();
        let prod: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| ring.mul(a, b)).collect();
        prop_assert_eq!(w.ghost(&w.add(&x, &y).unwrap()), sum);
        prop_assert_eq!(w.ghost(&w.mul(&x, &y).unwrap()), prod);
    }

    #[test]
    fn frobenius_after_verschiebung_is_multiplication_by_p(seed in any::<u64>(), which in 0usize..3) {
        let (p, ring) = rings().swap_remove(which);
        let w = Witt::new(ring, p);
        let [x, _, _] = triple(&w, 4, seed);
        let fv = w.frobenius(&w.verschiebung(&x)).unwrap();
        prop_assert_eq!(fv.clone(), w.scalar_mul(p, &x.truncate(fv.len())).unwrap());
    }

    #[test]
    fn twisted_operators_are_additive(seed in any::<u64>(), which in 0usize..3) {
        let (p, ring) = rings().swap_remove(which);
        let w = Witt::new(ring.clone(), p);
        let [a, x, y] = triple(&w, 3, seed);
        let lam = a.coords[0].clone();
        let xy = w.add(&x, &y).unwrap();
        prop_assert_eq!(
            w.t_a(&a, &xy).unwrap(),
            w.add(&w.t_a(&a, &x).unwrap(), &w.t_a(&a, &y).unwrap()).unwrap()
        );
        prop_assert_eq!(
            w.f_lambda(&xy, &lam).unwrap(),
            w.add(&w.f_lambda(&x, &lam).unwrap(), &w.f_lambda(&y, &lam).unwrap()).unwrap()
        );
    }

    #[test]
    fn teichmuller_vectors_act_by_scaling(seed in any::<u64>(), which in 0usize..3) {
        let (p, ring) = rings().swap_remove(which);
        let w = Witt::new(ring, p);
        let [a, x, _] = triple(&w, 3, seed);
        let t = w.teichmuller(&a.coords[0], 3);
        prop_assert_eq!(w.t_a(&t, &x).unwrap(), w.teich_scale(&a.coords[0], &x));
        prop_assert_eq!(w.mul(&t, &x).unwrap(), w.teich_scale(&a.coords[0], &x));
    }
}
