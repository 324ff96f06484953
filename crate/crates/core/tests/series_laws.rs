use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wittlab_core::ahseries::{ep_exponent, ep_product, group_law, substitute_one, SeriesRing};
use wittlab_core::exactring::{make_ring, Ring, RingDescriptor};
use wittlab_core::wittcore::Witt;

const ORDER: usize = 6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `v ↦ E_p(v, λ; X)` turns Witt addition into multiplication.
    #[test]
    fn exponential_is_additive_in_the_vector(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let ring = make_ring(&RingDescriptor::Modular { n: p * p }).unwrap();
        let w = Witt::new(ring.clone(), p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (w.sample(3, &mut rng), w.sample(3, &mut rng));
        let lam = ring.sample(&mut rng);
        let s = SeriesRing::new(ring.clone(), &["X"], ORDER);
        let lhs = ep_product(&s, p, &w.add(&x, &y).unwrap().coords, &lam).unwrap();
        let rhs = s.mul(
            &ep_product(&s, p, &x.coords, &lam).unwrap(),
            &ep_product(&s, p, &y.coords, &lam).unwrap(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    /// Product and exponent forms agree over the rationals.
    #[test]
    fn product_and_exponent_forms_agree(a in -5i64..6, b in -5i64..6, c in 1i64..5) {
        let ring = make_ring(&RingDescriptor::FractionField { base: Box::new(RingDescriptor::Integers) }).unwrap();
        let s = SeriesRing::new(ring.clone(), &["X"], ORDER);
        let v = [ring.from_i64(a), ring.from_i64(b), ring.from_i64(c)];
        let lam = ring.from_i64(c);
        prop_assert_eq!(
            ep_product(&s, 2, &v, &lam).unwrap(),
            ep_exponent(&s, 2, &v, &lam).unwrap()
        );
    }

    /// On `Ker F^{(λ)}` the exponential is a homomorphism from `X + Y + λXY` to `G_m`.
    #[test]
    fn kernel_vectors_give_group_homomorphisms(seed in any::<u64>()) {
        let ring = make_ring(&RingDescriptor::Modular { n: 4 }).unwrap();
        let w = Witt::new(ring.clone(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lam = ring.sample(&mut rng);
        let elems = ring.elements().unwrap();
        let kernel: Vec<_> = (0..elems.len().pow(4))
            .map(|i| w.vector((0..4).map(|k| elems[i / elems.len().pow(k) % elems.len()].clone()).collect()))
            .filter(|x| w.is_zero(&w.f_lambda(x, &lam).unwrap()))
            .collect();
        let x = &kernel[(rng.next_u32() as usize) % kernel.len()];
        let s1 = SeriesRing::new(ring.clone(), &["T"], ORDER);
        let s2 = SeriesRing::new(ring.clone(), &["X", "Y"], ORDER);
        let e = ep_product(&s1, 2, &x.coords, &lam).unwrap();
        let (a, b) = (s2.var(0), s2.var(1));
        let lhs = s2.mul(&substitute_one(&s2, &s1, &e, &a).unwrap(), &substitute_one(&s2, &s1, &e, &b).unwrap());
        let rhs = substitute_one(&s2, &s1, &e, &group_law(&s2, &lam, &a, &b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
