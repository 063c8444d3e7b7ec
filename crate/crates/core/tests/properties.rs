mod common;

use proptest::prelude::*;

use hypersurf::fpmod::FPModule;
use hypersurf::groebner::Limits;
use hypersurf::hypersurface::{make_ring, Mode, RingContext};
use hypersurf::poly::Polynomial;
use hypersurf::Engine;

fn qc() -> RingContext {
    make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y - z*w").unwrap()
}

fn linear(r: &RingContext, c: [u32; 4]) -> Polynomial {
    let text = format!("{}*x + {}*y + {}*z + {}*w", c[0], c[1], c[2], c[3]);
    r.ring().parse(&text).unwrap()
}

fn form() -> impl Strategy<Value = [u32; 4]> {
    prop::array::uniform4(0u32..101).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn forms(n: usize) -> impl Strategy<Value = Vec<[u32; 4]>> {
    prop::collection::vec(form(), n)
}

/// The number of linearly independent forms, by the dense oracle.
fn independent(r: &RingContext, fs: &[Polynomial]) -> usize {
    4 - common::quotient_hilbert(r.ring(), fs, 1)[1]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn theta_is_symmetric_and_kills_free_modules(a in forms(2), b in forms(1)) {
        let r = qc();
        let e = Engine::default();
        let fa: Vec<_> = a.iter().map(|c| linear(&r, *c)).collect();
        let m = FPModule::cyclic(&r, &fa).unwrap();
        let n = FPModule::cyclic(&r, &[linear(&r, b[0])]).unwrap();
        let mn = e.theta(&m, &n).unwrap().theta;
        let nm = e.theta(&n, &m).unwrap().theta;
        prop_assert_eq!(mn, nm);
        let free = FPModule::free_rank(&r, 2);
        prop_assert_eq!(e.theta(&m, &free).unwrap().theta, 0);
        // R/(l) has a length-one resolution by a nonzerodivisor
        prop_assert_eq!(mn, 0);
    }

    #[test]
    fn theta_vanishes_in_small_total_dimension(a in forms(2), b in forms(2)) {
        // dim R/(l1, l2) + dim R/(l3, l4) = 1 + 1 < dim R
        let r = qc();
        let fa: Vec<_> = a.iter().map(|c| linear(&r, *c)).collect();
        let fb: Vec<_> = b.iter().map(|c| linear(&r, *c)).collect();
        prop_assume!(independent(&r, &fa) == 2 && independent(&r, &fb) == 2);
        let e = Engine::default();
        let m = FPModule::cyclic(&r, &fa).unwrap();
        let n = FPModule::cyclic(&r, &fb).unwrap();
        prop_assume!(e.krull_dim(&m).unwrap() == 1 && e.krull_dim(&n).unwrap() == 1);
        prop_assert_eq!(e.theta(&m, &n).unwrap().theta, 0);
    }

    #[test]
    fn tensor_length_matches_dense_count(a in forms(2), b in forms(2)) {
        let r = qc();
        let fa: Vec<_> = a.iter().map(|c| linear(&r, *c)).collect();
        let fb: Vec<_> = b.iter().map(|c| linear(&r, *c)).collect();
        let e = Engine::default();
        let t = FPModule::cyclic(&r, &fa).unwrap().tensor(&FPModule::cyclic(&r, &fb).unwrap()).unwrap();
        let mut all = fa.clone();
        all.extend(fb.iter().cloned());
        all.push(r.f().clone());
        let oracle = common::quotient_length(r.ring(), &all, 6);
        prop_assert_eq!(e.length(&t).unwrap().finite().map(|v| v as usize), oracle);
    }

    #[test]
    fn koszul_betti_over_s(k in 1usize..=4, cs in forms(4)) {
        let r = qc().with_mode(Mode::S);
        let fs: Vec<_> = cs[..k].iter().map(|c| linear(&r, *c)).collect();
        prop_assume!(independent(&r, &fs) == k);
        let e = Engine::default();
        let res = e.resolve_over_s(&FPModule::cyclic(&r, &fs).unwrap()).unwrap();
        let koszul: Vec<usize> = (0..=k as u32).map(|j| common::binomial(k as u32, j)).collect();
        prop_assert_eq!(res.betti, koszul);
    }

    #[test]
    fn hilbert_function_matches_dense_oracle(cs in forms(3)) {
        // ideals of products of two linear forms, over S
        let r = qc().with_mode(Mode::S);
        let ring = r.ring();
        let gens: Vec<_> = cs.windows(2).map(|w| ring.mul(&linear(&r, w[0]), &linear(&r, w[1]))).collect();
        let e = Engine::default();
        let counts = e.hilbert_counts(&FPModule::cyclic(&r, &gens).unwrap(), 5).unwrap();
        let oracle: Vec<u64> = common::quotient_hilbert(ring, &gens, 5).into_iter().map(|v| v as u64).collect();
        prop_assert_eq!(counts, oracle);
    }

    #[test]
    fn resolutions_are_complexes_and_exact(cs in forms(3), k in 1usize..=3) {
        let r = qc();
        let fs: Vec<_> = cs[..k].iter().map(|c| linear(&r, *c)).collect();
        let m = FPModule::cyclic(&r, &fs).unwrap();
        let e = Engine::default();
        let res = e.resolve_over_r(&m, 5).unwrap();
        prop_assert!(e.verify_resolution(&res).unwrap().ok());
    }

    #[test]
    fn cache_is_transparent(cs in forms(2), steps in 2usize..=6) {
        let r = qc();
        let fs: Vec<_> = cs.iter().map(|c| linear(&r, *c)).collect();
        let m = FPModule::cyclic(&r, &fs).unwrap();
        let cached = Engine::default();
        cached.resolve(&m, 2).unwrap();
        let warm = cached.resolve(&m, steps).unwrap();
        let cold = Engine::uncached(Limits::default()).resolve(&m, steps).unwrap();
        prop_assert_eq!(warm, cold);
    }

    #[test]
    fn bourbaki_is_reproducible(seed in any::<u64>()) {
        let r = qc();
        let p = |s: &str| r.ring().parse(s).unwrap();
        let i = FPModule::new(&r, vec![1, 1], vec![vec![p("y"), p("-w")], vec![p("z"), p("-x")]]).unwrap();
        let m = i.direct_sum(&FPModule::free_rank(&r, 1)).unwrap();
        let e = Engine::default();
        let a = e.bourbaki(&m, &[], seed).unwrap();
        let b = e.bourbaki(&m, &[], seed).unwrap();
        prop_assert_eq!(a.ideal, b.ideal);
        prop_assert_eq!(a.seed, b.seed);
        prop_assert!(!a.cokernel_free);
    }
}
