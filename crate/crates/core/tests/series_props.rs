mod common;

use common::*;
use crnormal::gq::GaussianRational as Gq;
use crnormal::series::{compose_on_surface, implicit_solve, InnerMap};
use crnormal::{HoloSeries2, RealSeries3, Weighting};
use proptest::prelude::*;
use rand::Rng;

fn random_series(r: &mut TestRng, w: Weighting, n: u32, min_deg: u32, hermitian: bool) -> RealSeries3 {
    let k = w.u_weight();
    let mut s = RealSeries3::zero(w, n);
    for m in 0..=n / k {
        for i in 0..=n {
            for j in 0..=n {
                let d = w.real_degree(i, j, m);
                if d < min_deg || d > n || !r.gen_bool(0.3) {
                    continue;
                }
                if hermitian {
                    if i >= j {
                        add_real(&mut s, (i, j, m), &small(r));
                    }
                } else {
                    s.add_term((i, j, m), &small(r));
                }
            }
        }
    }
    s
}

fn random_holo(r: &mut TestRng, w: Weighting, n: u32) -> HoloSeries2 {
    let k = w.u_weight();
    let mut h = HoloSeries2::zero(w, n);
    for b in 0..=n / k {
        for a in 0..=n - k * b {
            if r.gen_bool(0.4) {
                h.add_term((a, b), &small(r));
            }
        }
    }
    h
}

/// `Σ c A^i B^j C^m`, by repeated multiplication.
fn substitute(s: &RealSeries3, a: &RealSeries3, b: &RealSeries3, c: &RealSeries3, n: u32) -> RealSeries3 {
    let w = s.weighting();
    let mut out = RealSeries3::zero(w, n);
    for ((i, j, m), coef) in s.iter() {
        let mut t = RealSeries3::one(w, n);
        for _ in 0..*i {
            t = t.mul(a).unwrap().truncate(n);
        }
        for _ in 0..*j {
            t = t.mul(b).unwrap().truncate(n);
        }
        for _ in 0..*m {
            t = t.mul(c).unwrap().truncate(n);
        }
        out = out.add(&t.scale(coef)).unwrap();
    }
    out.truncate(n)
}

fn weighting(k: u32) -> Weighting {
    Weighting::new(k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_laws(seed in any::<u64>(), k in 2u32..=4, n in 3u32..=6) {
        let mut r = rng(seed);
        let w = weighting(k);
        let a = random_series(&mut r, w, n, 0, false);
        let b = random_series(&mut r, w, n, 0, false);
        let c = random_series(&mut r, w, n, 0, false);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&RealSeries3::one(w, n)).unwrap(), a.clone());
    }

    #[test]
    fn hermitian_closure(seed in any::<u64>(), k in 2u32..=4, n in 3u32..=6) {
        let mut r = rng(seed);
        let w = weighting(k);
        let a = random_series(&mut r, w, n, 0, true);
        let b = random_series(&mut r, w, n, 0, true);
        prop_assert!(a.is_hermitian() && b.is_hermitian());
        prop_assert!(a.add(&b).unwrap().is_hermitian());
        prop_assert!(a.mul(&b).unwrap().is_hermitian());
        prop_assert!(a.scale(&Gq::from(3)).is_hermitian());
        prop_assert_eq!(a.conj(), a.clone());
        let c = random_series(&mut r, w, n, 0, false);
        prop_assert!(c.re_part().is_hermitian() && c.im_part().is_hermitian());
    }

    #[test]
    fn truncation_is_sound(seed in any::<u64>(), k in 2u32..=4, n in 3u32..=7, cut in 1u32..=3) {
        let mut r = rng(seed);
        let w = weighting(k);
        let a = random_series(&mut r, w, n, 0, false);
        let b = random_series(&mut r, w, n, 0, false);
        let m = n - cut.min(n - 1);
        // coefficients up to m of a product only depend on the factors up to m
        prop_assert_eq!(
            a.truncate(m).mul(&b.truncate(m)).unwrap(),
            a.mul(&b).unwrap().truncate(m)
        );
        let p = a.mul(&b).unwrap();
        prop_assert_eq!(p.trunc(), n);
        prop_assert!(p.iter().all(|(key, _)| p.degree_of(*key) <= n));
        let mixed = a.add(&b.truncate(m)).unwrap();
        prop_assert_eq!(mixed.trunc(), m);
    }

    #[test]
    fn compose_matches_power_sum(seed in any::<u64>(), k in 2u32..=4, n in 4u32..=7) {
        let mut r = rng(seed);
        let w = weighting(k);
        let mut phi = random_series(&mut r, w, n, k.max(2), true);
        phi.set((0, 0, 1), Gq::zero());
        let h = random_holo(&mut r, w, n);
        let got = compose_on_surface(&h, &phi).unwrap();
        let mut wser = phi.scale(&Gq::i());
        wser.add_term((0, 0, 1), &Gq::one());
        let mut want = RealSeries3::zero(w, n);
        for ((a, b), c) in h.iter() {
            let mut t = RealSeries3::monomial(w, n, (*a, 0, 0), c.clone());
            for _ in 0..*b {
                t = t.mul(&wser).unwrap().truncate(n);
            }
            want = want.add(&t).unwrap();
        }
        prop_assert_eq!(got.truncate(n), want.truncate(got.trunc()).truncate(n));
    }

    #[test]
    fn implicit_solve_round_trip(seed in any::<u64>(), k in 2u32..=3, n in 3u32..=6) {
        let mut r = rng(seed);
        let w = weighting(k);
        let target = random_series(&mut r, w, n, 0, false);
        let mut z = random_series(&mut r, w, n, 2, false);
        z.set((1, 0, 0), Gq::new(crnormal::gq::rat(r.gen_range(1..=3), 1), crnormal::gq::rat(r.gen_range(-2..=2), 1)));
        z.set((0, 1, 0), Gq::zero());
        let mut u = random_series(&mut r, w, n, k + 1, false);
        u.set((0, 0, 1), Gq::from(r.gen_range(1i64..=3)));
        let inner = InnerMap { z: z.clone(), u: u.clone() };
        let rhs = substitute(&target, &z, &z.conj(), &u, n);
        prop_assert_eq!(implicit_solve(&inner, &rhs).unwrap(), target);
    }
}
