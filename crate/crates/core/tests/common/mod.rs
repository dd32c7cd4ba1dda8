#![allow(dead_code)]

pub mod oracle;

use crnormal::gq::{rat, GaussianRational as Gq};
use crnormal::{FormalMap, Germ, HoloSeries2, ModelPoly, RealSeries3, Weighting};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(r: &mut TestRng) -> Gq {
    let re = r.gen_range(-2i64..=2);
    let im = r.gen_range(-2i64..=2);
    let den = r.gen_range(1i64..=2);
    Gq::new(rat(re, den), rat(im, den))
}

fn nonzero(r: &mut TestRng) -> Gq {
    loop {
        let c = small(r);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Adds `c` at `key` and its conjugate at the mirrored slot.
pub fn add_real(s: &mut RealSeries3, key: (u32, u32, u32), c: &Gq) {
    if key.0 == key.1 {
        s.add_term(key, &Gq::real(c.re.clone()));
    } else {
        s.add_term(key, c);
        s.add_term((key.1, key.0, key.2), &c.conj());
    }
}

pub fn germ_from(w: Weighting, n: u32, terms: &[((u32, u32, u32), Gq)]) -> Germ {
    let mut s = RealSeries3::zero(w, n);
    for (key, c) in terms {
        add_real(&mut s, *key, c);
    }
    Germ::new(s).unwrap()
}

pub fn sphere(n: u32) -> Germ {
    germ_from(Weighting::levi(), n, &[((1, 1, 0), Gq::one())])
}

/// A random model of degree `k` with the requested class.
pub fn random_model(r: &mut TestRng, k: u32, circular: bool) -> ModelPoly {
    assert!(k >= 4 || (k == 2 && circular), "every cubic model is tubular");
    loop {
        let mut a = vec![Gq::zero(); k as usize + 1];
        if circular {
            let v = r.gen_range(1i64..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
            a[(k / 2) as usize] = Gq::from(v);
        } else {
            for j in 1..=k / 2 {
                if r.gen_bool(0.6) {
                    a[j as usize] = small(r);
                }
            }
            if k % 2 == 0 {
                a[(k / 2) as usize] = Gq::real(a[(k / 2) as usize].re.clone());
            }
            for j in 1..=k / 2 {
                a[(k - j) as usize] = a[j as usize].conj();
            }
        }
        if let Ok(p) = ModelPoly::new(a) {
            let want = if circular {
                crnormal::ModelClass::Circular
            } else {
                crnormal::ModelClass::Generic
            };
            if p.klass() == want {
                return p;
            }
        }
    }
}

/// Model plus sparse random terms of weight `k + 1..=n` and a possible
/// harmonic term of weight `k`.
pub fn random_germ(r: &mut TestRng, p: &ModelPoly, n: u32, density: f64) -> Germ {
    let k = p.k();
    let mut s = p.to_series(n);
    for d in k..=n {
        for m in 0..=d / k {
            let rest = d - k * m;
            for i in 0..=rest {
                let j = rest - i;
                if i < j || i + j + m <= 1 {
                    continue;
                }
                let allowed = d > k || (d == k && m == 0 && j == 0);
                if allowed && r.gen_bool(density) {
                    add_real(&mut s, (i, j, m), &small(r));
                }
            }
        }
    }
    Germ::new(s).unwrap()
}

/// A random invertible map of the grading `u_weight = k`.
pub fn random_map(r: &mut TestRng, k: u32, n: u32, density: f64) -> FormalMap {
    let w = Weighting::new(k).unwrap();
    let mut f = HoloSeries2::zero(w, n);
    let mut g = HoloSeries2::zero(w, n);
    let beta = nonzero(r);
    f.add_term((1, 0), &(&beta - &Gq::one()));
    let delta = r.gen_range(1i64..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
    g.add_term((0, 1), &Gq::from(delta - 1));
    for d in 2..=n {
        for b in 0..=d / k {
            let a = d - k * b;
            if (a, b) != (0, 1) && (b > 0 || a >= k) && r.gen_bool(density) {
                g.add_term((a, b), &small(r));
            }
            if d >= k && d + 1 - k >= k * b {
                let a = d + 1 - k - k * b;
                if (a, b) != (1, 0) && r.gen_bool(density) {
                    f.add_term((a, b), &small(r));
                }
            }
        }
    }
    FormalMap::new(f, g).unwrap()
}
