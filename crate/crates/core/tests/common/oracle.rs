//! Test-side reference computations that avoid the library's operator and
//! solver code paths.

use crnormal::gq::{GaussianRational as Gq, Rational};
use crnormal::normalform::{NormalCase, NormalFormReport};
use crnormal::series::Key3;
use crnormal::{transform, FormalMap, Germ, HoloSeries2, RealSeries3, Weighting};
use num_traits::Zero;

/// Complex functionals `Σ c · coeff(key)` that must vanish at weighted
/// degree `d`, enumerated straight from the condition lists.
pub fn condition_slots(case: NormalCase, k: u32, l: u32, a: &[Gq], d: u32) -> Vec<Vec<(Key3, Gq)>> {
    let mut keys: Vec<Key3> = Vec::new();
    for m in 0..=d / k {
        let s = d - k * m;
        for i in 0..=s {
            let j = s - i;
            if i < j {
                continue;
            }
            let hit = match case {
                NormalCase::ChernMoser => {
                    j == 0 || j == 1 || (i, j) == (2, 2) || (i, j) == (3, 3) || (i, j) == (3, 2)
                }
                NormalCase::Circular => {
                    j == 0
                        || j == l
                        || (i, j) == (2 * l, 2 * l)
                        || (i, j) == (3 * l, 3 * l)
                        || (i, j) == (2 * l, 2 * l - 1)
                }
                NormalCase::Generic => {
                    (j == 0 && i >= 1)
                        || (j == l && i >= k - l)
                        || (i, j) == (2 * k - 2 * l, 2 * l)
                }
            };
            if hit {
                keys.push((i, j, m));
            }
        }
    }
    let mut out: Vec<Vec<(Key3, Gq)>> = keys.into_iter().map(|key| vec![(key, Gq::one())]).collect();
    if case == NormalCase::Generic && (d + 1) % k == 0 {
        let m = (d + 1) / k - 1;
        // (F_{k-1}, P_z) with P_z = Σ (j + 1) a_{j+1} z^j z̄^{k-1-j}
        let sp: Vec<(Key3, Gq)> = (1..k - 1)
            .map(|j| {
                let pz = a[j as usize + 1].scale(&Rational::from_integer((j + 1).into()));
                ((j, k - 1 - j, m), pz.conj())
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if !sp.is_empty() {
            out.push(sp);
        }
    }
    out
}

fn eval(f: &[(Key3, Gq)], s: &RealSeries3) -> Gq {
    let mut acc = Gq::zero();
    for (key, c) in f {
        acc += &(c * &s.coeff(*key));
    }
    acc
}

/// Every condition slot of `rem` up to `order` vanishes; returns the first
/// violated slot otherwise.
pub fn check_conditions(r: &NormalFormReport, rem: &RealSeries3) -> Result<(), String> {
    for d in 0..=r.order {
        for f in condition_slots(r.case, r.k(), r.l(), r.model.coeffs(), d) {
            let v = eval(&f, rem);
            if !v.is_zero() {
                return Err(format!("condition at {:?} (degree {d}) is {v}", f[0].0));
            }
        }
    }
    Ok(())
}

/// Gauss–Jordan with left-most pivots; free variables are zero.
pub fn rref_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, ncols: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let v = &a[row][c] * &f;
                    a[r][c] = &a[r][c] - &v;
                }
                let v = &b[row] * &f;
                b[r] = &b[r] - &v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// `(in_g, key, imaginary)` in the library's column order.
fn unknowns(k: u32, d: u32) -> Vec<(bool, (u32, u32), bool)> {
    let mut out = Vec::new();
    for (in_g, weight) in [(true, d), (false, d + 1 - k)] {
        for b in 0..=weight / k {
            for im in [false, true] {
                out.push((in_g, (weight - k * b, b), im));
            }
        }
    }
    out
}

fn piece(w: Weighting, n: u32, f: &[((u32, u32), Gq)], g: &[((u32, u32), Gq)]) -> FormalMap {
    FormalMap::new(
        HoloSeries2::from_terms(w, n, f.iter().cloned()),
        HoloSeries2::from_terms(w, n, g.iter().cloned()),
    )
    .unwrap()
}

/// Re-derives every degree step of `r` from `original` by probing the full
/// change of variables with single monomials and solving each degree with
/// [`rref_solve`]; compares the pieces and the final normal form.
pub fn brute_force_matches(original: &Germ, r: &NormalFormReport) -> Result<(), String> {
    let k = r.k();
    let w = Weighting::new(k).unwrap();
    let n = r.order;
    let w0 = r.prep.weighting();
    let start = if original.weighting() == w0 { original.clone() } else { original.reweight(w0) };
    let mut cur = transform(&start, &r.prep).map_err(|e| e.to_string())?.reweight(w).truncate(n);
    if r.case != NormalCase::Generic {
        let al = cur.phi().coeff((r.l(), r.l(), 0)).re;
        let lin = FormalMap::linear(w, n, &Gq::one(), &al.recip()).unwrap();
        cur = transform(&cur, &lin).map_err(|e| e.to_string())?;
    }
    for (idx, d) in (k + 1..=n).enumerate() {
        let slots = condition_slots(r.case, k, r.l(), r.model.coeffs(), d);
        let unk = unknowns(k, d);
        let base = cur.phi().homogeneous_part(d);
        let cols: Vec<RealSeries3> = unk
            .iter()
            .map(|(in_g, key, im)| {
                let c = if *im { Gq::i() } else { Gq::one() };
                let e = [(*key, c)];
                let map = if *in_g { piece(w, n, &[], &e) } else { piece(w, n, &e, &[]) };
                let moved = transform(&cur, &map).unwrap().into_phi().homogeneous_part(d);
                moved.sub(&base).unwrap()
            })
            .collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for f in &slots {
            let vals: Vec<Gq> = cols.iter().map(|c| eval(f, c)).collect();
            let b = eval(f, &base);
            rows.push(vals.iter().map(|v| v.re.clone()).collect::<Vec<_>>());
            rhs.push(-b.re.clone());
            rows.push(vals.iter().map(|v| v.im.clone()).collect::<Vec<_>>());
            rhs.push(-b.im);
        }
        let x = rref_solve(rows, rhs, unk.len()).ok_or(format!("degree {d}: inconsistent"))?;
        let mut f = Vec::new();
        let mut g = Vec::new();
        for ((in_g, key, im), v) in unk.iter().zip(&x) {
            if v.is_zero() {
                continue;
            }
            let c = if *im { Gq::i().scale(v) } else { Gq::real(v.clone()) };
            if *in_g {
                g.push((*key, c));
            } else {
                f.push((*key, c));
            }
        }
        let step = &r.steps[idx];
        let fs = HoloSeries2::from_terms(w, n, f.iter().cloned());
        let gs = HoloSeries2::from_terms(w, n, g.iter().cloned());
        if fs != step.f || gs != step.g {
            return Err(format!("degree {d}: pieces differ\n oracle f {fs:?} g {gs:?}\n library f {:?} g {:?}", step.f, step.g));
        }
        if !f.is_empty() || !g.is_empty() {
            cur = transform(&cur, &piece(w, n, &f, &g)).map_err(|e| e.to_string())?;
        }
    }
    if cur != r.normalized {
        return Err("final normal forms differ".into());
    }
    Ok(())
}
