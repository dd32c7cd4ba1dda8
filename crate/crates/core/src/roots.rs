//! Exact roots inside `Q` and `Q(i)`, and integer lattice kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gq::{GaussianRational as Gq, Rational};

/// The positive rational `n`-th root of a positive rational, if any.
pub fn rational_root(q: &Rational, n: u32) -> Option<Rational> {
    if n == 0 || !q.is_positive() {
        return None;
    }
    let root = |b: &BigInt| -> Option<BigInt> {
        let r = b.nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == *b).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// A square root in `Q(i)`, if one exists; the other root is its negative.
pub fn gq_sqrt(z: &Gq) -> Option<Gq> {
    if z.is_zero() {
        return Some(Gq::zero());
    }
    let n = if z.im.is_zero() {
        z.re.abs()
    } else {
        rational_root(&z.norm_sqr(), 2)?
    };
    let two = Rational::from_integer(2.into());
    let re2 = (&z.re + &n) / &two;
    let root = if re2.is_zero() {
        Gq::new(Rational::zero(), rational_root(&((&n - &z.re) / &two), 2)?)
    } else {
        let re = rational_root(&re2, 2)?;
        let im = &z.im / (&re * &two);
        Gq::new(re, im)
    };
    (&root * &root == *z).then_some(root)
}

/// Continued-fraction approximation with bounded denominator.
fn approx(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| Rational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// All `n`-th roots of `z` lying in `Q(i)`. Even orders are exact; odd
/// orders use rational reconstruction of numerical roots, verified
/// exactly, so a root with very large height may be missed.
pub fn gq_roots(z: &Gq, n: u32) -> Vec<Gq> {
    if n == 0 || z.is_zero() {
        return Vec::new();
    }
    if n == 1 {
        return vec![z.clone()];
    }
    let mut out: Vec<Gq> = Vec::new();
    if n % 2 == 0 {
        if let Some(r) = gq_sqrt(z) {
            for s in [r.clone(), -r] {
                for root in gq_roots(&s, n / 2) {
                    if !out.contains(&root) {
                        out.push(root);
                    }
                }
            }
        }
        return out;
    }
    let (x, y) = z.to_f64_pair();
    let modulus = (x * x + y * y).sqrt().powf(1.0 / n as f64);
    let arg = y.atan2(x);
    for j in 0..n {
        let t = (arg + 2.0 * std::f64::consts::PI * j as f64) / n as f64;
        let (Some(re), Some(im)) = (approx(modulus * t.cos(), 1 << 20), approx(modulus * t.sin(), 1 << 20)) else {
            continue;
        };
        let cand = Gq::new(re, im);
        if cand.pow(n as i64) == *z && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Integer coefficients `c` with `Σ c_t v_t = gcd(v)`, and the gcd (≥ 0).
pub fn bezout(v: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coef = vec![0i64; v.len()];
    for (t, &x) in v.iter().enumerate() {
        let e = g.extended_gcd(&x);
        // e.gcd = e.x·g + e.y·x
        for c in coef.iter_mut().take(t) {
            *c *= e.x;
        }
        coef[t] = e.y;
        g = e.gcd;
    }
    if g < 0 {
        g = -g;
        for c in &mut coef {
            *c = -*c;
        }
    }
    (g, coef)
}

/// A basis of `{n ∈ Z^c : rows · n = 0}` by unimodular column operations.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    // column j of u tracks column j of m
    let col_op = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, a: usize, b: usize, q: i128| {
        // column a -= q · column b
        for row in m.iter_mut() {
            row[a] -= q * row[b];
        }
        for row in u.iter_mut() {
            row[a] -= q * row[b];
        }
    };
    let swap = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in u.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut p = 0;
    for r in 0..m.len() {
        if p == ncols {
            break;
        }
        loop {
            let nz: Vec<usize> = (p..ncols).filter(|&c| m[r][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&c| m[r][c].abs()).unwrap();
            swap(&mut m, &mut u, p, piv);
            let mut done = true;
            for c in p + 1..ncols {
                if m[r][c] != 0 {
                    let q = Integer::div_floor(&m[r][c], &m[r][p]);
                    col_op(&mut m, &mut u, c, p, q);
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                p += 1;
                break;
            }
        }
    }
    (p..ncols)
        .map(|c| (0..ncols).map(|i| u[i][c].to_i64().expect("kernel entry fits")).collect())
        .collect()
}

/// `Π z_t^{n_t}`.
pub fn product_power(values: &[Gq], exps: &[i64]) -> Gq {
    values
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .fold(Gq::one(), |acc, (z, &e)| &acc * &z.pow(e))
}

pub fn is_one(z: &Gq) -> bool {
    z.re.is_one() && z.im.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gq::rat;

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&rat(27, 8), 3), Some(rat(3, 2)));
        assert_eq!(rational_root(&rat(2, 1), 2), None);
        assert_eq!(rational_root(&rat(-4, 1), 2), None);
    }

    #[test]
    fn gaussian_square_roots() {
        let z = Gq::from_ints(3, 4);
        let r = gq_sqrt(&(&z * &z)).unwrap();
        assert!(r == z || r == -z.clone());
        assert_eq!(gq_sqrt(&Gq::from(-4)), Some(Gq::from_ints(0, 2)));
        assert_eq!(gq_sqrt(&Gq::from(2)), None);
        let w = Gq::new(rat(1, 2), rat(-3, 5));
        assert!(gq_sqrt(&(&w * &w)).is_some());
    }

    #[test]
    fn gaussian_roots_of_all_orders() {
        let z = Gq::new(rat(2, 3), rat(-1, 4));
        for n in 1..=7 {
            let roots = gq_roots(&z.pow(n as i64), n);
            assert!(roots.contains(&z), "n = {n}: {roots:?}");
            for r in &roots {
                assert_eq!(r.pow(n as i64), z.pow(n as i64));
            }
        }
        assert_eq!(gq_roots(&Gq::one(), 4).len(), 4);
        assert_eq!(gq_roots(&Gq::one(), 3), vec![Gq::one()]);
    }

    #[test]
    fn bezout_and_kernel() {
        let v = [6i64, 10, 15];
        let (g, c) = bezout(&v);
        assert_eq!(g, 1);
        assert_eq!(v.iter().zip(&c).map(|(a, b)| a * b).sum::<i64>(), 1);
        let rows = vec![vec![1i64, 2, 3], vec![0, 1, 4]];
        let ker = integer_kernel(&rows, 3);
        assert_eq!(ker.len(), 1);
        for r in &rows {
            assert_eq!(r.iter().zip(&ker[0]).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
        assert_eq!(ker[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![5, 4, 1]);
    }
}
