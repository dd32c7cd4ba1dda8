//! Deciding formal equivalence to a finite order by comparing normal forms
//! modulo the symmetry group of the model.
//!
//! Generic models have a linear symmetry group, so two normal forms are
//! equivalent exactly when one is a diagonal rescaling of the other; this is
//! a system of character equations in `(δ, β) ∈ R* × C*` and is decided
//! exactly through integer relation lattices. For the sphere and circular
//! models the group also has nonlinear parameters. Their effect on the
//! lowest nonzero weight `d0` of the remainder is only through the linear
//! part, which is recovered from that weight; the remaining parameters
//! enter the weights `d0 + 1` (`a`), `d0 + 2` (`μ`, sphere) or `d0 + k`
//! (`μ`, circular) affinely and are solved from exact finite differences.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::hypersurface::{remove_harmonics, Germ, HarmonicOutcome, ModelClass};
use crate::linalg;
use crate::normalform::conditions::NormalCase;
use crate::normalform::map::{transform, CircularAutomorphism, FormalMap, SphereAutomorphism};
use crate::normalform::solve::{apply_symmetry, normalize, NormalFormReport, Symmetry};
use crate::roots::{bezout, gq_roots, gq_sqrt, integer_kernel, is_one, product_power, rational_root};
use crate::series::{Key3, RealSeries3};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    EquivalentToOrder { order: u32 },
    DistinctToOrder { order: u32, reason: String },
    /// The orbit matching could not be decided at this order.
    Unsupported { reason: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::EquivalentToOrder { order } => write!(f, "EquivalentToOrder {order}"),
            Verdict::DistinctToOrder { order, reason } => {
                write!(f, "DistinctToOrder {order}: {reason}")
            }
            Verdict::Unsupported { reason } => write!(f, "Unsupported: {reason}"),
        }
    }
}

fn distinct(order: u32, reason: impl Into<String>) -> Verdict {
    Verdict::DistinctToOrder {
        order,
        reason: reason.into(),
    }
}

const INCONCLUSIVE: &str = "orbit matching inconclusive at this order";

/// Decides whether `g1` and `g2` are formally equivalent up to `order`.
pub fn equivalent(g1: &Germ, g2: &Germ, order: u32) -> Result<Verdict> {
    for g in [g1, g2] {
        if order > g.source_trunc() {
            return Err(Error::TruncationTooLow {
                requested: order,
                available: g.source_trunc(),
            });
        }
    }
    let h1 = remove_harmonics(g1, order)?;
    let h2 = remove_harmonics(g2, order)?;
    let (h1, h2) = match (h1, h2) {
        (HarmonicOutcome::Finite(a), HarmonicOutcome::Finite(b)) => (a, b),
        (HarmonicOutcome::InfiniteTypeWithinTruncation { checked_to }, HarmonicOutcome::InfiniteTypeWithinTruncation { .. }) => {
            return Err(Error::InfiniteType(checked_to))
        }
        _ => return Ok(distinct(order, "only one germ has finite type within the truncation")),
    };
    if h1.k != h2.k {
        return Ok(distinct(order, format!("types differ: {} and {}", h1.k, h2.k)));
    }
    if h1.k > 2 {
        let (c1, c2) = (h1.model.klass(), h2.model.klass());
        if c1 == ModelClass::Tubular || c2 == ModelClass::Tubular {
            return Err(Error::TubularUnsupported);
        }
        if c1 != c2 {
            return Ok(distinct(order, format!("model classes differ: {c1} and {c2}")));
        }
        if h1.model.l() != h2.model.l() {
            return Ok(distinct(
                order,
                format!("essential types differ: {} and {}", h1.model.l(), h2.model.l()),
            ));
        }
    }
    let r1 = normalize(g1, order)?;
    let r2 = normalize(g2, order)?;
    match r1.case {
        NormalCase::Generic => Ok(match_linear(&r1, &r2)),
        _ => match_sphere_like(&r1, &r2),
    }
}

fn support(s: &RealSeries3) -> BTreeSet<Key3> {
    s.iter().map(|(k, _)| *k).collect()
}

/// Ratios `c2 / c1` on a common support, or a reason they differ.
fn ratios(s1: &RealSeries3, s2: &RealSeries3) -> std::result::Result<Vec<(Key3, Gq)>, String> {
    if support(s1) != support(s2) {
        return Err("normal forms have different supports".into());
    }
    Ok(s1
        .sorted_terms()
        .into_iter()
        .map(|(key, c1)| (key, &s2.coeff(key) / c1))
        .collect())
}

/// Is there `(δ, β) ∈ R* × C*` with `c2 = c1 · δ^{1-m} β^{-i} β̄^{-j}` on
/// every monomial?
fn match_linear(r1: &NormalFormReport, r2: &NormalFormReport) -> Verdict {
    let order = r1.order.min(r2.order);
    let (s1, s2) = (r1.normalized.phi().truncate(order), r2.normalized.phi().truncate(order));
    let rs = match ratios(&s1, &s2) {
        Ok(rs) => rs,
        Err(e) => return distinct(order, e),
    };
    if linear_system_solvable(&rs, None) {
        Verdict::EquivalentToOrder { order }
    } else {
        distinct(order, "no linear symmetry of the model matches the normal forms")
    }
}

/// Character equations `r_t = δ^{a_t} ρ^{b_t} θ^{c_t}` with `β = ρθ`,
/// `a = 1 - m`, `b = -(i + j)`, `c = j - i`. With `tied = Some(k)` the
/// scaling is `δ = ρ^k`, as for the sphere and circular models.
///
/// The moduli are matched on the relation lattice of the real exponents
/// and the phases on that of `c`; a torus character system is solvable
/// exactly when every integer relation is respected.
fn linear_system_solvable(rs: &[(Key3, Gq)], tied: Option<u32>) -> bool {
    let n = rs.len();
    let a: Vec<i64> = rs.iter().map(|((_, _, m), _)| 1 - *m as i64).collect();
    let b: Vec<i64> = rs.iter().map(|((i, j, _), _)| -((i + j) as i64)).collect();
    let c: Vec<i64> = rs.iter().map(|((i, j, _), _)| *j as i64 - *i as i64).collect();
    let vals: Vec<Gq> = rs.iter().map(|(_, r)| r.clone()).collect();
    let norms: Vec<Gq> = vals.iter().map(|r| Gq::real(r.norm_sqr())).collect();
    let moduli_rows = match tied {
        None => vec![a.clone(), b.clone()],
        Some(k) => vec![a.iter().zip(&b).map(|(x, y)| k as i64 * x + y).collect()],
    };
    for rel in integer_kernel(&moduli_rows, n) {
        if !is_one(&product_power(&norms, &rel)) {
            return false;
        }
    }
    // phases: sign(δ)^a θ^c = r / |r|, with δ > 0 when tied
    let phase_rels = integer_kernel(&[c.clone()], n);
    let signs: &[i64] = if tied.is_some() { &[1] } else { &[1, -1] };
    signs.iter().any(|&sigma| {
        phase_rels.iter().all(|rel| {
            let x = product_power(&vals, rel);
            let y = product_power(&norms, rel);
            let parity: i64 = rel.iter().zip(&a).map(|(r, a)| r * a).sum();
            let sign = if parity.rem_euclid(2) == 1 { sigma } else { 1 };
            x.is_real() && &x.re * &x.re == y.re && (x.re.is_positive() == (sign == 1))
        })
    })
}

/// Candidates for `β` in `Q(i)` with `r_t = β^{p_t} β̄^{q_t}`. The flag is
/// false when roots outside `Q(i)` could have been missed.
fn beta_candidates(rs: &[(Key3, Gq)], k: u32) -> std::result::Result<(Vec<Gq>, bool), String> {
    let half = |m: u32| k as i64 * (1 - m as i64) / 2;
    let pq: Vec<(i64, i64)> = rs
        .iter()
        .map(|((i, j, m), _)| (half(*m) - *i as i64, half(*m) - *j as i64))
        .collect();
    let e = pq[0].0 + pq[0].1;
    let norm = rs[0].1.norm_sqr();
    if rs.iter().any(|(_, r)| r.norm_sqr() != norm) {
        return Err("moduli of the lowest-weight coefficients are incompatible".into());
    }
    // |β|^{2e} = |r|²
    let s = if e == 0 {
        None
    } else if e > 0 {
        rational_root(&norm, e as u32)
    } else {
        rational_root(&norm.recip(), (-e) as u32)
    };
    let Some(s) = s else {
        return Ok((Vec::new(), false));
    };
    // θ^{2(p - q)} = r / r̄
    let u: Vec<Gq> = rs.iter().map(|(_, r)| r / &r.conj()).collect();
    let exps: Vec<i64> = pq.iter().map(|(p, q)| 2 * (p - q)).collect();
    let (d, coef) = bezout(&exps);
    if d == 0 {
        // every phase is admissible at this weight
        return Ok((vec![Gq::real(s.clone())].into_iter().flat_map(|b2| sqrt_pair(&b2)).collect(), false));
    }
    let big_u = product_power(&u, &coef);
    for (ut, &x) in u.iter().zip(&exps) {
        if big_u.pow(x / d) != *ut {
            return Err("phases of the lowest-weight coefficients are incompatible".into());
        }
    }
    let g = (d / 2) as u32;
    // roots of unity of order g outside Q(i) would give further candidates
    let complete = 4 % g == 0;
    let mut out = Vec::new();
    for theta2 in gq_roots(&big_u, g) {
        for beta in sqrt_pair(&theta2.scale(&s)) {
            let ok = rs
                .iter()
                .zip(&pq)
                .all(|((_, r), (p, q))| &beta.pow(*p) * &beta.conj().pow(*q) == *r);
            if ok && !out.contains(&beta) {
                out.push(beta);
            }
        }
    }
    let complete = complete && !gq_roots(&big_u, g).is_empty();
    Ok((out, complete))
}

fn sqrt_pair(z: &Gq) -> Vec<Gq> {
    gq_sqrt(z).map(|r| vec![r.clone(), -r]).unwrap_or_default()
}

/// Coefficients of one weighted degree, flattened to real and imaginary
/// parts over a fixed key list.
fn flatten(s: &RealSeries3, keys: &[Key3]) -> Vec<Rational> {
    keys.iter()
        .flat_map(|k| {
            let c = s.coeff(*k);
            [c.re, c.im]
        })
        .collect()
}

fn weight_keys(a: &RealSeries3, b: &RealSeries3, c: &[RealSeries3], ds: &RangeInclusive<u32>) -> Vec<Key3> {
    let mut keys: BTreeSet<Key3> = BTreeSet::new();
    for s in std::iter::once(a).chain(std::iter::once(b)).chain(c.iter()) {
        keys.extend(s.iter().map(|(k, _)| *k).filter(|k| ds.contains(&s.degree_of(*k))));
    }
    keys.into_iter().collect()
}

/// Solves `base + Σ x_i (dir_i - base) = target` on the degrees `ds`;
/// returns the solution and whether it is unique.
fn affine_solve(
    base: &RealSeries3,
    dirs: &[RealSeries3],
    target: &RealSeries3,
    ds: RangeInclusive<u32>,
) -> Option<(Vec<Rational>, bool)> {
    let keys = weight_keys(base, target, dirs, &ds);
    let b0 = flatten(base, &keys);
    let t = flatten(target, &keys);
    let cols: Vec<Vec<Rational>> = dirs.iter().map(|s| flatten(s, &keys)).collect();
    let rows: Vec<Vec<Rational>> = (0..b0.len())
        .map(|r| cols.iter().map(|c| c[r].clone() - &b0[r]).collect())
        .collect();
    let rhs: Vec<Rational> = t.iter().zip(&b0).map(|(x, y)| x - y).collect();
    let sol = linalg::solve(&rows, &rhs, dirs.len());
    let unique = sol.rank == dirs.len();
    sol.x.map(|x| (x, unique))
}

fn sphere_like_symmetry(case: NormalCase, l: u32, a: Gq, mu: Rational) -> Symmetry {
    match case {
        NormalCase::ChernMoser => Symmetry::Sphere(SphereAutomorphism {
            a,
            delta: Rational::one(),
            theta: Gq::one(),
            mu,
        }),
        _ => Symmetry::Circular(CircularAutomorphism {
            delta: Rational::one(),
            theta: Gq::one(),
            mu,
            l,
        }),
    }
}

fn moved(base: &NormalFormReport, h: &Symmetry, order: u32) -> Result<RealSeries3> {
    let r = if order < base.order {
        truncated_report(base, order)?
    } else {
        base.clone()
    };
    Ok(apply_symmetry(&r, h)?.normalized.into_phi())
}

fn truncated_report(r: &NormalFormReport, order: u32) -> Result<NormalFormReport> {
    normalize(&r.normalized.truncate(order), order)
}

/// Exact least squares `min |b + Σ x_i col_i|` with the flag telling
/// whether the columns are independent (otherwise the minimizer is one of
/// many).
fn least_squares(cols: &[Vec<Rational>], b: &[Rational]) -> (Vec<Rational>, bool) {
    let dot = |u: &[Rational], v: &[Rational]| {
        u.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    };
    let gram: Vec<Vec<Rational>> = cols
        .iter()
        .map(|ci| cols.iter().map(|cj| dot(ci, cj)).collect())
        .collect();
    let rhs: Vec<Rational> = cols.iter().map(|ci| -dot(ci, b)).collect();
    let sol = linalg::solve(&gram, &rhs, cols.len());
    let unique = sol.rank == cols.len();
    (sol.x.expect("normal equations are consistent"), unique)
}

/// Weight-`d` parts of `base` and of each direction minus `base`, flattened
/// over a common key list.
fn weight_columns(base: &RealSeries3, dirs: &[RealSeries3], d: u32) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let base = base.homogeneous_part(d);
    let dirs: Vec<RealSeries3> = dirs.iter().map(|s| s.homogeneous_part(d)).collect();
    let keys = weight_keys(&base, &base, &dirs, &(d..=d));
    let b = flatten(&base, &keys);
    let cols = dirs
        .iter()
        .map(|s| flatten(s, &keys).iter().zip(&b).map(|(x, y)| x - y).collect())
        .collect();
    (b, cols)
}

/// A normal form of the same germ that is canonical up to the linear
/// symmetries `z ↦ βz`, `w ↦ |β|^k w` of the model.
///
/// The nonlinear parameters are fixed by orthogonality: `a` (sphere case)
/// minimizes the weight `d0 + 1` part and `μ` the first weight in
/// `d0 + s..d0 + 2s` on which it acts (`s` is its weight). Both parts depend
/// affinely on the parameter there, and a linear symmetry rescales a single
/// weight by a common factor and phases, so the minimizer is equivariant.
/// Every normal form of the germ then has the same canonical form up to a
/// linear symmetry, and the stabilizer of the canonical form is linear.
/// Generic normal forms are already canonical in this sense. Returns `None`
/// when the parameters act degenerately within the order.
pub fn canonical_normal_form(r: &NormalFormReport) -> Result<Option<NormalFormReport>> {
    if r.case == NormalCase::Generic {
        return Ok(Some(r.clone()));
    }
    let order = r.order;
    let Some(d0) = r.remainder().truncate(order).min_degree() else {
        return Ok(Some(r.clone()));
    };
    let sym = |a: Gq, mu: Rational| sphere_like_symmetry(r.case, r.l(), a, mu);
    let a = if r.case == NormalCase::ChernMoser && d0 < order {
        let d = d0 + 1;
        let dirs = [
            moved(r, &sym(Gq::one(), Rational::zero()), d)?,
            moved(r, &sym(Gq::i(), Rational::zero()), d)?,
        ];
        let (b, cols) = weight_columns(r.normalized.phi(), &dirs, d);
        let (x, unique) = least_squares(&cols, &b);
        // at the last weight the undetermined part of `a` acts trivially
        if !unique && d < order {
            return Ok(None);
        }
        Gq::new(x[0].clone(), x[1].clone())
    } else {
        Gq::zero()
    };
    let shift = if r.case == NormalCase::ChernMoser { 2 } else { r.k() };
    let mut mu = Rational::zero();
    if d0 + shift <= order {
        let top = (d0 + 2 * shift - 1).min(order);
        let start = moved(r, &sym(a.clone(), Rational::zero()), top)?;
        let dir = moved(r, &sym(a.clone(), Rational::one()), top)?;
        let mut pinned = false;
        for d in d0 + shift..=top {
            let (b, cols) = weight_columns(&start, std::slice::from_ref(&dir), d);
            if let (x, true) = least_squares(&cols, &b) {
                mu = x[0].clone();
                pinned = true;
                break;
            }
        }
        // beyond the affine range μ could still act
        if !pinned && order >= d0 + 2 * shift {
            return Ok(None);
        }
    }
    if a.is_zero() && mu.is_zero() {
        return Ok(Some(r.clone()));
    }
    apply_symmetry(r, &sym(a, mu)).map(Some)
}

fn match_sphere_like(r1: &NormalFormReport, r2: &NormalFormReport) -> Result<Verdict> {
    let order = r1.order.min(r2.order);
    let k = r1.k();
    let (f1, f2) = (r1.remainder().truncate(order), r2.remainder().truncate(order));
    match (f1.is_zero(), f2.is_zero()) {
        (true, true) => return Ok(Verdict::EquivalentToOrder { order }),
        (true, false) | (false, true) => {
            return Ok(distinct(order, "exactly one germ is equivalent to the model"))
        }
        _ => {}
    }
    let d0 = f1.min_degree().expect("nonzero");
    if f2.min_degree() != Some(d0) {
        return Ok(distinct(order, "lowest weights of the normal forms differ"));
    }
    let rs = match ratios(&f1.homogeneous_part(d0), &f2.homogeneous_part(d0)) {
        Ok(rs) => rs,
        Err(e) => return Ok(distinct(order, e)),
    };
    if let (Some(c1), Some(c2)) = (canonical_normal_form(r1)?, canonical_normal_form(r2)?) {
        let (s1, s2) = (c1.normalized.phi().truncate(order), c2.normalized.phi().truncate(order));
        return Ok(match ratios(&s1, &s2) {
            Err(e) => distinct(order, format!("canonical {e}")),
            Ok(rs) if linear_system_solvable(&rs, Some(k)) => Verdict::EquivalentToOrder { order },
            Ok(_) => distinct(order, "no linear symmetry of the model matches the canonical normal forms"),
        });
    }
    // fallback: search the linear part among Q(i) candidates
    let (betas, mut complete) = match beta_candidates(&rs, k) {
        Ok(c) => c,
        Err(e) => return Ok(distinct(order, e)),
    };
    let base = truncated_report(r1, order)?;
    for beta in betas {
        // pull the second normal form back by z* = βz, w* = |β|^k w
        let inv = beta.inv().expect("nonzero");
        let delta = num_traits::pow(inv.norm_sqr(), (k / 2) as usize);
        let lin = FormalMap::linear(r2.normalized.weighting(), order, &inv, &delta)?;
        let target = transform(&r2.normalized.truncate(order), &lin)?.into_phi();
        let mut unique = true;
        let a = if r1.case == NormalCase::ChernMoser && d0 < order {
            let d = d0 + 1;
            let at = |a: Gq| moved(&base, &sphere_like_symmetry(r1.case, 0, a, Rational::zero()), d);
            let dirs = [at(Gq::one())?, at(Gq::i())?];
            match affine_solve(&base.normalized.phi().truncate(d), &dirs, &target, d..=d) {
                Some((x, u)) => {
                    unique &= u;
                    Gq::new(x[0].clone(), x[1].clone())
                }
                None => continue,
            }
        } else {
            Gq::zero()
        };
        let shift = if r1.case == NormalCase::ChernMoser { 2 } else { k };
        // μ enters affinely below d0 + 2·shift
        let mu = if d0 + shift <= order {
            let d = (d0 + 2 * shift - 1).min(order);
            let at = |mu: Rational| moved(&base, &sphere_like_symmetry(r1.case, r1.l(), a.clone(), mu), d);
            let start = at(Rational::zero())?;
            let dirs = [at(Rational::one())?];
            match affine_solve(&start, &dirs, &target, d0 + shift..=d) {
                Some((x, u)) => {
                    unique &= u;
                    x[0].clone()
                }
                None => continue,
            }
        } else {
            Rational::zero()
        };
        let candidate = moved(&base, &sphere_like_symmetry(r1.case, r1.l(), a.clone(), mu.clone()), order)?;
        if candidate == target {
            return Ok(Verdict::EquivalentToOrder { order });
        }
        complete &= unique;
    }
    Ok(if complete {
        distinct(order, "no symmetry of the model matches the normal forms")
    } else {
        Verdict::Unsupported {
            reason: INCONCLUSIVE.into(),
        }
    })
}
