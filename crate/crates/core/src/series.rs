//! Truncated formal power series in `(z, z̄, u)` and `(z, w)`, graded by a
//! weight that gives `z`, `z̄` weight one and `u` (or `w`) weight `k`.
//!
//! A series with truncation `N` stores every coefficient of weighted degree
//! at most `N` exactly; a missing key below `N` is an exact zero, and nothing
//! is known about degrees above `N`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weighting {
    u_weight: u32,
}

impl Weighting {
    pub fn new(u_weight: u32) -> Result<Self> {
        if u_weight < 2 {
            return Err(Error::InvalidWeight(u_weight));
        }
        Ok(Self { u_weight })
    }

    /// The grading used at Levi nondegenerate points.
    pub fn levi() -> Self {
        Self { u_weight: 2 }
    }

    pub fn u_weight(&self) -> u32 {
        self.u_weight
    }

    pub fn real_degree(&self, i: u32, j: u32, m: u32) -> u32 {
        i + j + self.u_weight * m
    }

    pub fn holo_degree(&self, a: u32, b: u32) -> u32 {
        a + self.u_weight * b
    }

    fn check(&self, other: &Weighting) -> Result<()> {
        if self != other {
            return Err(Error::WeightMismatch(self.u_weight, other.u_weight));
        }
        Ok(())
    }
}

/// Exponent triple `(i, j, m)` of `z^i z̄^j u^m`.
pub type Key3 = (u32, u32, u32);

/// Truncated series in `z, z̄, u`. Usually hermitian (the defining function
/// of a real hypersurface), but intermediate results may be complex.
#[derive(Clone, PartialEq, Eq)]
pub struct RealSeries3 {
    coeffs: BTreeMap<Key3, Gq>,
    trunc: u32,
    weighting: Weighting,
}

impl RealSeries3 {
    pub fn zero(weighting: Weighting, trunc: u32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            trunc,
            weighting,
        }
    }

    /// Builds a series from terms, summing repeated keys and discarding
    /// terms above the truncation.
    pub fn from_terms<I>(weighting: Weighting, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Key3, Gq)>,
    {
        let mut s = Self::zero(weighting, trunc);
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        s
    }

    pub fn monomial(weighting: Weighting, trunc: u32, key: Key3, c: Gq) -> Self {
        Self::from_terms(weighting, trunc, [(key, c)])
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn degree_of(&self, key: Key3) -> u32 {
        self.weighting.real_degree(key.0, key.1, key.2)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, key: Key3) -> Option<&Gq> {
        self.coeffs.get(&key)
    }

    pub fn coeff(&self, key: Key3) -> Gq {
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key3, &Gq)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, key: Key3, c: &Gq) {
        if c.is_zero() || self.degree_of(key) > self.trunc {
            return;
        }
        let e = self.coeffs.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn set(&mut self, key: Key3, c: Gq) {
        if c.is_zero() || self.degree_of(key) > self.trunc {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
    }

    /// Terms sorted by (weighted degree, i, j, m), the report ordering.
    pub fn sorted_terms(&self) -> Vec<(Key3, &Gq)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by_key(|(k, _)| (self.degree_of(*k), k.0, k.1, k.2));
        v
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| self.degree_of(*k)).min()
    }

    pub fn truncate(&self, n: u32) -> Self {
        let n = n.min(self.trunc);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| self.degree_of(**k) <= n)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc: n,
            weighting: self.weighting,
        }
    }

    /// The homogeneous part of weighted degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| self.degree_of(**k) == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc: self.trunc,
            weighting: self.weighting,
        }
    }

    /// Complex conjugate of the function: conjugates coefficients and swaps
    /// the roles of `z` and `z̄`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|((i, j, m), c)| ((*j, *i, *m), c.conj()))
                .collect(),
            trunc: self.trunc,
            weighting: self.weighting,
        }
    }

    /// First key violating `a_{ijm} = conj(a_{jim})`, if any.
    pub fn hermitian_defect(&self) -> Option<Key3> {
        for (&(i, j, m), c) in &self.coeffs {
            if i > j {
                continue;
            }
            let other = self.coeff((j, i, m));
            if other != c.conj() {
                return Some((i, j, m));
            }
        }
        // keys with i > j whose partner is absent
        for &(i, j, m) in self.coeffs.keys() {
            if i > j && !self.coeffs.contains_key(&(j, i, m)) {
                return Some((j, i, m));
            }
        }
        None
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect().is_none()
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        match self.hermitian_defect() {
            Some((i, j, m)) => Err(Error::NotHermitian(i, j, m)),
            None => Ok(()),
        }
    }

    /// `(S + conj S) / 2`.
    pub fn re_part(&self) -> Self {
        let half = Rational::new(1.into(), 2.into());
        (self + &self.conj()).scale(&Gq::real(half))
    }

    /// `(S - conj S) / 2i`.
    pub fn im_part(&self) -> Self {
        let c = Gq::new(Rational::from_integer(0.into()), Rational::new((-1).into(), 2.into()));
        (self - &self.conj()).scale(&c)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        let mut out = Self::zero(self.weighting, self.trunc);
        for (k, v) in &self.coeffs {
            out.set(*k, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.weighting.check(&other.weighting)?;
        let mut out = self.truncate(other.trunc);
        for (k, c) in &other.coeffs {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Gq::from(-1)))
    }

    /// Cauchy product truncated to the smaller truncation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.weighting.check(&other.weighting)?;
        let n = self.trunc.min(other.trunc);
        Ok(self.mul_to(other, n))
    }

    pub(crate) fn mul_to(&self, other: &Self, n: u32) -> Self {
        let w = self.weighting;
        let a = sorted_by_degree(&self.coeffs, |k| w.real_degree(k.0, k.1, k.2));
        let b = sorted_by_degree(&other.coeffs, |k| w.real_degree(k.0, k.1, k.2));
        let mut acc: HashMap<Key3, Gq> = HashMap::new();
        for (da, ka, ca) in &a {
            if *da > n {
                break;
            }
            for (db, kb, cb) in &b {
                if da + db > n {
                    break;
                }
                let key = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
                *acc.entry(key).or_default() += &(*ca * *cb);
            }
        }
        Self {
            coeffs: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            trunc: n,
            weighting: w,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.weighting, self.trunc);
        for _ in 0..e {
            acc = acc.mul_to(self, self.trunc);
        }
        acc
    }

    pub fn one(weighting: Weighting, trunc: u32) -> Self {
        Self::monomial(weighting, trunc, (0, 0, 0), Gq::one())
    }

    /// `Σ_m coeff(i, j, m) u^m`.
    pub fn slice(&self, i: u32, j: u32) -> USeries {
        let coeffs = self
            .coeffs
            .range((i, j, 0)..=(i, j, u32::MAX))
            .map(|(k, c)| (k.2, c.clone()))
            .collect();
        let trusted = if i + j <= self.trunc {
            Some((self.trunc - i - j) / self.weighting.u_weight)
        } else {
            None
        };
        USeries {
            coeffs,
            trusted_max_m: trusted,
        }
    }

    /// Re-expresses the same data in another grading. The truncation becomes
    /// the largest bound whose monomials were all known before.
    pub fn reweight(&self, weighting: Weighting) -> Self {
        let trunc = reweighted_trunc(self.trunc, self.weighting.u_weight, weighting.u_weight);
        let mut out = Self::zero(weighting, trunc);
        for (k, c) in &self.coeffs {
            out.set(*k, c.clone());
        }
        out
    }

    pub fn var_z(weighting: Weighting, trunc: u32) -> Self {
        Self::monomial(weighting, trunc, (1, 0, 0), Gq::one())
    }

    pub fn var_zbar(weighting: Weighting, trunc: u32) -> Self {
        Self::monomial(weighting, trunc, (0, 1, 0), Gq::one())
    }

    pub fn var_u(weighting: Weighting, trunc: u32) -> Self {
        Self::monomial(weighting, trunc, (0, 0, 1), Gq::one())
    }

    /// Equality of the coefficients up to weighted degree `n`.
    pub fn agrees_to(&self, other: &Self, n: u32) -> bool {
        self.truncate(n).coeffs == other.truncate(n).coeffs
    }
}

fn reweighted_trunc(n: u32, old: u32, new: u32) -> u32 {
    if new >= old {
        return n;
    }
    // largest t such that s + new*m <= t implies s + old*m <= n
    let mut t = n;
    loop {
        let ok = (0..=t / new).all(|m| old * m <= n && t - new * m <= n - old * m);
        if ok {
            return t;
        }
        t -= 1;
    }
}

fn sorted_by_degree<K: Copy + Ord, F: Fn(K) -> u32>(
    map: &BTreeMap<K, Gq>,
    deg: F,
) -> Vec<(u32, K, &Gq)> {
    let mut v: Vec<_> = map.iter().map(|(k, c)| (deg(*k), *k, c)).collect();
    v.sort_by_key(|t| (t.0, t.1));
    v
}

impl<'a> std::ops::Add<&'a RealSeries3> for &'a RealSeries3 {
    type Output = RealSeries3;
    fn add(self, rhs: &RealSeries3) -> RealSeries3 {
        RealSeries3::add(self, rhs).expect("weighting mismatch")
    }
}

impl<'a> std::ops::Sub<&'a RealSeries3> for &'a RealSeries3 {
    type Output = RealSeries3;
    fn sub(self, rhs: &RealSeries3) -> RealSeries3 {
        RealSeries3::sub(self, rhs).expect("weighting mismatch")
    }
}

impl fmt::Debug for RealSeries3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealSeries3[w={} N={}] ", self.weighting.u_weight, self.trunc)?;
        f.debug_map().entries(self.sorted_terms()).finish()
    }
}

/// Univariate series `F_{ij}(u)`, trusted for `m ≤ trusted_max_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct USeries {
    pub coeffs: BTreeMap<u32, Gq>,
    pub trusted_max_m: Option<u32>,
}

impl USeries {
    pub fn coeff(&self, m: u32) -> Gq {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Truncated holomorphic series in `z, w`; `w` carries the `u` weight.
#[derive(Clone, PartialEq, Eq)]
pub struct HoloSeries2 {
    coeffs: BTreeMap<(u32, u32), Gq>,
    trunc: u32,
    weighting: Weighting,
}

impl HoloSeries2 {
    pub fn zero(weighting: Weighting, trunc: u32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            trunc,
            weighting,
        }
    }

    pub fn from_terms<I>(weighting: Weighting, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Gq)>,
    {
        let mut s = Self::zero(weighting, trunc);
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        s
    }

    pub fn monomial(weighting: Weighting, trunc: u32, key: (u32, u32), c: Gq) -> Self {
        Self::from_terms(weighting, trunc, [(key, c)])
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn degree_of(&self, key: (u32, u32)) -> u32 {
        self.weighting.holo_degree(key.0, key.1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, key: (u32, u32)) -> Gq {
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Gq)> {
        self.coeffs.iter()
    }

    pub fn sorted_terms(&self) -> Vec<((u32, u32), &Gq)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by_key(|(k, _)| (self.degree_of(*k), k.0, k.1));
        v
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &Gq) {
        if c.is_zero() || self.degree_of(key) > self.trunc {
            return;
        }
        let e = self.coeffs.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn truncate(&self, n: u32) -> Self {
        let n = n.min(self.trunc);
        Self::from_terms(
            self.weighting,
            n,
            self.coeffs.iter().map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn with_trunc(&self, n: u32) -> Self {
        Self::from_terms(
            self.weighting,
            n,
            self.coeffs.iter().map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.weighting,
            self.trunc,
            self.coeffs
                .iter()
                .filter(|(k, _)| self.degree_of(**k) == d)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| self.degree_of(*k)).min()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.weighting.check(&other.weighting)?;
        let mut out = self.truncate(other.trunc);
        for (k, c) in &other.coeffs {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self::from_terms(
            self.weighting,
            self.trunc,
            self.coeffs.iter().map(|(k, v)| (*k, v * c)),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.weighting.check(&other.weighting)?;
        Ok(self.mul_to(other, self.trunc.min(other.trunc)))
    }

    fn mul_to(&self, other: &Self, n: u32) -> Self {
        let w = self.weighting;
        let a = sorted_by_degree(&self.coeffs, |k| w.holo_degree(k.0, k.1));
        let b = sorted_by_degree(&other.coeffs, |k| w.holo_degree(k.0, k.1));
        let mut out = Self::zero(w, n);
        for (da, ka, ca) in &a {
            if *da > n {
                break;
            }
            for (db, kb, cb) in &b {
                if da + db > n {
                    break;
                }
                out.add_term((ka.0 + kb.0, ka.1 + kb.1), &(*ca * *cb));
            }
        }
        out
    }

    /// Substitutes `z ↦ zs(z, w)`, `w ↦ ws(z, w)`. Both substitutions must
    /// not lower the weighted degree of `z` and `w` respectively.
    pub fn substitute(&self, zs: &HoloSeries2, ws: &HoloSeries2) -> Result<HoloSeries2> {
        self.weighting.check(&zs.weighting)?;
        self.weighting.check(&ws.weighting)?;
        let k = self.weighting.u_weight;
        if zs.min_degree().is_some_and(|d| d < 1) || ws.min_degree().is_some_and(|d| d < k) {
            return Err(Error::NonGradedMap(
                "substitution lowers the weighted degree".into(),
            ));
        }
        let n = self.trunc.min(zs.trunc).min(ws.trunc);
        let max_a = self.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let zp = powers_holo(zs, max_a, n);
        let wp = powers_holo(ws, max_b, n);
        let mut out = HoloSeries2::zero(self.weighting, n);
        for ((a, b), c) in &self.coeffs {
            if self.degree_of((*a, *b)) > n {
                continue;
            }
            let t = zp[*a as usize].mul_to(&wp[*b as usize], n);
            for (key, v) in &t.coeffs {
                out.add_term(*key, &(v * c));
            }
        }
        Ok(out)
    }
}

fn powers_holo(s: &HoloSeries2, max: u32, n: u32) -> Vec<HoloSeries2> {
    let mut v = vec![HoloSeries2::monomial(s.weighting, n, (0, 0), Gq::one())];
    for e in 1..=max as usize {
        let next = v[e - 1].mul_to(s, n);
        v.push(next);
    }
    v
}

impl fmt::Debug for HoloSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloSeries2[w={} N={}] ", self.weighting.u_weight, self.trunc)?;
        f.debug_map().entries(self.sorted_terms()).finish()
    }
}

fn powers_real(s: &RealSeries3, max: u32, n: u32) -> Vec<RealSeries3> {
    let mut v = vec![RealSeries3::one(s.weighting, n)];
    for e in 1..=max as usize {
        let next = v[e - 1].mul_to(s, n);
        v.push(next);
    }
    v
}

/// Evaluates `h(z, u + iΦ(z, z̄, u))` as a series in `z, z̄, u`.
pub fn compose_on_surface(h: &HoloSeries2, phi: &RealSeries3) -> Result<RealSeries3> {
    h.weighting.check(&phi.weighting)?;
    let w = phi.weighting;
    if let Some(((i, j, m), _)) = phi.iter().find(|(k, _)| w.real_degree(k.0, k.1, k.2) < 2) {
        return Err(Error::IllFormedSurface(format!(
            "defining function has a term of degree < 2 at ({i},{j},{m})"
        )));
    }
    if phi.coeff((0, 0, 1)) != Gq::zero() {
        return Err(Error::IllFormedSurface("defining function has a linear u term".into()));
    }
    // W = u + iΦ has lowest weight min(k, lowest weight of Φ)
    let k = w.u_weight;
    let low = phi.min_degree().unwrap_or(k).min(k);
    let h_trust = if low >= k {
        h.trunc
    } else {
        // unknown coefficients of h are those with a + k b > h.trunc
        let mut best = u32::MAX;
        for b in 0..=h.trunc / k + 1 {
            let a = (h.trunc + 1).saturating_sub(k * b);
            best = best.min(a + low * b);
        }
        best.saturating_sub(1)
    };
    let n = phi.trunc.min(h_trust);
    let mut wser = phi.truncate(n).scale(&Gq::i());
    wser.add_term((0, 0, 1), &Gq::one());
    let max_b = h.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
    let wp = powers_real(&wser, max_b, n);
    let mut out = RealSeries3::zero(w, n);
    for ((a, b), c) in &h.coeffs {
        if *a > n {
            continue;
        }
        for ((i, j, m), v) in wp[*b as usize].iter() {
            out.add_term((i + a, *j, *m), &(v * c));
        }
    }
    Ok(out)
}

/// Inner map `(z, z̄, u) ↦ (Z, conj Z, U)` used by [`implicit_solve`].
#[derive(Debug, Clone)]
pub struct InnerMap {
    pub z: RealSeries3,
    pub u: RealSeries3,
}

impl InnerMap {
    pub fn identity(weighting: Weighting, trunc: u32) -> Self {
        Self {
            z: RealSeries3::var_z(weighting, trunc),
            u: RealSeries3::var_u(weighting, trunc),
        }
    }
}

/// Finds `Φ*` with `Φ*(Z, conj Z, U) = rhs` to the common truncation.
///
/// `Z` must have weighted order at least one with leading part `c·z`,
/// `c ≠ 0`; `U` must have weighted order at least `k` with leading part
/// `δ u + q(z, z̄)`, `δ ≠ 0`. Under those conditions the system is
/// triangular: within each weighted degree the unknowns are solved in
/// decreasing powers of `u`.
pub fn implicit_solve(inner: &InnerMap, rhs: &RealSeries3) -> Result<RealSeries3> {
    let w = rhs.weighting;
    w.check(&inner.z.weighting)?;
    w.check(&inner.u.weighting)?;
    let k = w.u_weight;
    if inner.z.min_degree().is_some_and(|d| d < 1) || inner.u.min_degree().is_some_and(|d| d < k) {
        return Err(Error::NonGradedMap(
            "inner map lowers the weighted degree".into(),
        ));
    }
    let zlin = inner.z.coeff((1, 0, 0));
    if zlin.is_zero() || !inner.z.coeff((0, 1, 0)).is_zero() {
        return Err(Error::NonInvertibleLinearPart(
            "z-component has no invertible z-linear part".into(),
        ));
    }
    let ulin = inner.u.coeff((0, 0, 1));
    if ulin.is_zero() {
        return Err(Error::NonInvertibleLinearPart(
            "u-component has vanishing u coefficient".into(),
        ));
    }
    let n = rhs.trunc.min(inner.z.trunc).min(inner.u.trunc);
    let zbar = inner.z.conj();
    let max_ij = n as usize;
    let zp = powers_real(&inner.z.truncate(n), max_ij as u32, n);
    let zbp = powers_real(&zbar.truncate(n), max_ij as u32, n);
    let up = powers_real(&inner.u.truncate(n), n / k, n);
    let zlin_c = zlin.conj();

    let mut composed: HashMap<Key3, Gq> = HashMap::new();
    let mut out = RealSeries3::zero(w, n);
    for d in 0..=n {
        for m in (0..=d / k).rev() {
            let s = d - k * m;
            // unknowns of this (d, m) block do not feed each other's
            // coefficients, so they are solved together and then composed
            let mut block = Vec::new();
            for a in 0..=s {
                let b = s - a;
                let key = (a, b, m);
                let mut target = rhs.coeff(key);
                if let Some(c) = composed.get(&key) {
                    target -= c;
                }
                if target.is_zero() {
                    continue;
                }
                let diag = &(&zlin.pow(a as i64) * &zlin_c.pow(b as i64)) * &ulin.pow(m as i64);
                block.push((key, &target / &diag));
            }
            let images = par::map(&block, |(key, x)| {
                let img = zp[key.0 as usize]
                    .mul_to(&zbp[key.1 as usize], n)
                    .mul_to(&up[key.2 as usize], n);
                img.scale(x)
            });
            for ((key, x), img) in block.into_iter().zip(images) {
                out.set(key, x);
                for (kk, v) in img.iter() {
                    *composed.entry(*kk).or_default() += v;
                }
            }
        }
    }
    Ok(out)
}
