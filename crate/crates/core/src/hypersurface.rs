//! Pointwise invariants of a germ `v = Φ(z, z̄, u)`: Levi form, type,
//! harmonic removal, the model polynomial and its linear symmetries.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::normalform::map::{transform, FormalMap};
use crate::series::{HoloSeries2, RealSeries3, Weighting};

/// A hypersurface germ through the origin with tangent plane `v = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct Germ {
    phi: RealSeries3,
}

impl Germ {
    pub fn new(phi: RealSeries3) -> Result<Self> {
        phi.ensure_hermitian()?;
        for key in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)] {
            if !phi.coeff(key).is_zero() {
                return Err(Error::IllFormedSurface(format!(
                    "defining function has a constant or linear term at {key:?}"
                )));
            }
        }
        Ok(Self { phi })
    }

    pub fn phi(&self) -> &RealSeries3 {
        &self.phi
    }

    pub fn into_phi(self) -> RealSeries3 {
        self.phi
    }

    pub fn source_trunc(&self) -> u32 {
        self.phi.trunc()
    }

    pub fn weighting(&self) -> Weighting {
        self.phi.weighting()
    }

    pub fn reweight(&self, w: Weighting) -> Germ {
        Germ {
            phi: self.phi.reweight(w),
        }
    }

    pub fn truncate(&self, n: u32) -> Germ {
        Germ {
            phi: self.phi.truncate(n),
        }
    }
}

impl fmt::Debug for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Germ({:?})", self.phi)
    }
}

/// Sign and value of the Levi form, the coefficient of `z z̄`.
pub fn levi_sign(g: &Germ) -> (i8, Rational) {
    let a = g.phi.coeff((1, 1, 0)).re;
    let s = if a.is_zero() {
        0
    } else if a.is_positive() {
        1
    } else {
        -1
    };
    (s, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelClass {
    Circular,
    Tubular,
    Generic,
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelClass::Circular => "circular",
            ModelClass::Tubular => "tubular",
            ModelClass::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Homogeneous model `P = Σ_{j=1}^{k-1} a_j z^j z̄^{k-j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPoly {
    k: u32,
    a: Vec<Gq>,
    l: u32,
    klass: ModelClass,
}

impl ModelPoly {
    /// `coeffs[j]` is `a_j` for `j = 0..=k`; the harmonic ends must vanish.
    pub fn new(coeffs: Vec<Gq>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidModel("degree must be at least 2".into()));
        }
        let k = (coeffs.len() - 1) as u32;
        if !coeffs[0].is_zero() || !coeffs[k as usize].is_zero() {
            return Err(Error::InvalidModel("model has a harmonic term".into()));
        }
        for j in 0..=k as usize {
            if coeffs[j] != coeffs[k as usize - j].conj() {
                return Err(Error::InvalidModel(format!(
                    "a_{j} is not the conjugate of a_{}",
                    k as usize - j
                )));
            }
        }
        let l = essential_index(&coeffs)
            .ok_or_else(|| Error::InvalidModel("model polynomial vanishes".into()))?;
        let mut p = Self {
            k,
            a: coeffs,
            l,
            klass: ModelClass::Generic,
        };
        p.klass = classify_coefficients(&p.a, k, l);
        Ok(p)
    }

    pub fn from_series(phi: &RealSeries3, k: u32) -> Result<Self> {
        Self::new((0..=k).map(|j| phi.coeff((j, k - j, 0))).collect())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn klass(&self) -> ModelClass {
        self.klass
    }

    pub fn coeff(&self, j: u32) -> &Gq {
        &self.a[j as usize]
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.a
    }

    /// The model as a series in the grading `u_weight = k`.
    pub fn to_series(&self, trunc: u32) -> RealSeries3 {
        let w = Weighting::new(self.k).expect("k >= 2");
        RealSeries3::from_terms(
            w,
            trunc,
            (1..self.k).map(|j| ((j, self.k - j, 0), self.a[j as usize].clone())),
        )
    }

    pub fn to_germ(&self, trunc: u32) -> Germ {
        Germ::new(self.to_series(trunc)).expect("models are real")
    }
}

impl fmt::Display for ModelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in 1..self.k {
            let c = &self.a[j as usize];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) z^{j} zb^{}", self.k - j)?;
        }
        Ok(())
    }
}

fn essential_index(a: &[Gq]) -> Option<u32> {
    a.iter().position(|c| !c.is_zero()).map(|j| j as u32)
}

/// Lowest index with `a_l ≠ 0`.
pub fn essential_type(p: &ModelPoly) -> u32 {
    p.l
}

pub fn classify_model(p: &ModelPoly) -> ModelClass {
    p.klass
}

fn binomial(n: u32, r: u32) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for i in 0..r {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

fn classify_coefficients(a: &[Gq], k: u32, l: u32) -> ModelClass {
    let support: Vec<u32> = (1..k).filter(|&j| !a[j as usize].is_zero()).collect();
    if 2 * l == k && support == [l] {
        return ModelClass::Circular;
    }
    // P(βz) ∝ non-harmonic part of (Re z)^k forces a_j / C(k, j) to be a
    // geometric sequence with unimodular ratio
    if support.len() as u32 == k - 1 {
        let b: Vec<Gq> = (1..k)
            .map(|j| a[j as usize].scale(&binomial(k, j).recip()))
            .collect();
        let q = &b[1] / &b[0];
        let geometric = b.windows(2).all(|w| &w[0] * &q == w[1]);
        if geometric && q.norm_sqr() == Rational::from_integer(1.into()) {
            return ModelClass::Tubular;
        }
    }
    ModelClass::Generic
}

/// `z* = β z`, `w* = δ w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSymmetry {
    pub beta: Gq,
    pub delta: Rational,
}

impl LinearSymmetry {
    pub fn preserves(&self, p: &ModelPoly) -> bool {
        let k = p.k as i64;
        (1..p.k).all(|j| {
            let j = j as i64;
            let lhs = &(&p.a[j as usize] * &self.beta.pow(j)) * &self.beta.conj().pow(k - j);
            lhs == p.a[j as usize].scale(&self.delta)
        })
    }

    pub fn to_map(&self, w: Weighting, trunc: u32) -> Result<FormalMap> {
        FormalMap::linear(w, trunc, &self.beta, &self.delta)
    }
}

/// Description of the linear group `H` preserving a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSymmetries {
    /// Real dimension of `H`.
    pub dimension: u32,
    /// Order of the group of admissible phases `ω` in `β = r ω`; zero when
    /// every phase is admissible.
    pub phase_order: u32,
    /// Exact constraint on `(β, δ)`.
    pub constraint: String,
    /// Generators with Gaussian-rational parameters.
    pub generators: Vec<LinearSymmetry>,
}

pub fn model_symmetries(p: &ModelPoly) -> ModelSymmetries {
    let k = p.k;
    let two = Rational::from_integer(2.into());
    let scale = LinearSymmetry {
        beta: Gq::from(2),
        delta: num_traits::pow(two.clone(), k as usize),
    };
    if p.klass == ModelClass::Circular {
        return ModelSymmetries {
            dimension: 2,
            phase_order: 0,
            constraint: format!("beta arbitrary nonzero, delta = |beta|^{k}"),
            generators: vec![
                scale,
                LinearSymmetry {
                    beta: Gq::i(),
                    delta: Rational::from_integer(1.into()),
                },
            ],
        };
    }
    let exps: Vec<i64> = (1..k)
        .filter(|&j| !p.a[j as usize].is_zero())
        .map(|j| 2 * j as i64 - k as i64)
        .collect();
    let e1 = exps[0];
    let diffs = exps.iter().fold(0i64, |g, e| g.gcd(&(e - e1)));
    let order = diffs.gcd(&(2 * e1)).unsigned_abs() as u32;
    let mut generators = vec![scale];
    let el = 2 * p.l as i64 - k as i64;
    for (n, omega) in [(4u32, Gq::i()), (2, Gq::from(-1))] {
        if order % n == 0 {
            let d = omega.pow(el);
            generators.push(LinearSymmetry {
                beta: omega,
                delta: d.re,
            });
            break;
        }
    }
    let mut constraint = format!(
        "beta = r*omega with r > 0, omega^{order} = 1; delta = r^{k} * omega^({el})"
    );
    if order > 4 || (order == 3) {
        constraint.push_str("; irrational phases are not listed as generators");
    }
    ModelSymmetries {
        dimension: 1,
        phase_order: order,
        constraint,
        generators,
    }
}

/// Result of harmonic removal.
#[derive(Debug, Clone)]
pub enum HarmonicOutcome {
    Finite(HarmonicRemoval),
    /// No non-harmonic term at `u = 0` up to the given degree.
    InfiniteTypeWithinTruncation { checked_to: u32 },
}

#[derive(Debug, Clone)]
pub struct HarmonicRemoval {
    pub k: u32,
    pub model: ModelPoly,
    /// The transformed germ in the grading `u_weight = k`.
    pub germ: Germ,
    /// `w* = w + Σ α_i z^i`, in the grading used to apply it.
    pub map: FormalMap,
}

impl HarmonicOutcome {
    pub fn finite(self) -> Result<HarmonicRemoval> {
        match self {
            HarmonicOutcome::Finite(h) => Ok(h),
            HarmonicOutcome::InfiniteTypeWithinTruncation { checked_to } => {
                Err(Error::InfiniteType(checked_to))
            }
        }
    }
}

/// Eliminates harmonic terms at `u = 0` degree by degree until the first
/// non-harmonic term appears; its degree is the type.
pub fn remove_harmonics(g: &Germ, max_k: u32) -> Result<HarmonicOutcome> {
    if max_k > g.source_trunc() {
        return Err(Error::TruncationTooLow {
            requested: max_k,
            available: g.source_trunc(),
        });
    }
    let w_in = g.weighting();
    let mut current = g.clone();
    let mut alphas: Vec<(u32, Gq)> = Vec::new();
    let mut found = None;
    for d in 2..=max_k {
        if d > current.source_trunc() {
            break;
        }
        let c = current.phi.coeff((d, 0, 0));
        if !c.is_zero() {
            // Im(α z^d) contributes α/2i to z^d
            let alpha = c.mul_i().scale(&Rational::from_integer((-2).into()));
            if alphas.is_empty() && d < w_in.u_weight() {
                current = current.reweight(Weighting::new(d)?);
            }
            let w = current.weighting();
            let n = current.source_trunc();
            let step = FormalMap::new(
                HoloSeries2::zero(w, n),
                HoloSeries2::monomial(w, n, (d, 0), alpha.clone()),
            )?;
            current = transform(&current, &step)?;
            alphas.push((d, alpha));
        }
        if d > current.source_trunc() {
            break;
        }
        if (1..d).any(|i| !current.phi.coeff((i, d - i, 0)).is_zero()) {
            found = Some(d);
            break;
        }
    }
    let Some(k) = found else {
        let checked_to = max_k.min(current.source_trunc());
        return Ok(HarmonicOutcome::InfiniteTypeWithinTruncation { checked_to });
    };
    let w = current.weighting();
    let n = current.source_trunc();
    let map = FormalMap::new(
        HoloSeries2::zero(w, n),
        HoloSeries2::from_terms(w, n, alphas.into_iter().map(|(d, a)| ((d, 0), a))),
    )?;
    let model = ModelPoly::from_series(current.phi(), k)?;
    let germ = current.reweight(Weighting::new(k)?);
    Ok(HarmonicOutcome::Finite(HarmonicRemoval {
        k,
        model,
        germ,
        map,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gq::rat;

    fn germ(w: u32, n: u32, terms: &[((u32, u32, u32), Gq)]) -> Germ {
        Germ::new(RealSeries3::from_terms(
            Weighting::new(w).unwrap(),
            n,
            terms.iter().cloned(),
        ))
        .unwrap()
    }

    fn model(a: &[i64]) -> ModelPoly {
        ModelPoly::new(a.iter().map(|&x| Gq::from(x)).collect()).unwrap()
    }

    #[test]
    fn levi_examples() {
        assert_eq!(levi_sign(&germ(2, 4, &[((1, 1, 0), Gq::one())])).0, 1);
        let g = germ(2, 4, &[((1, 1, 0), Gq::from(-1)), ((2, 2, 0), Gq::one())]);
        assert_eq!(levi_sign(&g), (-1, rat(-1, 1)));
        assert_eq!(levi_sign(&germ(2, 4, &[((2, 2, 0), Gq::one())])).0, 0);
    }

    #[test]
    fn germ_rejects_linear_terms() {
        let phi = RealSeries3::monomial(Weighting::levi(), 4, (0, 0, 1), Gq::one());
        assert!(matches!(Germ::new(phi), Err(Error::IllFormedSurface(_))));
        let phi = RealSeries3::monomial(Weighting::levi(), 4, (2, 1, 0), Gq::one());
        assert!(matches!(Germ::new(phi), Err(Error::NotHermitian(..))));
    }

    #[test]
    fn sphere_has_type_two() {
        let g = germ(2, 6, &[((1, 1, 0), Gq::one())]);
        let h = remove_harmonics(&g, 6).unwrap().finite().unwrap();
        assert_eq!(h.k, 2);
        assert!(h.map.is_identity());
        assert_eq!(h.model, model(&[0, 1, 0]));
    }

    #[test]
    fn harmonic_removal_example() {
        let half = Gq::real(rat(1, 2));
        let g = germ(
            2,
            8,
            &[
                ((2, 0, 0), half.clone()),
                ((0, 2, 0), half),
                ((2, 2, 0), Gq::one()),
                ((3, 3, 0), Gq::one()),
            ],
        );
        let h = remove_harmonics(&g, 6).unwrap().finite().unwrap();
        assert_eq!(h.k, 4);
        assert_eq!(h.model, model(&[0, 0, 1, 0, 0]));
        // substitution oracle: applying w* = w + α z² to the input by hand
        // must cancel Re z², so α/2i = -1/2
        assert_eq!(h.map.g().coeff((2, 0)), -Gq::i());
        for d in 2..=4 {
            assert!(h.germ.phi().coeff((d, 0, 0)).is_zero());
        }
    }

    #[test]
    fn infinite_type_within_truncation() {
        let g = germ(2, 8, &[((1, 1, 1), Gq::one())]);
        let out = remove_harmonics(&g, 8).unwrap();
        assert!(matches!(
            out,
            HarmonicOutcome::InfiniteTypeWithinTruncation { checked_to: 8 }
        ));
        assert!(matches!(remove_harmonics(&g, 9), Err(Error::TruncationTooLow { .. })));
    }

    #[test]
    fn essential_types() {
        assert_eq!(essential_type(&model(&[0, 0, 1, 0, 0])), 2);
        assert_eq!(essential_type(&model(&[0, 1, 0, 1, 0])), 1);
        assert_eq!(essential_type(&model(&[0, 0, 1, 3, 1, 0, 0])), 2);
    }

    #[test]
    fn model_classes() {
        assert_eq!(classify_model(&model(&[0, 0, 1, 0, 0])), ModelClass::Circular);
        let tub = ModelPoly::new(vec![
            Gq::zero(),
            Gq::real(rat(4, 16)),
            Gq::real(rat(6, 16)),
            Gq::real(rat(4, 16)),
            Gq::zero(),
        ])
        .unwrap();
        assert_eq!(classify_model(&tub), ModelClass::Tubular);
        assert_eq!(classify_model(&model(&[0, 1, 3, 1, 0])), ModelClass::Generic);
        // rotated tube: (Re(i z))^4 has alternating signs
        assert_eq!(classify_model(&model(&[0, -4, 6, -4, 0])), ModelClass::Tubular);
    }

    #[test]
    fn invalid_models() {
        assert!(ModelPoly::new(vec![Gq::zero(), Gq::i(), Gq::zero()]).is_err());
        assert!(ModelPoly::new(vec![Gq::one(), Gq::zero(), Gq::one()]).is_err());
        assert!(ModelPoly::new(vec![Gq::zero(); 4]).is_err());
    }

    #[test]
    fn symmetry_groups() {
        let circ = model_symmetries(&model(&[0, 0, 1, 0, 0]));
        assert_eq!(circ.dimension, 2);
        let p = model(&[0, 1, 0, 1, 0]);
        let s = model_symmetries(&p);
        assert_eq!((s.dimension, s.phase_order), (1, 4));
        assert!(s.generators.iter().all(|h| h.preserves(&p)));
        assert!(s.generators.iter().any(|h| h.beta == Gq::i() && h.delta == rat(-1, 1)));
        let p5 = model(&[0, 0, 1, 1, 0, 0]);
        let s5 = model_symmetries(&p5);
        assert_eq!((s5.dimension, s5.phase_order), (1, 2));
        assert!(s5.generators.iter().all(|h| h.preserves(&p5)));
        let rot = LinearSymmetry {
            beta: Gq::i(),
            delta: rat(1, 1),
        };
        assert!(!rot.preserves(&p5));
    }
}
