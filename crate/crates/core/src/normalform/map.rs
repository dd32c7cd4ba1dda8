//! Formal maps `z* = z + f(z, w)`, `w* = w + g(z, w)` and their action on
//! defining functions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gq::{rat, GaussianRational as Gq, Rational};
use crate::hypersurface::Germ;
use crate::series::{compose_on_surface, implicit_solve, HoloSeries2, InnerMap, Weighting};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMap {
    f: HoloSeries2,
    g: HoloSeries2,
    weighting: Weighting,
}

impl FormalMap {
    pub fn new(f: HoloSeries2, g: HoloSeries2) -> Result<Self> {
        let weighting = f.weighting();
        if weighting != g.weighting() {
            return Err(Error::WeightMismatch(
                weighting.u_weight(),
                g.weighting().u_weight(),
            ));
        }
        if !f.coeff((0, 0)).is_zero() || !g.coeff((0, 0)).is_zero() {
            return Err(Error::NonGradedMap("map does not fix the origin".into()));
        }
        let k = weighting.u_weight();
        if let Some((key, _)) = g.iter().find(|(key, _)| key.1 == 0 && key.0 < k) {
            return Err(Error::NonGradedMap(format!(
                "g has the term z^{} of weight below {k}",
                key.0
            )));
        }
        let zlin = &Gq::one() + &f.coeff((1, 0));
        if zlin.is_zero() {
            return Err(Error::NonInvertibleLinearPart("dz*/dz vanishes".into()));
        }
        let wlin = &Gq::one() + &g.coeff((0, 1));
        if wlin.is_zero() || !wlin.is_real() {
            return Err(Error::NonInvertibleLinearPart(
                "dw*/dw must be real and nonzero".into(),
            ));
        }
        Ok(Self { f, g, weighting })
    }

    pub fn identity(weighting: Weighting, trunc: u32) -> Self {
        Self {
            f: HoloSeries2::zero(weighting, trunc),
            g: HoloSeries2::zero(weighting, trunc),
            weighting,
        }
    }

    /// `z* = β z`, `w* = δ w`.
    pub fn linear(weighting: Weighting, trunc: u32, beta: &Gq, delta: &Rational) -> Result<Self> {
        let f = HoloSeries2::monomial(weighting, trunc, (1, 0), beta - &Gq::one());
        let g = HoloSeries2::monomial(weighting, trunc, (0, 1), Gq::real(delta - Rational::from_integer(1.into())));
        Self::new(f, g)
    }

    pub fn f(&self) -> &HoloSeries2 {
        &self.f
    }

    pub fn g(&self) -> &HoloSeries2 {
        &self.g
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn trunc(&self) -> u32 {
        self.f.trunc().min(self.g.trunc())
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    pub fn truncate(&self, n: u32) -> Self {
        Self {
            f: self.f.truncate(n),
            g: self.g.truncate(n),
            weighting: self.weighting,
        }
    }

    /// The map `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FormalMap) -> Result<FormalMap> {
        let w = self.weighting;
        let n = self.trunc().min(first.trunc());
        let mut zs = first.f.truncate(n);
        zs.add_term((1, 0), &Gq::one());
        let mut ws = first.g.truncate(n);
        ws.add_term((0, 1), &Gq::one());
        let f = first.f.add(&self.f.substitute(&zs, &ws)?)?;
        let g = first.g.add(&self.g.substitute(&zs, &ws)?)?;
        debug_assert_eq!(f.weighting(), w);
        FormalMap::new(f.truncate(n), g.truncate(n))
    }
}

/// Applies a formal map to a germ: solves
/// `Φ*(z + f, z̄ + f̄, u + Re g) = Φ + Im g` with `f, g` evaluated at
/// `(z, u + iΦ)`.
pub fn transform(germ: &Germ, map: &FormalMap) -> Result<Germ> {
    let phi = germ.phi();
    if phi.weighting() != map.weighting {
        return Err(Error::WeightMismatch(
            phi.weighting().u_weight(),
            map.weighting.u_weight(),
        ));
    }
    let w = phi.weighting();
    let big_f = compose_on_surface(&map.f, phi)?;
    let big_g = compose_on_surface(&map.g, phi)?;
    let n = big_f.trunc().min(big_g.trunc());
    let mut z = big_f;
    z.add_term((1, 0, 0), &Gq::one());
    let mut u = big_g.re_part();
    u.add_term((0, 0, 1), &Gq::one());
    let rhs = phi.truncate(n).add(&big_g.im_part())?;
    let inner = InnerMap {
        z: z.truncate(n),
        u: u.truncate(n),
    };
    let solved = implicit_solve(&inner, &rhs)?;
    if let Some((i, j, m)) = solved.hermitian_defect() {
        return Err(Error::RealityViolation(i, j, m));
    }
    debug_assert_eq!(solved.weighting(), w);
    Germ::new(solved)
}

/// Element of the automorphism group of `v = |z|²`:
/// `z* = δ θ (z + a w) / D`, `w* = δ² w / D`,
/// `D = 1 - 2i ā z - (μ + i|a|²) w`, with `θ` an exact unit phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereAutomorphism {
    pub a: Gq,
    pub delta: Rational,
    pub theta: Gq,
    pub mu: Rational,
}

impl SphereAutomorphism {
    pub fn identity() -> Self {
        Self {
            a: Gq::zero(),
            delta: rat(1, 1),
            theta: Gq::one(),
            mu: rat(0, 1),
        }
    }

    pub fn to_map(&self, trunc: u32) -> Result<FormalMap> {
        if self.delta.is_zero() || self.theta.norm_sqr() != rat(1, 1) {
            return Err(Error::NonInvertibleLinearPart(
                "sphere automorphism needs δ ≠ 0 and |θ| = 1".into(),
            ));
        }
        let w = Weighting::levi();
        // 1 - D
        let mut e = HoloSeries2::zero(w, trunc);
        e.add_term((1, 0), &self.a.conj().scale(&rat(2, 1)).mul_i());
        e.add_term((0, 1), &Gq::new(self.mu.clone(), self.a.norm_sqr()));
        let inv_d = geometric(&e, trunc);
        let lead = self.theta.scale(&self.delta);
        let mut num_z = HoloSeries2::monomial(w, trunc, (1, 0), lead.clone());
        num_z.add_term((0, 1), &(&lead * &self.a));
        let num_w = HoloSeries2::monomial(w, trunc, (0, 1), Gq::real(&self.delta * &self.delta));
        let mut f = num_z.mul(&inv_d)?;
        f.add_term((1, 0), &Gq::from(-1));
        let mut g = num_w.mul(&inv_d)?;
        g.add_term((0, 1), &Gq::from(-1));
        FormalMap::new(f, g)
    }
}

/// `1 / (1 - e)` for `e` without constant term.
fn geometric(e: &HoloSeries2, trunc: u32) -> HoloSeries2 {
    let w = e.weighting();
    let mut acc = HoloSeries2::monomial(w, trunc, (0, 0), Gq::one());
    let mut pow = acc.clone();
    for _ in 0..trunc {
        pow = pow.mul(e).expect("same weighting");
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow).expect("same weighting");
    }
    acc
}

/// Element of the automorphism group of `v = |z|^{2l}`:
/// `z* = δ θ z (1 + μ w)^{-1/l}`, `w* = δ^{2l} w / (1 + μ w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularAutomorphism {
    pub delta: Rational,
    pub theta: Gq,
    pub mu: Rational,
    pub l: u32,
}

impl CircularAutomorphism {
    pub fn to_map(&self, trunc: u32) -> Result<FormalMap> {
        if self.delta <= Rational::zero() || self.theta.norm_sqr() != rat(1, 1) || self.l == 0 {
            return Err(Error::NonInvertibleLinearPart(
                "circular automorphism needs δ > 0, |θ| = 1 and l ≥ 1".into(),
            ));
        }
        let k = 2 * self.l;
        let w = Weighting::new(k)?;
        let lead = self.theta.scale(&self.delta);
        // (1 + μ w)^{-1/l} as a binomial series
        let expo = rat(-1, self.l as i64);
        let mut binom = Rational::from_integer(1.into());
        let mut f = HoloSeries2::zero(w, trunc);
        let mut n = 0u32;
        while 1 + k * n <= trunc {
            let c = &binom * num_traits::pow(self.mu.clone(), n as usize);
            f.add_term((1, n), &lead.scale(&c));
            binom = &binom * (&expo - rat(n as i64, 1)) / rat(n as i64 + 1, 1);
            n += 1;
        }
        f.add_term((1, 0), &Gq::from(-1));
        let dk = num_traits::pow(self.delta.clone(), k as usize);
        let mut g = HoloSeries2::zero(w, trunc);
        let mut n = 0u32;
        while k * (n + 1) <= trunc {
            let c = &dk * num_traits::pow(-self.mu.clone(), n as usize);
            g.add_term((0, n + 1), &Gq::real(c));
            n += 1;
        }
        g.add_term((0, 1), &Gq::from(-1));
        FormalMap::new(f, g)
    }
}
