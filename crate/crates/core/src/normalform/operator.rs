//! Linearized normalization operators and the model scalar product.

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::hypersurface::ModelPoly;
use crate::series::{compose_on_surface, HoloSeries2, RealSeries3, Weighting};

/// `L(f, g) = Re(2 z̄ f(z, u + i|z|²) + i g(z, u + i|z|²))`.
pub fn cm_operator(f: &HoloSeries2, g: &HoloSeries2) -> Result<RealSeries3> {
    if f.weighting().u_weight() != 2 {
        return Err(Error::WeightMismatch(f.weighting().u_weight(), 2));
    }
    let sphere = ModelPoly::new(vec![Gq::zero(), Gq::one(), Gq::zero()])?;
    gcm_operator(f, g, &sphere)
}

/// `L(f, g) = Re(i g(z, u + iP) + 2 P_z f(z, u + iP))`.
pub fn gcm_operator(f: &HoloSeries2, g: &HoloSeries2, p: &ModelPoly) -> Result<RealSeries3> {
    let w = f.weighting();
    if w != g.weighting() {
        return Err(Error::WeightMismatch(w.u_weight(), g.weighting().u_weight()));
    }
    if w.u_weight() != p.k() {
        return Err(Error::WeightMismatch(w.u_weight(), p.k()));
    }
    let n = f.trunc().min(g.trunc());
    let model = p.to_series(n);
    let fs = compose_on_surface(f, &model)?;
    let gs = compose_on_surface(g, &model)?;
    let pz = model_dz(p, w, n);
    let two = Gq::from(2);
    let inner = gs.scale(&Gq::i()).add(&pz.mul(&fs)?.scale(&two))?;
    Ok(inner.re_part())
}

/// `∂P/∂z`.
pub fn model_dz(p: &ModelPoly, w: Weighting, trunc: u32) -> RealSeries3 {
    let k = p.k();
    RealSeries3::from_terms(
        w,
        trunc,
        (1..k).map(|j| {
            let c = p.coeff(j).scale(&Rational::from_integer(j.into()));
            ((j - 1, k - j, 0), c)
        }),
    )
}

/// `(Q, S) = Σ_{j=1}^{k-2} q_j conj(s_j)` for coefficient lists indexed by
/// the power of `z` in `z^j z̄^{k-1-j}`; the harmonic ends are ignored.
pub fn scalar_product(q: &[Gq], s: &[Gq]) -> Result<Gq> {
    if q.len() != s.len() {
        return Err(Error::DegreeMismatch(q.len(), s.len()));
    }
    let mut acc = Gq::zero();
    for j in 1..q.len().saturating_sub(1) {
        acc += &(&q[j] * &s[j].conj());
    }
    Ok(acc)
}

/// Coefficient list of `P_z`, indexed like [`scalar_product`] expects.
pub fn model_dz_coeffs(p: &ModelPoly) -> Vec<Gq> {
    let k = p.k();
    (0..k)
        .map(|j| p.coeff(j + 1).scale(&Rational::from_integer((j + 1).into())))
        .collect()
}
