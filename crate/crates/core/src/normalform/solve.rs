//! Degree-by-degree normalization.
//!
//! At weighted degree `d > k` a map piece `f` of weight `d - k + 1` and `g`
//! of weight `d` changes the defining function by `Φ*_d = Φ_d - L(f, g)_d`,
//! so each degree is a finite real linear system in the piece's
//! coefficients. Free variables are set to zero, which fixes the gauge.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::hypersurface::{
    levi_sign, remove_harmonics, Germ, HarmonicRemoval, LinearSymmetry, ModelClass, ModelPoly,
};
use crate::linalg;
use crate::normalform::conditions::{ConditionCertificate, ConditionSet, NormalCase};
use crate::normalform::map::{transform, CircularAutomorphism, FormalMap, SphereAutomorphism};
use crate::normalform::operator::gcm_operator;
use crate::par;
use crate::series::{HoloSeries2, RealSeries3, Weighting};

/// One real unknown of a degree system: the real or imaginary part of a
/// coefficient of `f` or `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unknown {
    pub in_g: bool,
    pub key: (u32, u32),
    pub imaginary: bool,
}

impl Unknown {
    fn unit(&self) -> Gq {
        if self.imaginary {
            Gq::i()
        } else {
            Gq::one()
        }
    }
}

/// Unknowns at degree `d`: all of `g` first, then `f`, each ordered by the
/// power of `w` and then of `z`. Trailing columns become the free ones.
pub fn unknowns(k: u32, d: u32) -> Vec<Unknown> {
    let mut out = Vec::new();
    for (in_g, weight) in [(true, d), (false, d + 1 - k)] {
        for b in 0..=weight / k {
            let key = (weight - k * b, b);
            for imaginary in [false, true] {
                out.push(Unknown {
                    in_g,
                    key,
                    imaginary,
                });
            }
        }
    }
    out
}

/// The linear system of one degree: `matrix · x = rhs`.
#[derive(Debug, Clone)]
pub struct DegreeSystem {
    pub k: u32,
    pub degree: u32,
    pub unknowns: Vec<Unknown>,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

fn split_rows(values: &[Gq]) -> Vec<Rational> {
    values
        .iter()
        .flat_map(|v| [v.re.clone(), v.im.clone()])
        .collect()
}

/// Builds the system at degree `d` for the current defining function.
pub fn degree_system(
    phi: &RealSeries3,
    model: &ModelPoly,
    set: &ConditionSet,
    d: u32,
) -> Result<DegreeSystem> {
    let k = model.k();
    let w = Weighting::new(k)?;
    let funcs = set.functionals(d);
    let unk = unknowns(k, d);
    let cols: Vec<Result<Vec<Rational>>> = par::map(&unk, |u| {
        let e = HoloSeries2::monomial(w, d, u.key, u.unit());
        let zero = HoloSeries2::zero(w, d);
        let (f, g) = if u.in_g { (zero, e) } else { (e, zero) };
        let image = gcm_operator(&f, &g, model)?;
        Ok(split_rows(&funcs.iter().map(|fc| fc.eval(&image)).collect::<Vec<_>>()))
    });
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    let nrows = 2 * funcs.len();
    let matrix = (0..nrows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let rhs = split_rows(&funcs.iter().map(|fc| fc.eval(phi)).collect::<Vec<_>>());
    Ok(DegreeSystem {
        k,
        degree: d,
        unknowns: unk,
        matrix,
        rhs,
    })
}

impl DegreeSystem {
    /// Solves in the canonical gauge and returns the map piece.
    pub fn solve(&self, trunc: u32) -> Result<DegreeStep> {
        let n = self.unknowns.len();
        let sol = linalg::solve(&self.matrix, &self.rhs, n);
        let Some(x) = sol.x else {
            let mut aug = self.matrix.clone();
            for (row, b) in aug.iter_mut().zip(&self.rhs) {
                row.push(b.clone());
            }
            let defect = linalg::rank(&aug, n + 1) - sol.rank;
            return Err(Error::SingularSystem {
                degree: self.degree,
                defect,
            });
        };
        let w = Weighting::new(self.k)?;
        let mut f = HoloSeries2::zero(w, trunc);
        let mut g = HoloSeries2::zero(w, trunc);
        for (u, v) in self.unknowns.iter().zip(&x) {
            if v.is_zero() {
                continue;
            }
            let c = u.unit().scale(v);
            if u.in_g {
                g.add_term(u.key, &c);
            } else {
                f.add_term(u.key, &c);
            }
        }
        Ok(DegreeStep {
            degree: self.degree,
            f,
            g,
            rank: sol.rank,
            unknowns: n,
        })
    }
}

/// The map piece found at one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStep {
    pub degree: u32,
    pub f: HoloSeries2,
    pub g: HoloSeries2,
    pub rank: usize,
    pub unknowns: usize,
}

impl DegreeStep {
    pub fn is_trivial(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct NormalFormReport {
    pub case: NormalCase,
    /// Model after normalization of its leading coefficient.
    pub model: ModelPoly,
    /// Harmonic removal `w* = w + Σ α_d z^d`, in its own grading.
    pub prep: FormalMap,
    /// Map from the harmonic-free germ to the normal form, `u_weight = k`.
    pub map: FormalMap,
    pub normalized: Germ,
    pub conditions: Vec<ConditionCertificate>,
    pub order: u32,
    pub steps: Vec<DegreeStep>,
}

impl NormalFormReport {
    pub fn k(&self) -> u32 {
        self.model.k()
    }

    pub fn l(&self) -> u32 {
        self.model.l()
    }

    pub fn all_conditions_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.all_zero)
    }

    /// `F = Φ* - P` of the normal form.
    pub fn remainder(&self) -> RealSeries3 {
        self.normalized
            .phi()
            .sub(&self.model.to_series(self.order))
            .expect("same grading")
    }

    /// Applies `prep` and then `map` to `original`, to the report's order.
    pub fn replay(&self, original: &Germ) -> Result<Germ> {
        let w0 = self.prep.weighting();
        let start = if original.weighting() == w0 {
            original.clone()
        } else {
            original.reweight(w0)
        };
        let prepared = transform(&start, &self.prep)?.reweight(self.map.weighting());
        if prepared.source_trunc() < self.order {
            return Err(Error::TruncationTooLow {
                requested: self.order,
                available: prepared.source_trunc(),
            });
        }
        Ok(transform(&prepared.truncate(self.order), &self.map)?.truncate(self.order))
    }
}

fn check_order(g: &Germ, order: u32) -> Result<()> {
    if order > g.source_trunc() {
        return Err(Error::TruncationTooLow {
            requested: order,
            available: g.source_trunc(),
        });
    }
    Ok(())
}

fn harmonic_free(g: &Germ, order: u32) -> Result<HarmonicRemoval> {
    check_order(g, order)?;
    let h = remove_harmonics(g, order.max(2).min(g.source_trunc()))?.finite()?;
    check_order(&h.germ, order)?;
    Ok(h)
}

fn wrong_case(expected: &str, found: &ModelPoly) -> Error {
    let found = if found.k() == 2 {
        "Levi nondegenerate".to_string()
    } else {
        found.klass().to_string()
    };
    Error::WrongCase {
        expected: expected.into(),
        found,
    }
}

/// Normalizes `Φ` so that the remainder over `v = |z|²` satisfies
/// `F_{j0} = F_{1j} = F_{22} = F_{33} = F_{32} = 0` up to `order`.
pub fn chern_moser_normalize(g: &Germ, order: u32) -> Result<NormalFormReport> {
    check_order(g, order)?;
    if levi_sign(g).0 == 0 {
        return Err(Error::LeviDegenerate);
    }
    let h = harmonic_free(g, order)?;
    normalize_prepared(h, order, NormalCase::ChernMoser)
}

pub fn generic_normalize(g: &Germ, order: u32) -> Result<NormalFormReport> {
    let h = harmonic_free(g, order)?;
    if h.k == 2 || h.model.klass() != ModelClass::Generic {
        return Err(wrong_case("Generic", &h.model));
    }
    normalize_prepared(h, order, NormalCase::Generic)
}

pub fn circular_normalize(g: &Germ, order: u32) -> Result<NormalFormReport> {
    let h = harmonic_free(g, order)?;
    if h.k == 2 || h.model.klass() != ModelClass::Circular {
        return Err(wrong_case("Circular", &h.model));
    }
    normalize_prepared(h, order, NormalCase::Circular)
}

/// Normal forms of tubular models are not provided.
pub fn tubular_normalize(_g: &Germ, _order: u32) -> Result<NormalFormReport> {
    Err(Error::TubularUnsupported)
}

/// Removes harmonics, determines the model and dispatches on its class.
pub fn normalize(g: &Germ, order: u32) -> Result<NormalFormReport> {
    let h = harmonic_free(g, order)?;
    let case = if h.k == 2 {
        NormalCase::ChernMoser
    } else {
        match h.model.klass() {
            ModelClass::Circular => NormalCase::Circular,
            ModelClass::Generic => NormalCase::Generic,
            ModelClass::Tubular => return Err(Error::TubularUnsupported),
        }
    };
    normalize_prepared(h, order, case)
}

fn condition_set(case: NormalCase, model: &ModelPoly) -> ConditionSet {
    match case {
        NormalCase::ChernMoser => ConditionSet::chern_moser(),
        NormalCase::Generic => ConditionSet::generic(model),
        NormalCase::Circular => ConditionSet::circular(model.l()),
    }
}

fn normalize_prepared(h: HarmonicRemoval, order: u32, case: NormalCase) -> Result<NormalFormReport> {
    let k = h.k;
    let w = Weighting::new(k)?;
    let germ = h.germ.truncate(order);
    // w* = w / a_l makes the leading coefficient one in the circular and
    // Levi nondegenerate cases
    let scale = match case {
        NormalCase::Generic => FormalMap::identity(w, order),
        _ => {
            let a = h.model.coeff(h.model.l()).re.clone();
            FormalMap::linear(w, order, &Gq::one(), &a.recip())?
        }
    };
    let scaled = if scale.is_identity() {
        germ
    } else {
        transform(&germ, &scale)?
    };
    let model = ModelPoly::from_series(scaled.phi(), k)?;
    let set = condition_set(case, &model);
    let (normalized, map, steps) = run_degrees(scaled, &model, &set, order, scale)?;
    finish(case, model, h.map, map, normalized, &set, order, steps)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    case: NormalCase,
    model: ModelPoly,
    prep: FormalMap,
    map: FormalMap,
    normalized: Germ,
    set: &ConditionSet,
    order: u32,
    steps: Vec<DegreeStep>,
) -> Result<NormalFormReport> {
    let rem = normalized.phi().sub(&model.to_series(order))?;
    let conditions = set.certify(&rem, 0, order);
    Ok(NormalFormReport {
        case,
        model,
        prep,
        map,
        normalized,
        conditions,
        order,
        steps,
    })
}

/// Solves degrees `k + 1..=order` starting from a germ whose weight-`k`
/// part is the model, composing pieces onto `initial`.
fn run_degrees(
    mut cur: Germ,
    model: &ModelPoly,
    set: &ConditionSet,
    order: u32,
    initial: FormalMap,
) -> Result<(Germ, FormalMap, Vec<DegreeStep>)> {
    let k = model.k();
    let mut total = initial;
    let mut steps = Vec::new();
    for d in k + 1..=order {
        let step = degree_system(cur.phi(), model, set, d)?.solve(order)?;
        if !step.is_trivial() {
            let piece = FormalMap::new(step.f.clone(), step.g.clone())?;
            cur = transform(&cur, &piece)?;
            total = piece.after(&total)?;
        }
        steps.push(step);
    }
    Ok((cur, total, steps))
}

/// An element of the model's symmetry group.
#[derive(Debug, Clone)]
pub enum Symmetry {
    Sphere(SphereAutomorphism),
    Circular(CircularAutomorphism),
    Linear(LinearSymmetry),
}

/// Moves a normal form along the symmetry group: applies `h` and
/// renormalizes, which yields another normal form of the same germ.
pub fn apply_symmetry(report: &NormalFormReport, h: &Symmetry) -> Result<NormalFormReport> {
    let n = report.order;
    let w = report.map.weighting();
    let hmap = match (report.case, h) {
        (NormalCase::ChernMoser, Symmetry::Sphere(s)) => s.to_map(n)?,
        (NormalCase::Circular, Symmetry::Circular(c)) if c.l == report.l() => c.to_map(n)?,
        (NormalCase::Generic | NormalCase::Circular, Symmetry::Linear(s))
            if s.preserves(&report.model) =>
        {
            s.to_map(w, n)?
        }
        (case, h) => {
            return Err(Error::CaseMismatch(format!(
                "{h:?} does not act on {case} normal forms of {}",
                report.model
            )))
        }
    };
    let moved = transform(&report.normalized, &hmap)?;
    if moved.phi().homogeneous_part(report.k()) != report.model.to_series(n) {
        return Err(Error::CaseMismatch("symmetry does not preserve the model".into()));
    }
    let set = condition_set(report.case, &report.model);
    let start = hmap.after(&report.map)?;
    let (normalized, map, steps) = run_degrees(moved, &report.model, &set, n, start)?;
    finish(
        report.case,
        report.model.clone(),
        report.prep.clone(),
        map,
        normalized,
        &set,
        n,
        steps,
    )
}
