//! Normal form condition sets as linear functionals on coefficient slots.

use std::fmt;

use crate::gq::{GaussianRational as Gq, Rational};
use crate::hypersurface::ModelPoly;
use crate::series::{Key3, RealSeries3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalCase {
    ChernMoser,
    Generic,
    Circular,
}

impl fmt::Display for NormalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalCase::ChernMoser => "ChernMoser",
            NormalCase::Generic => "Generic",
            NormalCase::Circular => "Circular",
        })
    }
}

/// A complex linear functional `Σ c · coeff(key)` on one weighted degree.
#[derive(Debug, Clone)]
pub struct Functional {
    pub family: usize,
    pub m: u32,
    pub terms: Vec<(Key3, Gq)>,
}

impl Functional {
    pub fn eval(&self, s: &RealSeries3) -> Gq {
        let mut acc = Gq::zero();
        for (key, c) in &self.terms {
            if let Some(v) = s.get(*key) {
                acc += &(c * v);
            }
        }
        acc
    }

    /// Sorted `(i, j, m)` of the single slot, or of the first slot for the
    /// scalar product condition.
    pub fn label(&self) -> Key3 {
        self.terms[0].0
    }
}

#[derive(Debug, Clone)]
enum Family {
    /// Slots `(i0 + j, j0, m)` for `j ≥ from`, or one fixed slot.
    Column { i0: u32, j0: u32, from: u32, open: bool },
    /// `(F_{k-1}, P_z)`.
    ScalarProduct(Vec<Gq>),
}

/// The condition families of one case, with their display ids.
#[derive(Debug, Clone)]
pub struct ConditionSet {
    pub case: NormalCase,
    k: u32,
    ids: Vec<String>,
    families: Vec<Family>,
}

impl ConditionSet {
    pub fn chern_moser() -> Self {
        let fams = vec![
            ("F_{j,0}", Family::Column { i0: 0, j0: 0, from: 0, open: true }),
            ("F_{1,j}", Family::Column { i0: 0, j0: 1, from: 1, open: true }),
            ("F_{2,2}", Family::Column { i0: 2, j0: 2, from: 0, open: false }),
            ("F_{3,3}", Family::Column { i0: 3, j0: 3, from: 0, open: false }),
            ("F_{3,2}", Family::Column { i0: 3, j0: 2, from: 0, open: false }),
        ];
        Self::build(NormalCase::ChernMoser, 2, fams)
    }

    pub fn generic(p: &ModelPoly) -> Self {
        let (k, l) = (p.k(), p.l());
        let weights: Vec<Gq> = (0..k)
            .map(|j| p.coeff(j + 1).conj().scale(&Rational::from_integer((j + 1).into())))
            .collect();
        let fams = vec![
            ("F_{j,0}".to_string(), Family::Column { i0: 0, j0: 0, from: 1, open: true }),
            (
                format!("F_{{{}+j,{l}}}", k - l),
                Family::Column { i0: k - l, j0: l, from: 1, open: true },
            ),
            (format!("F_{{{},{l}}}", k - l), Family::Column { i0: k - l, j0: l, from: 0, open: false }),
            (
                format!("F_{{{},{}}}", 2 * k - 2 * l, 2 * l),
                Family::Column { i0: 2 * k - 2 * l, j0: 2 * l, from: 0, open: false },
            ),
            ("(F_{k-1},P_z)".to_string(), Family::ScalarProduct(weights)),
        ];
        Self::build(NormalCase::Generic, k, fams)
    }

    pub fn circular(l: u32) -> Self {
        let fams = vec![
            ("F_{j,0}".to_string(), Family::Column { i0: 0, j0: 0, from: 0, open: true }),
            (format!("F_{{{l},{l}+j}}"), Family::Column { i0: 0, j0: l, from: l, open: true }),
            (format!("F_{{{},{}}}", 2 * l, 2 * l), Family::Column { i0: 2 * l, j0: 2 * l, from: 0, open: false }),
            (format!("F_{{{},{}}}", 3 * l, 3 * l), Family::Column { i0: 3 * l, j0: 3 * l, from: 0, open: false }),
            (
                format!("F_{{{},{}}}", 2 * l, 2 * l - 1),
                Family::Column { i0: 2 * l, j0: 2 * l - 1, from: 0, open: false },
            ),
        ];
        Self::build(NormalCase::Circular, 2 * l, fams)
    }

    fn build<S: Into<String>>(case: NormalCase, k: u32, fams: Vec<(S, Family)>) -> Self {
        let (ids, families) = fams.into_iter().map(|(s, f)| (s.into(), f)).unzip();
        Self {
            case,
            k,
            ids,
            families,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// All functionals living in weighted degree `d`.
    pub fn functionals(&self, d: u32) -> Vec<Functional> {
        let k = self.k;
        let mut out = Vec::new();
        for (fi, fam) in self.families.iter().enumerate() {
            match fam {
                Family::Column { i0, j0, from, open } => {
                    // slot (i, j0) with i = i0 + j; a `j`-sweep when open
                    let mut push = |i: u32| {
                        let base = i + j0;
                        if base <= d && (d - base) % k == 0 {
                            let key = (i.max(*j0), i.min(*j0), (d - base) / k);
                            out.push(Functional {
                                family: fi,
                                m: key.2,
                                terms: vec![(key, Gq::one())],
                            });
                        }
                    };
                    if *open {
                        let mut i = i0 + from;
                        while i + j0 <= d {
                            push(i);
                            i += 1;
                        }
                    } else {
                        push(*i0);
                    }
                }
                Family::ScalarProduct(w) => {
                    if d + 1 >= k && (d + 1 - k) % k == 0 {
                        let m = (d + 1 - k) / k;
                        let terms: Vec<(Key3, Gq)> = (1..k - 1)
                            .filter(|&j| !w[j as usize].is_zero())
                            .map(|j| ((j, k - 1 - j, m), w[j as usize].clone()))
                            .collect();
                        if !terms.is_empty() {
                            out.push(Functional { family: fi, m, terms });
                        }
                    }
                }
            }
        }
        out
    }

    /// Residuals of every family on `f` for degrees `from..=to`.
    pub fn certify(&self, f: &RealSeries3, from: u32, to: u32) -> Vec<ConditionCertificate> {
        let mut certs: Vec<ConditionCertificate> = self
            .ids
            .iter()
            .map(|id| ConditionCertificate {
                id: id.clone(),
                residuals: Vec::new(),
                all_zero: true,
            })
            .collect();
        for d in from..=to {
            for func in self.functionals(d) {
                let v = func.eval(f);
                let c = &mut certs[func.family];
                if !v.is_zero() {
                    c.all_zero = false;
                }
                c.residuals.push((func.label(), v));
            }
        }
        certs
    }
}

/// Residual values of one condition family over the certified range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCertificate {
    pub id: String,
    pub residuals: Vec<(Key3, Gq)>,
    pub all_zero: bool,
}
