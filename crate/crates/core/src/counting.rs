//! Coefficient counting for the contact-matching problem and its
//! linearization at the identity map.

use std::fmt;

use crate::error::{Error, Result};
use crate::gq::{GaussianRational as Gq, Rational};
use crate::hypersurface::Germ;
use crate::linalg;
use crate::par;
use crate::series::{compose_on_surface, HoloSeries2, Key3, RealSeries3, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRow {
    pub n: u64,
    /// Real coefficients of a defining function of order at most `n`.
    pub surface: u64,
    /// Real coefficients of a map `(z, w) ↦ (z + f, w + g)` of order at most `n`.
    pub map: u64,
    /// Whether the map has at least as many coefficients as the surface.
    pub solvable_expected: bool,
}

impl fmt::Display for CountRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.n, self.surface, self.map, self.solvable_expected)
    }
}

pub fn count_row(n: u64) -> CountRow {
    let surface = (n + 1) * (n + 2) * (n + 3) / 6 - 1;
    let map = 2 * n * n + 6 * n;
    CountRow {
        n,
        surface,
        map,
        solvable_expected: surface <= map,
    }
}

/// Rows for `n = 1..=max_n`.
pub fn count_table(max_n: u64) -> Vec<CountRow> {
    (1..=max_n).map(count_row).collect()
}

/// Smallest `n` with `n² > 6n + 25`.
pub fn threshold() -> u64 {
    (1..).find(|n| n * n > 6 * n + 25).expect("unbounded search")
}

/// Rank data of the linearized contact system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactReport {
    pub order: u32,
    /// Real equations: coefficients of weighted degree at most `order`.
    pub equations: usize,
    /// Real unknowns: coefficients of `f` and `g` of weighted degree `1..=order`.
    pub unknowns: usize,
    pub rank: usize,
    pub consistent: bool,
}

impl fmt::Display for ContactReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order {}: {} equations, {} unknowns, rank {}, {}",
            self.order,
            self.equations,
            self.unknowns,
            self.rank,
            if self.consistent { "consistent" } else { "inconsistent" }
        )
    }
}

/// First variation of `Φ` under `(z, w) ↦ (z + εf, w + εg)`:
/// `δΦ = Im g∘ - 2 Re(Φ_z f∘) - Φ_u Re g∘` with `h∘ = h(z, u + iΦ)`.
fn variation(phi: &RealSeries3, f: &HoloSeries2, g: &HoloSeries2) -> Result<RealSeries3> {
    let fs = compose_on_surface(f, phi)?;
    let gs = compose_on_surface(g, phi)?;
    let two = Gq::from(2);
    let pz_f = diff(phi, 0).mul(&fs)?.scale(&two).re_part();
    let pu_g = diff(phi, 2).mul(&gs.re_part())?;
    gs.im_part().sub(&pz_f)?.sub(&pu_g)
}

/// `∂/∂z` (`var = 0`) or `∂/∂u` (`var = 2`) of `s` read as a polynomial.
fn diff(s: &RealSeries3, var: usize) -> RealSeries3 {
    let w = s.weighting();
    let terms = s.iter().filter_map(|(&(i, j, m), c)| {
        let e = if var == 0 { i } else { m };
        (e > 0).then(|| {
            let key = if var == 0 { (i - 1, j, m) } else { (i, j, m - 1) };
            (key, c.scale(&Rational::from_integer(e.into())))
        })
    });
    RealSeries3::from_terms(w, s.trunc(), terms)
}

/// Real coordinates of a hermitian series: `Re c` for `i ≥ j`, `Im c` for `i > j`.
fn real_slots(w: Weighting, n: u32) -> Vec<(Key3, bool)> {
    let k = w.u_weight();
    let mut out = Vec::new();
    for m in 0..=n / k {
        for s in 0..=n - k * m {
            for j in 0..=s / 2 {
                let i = s - j;
                out.push(((i, j, m), false));
                if i > j {
                    out.push(((i, j, m), true));
                }
            }
        }
    }
    out.retain(|(key, _)| *key != (0, 0, 0));
    out
}

fn read(s: &RealSeries3, slots: &[(Key3, bool)]) -> Vec<Rational> {
    slots
        .iter()
        .map(|(key, im)| {
            let c = s.coeff(*key);
            if *im {
                c.im
            } else {
                c.re
            }
        })
        .collect()
}

/// Assembles the linearization at the identity of "the image of `g1` has
/// contact of order `n` with `g2`" and reports its rank and consistency.
/// The coefficients of `g1` up to `n` are taken as a polynomial.
pub fn linearized_contact_check(g1: &Germ, g2: &Germ, n: u32) -> Result<ContactReport> {
    let w = g1.weighting();
    if g2.weighting() != w {
        return Err(Error::WeightMismatch(w.u_weight(), g2.weighting().u_weight()));
    }
    for g in [g1, g2] {
        if g.source_trunc() < n {
            return Err(Error::TruncationTooLow {
                requested: n,
                available: g.source_trunc(),
            });
        }
    }
    let phi = g1.phi().truncate(n);
    let slots = real_slots(w, n);
    let k = w.u_weight();
    let mut probes: Vec<(bool, (u32, u32), Gq)> = Vec::new();
    for b in 0..=n / k {
        for a in 0..=n - k * b {
            if (a, b) == (0, 0) {
                continue;
            }
            for in_g in [false, true] {
                for c in [Gq::one(), Gq::i()] {
                    probes.push((in_g, (a, b), c));
                }
            }
        }
    }
    let columns: Vec<Result<Vec<Rational>>> = par::map(&probes, |(in_g, key, c)| {
        let h = HoloSeries2::monomial(w, n, *key, c.clone());
        let zero = HoloSeries2::zero(w, n);
        let (f, g) = if *in_g { (&zero, &h) } else { (&h, &zero) };
        Ok(read(&variation(&phi, f, g)?, &slots))
    });
    let columns: Vec<Vec<Rational>> = columns.into_iter().collect::<Result<_>>()?;
    let rows: Vec<Vec<Rational>> = (0..slots.len())
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    let rhs = read(&g2.phi().truncate(n).sub(&phi)?, &slots);
    let sol = linalg::solve(&rows, &rhs, probes.len());
    Ok(ContactReport {
        order: n,
        equations: slots.len(),
        unknowns: probes.len(),
        rank: sol.rank,
        consistent: sol.is_consistent(),
    })
}
