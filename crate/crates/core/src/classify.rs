//! The four possibilities for the stability group of a finite-type point,
//! read off from a normal form, and the order of jet determination.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::hypersurface::ModelClass;
use crate::normalform::{canonical_normal_form, NormalCase, NormalFormReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AutStructure {
    FullSphereGroup,
    NoncompactLineCyclic,
    Circle,
    Cyclic,
}

impl fmt::Display for AutStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutStructure::FullSphereGroup => "FullSphereGroup",
            AutStructure::NoncompactLineCyclic => "NoncompactLine×Cyclic",
            AutStructure::Circle => "Circle",
            AutStructure::Cyclic => "Cyclic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutVerdict {
    pub case_id: u8,
    /// Real dimension of the stability group.
    pub dimension: u8,
    pub structure: AutStructure,
    /// Order of the finite rotation part in cases 2 and 4, computed by
    /// [`rotation_order`] on the truncated normal form and certified only to
    /// `order_of_validity`. For sphere-like models it is read off the
    /// canonical normal form; `None` when that representative is not pinned
    /// down at this order.
    pub m: Option<u32>,
    pub order_of_validity: u32,
}

impl AutVerdict {
    pub fn jet_order(&self) -> u8 {
        if self.case_id == 1 {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for AutVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {}, dimension {}, {}",
            self.case_id, self.dimension, self.structure
        )?;
        if let Some(m) = self.m {
            write!(f, ", m = {m}")?;
        }
        write!(f, ", valid to order {}", self.order_of_validity)
    }
}

/// Classifies the stability group of the germ behind `report`.
pub fn classify_aut(report: &NormalFormReport) -> Result<AutVerdict> {
    if report.case != NormalCase::ChernMoser && report.model.klass() == ModelClass::Tubular {
        return Err(Error::UnsupportedCase("tubular models have no normal form here".into()));
    }
    let order = report.order;
    let flat = report.remainder().truncate(order).is_zero();
    let sphere_like = matches!(report.case, NormalCase::ChernMoser | NormalCase::Circular);
    let canonical = if sphere_like && !flat { canonical_normal_form(report)? } else { Some(report.clone()) };
    let pinned = canonical.is_some();
    let phi = canonical.as_ref().unwrap_or(report).normalized.phi().truncate(order);
    let verdict = |case_id, dimension, structure, m| AutVerdict {
        case_id,
        dimension,
        structure,
        m,
        order_of_validity: order,
    };
    if flat && sphere_like {
        return Ok(verdict(1, 3, AutStructure::FullSphereGroup, None));
    }
    let terms: Vec<(i64, u32)> = phi.iter().map(|((i, j, m), _)| (*i as i64 - *j as i64, *m)).collect();
    if flat && 2 * report.l() < report.k() {
        return Ok(verdict(2, 1, AutStructure::NoncompactLineCyclic, Some(rotation_order(&terms))));
    }
    if terms.iter().all(|(c, _)| *c == 0) {
        return Ok(verdict(3, 1, AutStructure::Circle, None));
    }
    Ok(verdict(4, 0, AutStructure::Cyclic, pinned.then(|| rotation_order(&terms))))
}

pub fn jet_order(report: &NormalFormReport) -> Result<u8> {
    Ok(classify_aut(report)?.jet_order())
}

/// Largest `m` such that `z ↦ θz`, `w ↦ ±w` with `θ` a primitive `m`-th root
/// of unity fixes every term `(i - j, m)` of a normal form.
///
/// On `c z^i z̄^j u^m` the map acts by `θ^{i-j} σ^{m-1}`, so the condition is
/// `2 (i - j) r + s (1 - m) m_ord ≡ 0 (mod 2 m_ord)` for `θ = e^{2πi r/m_ord}`
/// and `σ = (-1)^s`. The search runs down from `2 max |i - j|`.
pub fn rotation_order(terms: &[(i64, u32)]) -> u32 {
    let bound = terms.iter().map(|(c, _)| 2 * c.unsigned_abs()).max().unwrap_or(1).max(1);
    for ord in (1..=bound as i64).rev() {
        let fixes = |r: i64, s: i64| {
            terms
                .iter()
                .all(|(c, m)| (2 * c * r + s * (1 - *m as i64) * ord).rem_euclid(2 * ord) == 0)
        };
        let found = (0..ord)
            .filter(|r| r.gcd(&ord) == 1)
            .any(|r| fixes(r, 0) || fixes(r, 1));
        if found {
            return ord as u32;
        }
    }
    1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_orders() {
        // z³z̄ + z z̄³: θ = i with w ↦ -w
        assert_eq!(rotation_order(&[(2, 0), (-2, 0)]), 4);
        // z⁵z̄ u survives θ = i, z⁷z̄ u does not
        assert_eq!(rotation_order(&[(2, 0), (-2, 0), (4, 1), (-4, 1)]), 4);
        assert_eq!(rotation_order(&[(2, 0), (-2, 0), (6, 1), (-6, 1)]), 2);
        assert_eq!(rotation_order(&[(3, 0), (-3, 0), (1, 1), (-1, 1)]), 1);
        assert_eq!(rotation_order(&[(0, 0)]), 1);
    }
}
