use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::Piece;
use crate::cones::Cone;
use crate::ratcore::{serde_rational, QVector, Rational};

/// Outcome of one condition together with its counterexamples.
#[derive(Clone, Debug, Serialize)]
pub struct Condition<T> {
    pub passed: bool,
    pub violations: Vec<T>,
}

impl<T> Condition<T> {
    fn from_violations(violations: Vec<T>) -> Self {
        Condition {
            passed: violations.is_empty(),
            violations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityViolation {
    pub piece: usize,
    pub generator: QVector,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityViolation {
    pub pieces: (usize, usize),
    pub witness: QVector,
    #[serde(with = "serde_rational")]
    pub value_first: Rational,
    #[serde(with = "serde_rational")]
    pub value_second: Rational,
}

/// A point that lies in no cone.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CoverViolation {
    pub witness: QVector,
    pub found_by: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub positivity: Condition<PositivityViolation>,
    pub compatibility: Condition<CompatibilityViolation>,
    pub cover: Condition<CoverViolation>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(v) = self.positivity.violations.first() {
            parts.push(format!(
                "piece {} has <z, y> = {} at generator {}",
                v.piece, v.value, v.generator
            ));
        }
        if let Some(v) = self.compatibility.violations.first() {
            parts.push(format!(
                "pieces {} and {} disagree at {} ({} vs {})",
                v.pieces.0, v.pieces.1, v.witness, v.value_first, v.value_second
            ));
        }
        if let Some(v) = self.cover.violations.first() {
            parts.push(format!("{} is not covered", v.witness));
        }
        if parts.is_empty() {
            "valid".into()
        } else {
            parts.join("; ")
        }
    }
}

pub(super) fn validate(dim: usize, pieces: &[Piece]) -> ValidationReport {
    let positivity = Condition::from_violations(positivity(pieces));
    let compatibility = Condition::from_violations(compatibility(pieces));
    let full: Vec<&Cone> = pieces
        .iter()
        .filter(|p| p.is_full_dimensional())
        .map(|p| &p.cone)
        .collect();
    let mut uncovered = facet_perturbation(&full);
    for v in chamber_sampling(dim, &full) {
        if !uncovered.iter().any(|u| u.witness == v.witness) {
            uncovered.push(v);
        }
    }
    let cover = Condition::from_violations(uncovered);
    ValidationReport {
        valid: positivity.passed && compatibility.passed && cover.passed,
        positivity,
        compatibility,
        cover,
    }
}

fn positivity(pieces: &[Piece]) -> Vec<PositivityViolation> {
    let mut out = Vec::new();
    for (j, p) in pieces.iter().enumerate() {
        for z in p.cone.generators() {
            let value = z.dot(&p.form);
            if !value.is_positive() {
                out.push(PositivityViolation {
                    piece: j,
                    generator: z.clone(),
                    value,
                });
            }
        }
    }
    out
}

fn compatibility(pieces: &[Piece]) -> Vec<CompatibilityViolation> {
    let pairs: Vec<(usize, usize)> = (0..pieces.len())
        .flat_map(|j| (j + 1..pieces.len()).map(move |k| (j, k)))
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(j, k)| {
            let (a, b) = (&pieces[j], &pieces[k]);
            let meet = a.cone.intersect(&b.cone).expect("pieces share a dimension");
            meet.extreme_generators()
                .iter()
                .filter_map(|z| {
                    let (vj, vk) = (z.dot(&a.form), z.dot(&b.form));
                    (vj != vk).then(|| CompatibilityViolation {
                        pieces: (j, k),
                        witness: z.clone(),
                        value_first: vj,
                        value_second: vk,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Pushes a relative interior point of every facet slightly outward and
/// checks that the result lies in some cone. Membership is decided for an
/// infinitesimal push; the reported witness uses a concrete small step.
fn facet_perturbation(full: &[&Cone]) -> Vec<CoverViolation> {
    let mut probes: Vec<(QVector, QVector)> = Vec::new();
    for cone in full {
        for w in cone.halfspaces() {
            let p = cone
                .extreme_generators()
                .iter()
                .filter(|g| g.dot(w).is_zero())
                .fold(QVector::zeros(w.dim()), |acc, g| &acc + g);
            probes.push((p, w.clone()));
        }
    }
    let mut out = Vec::new();
    for (p, w) in probes {
        let inside = |cone: &&Cone| {
            cone.halfspaces().iter().all(|u| {
                let a = p.dot(u);
                a.is_positive() || (a.is_zero() && !w.dot(u).is_positive())
            })
        };
        if full.iter().any(inside) {
            continue;
        }
        let mut eps = Rational::one();
        for cone in full {
            for u in cone.halfspaces() {
                let (a, b) = (p.dot(u), w.dot(u));
                if a.is_positive() && b.is_positive() {
                    let bound = a / b / Rational::from_integer(2.into());
                    if bound < eps {
                        eps = bound;
                    }
                }
            }
        }
        let witness = (&p - &w.scale(&eps)).primitive();
        if !out.iter().any(|v: &CoverViolation| v.witness == witness) {
            out.push(CoverViolation {
                witness,
                found_by: "facet perturbation",
            });
        }
    }
    out
}

/// Refines `R^dim` by every facet hyperplane of the pieces and tests one
/// interior point of each chamber. Complete: every chamber lies inside or
/// outside each piece.
fn chamber_sampling(dim: usize, full: &[&Cone]) -> Vec<CoverViolation> {
    let mut hyperplanes: Vec<QVector> = full
        .iter()
        .flat_map(|c| c.halfspaces().iter().map(QVector::primitive_line))
        .collect();
    hyperplanes.sort();
    hyperplanes.dedup();

    let mut chambers: Vec<Cone> = vec![Cone::full(dim)];
    for h in &hyperplanes {
        let mut next = Vec::with_capacity(chambers.len());
        for c in chambers {
            let signs: Vec<Rational> = c.extreme_generators().iter().map(|g| g.dot(h)).collect();
            let pos = signs.iter().any(|s| s.is_positive());
            let neg = signs.iter().any(|s| s.is_negative());
            if pos && neg {
                for normal in [h.clone(), -h] {
                    let mut normals = c.halfspaces().to_vec();
                    normals.push(normal);
                    next.push(Cone::from_halfspaces(dim, normals).expect("same dimension"));
                }
            } else {
                next.push(c);
            }
        }
        chambers = next;
    }

    chambers
        .par_iter()
        .filter_map(|c| {
            let mut point = c.relative_interior_point();
            if point.is_zero() {
                point = QVector::unit(dim, 0);
            }
            (!full.iter().any(|cone| cone.contains(&point))).then(|| CoverViolation {
                witness: point.primitive(),
                found_by: "chamber sampling",
            })
        })
        .collect()
}
