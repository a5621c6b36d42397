use rayon::prelude::*;
use serde::Serialize;

use super::PolyFun;
use crate::cones::Cone;
use crate::ratcore::{QMatrix, QVector};
use crate::{Error, Result};

/// The forms of the full-dimensional pieces; each `y` names the affine
/// hyperplane `<v, y> = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneSet {
    pub normals: Vec<QVector>,
}

impl HyperplaneSet {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn contains(&self, y: &QVector) -> bool {
        self.normals.binary_search(y).is_ok()
    }
}

pub(super) fn invariant_hyperplanes(f: &PolyFun) -> Result<HyperplaneSet> {
    f.require_valid()?;
    let mut normals: Vec<QVector> = f.full_dimensional_pieces().map(|p| p.form.clone()).collect();
    normals.sort();
    normals.dedup();
    let rank = QMatrix::from_rows(normals.clone(), f.dim)?.rank();
    if rank != f.dim {
        return Err(Error::Internal(format!(
            "forms of a valid function span only a rank {rank} subspace"
        )));
    }
    Ok(HyperplaneSet { normals })
}

fn check_square(f: &PolyFun, a: &QMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: a.nrows(),
        });
    }
    if a.rank() < f.dim {
        return Err(Error::Singular);
    }
    Ok(())
}

pub(super) fn is_invariant(f: &PolyFun, a: &QMatrix) -> Result<bool> {
    f.require_valid()?;
    check_square(f, a)?;
    Ok(invariant_unchecked(f, a))
}

/// On `C_j ∩ A⁻¹C_k` we have `f(v) = <v, y_j>` and `f(Av) = <v, Aᵀy_k>`.
/// Full-dimensional cells are dense, so agreement there decides equality.
fn invariant_unchecked(f: &PolyFun, a: &QMatrix) -> bool {
    let full: Vec<_> = f.full_dimensional_pieces().collect();
    let at = a.transpose();
    let pulled: Vec<(Cone, QVector)> = full
        .iter()
        .map(|p| {
            (
                p.cone.pullback(a).expect("invertible matrix"),
                at.mul_vec(&p.form),
            )
        })
        .collect();
    for pj in &full {
        for (ck, yk) in &pulled {
            if *yk == pj.form {
                continue;
            }
            let cell = pj.cone.intersect(ck).expect("same dimension");
            if cell.is_full_dimensional() {
                return false;
            }
        }
    }
    true
}

/// Ordered selections of `k` distinct indices from `0..n`.
fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(n, k, &mut cur, &mut used, &mut out);
    out
}

/// Every invariance matrix permutes the hyperplane set via `Aᵀ`, and the set
/// spans, so `A` is pinned down by where a basis of normals goes. Each
/// assignment of images to a fixed basis gives one candidate.
pub(super) fn symmetry_group(f: &PolyFun) -> Result<Vec<QMatrix>> {
    let hs = invariant_hyperplanes(f)?;
    let n = f.dim;
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..hs.len() {
        let mut rows: Vec<QVector> = basis.iter().map(|&b| hs.normals[b].clone()).collect();
        rows.push(hs.normals[i].clone());
        if QMatrix::from_rows(rows, n)?.rank() > basis.len() {
            basis.push(i);
        }
    }
    let yb = QMatrix::from_columns(
        &basis.iter().map(|&b| hs.normals[b].clone()).collect::<Vec<_>>(),
        n,
    )?;

    let mut group: Vec<QMatrix> = injections(hs.len(), n)
        .into_par_iter()
        .filter_map(|images| {
            let t = QMatrix::from_columns(
                &images.iter().map(|&i| hs.normals[i].clone()).collect::<Vec<_>>(),
                n,
            )
            .ok()?;
            let t_inv = t.inverse().ok()?;
            // Aᵀ t_i = y_{b_i}
            let at = &yb * &t_inv;
            if !hs.normals.iter().all(|y| hs.contains(&at.mul_vec(y))) {
                return None;
            }
            let a = at.transpose();
            invariant_unchecked(f, &a).then_some(a)
        })
        .collect();
    group.sort_by_key(|a| a.flatten());
    group.dedup();
    if !group.iter().any(QMatrix::is_identity) {
        return Err(Error::Internal("identity missing from symmetry group".into()));
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pentagon_polyfun, l1_polyfun};

    #[test]
    fn hyperplanes() {
        let hs = pentagon_polyfun().invariant_hyperplanes().unwrap();
        let mut expect: Vec<QVector> = [[0, 2], [4, 0], [4, -2], [-2, -2], [-2, 2]]
            .iter()
            .map(|y| QVector::from_ints(y))
            .collect();
        expect.sort();
        assert_eq!(hs.normals, expect);
        assert_eq!(l1_polyfun(2).invariant_hyperplanes().unwrap().len(), 4);
    }

    #[test]
    fn invariance() {
        let f = pentagon_polyfun();
        assert!(f.is_invariant(&QMatrix::identity(2)).unwrap());
        assert!(!f.is_invariant(&QMatrix::from_ints(&[&[0, -1], &[1, 0]])).unwrap());
        let l1 = l1_polyfun(2);
        assert!(l1.is_invariant(&QMatrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap());
        assert!(!l1.is_invariant(&QMatrix::from_ints(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(matches!(
            l1.is_invariant(&QMatrix::from_ints(&[&[1, 1], &[1, 1]])),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn groups() {
        let f = pentagon_polyfun();
        let g = f.symmetry_group().unwrap();
        assert_eq!(g, vec![QMatrix::identity(2)]);
        let diag = f.restrict(&QMatrix::from_ints(&[&[1], &[1]])).unwrap();
        let g1 = diag.symmetry_group().unwrap();
        assert_eq!(g1, vec![QMatrix::from_ints(&[&[-1]]), QMatrix::identity(1)]);
        assert_eq!(l1_polyfun(2).symmetry_group().unwrap().len(), 8);
        assert_eq!(l1_polyfun(3).symmetry_group().unwrap().len(), 48);
    }

    #[test]
    fn injection_counts() {
        assert_eq!(injections(5, 2).len(), 20);
        assert_eq!(injections(4, 4).len(), 24);
        assert_eq!(injections(3, 0).len(), 1);
    }
}
