//! Small worked inputs shared by the tests, the acceptance suite and the CLI fixtures.

use crate::polyfun::PolyFun;
use crate::ratcore::{rat, QVector};
use crate::starlang::{Alphabet, StarredBranch, StarredLanguage};

fn qv(entries: &[(i64, i64)]) -> QVector {
    entries.iter().map(|&(p, q)| rat(p, q)).collect()
}

/// The six-piece function on the plane whose level sets are pentagons with
/// vertices `(0,3), (3/2,3), (3/2,0), (0,-3), (-3,0)` at height 6.
pub fn pentagon_polyfun() -> PolyFun {
    let up = qv(&[(1, 4), (1, 2)]);
    let n = qv(&[(0, 1), (1, 2)]);
    let e = qv(&[(1, 4), (0, 1)]);
    let s = qv(&[(0, 1), (-1, 2)]);
    let w = qv(&[(-1, 2), (0, 1)]);
    PolyFun::from_data(
        2,
        vec![
            (vec![up.clone(), n.clone()], QVector::from_ints(&[0, 2])),
            (vec![up.clone(), e.clone()], QVector::from_ints(&[4, 0])),
            (vec![up, e.clone()], QVector::from_ints(&[4, 0])),
            (vec![e, s.clone()], QVector::from_ints(&[4, -2])),
            (vec![w.clone(), s], QVector::from_ints(&[-2, -2])),
            (vec![n, w], QVector::from_ints(&[-2, 2])),
        ],
    )
    .expect("fixture is well formed")
}

/// The ℓ1 norm on `R^n`: one orthant per sign vector with that sign vector as
/// its form.
pub fn l1_polyfun(n: usize) -> PolyFun {
    let data = (0..1u32 << n)
        .map(|mask| {
            let signs: Vec<i64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            let gens = (0..n)
                .map(|i| QVector::unit(n, i).scale(&rat(signs[i], 1)))
                .collect();
            (gens, QVector::from_ints(&signs))
        })
        .collect();
    PolyFun::from_data(n, data).expect("fixture is well formed")
}

/// The planar alphabet `e, x, y, X, Y` with `e` the empty letter and capitals
/// the inverses.
pub fn planar_alphabet() -> Alphabet {
    Alphabet::new(vec![
        ("e".into(), vec![0, 0]),
        ("x".into(), vec![1, 0]),
        ("y".into(), vec![0, 1]),
        ("X".into(), vec![-1, 0]),
        ("Y".into(), vec![0, -1]),
    ])
    .expect("fixture is well formed")
}

fn word(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn branch(u: [&str; 3], v: [&str; 2]) -> StarredBranch {
    StarredBranch::new(u.iter().map(|s| word(s)).collect(), v.iter().map(|s| word(s)).collect())
        .expect("fixture is well formed")
}

/// A six-branch starred language over [`planar_alphabet`] whose associated
/// polyhedral function is [`pentagon_polyfun`].
pub fn pentagon_language() -> StarredLanguage {
    StarredLanguage::new(
        planar_alphabet(),
        vec![
            branch(["", "", ""], ["exyy", "ey"]),
            branch(["", "", ""], ["exyy", "eeex"]),
            branch(["", "Y", ""], ["exyy", "eeex"]),
            branch(["", "", ""], ["eeex", "eY"]),
            branch(["", "", ""], ["eX", "eY"]),
            branch(["", "", ""], ["ey", "eX"]),
        ],
    )
    .expect("fixture is well formed")
}
