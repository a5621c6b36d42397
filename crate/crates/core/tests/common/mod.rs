//! Oracles and random generators shared by the integration tests and the
//! acceptance harness. The oracles avoid the code paths they check: cone
//! membership is decided by brute force over independent generator subsets,
//! invariance by evaluating at refinement rays, lattice indices by counting
//! residues.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use polycomm::polyfun::{angle_cmp, PolyFun};
use polycomm::ratcore::{rat, QMatrix, QVector, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> QVector {
    (0..n).map(|_| random_rational(rng, num, den)).collect()
}

pub fn random_nonzero_vector(rng: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> QVector {
    loop {
        let v = random_vector(rng, n, num, den);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> QMatrix {
    QMatrix::from_rows((0..n).map(|_| random_vector(rng, n, num, den)).collect(), n).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> QMatrix {
    loop {
        let m = random_matrix(rng, n, num, den);
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

/// Whether `v` is a nonnegative combination of `gens`, by Carathéodory: it
/// suffices to try linearly independent subsets.
pub fn cone_contains_brute(dim: usize, gens: &[QVector], v: &QVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let k = gens.len();
    for mask in 1u32..(1 << k) {
        let subset: Vec<QVector> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| gens[i].clone()).collect();
        if subset.len() > dim {
            continue;
        }
        let cols = QMatrix::from_columns(&subset, dim).unwrap();
        if cols.rank() < subset.len() {
            continue;
        }
        if let Some(mu) = cols.solve(v) {
            if mu.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

pub fn signed_permutations(n: usize) -> Vec<QMatrix> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for i in 0..n {
                if !p.contains(&i) {
                    let mut q = p.clone();
                    q.push(i);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..1u32 << n {
            let rows = (0..n)
                .map(|i| {
                    let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                    QVector::unit(n, p[i]).scale(&rat(s, 1))
                })
                .collect();
            out.push(QMatrix::from_rows(rows, n).unwrap());
        }
    }
    out
}

/// Finite subgroups of `GL_2(Z)` used to seed invariant functions.
pub fn planar_groups() -> Vec<(&'static str, Vec<QMatrix>)> {
    let id = QMatrix::identity(2);
    let r6 = QMatrix::from_ints(&[&[0, -1], &[1, 1]]);
    let hex: Vec<QMatrix> = (0..6).map(|k| r6.pow(k)).collect();
    vec![
        ("trivial", vec![id.clone()]),
        ("central", vec![id.clone(), QMatrix::scalar(2, &rat(-1, 1))]),
        ("swap", vec![id, QMatrix::from_ints(&[&[0, 1], &[1, 0]])]),
        ("signed permutations", signed_permutations(2)),
        ("hexagonal rotations", hex),
    ]
}

fn cross(a: &QVector, b: &QVector) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// A valid planar function invariant under `group`: the orbit of a few
/// random integer points is sorted by angle and each pair of neighbours
/// spans a piece whose form is 1 at both points.
pub fn random_invariant_fan(rng: &mut ChaCha8Rng, group: &[QMatrix]) -> (PolyFun, Vec<QVector>) {
    loop {
        let seeds = if group.len() == 1 { rng.gen_range(3..=5) } else { rng.gen_range(1..=2) };
        let mut pts: Vec<QVector> = Vec::new();
        for _ in 0..seeds {
            let p = loop {
                let p = QVector::from_ints(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
                if !p.is_zero() {
                    break p;
                }
            };
            for g in group {
                let q = g.mul_vec(&p);
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
        }
        if pts.len() < 3 {
            continue;
        }
        pts.sort_by(angle_cmp);
        let m = pts.len();
        let ok = (0..m).all(|i| cross(&pts[i], &pts[(i + 1) % m]).is_positive());
        if !ok {
            continue;
        }
        let data = (0..m)
            .map(|i| {
                let (a, b) = (&pts[i], &pts[(i + 1) % m]);
                let sys = QMatrix::from_rows(vec![a.clone(), b.clone()], 2).unwrap();
                let y = sys.solve(&QVector::new(vec![Rational::one(), Rational::one()])).unwrap();
                (vec![a.clone(), b.clone()], y)
            })
            .collect();
        return (PolyFun::from_data(2, data).unwrap(), pts);
    }
}

/// `f ∘ A = f` on the plane, decided by evaluation. Both sides are linear
/// between consecutive rays of `rays ∪ A⁻¹ rays`, and those sectors are
/// narrower than a half plane when `rays` already are.
pub fn invariant_by_evaluation(f: &PolyFun, rays: &[QVector], a: &QMatrix) -> bool {
    let inv = a.inverse().unwrap();
    rays.iter()
        .flat_map(|r| [r.clone(), inv.mul_vec(r)])
        .all(|r| f.eval(&a.mul_vec(&r)) == f.eval(&r))
}

pub fn is_group(elements: &[QMatrix]) -> bool {
    let Some(first) = elements.first() else {
        return false;
    };
    let n = first.nrows();
    elements.contains(&QMatrix::identity(n))
        && elements.iter().all(|a| elements.contains(&a.inverse().unwrap()))
        && elements
            .iter()
            .all(|a| elements.iter().all(|b| elements.contains(&(a * b))))
}

pub fn common_denominator(a: &QMatrix) -> BigInt {
    a.rows()
        .iter()
        .flat_map(|r| r.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `D^n / #{v mod D : Av ∈ Z^n}` where `D` clears the denominators of `A`.
pub fn residue_index(a: &QMatrix) -> BigInt {
    let n = a.nrows();
    let d: i64 = common_denominator(a).try_into().unwrap();
    let total = d.pow(n as u32);
    let mut good = 0i64;
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let x = c % d;
                c /= d;
                x
            })
            .collect();
        if a.mul_vec(&QVector::from_ints(&v)).is_integral() {
            good += 1;
        }
    }
    BigInt::from(total / good)
}

/// Finite order integer matrices to conjugate into rational examples.
pub fn finite_order_seeds(n: usize) -> Vec<QMatrix> {
    let mut out = signed_permutations(n);
    if n == 2 {
        out.push(QMatrix::from_ints(&[&[0, -1], &[1, 1]]));
        out.push(QMatrix::from_ints(&[&[0, -1], &[1, -1]]));
    }
    if n == 3 {
        out.push(QMatrix::from_ints(&[&[0, -1, 0], &[1, 1, 0], &[0, 0, 1]]));
        out.push(QMatrix::from_ints(&[&[0, -1, 0], &[1, -1, 0], &[0, 0, -1]]));
    }
    out
}

/// Largest possible finite order of a matrix in `GL_n(Q)` for `n <= 3` is 6,
/// and every finite order divides 12, so powers up to 12 decide finiteness.
pub const POWER_LIMIT: u64 = 12;

pub fn first_identity_power(a: &QMatrix, limit: u64) -> Option<u64> {
    let mut p = a.clone();
    for k in 1..=limit {
        if p.is_identity() {
            return Some(k);
        }
        p = &p * a;
    }
    None
}
