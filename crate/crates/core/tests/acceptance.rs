//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use common::*;
use polycomm::cones::{h_to_v, v_to_h, Cone};
use polycomm::fixtures::pentagon_language;
use polycomm::lmcomm::{classify, domain_lattice, is_orthogonalizable, matrix_order, LMGroup, MatrixOrder};
use polycomm::polyfun::PolyFun;
use polycomm::ratcore::{rat, QMatrix, QVector, Rational};
use polycomm::starlang::{build_polyfun, verify_length_bound};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn qv(entries: &[(i64, i64)]) -> QVector {
    entries.iter().map(|&(p, q)| rat(p, q)).collect()
}

fn ac1() -> Outcome {
    let built = build_polyfun(&pentagon_language()).map_err(|e| e.to_string())?;
    let expected = [
        ([(1, 4), (1, 2)], [(0, 1), (1, 2)], [0, 2]),
        ([(1, 4), (1, 2)], [(1, 4), (0, 1)], [4, 0]),
        ([(1, 4), (1, 2)], [(1, 4), (0, 1)], [4, 0]),
        ([(1, 4), (0, 1)], [(0, 1), (-1, 2)], [4, -2]),
        ([(-1, 2), (0, 1)], [(0, 1), (-1, 2)], [-2, -2]),
        ([(0, 1), (1, 2)], [(-1, 2), (0, 1)], [-2, 2]),
    ];
    let pieces = built.polyfun.pieces();
    ensure!(pieces.len() == 6, "{} pieces", pieces.len());
    for (j, (p, (z1, z2, y))) in pieces.iter().zip(&expected).enumerate() {
        let gens = p.cone().generators();
        ensure!(gens == [qv(z1), qv(z2)], "piece {}: generators {:?}", j + 1, gens);
        ensure!(*p.form() == QVector::from_ints(y), "piece {}: form {}", j + 1, p.form());
    }
    ensure!(built.validation.valid, "built function invalid: {}", built.validation.summary());
    Ok("six pieces, generators and forms exact".into())
}

/// Equal as closed polygons, up to the starting vertex and orientation.
fn same_cycle(a: &[QVector], b: &[QVector]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let rev: Vec<QVector> = b.iter().rev().cloned().collect();
    (0..n).any(|s| {
        (0..n).all(|i| a[(i + s) % n] == b[i]) || (0..n).all(|i| a[(i + s) % n] == rev[i])
    })
}

fn ac2() -> Outcome {
    let built = build_polyfun(&pentagon_language()).map_err(|e| e.to_string())?;
    let poly = built.polyfun.level_set_polyline(&rat(6, 1)).map_err(|e| e.to_string())?;
    let expected = vec![qv(&[(0, 1), (3, 1)]), qv(&[(3, 2), (3, 1)]), qv(&[(3, 2), (0, 1)]), qv(&[(0, 1), (-3, 1)]), qv(&[(-3, 1), (0, 1)])];
    let shown: Vec<String> = poly.iter().map(|v| v.to_string()).collect();
    ensure!(same_cycle(&poly, &expected), "polygon {}", shown.join(" "));
    Ok(format!("pentagon {}", shown.join(" ")))
}

fn ac3() -> Outcome {
    let lang = pentagon_language();
    let start = Instant::now();
    let built = build_polyfun(&lang).map_err(|e| e.to_string())?;
    let xi = built.certificate.xi.clone();
    ensure!(xi <= rat(11, 2), "xi = {xi}");
    let report = verify_length_bound(&lang, &built.polyfun, &xi, 30);
    let secs = start.elapsed().as_secs_f64();
    ensure!(report.passed, "{} violations, first {:?}", report.violation_count, report.violations.first().map(|v| v.word.join("")));
    ensure!(secs < 10.0, "took {secs:.1} s");
    Ok(format!("xi = {xi}, {} words of length <= 30, worst slack {}, {secs:.2} s", report.words_checked, report.worst_slack))
}

fn ac4() -> Outcome {
    let f = build_polyfun(&pentagon_language()).map_err(|e| e.to_string())?.polyfun;
    let diag = QMatrix::from_ints(&[&[1], &[1]]);
    let g = f.restrict(&diag).map_err(|e| e.to_string())?;
    for t in -12..=12 {
        let v = g.eval(&QVector::from_ints(&[t]));
        ensure!(v == rat(4 * t.abs(), 1), "g({t}) = {v}");
    }
    for p in g.pieces() {
        ensure!(p.form()[0].abs() == rat(4, 1), "form {}", p.form());
    }
    let sf = f.symmetry_group().map_err(|e| e.to_string())?;
    ensure!(sf == vec![QMatrix::identity(2)], "f has {} symmetries", sf.len());
    let sg = g.symmetry_group().map_err(|e| e.to_string())?;
    let mut expected = vec![QMatrix::from_ints(&[&[-1]]), QMatrix::from_ints(&[&[1]])];
    expected.sort();
    let mut got = sg.clone();
    got.sort();
    ensure!(got == expected, "g has symmetries {:?}", sg);
    Ok("g(t) = 4|t|, |Sym f| = 1, Sym g = {1, -1}".into())
}

fn ac5() -> Outcome {
    let bs = classify(&LMGroup::with_domain_lattice(QMatrix::from_rows(vec![qv(&[(3, 2)])], 1).unwrap()).unwrap());
    ensure!(!bs.cat0 && !bs.biautomatic && !bs.embeddable, "BS(2,3): {:?}", (bs.cat0, bs.biautomatic, bs.embeddable));
    let rot = QMatrix::from_rows(vec![qv(&[(3, 5), (-4, 5)]), qv(&[(4, 5), (3, 5)])], 2).unwrap();
    let rg = LMGroup::with_domain_lattice(rot).unwrap();
    let rc = classify(&rg);
    ensure!(rc.l_index == BigInt::from(5), "rotation lattice index {}", rc.l_index);
    ensure!(rc.cat0 && !rc.biautomatic && !rc.embeddable, "rotation: {:?}", (rc.cat0, rc.biautomatic, rc.embeddable));
    let mut finite = 0;
    for n in 1..=3 {
        for m in signed_permutations(n) {
            let c = classify(&LMGroup::with_domain_lattice(m.clone()).unwrap());
            ensure!(c.cat0 && c.biautomatic && c.embeddable, "{m} not all true");
            finite += 1;
        }
    }
    let mut rng = rng(5);
    let seeds = finite_order_seeds(2);
    let mut finite_random = 0;
    for i in 0..1000 {
        let a = if i % 5 == 0 {
            let p = random_invertible(&mut rng, 2, 3, 3);
            &(&p * &seeds[rng.gen_range(0..seeds.len())]) * &p.inverse().unwrap()
        } else {
            random_invertible(&mut rng, 2, 5, 4)
        };
        let c = classify(&LMGroup::with_domain_lattice(a.clone()).unwrap());
        ensure!(c.biautomatic == c.embeddable, "{a}: biautomatic {} embeddable {}", c.biautomatic, c.embeddable);
        finite_random += c.biautomatic as usize;
    }
    Ok(format!("BS(2,3), rotation (index 5), {finite} signed permutations; 1000 random ({finite_random} finite order)"))
}

fn ac6() -> Outcome {
    let mut rng = rng(6);
    let mut membership = 0;
    for case in 0..500 {
        let dim = 2 + case % 3;
        let k = rng.gen_range(1..=6);
        let gens: Vec<QVector> = (0..k).map(|_| random_vector(&mut rng, dim, 4, 3)).collect();
        let c = Cone::from_generators(dim, gens.clone()).unwrap();
        let h = v_to_h(dim, &gens);
        let rays = h_to_v(dim, &h);
        for g in &gens {
            ensure!(h.iter().all(|w| !g.dot(w).is_negative()), "case {case}: generator {g} outside");
        }
        for r in &rays {
            ensure!(cone_contains_brute(dim, &gens, r), "case {case}: ray {r} outside C(Z)");
        }
        ensure!(c.same_set(&Cone::from_halfspaces(dim, h).unwrap()), "case {case}: round trip differs");
        if dim <= 3 {
            for _ in 0..10 {
                let p = if rng.gen_bool(0.5) {
                    random_vector(&mut rng, dim, 6, 2)
                } else {
                    gens.iter().fold(QVector::zeros(dim), |acc, g| &acc + &g.scale(&rat(rng.gen_range(-1..=2), 1)))
                };
                ensure!(c.contains(&p) == cone_contains_brute(dim, &gens, &p), "case {case}: membership of {p}");
                membership += 1;
            }
        }
    }
    Ok(format!("500 round trips in dims 2-4, {membership} membership queries"))
}

fn ac7() -> Outcome {
    let groups = planar_groups();
    let mut rng = rng(7);
    let mut orders = Vec::new();
    let mut rejected = 0;
    for case in 0..50 {
        let (name, g) = &groups[case % groups.len()];
        let (f, rays): (PolyFun, _) = random_invariant_fan(&mut rng, g);
        ensure!(f.is_valid(), "case {case}: generated function invalid");
        let sym = f.symmetry_group().map_err(|e| e.to_string())?;
        ensure!(is_group(&sym), "case {case} ({name}): not closed under products and inverses");
        for a in g {
            ensure!(sym.contains(a), "case {case} ({name}): seed symmetry {a} missing");
        }
        for a in &sym {
            ensure!(invariant_by_evaluation(&f, &rays, a), "case {case}: {a} is not a symmetry");
        }
        orders.push(sym.len());
        let mut tried = 0;
        while tried < 100 {
            let a = random_invertible(&mut rng, 2, 3, 2);
            if sym.contains(&a) {
                continue;
            }
            tried += 1;
            ensure!(!invariant_by_evaluation(&f, &rays, &a), "case {case}: {a} missed by symmetry_group");
            ensure!(!f.is_invariant(&a).map_err(|e| e.to_string())?, "case {case}: {a} accepted");
            rejected += 1;
        }
    }
    orders.sort();
    orders.dedup();
    Ok(format!("50 functions, group orders {orders:?}, {rejected} non-members rejected"))
}

fn ac8() -> Outcome {
    let mut rng = rng(8);
    let mut finite = 0;
    for case in 0..1000 {
        let n = 2 + case % 2;
        let a = if case % 3 == 0 {
            let seeds = finite_order_seeds(n);
            let p = random_invertible(&mut rng, n, 3, 3);
            &(&p * &seeds[rng.gen_range(0..seeds.len())]) * &p.inverse().unwrap()
        } else {
            random_invertible(&mut rng, n, 4, 3)
        };
        let order = matrix_order(&a).map_err(|e| e.to_string())?;
        match order {
            MatrixOrder::Finite(k) => {
                ensure!(first_identity_power(&a, k) == Some(k), "{a}: A^{k} is not the first identity power");
                ensure!(is_orthogonalizable(&a).unwrap(), "{a}: finite order but not orthogonalizable");
                finite += 1;
            }
            MatrixOrder::Infinite => {
                ensure!(first_identity_power(&a, POWER_LIMIT).is_none(), "{a}: periodic but reported infinite");
            }
        }
        if a.determinant().unwrap().abs() != Rational::one() {
            ensure!(order == MatrixOrder::Infinite, "{a}: |det| != 1 with finite order");
        }
    }
    Ok(format!("1000 matrices, {finite} of finite order"))
}

fn ac9() -> Outcome {
    let mut rng = rng(9);
    let mut largest = BigInt::zero();
    for case in 0..200 {
        let a = random_invertible(&mut rng, 2, 6, 6);
        let (l, index) = domain_lattice(&a).map_err(|e| e.to_string())?;
        let brute = residue_index(&a);
        ensure!(index == brute, "case {case}: {a} index {index}, residues give {brute}");
        let d: i64 = common_denominator(&a).try_into().unwrap();
        for x in 0..d {
            for y in 0..d {
                let v = QVector::from_ints(&[x, y]);
                ensure!(l.contains(&v) == a.mul_vec(&v).is_integral(), "case {case}: membership of {v}");
            }
        }
        largest = largest.max(index);
    }
    Ok(format!("200 matrices, largest index {largest}"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "example reproduction", ac1),
        ("AC2", "level set", ac2),
        ("AC3", "length bound", ac3),
        ("AC4", "restriction and symmetry", ac4),
        ("AC5", "classifier dichotomy", ac5),
        ("AC6", "cone duality", ac6),
        ("AC7", "finiteness of symmetry groups", ac7),
        ("AC8", "order and orthogonalizability", ac8),
        ("AC9", "lattice index oracle", ac9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} PASS {name} ({secs:.2} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name} ({secs:.2} s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
