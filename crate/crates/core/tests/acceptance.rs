//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic;
use std::process::ExitCode;

use num::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use surfclass::appell_humbert::{
    branch_bundle, cover_branch_bundle, cover_square_roots, curve_bundle, curve_form, frac, im_on_lattice,
    intersection_number, pullback_hom, self_intersection, square_roots, tensor, LineBundleClass,
};
use surfclass::eisenstein::{rat, ratio, EisMatrix, EisRat};
use surfclass::lattice::{self, cover_lattice, e1, e2, hnf, lambda1, lambda2, product_lattice, AmbientVector, LatticeBasis};
use surfclass::permgroup::{gl2_f3_fingerprint, PermGroup, Permutation};
use surfclass::surface_invariants::{
    ball_quotient_check_with, double_cover_invariants, enumerate_branch_profiles, resolution_invariants, CaseLabel,
    SingularityProfile,
};
use surfclass::symmetry::{
    action_on_square_roots, cross_ratio, from_tilde, g2, g3, gamma_action_on_sigma, minus_identity, preserves_divisor,
    rational_rep, search_generators, sigma, tangent_points, tau, verify_presentation,
};
use surfclass::torsion_covers::{
    all_characters, branch_form, check_2divisible, classify_characters, kernel_lattice, restricts_nontrivially,
};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn upper(e: &surfclass::appell_humbert::AltFormOnLattice) -> Vec<i64> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(i64::try_from(&e.entry(i, j).to_integer()).unwrap());
        }
    }
    out
}

fn m(rows: [[(i64, i64); 2]; 2]) -> EisMatrix {
    EisMatrix::from_ints(rows)
}

fn criterion_1() -> Outcome {
    let a = upper(&im_on_lattice(&branch_bundle().form, &product_lattice()));
    ensure!(a == [-1, 3, -2, -1, 3, -1], "Im h on Λ_A' = {a:?}");
    let b = upper(&im_on_lattice(&cover_branch_bundle().form, &cover_lattice()));
    ensure!(b == [-4, 0, -2, -6, -4, 6], "Im h_A on Λ_A = {b:?}");
    Ok(())
}

fn criterion_2() -> Outcome {
    // stored matrices are √3·H, so twice the printed integer matrices
    let printed = [
        m([[(0, 0), (0, 0)], [(0, 0), (2, 0)]]),
        m([[(2, 0), (0, 0)], [(0, 0), (0, 0)]]),
        m([[(2, 0), (-2, 0)], [(-2, 0), (2, 0)]]),
        m([[(2, 0), (0, -2)], [(-2, 2), (2, 0)]]),
    ];
    for (k, want) in printed.iter().enumerate() {
        ensure!(curve_form(k + 1).matrix() == want, "H{} = {}", k + 1, curve_form(k + 1).matrix());
    }
    let h = m([[(6, 0), (-2, -2)], [(-4, 2), (6, 0)]]);
    ensure!(branch_bundle().form.matrix() == &h, "H = {}", branch_bundle().form.matrix());
    let d = branch_bundle();
    for bits in 0..16u32 {
        let c: [i64; 4] = std::array::from_fn(|i| ((bits >> (3 - i)) & 1) as i64);
        let [a1, a2, a3, a4] = c;
        let e = a1 + a2 + a3 + a4 + a1 * (a2 + a3 + a4) + (a2 + a3) * a4;
        let want = if e % 2 == 0 { rat(0) } else { ratio(1, 2) };
        let got = d.character.eval(&AmbientVector::from_ints(c)).unwrap();
        ensure!(got == want, "χ_D at {c:?}: {got}");
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let chars = all_characters();
    let passing: Vec<usize> = (1..16)
        .filter(|&i| {
            let x = &chars[i];
            let restr = (1..=4).all(|k| restricts_nontrivially(x, &lattice::curve_lattice(k)));
            restr && check_2divisible(x).unwrap()
        })
        .collect();
    ensure!(passing == [1, 2, 3], "passing characters {passing:?}");
    let p = product_lattice();
    let printed = [
        vec![e1(), lambda1().add(&e2()), lambda2().add(&e2()), e2().scale(&rat(2))],
        vec![lambda2().add(&e1()), lambda1(), e2(), e1().scale(&rat(2))],
        vec![lambda1().add(&e2()), lambda2(), e2().scale(&rat(2)), e1().add(&e2())],
    ];
    for (i, b) in printed.into_iter().enumerate() {
        let k = kernel_lattice(&chars[i + 1]).unwrap();
        ensure!(hnf(&k, &p).unwrap() == hnf(&LatticeBasis::new(b).unwrap(), &p).unwrap(), "kernel of χ{}", i + 1);
    }
    let w = branch_form().im(&lambda1().add(&e2()), &lambda2().add(&e2()));
    ensure!(w == rat(-6), "witness {w}");
    let c = classify_characters();
    ensure!(c.leftover.len() == 3, "leftover {}", c.leftover.len());
    Ok(())
}

fn criterion_4() -> Outcome {
    let printed = [
        "i 1 i 1", "-i -1 i -1", "i -1 -i 1", "-i 1 -i -1", "i 1 -i 1", "-i 1 i 1", "-i 1 -i 1", "i 1 i -1",
        "i -1 i -1", "-i 1 i -1", "i 1 -i -1", "-i -1 -i 1", "i -1 i 1", "i -1 -i -1", "-i -1 i 1", "-i -1 -i -1",
    ];
    let roots = square_roots(&cover_branch_bundle());
    ensure!(roots.len() == 16, "{} roots", roots.len());
    for (k, (r, want)) in roots.iter().zip(printed).enumerate() {
        let got = r.character.labels().join(" ");
        ensure!(got == want, "ψ{} = {got}", k + 1);
        ensure!(tensor(r, r).unwrap().same_class(&cover_branch_bundle()), "ψ{}² ≠ D_A", k + 1);
    }
    let none = square_roots(&branch_bundle()).len();
    ensure!(none == 0, "D_A' has {none} roots");
    Ok(())
}

fn criterion_5() -> Outcome {
    let la = cover_lattice();
    for (name, g) in [("g2", g2()), ("g3", g3())] {
        ensure!(rational_rep(&g, &la).is_ok(), "{name} does not preserve Λ_A");
        ensure!(preserves_divisor(&g).unwrap(), "{name} does not preserve D_A");
    }
    ensure!(verify_presentation(&g2(), &g3()), "presentation");
    let h = minus_identity();
    ensure!(g2().pow(2).same_map(&h, &la) && g3().pow(3).same_map(&h, &la), "g2² or g3³");
    ensure!(tau().compose(&sigma()).same_map(&sigma().compose(&tau()), &la), "[τ, σ] ≠ 0");
    let p = tangent_points();
    let cr = cross_ratio([&p[0], &p[1], &p[2], &p[3]]).unwrap();
    ensure!(Some(cr.clone()) == EisRat::zeta().inverse(), "cross ratio {cr}");
    let g2t = m([[(1, 0), (-2, 2)], [(0, 1), (-1, 0)]]);
    let g3t = m([[(-1, 0), (0, 0)], [(1, -1), (0, 1)]]);
    let hits: Vec<EisMatrix> = search_generators(3).into_iter().map(|h| h.tilde).collect();
    for t in [g2t.clone(), g2t.neg(), g3t.clone(), g3t.neg()] {
        ensure!(hits.contains(&t), "search misses {t}");
    }
    ensure!(from_tilde(&g2t) == m([[(0, 1), (-1, 0)], [(0, 1), (0, -1)]]), "N g̃₂ N⁻¹");
    ensure!(from_tilde(&g3t) == m([[(0, 0), (-1, 1)], [(1, -1), (-1, 1)]]), "N g̃₃ N⁻¹");
    Ok(())
}

fn rho_all() -> Result<[Permutation; 5], String> {
    let roots = cover_square_roots();
    let r = |g| action_on_square_roots(&g, &roots).map_err(|e| e.to_string());
    Ok([r(g2())?, r(g3())?, r(tau())?, r(minus_identity())?, r(sigma())?])
}

fn criterion_6() -> Outcome {
    let printed = [
        "(1 13 7 12)(2 9 14 16)(3 5 15 6)(4 11 8 10)",
        "(1 13 5 7 12 6)(2 4 11 14 8 10)(3 15)(9 16)",
        "(1 7)(2 14)(3 15)(4 8)(5 6)(9 16)(10 11)(12 13)",
        "(1 7)(2 14)(3 15)(4 8)(5 6)(9 16)(10 11)(12 13)",
        "(1 14)(2 7)(3 16)(4 5)(6 8)(9 15)(10 12)(11 13)",
    ];
    for (got, want) in rho_all()?.iter().zip(printed) {
        ensure!(*got == Permutation::parse(16, want).unwrap(), "{got} ≠ {want}");
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let [r2, r3, rt, _, rs] = rho_all()?;
    let aut = PermGroup::new(16, vec![r2.clone(), r3.clone(), rt.clone()]).unwrap();
    let kl = PermGroup::new(16, vec![r2, r3, rt, rs]).unwrap();
    ensure!(aut.order().unwrap() == 24, "|Aut image| = {}", aut.order().unwrap());
    ensure!(aut.fingerprint().unwrap() == gl2_f3_fingerprint(true), "Aut fingerprint {}", aut.fingerprint().unwrap());
    let orbits = aut.orbits();
    ensure!(
        orbits == vec![vec![1, 3, 5, 6, 7, 12, 13, 15], vec![2, 4, 8, 9, 10, 11, 14, 16]],
        "Aut orbits {orbits:?}"
    );
    ensure!(kl.order().unwrap() == 48, "|Kl image| = {}", kl.order().unwrap());
    ensure!(kl.fingerprint().unwrap() == gl2_f3_fingerprint(false), "Kl fingerprint {}", kl.fingerprint().unwrap());
    ensure!(kl.orbits().len() == 1, "Kl orbits {:?}", kl.orbits());
    Ok(())
}

fn criterion_8() -> Outcome {
    for (l2, ms) in [(8, vec![3]), (6, vec![2, 2])] {
        let r = resolution_invariants(&SingularityProfile::new(l2, ms.clone()).unwrap());
        ensure!(r.chi == num::rational::Ratio::from_integer(1) && r.k2 == 8, "({l2}, {ms:?}) → ({}, {})", r.chi, r.k2);
    }
    let e = enumerate_branch_profiles(8).unwrap();
    let cases: Vec<(CaseLabel, i64)> = e.cases.iter().map(|c| (c.label, c.d2)).collect();
    ensure!(cases == [(CaseLabel::I, 32), (CaseLabel::II, 24)], "cases {cases:?}");
    ensure!(double_cover_invariants(24, 2) == Ok((1, 8)), "double cover {:?}", double_cover_invariants(24, 2));
    let b = ball_quotient_check_with(8, 1);
    ensure!(b.four_curves == (12, 12) && b.two_curves == (12, 12), "ball quotient {b:?}");
    let g = gamma_action_on_sigma();
    ensure!(g.order == 3, "γ has order {}", g.order);
    ensure!(g.on_sigma == Permutation::parse(3, "(1 3 2)").unwrap(), "γ on Σ: {}", g.on_sigma);
    Ok(())
}

fn random_matrix(rng: &mut StdRng) -> EisMatrix {
    let mut c = || (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    m([[c(), c()], [c(), c()]])
}

fn cocycle_holds(l: &LineBundleClass, rng: &mut StdRng) -> bool {
    let e = &l.character.form;
    (0..200).all(|_| {
        let n: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
        let k: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let sum: Vec<i64> = n.iter().zip(&k).map(|(a, b)| a + b).collect();
        let mut im = rat(0);
        for i in 0..4 {
            for j in 0..4 {
                im += rat(n[i] * k[j]) * e.entry(i, j);
            }
        }
        let lhs = l.character.eval_coords(&big(&sum));
        let rhs = l.character.eval_coords(&big(&n)) + l.character.eval_coords(&big(&k)) + im / rat(2);
        frac(&(lhs - rhs)) == rat(0)
    })
}

fn criterion_9() -> Outcome {
    let (p, a) = (product_lattice(), cover_lattice());
    let mut gram = vec![vec![rat(0); 4]; 4];
    for i in 1..=4 {
        for j in 1..=4 {
            let x = intersection_number(&curve_form(i), &curve_form(j), &p).unwrap();
            ensure!(x == BigInt::from((i != j) as i64), "E{i}'·E{j}' = {x}");
            let y = intersection_number(&curve_form(i), &curve_form(j), &a).unwrap();
            ensure!(y == BigInt::from(2 * (i != j) as i64), "E{i}·E{j} = {y}");
            gram[i - 1][j - 1] = num::BigRational::from_integer(x);
        }
    }
    ensure!(lattice::det_q(&gram) == rat(-3), "Gram det {}", lattice::det_q(&gram));
    let d2 = self_intersection(&branch_bundle().form, &a).unwrap();
    ensure!(d2 == BigInt::from(24), "D_A² = {d2}");
    let theta = curve_form(1).add(&curve_form(2));
    ensure!(im_on_lattice(&theta, &p).pfaffian() == rat(1), "product polarization Pfaffian");

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut bundles: Vec<LineBundleClass> = (1..=4).map(curve_bundle).collect();
    bundles.push(branch_bundle());
    bundles.push(cover_branch_bundle());
    bundles.extend(cover_square_roots());
    for (i, l) in bundles.iter().enumerate() {
        ensure!(cocycle_holds(l, &mut rng), "cocycle fails for bundle {i}");
    }
    for t in 0..100 {
        let (f, g) = (random_matrix(&mut rng), random_matrix(&mut rng));
        let l = tensor(&curve_bundle(1 + t % 4), &branch_bundle()).unwrap();
        let step = pullback_hom(&pullback_hom(&l, &f, &p).unwrap(), &g, &p).unwrap();
        let direct = pullback_hom(&l, &f.mul(&g), &p).unwrap();
        ensure!(step == direct, "functoriality fails for f = {f}, g = {g}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("table reproduction", criterion_1),
        ("hermitian classes", criterion_2),
        ("character classification", criterion_3),
        ("square roots", criterion_4),
        ("symmetry group", criterion_5),
        ("permutation action", criterion_6),
        ("orbit theorem", criterion_7),
        ("numerical invariants", criterion_8),
        ("cross-module consistency", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut ok = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match res {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
