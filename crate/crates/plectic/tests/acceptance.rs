//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance here is exact equality over the rationals; the runtime
//! budgets are asserted per criterion.

use plectic::comb::{koszul_sign, DegreeVector, Permutation};
use plectic::graded::{contract_left, contract_right, de_rham, lie_derivative};
use plectic::homotopy::{
    bracket2, bracket3, bracket_k, check_jacobi, check_leibniz_first, check_leibniz_second_dim2,
    check_leibniz_third_dim2, leibniz1, leibniz_k, rogers_relation,
};
use plectic::nplectic::SolveStatus;
use plectic::parse::{parse_cotensor, parse_structure, parse_tensor};
use plectic::pinfty::{build_structure_maps, check_structure_equation};
use plectic::suites::PoissonSampler;
use plectic::{Cotensor, NPlecticStructure, PoissonCotensor, Polynomial, Rat};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

fn fixture() -> (NPlecticStructure, BTreeMap<String, Cotensor>) {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/r6_3plectic.plec"
    ))
    .expect("fixture file");
    parse_structure(&text).unwrap().build().unwrap()
}

fn criterion(n: usize, what: &str, started: Instant, budget: Duration, passed: bool) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!(
        "acceptance criterion {n}: {status} ({what}; {} ms, budget {} s)",
        started.elapsed().as_millis(),
        budget.as_secs()
    );
    assert!(passed, "criterion {n} failed: {what}");
    assert!(
        started.elapsed() < budget,
        "criterion {n} exceeded its runtime budget ({:?} > {:?})",
        started.elapsed(),
        budget
    );
}

#[test]
fn criterion_1_counterexample_reproduction() {
    let started = Instant::now();
    let (s, named) = fixture();
    // (a) omega is a cocycle
    let a = s.verify_cocycle();
    // (b) the reference witnesses verify exactly; the constraint witnesses
    // carry the factor order the contraction convention forces (see the
    // README section on conventions): y1 = (x1^2 x3 - x4) d1^d3 etc.
    let f1 = &named["f1"];
    let f2 = &named["f2"];
    let x1 = parse_tensor("x1^2 d1 - d2 - 2*x1*x3 d3", 6).unwrap();
    let x2 = parse_tensor("-d1 - x2^2 d2 + 2*x2*x4 d4", 6).unwrap();
    let y1 = parse_tensor("(x1^2*x3 - x4) d1^d3", 6).unwrap();
    let y2 = parse_tensor("-(x3 + x2^2*x4) d2^d4", 6).unwrap();
    let b = s.verify_hamilton(f1, &x1)
        && s.verify_hamilton(f2, &x2)
        && s.verify_constraint(f1, &y1)
        && s.verify_constraint(f2, &y2);
    // (c) the Schouten bracket of the two Hamilton fields reduces to the Lie
    // bracket with value 2x1 d1 + 2x2 d2 - 2x3 d3 - 2x4 d4; the opposite
    // argument orientation would contradict the bracket's defining Cartan
    // rule, so the value is pinned to schouten(x1, x2) and its negative to
    // schouten(x2, x1).
    let v = parse_tensor("2*x1 d1 + 2*x2 d2 - 2*x3 d3 - 2*x4 d4", 6).unwrap();
    let c = plectic::schouten(&x1, &x2) == v && plectic::schouten(&x2, &x1) == v.neg();
    // (d) L_v(dx1^dx2) = 4 dx1^dx2 for that bracket value
    let dx12 = parse_cotensor("dx1^dx2", 6).unwrap();
    let d = lie_derivative(&v, &dx12).unwrap() == dx12.scale(&Rat::from_integer(4.into()));
    // and the doubled-bracket witness identity behind it:
    // i_{2 schouten(x2,x1)} omega = d{f1,f2}
    let p1 = PoissonCotensor::from_witnesses(&s, f1.clone(), x1.clone(), y1.clone()).unwrap();
    let p2 = PoissonCotensor::from_witnesses(&s, f2.clone(), x2.clone(), y2.clone()).unwrap();
    let br = bracket2(&s, &p1, &p2).unwrap();
    let d2 = br.hamilton == plectic::schouten(&x2, &x1).scale(&Rat::from_integer(2.into()));
    // (e) f3 has no constraint witness at degree bound 4 (and the obstruction
    // is degree-independent since omega has constant coefficients)
    let e = s.solve_constraint(&named["f3"]).status == SolveStatus::NoSolutionWithinBound;
    criterion(1, "counterexample reproduction", started, Duration::from_secs(5), a && b && c && d && d2 && e);
}

#[test]
fn criterion_2_presymplectic_counterexample() {
    let started = Instant::now();
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/presymplectic_r3.plec"
    ))
    .unwrap();
    let (s, named) = parse_structure(&text).unwrap().build().unwrap();
    let f = &named["f"]; // dx3
    let xv = parse_tensor("d1", 3).unwrap();
    let lhs = contract_right(&contract_left(f, &xv), s.omega());
    let rhs = f.wedge(&contract_right(&xv, s.omega()));
    let expect = parse_cotensor("-dx2^dx3", 3).unwrap();
    let ok = lhs.is_zero() && rhs == expect && !rhs.is_zero();
    criterion(2, "presymplectic i_{j_f x} omega = 0 vs f ^ i_x omega != 0", started, Duration::from_secs(1), ok);
}

#[test]
fn criterion_3_contraction_product_rule_suite() {
    let started = Instant::now();
    let (s, _) = fixture();
    let mut sampler = PoissonSampler::new(&s, 0xC3);
    let mut done = 0usize;
    let mut ok = true;
    // random y, x of tensor degree <= 3 with polynomial degree <= 2,
    // f := i_y omega; the identity i_{j_{(i_y f)} x} f = i_y f ^ i_x f
    while done < 200 {
        let qy = 1 + done % 3;
        let qx = 1 + (done / 3) % 3;
        let y = sampler.raw_tensor(qy, 2);
        let x = sampler.raw_tensor(qx, 2);
        let f = contract_right(&y, s.omega());
        if f.is_zero() || x.is_zero() {
            continue;
        }
        let iyf = contract_right(&y, &f);
        let lhs = contract_right(&contract_left(&iyf, &x), &f);
        let rhs = iyf.wedge(&contract_right(&x, &f));
        ok &= lhs == rhs;
        // degree corollary: both sides vanish unless |x|,|y| <= p and |x|+|y| >= p
        let p = f.homogeneous_degree().unwrap_or(0);
        if !(qx <= p && qy <= p && qx + qy >= p) {
            ok &= lhs.is_zero() && rhs.is_zero();
        }
        done += 1;
    }
    criterion(3, "200 instances of the contraction product rule", started, Duration::from_secs(60), ok);
}

#[test]
fn criterion_4_koszul_sign_oracle_equivalence() {
    let started = Instant::now();
    // adjacent-transposition brute force, independent of the inversion count
    fn oracle(images: &[usize], degs: &[i64]) -> i8 {
        let mut arr = images.to_vec();
        let mut sign = 1i8;
        for i in 0..arr.len() {
            for j in 0..arr.len() - 1 - i {
                if arr[j] > arr[j + 1] {
                    if (degs[arr[j] - 1] * degs[arr[j + 1] - 1]) % 2 != 0 {
                        sign = -sign;
                    }
                    arr.swap(j, j + 1);
                }
            }
        }
        sign
    }
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..5 {
        let mut next = Vec::new();
        for p in &perms {
            for v in 1..=5 {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    perms.retain(|p| p.len() == 5);
    let mut cases = 0usize;
    let mut ok = true;
    for p in &perms {
        let sigma = Permutation::new(p.clone());
        for code in 0..3usize.pow(5) {
            let mut c = code;
            let degs: Vec<i64> = (0..5)
                .map(|_| {
                    let d = (c % 3) as i64;
                    c /= 3;
                    d
                })
                .collect();
            let direct = koszul_sign(&sigma, &DegreeVector(degs.clone())).unwrap();
            ok &= direct == oracle(p, &degs);
            cases += 1;
        }
    }
    criterion(4, &format!("koszul oracle equivalence over {cases} cases"), started, Duration::from_secs(30), ok && cases == 29160);
}

#[test]
fn criterion_5_homotopy_jacobi_suites() {
    let started = Instant::now();
    let (s, _) = fixture();
    let mut sampler = PoissonSampler::new(&s, 0xC5);
    let mut ok = true;
    for t in 0..50 {
        let (a, b, c) = (
            sampler.sample(2).expect("poisson sample"),
            sampler.sample(2).expect("poisson sample"),
            sampler.sample(2).expect("poisson sample"),
        );
        let r2 = check_jacobi(&s, &[a.clone(), b.clone()]).unwrap();
        let r3 = check_jacobi(&s, &[a, b, c]).unwrap();
        ok &= r2.passed && r3.passed;
        if !ok {
            println!("jacobi failure at triple {t}");
            break;
        }
    }
    for t in 0..10 {
        let args: Vec<PoissonCotensor> =
            (0..4).map(|_| sampler.sample(2).expect("poisson sample")).collect();
        let r4 = check_jacobi(&s, &args).unwrap();
        ok &= r4.passed;
        if !ok {
            println!("jacobi k=4 failure at quadruple {t}");
            break;
        }
    }
    criterion(5, "jacobi k=2,3 on 50 triples and k=4 on 10 quadruples", started, Duration::from_secs(600), ok);
}

#[test]
fn criterion_6_leibniz_equation_suites() {
    let started = Instant::now();
    let (s, _) = fixture();
    let mut sampler = PoissonSampler::new(&s, 0xC6);
    let mut ok = true;
    let triple_profiles: [[usize; 3]; 5] = [[2, 1, 0], [1, 1, 0], [2, 0, 1], [1, 0, 2], [2, 0, 0]];
    let mut done = 0;
    while done < 50 {
        let profile = triple_profiles[done % triple_profiles.len()];
        let Some(args) = profile
            .iter()
            .map(|&p| sampler.sample(p))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        match check_leibniz_first(&s, &args[..1], (&args[1], &args[2])) {
            Ok(rep) => {
                ok &= rep.passed;
                if !rep.passed {
                    println!("first Leibniz failure at triple {done} profile {profile:?}");
                    break;
                }
                done += 1;
            }
            Err(_) => continue, // witness-infeasible draw, redraw
        }
    }
    let quad_profiles: [[usize; 4]; 6] =
        [[1, 0, 1, 0], [1, 1, 1, 0], [0, 1, 1, 0], [2, 0, 1, 0], [1, 0, 0, 1], [1, 0, 2, 0]];
    for which in 0..2 {
        let mut done = 0;
        while done < 20 {
            let profile = quad_profiles[done % quad_profiles.len()];
            let Some(args) = profile
                .iter()
                .map(|&p| sampler.sample(p))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let quad = [args[0].clone(), args[1].clone(), args[2].clone(), args[3].clone()];
            let rep = if which == 0 {
                check_leibniz_second_dim2(&s, &quad)
            } else {
                check_leibniz_third_dim2(&s, &quad)
            };
            match rep {
                Ok(rep) => {
                    ok &= rep.passed;
                    if !rep.passed {
                        println!("{} Leibniz failure at quadruple {done}", if which == 0 { "second" } else { "third" });
                        break;
                    }
                    done += 1;
                }
                Err(_) => continue,
            }
        }
    }
    criterion(6, "first (50 triples), second and third (20 quadruples) dim-2 Leibniz", started, Duration::from_secs(600), ok);
}

#[test]
fn criterion_7_rogers_relation_suite() {
    let started = Instant::now();
    let (s, _) = fixture();
    let mut sampler = PoissonSampler::new(&s, 0xC7);
    let mut ok = true;
    for _ in 0..50 {
        let a = sampler.sample(2).expect("poisson sample");
        let b = sampler.sample(2).expect("poisson sample");
        ok &= rogers_relation(&s, &a, &b).unwrap().passed;
    }
    criterion(7, "rogers relation on 50 random pairs", started, Duration::from_secs(120), ok);
}

#[test]
fn criterion_8_symplectic_degeneration() {
    let started = Instant::now();
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/symplectic_r2.plec"
    ))
    .unwrap();
    let (s, _) = parse_structure(&text).unwrap().build().unwrap();
    let mut sampler = PoissonSampler::new(&s, 0xC8);
    let mut ok = true;
    for _ in 0..20 {
        let pa = sampler.sample(0).expect("function sample");
        let pb = sampler.sample(0).expect("function sample");
        let pc = sampler.sample(0).expect("function sample");
        let pd = sampler.sample(0).expect("function sample");
        // independent classical oracle: {f,g} = d1(f) d2(g) - d2(f) d1(g)
        let fa = pa.f.terms().next().map(|(_, p)| p.clone()).unwrap_or_else(|| Polynomial::zero(2));
        let fb = pb.f.terms().next().map(|(_, p)| p.clone()).unwrap_or_else(|| Polynomial::zero(2));
        let classical = fa.partial(1).mul(&fb.partial(2)).sub(&fa.partial(2).mul(&fb.partial(1)));
        let br = bracket2(&s, &pa, &pb).unwrap();
        ok &= br.value == Cotensor::scalar(classical.scale_int(2));
        // all k >= 3 brackets vanish on functions
        ok &= bracket3(&s, &pa, &pb, &pc).unwrap().value.is_zero();
        ok &= bracket_k(&s, &[pa.clone(), pb.clone(), pc.clone(), pd.clone()]).unwrap().value.is_zero();
        // Leibniz operators vanish; the k=2 Jacobi and first Leibniz equations hold strictly
        ok &= leibniz1(&s, &pa, &pb, &pc).unwrap().value.is_zero();
        ok &= leibniz_k(&s, &[pa.clone(), pb.clone()], (&pc, &pd)).unwrap().value.is_zero();
        ok &= check_jacobi(&s, &[pa.clone(), pb.clone()]).unwrap().passed;
        ok &= check_leibniz_first(&s, &[pa.clone()], (&pb, &pc)).unwrap().passed;
    }
    criterion(8, "bracket2 = 2x classical; higher operators vanish on functions", started, Duration::from_secs(60), ok);
}

#[test]
fn criterion_9_witness_independence() {
    let started = Instant::now();
    let (s, _) = fixture();
    let mut sampler = PoissonSampler::new(&s, 0xC9);
    // kernel elements to perturb by: bivectors and trivectors
    let k2 = s.kernel_basis(2, 1);
    let k3 = s.kernel_basis(3, 1);
    assert!(!k2.is_empty() && !k3.is_empty());
    let mut ok = true;
    let mut t = 0;
    while t < 20 {
        let a = sampler.sample(2).expect("poisson sample");
        let b = sampler.sample(2).expect("poisson sample");
        let c = sampler.sample(2).expect("poisson sample");
        // perturb a's constraint witness by a bivector kernel element; the
        // vector-degree kernel is trivial on this structure, so the Hamilton
        // perturbation uses a trivector witness of a 0-form instead
        let a_pert = PoissonCotensor::from_witnesses_with_degree(
            &s,
            a.f.clone(),
            a.x.clone(),
            a.y.add(&k2[t % k2.len()]),
            a.form_degree(),
        )
        .unwrap();
        let g = sampler.sample(0).expect("function sample");
        let g_pert = PoissonCotensor::from_witnesses_with_degree(
            &s,
            g.f.clone(),
            g.x.add(&k3[t % k3.len()]),
            g.y.clone(),
            g.form_degree(),
        )
        .unwrap();
        // a witness-infeasible Leibniz draw is redrawn, like the suites do
        let (Ok(l), Ok(l_pert)) =
            (leibniz1(&s, &b, &a, &g), leibniz1(&s, &b, &a_pert, &g_pert))
        else {
            continue;
        };
        ok &= l.value == l_pert.value;
        ok &= bracket2(&s, &a, &b).unwrap().value == bracket2(&s, &a_pert, &b).unwrap().value;
        ok &= bracket3(&s, &a, &b, &c).unwrap().value
            == bracket3(&s, &a_pert, &b, &c).unwrap().value;
        ok &= bracket2(&s, &g, &b).unwrap().value == bracket2(&s, &g_pert, &b).unwrap().value;
        t += 1;
    }
    criterion(9, "bracket values unchanged under kernel perturbation of witnesses", started, Duration::from_secs(120), ok);
}

#[test]
fn criterion_10_structure_equation_instances() {
    let started = Instant::now();
    let (s, _) = fixture();
    let maps = build_structure_maps(&s);
    let mut sampler = PoissonSampler::new(&s, 0xCA);
    let mut ok = true;
    let sample = |sampler: &mut PoissonSampler, d: usize| sampler.sample(d).expect("poisson sample");
    // k = 1 profiles: d^2 = 0, derivation, associativity
    for p1 in 1..=3usize {
        let mut attempt = 0;
        let (word, rep) = loop {
            attempt += 1;
            let word: Vec<PoissonCotensor> = match p1 {
                1 => vec![sample(&mut sampler, 2)],
                2 => vec![sample(&mut sampler, 1), sample(&mut sampler, 0)],
                _ => vec![
                    sample(&mut sampler, 1),
                    sample(&mut sampler, 0),
                    sample(&mut sampler, 0),
                ],
            };
            match check_structure_equation(&maps, &[p1], &[word.clone()]) {
                Ok(rep) => break (word, rep),
                Err(_) if attempt < 25 => continue,
                Err(e) => panic!("no witness-solvable instance for profile ({p1}): {e}"),
            }
        };
        ok &= rep.passed;
        // instance-by-instance match with the homotopy checker where one
        // exists: p1 = 1 is d^2 = 0 on the nose
        if p1 == 1 {
            let dd = de_rham(&de_rham(&word[0].f));
            ok &= rep.residual.is_zero() && dd.is_zero();
        }
        if !ok {
            println!("structure equation failure at k=1 p={p1}");
        }
    }
    // k = 2 profiles
    let cases: [(usize, usize); 4] = [(1, 1), (1, 2), (1, 3), (2, 2)];
    for (p1, p2) in cases {
        let mut attempt = 0;
        let rep = loop {
            attempt += 1;
            let word = |sampler: &mut PoissonSampler, p: usize| -> Vec<PoissonCotensor> {
                match p {
                    1 => vec![sample(sampler, 2)],
                    2 => vec![sample(sampler, 1), sample(sampler, 0)],
                    _ => vec![sample(sampler, 1), sample(sampler, 0), sample(sampler, 0)],
                }
            };
            let w1 = word(&mut sampler, p1);
            let w2 = word(&mut sampler, p2);
            match check_structure_equation(&maps, &[p1, p2], &[w1.clone(), w2.clone()]) {
                Ok(rep) => {
                    // cross-check the matching homotopy identity on the same
                    // instanced arguments
                    if (p1, p2) == (1, 1) {
                        let hom = check_jacobi(&s, &[w1[0].clone(), w2[0].clone()]).unwrap();
                        ok &= hom.passed == rep.passed;
                    }
                    if (p1, p2) == (1, 2) {
                        let hom =
                            check_leibniz_first(&s, &w1[..1], (&w2[0], &w2[1])).unwrap();
                        ok &= hom.passed == rep.passed;
                    }
                    break rep;
                }
                Err(_) if attempt < 25 => continue,
                Err(e) => panic!("no witness-solvable instance for profile ({p1},{p2}): {e}"),
            }
        };
        ok &= rep.passed;
        if !rep.passed {
            println!("structure equation failure at k=2 profile ({p1},{p2})");
        }
    }
    criterion(10, "structure equation: k=1 p in 1..3 and k=2 profiles", started, Duration::from_secs(300), ok);
}
