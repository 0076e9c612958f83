//! Acceptance gate: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. Exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use fanocone_core::character::{index_character, leading_coefficient, sufficient_bound, CharacterFormula};
use fanocone_core::degeneration::{additivity, composed_equals_two_step, WeightedPoint};
use fanocone_core::futaki::{futaki, futaki_with, FutakiMethod, ProductTestConfig};
use fanocone_core::ideal::MonomialIdeal;
use fanocone_core::singularity::validate;
use fanocone_core::volume::*;
use fanocone_core::ToricConeData;
use num_rational::BigRational;
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn c1_affine_minimization() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut ok = true;
    for n in 2..=4 {
        let start = Instant::now();
        let d = ToricConeData::affine_space(n);
        let f = build_volume_form(&d).unwrap();
        let r = minimize(&d, &f, &MinimizeOptions::default()).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let nn = (n as f64).powi(n as i32);
        let xerr = r.minimizer.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
        let herr = (r.min_hvol - nn).abs() / nn;
        ok &= r.certificate == Certificate::Converged && xerr < 1e-8 && herr < 1e-9 && secs < 1.0;
        worst = (worst.0.max(xerr), worst.1.max(herr), worst.2.max(secs));
    }
    outcome(
        ok,
        format!("max |xi*-1| = {:.1e}, max rel hvol err = {:.1e}, max time = {:.3}s", worst.0, worst.1, worst.2),
    )
}

fn c2_conifold() -> Outcome {
    let (a, b, grid) = conifold_grid_minimum();
    let d = ToricConeData::conifold();
    let f = build_volume_form(&d).unwrap();
    let r = minimize(&d, &f, &MinimizeOptions::default()).unwrap();
    let rel = (r.min_hvol - grid).abs() / grid;
    let verdict = is_ksemistable(&d, &f, &r.minimizer, 1e-8, &MinimizeOptions::default()).unwrap();
    outcome(
        rel < 1e-6 && verdict == Verdict::Yes,
        format!(
            "min hvol = {:.12}, grid oracle = {grid:.12} at ({a:.6}, {b:.6}), rel = {rel:.1e}, verdict = {verdict:?}",
            r.min_hvol
        ),
    )
}

fn c3_rescaling() -> Outcome {
    let mut r = rng(3003);
    let mut bad = 0;
    for i in 0..100 {
        let d = random_klt_cone(&mut r, 1 + i % 4);
        let f = build_volume_form(&d).unwrap();
        let g = validate(&d).unwrap();
        let xi = random_reeb_rational(&mut r, &d);
        let lambda = q(r.gen_range(1..=100), r.gen_range(1..=10));
        let scaled: Vec<BigRational> = xi.iter().map(|x| x * &lambda).collect();
        if normalized_volume_of(&g, &f, &xi).unwrap() != normalized_volume_of(&g, &f, &scaled).unwrap() {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} of 100 exact comparisons differ"))
}

fn c4_criticality() -> Outcome {
    let mut r = rng(4004);
    let mut worst = 0.0f64;
    let mut max_witness_fut = f64::NEG_INFINITY;
    let mut cases = vec![ToricConeData::affine_space(2), ToricConeData::affine_space(3), ToricConeData::conifold()];
    for i in 0..20 {
        cases.push(random_klt_cone(&mut r, 2 + i % 3));
    }
    for d in &cases {
        let f = build_volume_form(d).unwrap();
        let m = minimize(d, &f, &MinimizeOptions::default()).unwrap();
        for i in 0..d.rank() {
            let mut e = vec![0.0; d.rank()];
            e[i] = 1.0;
            let rep = futaki(d, &f, &ProductTestConfig::new(m.minimizer.clone(), e)).unwrap();
            worst = worst.max(rep.fut.abs());
        }
        let xi0 = random_reeb(&mut r, d);
        if let Verdict::No { witness } = is_ksemistable(d, &f, &xi0, 1e-6, &MinimizeOptions::default()).unwrap() {
            let rep = futaki(d, &f, &ProductTestConfig::new(xi0, witness)).unwrap();
            max_witness_fut = max_witness_fut.max(rep.fut);
        } else {
            max_witness_fut = f64::INFINITY;
        }
    }
    outcome(
        worst < 1e-8 && max_witness_fut < 0.0,
        format!(
            "max |Fut(xi*, e_i)| = {worst:.1e}, max Fut(witness) = {max_witness_fut:.3e} over {} cones",
            cases.len()
        ),
    )
}

fn c5_linearity() -> Outcome {
    let mut r = rng(5005);
    let mut worst_lin = 0.0f64;
    let mut worst_con = 0.0f64;
    for i in 0..100 {
        let d = random_klt_cone(&mut r, 1 + i % 4);
        let f = build_volume_form(&d).unwrap();
        let xi = random_reeb(&mut r, &d);
        let n = d.rank();
        let e1: Vec<f64> = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
        let e2: Vec<f64> = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
        let (a, b): (f64, f64) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let comb: Vec<f64> = e1.iter().zip(&e2).map(|(x, y)| a * x + b * y).collect();
        let fut = |eta: &[f64]| futaki(&d, &f, &ProductTestConfig::new(xi.clone(), eta.to_vec())).unwrap();
        let (f1, f2, fc) = (fut(&e1), fut(&e2), fut(&comb));
        let lin_scale = (a * f1.fut).abs() + (b * f2.fut).abs() + fc.fut.abs();
        if lin_scale > 0.0 {
            worst_lin = worst_lin.max((fc.fut - a * f1.fut - b * f2.fut).abs() / lin_scale);
        }
        let g = f.gradient(xi.as_slice()).unwrap();
        let v = f.eval(xi.as_slice()).unwrap();
        let gamma = validate(&d).unwrap().to_f64();
        let a_xi: f64 = gamma.iter().zip(&xi).map(|(x, y)| x * y).sum();
        for (rep, eta) in [(&f1, &e1), (&f2, &e2), (&fc, &comb)] {
            // Residuals are measured against the size of the terms summed in
            // the directional derivative, so exact cancellation to zero is not
            // divided by rounding noise.
            let terms: f64 = g.iter().zip(&rep.t_xi_eta).map(|(x, y)| (x * y).abs()).sum::<f64>() / v;
            let a_eta: f64 = gamma.iter().zip(eta).map(|(x, y)| x * y).sum();
            let g_eta: f64 = g.iter().zip(eta).map(|(x, y)| x * y).sum();
            let hvol_terms = a_eta.abs() + (a_xi * g_eta / (n as f64 * v)).abs();
            let s = rep.fut.abs().max(rep.fut_hvol.abs()).max(terms).max(hvol_terms);
            if s > 0.0 {
                worst_con = worst_con.max((rep.fut - rep.fut_hvol).abs() / s);
            }
        }
    }
    outcome(
        worst_lin < 1e-9 && worst_con < 1e-9,
        format!("max linearity residual = {worst_lin:.1e}, max D_-T vol vs D_-eta hvol residual = {worst_con:.1e}"),
    )
}

fn c6_hand_futaki() -> Outcome {
    let d = ToricConeData::affine_space(2);
    let f = build_volume_form(&d).unwrap();
    let cfg = ProductTestConfig::new(vec![1.0, 2.0], vec![1.0, 0.0]);
    let a = futaki(&d, &f, &cfg).unwrap();
    let fd = futaki_with(&d, &f, &cfg, FutakiMethod::FiniteDifference).unwrap();
    let err = (a.fut - 0.5).abs();
    outcome(
        err < 1e-10 && (fd.fut - 0.5).abs() < 1e-6,
        format!("Fut = {:.15}, finite difference = {:.10}", a.fut, fd.fut),
    )
}

fn c7_index_character() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (d, xi) in [
        (ToricConeData::affine_space(2), vec![1.0, 1.0]),
        (ToricConeData::affine_space(2), vec![1.0, 2.0]),
        (ToricConeData::affine_space(3), vec![1.0, 1.0, 1.0]),
        (ToricConeData::conifold(), vec![1.5, 1.5, 3.0]),
    ] {
        let f = build_volume_form(&d).unwrap();
        match leading_coefficient(&d, &f, &xi) {
            Ok(s) => {
                let rel = (s.a0_estimate - s.vol).abs() / s.vol;
                ok &= rel < 1e-3;
                detail.push(format!("{} {:?}: {rel:.1e}", d.label(), xi));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{} {:?}: {e}", d.label(), xi));
            }
        }
    }
    let line = build_volume_form(&ToricConeData::affine_space(1)).unwrap();
    let formula = CharacterFormula::new(&line).unwrap();
    let mut worst = 0.0f64;
    for t in [0.1, 0.5, 1.0, 2.0] {
        let g = 1.0 / (1.0 - (-t as f64).exp());
        let b = sufficient_bound(&line, &[1.0], t).unwrap();
        let e = index_character(&line, &[1.0], t, b).unwrap().value;
        worst = worst.max((e - g).abs()).max((formula.eval(&[1.0], t).unwrap() - g).abs());
    }
    ok &= worst < 1e-9;
    outcome(ok, format!("rel a0 err [{}]; C^1 max err = {worst:.1e}", detail.join(", ")))
}

fn c8_monomial() -> Outcome {
    let mut ok = true;
    let expected = [
        (MonomialIdeal::from_i64(2, &[vec![1, 0], vec![0, 1]]).unwrap(), q(4, 1)),
        (MonomialIdeal::from_i64(2, &[vec![2, 0], vec![0, 1]]).unwrap(), q(9, 2)),
        (MonomialIdeal::from_i64(2, &[vec![3, 0], vec![0, 1]]).unwrap(), q(16, 3)),
        (MonomialIdeal::maximal(3), q(27, 1)),
    ];
    for (a, v) in &expected {
        ok &= a.normalized_multiplicity() == *v;
    }
    let mut r = rng(8008);
    let (mut below, mut power_bad) = (0, 0);
    for i in 0..200 {
        let n = 1 + i % 4;
        let a = random_primary_ideal(&mut r, n);
        if a.normalized_multiplicity() < BigRational::from_integer(a.smooth_bound()) {
            below += 1;
        }
        if n <= 3 {
            let a2 = a.power(2).unwrap();
            if a2.normalized_multiplicity() != a.normalized_multiplicity() {
                power_bad += 1;
            }
        }
    }
    ok &= below == 0 && power_bad == 0;
    outcome(ok, format!("exact values match; {below} of 200 below n^n; {power_bad} power-invariance failures"))
}

fn c9_git_toy() -> Outcome {
    let p = WeightedPoint::from_weights(&[(0, 0), (1, -5)]).unwrap();
    let k = composed_equals_two_step(&p, 1).unwrap().min_k();
    let mut r = rng(9009);
    let (mut mismatch, mut nonadditive) = (0, 0);
    for _ in 0..1000 {
        let s = random_support(&mut r);
        let mk = composed_equals_two_step(&s, 1).unwrap().min_k();
        if mk as i64 != brute_force_min_k(&s, 100) {
            mismatch += 1;
        }
        for kk in mk..mk + 10 {
            if additivity(&s, kk).unwrap().residual != 0 {
                nonadditive += 1;
            }
        }
    }
    outcome(
        k == 6 && mismatch == 0 && nonadditive == 0,
        format!("min_k = {k} on {{(0,0),(1,-5)}}; {mismatch} of 1000 scans disagree; {nonadditive} nonzero residuals"),
    )
}

fn c10_convexity() -> Outcome {
    let mut r = rng(10010);
    let mut violations = 0;
    for i in 0..1000 {
        let d = random_klt_cone(&mut r, 2 + i % 3);
        let f = build_volume_form(&d).unwrap();
        let a = random_reeb_rational(&mut r, &d);
        let b = random_reeb_rational(&mut r, &d);
        let m: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| (x + y) / q(2, 1)).collect();
        if f.eval(&m).unwrap() * q(2, 1) > f.eval(&a).unwrap() + f.eval(&b).unwrap() {
            violations += 1;
        }
    }
    let mut not_pd = 0;
    let mut converged = 0;
    let mut min_eig = f64::INFINITY;
    for i in 0..50 {
        let d = random_klt_cone(&mut r, 2 + i % 3);
        let f = build_volume_form(&d).unwrap();
        let res = minimize(&d, &f, &MinimizeOptions::default()).unwrap();
        if res.certificate == Certificate::Converged {
            converged += 1;
            let e = res.slice_hessian_min_eig.unwrap();
            min_eig = min_eig.min(e);
            if e <= 0.0 {
                not_pd += 1;
            }
        }
    }
    outcome(
        violations == 0 && not_pd == 0,
        format!("{violations} midpoint violations in 1000; {not_pd} of {converged} converged minimizers not PD (min eig {min_eig:.3e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 affine-space minimization", c1_affine_minimization),
        ("2 conifold minimum and verdict", c2_conifold),
        ("3 exact rescaling invariance", c3_rescaling),
        ("4 Futaki criticality and witness", c4_criticality),
        ("5 Futaki linearity and consistency", c5_linearity),
        ("6 hand-computed Futaki", c6_hand_futaki),
        ("7 index character", c7_index_character),
        ("8 monomial normalized multiplicity", c8_monomial),
        ("9 GIT toy composition", c9_git_toy),
        ("10 convexity suite", c10_convexity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.ok {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
