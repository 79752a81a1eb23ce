//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero when a criterion fails that is not listed in `KNOWN_RED`.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use witten_psi::catalog::{catalog, find, lemma_sections, CatalogEntry, SweepExpectation};
use witten_psi::poly::{from_f64, int, rat};
use witten_psi::psi::{check_h1, witness_rechecks, PsiBox, Status};
use witten_psi::quantities::{bracket_a, c0_bound, eta_profile, scaled_profile, slow_variation_scan, QuantityContext};
use witten_psi::spectral::*;
use witten_psi::{parse_poly, Axis, BivariatePoly, H1Verdict, Rational};

/// With the constant 2 the 1-D sign inequality is false for smooth `v` once
/// `λ` is moderately large (the continuum inequality fails, not only the
/// grid check), so criterion 9 is expected to fail.
const KNOWN_RED: &[u32] = &[9];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witten-psi")).args(args).output().expect("run witten-psi")
}

fn entry(name: &str) -> CatalogEntry {
    find(name).expect("catalog entry")
}

fn sweep_entry(e: &CatalogEntry) -> (Vec<SweepRecord>, Duration) {
    let t = Instant::now();
    let policy = GridPolicy { delta: e.delta, ..GridPolicy::default() };
    let r = sweep(&e.potential(), &e.lambdas(), &policy).expect("sweep");
    (r, t.elapsed())
}

fn psi_box(e: &CatalogEntry) -> PsiBox {
    PsiBox::square(e.psi_box.parse().unwrap())
}

fn h1_of(e: &CatalogEntry) -> H1Verdict {
    check_h1(&e.potential(), &psi_box(e), e.alpha, 129).expect("check_h1")
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c1_maire_certificate() -> Outcome {
    let t = Instant::now();
    let out = bin(&["check-psi", "--phi", "x^3 - x*y^2", "--alpha", "0.5", "--box", "1"]);
    let elapsed = t.elapsed();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let h1 = &v["h1"];
    let branches = h1["branches"].as_array().ok_or("no branches")?;
    let target = 1.0 / 3f64.sqrt();
    let mut worst: f64 = 0.0;
    let mut certified = true;
    for b in branches {
        for s in b["samples"].as_array().ok_or("no samples")? {
            certified &= s["slope"]["certified"] == true;
            let slope = s["slope"]["value"].as_f64().unwrap_or(f64::NAN);
            worst = worst.max((slope.abs() - target).abs());
        }
    }
    ensure(
        out.status.code() == Some(0)
            && h1["status"] == "Holds"
            && branches.len() == 2
            && certified
            && worst <= 1e-9
            && elapsed < Duration::from_secs(5),
        format!(
            "status {}, {} branches, all certified {certified}, max |slope| - 1/sqrt(3) {worst:.1e}, {:.2}s",
            h1["status"],
            branches.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_maire_exponents() -> Outcome {
    let mut msgs = Vec::new();
    let mut ok = true;
    for (name, limit) in [("maire-l1", 600), ("maire-l2", 1800)] {
        let e = entry(name);
        let SweepExpectation::SlopeIn { lo, hi } = e.sweep else {
            return Err(format!("{name} has no slope band"));
        };
        let (recs, elapsed) = sweep_entry(&e);
        let fit = fit_exponent(&recs, DEFAULT_TAIL).map_err(|e| e.to_string())?;
        let increasing = recs.windows(2).all(|w| w[1].mu_min > w[0].mu_min);
        ok &= recs.iter().all(|r| r.converged)
            && increasing
            && lo <= fit.slope
            && fit.slope <= hi
            && fit.r_squared >= 0.98
            && elapsed < Duration::from_secs(limit);
        msgs.push(format!(
            "{name}: slope {:.4} in [{lo}, {hi}], r2 {:.4}, increasing {increasing}, lambda up to {}, {:.0}s",
            fit.slope,
            fit.r_squared,
            recs.last().unwrap().lambda,
            elapsed.as_secs_f64()
        ));
    }
    ensure(ok, msgs.join("; "))
}

fn c3_negative_control() -> Outcome {
    let e = entry("well");
    let v = h1_of(&e);
    let rechecked =
        !v.witnesses.is_empty() && v.witnesses.iter().all(|w| witness_rechecks(&e.potential(), &psi_box(&e), e.alpha, w));
    let (recs, _) = sweep_entry(&e);
    let (first, last) = (recs.first().unwrap(), recs.last().unwrap());
    ensure(
        v.status == Status::Fails && rechecked && last.lambda == 1280.0 && last.mu_min < first.mu_min,
        format!(
            "H1 {:?}, {} witnesses, rechecked {rechecked}, mu({}) = {:.4e} < mu({}) = {:.4e}",
            v.status,
            v.witnesses.len(),
            last.lambda,
            last.mu_min,
            first.lambda,
            first.mu_min
        ),
    )
}

fn c4_elliptic_control() -> Outcome {
    let e = entry("elliptic");
    let v = h1_of(&e);
    let (recs, _) = sweep_entry(&e);
    let last = recs.last().unwrap();
    let ratio = last.mu_min / last.lambda;
    ensure(
        v.status == Status::Holds && last.lambda == 1280.0 && last.converged && (3.8..=4.2).contains(&ratio),
        format!("H1 {:?}, mu/lambda at lambda {} = {ratio:.4}", v.status, last.lambda),
    )
}

fn c5_laplacian_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [15, 31, 63] {
        let g = GridSpec::new(1.0, n).unwrap();
        let k = assemble_witten(&parse_poly("x^3 - x*y^2").unwrap(), 0.0, &g);
        let h = g.h();
        let exact = 8.0 / (h * h) * (std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
        let mu = min_eig(&k, 1e-8, 500).map_err(|e| e.to_string())?.mu;
        worst = worst.max(((mu - exact) / exact).abs());
    }
    ensure(worst < 1e-10, format!("n in {{15, 31, 63}}, max relative error {worst:.2e}"))
}

fn c6_dense_oracle() -> Outcome {
    let g = GridSpec::new(0.5, 16).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for e in catalog().into_iter().filter(|e| e.name != "flat") {
        for lambda in [1.0, 100.0] {
            let k = assemble_witten(&e.potential(), lambda, &g);
            let d = k.to_dense();
            let oracle = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| d[i][j]).symmetric_eigen().eigenvalues.min();
            let mu = min_eig(&k, 1e-10, 500).map_err(|e| e.to_string())?.mu;
            worst = worst.max(((mu - oracle) / oracle).abs());
            count += 1;
        }
    }
    ensure(count == 10 && worst < 1e-8, format!("{count} cases, max relative difference {worst:.2e}"))
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32) -> BivariatePoly {
    let mut terms = Vec::new();
    for i in 0..=max_degree {
        for j in 0..=max_degree - i {
            if rng.gen_bool(0.6) {
                terms.push(((i, j), rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))));
            }
        }
    }
    BivariatePoly::from_terms(terms)
}

fn c7_brackets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for _ in 0..50 {
        let phi = random_poly(&mut rng, 6);
        let lambda = rat(rng.gen_range(1..=20), rng.gen_range(1..=3));
        for q in 1..=6u32 {
            for p in 0..=6 - q {
                let a = bracket_a(&phi, &lambda, p, q).map_err(|e| format!("p={p} q={q}: {e}"))?;
                let expect = phi.partial_derivative(Axis::X, q + 1).partial_derivative(Axis::Y, p).scale(&lambda);
                if a != expect {
                    return Err(format!("mismatch at p={p} q={q} for {phi}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact identities over 50 polynomials"))
}

fn c8_profiles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut sup, mut margin) = (0f64, f64::INFINITY);
    let mut short = Vec::new();
    for e in catalog().into_iter().filter(|e| !e.potential().is_zero()) {
        for lambda in [1.0, 100.0] {
            let ctx = QuantityContext::new(e.potential(), lambda).unwrap();
            let c0 = c0_bound(ctx.m);
            let (mut admissible, mut tries) = (0, 0);
            while admissible < 100 && tries < 10_000 {
                tries += 1;
                let x0: Rational = from_f64(rng.gen_range(-1.0..1.0));
                let y0: Rational = from_f64(rng.gen_range(-1.0..1.0));
                let profiles: Vec<_> =
                    [Axis::X, Axis::Y].iter().filter_map(|&a| scaled_profile(&ctx, a, &x0, &y0).ok()).collect();
                if profiles.is_empty() {
                    continue;
                }
                admissible += 1;
                for r in &profiles {
                    sup = sup.max(r.sup_coeff);
                    margin = margin.min(r.peak_value - c0);
                }
                if let Ok(r) = eta_profile(&ctx, &x0, &y0) {
                    sup = sup.max(r.sup_coeff);
                }
            }
            if admissible < 100 {
                short.push(e.name);
            }
        }
    }
    ensure(
        sup <= 1.0 + 1e-12 && margin >= -1e-12 && short.is_empty(),
        format!("100 base points per potential and lambda, max normalized derivative {sup:.6}, min peak margin {margin:.3e}"),
    )
}

fn c9_sign_lemma() -> Outcome {
    let mut bad = Vec::new();
    let mut runs = 0;
    for (name, q, a, b) in lemma_sections() {
        let q = parse_poly(q).unwrap().restrict(Axis::Y, &int(0));
        let (a, b): (Rational, Rational) = (a.parse().unwrap(), b.parse().unwrap());
        for lambda in [1.0, 10.0, 50.0] {
            let r = oned_sign_lemma_check(&q, lambda, (&a, &b), 400, 1000, 42).map_err(|e| e.to_string())?;
            runs += 1;
            if r.violations > 0 {
                bad.push(format!("{name} at lambda {lambda}: {} violations, worst ratio {:.3}", r.violations, r.worst_ratio));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{runs} section/lambda runs, 1000 trials each, 0 violations"))
    } else {
        Err(bad.join("; "))
    }
}

fn c10_slow_variation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for e in catalog() {
        let ctx = QuantityContext::new(e.potential(), 100.0).unwrap();
        let r = slow_variation_scan(&ctx, e.delta, None, 10_000, 42);
        for s in [&r.m1, &r.m2, &r.g] {
            // a weight that vanishes identically has no admissible pair
            ok &= s.within_bound() && (s.admissible == 10_000 || s.admissible == 0);
            if s.admissible > 0 {
                worst = worst.max(s.c_star / s.bound);
            }
        }
    }
    ensure(ok, format!("10^4 pairs per weight and potential, max C*/bound {worst:.3}"))
}

fn c11_energy_identity() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for e in catalog() {
        let phi = e.potential();
        let r = |n| {
            let g = GridSpec::new(0.5, n).unwrap();
            let total: f64 =
                (0..8).map(|seed| energy_identity_check(&phi, 10.0, &g, &smooth_test_function(&g, 4, seed))).sum();
            (g.h(), total)
        };
        let (a, b) = (r(64), r(128));
        if a.1 == 0.0 && b.1 == 0.0 {
            continue;
        }
        let order = observed_order(a, b);
        ok &= b.1 < a.1 && order >= 0.9;
        worst = worst.min(order);
    }
    ensure(ok, format!("n = 64 to 128, min observed order {worst:.3}"))
}

fn c12_determinism() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["check-psi", "--phi", "x^3 - x*y^2", "--box", "1"],
        &["sweep", "--phi", "x^3 - x*y^2", "--lambda-count", "4", "--grid-n", "64"],
        &["report", "--phi", "x^5 - x*y^2", "--point", "1/3,-1/4", "--pairs", "2000", "--seed", "7"],
    ];
    for args in runs {
        let (a, b) = (bin(args), bin(args));
        if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            return Err(format!("{} output differs between runs", args[0]));
        }
    }
    Ok("check-psi, sweep and report output byte-identical across two runs".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Maire H1 certificate", c1_maire_certificate),
        (2, "Maire exponents", c2_maire_exponents),
        (3, "negative control", c3_negative_control),
        (4, "elliptic control", c4_elliptic_control),
        (5, "lambda = 0 closed form", c5_laplacian_oracle),
        (6, "dense oracle", c6_dense_oracle),
        (7, "bracket identity", c7_brackets),
        (8, "profile bounds", c8_profiles),
        (9, "1-D sign lemma", c9_sign_lemma),
        (10, "slow variation", c10_slow_variation),
        (11, "energy identity order", c11_energy_identity),
        (12, "determinism", c12_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => println!("criterion {id}: PASS  {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                let known = KNOWN_RED.contains(&id);
                println!("criterion {id}: FAIL{}  {name}: {msg} [{secs:.1}s]", if known { " (known)" } else { "" });
                if !known {
                    unexpected.push(id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
