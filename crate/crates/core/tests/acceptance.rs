//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use sgrover::bloch::{band, finite_quotient_check};
use sgrover::complex::{Complex, Generator, Mode};
use sgrover::operators::{build_discriminant, Basis};
use sgrover::spectra::{eigvals_hermitian, multiset_eq};
use sgrover::verify::{self, golden, Check, Status};
use sgrover::walk::{
    down_report, eigenfunction_report, eigenvalue_one_function, ordered_report, symmetric_f, up_report, FChoice,
};

const SPEC_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Folds a batch of checks into one outcome; skipped checks are counted but never pass silently
/// in place of a required one.
fn fold(checks: &[Check]) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| c.status == Status::Fail).collect();
    let skipped = checks.iter().filter(|c| c.status == Status::Skipped).count();
    let worst = checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max);
    let mut detail = format!("{} checks, {} skipped, max residual {worst:.2e}", checks.len(), skipped);
    if let Some(f) = failed.first() {
        detail.push_str(&format!("; first failure {} {}", f.name, f.detail));
    }
    outcome(failed.is_empty(), detail)
}

fn build(g: Generator) -> Complex {
    g.build().unwrap_or_else(|e| panic!("{g:?}: {e}"))
}

/// Generators on which the per-complex identities run.
fn generated_suite() -> Vec<Generator> {
    let mut v = vec![Generator::Sphere, Generator::Fig5, Generator::Cylinder3(3)];
    for m in 3..=8 {
        v.push(Generator::CylinderStrip(m));
        v.push(Generator::MoebiusStrip(m));
    }
    for n in 2..=5 {
        v.push(Generator::Simplex(n));
    }
    for n in 3..=5 {
        for k in 1..=n - 2 {
            v.push(Generator::Skeleton(n, k));
        }
    }
    v
}

fn tagged(g: &Generator, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{g:?} {}", c.name);
            c
        })
        .collect()
}

fn spectrum(c: &Complex, q: usize, mode: Mode, basis: Basis) -> Vec<f64> {
    eigvals_hermitian(&build_discriminant(c, q, mode, basis).unwrap().mat).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn golden_matrices() -> Outcome {
    let checks = golden::matrices(&build(Generator::Sphere), &build(Generator::Fig5)).unwrap();
    fold(&checks[..2])
}

fn golden_spectra() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    let mut expect = |name: String, got: Vec<f64>, want: Vec<f64>| {
        count += 1;
        if !multiset_eq(&got, &want, SPEC_TOL) {
            bad.push(name);
        }
    };
    let sphere = build(Generator::Sphere);
    expect("sphere reduced".into(), spectrum(&sphere, 1, Mode::Up, Basis::Reduced), [[-0.5; 3], [0.5; 3]].concat());
    expect(
        "sphere full".into(),
        spectrum(&sphere, 1, Mode::Up, Basis::Full),
        [[-0.5; 3], [0.5; 3], [0.0; 3], [0.0; 3]].concat(),
    );
    let r3 = 3f64.sqrt() / 3.0;
    expect(
        "fig5".into(),
        spectrum(&build(Generator::Fig5), 2, Mode::Down, Basis::Reduced),
        vec![-2.0 / 3.0, -r3, 0.0, r3, 2.0 / 3.0],
    );
    for m in 3..=8 {
        let want = (0..2 * m).map(|j| -(2.0 * PI * j as f64 / (2 * m) as f64).cos()).collect();
        expect(format!("strip {m}"), spectrum(&build(Generator::CylinderStrip(m)), 2, Mode::Down, Basis::Reduced), want);
    }
    for n in 2..=6 {
        let c = build(Generator::Simplex(n));
        for q in 0..=n - 2 {
            let hi = 1.0 / (n - q - 1) as f64;
            let lo = -1.0 / (q + 1) as f64;
            let want = [vec![hi; binom(n - 1, q + 1)], vec![lo; binom(n - 1, q)]].concat();
            expect(format!("simplex {n} q={q}"), spectrum(&c, q, Mode::Up, Basis::Reduced), want);
        }
    }
    outcome(bad.is_empty(), format!("{count} spectra, mismatches: {bad:?}"))
}

fn identities(gens: &[Generator]) -> Outcome {
    let mut all = Vec::new();
    for g in gens {
        let c = build(*g);
        all.extend(tagged(g, verify::cochain_support(&c).unwrap()));
        all.extend(tagged(g, verify::factorizations(&c).unwrap()));
        all.extend(tagged(g, verify::ordered_relation(&c).unwrap()));
    }
    fold(&all)
}

fn orientability(gens: &[Generator]) -> Outcome {
    let mut all = Vec::new();
    for g in gens {
        all.extend(tagged(g, verify::orientability(&build(*g)).unwrap()));
    }
    let o = fold(&all);
    let na = all.iter().filter(|c| c.status == Status::Skipped).count();
    outcome(o.pass, format!("{} complexes compared, {na} with a single top simplex not applicable; {}", all.len() - na, o.detail))
}

fn orientability_suite() -> Vec<Generator> {
    let mut v = vec![Generator::Sphere, Generator::Fig5];
    for m in 3..=8 {
        v.push(Generator::CylinderStrip(m));
        v.push(Generator::MoebiusStrip(m));
    }
    for n in 2..=5 {
        v.push(Generator::Simplex(n));
        for k in 1..=n.saturating_sub(2) {
            v.push(Generator::Skeleton(n, k));
        }
    }
    v
}

fn spectral_corollaries(gens: &[Generator]) -> Outcome {
    let mut all = Vec::new();
    for g in gens {
        let c = build(*g);
        all.extend(tagged(g, verify::no_minus_one_up(&c).unwrap()));
        let lift = verify::lifting(&c).unwrap();
        all.extend(tagged(g, lift.into_iter().filter(|k| k.name.starts_with("plus-minus-i")).collect()));
    }
    fold(&all)
}

fn switching(gens: &[Generator]) -> Outcome {
    let mut all = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        all.extend(tagged(g, verify::switching_invariance(&build(*g), 100, 1000 + i as u64).unwrap()));
    }
    let inv = fold(&all);
    let mut constructive = Vec::new();
    for m in 3..=8 {
        for g in [Generator::CylinderStrip(m), Generator::MoebiusStrip(m)] {
            let c = build(g);
            let d = build_discriminant(&c, 2, Mode::Down, Basis::Reduced).unwrap().mat;
            let ok = match sgrover::spectra::find_antisymmetric_switching(&c, 2).unwrap() {
                Some(t) => sgrover::operators::apply_switching(&d, &t).unwrap() == -&d,
                None => false,
            };
            constructive.push(Check::boolean(format!("{g:?} negating switching"), ok, ""));
        }
    }
    let cons = fold(&constructive);
    let wit = golden::matrices(&build(Generator::Sphere), &build(Generator::Fig5)).unwrap();
    let wit = fold(&wit[2..]);
    outcome(
        inv.pass && cons.pass && wit.pass,
        format!("invariance: {}; strips: {}; published witnesses: {}", inv.detail, cons.detail, wit.detail),
    )
}

fn bloch() -> Outcome {
    let b2 = band(2, 360).unwrap();
    let b1 = band(1, 360).unwrap();
    let ext2 = (b2.max - 1.0).abs() < 1e-6 && (b2.min + 1.0).abs() < 1e-6;
    let flat = b1.flat_bands.iter().any(|x| (x + 0.2).abs() < 1e-6);
    let max1 = (b1.max - 0.7).abs() < 1e-6;
    let cf = b2.closed_form_residual.max(b1.closed_form_residual).max(b2.printed_subset_residual.unwrap());
    let cf_ok = cf < 1e-10;
    let mut qbad = Vec::new();
    for n in 3..=12 {
        let r = finite_quotient_check(n).unwrap();
        if !r.pass {
            qbad.push(format!("N={n} d2 {:.1e} d1 {:.1e}", r.d2_max_diff, r.d1_max_diff));
        }
    }
    outcome(
        ext2 && flat && max1 && cf_ok && qbad.is_empty(),
        format!(
            "d2 range [{:.9}, {:.9}]; d1 flat {:?} max {:.9}; closed-form residual {cf:.2e}; quotient failures {qbad:?}",
            b2.min, b2.max, b1.flat_bands, b1.max
        ),
    )
}

fn walks() -> Outcome {
    let sphere = build(Generator::Sphere);
    let f = symmetric_f(&sphere, 1, FChoice::Constant).unwrap();
    let up = up_report(&sphere, 1, &f, 20).unwrap();
    let p_dev = up.table.rows.iter().flatten().map(|p| (p - 1.0 / 6.0).abs()).fold(0.0, f64::max);
    let ord = ordered_report(&sphere, 1, &f, 20).unwrap();
    let q_dev = ord.table.rows.iter().flatten().map(|p| (p - 0.25).abs()).fold(0.0, f64::max);

    let s4 = build(Generator::Simplex(4));
    let fs = eigenvalue_one_function(&s4, 3, FChoice::FSigma).unwrap();
    let eig = eigenfunction_report(&s4, 3, &fs, 10).unwrap();

    let fig5 = build(Generator::Fig5);
    let f5 = symmetric_f(&fig5, 2, FChoice::Constant).unwrap();
    let down = down_report(&fig5, 2, &f5, 20).unwrap();

    let rows = [&up, &ord, &eig, &down].iter().map(|r| r.max_row_sum_error).fold(0.0, f64::max);
    let pass = p_dev < 1e-10 && q_dev < 1e-10 && up.pass && ord.pass && eig.pass && down.pass && rows < 1e-10;
    outcome(
        pass,
        format!(
            "P dev {p_dev:.2e}, Q dev {q_dev:.2e}, eigenfunction identity {} (residual {:.2e}), down closed form {} (residual {:.2e}), row sums {rows:.2e}",
            eig.pass,
            eig.identities[0].max_residual,
            down.pass,
            down.identities[0].max_residual
        ),
    )
}

fn properties() -> Outcome {
    let mut all = Vec::new();
    for seed in 0..50u64 {
        let g = Generator::Random(seed);
        let c = build(g);
        let r = c.validate();
        all.push(Check::boolean(format!("{g:?} valid"), r.pure && r.strongly_connected, ""));
        all.extend(tagged(&g, verify::cochain_support(&c).unwrap()));
        all.extend(tagged(&g, verify::factorizations(&c).unwrap()));
        all.extend(tagged(&g, verify::ordered_relation(&c).unwrap()));
        all.extend(tagged(&g, verify::orientability(&c).unwrap()));
        all.extend(tagged(&g, verify::no_minus_one_up(&c).unwrap()));
        let lift = verify::lifting(&c).unwrap();
        all.extend(tagged(&g, lift.into_iter().filter(|k| k.name.starts_with("plus-minus-i")).collect()));
    }
    let rand = fold(&all);
    let mut reg = Vec::new();
    for n in 3..=6 {
        let c = build(Generator::Simplex(n));
        // L = n - q - 1 >= 2
        for q in 0..n - 2 {
            reg.push(verify::zero_multiplicity_relation(&c, q).unwrap());
        }
    }
    let regular = fold(&reg);
    let all_ran = reg.iter().all(|c| c.status == Status::Pass);
    outcome(
        rand.pass && regular.pass && all_ran,
        format!("random complexes: {}; regular relation: {}", rand.detail, regular.detail),
    )
}

fn main() -> ExitCode {
    let gens = generated_suite();
    let orient = orientability_suite();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("golden matrices (sphere up, fig5 down) within 1e-12", Box::new(golden_matrices)),
        ("golden spectra within 1e-8", Box::new(golden_spectra)),
        ("operator identities within 1e-12 on generated complexes", Box::new(|| identities(&gens))),
        ("spectral vs combinatorial orientability", Box::new(|| orientability(&orient))),
        ("no -1 in up spectra for q >= 1; +-i in every walk spectrum", Box::new(|| spectral_corollaries(&gens))),
        ("switching invariance, negating switchings and published witnesses", Box::new(|| switching(&gens))),
        ("cylinder bands, closed forms and periodic quotients", Box::new(bloch)),
        ("walk stationarity and finding-probability identities", Box::new(walks)),
        ("property suite on 50 random 2-complexes and regular simplices", Box::new(properties)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} ... {} [{:.1}s] ({})",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
