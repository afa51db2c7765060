//! Numerical and combinatorial checks of the spectral statements, run per complex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{orientation_search, Complex, Mode, OrientationTarget, OrientedSimplex};
use crate::error::{Error, Result};
use crate::linalg::{antisym_projector, max_abs, sym_projector, CMat, C64};
use crate::operators::{
    a_down, a_map, a_up, apply_switching, b_map, build_discriminant, build_g_walk, discriminant_in, lap_down, lap_up,
    Basis,
};
use crate::spectra::{
    brute_force_antisymmetric_switching, check_lifting, eigvals_hermitian, find_antisymmetric_switching, multiset_eq,
    orientability_spectral, spec_equal_mod_zero, switching_witness_residual, CLUSTER_TOL,
};

/// Residual bound for operator identities.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn residual(name: impl Into<String>, r: f64, tol: f64) -> Self {
        let status = if r < tol { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, residual: Some(r), detail: String::new() }
    }

    pub fn boolean(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, residual: None, detail: detail.into() }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skipped, residual: None, detail: why.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub pass: bool,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
        VerifyReport { pass: failed == 0, passed, failed, skipped, checks }
    }

    /// Re-judges every residual check against `tol`; boolean and skipped checks are kept.
    pub fn with_tolerance(self, tol: f64) -> Self {
        let checks = self
            .checks
            .into_iter()
            .map(|mut c| {
                if let Some(r) = c.residual {
                    c.status = if r < tol { Status::Pass } else { Status::Fail };
                }
                c
            })
            .collect();
        VerifyReport::new(checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// Turns an empty neighbor graph into a skip; other errors propagate.
fn or_skip(name: &str, r: Result<Check>) -> Result<Check> {
    match r {
        Err(Error::EmptyEdgeSet { q }) => Ok(Check::skipped(name, format!("no neighbor pairs in dimension {q}"))),
        other => other,
    }
}

fn modes(c: &Complex) -> Vec<(usize, Mode)> {
    let mut out = Vec::new();
    for mode in [Mode::Up, Mode::Down] {
        let (lo, hi) = c.mode_range(mode);
        for q in lo..=hi {
            out.push((q, mode));
        }
    }
    out
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Up => "up",
        Mode::Down => "down",
    }
}

/// `P D P = D` and `D P_+ = 0` for every full-basis discriminant.
pub fn cochain_support(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (q, mode) in modes(c) {
        let name = format!("cochain-support {} q={q}", mode_name(mode));
        out.push(or_skip(
            &name,
            build_discriminant(c, q, mode, Basis::Full).map(|d| {
                let m = c.count(q);
                let p = antisym_projector(m);
                let r1 = max_abs(&(&p * &d.mat * &p - &d.mat));
                let r2 = max_abs(&(&d.mat * sym_projector(m)));
                Check::residual(name.clone(), r1.max(r2), IDENTITY_TOL)
            }),
        )?);
    }
    Ok(out)
}

/// The degree-weighted coboundary and Laplacian forms of the reduced discriminants.
pub fn factorizations(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (q, mode) in modes(c) {
        let name = format!("factorization {} q={q}", mode_name(mode));
        let chk = build_discriminant(c, q, mode, Basis::Reduced).and_then(|d| {
            let m = c.count(q);
            let id = CMat::identity(m, m);
            let (r1, r2) = match mode {
                Mode::Up => {
                    let k = C64::new(1.0 / (q as f64 + 1.0), 0.0);
                    let a = a_map(c, q)?;
                    let aa = a_up(c, q)?;
                    let f1 = (a.transpose() * &a - &id) * k;
                    let f2 = (&aa * lap_up(c, q) * &aa - &id) * k;
                    (max_abs(&(f1 - &d.mat)), max_abs(&(f2 - &d.mat)))
                }
                Mode::Down => {
                    let qq = C64::new(q as f64 + 1.0, 0.0);
                    let b = b_map(c, q)?;
                    let aa = a_down(c, q)?;
                    let f1 = &b * b.transpose() - &aa * &aa * qq;
                    let f2 = &aa * (lap_down(c, q) - &id * qq) * &aa;
                    (max_abs(&(f1 - &d.mat)), max_abs(&(f2 - &d.mat)))
                }
            };
            Ok(Check::residual(name.clone(), r1.max(r2), IDENTITY_TOL))
        });
        out.push(or_skip(&name, chk)?);
    }
    Ok(out)
}

/// Relation between the ordered walk's discriminant and the up-discriminant one dimension down,
/// and `D(G_q) = -I` on symmetric functions for q >= 2.
pub fn ordered_relation(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for q in 1..=c.dim() {
        let gw = build_g_walk(c, q)?;
        let dg = gw.discriminant().mat;
        let m = c.count(q - 1);
        let n = gw.lower.len();
        let e = gw.lower.cochain_embedding(m);
        let dup = build_discriminant(c, q - 1, Mode::Up, Basis::Reduced)?.mat;
        let k = C64::new(2.0 * q as f64 / (q as f64 + 1.0), 0.0);
        let lhs = (CMat::identity(n, n) - &dg) * &e;
        let rhs = &e * (CMat::identity(m, m) - dup) * k;
        out.push(Check::residual(format!("ordered-relation q={q}"), max_abs(&(lhs - rhs)), IDENTITY_TOL));
        let name = format!("ordered-symmetric-kernel q={q}");
        if q >= 2 {
            let es = gw.lower.symmetric_embedding(m);
            out.push(Check::residual(name, max_abs(&(&dg * &es + &es)), IDENTITY_TOL));
        } else {
            out.push(Check::skipped(name, "D(G_1) equals D_0^up, not -I, on symmetric functions"));
        }
    }
    Ok(out)
}

/// No eigenvalue -1 in D_q^up for q >= 1.
pub fn no_minus_one_up(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for q in 1..c.dim() {
        let name = format!("no-minus-one up q={q}");
        let chk = build_discriminant(c, q, Mode::Up, Basis::Reduced).and_then(|d| {
            let ev = eigvals_hermitian(&d.mat)?;
            let gap = ev.iter().map(|t| (t + 1.0).abs()).fold(f64::INFINITY, f64::min);
            Ok(Check::boolean(name.clone(), gap >= CLUSTER_TOL, format!("distance to -1: {gap:.3e}")))
        });
        out.push(or_skip(&name, chk)?);
    }
    Ok(out)
}

/// Spectral lifting from each discriminant to its unitary, with +-i always present.
pub fn lifting(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (q, mode) in modes(c) {
        let tag = format!("{} q={q}", mode_name(mode));
        match check_lifting(c, q, mode) {
            Ok(r) => {
                out.push(Check::boolean(format!("plus-minus-i {tag}"), r.has_plus_minus_i, ""));
                out.push(Check::boolean(
                    format!("spectral-lift {tag}"),
                    r.pass,
                    format!(
                        "multiplicities={} real-parts={} remainder={}",
                        r.multiplicities_match, r.real_parts_in_spectrum, r.remainder_is_pm1
                    ),
                ));
            }
            Err(Error::EmptyEdgeSet { .. }) => {
                out.push(Check::skipped(format!("plus-minus-i {tag}"), "no neighbor pairs"));
                out.push(Check::skipped(format!("spectral-lift {tag}"), "no neighbor pairs"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Spectral orientability of the top dimension against the combinatorial search.
pub fn orientability(c: &Complex) -> Result<Vec<Check>> {
    let name = "orientability";
    let spec = match orientability_spectral(c) {
        Ok(s) => s,
        Err(Error::EmptyEdgeSet { .. }) => return Ok(vec![Check::skipped(name, "single top simplex")]),
        Err(e) => return Err(e),
    };
    let coh = orientation_search(c, OrientationTarget::Coherent)?.is_some();
    let anti = orientation_search(c, OrientationTarget::Anticoherent)?.is_some();
    Ok(vec![Check::boolean(
        name,
        spec.coherent == coh && spec.anticoherent == anti,
        format!(
            "spectral coherent={} anticoherent={}; combinatorial coherent={coh} anticoherent={anti}",
            spec.coherent, spec.anticoherent
        ),
    )])
}

/// Random diagonal sign switchings leave every reduced discriminant spectrum unchanged.
pub fn switching_invariance(c: &Complex, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (q, mode) in modes(c) {
        let name = format!("switching-invariance {} q={q}", mode_name(mode));
        let d = match build_discriminant(c, q, mode, Basis::Reduced) {
            Ok(d) => d.mat,
            Err(Error::EmptyEdgeSet { .. }) => {
                out.push(Check::skipped(name, "no neighbor pairs"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let base = eigvals_hermitian(&d)?;
        let mut bad = 0;
        for _ in 0..trials {
            let theta: Vec<i8> = (0..d.nrows()).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
            let ev = eigvals_hermitian(&apply_switching(&d, &theta)?)?;
            if !multiset_eq(&base, &ev, CLUSTER_TOL) {
                bad += 1;
            }
        }
        out.push(Check::boolean(name, bad == 0, format!("{bad} of {trials} switchings changed the spectrum")));
    }
    Ok(out)
}

/// A negating switching exists exactly when the reduced down graph is bipartite; the
/// bipartition route is compared with exhaustive search when that is small enough.
pub fn bipartite_switching(c: &Complex) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for q in 1..=c.dim() {
        let name = format!("bipartite-switching q={q}");
        let theta = match find_antisymmetric_switching(c, q) {
            Ok(t) => t,
            Err(Error::EmptyEdgeSet { .. }) => {
                out.push(Check::skipped(name, "no neighbor pairs"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let d = build_discriminant(c, q, Mode::Down, Basis::Reduced)?.mat;
        let exact = match &theta {
            Some(t) => apply_switching(&d, t)? == -&d,
            None => true,
        };
        let detail = if d.nrows() <= 20 {
            let brute = brute_force_antisymmetric_switching(&d)?;
            if brute.is_some() != theta.is_some() {
                out.push(Check::boolean(name, false, "exhaustive search disagrees with the bipartition"));
                continue;
            }
            "exhaustive search agrees"
        } else {
            "exhaustive search skipped (too many simplices)"
        };
        out.push(Check::boolean(
            name,
            exact,
            format!("{}; {detail}", if theta.is_some() { "bipartite" } else { "not bipartite" }),
        ));
    }
    Ok(out)
}

/// Common up-degree of all q-simplices, if there is one.
pub fn up_regularity(c: &Complex, q: usize) -> Option<usize> {
    let l = c.deg_up(q, 0);
    (0..c.count(q)).all(|i| c.deg_up(q, i) == l).then_some(l)
}

/// `(q+2) + (L-1)(q+2) D_{q+1}^down` and `L + L(q+1) D_q^up` share nonzero spectra when every
/// q-simplex lies in exactly L >= 2 (q+1)-simplices.
pub fn zero_multiplicity_relation(c: &Complex, q: usize) -> Result<Check> {
    let name = format!("regular-up-down q={q}");
    if q >= c.dim() {
        return Ok(Check::skipped(name, "no simplices one dimension up"));
    }
    let Some(l) = up_regularity(c, q).filter(|&l| l >= 2) else {
        return Ok(Check::skipped(name, "not L-regular with L >= 2"));
    };
    let (lf, qf) = (l as f64, q as f64);
    let down = eigvals_hermitian(&build_discriminant(c, q + 1, Mode::Down, Basis::Reduced)?.mat)?;
    let up = eigvals_hermitian(&build_discriminant(c, q, Mode::Up, Basis::Reduced)?.mat)?;
    let lhs: Vec<f64> = down.iter().map(|t| (qf + 2.0) + (lf - 1.0) * (qf + 2.0) * t).collect();
    let rhs: Vec<f64> = up.iter().map(|t| lf + lf * (qf + 1.0) * t).collect();
    Ok(Check::boolean(name, spec_equal_mod_zero(&lhs, &rhs, CLUSTER_TOL), format!("L={l}")))
}

/// Every per-complex check.
pub fn suite(c: &Complex, seed: u64) -> Result<VerifyReport> {
    c.require_assumptions()?;
    type Group<'a> = Box<dyn Fn() -> Result<Vec<Check>> + Send + Sync + 'a>;
    let groups: Vec<Group> = vec![
        Box::new(|| cochain_support(c)),
        Box::new(|| factorizations(c)),
        Box::new(|| lifting(c)),
        Box::new(|| no_minus_one_up(c)),
        Box::new(|| ordered_relation(c)),
        Box::new(|| (0..c.dim()).map(|q| zero_multiplicity_relation(c, q)).collect()),
        Box::new(|| orientability(c)),
        Box::new(|| switching_invariance(c, 100, seed)),
        Box::new(|| bipartite_switching(c)),
    ];
    // groups are independent; collecting in order keeps the report deterministic
    let parts: Vec<Vec<Check>> = groups.par_iter().map(|g| g()).collect::<Result<_>>()?;
    Ok(VerifyReport::new(parts.into_iter().flatten().collect()))
}

/// Reference tables on the tetrahedron boundary and the five-triangle complex.
pub mod golden {
    use super::*;

    const Q: f64 = 0.25;

    /// Edge orientations of the tetrahedron boundary used by the reference table.
    pub const SPHERE_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [1, 2], [1, 3], [2, 3], [0, 3]];

    pub const SPHERE_D1_UP: [[f64; 6]; 6] = [
        [0.0, -Q, Q, Q, 0.0, -Q],
        [-Q, 0.0, -Q, 0.0, Q, -Q],
        [Q, -Q, 0.0, -Q, Q, 0.0],
        [Q, 0.0, -Q, 0.0, -Q, -Q],
        [0.0, Q, Q, -Q, 0.0, -Q],
        [-Q, -Q, 0.0, -Q, -Q, 0.0],
    ];

    pub const SPHERE_D1_UP_SWITCHED: [[f64; 6]; 6] = [
        [0.0, Q, Q, -Q, 0.0, -Q],
        [Q, 0.0, Q, 0.0, -Q, Q],
        [Q, Q, 0.0, Q, Q, 0.0],
        [-Q, 0.0, Q, 0.0, Q, Q],
        [0.0, -Q, Q, Q, 0.0, -Q],
        [-Q, Q, 0.0, Q, -Q, 0.0],
    ];

    pub const SPHERE_THETA: [i8; 6] = [-1, 1, -1, 1, -1, -1];
    /// Rows and columns 3 and 6 exchanged.
    pub const SPHERE_PERM: [usize; 6] = [0, 1, 5, 3, 4, 2];

    /// Triangle orientations of the five-triangle complex (vertex ids equal labels).
    pub const FIG5_TRIANGLES: [[usize; 3]; 5] = [[0, 1, 2], [2, 1, 4], [1, 3, 4], [0, 1, 3], [2, 1, 3]];

    const T: f64 = 1.0 / 3.0;

    fn h() -> f64 {
        1.0 / (2.0 * 3f64.sqrt())
    }

    pub fn fig5_d2_down() -> [[f64; 5]; 5] {
        let h = h();
        [
            [0.0, -T, 0.0, T, -h],
            [-T, 0.0, -T, 0.0, h],
            [0.0, -T, 0.0, T, h],
            [T, 0.0, T, 0.0, h],
            [-h, h, h, h, 0.0],
        ]
    }

    pub fn fig5_d2_down_switched() -> [[f64; 5]; 5] {
        let h = h();
        [
            [0.0, -T, 0.0, T, h],
            [-T, 0.0, -T, 0.0, -h],
            [0.0, -T, 0.0, T, -h],
            [T, 0.0, T, 0.0, -h],
            [h, -h, -h, -h, 0.0],
        ]
    }

    pub const FIG5_THETA: [i8; 5] = [-1, -1, -1, -1, 1];
    /// Rows and columns 2 and 4 exchanged.
    pub const FIG5_PERM: [usize; 5] = [0, 3, 2, 1, 4];

    fn oriented(list: &[&[usize]]) -> Result<Vec<OrientedSimplex>> {
        list.iter().map(|v| OrientedSimplex::from_ordered(v)).collect()
    }

    pub fn sphere_matrix(c: &Complex) -> Result<CMat> {
        let basis = oriented(&SPHERE_EDGES.iter().map(|e| &e[..]).collect::<Vec<_>>())?;
        Ok(discriminant_in(c, 1, Mode::Up, &basis)?.mat)
    }

    pub fn fig5_matrix(c: &Complex) -> Result<CMat> {
        let basis = oriented(&FIG5_TRIANGLES.iter().map(|t| &t[..]).collect::<Vec<_>>())?;
        Ok(discriminant_in(c, 2, Mode::Down, &basis)?.mat)
    }

    pub fn table<const N: usize>(t: &[[f64; N]; N]) -> CMat {
        CMat::from_fn(N, N, |i, j| C64::new(t[i][j], 0.0))
    }

    /// Entrywise agreement with both reference tables, and their published switchings.
    pub fn matrices(sphere: &Complex, fig5: &Complex) -> Result<Vec<Check>> {
        let ds = sphere_matrix(sphere)?;
        let df = fig5_matrix(fig5)?;
        let dsw = apply_switching(&ds, &SPHERE_THETA)?;
        let dfw = apply_switching(&df, &FIG5_THETA)?;
        Ok(vec![
            Check::residual("sphere-up-table", max_abs(&(&ds - table(&SPHERE_D1_UP))), IDENTITY_TOL),
            Check::residual("fig5-down-table", max_abs(&(&df - table(&fig5_d2_down()))), IDENTITY_TOL),
            Check::residual("sphere-switched-table", max_abs(&(dsw - table(&SPHERE_D1_UP_SWITCHED))), IDENTITY_TOL),
            Check::residual("fig5-switched-table", max_abs(&(dfw - table(&fig5_d2_down_switched()))), IDENTITY_TOL),
            Check::residual(
                "sphere-witness",
                switching_witness_residual(&ds, &SPHERE_THETA, &SPHERE_PERM)?,
                IDENTITY_TOL,
            ),
            Check::residual("fig5-witness", switching_witness_residual(&df, &FIG5_THETA, &FIG5_PERM)?, IDENTITY_TOL),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;

    fn assert_pass(r: &VerifyReport, what: &str) {
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{what}: {bad:#?}");
    }

    #[test]
    fn golden_tables() {
        let s = Generator::Sphere.build().unwrap();
        let f = Generator::Fig5.build().unwrap();
        for chk in golden::matrices(&s, &f).unwrap() {
            assert_eq!(chk.status, Status::Pass, "{chk:?}");
        }
    }

    #[test]
    fn suites_pass() {
        for g in [Generator::Sphere, Generator::Fig5, Generator::MoebiusStrip(5), Generator::Simplex(4)] {
            let c = g.build().unwrap();
            assert_pass(&suite(&c, 1).unwrap(), &format!("{g:?}"));
        }
    }

    #[test]
    fn regular_relation_on_simplices() {
        for n in 3..=6 {
            let c = Generator::Simplex(n).build().unwrap();
            for q in 0..n - 2 {
                let chk = zero_multiplicity_relation(&c, q).unwrap();
                assert_eq!(chk.status, Status::Pass, "n={n} q={q}");
            }
            // top pair has a single (n-1)-simplex, L = 1
            assert_eq!(zero_multiplicity_relation(&c, n - 2).unwrap().status, Status::Skipped);
        }
    }

    #[test]
    fn single_simplex_orientability_skipped() {
        let c = Generator::Simplex(3).build().unwrap();
        assert_eq!(orientability(&c).unwrap()[0].status, Status::Skipped);
    }

    #[test]
    fn report_counts() {
        let r = VerifyReport::new(vec![
            Check::residual("a", 0.0, 1.0),
            Check::residual("b", 2.0, 1.0),
            Check::skipped("c", "n/a"),
        ]);
        assert_eq!((r.passed, r.failed, r.skipped, r.pass), (1, 1, 1, false));
    }
}
