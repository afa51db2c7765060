//! Eigensolvers and the spectral checks built on them.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::complex::{is_bipartite, Complex, Mode};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, LinearMap, Space, C64};
use crate::operators::{apply_switching, build_discriminant, build_edge_ops, Basis};

/// Eigenvalues closer than this are one eigenvalue; "present" means within this distance.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Allowed residual for the Hermitian / unitary preconditions.
pub const KIND_TOL: f64 = 1e-10;
/// H-eigenvalue spread below which a cluster is treated as one exact eigenspace.
const FLAT_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigKind {
    Hermitian,
    Unitary,
}

/// Sorted real eigenvalues of a Hermitian matrix.
pub fn eigvals_hermitian(m: &CMat) -> Result<Vec<f64>> {
    require_square(m)?;
    let r = max_abs(&(m - m.adjoint()));
    if r > KIND_TOL {
        return Err(Error::Precondition(format!("matrix is not Hermitian (residual {r:.3e})")));
    }
    let mut v: Vec<f64> = if m.iter().all(|z| z.im == 0.0) {
        let re: DMatrix<f64> = m.map(|z| z.re);
        SymmetricEigen::new(re).eigenvalues.iter().copied().collect()
    } else {
        SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
    };
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Eigenvalues of a unitary matrix via the commuting Hermitian pair
/// `H = (U + U*)/2`, `K = (U - U*)/2i`: diagonalize H, then split each of its eigenspaces by K.
pub fn eigvals_unitary(u: &CMat) -> Result<Vec<C64>> {
    require_square(u)?;
    let n = u.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = if u.iter().all(|z| z.im == 0.0) {
        unitary_real(&u.map(|z| z.re))?
    } else {
        unitary_complex(u)?
    };
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn not_unitary(r: f64) -> Error {
    Error::Precondition(format!("matrix is not unitary (residual {r:.3e})"))
}

/// Index runs of the sorted spectrum whose neighbors lie within `CLUSTER_TOL`.
fn clusters(vals: &[f64]) -> (Vec<usize>, Vec<std::ops::Range<usize>>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut runs = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[order[end]] - vals[order[end - 1]] < CLUSTER_TOL {
            end += 1;
        }
        runs.push(start..end);
        start = end;
    }
    (order, runs)
}

/// Splits one H-eigenspace (orthonormal columns, H-values `hv`) by the Hermitian `kc`;
/// each eigenvalue is `<H> + i <K>` on the resulting vector.
fn split_cluster(kc: CMat, hv: &[f64], out: &mut Vec<C64>) {
    let kc = (&kc + kc.adjoint()).scale(0.5);
    let (lo, hi) = hv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if hi - lo < FLAT_TOL {
        // flat eigenspace: every vector has the same <H>, so eigenvectors of K are not needed
        let h = hv.iter().sum::<f64>() / hv.len() as f64;
        out.extend(kc.symmetric_eigenvalues().iter().map(|&k| C64::new(h, k)));
        return;
    }
    let ek = SymmetricEigen::new(kc);
    for j in 0..hv.len() {
        let y = ek.eigenvectors.column(j);
        let h: f64 = y.iter().zip(hv).map(|(a, l)| a.norm_sqr() * l).sum();
        out.push(C64::new(h, ek.eigenvalues[j]));
    }
}

fn unitary_real(u: &DMatrix<f64>) -> Result<Vec<C64>> {
    let n = u.nrows();
    let r = (u.transpose() * u - DMatrix::<f64>::identity(n, n)).amax();
    if r > KIND_TOL {
        return Err(not_unitary(r));
    }
    let ut = u.transpose();
    let h = (u + &ut).scale(0.5);
    let a = (u - &ut).scale(0.5);
    let eh = SymmetricEigen::new(h);
    let (order, runs) = clusters(eh.eigenvalues.as_slice());
    let mut out = Vec::with_capacity(n);
    for run in runs {
        let cols = &order[run];
        let v = eh.eigenvectors.select_columns(cols);
        let hv: Vec<f64> = cols.iter().map(|&i| eh.eigenvalues[i]).collect();
        // K = -i A on the eigenspace
        let kc = (v.transpose() * &a * &v).map(|x| C64::new(0.0, -x));
        split_cluster(kc, &hv, &mut out);
    }
    Ok(out)
}

fn unitary_complex(u: &CMat) -> Result<Vec<C64>> {
    let n = u.nrows();
    let r = max_abs(&(u.adjoint() * u - CMat::identity(n, n)));
    if r > KIND_TOL {
        return Err(not_unitary(r));
    }
    let ua = u.adjoint();
    let h = (u + &ua).scale(0.5);
    let k = (u - &ua) * C64::new(0.0, -0.5);
    let eh = SymmetricEigen::new(h);
    let (order, runs) = clusters(eh.eigenvalues.as_slice());
    let mut out = Vec::with_capacity(n);
    for run in runs {
        let cols = &order[run];
        let v = eh.eigenvectors.select_columns(cols);
        let hv: Vec<f64> = cols.iter().map(|&i| eh.eigenvalues[i]).collect();
        split_cluster(v.adjoint() * &k * &v, &hv, &mut out);
    }
    Ok(out)
}

fn require_square(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Eigenvalue multiset with multiplicities from clustering at `tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub basis: Space,
    pub kind: EigKind,
    pub dimension: usize,
    pub tolerance: f64,
    pub eigenvalues: Vec<Eigenvalue>,
    #[serde(skip)]
    pub raw: Vec<C64>,
}

impl SpectrumReport {
    pub fn from_values(raw: Vec<C64>, kind: EigKind, basis: Space, tol: f64) -> Self {
        let eigenvalues = cluster(&raw, tol);
        SpectrumReport { basis, kind, dimension: raw.len(), tolerance: tol, eigenvalues, raw }
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.raw.iter().map(|z| z.re).collect()
    }

    pub fn multiplicity_of(&self, z: C64) -> usize {
        self.raw.iter().filter(|w| (*w - z).norm() < self.tolerance).count()
    }

    pub fn contains(&self, z: C64) -> bool {
        self.multiplicity_of(z) > 0
    }
}

/// Groups values whose distance chains below `tol`; output sorted by (re, im).
pub fn cluster(vals: &[C64], tol: f64) -> Vec<Eigenvalue> {
    let n = vals.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (vals[i] - vals[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<C64>> = Default::default();
    for (i, &v) in vals.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(v);
    }
    let mut out: Vec<Eigenvalue> = groups
        .into_values()
        .map(|g| {
            let k = g.len() as f64;
            let s: C64 = g.iter().sum();
            Eigenvalue { re: snap(s.re / k), im: snap(s.im / k), multiplicity: g.len() }
        })
        .collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

/// Eigendecomposition of a labeled operator.
pub fn eig(m: &LinearMap, kind: EigKind) -> Result<SpectrumReport> {
    let raw = match kind {
        EigKind::Hermitian => eigvals_hermitian(&m.mat)?.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        EigKind::Unitary => eigvals_unitary(&m.mat)?,
    };
    Ok(SpectrumReport::from_values(raw, kind, m.rows.space, CLUSTER_TOL))
}

/// `t -> t +- i sqrt(1 - t^2)`; t = +-1 maps to itself once.
pub fn lift_spectrum(ts: &[f64], tol: f64) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(2 * ts.len());
    for &t in ts {
        if t.abs() > 1.0 + tol {
            return Err(Error::Precondition(format!("|t| = {} exceeds 1", t.abs())));
        }
        let t = t.clamp(-1.0, 1.0);
        if (t.abs() - 1.0).abs() < tol {
            out.push(C64::new(t.signum(), 0.0));
        } else {
            let s = (1.0 - t * t).sqrt();
            out.push(C64::new(t, s));
            out.push(C64::new(t, -s));
        }
    }
    Ok(out)
}

/// Sorted real multisets equal elementwise within `tol`.
pub fn multiset_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() < tol)
}

/// Multisets equal after discarding every value within `tol` of zero.
pub fn spec_equal_mod_zero(a: &[f64], b: &[f64], tol: f64) -> bool {
    let nz = |v: &[f64]| v.iter().copied().filter(|x| x.abs() >= tol).collect::<Vec<_>>();
    multiset_eq(&nz(a), &nz(b), tol)
}

/// The multiset equals its own negation.
pub fn spectral_symmetry(vals: &[f64], tol: f64) -> bool {
    let neg: Vec<f64> = vals.iter().map(|x| -x).collect();
    multiset_eq(vals, &neg, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftingReport {
    pub q: usize,
    pub mode: Mode,
    pub discriminant_dim: usize,
    pub unitary_dim: usize,
    /// Each |t| < 1 of the discriminant lifts to t +- i sqrt(1-t^2) with equal multiplicity.
    pub multiplicities_match: bool,
    /// Every non-real eigenvalue of U has its real part in Spec(D).
    pub real_parts_in_spectrum: bool,
    /// Eigenvalues of U not accounted for by lifts are +-1.
    pub remainder_is_pm1: bool,
    pub has_plus_minus_i: bool,
    pub pass: bool,
}

pub fn check_lifting(c: &Complex, q: usize, mode: Mode) -> Result<LiftingReport> {
    let ops = build_edge_ops(c, q, mode)?;
    let d = build_discriminant(c, q, mode, Basis::Full)?;
    let ts = eigvals_hermitian(&d.mat)?;
    let ls = eigvals_unitary(&ops.u.mat)?;
    Ok(lifting_from_values(q, mode, &ts, &ls))
}

pub(crate) fn lifting_from_values(q: usize, mode: Mode, ts: &[f64], ls: &[C64]) -> LiftingReport {
    let tol = CLUSTER_TOL;
    let tc: Vec<C64> = ts.iter().map(|&t| C64::new(t, 0.0)).collect();
    let count = |z: C64| ls.iter().filter(|w| (*w - z).norm() < tol).count();
    let mut multiplicities_match = true;
    let mut accounted = 0;
    for e in cluster(&tc, tol) {
        let t = e.re;
        if t.abs() < 1.0 - tol {
            let s = (1.0 - t * t).sqrt();
            let up = count(C64::new(t, s));
            let dn = count(C64::new(t, -s));
            if up != e.multiplicity || dn != e.multiplicity {
                multiplicities_match = false;
            }
            accounted += up + dn;
        }
    }
    let real_parts_in_spectrum =
        ls.iter().filter(|l| l.im.abs() > tol).all(|l| ts.iter().any(|t| (l.re - t).abs() < tol));
    let pm1 = ls.iter().filter(|l| (*l - C64::new(1.0, 0.0)).norm() < tol || (*l + C64::new(1.0, 0.0)).norm() < tol).count();
    let remainder_is_pm1 = accounted + pm1 == ls.len();
    let has_plus_minus_i = count(C64::new(0.0, 1.0)) > 0 && count(C64::new(0.0, -1.0)) > 0;
    LiftingReport {
        q,
        mode,
        discriminant_dim: ts.len(),
        unitary_dim: ls.len(),
        multiplicities_match,
        real_parts_in_spectrum,
        remainder_is_pm1,
        has_plus_minus_i,
        pass: multiplicities_match && real_parts_in_spectrum && remainder_is_pm1 && has_plus_minus_i,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralOrientability {
    /// -1 is an eigenvalue of the top down-discriminant.
    pub coherent: bool,
    /// +1 is an eigenvalue of the top down-discriminant.
    pub anticoherent: bool,
}

pub fn orientability_spectral(c: &Complex) -> Result<SpectralOrientability> {
    c.require_assumptions()?;
    let n = c.dim();
    let d = build_discriminant(c, n, Mode::Down, Basis::Reduced)?;
    let ts = eigvals_hermitian(&d.mat)?;
    Ok(SpectralOrientability {
        coherent: ts.iter().any(|t| (t + 1.0).abs() < CLUSTER_TOL),
        anticoherent: ts.iter().any(|t| (t - 1.0).abs() < CLUSTER_TOL),
    })
}

/// Switching with `D^theta = -D` from a bipartition of the reduced down graph, if any.
pub fn find_antisymmetric_switching(c: &Complex, q: usize) -> Result<Option<Vec<i8>>> {
    let d = build_discriminant(c, q, Mode::Down, Basis::Reduced)?;
    let Some(color) = is_bipartite(c, q, Mode::Down, true)? else {
        return Ok(None);
    };
    let theta: Vec<i8> = color.iter().map(|&x| if x { -1 } else { 1 }).collect();
    let dt = apply_switching(&d.mat, &theta)?;
    if dt != -d.mat {
        return Err(Error::Numeric("bipartition switching does not negate the discriminant".into()));
    }
    Ok(Some(theta))
}

/// Exhaustive search for theta with `D^theta = -D` (theta_0 = +1); feasible for n <= 20.
pub fn brute_force_antisymmetric_switching(d: &CMat) -> Result<Option<Vec<i8>>> {
    let n = d.nrows();
    if n > 20 {
        return Err(Error::InvalidParams(format!("exhaustive switching search on {n} simplices")));
    }
    // D^theta = -D iff theta_i theta_j = -1 on every nonzero entry
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|&(i, j)| d[(i, j)].norm() > 0.0).collect();
    let neg = -d;
    for mask in 0u32..(1u32 << n.saturating_sub(1)) {
        let bit = |i: usize| i > 0 && mask >> (i - 1) & 1 == 1;
        if pairs.iter().all(|&(i, j)| bit(i) != bit(j)) {
            let theta: Vec<i8> = (0..n).map(|i| if bit(i) { -1 } else { 1 }).collect();
            if apply_switching(d, &theta)? == neg {
                return Ok(Some(theta));
            }
        }
    }
    Ok(None)
}

/// `max |P D^theta P^T + D|` for a permutation `perm` (new index i takes old index perm[i]).
pub fn switching_witness_residual(d: &CMat, theta: &[i8], perm: &[usize]) -> Result<f64> {
    let n = d.nrows();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidParams("witness is not a permutation".into()));
    }
    let dt = apply_switching(d, theta)?;
    let permuted = CMat::from_fn(n, n, |i, j| dt[(perm[i], perm[j])]);
    Ok(max_abs(&(permuted + d)))
}
