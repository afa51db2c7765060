//! Bloch symbols of the down discriminants on the infinite triangulated cylinder Z_3 x Z.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Generator, Mode};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ONE, ZERO};
use crate::operators::{build_discriminant, Basis};
use crate::spectra::{eigvals_hermitian, multiset_eq};

/// Tolerance for the symbol checks against closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Tolerance for the finite-quotient spectrum comparison.
pub const QUOTIENT_TOL: f64 = 1e-8;

/// Symbol matrix at one phase.
#[derive(Clone, Debug)]
pub struct SymbolMatrix {
    pub theta: f64,
    /// Cube root of unity labelling the Z_3 block, for the 1-down symbol.
    pub mu: Option<C64>,
    pub entries: CMat,
}

impl SymbolMatrix {
    pub fn hermitian_residual(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvals_hermitian(&self.entries)
    }
}

fn omega_perm() -> CMat {
    let mut o = CMat::zeros(3, 3);
    o[(0, 2)] = ONE;
    o[(1, 0)] = ONE;
    o[(2, 1)] = ONE;
    o
}

/// 6x6 symbol of D_2^down in the basis (rho_0, rho_1, rho_2, sigma_0, sigma_1, sigma_2).
pub fn symbol_d2(theta: f64) -> SymbolMatrix {
    let z = C64::from_polar(1.0, theta);
    let om = omega_perm();
    let id = CMat::identity(3, 3);
    let upper = &om + &id * (ONE + z.conj());
    let lower = &om * &om + &id * (ONE + z);
    let mut m = CMat::from_element(6, 6, ZERO);
    m.view_mut((0, 3), (3, 3)).copy_from(&upper);
    m.view_mut((3, 0), (3, 3)).copy_from(&lower);
    SymbolMatrix { theta, mu: None, entries: m * C64::new(-1.0 / 3.0, 0.0) }
}

/// Cube root of unity `omega^k`.
pub fn cube_root(k: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (k % 3) as f64 / 3.0)
}

/// 3x3 symbol of D_1^down on the mu-isotypic block; `mu` must be a cube root of unity.
pub fn symbol_d1(theta: f64, mu: C64) -> Result<SymbolMatrix> {
    if !(0..3).any(|k| (mu - cube_root(k)).norm() < 1e-12) {
        return Err(Error::InvalidParams(format!("mu = {mu} is not a cube root of unity")));
    }
    let z = C64::from_polar(1.0, theta);
    let (zb, mb) = (z.conj(), mu.conj());
    let e = [
        [-(mu * z + mb * zb), (ONE - zb) * (ONE - mb * zb), (ONE - mb) * (ONE - mb * zb)],
        [(ONE - z) * (ONE - mu * z), -(z + zb), (ONE - mb) * (ONE - z)],
        [(ONE - mu) * (ONE - mu * z), (ONE - mu) * (ONE - zb), -(mu + mb)],
    ];
    let m = CMat::from_fn(3, 3, |i, j| e[i][j] / 10.0);
    Ok(SymbolMatrix { theta, mu: Some(mu), entries: m })
}

/// The six eigenvalues of `symbol_d2(theta)`, ascending: the two printed families plus the
/// conjugate branch at `theta - pi/3`.
pub fn closed_form_d2(theta: f64) -> Vec<f64> {
    let a = (5.0 + 4.0 * theta.cos()).max(0.0).sqrt() / 3.0;
    let b = 2f64.sqrt() / 3.0 * (1.0 + (theta + PI / 3.0).cos()).max(0.0).sqrt();
    let c = 2f64.sqrt() / 3.0 * (1.0 + (theta - PI / 3.0).cos()).max(0.0).sqrt();
    let mut v = vec![a, -a, b, -b, c, -c];
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of `symbol_d1(theta, e^{i phi})`, ascending.
pub fn closed_form_d1(theta: f64, phi: f64) -> Vec<f64> {
    let t = (2.0 * (1.0 - (theta + phi / 2.0).cos() * (phi / 2.0).cos()) - phi.cos()) / 5.0;
    let mut v = vec![-0.2, -0.2, t];
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct BandReport {
    pub dq: usize,
    pub samples: usize,
    pub thetas: Vec<f64>,
    pub curve_labels: Vec<String>,
    /// `curves[c][k]` is curve c at `thetas[k]`.
    pub curves: Vec<Vec<f64>>,
    pub curve_min: Vec<f64>,
    pub curve_max: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// Values of curves that are constant within 1e-9.
    pub flat_bands: Vec<f64>,
    pub max_hermitian_residual: f64,
    /// Largest deviation between sampled eigenvalues and the closed forms.
    pub closed_form_residual: f64,
    /// For dq = 2: deviation of the printed families from the nearest sampled eigenvalue.
    pub printed_subset_residual: Option<f64>,
    /// Phase and block where the largest eigenvalue is attained.
    pub argmax_theta: f64,
    pub argmax_phi: Option<f64>,
}

impl BandReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta");
        for l in &self.curve_labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (k, t) in self.thetas.iter().enumerate() {
            out.push_str(&t.to_string());
            for c in &self.curves {
                out.push_str(&format!(",{}", c[k]));
            }
            out.push('\n');
        }
        out
    }

    /// True when ±1 show up only at isolated phases (no flat band at ±1).
    pub fn no_flat_band_at(&self, x: f64) -> bool {
        !self.flat_bands.iter().any(|b| (b - x).abs() < 1e-9)
    }
}

struct Sample {
    values: Vec<f64>,
    herm: f64,
    closed: f64,
    printed: f64,
}

fn sample_d2(theta: f64) -> Result<Sample> {
    let s = symbol_d2(theta);
    let values = s.eigenvalues()?;
    let cf = closed_form_d2(theta);
    let closed = values.iter().zip(&cf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let a = (5.0 + 4.0 * theta.cos()).sqrt() / 3.0;
    let b = 2f64.sqrt() / 3.0 * (1.0 + (theta + PI / 3.0).cos()).max(0.0).sqrt();
    let printed = [a, -a, b, -b]
        .iter()
        .map(|p| values.iter().map(|v| (v - p).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(Sample { values, herm: s.hermitian_residual(), closed, printed })
}

fn sample_d1(theta: f64) -> Result<Sample> {
    let mut values = Vec::with_capacity(9);
    let (mut herm, mut closed) = (0.0f64, 0.0f64);
    for k in 0..3 {
        let phi = 2.0 * PI * k as f64 / 3.0;
        let s = symbol_d1(theta, cube_root(k))?;
        let ev = s.eigenvalues()?;
        let cf = closed_form_d1(theta, phi);
        closed = closed.max(ev.iter().zip(&cf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        herm = herm.max(s.hermitian_residual());
        values.extend(ev);
    }
    Ok(Sample { values, herm, closed, printed: 0.0 })
}

/// Eigenvalue curves at `theta_k = 2 pi k / samples`.
///
/// For dq = 2 the six curves are the sorted eigenvalues; for dq = 1 there are three curves per
/// block `mu = omega^j`, sorted within the block.
pub fn band(dq: usize, samples: usize) -> Result<BandReport> {
    if samples < 8 {
        return Err(Error::InvalidParams(format!("band needs at least 8 samples, got {samples}")));
    }
    let thetas: Vec<f64> = (0..samples).map(|k| 2.0 * PI * k as f64 / samples as f64).collect();
    let (curve_labels, rows): (Vec<String>, Vec<Sample>) = match dq {
        2 => (
            (0..6).map(|i| format!("e{i}")).collect(),
            thetas.par_iter().map(|&t| sample_d2(t)).collect::<Result<_>>()?,
        ),
        1 => (
            (0..3).flat_map(|j| (0..3).map(move |i| format!("mu{j}_e{i}"))).collect(),
            thetas.par_iter().map(|&t| sample_d1(t)).collect::<Result<_>>()?,
        ),
        _ => return Err(Error::DimensionOutOfRange { q: dq, lo: 1, hi: 2 }),
    };
    let nc = curve_labels.len();
    let curves: Vec<Vec<f64>> = (0..nc).map(|c| rows.iter().map(|r| r.values[c]).collect()).collect();
    let curve_min: Vec<f64> = curves.iter().map(|c| c.iter().copied().fold(f64::INFINITY, f64::min)).collect();
    let curve_max: Vec<f64> = curves.iter().map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect();
    let flat_bands = (0..nc).filter(|&c| curve_max[c] - curve_min[c] < 1e-9).map(|c| curve_min[c]).collect();
    let (mut best, mut argmax) = (f64::NEG_INFINITY, (0usize, 0usize));
    for (c, curve) in curves.iter().enumerate() {
        for (k, &v) in curve.iter().enumerate() {
            if v > best {
                best = v;
                argmax = (c, k);
            }
        }
    }
    Ok(BandReport {
        dq,
        samples,
        curve_labels,
        min: curve_min.iter().copied().fold(f64::INFINITY, f64::min),
        max: best,
        curve_min,
        curve_max,
        flat_bands,
        max_hermitian_residual: rows.iter().map(|r| r.herm).fold(0.0, f64::max),
        closed_form_residual: rows.iter().map(|r| r.closed).fold(0.0, f64::max),
        printed_subset_residual: (dq == 2).then(|| rows.iter().map(|r| r.printed).fold(0.0, f64::max)),
        argmax_theta: thetas[argmax.1],
        argmax_phi: (dq == 1).then(|| 2.0 * PI * (argmax.0 / 3) as f64 / 3.0),
        curves,
        thetas,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub n: usize,
    pub d2_match: bool,
    pub d2_max_diff: f64,
    pub d1_match: bool,
    pub d1_max_diff: f64,
    pub pass: bool,
}

fn sorted_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Compares reduced D_2^down and D_1^down of `cylinder3(n)` with the symbol eigenvalues
/// over the n-th roots of unity.
pub fn finite_quotient_check(n: usize) -> Result<QuotientReport> {
    let c = Generator::Cylinder3(n).build()?;
    let thetas: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();

    let mut d2_sym: Vec<f64> = thetas
        .par_iter()
        .map(|&t| symbol_d2(t).eigenvalues())
        .collect::<Result<Vec<_>>>()?
        .concat();
    d2_sym.sort_by(f64::total_cmp);
    let d2_fin = eigvals_hermitian(&build_discriminant(&c, 2, Mode::Down, Basis::Reduced)?.mat)?;

    let mut d1_sym: Vec<f64> = thetas
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let mut v = Vec::with_capacity(9);
            for k in 0..3 {
                v.extend(symbol_d1(t, cube_root(k))?.eigenvalues()?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    d1_sym.sort_by(f64::total_cmp);
    let d1_fin = eigvals_hermitian(&build_discriminant(&c, 1, Mode::Down, Basis::Reduced)?.mat)?;

    let d2_match = multiset_eq(&d2_fin, &d2_sym, QUOTIENT_TOL);
    let d1_match = multiset_eq(&d1_fin, &d1_sym, QUOTIENT_TOL);
    Ok(QuotientReport {
        n,
        d2_match,
        d2_max_diff: sorted_diff(&d2_fin, &d2_sym),
        d1_match,
        d1_max_diff: sorted_diff(&d1_fin, &d1_sym),
        pass: d2_match && d1_match,
    })
}
