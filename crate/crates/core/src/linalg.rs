//! Dense complex matrices with labeled bases, plus the reduced/full basis plumbing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::complex::{Complex, Mode, NeighborGraph, Oriented};
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Which function space a basis spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "space", content = "q", rename_all = "kebab-case")]
pub enum Space {
    /// l2(K_q): every oriented q-simplex, index `2*i + parity`.
    OrientedFull(usize),
    /// C^q in the basis {delta_tau} over the chosen orientation.
    OrientedReduced(usize),
    EdgeUp(usize),
    EdgeDown(usize),
    /// l2 of ordered q-simplices.
    Ordered(usize),
    /// Auxiliary one-off basis (for example an embedded subspace).
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisIndex {
    pub space: Space,
    pub labels: Vec<String>,
}

impl BasisIndex {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn full(c: &Complex, q: usize) -> Self {
        let labels = (0..2 * c.count(q))
            .map(|k| oriented_label(c, q, Oriented::from_full_index(k)))
            .collect();
        BasisIndex { space: Space::OrientedFull(q), labels }
    }

    /// Reduced basis over an explicit orientation list (default: parity 0, basis order).
    pub fn reduced(c: &Complex, q: usize, orientation: Option<&[Oriented]>) -> Self {
        let labels = match orientation {
            Some(o) => o.iter().map(|&t| oriented_label(c, q, t)).collect(),
            None => (0..c.count(q)).map(|i| oriented_label(c, q, Oriented::new(i, false))).collect(),
        };
        BasisIndex { space: Space::OrientedReduced(q), labels }
    }

    pub fn edges(c: &Complex, g: &NeighborGraph) -> Self {
        let labels = g
            .edges
            .iter()
            .map(|&(a, b)| format!("{}|{}", oriented_label(c, g.q, a), oriented_label(c, g.q, b)))
            .collect();
        let space = match g.mode {
            Mode::Up => Space::EdgeUp(g.q),
            Mode::Down => Space::EdgeDown(g.q),
        };
        BasisIndex { space, labels }
    }

    pub fn ordered(c: &Complex, q: usize, seqs: &[Vec<usize>]) -> Self {
        let labels = seqs
            .iter()
            .map(|s| {
                let v: Vec<&str> = s.iter().map(|&x| c.labels()[x].as_str()).collect();
                format!("({})", v.join(" "))
            })
            .collect();
        BasisIndex { space: Space::Ordered(q), labels }
    }

    pub fn other(n: usize, prefix: &str) -> Self {
        BasisIndex { space: Space::Other, labels: (0..n).map(|i| format!("{prefix}{i}")).collect() }
    }
}

/// `<a b c>` for parity 0, `-<a b c>` for its opposite.
pub fn oriented_label(c: &Complex, q: usize, t: Oriented) -> String {
    let body = c.simplex_label(c.simplex(q, t.index));
    if t.odd {
        format!("-<{body}>")
    } else {
        format!("<{body}>")
    }
}

/// A dense complex matrix together with the bases of its domain and codomain.
#[derive(Clone, Debug)]
pub struct LinearMap {
    pub rows: BasisIndex,
    pub cols: BasisIndex,
    pub mat: CMat,
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    rows: &'a BasisIndex,
    cols: &'a BasisIndex,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl LinearMap {
    pub fn new(rows: BasisIndex, cols: BasisIndex, mat: CMat) -> Result<Self> {
        if mat.nrows() != rows.len() || mat.ncols() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix against {}x{} bases",
                mat.nrows(),
                mat.ncols(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(LinearMap { rows, cols, mat })
    }

    /// Square map on one basis.
    pub fn square(basis: BasisIndex, mat: CMat) -> Result<Self> {
        LinearMap::new(basis.clone(), basis, mat)
    }

    pub fn is_square(&self) -> bool {
        self.mat.nrows() == self.mat.ncols()
    }

    pub fn hermitian_residual(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn unitary_residual(&self) -> f64 {
        let n = self.mat.ncols();
        max_abs(&(self.mat.adjoint() * &self.mat - CMat::identity(n, n)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (r, k) = self.mat.shape();
        let re = (0..r).map(|i| (0..k).map(|j| self.mat[(i, j)].re).collect()).collect();
        let im = (0..r).map(|i| (0..k).map(|j| self.mat[(i, j)].im).collect()).collect();
        serde_json::to_value(MatrixJson { rows: &self.rows, cols: &self.cols, re, im })
            .expect("matrix serializes")
    }

    /// Header of column labels, then one row per basis element with `re,im` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for l in &self.cols.labels {
            out.push_str(&format!(",{} re,{} im", csv_escape(l), csv_escape(l)));
        }
        out.push('\n');
        for (i, l) in self.rows.labels.iter().enumerate() {
            out.push_str(&csv_escape(l));
            for j in 0..self.mat.ncols() {
                let z = self.mat[(i, j)];
                out.push_str(&format!(",{},{}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn real_matrix(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

/// Projection of l2(K_q) onto C^q: `(Pg)(tau) = (g(tau) - g(bar tau))/2`.
pub fn antisym_projector(m: usize) -> CMat {
    pair_projector(m, -0.5)
}

/// Projection onto C^q_+: `(g(tau) + g(bar tau))/2`.
pub fn sym_projector(m: usize) -> CMat {
    pair_projector(m, 0.5)
}

fn pair_projector(m: usize, off: f64) -> CMat {
    let mut p = CMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        p[(2 * i, 2 * i)] = c(0.5);
        p[(2 * i + 1, 2 * i + 1)] = c(0.5);
        p[(2 * i, 2 * i + 1)] = c(off);
        p[(2 * i + 1, 2 * i)] = c(off);
    }
    p
}

/// Columns are delta_tau for parity-0 tau: +1 at tau, -1 at bar tau.
pub fn reduced_embedding(m: usize) -> CMat {
    let mut e = CMat::zeros(2 * m, m);
    for i in 0..m {
        e[(2 * i, i)] = ONE;
        e[(2 * i + 1, i)] = -ONE;
    }
    e
}

/// Matrix of a full-basis operator in the reduced basis {delta_tau}:
/// entry (i, j) = T(tau_i, tau_j) - T(tau_i, bar tau_j).
pub fn reduce(full: &CMat) -> CMat {
    let m = full.nrows() / 2;
    CMat::from_fn(m, m, |i, j| full[(2 * i, 2 * j)] - full[(2 * i, 2 * j + 1)])
}

/// Re-expresses a reduced-basis matrix over another orientation and ordering of simplices.
pub fn reorient(red: &CMat, basis: &[Oriented]) -> CMat {
    let s = |t: Oriented| if t.odd { -1.0 } else { 1.0 };
    let n = basis.len();
    CMat::from_fn(n, n, |i, j| red[(basis[i].index, basis[j].index)] * s(basis[i]) * s(basis[j]))
}

/// Lifts a reduced coefficient vector to the function on K_q it represents.
pub fn embed_reduced(x: &CVec) -> CVec {
    let mut out = CVec::zeros(2 * x.len());
    for (i, z) in x.iter().enumerate() {
        out[2 * i] = *z;
        out[2 * i + 1] = -*z;
    }
    out
}

/// Dense matrix-vector power iteration helper: returns `U^n v`.
pub fn apply_power(u: &CMat, v: &CVec, n: usize) -> CVec {
    let mut x = v.clone();
    for _ in 0..n {
        x = u * x;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectors_are_complementary() {
        let p = antisym_projector(3);
        let pp = sym_projector(3);
        assert!(max_abs(&(&p * &p - &p)) < 1e-15);
        assert!(max_abs(&(&p + &pp - CMat::identity(6, 6))) < 1e-15);
        let e = reduced_embedding(3);
        assert!(max_abs(&(&p * &e - &e)) < 1e-15);
    }

    #[test]
    fn reduce_of_embedded_operator() {
        // a full-basis operator that commutes with P reduces to E^+ T E
        let red = CMat::from_fn(3, 3, |i, j| c((i * 3 + j) as f64));
        let e = reduced_embedding(3);
        let full = &e * &red * e.transpose() * c(0.5);
        let back = reduce(&full);
        assert!(max_abs(&(back - red)) < 1e-12);
    }

    #[test]
    fn reorient_flips_signs() {
        let red = CMat::from_fn(2, 2, |i, j| c(if i == j { 0.0 } else { 1.0 }));
        let r = reorient(&red, &[Oriented::new(1, true), Oriented::new(0, false)]);
        assert_eq!(r[(0, 1)], c(-1.0));
        assert_eq!(r[(1, 0)], c(-1.0));
    }

    #[test]
    fn shape_checked() {
        let b = BasisIndex::other(2, "e");
        assert!(LinearMap::square(b, CMat::zeros(3, 3)).is_err());
    }
}
