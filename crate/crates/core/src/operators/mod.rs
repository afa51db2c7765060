//! Dense matrices for every walk, discriminant and Laplacian on a finite complex.

mod cochain;
mod edge;
mod ordered;

pub use cochain::{a_down, a_map, a_up, b_map, coboundary, f_sigma, lap_down, lap_up, laplacian};
pub use edge::{build_edge_ops, vertex_degree, EdgeOps};
pub use ordered::{build_alpha, build_g_walk, GWalk, OrderedBasis};

use serde::Serialize;

use crate::complex::{Complex, Mode, Oriented, OrientedSimplex};
use crate::error::{Error, Result};
use crate::linalg::{c, reduce, reorient, BasisIndex, CMat, LinearMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// l2(K_q), both orientations of every simplex.
    Full,
    /// C^q in the delta basis over parity-0 orientations.
    Reduced,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Basis::Full),
            "reduced" => Ok(Basis::Reduced),
            _ => Err(Error::InvalidParams(format!("unknown basis {s:?}"))),
        }
    }
}

/// Discriminant from its closed form: `eta / (2(q+1) sqrt(deg_X deg_X'))` (up) or
/// `eta / (2 sqrt(deg_Y deg_Y'))` (down) on l2(K_q); entries double in the reduced basis.
pub fn build_discriminant(cx: &Complex, q: usize, mode: Mode, basis: Basis) -> Result<LinearMap> {
    let full = discriminant_full(cx, q, mode)?;
    match basis {
        Basis::Full => LinearMap::square(BasisIndex::full(cx, q), full),
        Basis::Reduced => LinearMap::square(BasisIndex::reduced(cx, q, None), reduce(&full)),
    }
}

fn discriminant_full(cx: &Complex, q: usize, mode: Mode) -> Result<CMat> {
    cx.require_assumptions()?;
    cx.check_mode_range(q, mode)?;
    let m = cx.count(q);
    let mut d = CMat::zeros(2 * m, 2 * m);
    let mut any = false;
    for i in 0..m {
        for j in cx.neighbors(q, i, mode) {
            any = true;
            let w = (vertex_degree(cx, q, i, mode) * vertex_degree(cx, q, j, mode)) as f64;
            let base = cx.eta_base(q, i, j, mode) as f64 / w.sqrt();
            for (pa, pb) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let s = if pa == pb { 1.0 } else { -1.0 };
                d[(2 * i + pa, 2 * j + pb)] = c(s * base);
            }
        }
    }
    if !any {
        return Err(Error::EmptyEdgeSet { q });
    }
    Ok(d)
}

/// Reduced discriminant over a caller-chosen list of oriented simplices (order and sign).
pub fn discriminant_in(cx: &Complex, q: usize, mode: Mode, basis: &[OrientedSimplex]) -> Result<LinearMap> {
    let red = build_discriminant(cx, q, mode, Basis::Reduced)?;
    let located = locate_all(cx, q, basis)?;
    let mat = reorient(&red.mat, &located);
    LinearMap::square(BasisIndex::reduced(cx, q, Some(&located)), mat)
}

pub(crate) fn locate_all(cx: &Complex, q: usize, basis: &[OrientedSimplex]) -> Result<Vec<Oriented>> {
    let located: Vec<Oriented> = basis
        .iter()
        .map(|t| {
            if t.dim() != q {
                return Err(Error::DimensionMismatch(format!("{t} is not a {q}-simplex")));
            }
            cx.locate(t)
        })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; cx.count(q)];
    for o in &located {
        if std::mem::replace(&mut seen[o.index], true) {
            return Err(Error::InvalidParams("orientation lists a simplex twice".into()));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidParams("orientation misses a simplex".into()));
    }
    Ok(located)
}

/// `S^theta D S^theta` for a diagonal sign switch.
pub fn apply_switching(d: &CMat, theta: &[i8]) -> Result<CMat> {
    if theta.len() != d.nrows() || !d.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "switching of length {} for a {}x{} matrix",
            theta.len(),
            d.nrows(),
            d.ncols()
        )));
    }
    if let Some(x) = theta.iter().find(|&&x| x != 1 && x != -1) {
        return Err(Error::InvalidParams(format!("switching entries must be +-1, got {x}")));
    }
    let n = d.nrows();
    Ok(CMat::from_fn(n, n, |i, j| d[(i, j)] * (theta[i] * theta[j]) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::linalg::{antisym_projector, max_abs, sym_projector};

    fn os(v: &[usize]) -> OrientedSimplex {
        OrientedSimplex::from_ordered(v).unwrap()
    }

    #[test]
    fn closed_form_matches_d_s_dstar() {
        for g in [Generator::Sphere, Generator::Fig5, Generator::MoebiusStrip(3), Generator::Simplex(5)] {
            let cx = g.build().unwrap();
            for mode in [Mode::Up, Mode::Down] {
                let (lo, hi) = cx.mode_range(mode);
                for q in lo..=hi {
                    let Ok(ops) = build_edge_ops(&cx, q, mode) else { continue };
                    let d = build_discriminant(&cx, q, mode, Basis::Full).unwrap();
                    assert!(max_abs(&(&d.mat - ops.discriminant().mat)) < 1e-12, "{g:?} {q} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn full_discriminant_lives_on_cochains() {
        let cx = Generator::Fig5.build().unwrap();
        for (q, mode) in [(1, Mode::Up), (1, Mode::Down), (2, Mode::Down), (0, Mode::Up)] {
            let d = build_discriminant(&cx, q, mode, Basis::Full).unwrap().mat;
            let p = antisym_projector(cx.count(q));
            assert!(max_abs(&(&p * &d * &p - &d)) < 1e-12);
            assert!(max_abs(&(&d * sym_projector(cx.count(q)))) < 1e-12);
        }
    }

    #[test]
    fn fig5_table_entries() {
        let cx = Generator::Fig5.build().unwrap();
        let basis: Vec<_> = [[0, 1, 2], [2, 1, 4], [1, 3, 4], [0, 1, 3], [2, 1, 3]].iter().map(|t| os(t)).collect();
        let d = discriminant_in(&cx, 2, Mode::Down, &basis).unwrap().mat;
        assert!((d[(0, 1)].re + 1.0 / 3.0).abs() < 1e-12);
        assert!((d[(0, 4)].re + 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn switching_validation() {
        let d = CMat::identity(2, 2);
        assert!(apply_switching(&d, &[1, 0]).is_err());
        assert!(apply_switching(&d, &[1]).is_err());
        assert_eq!(apply_switching(&d, &[1, 1]).unwrap(), d);
    }
}
