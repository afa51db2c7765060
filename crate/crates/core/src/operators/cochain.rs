//! Coboundaries, combinatorial Laplacians and the degree-weighted factorizations,
//! all in the reduced basis over parity-0 orientations.

use crate::complex::{sgn_unchecked, Complex, OrientedSimplex};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};

/// Matrix of `delta_q`: C^q -> C^{q+1}. Has zero rows past the top dimension.
pub fn coboundary(cx: &Complex, q: usize) -> CMat {
    let rows = cx.count(q + 1);
    let cols = cx.count(q);
    let mut d = CMat::zeros(rows, cols);
    for i in 0..rows {
        let s = OrientedSimplex::new(cx.simplex(q + 1, i).clone(), false);
        for &j in cx.faces(q + 1, i) {
            let t = OrientedSimplex::new(cx.simplex(q, j).clone(), false);
            d[(i, j)] = c(sgn_unchecked(&s, &t) as f64);
        }
    }
    d
}

pub fn lap_up(cx: &Complex, q: usize) -> CMat {
    let d = coboundary(cx, q);
    d.transpose() * d
}

pub fn lap_down(cx: &Complex, q: usize) -> CMat {
    if q == 0 {
        let m = cx.count(0);
        return CMat::zeros(m, m);
    }
    let d = coboundary(cx, q - 1);
    &d * d.transpose()
}

pub fn laplacian(cx: &Complex, q: usize) -> CMat {
    lap_up(cx, q) + lap_down(cx, q)
}

/// `diag(1/sqrt(deg_X))`; undefined where some simplex has no cofacet.
pub fn a_up(cx: &Complex, q: usize) -> Result<CMat> {
    if q >= cx.dim() {
        return Err(Error::DimensionOutOfRange { q, lo: 0, hi: cx.dim().saturating_sub(1) });
    }
    diag_inv_sqrt((0..cx.count(q)).map(|i| cx.deg_up(q, i)).collect(), q)
}

/// `diag(1/sqrt(deg_Y))`.
pub fn a_down(cx: &Complex, q: usize) -> Result<CMat> {
    if q == 0 || q > cx.dim() {
        return Err(Error::DimensionOutOfRange { q, lo: 1, hi: cx.dim() });
    }
    diag_inv_sqrt((0..cx.count(q)).map(|i| cx.deg_down(q, i)).collect(), q)
}

fn diag_inv_sqrt(deg: Vec<usize>, q: usize) -> Result<CMat> {
    if let Some(i) = deg.iter().position(|&d| d == 0) {
        return Err(Error::Precondition(format!("simplex {i} of dimension {q} has degree 0")));
    }
    let v = CVec::from_iterator(deg.len(), deg.iter().map(|&d| c(1.0 / (d as f64).sqrt())));
    Ok(CMat::from_diagonal(&v))
}

/// `a_q = delta_q A^up_q`.
pub fn a_map(cx: &Complex, q: usize) -> Result<CMat> {
    Ok(coboundary(cx, q) * a_up(cx, q)?)
}

/// `b_{q-1} = A^down_q delta_{q-1}`: C^{q-1} -> C^q.
pub fn b_map(cx: &Complex, q: usize) -> Result<CMat> {
    if q == 0 {
        return Err(Error::DimensionOutOfRange { q, lo: 1, hi: cx.dim() });
    }
    Ok(a_down(cx, q)? * coboundary(cx, q - 1))
}

/// `f_sigma(tau) = sgn(sigma, tau)` in the reduced basis of dimension dim(sigma) - 1.
pub fn f_sigma(cx: &Complex, sigma: &OrientedSimplex) -> Result<CVec> {
    let i = cx.locate(sigma)?.index;
    let p = sigma.dim();
    if p == 0 {
        return Err(Error::DimensionOutOfRange { q: 0, lo: 1, hi: cx.dim() });
    }
    let mut v = CVec::zeros(cx.count(p - 1));
    for &j in cx.faces(p, i) {
        let t = OrientedSimplex::new(cx.simplex(p - 1, j).clone(), false);
        v[j] = c(sgn_unchecked(sigma, &t) as f64);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::linalg::max_abs;

    #[test]
    fn coboundary_squares_to_zero() {
        for g in [Generator::Simplex(5), Generator::Fig5, Generator::MoebiusStrip(4)] {
            let cx = g.build().unwrap();
            for q in 0..cx.dim() {
                let dd = coboundary(&cx, q + 1) * coboundary(&cx, q);
                assert!(max_abs(&dd) == 0.0);
            }
        }
    }

    #[test]
    fn simplex_up_laplacian_on_f_sigma() {
        for n in 3..=6 {
            let cx = Generator::Simplex(n).build().unwrap();
            for q in 0..n - 1 {
                let l = lap_up(&cx, q);
                for s in cx.simplices(q + 1) {
                    let f = f_sigma(&cx, &OrientedSimplex::new(s.clone(), true)).unwrap();
                    let r = &l * &f - &f * c(n as f64);
                    assert!(r.iter().all(|z| z.norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn f_sigma_support() {
        let cx = Generator::Simplex(4).build().unwrap();
        let f = f_sigma(&cx, &OrientedSimplex::from_ordered(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(f.iter().filter(|z| z.norm() > 0.0).count(), 3);
        assert!((f.norm_squared() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn top_dimension_up_weights_rejected() {
        let cx = Generator::Sphere.build().unwrap();
        assert!(a_up(&cx, 2).is_err());
        assert!(a_down(&cx, 0).is_err());
    }
}
