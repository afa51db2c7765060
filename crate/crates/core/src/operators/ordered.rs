//! The ordered-simplex space and the modified S-quantum walk built on it.

use std::collections::HashMap;

use crate::complex::{permutation_parity, Complex};
use crate::error::{Error, Result};
use crate::linalg::{c, BasisIndex, CMat, LinearMap, ONE};

/// Every ordering of every q-simplex, sorted lexicographically.
#[derive(Clone, Debug)]
pub struct OrderedBasis {
    pub q: usize,
    pub seqs: Vec<Vec<usize>>,
    /// Index of the underlying simplex for each sequence.
    pub simplex: Vec<usize>,
    /// Parity of each sequence relative to sorted order.
    pub odd: Vec<bool>,
    index: HashMap<Vec<usize>, usize>,
}

impl OrderedBasis {
    pub fn new(cx: &Complex, q: usize) -> Self {
        let mut rows: Vec<(Vec<usize>, usize)> = Vec::new();
        for (i, s) in cx.simplices(q).iter().enumerate() {
            for p in permutations(s.vertices()) {
                rows.push((p, i));
            }
        }
        rows.sort();
        let index = rows.iter().enumerate().map(|(k, (s, _))| (s.clone(), k)).collect();
        let odd = rows.iter().map(|(s, _)| permutation_parity(s)).collect();
        let (seqs, simplex) = rows.into_iter().unzip();
        OrderedBasis { q, seqs, simplex, odd, index }
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn position(&self, seq: &[usize]) -> Option<usize> {
        self.index.get(seq).copied()
    }

    pub fn basis_index(&self, cx: &Complex) -> BasisIndex {
        BasisIndex::ordered(cx, self.q, &self.seqs)
    }

    /// Columns: the antisymmetric lift s -> delta_tau(<s>) of each parity-0 reduced basis vector.
    pub fn cochain_embedding(&self, m: usize) -> CMat {
        let mut e = CMat::zeros(self.len(), m);
        for k in 0..self.len() {
            e[(k, self.simplex[k])] = if self.odd[k] { -ONE } else { ONE };
        }
        e
    }

    /// Columns: indicator of all orderings of each simplex (spans C_+).
    pub fn symmetric_embedding(&self, m: usize) -> CMat {
        let mut e = CMat::zeros(self.len(), m);
        for k in 0..self.len() {
            e[(k, self.simplex[k])] = ONE;
        }
        e
    }
}

pub(crate) fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn check_range(cx: &Complex, q: usize) -> Result<()> {
    if q == 0 || q > cx.dim() {
        return Err(Error::DimensionOutOfRange { q, lo: 1, hi: cx.dim() });
    }
    cx.require_assumptions()
}

/// `alpha_{q-1}`: l2(K^_{q-1}) -> l2(K^_q), `(alpha f)(s) = f(nu(s)) / sqrt(deg nu(s))`.
pub fn build_alpha(cx: &Complex, q: usize) -> Result<LinearMap> {
    check_range(cx, q)?;
    let lo = OrderedBasis::new(cx, q - 1);
    let hi = OrderedBasis::new(cx, q);
    let mat = alpha_matrix(cx, &lo, &hi);
    LinearMap::new(hi.basis_index(cx), lo.basis_index(cx), mat)
}

fn alpha_matrix(cx: &Complex, lo: &OrderedBasis, hi: &OrderedBasis) -> CMat {
    let mut a = CMat::zeros(hi.len(), lo.len());
    for (k, s) in hi.seqs.iter().enumerate() {
        let t = &s[..s.len() - 1];
        let j = lo.position(t).expect("prefix of an ordered simplex is ordered");
        let deg = cx.deg_up(lo.q, lo.simplex[j]) as f64;
        a[(k, j)] = c(1.0 / deg.sqrt());
    }
    a
}

/// The walk `G_q = S_q C_q` with its coin, shift and antisymmetrizer.
#[derive(Clone, Debug)]
pub struct GWalk {
    pub q: usize,
    pub alpha: LinearMap,
    pub coin: LinearMap,
    pub shift: LinearMap,
    pub antisym: LinearMap,
    pub g: LinearMap,
    pub lower: OrderedBasis,
    pub upper: OrderedBasis,
}

impl GWalk {
    /// `D(G_q) = alpha^* S_q alpha` on l2(K^_{q-1}).
    pub fn discriminant(&self) -> LinearMap {
        let a = &self.alpha.mat;
        let m = a.adjoint() * &self.shift.mat * a;
        LinearMap { rows: self.alpha.cols.clone(), cols: self.alpha.cols.clone(), mat: m }
    }
}

pub fn build_g_walk(cx: &Complex, q: usize) -> Result<GWalk> {
    check_range(cx, q)?;
    let lower = OrderedBasis::new(cx, q - 1);
    let upper = OrderedBasis::new(cx, q);
    let a = alpha_matrix(cx, &lower, &upper);
    let n = upper.len();
    let id = CMat::identity(n, n);
    let coin = &a * a.adjoint() * c(2.0) - &id;
    let fact: f64 = (1..=q + 1).map(|x| x as f64).product();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); cx.count(q)];
    for (k, &i) in upper.simplex.iter().enumerate() {
        groups[i].push(k);
    }
    let mut p = CMat::zeros(n, n);
    for g in &groups {
        for &i in g {
            for &j in g {
                let s = if upper.odd[i] ^ upper.odd[j] { -1.0 } else { 1.0 };
                p[(i, j)] = c(s / fact);
            }
        }
    }
    let shift = &p * c(2.0) - &id;
    let g = &shift * &coin;
    let hb = upper.basis_index(cx);
    let lb = lower.basis_index(cx);
    Ok(GWalk {
        q,
        alpha: LinearMap::new(hb.clone(), lb, a)?,
        coin: LinearMap::square(hb.clone(), coin)?,
        shift: LinearMap::square(hb.clone(), shift)?,
        antisym: LinearMap::square(hb.clone(), p)?,
        g: LinearMap::square(hb, g)?,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::linalg::max_abs;

    #[test]
    fn sphere_alpha_shape_and_isometry() {
        let cx = Generator::Sphere.build().unwrap();
        let a = build_alpha(&cx, 2).unwrap();
        assert_eq!(a.mat.shape(), (24, 12));
        let n = a.mat.ncols();
        assert!(max_abs(&(a.mat.adjoint() * &a.mat - CMat::identity(n, n))) < 1e-12);
        // deg(t) = 2 for an ordered edge of the sphere
        assert!((a.mat[(0, a.cols.labels.iter().position(|l| l == "(0 1)").unwrap())].re
            - 1.0 / 2f64.sqrt())
        .abs()
            < 1e-15);
    }

    #[test]
    fn g_walk_involutions() {
        for g in [Generator::Sphere, Generator::Fig5, Generator::Simplex(4)] {
            let cx = g.build().unwrap();
            for q in 1..=cx.dim() {
                let w = build_g_walk(&cx, q).unwrap();
                let n = w.g.mat.nrows();
                let id = CMat::identity(n, n);
                assert!(max_abs(&(&w.coin.mat * &w.coin.mat - &id)) < 1e-12);
                assert!(max_abs(&(&w.shift.mat * &w.shift.mat - &id)) < 1e-12);
                assert!(w.g.unitary_residual() < 1e-12);
                let p = &w.antisym.mat;
                assert!(max_abs(&(p * p - p)) < 1e-12);
                assert!(w.antisym.hermitian_residual() < 1e-15);
                assert!(w.discriminant().hermitian_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn antisymmetrizer_image_is_cochains() {
        let cx = Generator::Sphere.build().unwrap();
        let w = build_g_walk(&cx, 2).unwrap();
        let e = w.upper.cochain_embedding(cx.count(2));
        assert!(max_abs(&(&w.antisym.mat * &e - &e)) < 1e-12);
        let s = w.upper.symmetric_embedding(cx.count(2));
        assert!(max_abs(&(&w.antisym.mat * &s)) < 1e-12);
    }

    #[test]
    fn out_of_range() {
        let cx = Generator::Sphere.build().unwrap();
        assert!(matches!(build_g_walk(&cx, 0), Err(Error::DimensionOutOfRange { .. })));
        assert!(matches!(build_alpha(&cx, 3), Err(Error::DimensionOutOfRange { .. })));
    }
}
