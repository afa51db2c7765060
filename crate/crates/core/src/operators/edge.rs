//! Grover walks on the up and down graphs.

use std::collections::HashMap;

use crate::complex::{Complex, Mode, NeighborGraph};
use crate::error::{Error, Result};
use crate::linalg::{c, BasisIndex, CMat, LinearMap};

/// Boundary map, shift, coin and walk on one edge space.
#[derive(Clone, Debug)]
pub struct EdgeOps {
    pub graph: NeighborGraph,
    /// `d`: l2(E) -> l2(K_q).
    pub d: LinearMap,
    pub shift: LinearMap,
    pub coin: LinearMap,
    pub u: LinearMap,
}

impl EdgeOps {
    pub fn d_adjoint(&self) -> LinearMap {
        LinearMap { rows: self.d.cols.clone(), cols: self.d.rows.clone(), mat: self.d.mat.adjoint() }
    }

    /// `d S d^*` on l2(K_q), the full-basis discriminant.
    pub fn discriminant(&self) -> LinearMap {
        let m = &self.d.mat * &self.shift.mat * self.d.mat.adjoint();
        LinearMap { rows: self.d.rows.clone(), cols: self.d.rows.clone(), mat: m }
    }

    /// Position of edge `(a, b)` given as full indices.
    pub fn edge_index(&self) -> HashMap<(usize, usize), usize> {
        self.graph
            .edges
            .iter()
            .enumerate()
            .map(|(k, (a, b))| ((a.full_index(), b.full_index()), k))
            .collect()
    }
}

/// Number of edges leaving an oriented q-simplex: 2(q+1)deg_X or 2deg_Y.
pub fn vertex_degree(cx: &Complex, q: usize, i: usize, mode: Mode) -> usize {
    match mode {
        Mode::Up => 2 * (q + 1) * cx.deg_up(q, i),
        Mode::Down => 2 * cx.deg_down(q, i),
    }
}

pub fn build_edge_ops(cx: &Complex, q: usize, mode: Mode) -> Result<EdgeOps> {
    cx.require_assumptions()?;
    let graph = cx.neighbor_graph(q, mode)?;
    if graph.edges.is_empty() {
        return Err(Error::EmptyEdgeSet { q });
    }
    let ne = graph.edges.len();
    let nk = 2 * cx.count(q);
    let mut d = CMat::zeros(nk, ne);
    let mut shift = CMat::zeros(ne, ne);
    // the shift is a signed permutation: edge k receives sign * edge rev
    let mut perm = Vec::with_capacity(ne);
    let index: HashMap<(usize, usize), usize> = graph
        .edges
        .iter()
        .enumerate()
        .map(|(k, (a, b))| ((a.full_index(), b.full_index()), k))
        .collect();
    for (k, &(a, b)) in graph.edges.iter().enumerate() {
        let deg = vertex_degree(cx, q, a.index, mode);
        d[(a.full_index(), k)] = c(1.0 / (deg as f64).sqrt());
        let rev = index[&(b.full_index(), a.full_index())];
        let sign = cx.eta_oriented(q, a, b, mode) as f64;
        shift[(k, rev)] = c(sign);
        perm.push((rev, sign));
    }
    let id = CMat::identity(ne, ne);
    let coin = d.adjoint() * &d * c(2.0) - id;
    let mut u = CMat::zeros(ne, ne);
    for (k, &(rev, sign)) in perm.iter().enumerate() {
        u.row_mut(k).copy_from(&(coin.row(rev) * c(sign)));
    }
    let eb = BasisIndex::edges(cx, &graph);
    let kb = BasisIndex::full(cx, q);
    Ok(EdgeOps {
        d: LinearMap::new(kb, eb.clone(), d)?,
        shift: LinearMap::square(eb.clone(), shift)?,
        coin: LinearMap::square(eb.clone(), coin)?,
        u: LinearMap::square(eb, u)?,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::linalg::max_abs;

    #[test]
    fn sphere_up_edge_space() {
        let cx = Generator::Sphere.build().unwrap();
        let ops = build_edge_ops(&cx, 1, Mode::Up).unwrap();
        // 12 oriented edges, each with 2*2*2 = 8 outgoing edges
        assert_eq!(ops.graph.edges.len(), 96);
        assert!(ops.u.unitary_residual() < 1e-12);
        assert!(ops.u.mat.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn isometry_and_involutions() {
        for g in [Generator::Sphere, Generator::Fig5, Generator::CylinderStrip(4), Generator::Simplex(5)] {
            let cx = g.build().unwrap();
            for mode in [Mode::Up, Mode::Down] {
                let (lo, hi) = cx.mode_range(mode);
                for q in lo..=hi {
                    let ops = match build_edge_ops(&cx, q, mode) {
                        Ok(o) => o,
                        Err(Error::EmptyEdgeSet { .. }) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    let nk = ops.d.mat.nrows();
                    let ne = ops.d.mat.ncols();
                    let dd = &ops.d.mat * ops.d.mat.adjoint();
                    assert!(max_abs(&(dd - CMat::identity(nk, nk))) < 1e-12);
                    let s2 = &ops.shift.mat * &ops.shift.mat;
                    assert_eq!(s2, CMat::identity(ne, ne));
                    assert!(ops.u.unitary_residual() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_top_simplex_has_no_down_edges() {
        let cx = Generator::Simplex(3).build().unwrap();
        assert!(matches!(build_edge_ops(&cx, 2, Mode::Down), Err(Error::EmptyEdgeSet { q: 2 })));
        assert!(matches!(
            build_edge_ops(&cx, 2, Mode::Up),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }
}
