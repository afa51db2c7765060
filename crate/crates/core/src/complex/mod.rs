//! Finite simplicial complexes: storage, neighbor structure, orientations.

mod generate;
mod orient;
mod parse;
mod simplex;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

pub use generate::{cylinder3_coherent, Generator};
pub use orient::{is_bipartite, orientation_search, Orientation, OrientationTarget};
pub use parse::{parse_complex, parse_complex_bytes};
pub use simplex::{permutation_parity, sgn, OrientedSimplex, Simplex};

pub(crate) use simplex::sgn_unchecked;

use crate::error::{Error, Result};

/// Which adjacency a neighbor graph uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// q-simplices sharing a (q+1)-cofacet.
    Up,
    /// q-simplices sharing a (q-1)-face.
    Down,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Mode::Up),
            "down" => Ok(Mode::Down),
            _ => Err(Error::InvalidParams(format!("unknown mode {s:?}"))),
        }
    }
}

/// A q-simplex referenced by its index in [`Complex::simplices`] plus a parity bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Oriented {
    pub index: usize,
    pub odd: bool,
}

impl Oriented {
    pub fn new(index: usize, odd: bool) -> Self {
        Oriented { index, odd }
    }

    /// Position in the full basis of l2(K_q): simplex-major, parity 0 first.
    pub fn full_index(self) -> usize {
        2 * self.index + self.odd as usize
    }

    pub fn from_full_index(i: usize) -> Self {
        Oriented { index: i / 2, odd: i % 2 == 1 }
    }

    pub fn bar(self) -> Self {
        Oriented { index: self.index, odd: !self.odd }
    }
}

/// Oriented edge set of an up or down graph in one dimension.
#[derive(Clone, Debug)]
pub struct NeighborGraph {
    pub mode: Mode,
    pub q: usize,
    /// Lexicographic on (full index of origin, full index of terminus).
    pub edges: Vec<(Oriented, Oriented)>,
}

/// Findings of a structural scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub pure: bool,
    pub strongly_connected: bool,
    /// Largest number of simplices strictly containing a single simplex.
    pub max_cofacet_count: usize,
    /// Number of simplices per dimension.
    pub simplex_counts: Vec<usize>,
    /// Number of maximal simplices per dimension.
    pub facet_counts: Vec<usize>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.pure && self.strongly_connected
    }
}

/// A validated finite simplicial complex with every dimension populated.
///
/// Immutable once built; simplices of each dimension are sorted lexicographically and
/// that order fixes every matrix basis downstream.
#[derive(Clone, Debug)]
pub struct Complex {
    labels: Vec<String>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// cofaces[q][i]: indices of (q+1)-simplices containing simplex i of dim q
    cofaces: Vec<Vec<Vec<usize>>>,
    /// faces[q][i]: indices of (q-1)-faces of simplex i of dim q
    faces: Vec<Vec<Vec<usize>>>,
    allow_degenerate: bool,
}

impl Complex {
    /// Downward closure of `facets`; vertex ids must be `0..labels.len()`.
    pub fn from_facets(facets: &[Vec<usize>], labels: Vec<String>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::Parse { line: 0, msg: "no facets".into() });
        }
        let nv = labels.len();
        let mut top = 0;
        let mut sets: Vec<std::collections::BTreeSet<Simplex>> = Vec::new();
        for f in facets {
            let s = Simplex::new(f.clone())?;
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidParams(format!("vertex id {v} has no label")));
            }
            top = top.max(s.dim());
            if sets.len() <= top {
                sets.resize_with(top + 1, Default::default);
            }
            let verts = s.vertices();
            let k = verts.len();
            // enumerate all non-empty subsets
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> =
                    (0..k).filter(|b| mask >> b & 1 == 1).map(|b| verts[b]).collect();
                let d = sub.len() - 1;
                sets[d].insert(Simplex::from_sorted(sub));
            }
        }
        if sets[0].len() != nv {
            return Err(Error::InvalidParams(format!(
                "{} labels but only {} vertices used",
                nv,
                sets[0].len()
            )));
        }
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Simplex, usize>> = by_dim
            .iter()
            .map(|v| v.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut cofaces: Vec<Vec<Vec<usize>>> =
            by_dim.iter().map(|v| vec![Vec::new(); v.len()]).collect();
        let mut faces: Vec<Vec<Vec<usize>>> =
            by_dim.iter().map(|v| vec![Vec::new(); v.len()]).collect();
        for q in 1..by_dim.len() {
            for (i, s) in by_dim[q].iter().enumerate() {
                for f in s.facets() {
                    let j = index[q - 1][&f];
                    faces[q][i].push(j);
                    cofaces[q - 1][j].push(i);
                }
            }
        }
        Ok(Complex { labels, by_dim, index, cofaces, faces, allow_degenerate: false })
    }

    /// Lets downstream operations run on non-pure or disconnected complexes.
    pub fn with_override(mut self, allow: bool) -> Self {
        self.allow_degenerate = allow;
        self
    }

    pub fn allows_degenerate(&self) -> bool {
        self.allow_degenerate
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Simplices of dimension q in basis order; empty past the top dimension.
    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.by_dim.get(q).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn simplex(&self, q: usize, i: usize) -> &Simplex {
        &self.by_dim[q][i]
    }

    pub fn oriented(&self, q: usize, o: Oriented) -> OrientedSimplex {
        OrientedSimplex::new(self.by_dim[q][o.index].clone(), o.odd)
    }

    /// Resolves an oriented simplex to its index form; errors if absent.
    pub fn locate(&self, t: &OrientedSimplex) -> Result<Oriented> {
        self.index_of(&t.simplex)
            .map(|i| Oriented::new(i, t.odd))
            .ok_or_else(|| Error::UnknownSimplex(t.simplex.vertices().to_vec()))
    }

    /// Oriented simplex from an ordered list of vertex labels.
    pub fn oriented_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<OrientedSimplex> {
        let ids: Vec<usize> = labels
            .iter()
            .map(|l| {
                self.labels.iter().position(|x| x == l.as_ref()).ok_or_else(|| {
                    Error::InvalidParams(format!("unknown vertex label {:?}", l.as_ref()))
                })
            })
            .collect::<Result<_>>()?;
        let t = OrientedSimplex::from_ordered(&ids)?;
        self.locate(&t)?;
        Ok(t)
    }

    /// Human-readable label of a simplex, e.g. `"0 1 2"`.
    pub fn simplex_label(&self, s: &Simplex) -> String {
        s.vertices().iter().map(|&v| self.labels[v].as_str()).collect::<Vec<_>>().join(" ")
    }

    pub(crate) fn cofaces(&self, q: usize, i: usize) -> &[usize] {
        &self.cofaces[q][i]
    }

    pub(crate) fn faces(&self, q: usize, i: usize) -> &[usize] {
        &self.faces[q][i]
    }

    /// Number of (q+1)-simplices containing simplex `i` of dimension q.
    pub fn deg_up(&self, q: usize, i: usize) -> usize {
        self.cofaces.get(q).map(|c| c[i].len()).unwrap_or(0)
    }

    /// Number of q-simplices sharing a (q-1)-face with simplex `i`.
    pub fn deg_down(&self, q: usize, i: usize) -> usize {
        if q == 0 {
            return 0;
        }
        self.faces[q][i].iter().map(|&f| self.cofaces[q - 1][f].len() - 1).sum()
    }

    /// Degree of an oriented simplex in the given mode (orientation-independent).
    pub fn degree(&self, t: &OrientedSimplex, mode: Mode) -> Result<usize> {
        let q = t.dim();
        let i = self.locate(t)?.index;
        match mode {
            Mode::Up => {
                if q >= self.dim() {
                    return Err(Error::DimensionOutOfRange { q, lo: 0, hi: self.dim().saturating_sub(1) });
                }
                Ok(self.deg_up(q, i))
            }
            Mode::Down => {
                if q == 0 {
                    return Err(Error::DimensionOutOfRange { q, lo: 1, hi: self.dim() });
                }
                Ok(self.deg_down(q, i))
            }
        }
    }

    /// Distinct q-simplices adjacent to simplex `i` in the given mode, ascending.
    pub fn neighbors(&self, q: usize, i: usize, mode: Mode) -> Vec<usize> {
        let mut out = Vec::new();
        match mode {
            Mode::Up => {
                if q < self.dim() {
                    for &c in &self.cofaces[q][i] {
                        out.extend(self.faces[q + 1][c].iter().copied().filter(|&j| j != i));
                    }
                }
            }
            Mode::Down => {
                if q > 0 {
                    for &f in &self.faces[q][i] {
                        out.extend(self.cofaces[q - 1][f].iter().copied().filter(|&j| j != i));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Valid q range for graphs of the given mode: up 0..dim-1, down 1..dim.
    pub fn mode_range(&self, mode: Mode) -> (usize, usize) {
        match mode {
            Mode::Up => (0, self.dim().saturating_sub(1)),
            Mode::Down => (1, self.dim()),
        }
    }

    pub(crate) fn check_mode_range(&self, q: usize, mode: Mode) -> Result<()> {
        let (lo, hi) = self.mode_range(mode);
        let empty = match mode {
            Mode::Up => self.dim() == 0,
            Mode::Down => self.dim() == 0,
        };
        if empty || q < lo || q > hi {
            return Err(Error::DimensionOutOfRange { q, lo, hi });
        }
        Ok(())
    }

    /// The common (q+1)-cofacet of two up-neighboring q-simplices, parity 0.
    pub fn common_cofacet(&self, a: &OrientedSimplex, b: &OrientedSimplex) -> Result<OrientedSimplex> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch("common_cofacet needs equal dimensions".into()));
        }
        self.locate(a)?;
        self.locate(b)?;
        let u = a.simplex.union(&b.simplex);
        if a.simplex == b.simplex || u.vertices().len() != a.dim() + 2 || self.index_of(&u).is_none() {
            return Err(Error::NotNeighbors(format!(
                "{} and {} are not up neighbors",
                a.simplex, b.simplex
            )));
        }
        Ok(OrientedSimplex::new(u, false))
    }

    /// The common (q-1)-face of two down-neighboring q-simplices, parity 0.
    pub fn common_face(&self, a: &OrientedSimplex, b: &OrientedSimplex) -> Result<OrientedSimplex> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch("common_face needs equal dimensions".into()));
        }
        self.locate(a)?;
        self.locate(b)?;
        let q = a.dim();
        let inter = a.simplex.intersection(&b.simplex);
        if q == 0 || a.simplex == b.simplex || inter.len() != q {
            return Err(Error::NotNeighbors(format!(
                "{} and {} are not down neighbors",
                a.simplex, b.simplex
            )));
        }
        Ok(OrientedSimplex::new(Simplex::from_sorted(inter), false))
    }

    /// Orientation sign of an edge of the up or down graph; symmetric in its arguments.
    pub fn eta(&self, a: &OrientedSimplex, b: &OrientedSimplex, mode: Mode) -> Result<i8> {
        match mode {
            Mode::Up => {
                let s = self.common_cofacet(a, b)?;
                Ok(sgn_unchecked(&s, a) * sgn_unchecked(&s, b))
            }
            Mode::Down => {
                let m = self.common_face(a, b)?;
                Ok(sgn_unchecked(a, &m) * sgn_unchecked(b, &m))
            }
        }
    }

    /// eta on parity-0 representatives of two adjacent q-simplices given by index.
    pub(crate) fn eta_base(&self, q: usize, i: usize, j: usize, mode: Mode) -> i8 {
        let a = OrientedSimplex::new(self.by_dim[q][i].clone(), false);
        let b = OrientedSimplex::new(self.by_dim[q][j].clone(), false);
        match mode {
            Mode::Up => {
                let s = OrientedSimplex::new(a.simplex.union(&b.simplex), false);
                sgn_unchecked(&s, &a) * sgn_unchecked(&s, &b)
            }
            Mode::Down => {
                let m = OrientedSimplex::new(Simplex::from_sorted(a.simplex.intersection(&b.simplex)), false);
                sgn_unchecked(&a, &m) * sgn_unchecked(&b, &m)
            }
        }
    }

    /// eta on index-form oriented simplices.
    pub(crate) fn eta_oriented(&self, q: usize, a: Oriented, b: Oriented, mode: Mode) -> i8 {
        let base = self.eta_base(q, a.index, b.index, mode);
        if a.odd ^ b.odd {
            -base
        } else {
            base
        }
    }

    /// Full oriented edge set E(X_q) or E(Y_q): all four orientation combinations per
    /// unoriented neighbor pair.
    pub fn neighbor_graph(&self, q: usize, mode: Mode) -> Result<NeighborGraph> {
        self.check_mode_range(q, mode)?;
        let mut edges = Vec::new();
        for i in 0..self.count(q) {
            let nb = self.neighbors(q, i, mode);
            for odd_a in [false, true] {
                for &j in &nb {
                    for odd_b in [false, true] {
                        edges.push((Oriented::new(i, odd_a), Oriented::new(j, odd_b)));
                    }
                }
            }
        }
        edges.sort_by_key(|(a, b)| (a.full_index(), b.full_index()));
        Ok(NeighborGraph { mode, q, edges })
    }

    /// Structural scan: purity, strong connectivity, bounded degree, counts.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut pure = true;
        for q in 0..n {
            if self.cofaces[q].iter().any(|c| c.is_empty()) {
                pure = false;
            }
        }
        let strongly_connected = self.top_dual_connected();
        // number of simplices containing F, counted upward through all dimensions
        let mut max_cofacet_count = 0;
        for q in 0..=n {
            for i in 0..self.count(q) {
                let mut frontier = vec![i];
                let mut total = 0;
                for d in q..n {
                    let mut next: Vec<usize> =
                        frontier.iter().flat_map(|&s| self.cofaces[d][s].iter().copied()).collect();
                    next.sort_unstable();
                    next.dedup();
                    total += next.len();
                    frontier = next;
                }
                max_cofacet_count = max_cofacet_count.max(total);
            }
        }
        let facet_counts = (0..=n)
            .map(|q| self.cofaces[q].iter().filter(|c| c.is_empty()).count())
            .collect();
        ValidationReport {
            dim: n,
            pure,
            strongly_connected,
            max_cofacet_count,
            simplex_counts: (0..=n).map(|q| self.count(q)).collect(),
            facet_counts,
        }
    }

    fn top_dual_connected(&self) -> bool {
        let n = self.dim();
        let m = self.count(n);
        if m <= 1 {
            return true;
        }
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in self.neighbors(n, i, Mode::Down) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Errors unless the complex is pure and strongly connected (or overridden).
    pub fn require_assumptions(&self) -> Result<()> {
        if self.allow_degenerate {
            return Ok(());
        }
        let r = self.validate();
        if !r.pure {
            return Err(Error::Assumption("complex is not pure".into()));
        }
        if !r.strongly_connected {
            return Err(Error::Assumption("complex is not strongly connected".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[usize]) -> OrientedSimplex {
        OrientedSimplex::from_ordered(v).unwrap()
    }

    #[test]
    fn closure_and_counts() {
        let c = Generator::Sphere.build().unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (4, 6, 4));
        for q in 1..=c.dim() {
            for s in c.simplices(q) {
                for f in s.facets() {
                    assert!(c.index_of(&f).is_some());
                }
            }
        }
    }

    #[test]
    fn degrees_on_simplex() {
        for n in 2..=6 {
            let c = Generator::Simplex(n).build().unwrap();
            for q in 0..n {
                for i in 0..c.count(q) {
                    if q + 1 < n {
                        assert_eq!(c.deg_up(q, i), n - q - 1);
                    }
                    if q >= 1 {
                        assert_eq!(c.deg_down(q, i), (q + 1) * (n - q - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_edge_lies_in_two_triangles() {
        let c = Generator::Sphere.build().unwrap();
        assert_eq!(c.degree(&os(&[0, 1]), Mode::Up).unwrap(), 2);
        assert!(matches!(
            c.degree(&os(&[0, 1, 2]), Mode::Up),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn fig5_down_degree_and_faces() {
        let c = Generator::Fig5.build().unwrap();
        assert_eq!(c.degree(&os(&[2, 1, 3]), Mode::Down).unwrap(), 4);
        let f = c.common_face(&os(&[0, 1, 2]), &os(&[2, 1, 4])).unwrap();
        assert_eq!(f.simplex.vertices(), &[1, 2]);
        assert!(matches!(
            c.common_face(&os(&[0, 1, 2]), &os(&[1, 3, 4])),
            Err(Error::NotNeighbors(_))
        ));
        assert!(c.common_cofacet(&os(&[0, 1, 2]), &os(&[2, 1, 4])).is_err());
    }

    #[test]
    fn common_cofacet_cases() {
        let sphere = Generator::Sphere.build().unwrap();
        let s = sphere.common_cofacet(&os(&[0, 1]), &os(&[0, 2])).unwrap();
        assert_eq!(s.simplex.vertices(), &[0, 1, 2]);
        let k4 = Generator::Simplex(4).build().unwrap();
        assert!(k4.common_cofacet(&os(&[0, 1]), &os(&[2, 3])).is_err());
    }

    #[test]
    fn eta_fig5_value_and_symmetries() {
        let c = Generator::Fig5.build().unwrap();
        let a = os(&[0, 1, 2]);
        let b = os(&[2, 1, 4]);
        assert_eq!(c.eta(&a, &b, Mode::Down).unwrap(), -1);
        assert_eq!(c.eta(&b, &a, Mode::Down).unwrap(), -1);
        assert_eq!(c.eta(&a, &b.bar(), Mode::Down).unwrap(), 1);
        assert_eq!(c.eta(&a.bar(), &b, Mode::Down).unwrap(), 1);
    }

    #[test]
    fn graph_degree_counts() {
        // vertex degree in X_q is 2(q+1)deg_X, in Y_q is 2 deg_Y
        for g in [Generator::Sphere, Generator::Fig5, Generator::Simplex(5)] {
            let c = g.build().unwrap();
            for q in 0..c.dim() {
                let x = c.neighbor_graph(q, Mode::Up).unwrap();
                for i in 0..c.count(q) {
                    let from = x.edges.iter().filter(|(a, _)| a.index == i && !a.odd).count();
                    assert_eq!(from, 2 * (q + 1) * c.deg_up(q, i));
                }
            }
            for q in 1..=c.dim() {
                let y = c.neighbor_graph(q, Mode::Down).unwrap();
                for i in 0..c.count(q) {
                    let from = y.edges.iter().filter(|(a, _)| a.index == i && a.odd).count();
                    assert_eq!(from, 2 * c.deg_down(q, i));
                }
                // up edges are down edges
                if q < c.dim() {
                    let x = c.neighbor_graph(q, Mode::Up).unwrap();
                    let ys: std::collections::HashSet<_> = y.edges.iter().collect();
                    assert!(x.edges.iter().all(|e| ys.contains(e)));
                }
            }
        }
    }

    #[test]
    fn validation_flags() {
        let r = Generator::Sphere.build().unwrap().validate();
        assert!(r.pure && r.strongly_connected);
        assert_eq!(r.dim, 2);
        let r = Generator::Fig5.build().unwrap().validate();
        assert!(r.pure && r.strongly_connected);
        let two = parse_complex("0 1 2\n3 4 5\n").unwrap();
        let r = two.validate();
        assert!(r.pure);
        assert!(!r.strongly_connected);
        assert!(two.require_assumptions().is_err());
        assert!(two.clone().with_override(true).require_assumptions().is_ok());
        let impure = parse_complex("0 1 2\n2 3\n").unwrap();
        assert!(!impure.validate().pure);
    }
}
