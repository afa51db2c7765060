use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex stored as a strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from any vertex list, sorting it. Fails on repeats or an empty list.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DimensionMismatch("a simplex needs at least one vertex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DimensionMismatch(format!(
                "repeated vertex in {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, other: &Simplex) -> bool {
        // both sorted
        let mut it = self.0.iter();
        other.0.iter().all(|v| it.any(|w| w == v))
    }

    /// Codimension-one faces, in the order "drop vertex j" for j = 0..=dim.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).filter(|_| self.0.len() > 1).map(move |j| {
            let mut v = self.0.clone();
            v.remove(j);
            Simplex(v)
        })
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn intersection(&self, other: &Simplex) -> Vec<usize> {
        self.0.iter().copied().filter(|v| other.0.binary_search(v).is_ok()).collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Sign of the permutation that sorts `seq`; `true` when odd. Assumes distinct entries.
pub fn permutation_parity(seq: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// An oriented simplex: the sorted vertex set plus a parity bit relative to sorted order.
///
/// Vertices (0-simplices) carry a formal parity as well, so that `bar` is a free
/// involution in every dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedSimplex {
    pub simplex: Simplex,
    pub odd: bool,
}

impl OrientedSimplex {
    pub fn new(simplex: Simplex, odd: bool) -> Self {
        OrientedSimplex { simplex, odd }
    }

    /// Orientation class of an ordered vertex sequence.
    pub fn from_ordered(seq: &[usize]) -> Result<Self> {
        let simplex = Simplex::new(seq.to_vec())?;
        Ok(OrientedSimplex { simplex, odd: permutation_parity(seq) })
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    /// The opposite orientation.
    pub fn bar(&self) -> Self {
        OrientedSimplex { simplex: self.simplex.clone(), odd: !self.odd }
    }

    /// An ordered representative, when one exists (a lone vertex has no odd ordering).
    pub fn representative(&self) -> Option<Vec<usize>> {
        let mut v = self.simplex.vertices().to_vec();
        if self.odd {
            if v.len() < 2 {
                return None;
            }
            v.swap(0, 1);
        }
        Some(v)
    }
}

impl fmt::Display for OrientedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.representative() {
            Some(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "<{}>", s.join(" "))
            }
            None => write!(f, "-<{}>", self.simplex.vertices()[0]),
        }
    }
}

/// Incidence sign of a codimension-one pair: `(-1)^j` when `tau` is `sigma` with its
/// j-th vertex removed (orientations included), 0 when `tau` is not a face of `sigma`.
pub fn sgn(sigma: &OrientedSimplex, tau: &OrientedSimplex) -> Result<i8> {
    if sigma.dim() != tau.dim() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "sgn needs dim sigma = dim tau + 1, got {} and {}",
            sigma.dim(),
            tau.dim()
        )));
    }
    Ok(sgn_unchecked(sigma, tau))
}

pub(crate) fn sgn_unchecked(sigma: &OrientedSimplex, tau: &OrientedSimplex) -> i8 {
    let sv = sigma.simplex.vertices();
    let tv = tau.simplex.vertices();
    // position of the vertex of sigma missing from tau
    let mut missing = None;
    let mut k = 0;
    for (j, v) in sv.iter().enumerate() {
        if k < tv.len() && tv[k] == *v {
            k += 1;
        } else if missing.is_none() {
            missing = Some(j);
        } else {
            return 0;
        }
    }
    if k != tv.len() {
        return 0;
    }
    let j = match missing {
        Some(j) => j,
        None => return 0,
    };
    let flips = j + sigma.odd as usize + tau.odd as usize;
    if flips.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
