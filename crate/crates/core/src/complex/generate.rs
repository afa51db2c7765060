use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Complex;
use crate::error::{Error, Result};

/// Named families of test complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// All subsets of n vertices (an (n-1)-simplex).
    Simplex(usize),
    /// The k-skeleton of `Simplex(n)`.
    Skeleton(usize, usize),
    /// Boundary of the tetrahedron, `Skeleton(4, 2)`.
    Sphere,
    /// Five triangles 012, 214, 134, 013, 213.
    Fig5,
    /// Annulus of 2m triangles on the grid Z_m x {0,1}.
    CylinderStrip(usize),
    /// The same strip closed with a flip.
    MoebiusStrip(usize),
    /// Periodic truncation Z_3 x Z_N of the triangulated infinite cylinder, 6N triangles.
    Cylinder3(usize),
    /// Random pure, strongly connected 2-complex grown edge by edge.
    Random(u64),
}

impl Generator {
    /// Parses a family name plus optional parameters, as used by the CLI.
    pub fn from_name(
        name: &str,
        n: Option<usize>,
        k: Option<usize>,
        m: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::InvalidParams(format!("{name} needs --{what}")))
        };
        Ok(match name {
            "simplex" => Generator::Simplex(need(n, "n")?),
            "skeleton" => Generator::Skeleton(need(n, "n")?, need(k, "k")?),
            "sphere" => Generator::Sphere,
            "fig5" => Generator::Fig5,
            "cylinder-strip" => Generator::CylinderStrip(need(m, "m")?),
            "moebius-strip" => Generator::MoebiusStrip(need(m, "m")?),
            "cylinder3" => Generator::Cylinder3(need(n.or(m), "n")?),
            "random" => Generator::Random(seed.unwrap_or(0)),
            _ => return Err(Error::InvalidParams(format!("unknown generator {name:?}"))),
        })
    }

    pub fn build(self) -> Result<Complex> {
        let (facets, labels) = match self {
            Generator::Simplex(n) => {
                if n < 2 {
                    return Err(Error::InvalidParams(format!("simplex needs n >= 2, got {n}")));
                }
                (vec![(0..n).collect()], numeric_labels(n))
            }
            Generator::Skeleton(n, k) => {
                if n < 2 || k + 1 > n {
                    return Err(Error::InvalidParams(format!(
                        "skeleton needs n >= 2 and k <= n-1, got n={n} k={k}"
                    )));
                }
                (subsets(n, k + 1), numeric_labels(n))
            }
            Generator::Sphere => return Generator::Skeleton(4, 2).build(),
            Generator::Fig5 => (
                vec![vec![0, 1, 2], vec![2, 1, 4], vec![1, 3, 4], vec![0, 1, 3], vec![2, 1, 3]],
                numeric_labels(5),
            ),
            Generator::CylinderStrip(m) | Generator::MoebiusStrip(m) => {
                if m < 3 {
                    return Err(Error::InvalidParams(format!("strip needs m >= 3, got {m}")));
                }
                let twist = matches!(self, Generator::MoebiusStrip(_));
                let mut f = Vec::with_capacity(2 * m);
                for i in 0..m {
                    let (lo, hi) = (i, m + i);
                    let (nlo, nhi) = if i + 1 == m {
                        if twist {
                            (m, 0)
                        } else {
                            (0, m)
                        }
                    } else {
                        (i + 1, m + i + 1)
                    };
                    f.push(vec![lo, nlo, nhi]);
                    f.push(vec![lo, hi, nhi]);
                }
                let labels = (0..2 * m).map(|v| format!("{}:{}", v % m, v / m)).collect();
                (f, labels)
            }
            Generator::Cylinder3(n) => {
                if n < 3 {
                    return Err(Error::InvalidParams(format!("cylinder3 needs N >= 3, got {n}")));
                }
                let id = |l: usize, k: usize| 3 * (k % n) + l % 3;
                let mut f = Vec::with_capacity(6 * n);
                for k in 0..n {
                    for l in 0..3 {
                        f.push(vec![id(l, k), id(l, k + 1), id(l + 1, k + 1)]);
                        f.push(vec![id(l, k), id(l + 1, k + 1), id(l + 1, k)]);
                    }
                }
                let labels = (0..3 * n).map(|v| format!("{}:{}", v % 3, v / 3)).collect();
                (f, labels)
            }
            Generator::Random(seed) => random_facets(seed),
        };
        Complex::from_facets(&facets, labels)
    }
}

/// The ordering of each cylinder3 triangle that together form a coherent orientation.
pub fn cylinder3_coherent(n: usize) -> Vec<Vec<usize>> {
    let id = |l: usize, k: usize| 3 * (k % n) + l % 3;
    let mut out = Vec::with_capacity(6 * n);
    for k in 0..n {
        for l in 0..3 {
            out.push(vec![id(l, k), id(l, k + 1), id(l + 1, k + 1)]);
            out.push(vec![id(l, k), id(l + 1, k + 1), id(l + 1, k)]);
        }
    }
    out
}

fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|v| v.to_string()).collect()
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

fn random_facets(seed: u64) -> (Vec<Vec<usize>>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv: usize = rng.random_range(5..=8);
    let target: usize = rng.random_range(3..=10);
    let mut tris: BTreeSet<[usize; 3]> = BTreeSet::new();
    tris.insert([0, 1, 2]);
    let mut attempts = 0;
    while tris.len() < target && attempts < 1000 {
        attempts += 1;
        let list: Vec<_> = tris.iter().copied().collect();
        let t = list[rng.random_range(0..list.len())];
        let drop = rng.random_range(0..3);
        let edge: Vec<usize> = (0..3).filter(|&j| j != drop).map(|j| t[j]).collect();
        let v = rng.random_range(0..nv);
        if edge.contains(&v) {
            continue;
        }
        let mut new = [edge[0], edge[1], v];
        new.sort_unstable();
        tris.insert(new);
    }
    // compact vertex ids
    let used: BTreeSet<usize> = tris.iter().flatten().copied().collect();
    let map: Vec<usize> = {
        let mut m = vec![usize::MAX; nv];
        for (i, &v) in used.iter().enumerate() {
            m[v] = i;
        }
        m
    };
    let facets = tris.iter().map(|t| t.iter().map(|&v| map[v]).collect()).collect();
    (facets, numeric_labels(used.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Mode;

    #[test]
    fn simplex_and_sphere() {
        let s4 = Generator::Simplex(4).build().unwrap();
        assert_eq!((s4.count(2), s4.count(1), s4.count(3)), (4, 6, 1));
        let sphere = Generator::Sphere.build().unwrap();
        assert_eq!(sphere.dim(), 2);
        assert_eq!(sphere.simplices(2), s4.simplices(2));
    }

    #[test]
    fn strips_are_cycles() {
        for m in 3..=8 {
            for g in [Generator::CylinderStrip(m), Generator::MoebiusStrip(m)] {
                let c = g.build().unwrap();
                assert_eq!(c.count(2), 2 * m);
                for i in 0..c.count(2) {
                    assert_eq!(c.neighbors(2, i, Mode::Down).len(), 2, "{g:?}");
                }
                assert!(c.validate().strongly_connected);
            }
        }
    }

    #[test]
    fn cylinder3_edges_in_two_triangles() {
        for n in 3..=6 {
            let c = Generator::Cylinder3(n).build().unwrap();
            assert_eq!(c.count(2), 6 * n);
            assert_eq!(c.count(1), 9 * n);
            for i in 0..c.count(1) {
                assert_eq!(c.deg_up(1, i), 2);
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(Generator::from_name("skeleton", Some(5), Some(2), None, None).unwrap(), Generator::Skeleton(5, 2));
        assert_eq!(Generator::from_name("random", None, None, None, Some(4)).unwrap(), Generator::Random(4));
        assert!(Generator::from_name("simplex", None, None, None, None).is_err());
        assert!(Generator::from_name("torus", None, None, None, None).is_err());
    }

    #[test]
    fn invalid_params() {
        for g in [
            Generator::Simplex(1),
            Generator::Skeleton(3, 3),
            Generator::CylinderStrip(2),
            Generator::MoebiusStrip(2),
            Generator::Cylinder3(2),
        ] {
            assert!(matches!(g.build(), Err(Error::InvalidParams(_))), "{g:?}");
        }
    }

    #[test]
    fn random_complexes_satisfy_assumptions() {
        for seed in 0..50 {
            let c = Generator::Random(seed).build().unwrap();
            assert_eq!(c.dim(), 2);
            let r = c.validate();
            assert!(r.pure && r.strongly_connected, "seed {seed}");
        }
    }
}
