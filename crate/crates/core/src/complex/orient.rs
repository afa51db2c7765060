use std::collections::VecDeque;

use serde::Serialize;

use super::{Complex, Mode, OrientedSimplex};
use crate::error::{Error, Result};

/// Sign demanded of every down-neighbor pair of top simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationTarget {
    /// eta = -1 across every shared face.
    Coherent,
    /// eta = +1 across every shared face.
    Anticoherent,
}

impl OrientationTarget {
    fn sign(self) -> i8 {
        match self {
            OrientationTarget::Coherent => -1,
            OrientationTarget::Anticoherent => 1,
        }
    }
}

/// One chosen orientation per q-simplex, as a parity bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub q: usize,
    pub odd: Vec<bool>,
}

impl Orientation {
    pub fn chosen(&self, c: &Complex) -> Vec<OrientedSimplex> {
        self.odd
            .iter()
            .enumerate()
            .map(|(i, &o)| OrientedSimplex::new(c.simplex(self.q, i).clone(), o))
            .collect()
    }
}

/// Parity propagation over the top dual graph. `None` when some cycle forces a contradiction.
pub fn orientation_search(c: &Complex, target: OrientationTarget) -> Result<Option<Orientation>> {
    c.require_assumptions()?;
    let n = c.dim();
    let m = c.count(n);
    let want = target.sign();
    let mut odd: Vec<Option<bool>> = vec![None; m];
    for root in 0..m {
        if odd[root].is_some() {
            continue;
        }
        odd[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let xi = odd[i].unwrap();
            for j in c.neighbors(n, i, Mode::Down) {
                let flip = c.eta_base(n, i, j, Mode::Down) != want;
                let xj = xi ^ flip;
                match odd[j] {
                    None => {
                        odd[j] = Some(xj);
                        queue.push_back(j);
                    }
                    Some(x) if x != xj => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Some(Orientation { q: n, odd: odd.into_iter().map(|x| x.unwrap()).collect() }))
}

/// Two-coloring of the q-dimensional up or down graph.
///
/// With `reduced` the coloring has one entry per unoriented simplex; otherwise one per
/// full-basis index (`2*i + parity`), and both orientations share a class.
pub fn is_bipartite(c: &Complex, q: usize, mode: Mode, reduced: bool) -> Result<Option<Vec<bool>>> {
    c.check_mode_range(q, mode)?;
    let m = c.count(q);
    if (0..m).all(|i| c.neighbors(q, i, mode).is_empty()) {
        return Err(Error::EmptyEdgeSet { q });
    }
    let mut color: Vec<Option<bool>> = vec![None; m];
    for root in 0..m {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let ci = color[i].unwrap();
            for j in c.neighbors(q, i, mode) {
                match color[j] {
                    None => {
                        color[j] = Some(!ci);
                        queue.push_back(j);
                    }
                    Some(x) if x == ci => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    let col: Vec<bool> = color.into_iter().map(|x| x.unwrap()).collect();
    if reduced {
        Ok(Some(col))
    } else {
        Ok(Some(col.iter().flat_map(|&x| [x, x]).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{generate::cylinder3_coherent, Generator};

    fn check(c: &Complex, o: &Orientation, target: OrientationTarget) {
        let chosen = o.chosen(c);
        for i in 0..chosen.len() {
            for j in c.neighbors(o.q, i, Mode::Down) {
                assert_eq!(c.eta(&chosen[i], &chosen[j], Mode::Down).unwrap(), target.sign());
            }
        }
    }

    #[test]
    fn sphere_coherent() {
        let c = Generator::Sphere.build().unwrap();
        let o = orientation_search(&c, OrientationTarget::Coherent).unwrap().unwrap();
        check(&c, &o, OrientationTarget::Coherent);
        assert!(orientation_search(&c, OrientationTarget::Anticoherent).unwrap().is_none());
    }

    #[test]
    fn moebius_not_coherent() {
        for m in 3..=8 {
            let c = Generator::MoebiusStrip(m).build().unwrap();
            assert!(orientation_search(&c, OrientationTarget::Coherent).unwrap().is_none());
            let c = Generator::CylinderStrip(m).build().unwrap();
            let o = orientation_search(&c, OrientationTarget::Coherent).unwrap().unwrap();
            check(&c, &o, OrientationTarget::Coherent);
            let o = orientation_search(&c, OrientationTarget::Anticoherent).unwrap().unwrap();
            check(&c, &o, OrientationTarget::Anticoherent);
        }
    }

    #[test]
    fn cylinder3_listed_orientation_is_coherent() {
        let c = Generator::Cylinder3(4).build().unwrap();
        let tris: Vec<OrientedSimplex> = cylinder3_coherent(4)
            .iter()
            .map(|t| OrientedSimplex::from_ordered(t).unwrap())
            .collect();
        for a in &tris {
            for b in &tris {
                if a.simplex.intersection(&b.simplex).len() == 2 {
                    assert_eq!(c.eta(a, b, Mode::Down).unwrap(), -1);
                }
            }
        }
        assert!(orientation_search(&c, OrientationTarget::Coherent).unwrap().is_some());
    }

    #[test]
    fn disconnected_rejected() {
        let c = crate::complex::parse_complex("0 1 2\n3 4 5").unwrap();
        assert!(matches!(
            orientation_search(&c, OrientationTarget::Coherent),
            Err(Error::Assumption(_))
        ));
    }

    #[test]
    fn bipartite_examples() {
        let strip = Generator::CylinderStrip(5).build().unwrap();
        assert!(is_bipartite(&strip, 2, Mode::Down, true).unwrap().is_some());
        let full = is_bipartite(&strip, 2, Mode::Down, false).unwrap().unwrap();
        assert!(full.chunks(2).all(|p| p[0] == p[1]));
        let mob = Generator::MoebiusStrip(5).build().unwrap();
        assert!(is_bipartite(&mob, 2, Mode::Down, true).unwrap().is_some());
        let sphere = Generator::Sphere.build().unwrap();
        assert!(is_bipartite(&sphere, 1, Mode::Up, true).unwrap().is_none());
        let fig5 = Generator::Fig5.build().unwrap();
        assert!(is_bipartite(&fig5, 2, Mode::Down, true).unwrap().is_none());
    }
}
