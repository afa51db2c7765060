//! Walk evolution, finding probabilities and the stationary states built from C_+.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Complex, Mode, OrientedSimplex, Simplex};
use crate::error::{Error, Result};
use crate::linalg::{csv_escape, max_abs_vec, CVec, LinearMap, Space, C64};
use crate::operators::{build_discriminant, build_edge_ops, build_g_walk, f_sigma, Basis, OrderedBasis};
use crate::spectra::eigvals_hermitian;

pub const IDENTITY_TOL: f64 = 1e-10;

/// Which unitary drives the walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Up,
    Down,
    /// The S-quantum walk G_q on ordered simplices.
    Ordered,
}

/// Unit vector over the space of a walk, at a time step.
#[derive(Clone, Debug)]
pub struct WalkState {
    pub space: Space,
    pub amplitudes: CVec,
    pub time: usize,
}

impl WalkState {
    pub fn new(space: Space, amplitudes: CVec) -> Result<Self> {
        let n = amplitudes.norm();
        if (n - 1.0).abs() > IDENTITY_TOL {
            return Err(Error::Precondition(format!("initial state has norm {n}")));
        }
        Ok(WalkState { space, amplitudes, time: 0 })
    }
}

/// `U^n psi` by repeated products.
pub fn evolve(u: &LinearMap, psi: &WalkState, n: usize) -> Result<WalkState> {
    if u.cols.space != psi.space || u.mat.ncols() != psi.amplitudes.len() {
        return Err(Error::DimensionMismatch("walk operator and state live on different spaces".into()));
    }
    let mut x = psi.amplitudes.clone();
    for _ in 0..n {
        x = &u.mat * x;
    }
    Ok(WalkState { space: psi.space, amplitudes: x, time: psi.time + n })
}

/// A walk operator together with the map from basis elements to the simplex they sit over.
#[derive(Clone, Debug)]
pub struct Walk {
    pub kind: WalkKind,
    pub q: usize,
    pub u: LinearMap,
    /// Underlying q-simplex of every basis element (edge origin or ordered simplex).
    pub group: Vec<usize>,
    pub simplex_labels: Vec<String>,
}

pub fn build_walk(c: &Complex, q: usize, kind: WalkKind) -> Result<Walk> {
    let (u, group) = match kind {
        WalkKind::Up | WalkKind::Down => {
            let mode = if kind == WalkKind::Up { Mode::Up } else { Mode::Down };
            let ops = build_edge_ops(c, q, mode)?;
            let group = ops.graph.edges.iter().map(|(a, _)| a.index).collect();
            (ops.u, group)
        }
        WalkKind::Ordered => {
            let w = build_g_walk(c, q)?;
            (w.g, w.upper.simplex)
        }
    };
    let simplex_labels = c.simplices(q).iter().map(|s| c.simplex_label(s)).collect();
    Ok(Walk { kind, q, u, group, simplex_labels })
}

impl Walk {
    /// Finding probability at every q-simplex.
    pub fn probabilities(&self, psi: &WalkState) -> Vec<f64> {
        let mut p = vec![0.0; self.simplex_labels.len()];
        for (k, z) in psi.amplitudes.iter().enumerate() {
            p[self.group[k]] += z.norm_sqr();
        }
        p
    }

    pub fn finding_probability(&self, c: &Complex, psi: &WalkState, f: &Simplex) -> Result<f64> {
        if f.dim() != self.q {
            return Err(Error::DimensionMismatch(format!("{f} is not a {}-simplex", self.q)));
        }
        let i = c.index_of(f).ok_or_else(|| Error::UnknownSimplex(f.vertices().to_vec()))?;
        Ok(self.probabilities(psi)[i])
    }

    /// Probabilities for n = 0..=steps.
    pub fn table(&self, psi0: &WalkState, steps: usize) -> Result<ProbabilityTable> {
        let mut rows = Vec::with_capacity(steps + 1);
        let mut psi = psi0.clone();
        for n in 0..=steps {
            if n > 0 {
                psi = evolve(&self.u, &psi, 1)?;
            }
            rows.push(self.probabilities(&psi));
        }
        Ok(ProbabilityTable { labels: self.simplex_labels.clone(), rows })
    }
}

/// Rows are time steps, columns simplices.
#[derive(Clone, Debug, Serialize)]
pub struct ProbabilityTable {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ProbabilityTable {
    pub fn max_row_sum_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest deviation of any entry from its value at n = 0.
    pub fn max_drift(&self) -> f64 {
        let first = &self.rows[0];
        self.rows
            .iter()
            .flat_map(|r| r.iter().zip(first).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for l in &self.labels {
            out.push(',');
            out.push_str(&csv_escape(l));
        }
        out.push('\n');
        for (n, r) in self.rows.iter().enumerate() {
            out.push_str(&n.to_string());
            for x in r {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Initial-function selectors for the stationary constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FChoice {
    /// `f = 1/sqrt(2|S_q|)` on every oriented simplex.
    Constant,
    /// Seeded random element of C_+ (or of C^q for the eigenfunction case).
    Random(u64),
    /// `f_sigma` for the first simplex one dimension up, when it is an eigenfunction.
    FSigma,
    /// Any unit eigenfunction found by diagonalization.
    Auto,
}

/// Symmetric function on K_q, full basis, unit norm.
pub fn symmetric_f(c: &Complex, q: usize, choice: FChoice) -> Result<CVec> {
    let m = c.count(q);
    let vals: Vec<f64> = match choice {
        FChoice::Constant => vec![1.0; m],
        FChoice::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()
        }
        _ => return Err(Error::InvalidParams("C_+ states take --f constant or random".into())),
    };
    let mut f = CVec::zeros(2 * m);
    for (i, v) in vals.iter().enumerate() {
        f[2 * i] = C64::new(*v, 0.0);
        f[2 * i + 1] = C64::new(*v, 0.0);
    }
    let n = f.norm();
    if n == 0.0 {
        return Err(Error::Precondition("zero initial function".into()));
    }
    Ok(f.unscale(n))
}

fn require_symmetric_unit(f: &CVec) -> Result<()> {
    if (f.norm() - 1.0).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!("f has norm {}", f.norm())));
    }
    let asym = (0..f.len() / 2).map(|i| (f[2 * i] - f[2 * i + 1]).norm()).fold(0.0, f64::max);
    if asym > IDENTITY_TOL {
        return Err(Error::Precondition(format!("f is not in C_+ (asymmetry {asym:.3e})")));
    }
    Ok(())
}

/// `psi = (I - iS) d^* f / sqrt 2` on the up or down edge space; `U psi = i psi` for f in C_+.
pub fn stationary_edge_state(c: &Complex, q: usize, mode: Mode, f: &CVec) -> Result<(Walk, WalkState)> {
    require_symmetric_unit(f)?;
    let ops = build_edge_ops(c, q, mode)?;
    if f.len() != ops.d.mat.nrows() {
        return Err(Error::DimensionMismatch("f does not match l2(K_q)".into()));
    }
    let g = ops.d.mat.adjoint() * f;
    let psi = (&g - (&ops.shift.mat * &g) * C64::new(0.0, 1.0)).unscale(2f64.sqrt());
    let kind = if mode == Mode::Up { WalkKind::Up } else { WalkKind::Down };
    let walk = build_walk(c, q, kind)?;
    let res = max_abs_vec(&(&walk.u.mat * &psi - &psi * C64::new(0.0, 1.0)));
    if res > IDENTITY_TOL {
        return Err(Error::Numeric(format!("U psi != i psi (residual {res:.3e})")));
    }
    let state = WalkState::new(walk.u.cols.space, psi)?;
    Ok((walk, state))
}

/// Lift of a function on K_q to ordered q-simplices, `s -> f(<s>)`.
fn lift_to_ordered(ob: &OrderedBasis, f: &CVec) -> CVec {
    CVec::from_iterator(ob.len(), (0..ob.len()).map(|k| f[2 * ob.simplex[k] + ob.odd[k] as usize]))
}

/// `h = sqrt(2/(q+1)!) alpha_q f` on ordered (q+1)-simplices; `G_{q+1} h = -h` for f in C_+, q >= 1.
pub fn stationary_ordered_state(c: &Complex, q: usize, f: &CVec) -> Result<(Walk, WalkState)> {
    require_symmetric_unit(f)?;
    if q == 0 {
        return Err(Error::Precondition("the ordered construction needs q >= 1".into()));
    }
    let gw = build_g_walk(c, q + 1)?;
    let g = lift_to_ordered(&gw.lower, f);
    let fact: f64 = (1..=q + 1).map(|x| x as f64).product();
    let h = (&gw.alpha.mat * g).scale((2.0 / fact).sqrt());
    let walk = build_walk(c, q + 1, WalkKind::Ordered)?;
    let res = max_abs_vec(&(&walk.u.mat * &h + &h));
    if res > IDENTITY_TOL {
        return Err(Error::Numeric(format!("G h != -h (residual {res:.3e})")));
    }
    let state = WalkState::new(walk.u.cols.space, h)?;
    Ok((walk, state))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationarityReport {
    pub kind: String,
    pub q: usize,
    pub steps: usize,
    pub eigen_residual: f64,
    pub max_drift: f64,
    pub max_row_sum_error: f64,
    pub table: ProbabilityTable,
    pub identities: Vec<IdentityCheck>,
    pub pass: bool,
}

impl StationarityReport {
    /// Re-judges the report against a different residual tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        for i in &mut self.identities {
            i.pass = i.max_residual < tol;
        }
        self.pass = self.max_drift < tol
            && self.max_row_sum_error < tol
            && self.eigen_residual < tol
            && self.identities.iter().all(|i| i.pass);
        self
    }
}

fn finish(
    kind: &str,
    q: usize,
    steps: usize,
    eigen_residual: f64,
    table: ProbabilityTable,
    identities: Vec<IdentityCheck>,
) -> StationarityReport {
    let max_drift = table.max_drift();
    let max_row_sum_error = table.max_row_sum_error();
    let pass = max_drift < IDENTITY_TOL
        && max_row_sum_error < IDENTITY_TOL
        && eigen_residual < IDENTITY_TOL
        && identities.iter().all(|i| i.pass);
    StationarityReport {
        kind: kind.to_string(),
        q,
        steps,
        eigen_residual,
        max_drift,
        max_row_sum_error,
        table,
        identities,
        pass,
    }
}

fn identity(name: &str, residual: f64) -> IdentityCheck {
    IdentityCheck { name: name.to_string(), max_residual: residual, pass: residual < IDENTITY_TOL }
}

/// Up walk from f in C_+: stationarity plus, when q >= 1 and q < dim, the identity relating
/// P^up to Q of the ordered walk one dimension up.
pub fn up_report(c: &Complex, q: usize, f: &CVec, steps: usize) -> Result<StationarityReport> {
    let (walk, psi) = stationary_edge_state(c, q, Mode::Up, f)?;
    let table = walk.table(&psi, steps)?;
    let mut ids = Vec::new();
    // closed form in terms of f and degrees
    let m = c.count(q);
    let mut resid: f64 = 0.0;
    let want: Vec<f64> = (0..m)
        .map(|i| {
            let mut p = 0.5 * (f[2 * i].norm_sqr() + f[2 * i + 1].norm_sqr());
            for j in c.neighbors(q, i, Mode::Up) {
                let w = 2.0 * (q as f64 + 1.0) * c.deg_up(q, j) as f64;
                p += (f[2 * j].norm_sqr() + f[2 * j + 1].norm_sqr()) / w;
            }
            p
        })
        .collect();
    for row in &table.rows {
        for (a, b) in row.iter().zip(&want) {
            resid = resid.max((a - b).abs());
        }
    }
    ids.push(identity("p-up-closed-form", resid));
    if q >= 1 && q < c.dim() {
        let (hw, h) = stationary_ordered_state(c, q, f)?;
        let qt = hw.table(&h, steps)?;
        let mut r: f64 = 0.0;
        for (prow, qrow) in table.rows.iter().zip(&qt.rows) {
            for i in 0..m {
                let sum_q: f64 = c.cofaces(q, i).iter().map(|&j| qrow[j]).sum();
                let rhs = sum_q / (2.0 * (q as f64 + 1.0)) + q as f64 / (q as f64 + 1.0) * f[2 * i].norm_sqr();
                r = r.max((prow[i] - rhs).abs());
            }
        }
        ids.push(identity("p-up-vs-q-ordered", r));
        ids.push(identity("q-ordered-stationary", qt.max_drift()));
    }
    let res = max_abs_vec(&(&walk.u.mat * &psi.amplitudes - &psi.amplitudes * C64::new(0.0, 1.0)));
    Ok(finish("up", q, steps, res, table, ids))
}

/// Ordered walk G_{q+1} from `h`, with the closed form `Q = sum_{t in dF} 2|f(t)|^2 / deg t`.
pub fn ordered_report(c: &Complex, q: usize, f: &CVec, steps: usize) -> Result<StationarityReport> {
    let (walk, h) = stationary_ordered_state(c, q, f)?;
    let table = walk.table(&h, steps)?;
    let mut r: f64 = 0.0;
    for row in &table.rows {
        for (j, x) in row.iter().enumerate() {
            let want: f64 = c
                .faces(q + 1, j)
                .iter()
                .map(|&t| 2.0 * f[2 * t].norm_sqr() / c.deg_up(q, t) as f64)
                .sum();
            r = r.max((x - want).abs());
        }
    }
    let res = max_abs_vec(&(&walk.u.mat * &h.amplitudes + &h.amplitudes));
    Ok(finish("ordered", q + 1, steps, res, table, vec![identity("q-closed-form", r)]))
}

/// Down walk from f in C_+ with the closed form for P^down.
pub fn down_report(c: &Complex, q: usize, f: &CVec, steps: usize) -> Result<StationarityReport> {
    let (walk, eta) = stationary_edge_state(c, q, Mode::Down, f)?;
    let table = walk.table(&eta, steps)?;
    let m = c.count(q);
    let want: Vec<f64> = (0..m)
        .map(|i| {
            let mut p = 0.5 * (f[2 * i].norm_sqr() + f[2 * i + 1].norm_sqr());
            for j in c.neighbors(q, i, Mode::Down) {
                let w = 2.0 * c.deg_down(q, j) as f64;
                p += (f[2 * j].norm_sqr() + f[2 * j + 1].norm_sqr()) / w;
            }
            p
        })
        .collect();
    let mut r: f64 = 0.0;
    for row in &table.rows {
        for (a, b) in row.iter().zip(&want) {
            r = r.max((a - b).abs());
        }
    }
    let res = max_abs_vec(&(&walk.u.mat * &eta.amplitudes - &eta.amplitudes * C64::new(0.0, 1.0)));
    Ok(finish("down", q, steps, res, table, vec![identity("p-down-closed-form", r)]))
}

/// Unit eigenfunction of the reduced D^up_{q-1} with eigenvalue 1, as a full-basis function.
pub fn eigenvalue_one_function(c: &Complex, q: usize, choice: FChoice) -> Result<CVec> {
    if q == 0 {
        return Err(Error::DimensionOutOfRange { q, lo: 1, hi: c.dim() });
    }
    let d = build_discriminant(c, q - 1, Mode::Up, Basis::Reduced)?.mat;
    let x: CVec = match choice {
        FChoice::FSigma => {
            let sigma = OrientedSimplex::new(c.simplex(q, 0).clone(), false);
            f_sigma(c, &sigma)?
        }
        FChoice::Auto | FChoice::Random(_) => {
            let ev = eigvals_hermitian(&d)?;
            if !ev.iter().any(|t| (t - 1.0).abs() < 1e-8) {
                return Err(Error::Precondition(format!(
                    "D^up_{} has no eigenvalue 1 on this complex",
                    q - 1
                )));
            }
            let shifted = &d - nalgebra::DMatrix::identity(d.nrows(), d.ncols());
            let eig = nalgebra::SymmetricEigen::new(shifted.map(|z| z.re));
            let k = (0..eig.eigenvalues.len())
                .min_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()))
                .expect("nonempty");
            let mut v = eig.eigenvectors.column(k).map(|x| C64::new(x, 0.0));
            if let FChoice::Random(seed) = choice {
                // random combination within the eigenspace
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                v.fill(C64::new(0.0, 0.0));
                for j in 0..eig.eigenvalues.len() {
                    if eig.eigenvalues[j].abs() < 1e-8 {
                        let w: f64 = rng.random_range(-1.0..1.0);
                        v += eig.eigenvectors.column(j).map(|x| C64::new(x * w, 0.0));
                    }
                }
            }
            v
        }
        FChoice::Constant => {
            return Err(Error::InvalidParams("eigenfunction states take fsigma, auto or random".into()))
        }
    };
    let n = x.norm();
    if n < 1e-12 {
        return Err(Error::Precondition("zero initial function".into()));
    }
    let res = max_abs_vec(&(&d * &x - &x));
    if res > IDENTITY_TOL * n {
        return Err(Error::Precondition(format!("chosen f is not an eigenfunction with eigenvalue 1 (residual {res:.3e})")));
    }
    let x = x.unscale(n * 2f64.sqrt());
    let mut full = CVec::zeros(2 * x.len());
    for (i, z) in x.iter().enumerate() {
        full[2 * i] = *z;
        full[2 * i + 1] = -*z;
    }
    Ok(full)
}

/// G_q from `alpha r`, `r = sqrt(2/q!) f`, against the up walk in dimension q-1 from `d^* f`:
/// `Q(F) = sum_{t in dF} P^up(t) / deg_X(t)` at every step.
pub fn eigenfunction_report(c: &Complex, q: usize, f: &CVec, steps: usize) -> Result<StationarityReport> {
    let gw = build_g_walk(c, q)?;
    let fact: f64 = (1..=q).map(|x| x as f64).product();
    let r = lift_to_ordered(&gw.lower, f).scale((2.0 / fact).sqrt());
    let start = &gw.alpha.mat * r;
    let walk = build_walk(c, q, WalkKind::Ordered)?;
    let state = WalkState::new(walk.u.cols.space, start)?;
    let qt = walk.table(&state, steps)?;
    let ops = build_edge_ops(c, q - 1, Mode::Up)?;
    let up = build_walk(c, q - 1, WalkKind::Up)?;
    let g = ops.d.mat.adjoint() * f;
    let pstate = WalkState::new(up.u.cols.space, g)?;
    let pt = up.table(&pstate, steps)?;
    let mut r: f64 = 0.0;
    for (qrow, prow) in qt.rows.iter().zip(&pt.rows) {
        for (j, x) in qrow.iter().enumerate() {
            let rhs: f64 = c.faces(q, j).iter().map(|&t| prow[t] / c.deg_up(q - 1, t) as f64).sum();
            r = r.max((x - rhs).abs());
        }
    }
    let res_g = max_abs_vec(&(&walk.u.mat * &state.amplitudes - &state.amplitudes));
    let res_u = max_abs_vec(&(&up.u.mat * &pstate.amplitudes - &pstate.amplitudes));
    let ids = vec![
        identity("q-vs-p-up-lower", r),
        identity("u-up-fixes-dstar-f", res_u),
        identity("p-up-lower-stationary", pt.max_drift()),
    ];
    Ok(finish("ordered-fpp1", q, steps, res_g, qt, ids))
}
