//! Constructive upper bounds for the decomposition norm
//! `||f||_{(p,s)} = inf { sum ||f_j||_{p,s} : f <= sum f_j }`.
//!
//! [`epsilon_decomposition`] follows the classical argument: average `f` and
//! its level function `f°` over a fine grid (`g_nu`, `psi_nu`), slice
//! `psi_nu` into `N` thin layers, and redistribute the layers cell by cell
//! with the permutation lemma ([`matrix_shuffle`]) so that every part is a
//! rearrangement of `psi_nu / N` while their sum still covers `g_nu` up to a
//! small constant `delta`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::{StepFunction, StepPiece};
use crate::level::{level_alpha, level_function};
use crate::norms::{char_factor, step_norm, Exponents, SecondIndex};

// ---------------------------------------------------------------------------
// Permutation lemma
// ---------------------------------------------------------------------------

/// Relative slack on the prefix-domination test, to absorb rounding in
/// instances built from floating-point cell averages.
pub const PREFIX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShuffleInstance {
    pub alphas: Vec<f64>,
    pub eta: Vec<Vec<f64>>,
    pub eta_max: f64,
}

impl ShuffleInstance {
    pub fn new(alphas: Vec<f64>, eta: Vec<Vec<f64>>) -> Result<Self> {
        let nu = alphas.len();
        if nu == 0 || eta.is_empty() {
            return Err(Error::InvalidArgument("empty shuffle instance".into()));
        }
        if eta.iter().any(|row| row.len() != nu) {
            return Err(Error::InvalidArgument(format!("every row needs {nu} entries")));
        }
        if alphas.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidArgument("alphas must be positive".into()));
        }
        if alphas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("alphas must be non-increasing".into()));
        }
        if eta.iter().flatten().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidArgument("matrix entries must be positive".into()));
        }
        let betas = column_sums(&eta);
        let scale = betas.iter().sum::<f64>().max(alphas.iter().sum());
        let (mut sb, mut sa) = (0.0, 0.0);
        for k in 0..nu {
            sb += betas[k];
            sa += alphas[k];
            if sb < sa - PREFIX_TOL * scale {
                return Err(Error::PrefixDomination { column: k });
            }
        }
        let eta_max = eta.iter().flatten().copied().fold(0.0, f64::max);
        Ok(ShuffleInstance { alphas, eta, eta_max })
    }

    pub fn rows(&self) -> usize {
        self.eta.len()
    }

    pub fn columns(&self) -> usize {
        self.alphas.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShuffleResult {
    /// `perms[j][k]` is the original column of row `j` now placed in column `k`.
    pub perms: Vec<Vec<usize>>,
    pub beta_tilde: Vec<f64>,
}

impl ShuffleResult {
    /// `alpha_k <= beta_tilde_k + eta_max` for every column.
    pub fn satisfies(&self, inst: &ShuffleInstance) -> bool {
        inst.alphas
            .iter()
            .zip(&self.beta_tilde)
            .all(|(&a, &b)| a <= b + inst.eta_max)
    }
}

fn column_sums(eta: &[Vec<f64>]) -> Vec<f64> {
    let nu = eta.first().map_or(0, Vec::len);
    let mut sums = vec![0.0; nu];
    for row in eta {
        for (s, x) in sums.iter_mut().zip(row) {
            *s += x;
        }
    }
    sums
}

/// Per-row column permutations with `alpha_k <= beta~_k + eta_max`.
///
/// Column `c` is fixed one at a time: when some later column sum falls short
/// of `alpha_c`, the first such column `s` trades entries with column `c`
/// row by row until the running sum of column `c` first drops below
/// `alpha_c`. That sum is then within `eta_max` of `alpha_c` and the
/// remaining columns still satisfy prefix domination.
pub fn matrix_shuffle(inst: &ShuffleInstance) -> ShuffleResult {
    let n = inst.rows();
    let nu = inst.columns();
    let mut m = inst.eta.clone();
    let mut perms: Vec<Vec<usize>> = vec![(0..nu).collect(); n];
    let mut sums = column_sums(&m);

    for c in 0..nu {
        let target = inst.alphas[c];
        if sums[c..].iter().all(|&b| b >= target) {
            break;
        }
        if sums[c] < target {
            // Only reachable through rounding; the bound still holds with
            // the slack of eta_max.
            continue;
        }
        let Some(s) = (c + 1..nu).find(|&k| sums[k] < target) else {
            continue;
        };
        let mut gamma = sums[c];
        let mut last = n;
        for (j, row) in m.iter().enumerate() {
            gamma += row[s] - row[c];
            if gamma < target {
                last = j;
                break;
            }
        }
        debug_assert!(last < n, "column sum of s is below target so the walk must cross");
        for j in 0..=last.min(n - 1) {
            m[j].swap(c, s);
            perms[j].swap(c, s);
        }
        sums[c] = m.iter().map(|r| r[c]).sum();
        sums[s] = m.iter().map(|r| r[s]).sum();
    }
    ShuffleResult {
        perms,
        beta_tilde: column_sums(&m),
    }
}

// ---------------------------------------------------------------------------
// Epsilon decomposition
// ---------------------------------------------------------------------------

/// Largest grid subdivision tried before giving up.
pub const MAX_CELLS: usize = 1 << 16;

/// Largest `N * cells` (matrix entries) allowed when building the parts.
pub const MAX_ENTRIES: usize = 1 << 26;

/// Largest denominator searched for a common grid through all knots.
const MAX_DENOMINATOR: u64 = 4096;

/// Certificate that `||f||'_{p,s} = lower <= ||f||_{(p,s)} <= upper`.
///
/// Part `j` takes the value `psi[perms[j][k]] / N` on cell `k` of the grid;
/// parts are materialized on demand by [`DecompositionCertificate::part`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    pub lower: f64,
    pub upper: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub n: usize,
    pub nu: usize,
    /// Cell boundaries `x_0 = 0 < ... < x_M = b`.
    pub grid: Vec<f64>,
    /// Cell averages of `f` (`g_nu`).
    pub g_nu: Vec<f64>,
    /// Cell averages of `f°` (`psi_nu`).
    pub psi_nu: Vec<f64>,
    pub perms: Vec<Vec<u32>>,
    /// `||psi_nu||_{p,s}`, `||delta chi_[0,b]||_{p,s}`, `||f - g_nu||_{p,s}`.
    pub psi_norm: f64,
    pub slack_norm: f64,
    pub approx_norm: f64,
}

impl DecompositionCertificate {
    fn empty(epsilon: f64) -> Self {
        DecompositionCertificate {
            lower: 0.0,
            upper: 0.0,
            epsilon,
            delta: 0.0,
            n: 0,
            nu: 0,
            grid: Vec::new(),
            g_nu: Vec::new(),
            psi_nu: Vec::new(),
            perms: Vec::new(),
            psi_norm: 0.0,
            slack_norm: 0.0,
            approx_norm: 0.0,
        }
    }

    pub fn cells(&self) -> usize {
        self.grid.len().saturating_sub(1)
    }

    /// Values of part `j` cell by cell.
    pub fn part_values(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.n as f64;
        self.perms[j].iter().map(move |&k| self.psi_nu[k as usize] / n)
    }

    pub fn part(&self, j: usize) -> StepFunction {
        let pieces = self
            .grid
            .windows(2)
            .zip(self.part_values(j))
            .map(|(w, value)| StepPiece { a: w[0], b: w[1], value })
            .collect();
        StepFunction::new(pieces).expect("grid cells are valid pieces")
    }

    pub fn parts(&self) -> impl Iterator<Item = StepFunction> + '_ {
        (0..self.n).map(|j| self.part(j))
    }

    /// `sum_j f_j + delta >= g_nu` on every cell.
    pub fn covers(&self) -> bool {
        let mut sums = vec![0.0; self.cells()];
        for j in 0..self.n {
            for (s, v) in sums.iter_mut().zip(self.part_values(j)) {
                *s += v;
            }
        }
        sums.iter().zip(&self.g_nu).all(|(s, g)| s + self.delta >= *g)
    }

    /// Largest deviation `| ||f_j|| - ||psi_nu|| / N |` over all parts,
    /// relative to `||psi_nu|| / N`.
    pub fn equal_norm_deviation(&self, e: &Exponents) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let target = self.psi_norm / self.n as f64;
        (0..self.n)
            .map(|j| (step_norm(&self.part(j), e.p, e.s) - target).abs() / target)
            .fold(0.0, f64::max)
    }

    /// Every part is a cell permutation of `psi_nu / N` within each level
    /// interval (checked as a permutation of the cell indices).
    pub fn rows_are_permutations(&self) -> bool {
        let m = self.cells();
        self.perms.iter().all(|row| {
            let mut seen = vec![false; m];
            row.len() == m
                && row.iter().all(|&k| {
                    let k = k as usize;
                    k < m && !std::mem::replace(&mut seen[k], true)
                })
        })
    }
}

impl Serialize for DecompositionCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DecompositionCertificate", 7)?;
        st.serialize_field("lower", &self.lower)?;
        st.serialize_field("upper", &self.upper)?;
        st.serialize_field("epsilon", &self.epsilon)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("nu", &self.nu)?;
        let parts: Vec<crate::functions::Function> = self.parts().map(Into::into).collect();
        st.serialize_field("parts", &parts)?;
        st.end()
    }
}

/// Smallest `q <= 4096` with every knot an integer multiple of `1/q`.
fn common_denominator(knots: &[f64]) -> Option<u64> {
    (1..=MAX_DENOMINATOR).find(|&q| {
        knots.iter().all(|&t| {
            let x = t * q as f64;
            (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0)
        })
    })
}

/// Cell boundaries for subdivision `nu`, per level interval.
fn build_grid(intervals: &[(f64, f64)], q: Option<u64>, nu: usize) -> Vec<Vec<f64>> {
    intervals
        .iter()
        .map(|&(a, b)| {
            let cells = match q {
                Some(q) => (((b - a) * (q * nu as u64) as f64).round() as usize).max(1),
                None => nu,
            };
            let h = (b - a) / cells as f64;
            let mut xs: Vec<f64> = (0..cells).map(|i| a + h * i as f64).collect();
            xs.push(b);
            xs
        })
        .collect()
}

/// Builds a certificate with `upper - lower <= 4 epsilon` for a
/// non-increasing `f` and `p < s`.
///
/// The grid subdivision `nu` doubles from 4 until `||f - g_nu|| < epsilon`
/// and `||psi_nu|| <= ||f°|| + epsilon`; when every knot of `f` is a
/// multiple of some `1/q`, cells are aligned to `1/(q nu)` so `g_nu = f`.
pub fn epsilon_decomposition(f: &StepFunction, e: &Exponents, epsilon: f64) -> Result<DecompositionCertificate> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} must be positive")));
    }
    let alpha = level_alpha(e)?;
    f.require_nonincreasing()?;
    if f.is_zero() {
        return Ok(DecompositionCertificate::empty(epsilon));
    }
    let (p, s) = (e.p, e.s);
    let lr = level_function(f, alpha)?;
    let lower = crate::norms::norm_of_pieces(lr.level.pieces(), p, s)?;
    let b = f.support_end();
    let q = common_denominator(&f.knots());

    let mut nu = 4usize;
    let (grid, g_nu, psi_nu, psi_norm, approx_norm, bounds) = loop {
        let cells = build_grid(&lr.intervals, q, nu);
        let total: usize = cells.iter().map(|c| c.len() - 1).sum();
        if total > MAX_CELLS {
            return Err(Error::Budget(format!(
                "grid needs more than {MAX_CELLS} cells (nu = {nu}) to bring the level-function \
                 averages within epsilon = {epsilon}"
            )));
        }
        let mut grid = vec![0.0];
        let mut g = Vec::with_capacity(total);
        let mut psi = Vec::with_capacity(total);
        let mut bounds = Vec::with_capacity(cells.len());
        for (xs, (&lambda, _)) in cells.iter().zip(lr.slopes.iter().zip(&lr.intervals)) {
            let start = g.len();
            for w in xs.windows(2) {
                let width = w[1] - w[0];
                g.push(f.integral(w[0], w[1]) / width);
                psi.push(lambda * crate::functions::power_integral(alpha, w[0], w[1]) / width);
                grid.push(w[1]);
            }
            bounds.push(start..g.len());
        }
        let to_step = |values: &[f64]| {
            StepFunction::new(
                grid.windows(2)
                    .zip(values)
                    .map(|(w, &value)| StepPiece { a: w[0], b: w[1], value })
                    .collect(),
            )
            .expect("grid cells are valid pieces")
        };
        let g_step = to_step(&g);
        let psi_step = to_step(&psi);
        let approx_norm = step_norm(&f.abs_diff(&g_step), p, s);
        let psi_norm = step_norm(&psi_step, p, s);
        if approx_norm < epsilon && psi_norm <= lower + epsilon {
            break (grid, g, psi, psi_norm, approx_norm, bounds);
        }
        nu *= 2;
    };

    // ||delta chi_[0,b]|| = delta b^{1/p} (p/s)^{1/s} < epsilon.
    let delta = 0.99 * epsilon * b.powf(-1.0 / p) / char_factor(p, s);
    let beta_max = psi_nu.iter().copied().fold(0.0, f64::max);
    let n = (beta_max / delta).floor() as usize + 1;
    let cells = g_nu.len();
    if n.saturating_mul(cells) > MAX_ENTRIES {
        return Err(Error::Budget(format!(
            "{n} parts on {cells} cells exceed {MAX_ENTRIES} matrix entries"
        )));
    }

    let mut perms: Vec<Vec<u32>> = vec![Vec::with_capacity(cells); n];
    for range in bounds {
        let alphas = g_nu[range.clone()].to_vec();
        let row: Vec<f64> = psi_nu[range.clone()].iter().map(|&x| x / n as f64).collect();
        let inst = ShuffleInstance::new(alphas, vec![row; n])?;
        let res = matrix_shuffle(&inst);
        for (part, local) in perms.iter_mut().zip(&res.perms) {
            part.extend(local.iter().map(|&k| (range.start + k) as u32));
        }
    }

    let slack_norm = delta * b.powf(1.0 / p) * char_factor(p, s);
    Ok(DecompositionCertificate {
        lower,
        upper: psi_norm + slack_norm + approx_norm,
        epsilon,
        delta,
        n,
        nu,
        grid,
        g_nu,
        psi_nu,
        perms,
        psi_norm,
        slack_norm,
        approx_norm,
    })
}

// ---------------------------------------------------------------------------
// Explicit decomposition of chi_[0,1]
// ---------------------------------------------------------------------------

/// `Phi(y) = floor(y) + frac(y)^{1-alpha}`, the primitive of the 1-periodic
/// extension of `(1-alpha) t^{-alpha}`.
fn periodic_primitive(alpha: f64, y: f64) -> f64 {
    let n = y.floor();
    n + (y - n).powf(1.0 - alpha)
}

/// Splits `chi_[0,1]` into `N` equimeasurable parts
/// `h_k(x) = Phi(x + k/N) - Phi(x + (k-1)/N)`, sampled at the midpoints of
/// `cells` equal cells. Returns the parts and `sum_k ||h_k||_{p,s}`.
pub fn char_decomposition(e: &Exponents, n: usize, cells: usize) -> Result<(Vec<StepFunction>, f64)> {
    let alpha = level_alpha(e)?;
    if e.s.is_infinite() {
        return Err(Error::InvalidExponents("char decomposition needs s < inf".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if cells < 64 * n {
        return Err(Error::InvalidArgument(format!("cells = {cells} must be at least 64 N")));
    }
    let h = 1.0 / cells as f64;
    let mut parts = Vec::with_capacity(n);
    for k in 1..=n {
        let hi = k as f64 / n as f64;
        let lo = (k - 1) as f64 / n as f64;
        let pieces = (0..cells)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                StepPiece {
                    a: i as f64 * h,
                    b: if i + 1 == cells { 1.0 } else { (i + 1) as f64 * h },
                    value: periodic_primitive(alpha, x + hi) - periodic_primitive(alpha, x + lo),
                }
            })
            .collect();
        parts.push(StepFunction::new(pieces)?);
    }
    let total = parts.iter().map(|h| step_norm(h, e.p, e.s)).sum();
    Ok((parts, total))
}

// ---------------------------------------------------------------------------
// Triangle and Minkowski inequalities
// ---------------------------------------------------------------------------

/// `(||sum f_k||, c_{p,s} sum ||f_k||, lhs / rhs)`.
pub fn triangle_check(fs: &[StepFunction], e: &Exponents) -> Result<(f64, f64, f64)> {
    level_alpha(e)?;
    let lhs = step_norm(&StepFunction::sum(fs), e.p, e.s);
    let rhs = e.c_ps * fs.iter().map(|f| step_norm(f, e.p, e.s)).sum::<f64>();
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok((lhs, rhs, ratio))
}

/// `(||sum w_y f_y||, c_{p,s} sum w_y ||f_y||)` for a finite weighted family.
pub fn minkowski_check(rows: &[StepFunction], weights: &[f64], e: &Exponents) -> Result<(f64, f64)> {
    level_alpha(e)?;
    if rows.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} rows but {} weights",
            rows.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    let scaled: Vec<StepFunction> = rows.iter().zip(weights).map(|(f, &w)| f.scale(w)).collect();
    let lhs = step_norm(&StepFunction::sum(&scaled), e.p, e.s);
    let rhs = e.c_ps
        * rows
            .iter()
            .zip(weights)
            .map(|(f, &w)| w * step_norm(f, e.p, e.s))
            .sum::<f64>();
    Ok((lhs, rhs))
}

/// Exhaustive search over per-row cyclic shifts (`nu^N` candidates); returns
/// whether some assignment meets `alpha_k <= beta~_k + eta_max`.
pub fn brute_force_feasible(inst: &ShuffleInstance) -> bool {
    let n = inst.rows();
    let nu = inst.columns();
    let total = nu.pow(n as u32);
    (0..total).any(|mut code| {
        let mut sums = vec![0.0; nu];
        for row in &inst.eta {
            let shift = code % nu;
            code /= nu;
            for k in 0..nu {
                sums[k] += row[(k + shift) % nu];
            }
        }
        inst.alphas
            .iter()
            .zip(&sums)
            .all(|(&a, &b)| a <= b + inst.eta_max)
    })
}

/// `||f||_{p,s}` of the slack term `delta chi_[0,b]`.
pub fn slack_norm(delta: f64, b: f64, p: f64, s: SecondIndex) -> f64 {
    delta * b.powf(1.0 / p) * char_factor(p, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_dyadic_step, trial_rng};
    use crate::duality::dual_norm;
    use rand::Rng;

    fn e(p: f64, s: f64) -> Exponents {
        Exponents::new(p, s).unwrap()
    }

    fn chi() -> StepFunction {
        StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn shuffle_three_rows() {
        let inst = ShuffleInstance::new(vec![1.6, 1.6], vec![vec![1.0, 0.1]; 3]).unwrap();
        // identity fails column 2
        assert!(inst.alphas[1] > 0.3 + inst.eta_max);
        let res = matrix_shuffle(&inst);
        assert!(res.satisfies(&inst));
        assert!(res.beta_tilde[1] >= 1.2 - 1e-15);
        assert!(res.perms.iter().any(|p| p != &vec![0, 1]));
        assert!(brute_force_feasible(&inst));
    }

    #[test]
    fn shuffle_trivial_cases() {
        let inst = ShuffleInstance::new(vec![0.5], vec![vec![0.3], vec![0.4]]).unwrap();
        let res = matrix_shuffle(&inst);
        assert_eq!(res.perms, vec![vec![0], vec![0]]);

        let inst = ShuffleInstance::new(vec![0.5, 0.4], vec![vec![0.3, 0.3], vec![0.3, 0.3]]).unwrap();
        assert_eq!(matrix_shuffle(&inst).perms, vec![vec![0, 1]; 2]);
    }

    #[test]
    fn shuffle_rejects_infeasible() {
        let err = ShuffleInstance::new(vec![2.0, 1.0], vec![vec![0.5, 0.5]]).unwrap_err();
        assert_eq!(err, Error::PrefixDomination { column: 0 });
        assert!(ShuffleInstance::new(vec![1.0, 2.0], vec![vec![2.0, 2.0]]).is_err());
    }

    #[test]
    fn shuffle_random_small() {
        for i in 0..2000 {
            let mut rng = trial_rng(5, i);
            let n = rng.gen_range(1..=4);
            let nu = rng.gen_range(1..=4);
            let eta: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..nu).map(|_| rng.gen_range(0.01..=1.0)).collect())
                .collect();
            let betas = column_sums(&eta);
            // Non-increasing alphas dominated in prefix: scale down the
            // sorted column sums.
            let mut alphas = betas.clone();
            alphas.sort_by(|a, b| b.total_cmp(a));
            let mut acc_a = 0.0;
            let mut acc_b = 0.0;
            let mut ratio: f64 = 1.0;
            for k in 0..nu {
                acc_a += alphas[k];
                acc_b += betas[k];
                ratio = ratio.min(acc_b / acc_a);
            }
            let shrink = ratio * rng.gen_range(0.5..=1.0);
            let alphas: Vec<f64> = alphas.iter().map(|a| a * shrink).collect();
            let inst = ShuffleInstance::new(alphas, eta).unwrap();
            let res = matrix_shuffle(&inst);
            assert!(res.satisfies(&inst), "instance {i}: {inst:?} -> {res:?}");
            if brute_force_feasible(&inst) {
                assert!(res.satisfies(&inst));
            }
        }
    }

    #[test]
    fn characteristic_certificate() {
        let x = e(2.0, 4.0);
        let cert = epsilon_decomposition(&chi(), &x, 0.01).unwrap();
        assert!((cert.lower - 0.737_788).abs() < 1e-6);
        assert!(cert.upper >= cert.lower);
        assert!(cert.upper <= cert.lower + 4.0 * 0.01 + 1e-9, "{}", cert.upper);
        assert!(cert.covers());
        assert!(cert.rows_are_permutations());
        assert!(cert.equal_norm_deviation(&x) <= 1e-12);
    }

    #[test]
    fn zero_certificate() {
        let cert = epsilon_decomposition(&StepFunction::zero(), &e(2.0, 4.0), 0.01).unwrap();
        assert_eq!((cert.lower, cert.upper, cert.n), (0.0, 0.0, 0));
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["parts"].as_array().unwrap().len(), 0);
        assert!(v.get("N").is_some());
    }

    #[test]
    fn dyadic_corpus_certificates() {
        let x = e(2.0, 4.0);
        for i in 0..5 {
            let f = random_dyadic_step(&mut trial_rng(3, i));
            let cert = epsilon_decomposition(&f, &x, 0.1).unwrap();
            let dual = dual_norm(&f, &x).unwrap().value;
            assert!((cert.lower - dual).abs() < 1e-12 * dual);
            assert_eq!(cert.approx_norm, 0.0);
            assert!(cert.upper <= cert.lower + 0.4 + 1e-9);
            assert!(cert.covers());
        }
    }

    #[test]
    fn rejects_s_le_p() {
        assert!(epsilon_decomposition(&chi(), &e(2.0, 2.0), 0.1).is_err());
        assert!(epsilon_decomposition(&chi(), &e(2.0, 4.0), 0.0).is_err());
    }

    #[test]
    fn infinite_s_exceeds_budget() {
        // Cell averages of t^{-1/p} carry ||.||_{p,inf} at least p' times the
        // level value on the first cell, for every grid.
        let two = StepFunction::from_knots(&[0.0, 1.0, 2.0], &[2.0, 1.0]).unwrap();
        let res = epsilon_decomposition(&two, &e(2.0, f64::INFINITY), 0.01);
        assert!(matches!(res, Err(Error::Budget(_))));
    }

    #[test]
    fn char_parts() {
        let x = e(2.0, 4.0);
        let (parts, total) = char_decomposition(&x, 1, 64).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].support_end(), 1.0);
        assert!(parts[0].pieces().iter().all(|q| (q.value - 1.0).abs() < 1e-12));
        assert!((total - 0.840_896).abs() < 1e-6);

        let (parts, total) = char_decomposition(&x, 64, 1 << 14).unwrap();
        assert!((total - 0.737_788).abs() <= 0.01, "{total}");
        let sum = StepFunction::sum(&parts);
        for t in [0.1, 0.5, 0.9] {
            assert!((sum.value_at(t) - 1.0).abs() < 1e-12);
        }
        let norms: Vec<f64> = parts.iter().map(|h| step_norm(h, 2.0, x.s)).collect();
        let spread = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - norms.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(spread <= 1e-10, "{spread}");

        let (_, _, ratio) = triangle_check(&parts, &x).unwrap();
        assert!((0.98..=1.0 + 1e-9).contains(&ratio), "{ratio}");
    }

    #[test]
    fn triangle_and_minkowski() {
        let x = e(2.0, 4.0);
        let (lhs, rhs, ratio) = triangle_check(&[chi()], &x).unwrap();
        assert!((ratio - 1.0 / x.c_ps).abs() < 1e-14 && lhs <= rhs);

        let f = StepFunction::from_knots(&[0.0, 1.0, 2.0], &[2.0, 1.0]).unwrap();
        let g = StepFunction::from_knots(&[0.0, 0.5, 3.0], &[4.0, 0.5]).unwrap();
        let fs = [f.clone(), g.clone()];
        let (l1, r1) = minkowski_check(&fs, &[1.0, 1.0], &x).unwrap();
        let (l2, r2, _) = triangle_check(&fs, &x).unwrap();
        assert_eq!((l1, r1), (l2, r2));

        let (l1, r1) = minkowski_check(&fs, &[0.5, 0.5], &x).unwrap();
        let (l2, r2, _) = triangle_check(&[f.scale(0.5), g.scale(0.5)], &x).unwrap();
        assert!((l1 - l2).abs() <= 1e-12 && (r1 - r2).abs() <= 1e-12);
        assert!(minkowski_check(&fs, &[1.0], &x).is_err());
    }
}
