//! Level function of a non-increasing step function with respect to
//! `phi(t) = t^{-alpha}`.
//!
//! With `Phi(t) = t^{1-alpha}/(1-alpha)` and `F(t) = int_0^t f`, the level
//! function is the derivative (in `t`) of the least concave majorant of
//! `F` viewed as a function of `u = Phi(t)`. Between two knots of `f` that
//! curve is convex in `u`, so the majorant only touches it at knots and a
//! single stack scan over the knot points suffices.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::{precedes, Function, MonomialFunction, MonomialPiece, StepFunction, DEFAULT_SAMPLES};
use crate::norms::{norm_of_pieces, Exponents, SecondIndex};

/// Relative tolerance for the per-interval mass identity.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub alpha: f64,
    pub intervals: Vec<(f64, f64)>,
    pub slopes: Vec<f64>,
    pub level: MonomialFunction,
    pub source: StepFunction,
}

impl Serialize for LevelResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            alpha: f64,
            intervals: Vec<[f64; 2]>,
            slopes: &'a [f64],
            level: Function,
        }
        View {
            alpha: self.alpha,
            intervals: self.intervals.iter().map(|&(a, b)| [a, b]).collect(),
            slopes: &self.slopes,
            level: Function::Monomial(self.level.clone()),
        }
        .serialize(serializer)
    }
}

/// `Phi(t) = int_0^t u^{-alpha} du`.
pub fn big_phi(alpha: f64, t: f64) -> f64 {
    if alpha == 0.0 {
        t
    } else {
        t.powf(1.0 - alpha) / (1.0 - alpha)
    }
}

/// `Phi(b) - Phi(a)`, accurate for thin intervals.
fn phi_measure(alpha: f64, a: f64, b: f64) -> f64 {
    crate::functions::power_integral(alpha, a, b)
}

pub fn level_function(f: &StepFunction, alpha: f64) -> Result<LevelResult> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must lie in [0, 1)")));
    }
    f.require_nonincreasing()?;

    // Knot points (t_i, F(t_i)); f is contiguous from 0 so knots are the piece
    // boundaries.
    let mut ts = vec![0.0];
    let mut masses = vec![0.0];
    for p in f.pieces() {
        ts.push(p.b);
        masses.push(masses.last().unwrap() + p.value * (p.b - p.a));
    }

    // Upper concave hull; a middle point on or below the chord is dropped so
    // collinear runs collapse into one interval.
    let mut hull: Vec<usize> = Vec::with_capacity(ts.len());
    for i in 0..ts.len() {
        while hull.len() >= 2 {
            let j = hull[hull.len() - 1];
            let k = hull[hull.len() - 2];
            let left = (masses[j] - masses[k]) * phi_measure(alpha, ts[k], ts[i]);
            let right = (masses[i] - masses[k]) * phi_measure(alpha, ts[k], ts[j]);
            if left <= right {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    let mut intervals = Vec::with_capacity(hull.len());
    let mut slopes = Vec::with_capacity(hull.len());
    let mut pieces = Vec::with_capacity(hull.len());
    for w in hull.windows(2) {
        let (a, b) = (ts[w[0]], ts[w[1]]);
        let lambda = (masses[w[1]] - masses[w[0]]) / phi_measure(alpha, a, b);
        intervals.push((a, b));
        slopes.push(lambda);
        pieces.push(MonomialPiece {
            a,
            b,
            coeff: lambda,
            beta: alpha,
        });
    }
    Ok(LevelResult {
        alpha,
        intervals,
        slopes,
        level: MonomialFunction::new(pieces)?,
        source: f.clone(),
    })
}

/// Outcome of the structural checks on a [`LevelResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub slopes_decreasing: bool,
    pub ratio_nonincreasing: bool,
    pub mass_equality: bool,
    pub majorization: bool,
    /// `f(t) t^alpha` non-increasing, the condition for `||f°|| = ||f||`.
    pub equality_predicate: bool,
    /// Set of `t` in the support where `f = f°`, as intervals (always empty
    /// for step inputs with `alpha > 0`).
    pub coincidence: Vec<(f64, f64)>,
}

impl LevelReport {
    pub fn all_pass(&self) -> bool {
        self.slopes_decreasing && self.ratio_nonincreasing && self.mass_equality && self.majorization
    }
}

/// `f(t) t^alpha` is non-increasing for a non-increasing step `f` only when
/// `alpha = 0` or `f = 0`.
pub fn ratio_predicate(f: &StepFunction, alpha: f64) -> bool {
    f.is_zero() || (alpha == 0.0 && f.is_nonincreasing())
}

pub fn verify_level(lr: &LevelResult) -> LevelReport {
    let slopes_decreasing = lr.slopes.windows(2).all(|w| w[0] > w[1]);

    // f°/phi = lambda_k on I_k and 0 past the support; it is non-increasing
    // when the intervals tile [0, b] and the slopes decrease.
    let tiles = lr.intervals.first().is_none_or(|i| i.0 == 0.0)
        && lr.intervals.windows(2).all(|w| w[0].1 == w[1].0)
        && lr.intervals.last().map_or(0.0, |i| i.1) == lr.source.support_end();
    let ratio_nonincreasing = tiles && lr.slopes.windows(2).all(|w| w[0] >= w[1]);

    let mass_equality = lr.intervals.iter().zip(&lr.slopes).all(|(&(a, b), &lambda)| {
        let lhs = lr.source.integral(a, b);
        let rhs = lambda * phi_measure(lr.alpha, a, b);
        (lhs - rhs).abs() <= MASS_TOL * lhs.abs().max(rhs.abs())
    });

    let majorization = precedes(
        &Function::Step(lr.source.clone()),
        &Function::Monomial(lr.level.clone()),
        DEFAULT_SAMPLES,
    )
    .map(|r| r.holds)
    .unwrap_or(false);

    let coincidence = if lr.alpha == 0.0 {
        lr.intervals
            .iter()
            .zip(&lr.slopes)
            .filter(|(&(a, b), &lambda)| {
                lr.source
                    .pieces()
                    .iter()
                    .all(|p| p.b <= a || p.a >= b || (p.value - lambda).abs() <= MASS_TOL * lambda)
            })
            .map(|(&i, _)| i)
            .collect()
    } else {
        Vec::new()
    };

    LevelReport {
        slopes_decreasing,
        ratio_nonincreasing,
        mass_equality,
        majorization,
        equality_predicate: ratio_predicate(&lr.source, lr.alpha),
        coincidence,
    }
}

/// The `alpha` attached to `(p, s)` with `p < s`.
pub fn level_alpha(e: &Exponents) -> Result<f64> {
    if !e.p_lt_s() {
        return Err(Error::InvalidExponents(format!(
            "level function needs p < s, got p = {}, s = {}",
            e.p, e.s
        )));
    }
    Ok(e.alpha)
}

/// `(||f°||, ||f||, c_{p,s} ||f°||)` for non-increasing `f` and `p < s`.
pub fn level_bracket(f: &StepFunction, e: &Exponents) -> Result<(f64, f64, f64)> {
    let lr = level_function(f, level_alpha(e)?)?;
    let low = norm_of_pieces(lr.level.pieces(), e.p, e.s)?;
    let mid = norm_of_pieces(f.to_monomial().pieces(), e.p, e.s)?;
    Ok((low, mid, e.c_ps * low))
}

/// Per-interval comparison `( ||f° chi_I||, ||f chi_I|| )` of the
/// `s`-th power integrals against `t^{s/p - 1}`, one pair per `I_k`.
pub fn interval_holder_step(lr: &LevelResult, p: f64, s: SecondIndex) -> Result<Vec<(f64, f64)>> {
    let src = lr.source.to_monomial();
    lr.intervals
        .iter()
        .zip(lr.level.pieces())
        .map(|(&(a, b), level_piece)| {
            let restricted: Vec<MonomialPiece> = src
                .pieces()
                .iter()
                .filter(|q| q.a < b && q.b > a)
                .map(|q| MonomialPiece {
                    a: q.a.max(a),
                    b: q.b.min(b),
                    ..*q
                })
                .collect();
            Ok((
                norm_of_pieces(std::slice::from_ref(level_piece), p, s)?,
                norm_of_pieces(&restricted, p, s)?,
            ))
        })
        .collect()
}
