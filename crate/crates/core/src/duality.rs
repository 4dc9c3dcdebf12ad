//! Köthe dual norm `||f||'_{p,s} = sup { int f g : ||g||_{p',s'} <= 1 }`.
//!
//! The supremum reduces to a closed form: for `s <= p` it is the quasi-norm
//! itself, for `p < s` it is the quasi-norm of the level function of `f*`
//! with respect to `t^{-alpha}`. Both finite-`s` branches also return the
//! optimizing `g`. The randomized [`dual_oracle`] exists only as an
//! independent lower bound for testing.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::trial_rng;
use crate::error::Result;
use crate::functions::{pairing, Function, MonomialFunction, MonomialPiece, StepFunction, StepPiece};
use crate::level::{level_alpha, level_function};
use crate::norms::{norm_of_pieces, step_norm, Exponents, SecondIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    SLePIdentity,
    LevelFunction,
    SupSInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualResult {
    pub value: f64,
    pub branch: Branch,
    pub witness: Option<Function>,
}

/// `||f||'_{p,s}` with its witness `g` (`||g||_{p',s'} = 1`, `int f* g` equal
/// to the value) when `s < inf` and `f != 0`.
pub fn dual_norm(f: &StepFunction, e: &Exponents) -> Result<DualResult> {
    let fstar = f.rearrange();
    match e.s {
        SecondIndex::Finite(s) if s <= e.p => {
            let value = step_norm(&fstar, e.p, e.s);
            // psi = (f*)^{s-1} t^{s/p - 1}; ||psi||_{p',s'} = ||f||^{s-1}.
            let witness = if value > 0.0 {
                let scale = value.powf(s - 1.0);
                let pieces = fstar
                    .pieces()
                    .iter()
                    .map(|p| MonomialPiece {
                        a: p.a,
                        b: p.b,
                        coeff: p.value.powf(s - 1.0) / scale,
                        beta: 1.0 - s / e.p,
                    })
                    .collect();
                Some(Function::Monomial(MonomialFunction::new(pieces)?))
            } else {
                None
            };
            Ok(DualResult {
                value,
                branch: Branch::SLePIdentity,
                witness,
            })
        }
        SecondIndex::Finite(s) => {
            let lr = level_function(&fstar, level_alpha(e)?)?;
            let value = norm_of_pieces(lr.level.pieces(), e.p, e.s)?;
            // psi = (f°)^{s-1} t^{s/p-1} is constant on each I_k because
            // alpha (s - 1) = s/p - 1.
            let witness = if value > 0.0 {
                let scale = value.powf(s - 1.0);
                let pieces = lr
                    .intervals
                    .iter()
                    .zip(&lr.slopes)
                    .map(|(&(a, b), &lambda)| StepPiece {
                        a,
                        b,
                        value: lambda.powf(s - 1.0) / scale,
                    })
                    .collect();
                Some(Function::Step(StepFunction::new(pieces)?))
            } else {
                None
            };
            Ok(DualResult {
                value,
                branch: Branch::LevelFunction,
                witness,
            })
        }
        SecondIndex::Infinite => {
            let lr = level_function(&fstar, level_alpha(e)?)?;
            let value = norm_of_pieces(lr.level.pieces(), e.p, e.s)?;
            Ok(DualResult {
                value,
                branch: Branch::SupSInfinity,
                witness: None,
            })
        }
    }
}

/// `int f* g / ||g||_{p',s'}` for a non-increasing `g`.
fn normalized_pairing(fstar: &Function, g: &Function, dual: &Exponents) -> Option<f64> {
    let norm = match g {
        Function::Step(s) => step_norm(s, dual.p, dual.s),
        Function::Monomial(m) => norm_of_pieces(m.pieces(), dual.p, dual.s).ok()?,
    };
    (norm > 0.0).then(|| pairing(fstar, g) / norm)
}

fn random_test_function<R: Rng>(rng: &mut R, knots: &[f64], end: f64) -> StepFunction {
    let n = rng.gen_range(1..=8);
    let mut cuts: Vec<f64> = if rng.gen_bool(0.5) && knots.len() > 1 {
        // Reuse the knots of f: the extremal g is constant between them.
        (0..n)
            .map(|_| knots[rng.gen_range(1..knots.len())])
            .collect()
    } else {
        (0..n).map(|_| rng.gen_range(0.0..1.5) * end).collect()
    };
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut values: Vec<f64> = (1..cuts.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let pieces = cuts
        .windows(2)
        .zip(values)
        .map(|(w, value)| StepPiece {
            a: w[0],
            b: w[1],
            value,
        })
        .collect();
    StepFunction::new(pieces).unwrap_or_default()
}

/// Randomized lower bound for `||f||'_{p,s}`: the best normalized pairing over
/// `trials` random non-increasing step functions, the analytic witness, and
/// the near-optimizers `chi_(0,xi)` at every knot of `f*`.
pub fn dual_oracle(f: &StepFunction, e: &Exponents, trials: usize, seed: u64) -> Result<f64> {
    let fstar = f.rearrange();
    if fstar.is_zero() {
        return Ok(0.0);
    }
    let dual = e.conjugate();
    let ff = Function::Step(fstar.clone());
    let mut best: f64 = 0.0;

    if let Some(w) = dual_norm(&fstar, e)?.witness {
        if let Some(v) = normalized_pairing(&ff, &w, &dual) {
            best = best.max(v);
        }
    }
    let knots = fstar.knots();
    for &xi in knots.iter().filter(|&&t| t > 0.0) {
        let g = Function::Step(StepFunction::constant_on(0.0, xi, 1.0)?);
        if let Some(v) = normalized_pairing(&ff, &g, &dual) {
            best = best.max(v);
        }
    }
    let end = fstar.support_end();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let g = random_test_function(&mut rng, &knots, end);
        if let Some(v) = normalized_pairing(&ff, &Function::Step(g), &dual) {
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Whether `||f||' = ||f||` to within `1e-10` (relative), for `p < s`.
pub fn equality_diagnosis(f: &StepFunction, e: &Exponents) -> Result<bool> {
    f.require_nonincreasing()?;
    let dual = dual_norm(f, e)?.value;
    let norm = step_norm(f, e.p, e.s);
    Ok((norm - dual).abs() <= 1e-10 * norm.max(1.0))
}
