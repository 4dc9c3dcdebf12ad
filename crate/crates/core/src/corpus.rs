//! Seeded random generators for property trials.
//!
//! Trial `i` of a run with seed `s` always draws from
//! `ChaCha8Rng::seed_from_u64(s + i)`, so individual trials are reproducible
//! and independent of execution order.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::functions::{StepFunction, StepPiece};

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

fn decreasing_values<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Non-increasing step function with 1–8 pieces, values in (0.1, 5) and
/// piece lengths in (0.05, 1).
pub fn random_nonincreasing_step<R: Rng>(rng: &mut R) -> StepFunction {
    let n = rng.gen_range(1..=8);
    let values = decreasing_values(rng, n);
    let mut knots = vec![0.0];
    for _ in 0..n {
        let last = *knots.last().unwrap();
        knots.push(last + rng.gen_range(0.05..1.0));
    }
    StepFunction::from_knots(&knots, &values).expect("generator produces valid pieces")
}

/// Non-increasing step function whose knots are multiples of 1/16 and whose
/// support lies in `[0, 4]`.
pub fn random_dyadic_step<R: Rng>(rng: &mut R) -> StepFunction {
    let n = rng.gen_range(1..=6);
    let values = decreasing_values(rng, n);
    let mut ends: Vec<usize> = sample(rng, 64, n).into_iter().map(|k| k + 1).collect();
    ends.sort_unstable();
    let mut knots = vec![0.0];
    knots.extend(ends.iter().map(|&k| k as f64 / 16.0));
    StepFunction::from_knots(&knots, &values).expect("generator produces valid pieces")
}

/// Arbitrary (not necessarily monotone, possibly gapped) step function with
/// `n` pieces.
pub fn random_step<R: Rng>(rng: &mut R, n: usize) -> StepFunction {
    let mut pieces = Vec::with_capacity(n);
    let mut t = 0.0;
    for _ in 0..n {
        if rng.gen_bool(0.2) {
            t += rng.gen_range(0.05..0.5);
        }
        let len = rng.gen_range(0.05..1.0);
        pieces.push(StepPiece {
            a: t,
            b: t + len,
            value: rng.gen_range(0.1..5.0),
        });
        t += len;
    }
    StepFunction::new(pieces).expect("generator produces valid pieces")
}

/// A function `h` with `int_0^t f* <= int_0^t h` for every `t`, obtained by
/// moving a slab of mass of `f*` to an earlier position. `h` itself is
/// generally not monotone.
pub fn mass_shift_majorant<R: Rng>(rng: &mut R, f: &StepFunction) -> StepFunction {
    let fstar = f.rearrange();
    let b = fstar.support_end();
    if b == 0.0 {
        return fstar;
    }
    let w = rng.gen_range(0.01..0.25) * b;
    let y = rng.gen_range(w..(b - w).max(w * 1.0001));
    let y = y.min(b - w);
    let x = rng.gen_range(0.0..=(y - w).max(0.0));
    // f* is non-increasing, so its minimum on (y, y + w) is the value just
    // before y + w.
    let floor = fstar
        .pieces()
        .iter()
        .filter(|p| p.a < y + w && p.b > y)
        .map(|p| p.value)
        .fold(f64::INFINITY, f64::min);
    let m = rng.gen_range(0.0..=1.0) * floor;

    let mut knots = fstar.knots();
    knots.extend([x, x + w, y, y + w]);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let pieces = knots
        .windows(2)
        .map(|k| {
            let mid = 0.5 * (k[0] + k[1]);
            let mut v = fstar.value_at(mid);
            if mid > x && mid < x + w {
                v += m;
            }
            if mid > y && mid < y + w {
                v = (v - m).max(0.0);
            }
            StepPiece { a: k[0], b: k[1], value: v }
        })
        .collect();
    StepFunction::new(pieces).expect("shifted function is valid")
}

/// Random `alpha` in `(0, 1)` for weight sweeps.
pub fn random_alpha<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.01..0.99)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{Function, RunningIntegral};

    #[test]
    fn deterministic() {
        let a = random_nonincreasing_step(&mut trial_rng(42, 3));
        let b = random_nonincreasing_step(&mut trial_rng(42, 3));
        assert_eq!(a, b);
        assert_ne!(a, random_nonincreasing_step(&mut trial_rng(42, 4)));
    }

    #[test]
    fn generators_respect_shape() {
        for i in 0..200 {
            let mut rng = trial_rng(7, i);
            assert!(random_nonincreasing_step(&mut rng).is_nonincreasing());
            let d = random_dyadic_step(&mut rng);
            assert!(d.is_nonincreasing() && d.support_end() <= 4.0);
            for p in d.pieces() {
                assert_eq!((p.b * 16.0).fract(), 0.0);
            }
            random_step(&mut rng, 20);
        }
    }

    #[test]
    fn shifted_mass_dominates_running_integral() {
        for i in 0..200 {
            let mut rng = trial_rng(11, i);
            let f = random_nonincreasing_step(&mut rng);
            let h = mass_shift_majorant(&mut rng, &f);
            assert!((h.total_mass() - f.total_mass()).abs() < 1e-12 * f.total_mass().max(1.0));
            let ff = RunningIntegral::new(&Function::Step(f.clone()));
            let hh = RunningIntegral::new(&Function::Step(h.clone()));
            for t in h.knots().into_iter().chain(f.knots()) {
                assert!(ff.eval(t) <= hh.eval(t) + 1e-12, "trial {i} at {t}");
            }
        }
    }
}
