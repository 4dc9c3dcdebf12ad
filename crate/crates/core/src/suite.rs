//! Registry of seeded property checks, run by `lorentz verify`.
//!
//! Every property draws its inputs from [`crate::corpus`] with the run seed,
//! so a report is a pure function of `(trials, seed)`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{mass_shift_majorant, random_dyadic_step, random_nonincreasing_step, random_step, trial_rng};
use crate::decomposition::{
    brute_force_feasible, epsilon_decomposition, matrix_shuffle, minkowski_check, triangle_check, ShuffleInstance,
};
use crate::duality::{dual_norm, dual_oracle};
use crate::functions::{
    chebyshev_points, maximal_function, pairing, precedes, Function, MonomialFunction, StepFunction, StepPiece,
    DEFAULT_SAMPLES,
};
use crate::level::{level_bracket, interval_holder_step, level_function, verify_level};
use crate::norms::{cross_index_check, holder_pairing, maximal_norm, step_norm, Exponents, SecondIndex};

/// First indices of the verification grid.
pub const P_GRID: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 8.0];

/// Second indices of the verification grid (`inf` included).
pub const S_GRID: [f64; 5] = [1.5, 2.0, 4.0, 16.0, f64::INFINITY];

/// Index pairs on which the uniform-grid decomposition reaches `epsilon =
/// 0.01` within the cell budget for every support in `[0, 4]`.
pub const DECOMPOSITION_GRID: [(f64, f64); 5] = [(1.25, 1.5), (1.5, 2.0), (2.0, 4.0), (3.0, 4.0), (8.0, 16.0)];

/// Cap on trials for the properties that build decomposition certificates.
pub const DECOMPOSITION_TRIALS: usize = 4;

/// All `(p, s)` grid points.
pub fn grid() -> Vec<Exponents> {
    P_GRID
        .iter()
        .flat_map(|&p| S_GRID.iter().map(move |&s| Exponents::new(p, s).expect("grid exponents are valid")))
        .collect()
}

/// Grid points with `p < s`.
pub fn quasi_grid() -> Vec<Exponents> {
    grid().into_iter().filter(Exponents::p_lt_s).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: 1000, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub violations: usize,
    /// First failing case, if any.
    pub detail: Option<String>,
}

pub struct Property {
    pub name: &'static str,
    pub module: &'static str,
    pub description: &'static str,
    run: fn(&SuiteConfig) -> Outcome,
}

impl Property {
    pub fn run(&self, cfg: &SuiteConfig) -> Outcome {
        (self.run)(cfg)
    }
}

/// Counts checks and records the first violation.
struct Tally {
    name: &'static str,
    checks: usize,
    violations: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checks: 0,
            violations: 0,
            detail: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    fn finish(self) -> Outcome {
        Outcome {
            name: self.name,
            passed: self.violations == 0,
            checks: self.checks,
            violations: self.violations,
            detail: self.detail,
        }
    }
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

fn pick_exponents(rng: &mut ChaCha8Rng, set: &[Exponents]) -> Exponents {
    *set.choose(rng).expect("non-empty exponent set")
}

fn shuffled(rng: &mut ChaCha8Rng, f: &StepFunction) -> StepFunction {
    let mut lens: Vec<(f64, f64)> = f.pieces().iter().map(|p| (p.b - p.a, p.value)).collect();
    lens.shuffle(rng);
    let mut t = 0.0;
    let pieces = lens
        .into_iter()
        .map(|(len, value)| {
            let piece = StepPiece { a: t, b: t + len, value };
            t += len;
            piece
        })
        .collect();
    StepFunction::new(pieces).expect("shuffled pieces are valid")
}

// --- functions ------------------------------------------------------------

fn rearrange_distribution(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("rearrange_distribution");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 20);
        let fs = f.rearrange();
        let scale = f.support_measure().max(1.0);
        for k in 0..100 {
            let level = 5.1 * k as f64 / 100.0;
            // brute force: total length of raw pieces above the level
            let oracle: f64 = f.pieces().iter().filter(|p| p.value > level).map(|p| p.b - p.a).sum();
            let got = fs.distribution(level);
            t.check((oracle - got).abs() <= 1e-12 * scale, || format!("trial {i}, level {level}: {oracle} vs {got}"));
        }
        t.check(fs.is_nonincreasing(), || format!("trial {i}: result not non-increasing"));
    }
    t.finish()
}

fn rearrange_idempotent(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("rearrange_idempotent");
    for i in 0..cfg.trials {
        let f = random_step(&mut trial_rng(cfg.seed, i as u64), 20);
        let once = f.rearrange();
        t.check(once.rearrange() == once, || format!("trial {i}"));
    }
    t.finish()
}

fn rearrange_power_mass(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("rearrange_power_mass");
    for i in 0..cfg.trials {
        let f = random_step(&mut trial_rng(cfg.seed, i as u64), 20);
        let fs = f.rearrange();
        for q in [1.0, 2.0, 3.0] {
            let (a, b) = (f.power_mass(q), fs.power_mass(q));
            t.check((a - b).abs() <= 1e-12 * a, || format!("trial {i}, q = {q}: {a} vs {b}"));
        }
    }
    t.finish()
}

fn maximal_dominates(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("maximal_dominates");
    for i in 0..cfg.trials {
        let f = random_nonincreasing_step(&mut trial_rng(cfg.seed, i as u64));
        let mf = maximal_function(&f, true).expect("generator output is non-increasing");
        let mut points: Vec<f64> = f.knots().into_iter().filter(|&x| x > 0.0).collect();
        for p in f.pieces() {
            points.extend(chebyshev_points(p.a, p.b, DEFAULT_SAMPLES));
        }
        for x in points {
            let (m, v) = (mf.value_at(x), f.value_at(x));
            t.check(m >= v * (1.0 - 1e-12), || format!("trial {i}, t = {x}: f** = {m} < f* = {v}"));
        }
    }
    t.finish()
}

fn precedence_order(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("precedence_order");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 5);
        let g = mass_shift_majorant(&mut rng, &f);
        let h = mass_shift_majorant(&mut rng, &g.rearrange());
        let (ff, gg, hh) = (Function::Step(f), Function::Step(g), Function::Step(h));
        let holds = |a: &Function, b: &Function| precedes(a, b, DEFAULT_SAMPLES).map(|r| r.holds).unwrap_or(false);
        t.check(holds(&ff, &ff), || format!("trial {i}: not reflexive"));
        if holds(&ff, &gg) && holds(&gg, &hh) {
            t.check(holds(&ff, &hh), || format!("trial {i}: not transitive"));
        }
        // Unrelated random triples: transitivity whenever the premises hold.
        let a = Function::Step(random_step(&mut rng, 5));
        let b = Function::Step(random_step(&mut rng, 5));
        let c = Function::Step(random_step(&mut rng, 5));
        if holds(&a, &b) && holds(&b, &c) {
            t.check(holds(&a, &c), || format!("trial {i}: random triple not transitive"));
        }
    }
    t.finish()
}

fn integral_additivity(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("integral_additivity");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = Function::Step(random_step(&mut rng, 10));
        let beta = rng.gen_range(-1.0..0.9);
        let m = Function::Monomial(
            MonomialFunction::monomial(0.0, rng.gen_range(0.5..5.0), rng.gen_range(0.1..3.0), beta)
                .expect("valid monomial"),
        );
        for g in [&f, &m] {
            let mut xs = [rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0)];
            xs.sort_by(f64::total_cmp);
            let [a, b, c] = xs;
            let whole = g.integral(a, c);
            let split = g.integral(a, b) + g.integral(b, c);
            t.check((whole - split).abs() <= 1e-13 * whole.abs().max(1.0), || {
                format!("trial {i}: {whole} vs {split}")
            });
        }
    }
    t.finish()
}

// --- norms ----------------------------------------------------------------

fn homogeneity(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("homogeneity");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 8);
        let e = pick_exponents(&mut rng, &all);
        let base = step_norm(&f, e.p, e.s);
        for lambda in [0.5, 2.0, 7.0] {
            let v = step_norm(&f.scale(lambda), e.p, e.s);
            t.check((v - lambda * base).abs() <= 1e-12 * lambda * base, || {
                format!("trial {i}, lambda {lambda}: {v} vs {}", lambda * base)
            });
        }
    }
    t.finish()
}

fn rearrangement_invariance(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("rearrangement_invariance");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 8);
        let e = pick_exponents(&mut rng, &all);
        let (a, b) = (step_norm(&f, e.p, e.s), step_norm(&f.rearrange(), e.p, e.s));
        t.check(a == b, || format!("trial {i}: {a} vs {b}"));
    }
    t.finish()
}

fn maximal_bracket(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("maximal_bracket");
    for (g, e) in grid().iter().enumerate() {
        for i in 0..cfg.trials {
            let f = random_nonincreasing_step(&mut trial_rng(cfg.seed, (g * cfg.trials + i) as u64));
            let norm = step_norm(&f, e.p, e.s);
            let star = maximal_norm(&f, e).expect("maximal norm of a step function").value;
            let low = e.p_conj.powf(e.s.recip()) * norm;
            let high = e.p_conj * norm;
            t.check(low <= star * (1.0 + 1e-7) && star <= high * (1.0 + 1e-7), || {
                format!("(p,s) = ({}, {}), trial {i}: {low} <= {star} <= {high}", e.p, e.s)
            });
        }
    }
    t.finish()
}

fn chebyshev_corollary(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("chebyshev_corollary");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let g0 = random_nonincreasing_step(&mut rng);
        let g = g0.dilate(1.0 / g0.support_end());
        let lhs = g.integral(0.0, 1.0);
        for k in 1..10 {
            let alpha = k as f64 / 10.0;
            let w = Function::Monomial(MonomialFunction::monomial(0.0, 1.0, 1.0, alpha).expect("valid weight"));
            let rhs = (1.0 - alpha) * pairing(&Function::Step(g.clone()), &w);
            t.check(lhs <= rhs + 1e-10, || format!("trial {i}, alpha {alpha}: {lhs} > {rhs}"));
        }
    }
    t.finish()
}

fn two_variable_inequality(_: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("two_variable_inequality");
    for e in grid() {
        for k in 0..=10_000 {
            let x = k as f64 / 10_000.0;
            let first = match e.s {
                SecondIndex::Finite(s) => (1.0 - x.powf(s / e.p)).powf(1.0 / s),
                SecondIndex::Infinite => 1.0,
            };
            let sc = e.s_conj.as_f64();
            let second = (1.0 - x.powf(sc / e.p_conj)).powf(1.0 / sc);
            let lhs = first * second;
            t.check(lhs <= 1.0 - x + 1e-12, || format!("(p,s) = ({}, {}), t = {x}: {lhs}", e.p, e.s));
        }
    }
    t.finish()
}

fn hardy_lemma(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("hardy_lemma");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f1 = random_nonincreasing_step(&mut rng);
        let f2 = mass_shift_majorant(&mut rng, &f1);
        let g = Function::Step(random_nonincreasing_step(&mut rng));
        let a = pairing(&Function::Step(f1), &g);
        let b = pairing(&Function::Step(f2), &g);
        t.check(a <= b + 1e-10, || format!("trial {i}: {a} > {b}"));
    }
    t.finish()
}

fn holder(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("holder");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = Function::Step(random_step(&mut rng, 8));
        let g = Function::Step(random_step(&mut rng, 8));
        let e = pick_exponents(&mut rng, &all);
        let (pair, bound) = holder_pairing(&f, &g, &e).expect("step norms are finite");
        t.check(pair <= bound + 1e-9, || format!("trial {i}: {pair} > {bound}"));
    }
    t.finish()
}

fn cross_index(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("cross_index");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = Function::Step(random_step(&mut rng, 8));
        let p = *P_GRID.choose(&mut rng).expect("non-empty");
        let mut pair = [*S_GRID.choose(&mut rng).expect("non-empty"), *S_GRID.choose(&mut rng).expect("non-empty")];
        pair.sort_by(f64::total_cmp);
        if pair[0] == pair[1] {
            continue;
        }
        let (er, es) = (Exponents::new(p, pair[0]).unwrap(), Exponents::new(p, pair[1]).unwrap());
        let (lhs, rhs) = cross_index_check(&f, &er, &es).expect("valid index pair");
        t.check(lhs <= rhs + 1e-9, || format!("trial {i}, p {p}, r {} s {}: {lhs} > {rhs}", pair[0], pair[1]));
    }
    t.finish()
}

fn norm_limit(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("norm_limit");
    for i in 0..cfg.trials {
        let f = random_nonincreasing_step(&mut trial_rng(cfg.seed, i as u64));
        let a = step_norm(&f, 2.0, SecondIndex::Finite(1024.0));
        let b = step_norm(&f, 2.0, SecondIndex::Infinite);
        t.check((a - b).abs() <= 0.02 * b, || format!("trial {i}: {a} vs {b}"));
    }
    t.finish()
}

// --- level ----------------------------------------------------------------

fn level_properties(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("level_properties");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let alpha = [0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75, 0.9][i % 7];
        let lr = level_function(&f, alpha).expect("valid input");
        let report = verify_level(&lr);
        t.check(report.all_pass(), || format!("trial {i}, alpha {alpha}: {report:?}"));
        let (m0, m1) = (f.total_mass(), lr.level.total_mass());
        t.check((m0 - m1).abs() <= 1e-12 * m0, || format!("trial {i}: mass {m0} vs {m1}"));
    }
    t.finish()
}

fn level_fixed_point(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("level_fixed_point");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let alpha = rng.gen_range(0.0..0.95);
        let lr = level_function(&f, alpha).expect("valid input");
        // Averaging f over the output intervals must reproduce them.
        let pieces = lr
            .intervals
            .iter()
            .map(|&(a, b)| StepPiece {
                a,
                b,
                value: f.integral(a, b) / (b - a),
            })
            .collect();
        let g = StepFunction::new(pieces).expect("valid averages");
        let again = level_function(&g, alpha).expect("averages of a level partition are non-increasing");
        let same = again.intervals == lr.intervals
            && again.slopes.iter().zip(&lr.slopes).all(|(a, b)| rel_close(*a, *b, 1e-12));
        t.check(same, || format!("trial {i}: {:?} vs {:?}", again.intervals, lr.intervals));
    }
    t.finish()
}

fn level_holder_step(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("level_holder_step");
    let finite: Vec<Exponents> = quasi_grid().into_iter().filter(|e| !e.s.is_infinite()).collect();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let e = pick_exponents(&mut rng, &finite);
        let lr = level_function(&f, e.alpha).expect("valid input");
        for (k, (lhs, rhs)) in interval_holder_step(&lr, e.p, e.s).expect("finite").into_iter().enumerate() {
            t.check(lhs <= rhs * (1.0 + 1e-10), || format!("trial {i}, interval {k}: {lhs} > {rhs}"));
        }
    }
    t.finish()
}

fn level_covariance(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("level_covariance");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let alpha = rng.gen_range(0.0..0.95);
        let base = level_function(&f, alpha).expect("valid input");
        let lambda = rng.gen_range(0.1..10.0);
        let scaled = level_function(&f.scale(lambda), alpha).expect("valid input");
        let ok = scaled.intervals == base.intervals
            && scaled.slopes.iter().zip(&base.slopes).all(|(a, b)| rel_close(*a, lambda * b, 1e-12));
        t.check(ok, || format!("trial {i}: scaling by {lambda}"));
        for c in [2.0, 1.0 / 3.0] {
            let dil = level_function(&f.dilate(c), alpha).expect("valid input");
            let ok = dil.intervals.len() == base.intervals.len()
                && dil.intervals.iter().zip(&base.intervals).all(|(x, y)| {
                    rel_close(x.0, c * y.0, 1e-12) && rel_close(x.1, c * y.1, 1e-12)
                })
                && dil
                    .slopes
                    .iter()
                    .zip(&base.slopes)
                    .all(|(a, b)| rel_close(*a, b * c.powf(alpha), 1e-12));
            t.check(ok, || format!("trial {i}: dilation by {c}"));
        }
    }
    t.finish()
}

fn level_bracket_property(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("level_bracket");
    for (g, e) in quasi_grid().iter().enumerate() {
        for i in 0..cfg.trials {
            let f = random_nonincreasing_step(&mut trial_rng(cfg.seed, (g * cfg.trials + i) as u64));
            let (low, mid, high) = level_bracket(&f, e).expect("valid input");
            t.check(low <= mid + 1e-9 && mid <= high + 1e-9, || {
                format!("(p,s) = ({}, {}), trial {i}: {low} {mid} {high}", e.p, e.s)
            });
        }
    }
    t.finish()
}

// --- duality --------------------------------------------------------------

fn dual_le_norm(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_le_norm");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 8);
        let e = pick_exponents(&mut rng, &all);
        let dual = dual_norm(&f, &e).expect("valid input").value;
        let norm = step_norm(&f, e.p, e.s);
        t.check(dual <= norm + 1e-12 * norm.max(1.0), || format!("trial {i}: {dual} > {norm}"));
        t.check(norm <= e.c_ps * dual + 1e-9, || format!("trial {i}: {norm} > c {dual}"));
    }
    for e in grid() {
        let chi = StepFunction::constant_on(0.0, 1.0, 1.0).expect("valid");
        let (norm, dual) = (step_norm(&chi, e.p, e.s), dual_norm(&chi, &e).expect("valid").value);
        if e.p_lt_s() {
            t.check((norm - e.c_ps * dual).abs() <= 1e-12, || format!("chi at ({}, {})", e.p, e.s));
        }
    }
    t.finish()
}

fn dual_witness(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_witness");
    let finite: Vec<Exponents> = grid().into_iter().filter(|e| !e.s.is_infinite()).collect();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 8);
        let e = pick_exponents(&mut rng, &finite);
        let r = dual_norm(&f, &e).expect("valid input");
        let Some(g) = r.witness else {
            t.check(false, || format!("trial {i}: no witness"));
            continue;
        };
        let d = e.conjugate();
        let gnorm = crate::norms::lorentz_norm(&g, &d).expect("witness is non-increasing").value;
        let pair = pairing(&Function::Step(f.rearrange()), &g);
        t.check((gnorm - 1.0).abs() <= 1e-12, || format!("trial {i}: ||g|| = {gnorm}"));
        t.check((pair - r.value).abs() <= 1e-9 * r.value.max(1.0), || {
            format!("trial {i}: pairing {pair} vs {}", r.value)
        });
    }
    t.finish()
}

fn dual_majorant(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_majorant");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let h = mass_shift_majorant(&mut rng, &f);
        let e = pick_exponents(&mut rng, &all);
        let dual = dual_norm(&f, &e).expect("valid input").value;
        let hn = step_norm(&h, e.p, e.s);
        t.check(dual <= hn + 1e-9, || format!("trial {i}: {dual} > {hn}"));
    }
    t.finish()
}

fn dual_rearrangement(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_rearrangement");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let g = shuffled(&mut rng, &f);
        let e = pick_exponents(&mut rng, &all);
        let (a, b) = (dual_norm(&f, &e).unwrap().value, dual_norm(&g, &e).unwrap().value);
        // shuffled knots are re-summed, so allow rounding
        t.check(rel_close(a, b, 1e-12), || format!("trial {i}: {a} vs {b}"));
    }
    t.finish()
}

fn dual_oracle_bound(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_oracle_bound");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_nonincreasing_step(&mut rng);
        let e = pick_exponents(&mut rng, &all);
        let dual = dual_norm(&f, &e).unwrap().value;
        let oracle = dual_oracle(&f, &e, 20, cfg.seed.wrapping_add(i as u64)).unwrap();
        t.check(oracle <= dual + 1e-9, || format!("trial {i}: oracle {oracle} > {dual}"));
        if !e.s.is_infinite() {
            t.check(oracle >= dual - 1e-9, || format!("trial {i}: oracle {oracle} misses witness {dual}"));
        }
    }
    t.finish()
}

fn dual_subadditivity(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("dual_subadditivity");
    let all = grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_step(&mut rng, 6);
        let g = random_step(&mut rng, 6);
        let e = pick_exponents(&mut rng, &all);
        let sum = dual_norm(&f.add(&g), &e).unwrap().value;
        let parts = dual_norm(&f, &e).unwrap().value + dual_norm(&g, &e).unwrap().value;
        t.check(sum <= parts + 1e-9, || format!("trial {i}: {sum} > {parts}"));
    }
    t.finish()
}

// --- decomposition --------------------------------------------------------

fn shuffle_lemma(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("shuffle_lemma");
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let inst = random_shuffle_instance(&mut rng, 6);
        let res = matrix_shuffle(&inst);
        t.check(res.satisfies(&inst), || format!("trial {i}: bound violated"));
        let perm_ok = res.perms.iter().zip(&inst.eta).all(|(perm, row)| {
            let mut seen = vec![false; row.len()];
            perm.iter().all(|&k| k < row.len() && !std::mem::replace(&mut seen[k], true))
        });
        t.check(perm_ok, || format!("trial {i}: not a row permutation"));
        if inst.rows() <= 4 && inst.columns() <= 4 && brute_force_feasible(&inst) {
            t.check(res.satisfies(&inst), || format!("trial {i}: brute force feasible, algorithm not"));
        }
    }
    t.finish()
}

/// Random instance with `N, nu <= max`, entries in `(0, 1]`, and
/// non-increasing `alphas` satisfying prefix domination.
pub fn random_shuffle_instance(rng: &mut ChaCha8Rng, max: usize) -> ShuffleInstance {
    let n = rng.gen_range(1..=max);
    let nu = rng.gen_range(1..=max);
    let eta: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..nu).map(|_| 1.0 - rng.gen_range(0.0..1.0)).collect())
        .collect();
    let mut betas = vec![0.0; nu];
    for row in &eta {
        for (b, x) in betas.iter_mut().zip(row) {
            *b += x;
        }
    }
    // Random non-increasing profile, scaled to the largest multiple that
    // keeps every prefix dominated.
    let mut alphas: Vec<f64> = (0..nu).map(|_| rng.gen_range(0.05..1.0)).collect();
    alphas.sort_by(|a, b| b.total_cmp(a));
    let (mut sa, mut sb, mut ratio) = (0.0, 0.0, f64::INFINITY);
    for k in 0..nu {
        sa += alphas[k];
        sb += betas[k];
        ratio = ratio.min(sb / sa);
    }
    let scale = ratio * (1.0 - rng.gen_range(0.0..0.5)) * (1.0 - 1e-12);
    let alphas = alphas.iter().map(|a| a * scale).collect();
    ShuffleInstance::new(alphas, eta).expect("construction satisfies prefix domination")
}

fn decomposition_bracket(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("decomposition_bracket");
    for (g, &(p, s)) in DECOMPOSITION_GRID.iter().enumerate() {
        let e = Exponents::new(p, s).unwrap();
        for i in 0..cfg.trials.min(DECOMPOSITION_TRIALS) {
            let f = random_dyadic_step(&mut trial_rng(cfg.seed, (g * 1000 + i) as u64));
            for eps in [0.1, 0.01] {
                match epsilon_decomposition(&f, &e, eps) {
                    Ok(c) => {
                        t.check(c.lower <= c.upper && c.upper <= c.lower + 4.0 * eps + 1e-9, || {
                            format!("({p}, {s}), trial {i}, eps {eps}: [{}, {}]", c.lower, c.upper)
                        });
                        t.check(c.covers(), || format!("({p}, {s}), trial {i}, eps {eps}: cover"));
                        t.check(c.equal_norm_deviation(&e) <= 1e-12, || {
                            format!("({p}, {s}), trial {i}, eps {eps}: unequal part norms")
                        });
                    }
                    Err(err) => t.check(false, || format!("({p}, {s}), trial {i}, eps {eps}: {err}")),
                }
            }
        }
    }
    t.finish()
}

fn decomposition_monotone(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("decomposition_monotone");
    let e = Exponents::new(2.0, 4.0).unwrap();
    let eps = 0.1;
    for i in 0..cfg.trials.min(DECOMPOSITION_TRIALS) {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_dyadic_step(&mut rng);
        let g = f.scale(rng.gen_range(0.1..1.0));
        let (cf, cg) = (epsilon_decomposition(&f, &e, eps), epsilon_decomposition(&g, &e, eps));
        match (cf, cg) {
            (Ok(cf), Ok(cg)) => t.check(cg.upper <= cf.upper + 4.0 * eps, || {
                format!("trial {i}: {} > {}", cg.upper, cf.upper)
            }),
            (a, b) => t.check(false, || format!("trial {i}: {:?} {:?}", a.err(), b.err())),
        }
    }
    t.finish()
}

fn decomposition_rearrangement(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("decomposition_rearrangement");
    let e = Exponents::new(2.0, 4.0).unwrap();
    let eps = 0.1;
    for i in 0..cfg.trials.min(DECOMPOSITION_TRIALS) {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let f = random_dyadic_step(&mut rng);
        let g = shuffled(&mut rng, &f).rearrange();
        match (epsilon_decomposition(&f, &e, eps), epsilon_decomposition(&g, &e, eps)) {
            (Ok(a), Ok(b)) => {
                t.check(a.lower == b.lower, || format!("trial {i}: lower {} vs {}", a.lower, b.lower));
                t.check((a.upper - b.upper).abs() <= 8.0 * eps, || format!("trial {i}: upper"));
            }
            (a, b) => t.check(false, || format!("trial {i}: {:?} {:?}", a.err(), b.err())),
        }
    }
    t.finish()
}

fn triangle(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("triangle");
    let q = quasi_grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let fs: Vec<StepFunction> = (0..5).map(|_| random_step(&mut rng, 5)).collect();
        let e = pick_exponents(&mut rng, &q);
        let (lhs, rhs, _) = triangle_check(&fs, &e).unwrap();
        t.check(lhs <= rhs + 1e-9, || format!("trial {i}: {lhs} > {rhs}"));
    }
    t.finish()
}

fn minkowski(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("minkowski");
    let q = quasi_grid();
    for i in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let rows: Vec<StepFunction> = (0..4).map(|_| random_step(&mut rng, 5)).collect();
        let weights: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..3.0)).collect();
        let e = pick_exponents(&mut rng, &q);
        let (lhs, rhs) = minkowski_check(&rows, &weights, &e).unwrap();
        t.check(lhs <= rhs + 1e-9, || format!("trial {i}: {lhs} > {rhs}"));
    }
    t.finish()
}

// --- constants and I/O ----------------------------------------------------

fn constants_row(_: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("constants_row");
    for e in grid() {
        t.check((e.char_norm() - e.c_ps * e.char_dual()).abs() <= 1e-12, || format!("({}, {})", e.p, e.s));
        t.check(e.c_ps >= 1.0 - 1e-15 && ((e.c_ps - 1.0).abs() < 1e-15) == (e.s.as_f64() == e.p), || {
            format!("c_ps at ({}, {}) = {}", e.p, e.s, e.c_ps)
        });
    }
    t.finish()
}

fn char_extremal(_: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("char_extremal");
    let chi = StepFunction::constant_on(0.0, 1.0, 1.0).expect("valid");
    for e in quasi_grid() {
        let norm = step_norm(&chi, e.p, e.s);
        let dual = dual_norm(&chi, &e).expect("valid").value;
        t.check((norm - e.char_norm()).abs() <= 1e-12, || format!("norm at ({}, {})", e.p, e.s));
        t.check((dual - e.char_dual()).abs() <= 1e-12, || format!("dual at ({}, {}): {dual}", e.p, e.s));
    }
    t.finish()
}

fn json_round_trip(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::new("json_round_trip");
    for i in 0..cfg.trials {
        let f = Function::Step(random_step(&mut trial_rng(cfg.seed, i as u64), 8));
        let text = serde_json::to_string(&f).expect("serializable");
        let back: Function = serde_json::from_str(&text).expect("re-loadable");
        t.check(back == f, || format!("trial {i}"));
    }
    t.finish()
}

macro_rules! prop {
    ($name:expr, $module:expr, $desc:expr, $f:expr) => {
        Property {
            name: $name,
            module: $module,
            description: $desc,
            run: $f,
        }
    };
}

/// Every registered property, in report order.
pub fn registry() -> Vec<Property> {
    vec![
        prop!("rearrange_distribution", "functions", "f* has the distribution function of f", rearrange_distribution),
        prop!("rearrange_idempotent", "functions", "(f*)* = f* exactly", rearrange_idempotent),
        prop!("rearrange_power_mass", "functions", "int f^q = int (f*)^q for q = 1, 2, 3", rearrange_power_mass),
        prop!("maximal_dominates", "functions", "f** >= f* at knots and samples", maximal_dominates),
        prop!("precedence_order", "functions", "precedence is reflexive and transitive", precedence_order),
        prop!("integral_additivity", "functions", "integrals are additive over adjacent intervals", integral_additivity),
        prop!("homogeneity", "norms", "||c f|| = c ||f||", homogeneity),
        prop!("rearrangement_invariance", "norms", "||f|| = ||f*||", rearrangement_invariance),
        prop!("maximal_bracket", "norms", "(p')^{1/s} ||f|| <= ||f||* <= p' ||f||", maximal_bracket),
        prop!("chebyshev_corollary", "norms", "int_0^1 g <= (1 - alpha) int_0^1 g t^{-alpha}", chebyshev_corollary),
        prop!("two_variable_inequality", "norms", "(1 - t^{s/p})^{1/s} (1 - t^{s'/p'})^{1/s'} <= 1 - t", two_variable_inequality),
        prop!("hardy_lemma", "norms", "int f1 g <= int f2 g when f1 is dominated in running mass", hardy_lemma),
        prop!("holder", "norms", "int f g <= ||f||_{p,s} ||g||_{p',s'}", holder),
        prop!("cross_index", "norms", "(s/p)^{1/s} ||f||_{p,s} <= (r/p)^{1/r} ||f||_{p,r}", cross_index),
        prop!("norm_limit", "norms", "||f||_{2,1024} within 2% of ||f||_{2,inf}", norm_limit),
        prop!("level_properties", "level", "level function structure, mass and majorization", level_properties),
        prop!("level_fixed_point", "level", "re-running on the output intervals is a fixed point", level_fixed_point),
        prop!("level_holder_step", "level", "per-interval power integrals decrease", level_holder_step),
        prop!("level_covariance", "level", "scaling and dilation covariance", level_covariance),
        prop!("level_bracket", "level", "||f°|| <= ||f|| <= c_{p,s} ||f°||", level_bracket_property),
        prop!("dual_le_norm", "duality", "||f||' <= ||f|| <= c_{p,s} ||f||'", dual_le_norm),
        prop!("dual_witness", "duality", "witness has unit dual norm and attains the value", dual_witness),
        prop!("dual_majorant", "duality", "||f||' <= ||h|| whenever f precedes h", dual_majorant),
        prop!("dual_rearrangement", "duality", "dual norm is invariant under reordering", dual_rearrangement),
        prop!("dual_oracle_bound", "duality", "random admissible g never beat the dual norm", dual_oracle_bound),
        prop!("dual_subadditivity", "duality", "||f + g||' <= ||f||' + ||g||'", dual_subadditivity),
        prop!("shuffle_lemma", "decomposition", "permutation lemma bound and brute-force agreement", shuffle_lemma),
        prop!("decomposition_bracket", "decomposition", "lower <= upper <= lower + 4 eps, cover, equal norms", decomposition_bracket),
        prop!("decomposition_monotone", "decomposition", "certificates respect g <= f", decomposition_monotone),
        prop!("decomposition_rearrangement", "decomposition", "certificates of f and a reordering agree", decomposition_rearrangement),
        prop!("triangle", "decomposition", "||sum f_k|| <= c_{p,s} sum ||f_k||", triangle),
        prop!("minkowski", "decomposition", "||sum w f|| <= c_{p,s} sum w ||f||", minkowski),
        prop!("constants_row", "cli", "char_norm = c_{p,s} char_dual on the grid", constants_row),
        prop!("char_extremal", "cli", "chi_(0,1) norm and dual norm closed forms", char_extremal),
        prop!("json_round_trip", "cli", "function JSON re-loads to the same pieces", json_round_trip),
    ]
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<Outcome> {
    registry().iter().map(|p| p.run(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<&str> = registry().iter().map(|p| p.name).collect();
        let n = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn small_run_passes() {
        let cfg = SuiteConfig { trials: 3, seed: 7 };
        for outcome in run_all(&cfg) {
            assert!(outcome.passed, "{outcome:?}");
        }
    }

    #[test]
    fn deterministic() {
        let cfg = SuiteConfig { trials: 2, seed: 42 };
        let reg = registry();
        let cheap = reg.iter().find(|p| p.name == "holder").unwrap();
        assert_eq!(cheap.run(&cfg), cheap.run(&cfg));
    }
}
