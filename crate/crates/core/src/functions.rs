//! Piecewise functions on the half-line.
//!
//! Two concrete classes are supported: [`StepFunction`] (piecewise constant)
//! and [`MonomialFunction`] (pieces `c * t^(-beta)`). Both are nonnegative,
//! have bounded support and are kept in canonical form: pieces sorted,
//! pairwise disjoint, zero pieces dropped and touching pieces with identical
//! data merged. Everything downstream (norms, level functions, duality) is
//! computed in closed form on these piece lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing piece values for equality.
pub const VALUE_TOL: f64 = 1e-12;

/// Exponents closer than this to 1 use the logarithmic antiderivative.
pub const LOG_BRANCH_TOL: f64 = 1e-12;

/// `int_a^b t^(-beta) dt` for `0 <= a <= b`.
///
/// Returns `+inf` when the integral diverges at the origin.
pub fn power_integral(beta: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if beta == 0.0 {
        return b - a;
    }
    let gamma = 1.0 - beta;
    if gamma.abs() < LOG_BRANCH_TOL {
        if a == 0.0 {
            return f64::INFINITY;
        }
        return (b / a).ln();
    }
    if a == 0.0 {
        if gamma < 0.0 {
            return f64::INFINITY;
        }
        return b.powf(gamma) / gamma;
    }
    // b^g (1 - (a/b)^g) / g, written with expm1 to keep relative accuracy on
    // thin pieces.
    -b.powf(gamma) * (gamma * (a / b).ln()).exp_m1() / gamma
}

fn check_interval(index: usize, a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidPiece {
            index,
            reason: "endpoints must be finite".into(),
        });
    }
    if a < 0.0 {
        return Err(Error::InvalidPiece {
            index,
            reason: format!("left endpoint {a} is negative"),
        });
    }
    if b <= a {
        return Err(Error::InvalidPiece {
            index,
            reason: format!("empty interval ({a}, {b})"),
        });
    }
    Ok(())
}

fn sort_and_check_disjoint<P, F>(pieces: &mut [(usize, P)], bounds: F) -> Result<()>
where
    F: Fn(&P) -> (f64, f64),
{
    pieces.sort_by(|x, y| bounds(&x.1).0.total_cmp(&bounds(&y.1).0));
    for w in pieces.windows(2) {
        if bounds(&w[0].1).1 > bounds(&w[1].1).0 {
            return Err(Error::Overlap {
                first: w[0].0,
                second: w[1].0,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Step functions
// ---------------------------------------------------------------------------

/// `value` on the open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPiece {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawStep {
    pieces: Vec<StepPiece>,
}

/// Nonnegative piecewise-constant function with bounded support.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct StepFunction {
    pieces: Vec<StepPiece>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        StepFunction::new(raw.pieces)
    }
}

impl From<StepFunction> for RawStep {
    fn from(f: StepFunction) -> Self {
        RawStep { pieces: f.pieces }
    }
}

impl StepFunction {
    /// Validates and canonicalizes a list of pieces.
    pub fn new(pieces: Vec<StepPiece>) -> Result<Self> {
        for (i, p) in pieces.iter().enumerate() {
            check_interval(i, p.a, p.b)?;
            if !p.value.is_finite() || p.value < 0.0 {
                return Err(Error::InvalidPiece {
                    index: i,
                    reason: format!("value {} must be finite and nonnegative", p.value),
                });
            }
        }
        let mut indexed: Vec<(usize, StepPiece)> = pieces.into_iter().enumerate().collect();
        sort_and_check_disjoint(&mut indexed, |p| (p.a, p.b))?;

        let mut out: Vec<StepPiece> = Vec::with_capacity(indexed.len());
        for (_, p) in indexed {
            if p.value == 0.0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.b == p.a && last.value == p.value => last.b = p.b,
                _ => out.push(p),
            }
        }
        Ok(StepFunction { pieces: out })
    }

    pub fn zero() -> Self {
        StepFunction { pieces: Vec::new() }
    }

    /// `value * chi_(a,b)`.
    pub fn constant_on(a: f64, b: f64, value: f64) -> Result<Self> {
        Self::new(vec![StepPiece { a, b, value }])
    }

    /// Builds a function from consecutive breakpoints `knots[i] < knots[i+1]`
    /// carrying `values[i]`.
    pub fn from_knots(knots: &[f64], values: &[f64]) -> Result<Self> {
        if knots.len() != values.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} knots for {} values",
                knots.len(),
                values.len()
            )));
        }
        let pieces = values
            .iter()
            .enumerate()
            .map(|(i, &value)| StepPiece {
                a: knots[i],
                b: knots[i + 1],
                value,
            })
            .collect();
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[StepPiece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Right end of the support (0 for the zero function).
    pub fn support_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.b)
    }

    /// Lebesgue measure of the support.
    pub fn support_measure(&self) -> f64 {
        self.pieces.iter().map(|p| p.b - p.a).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.pieces.iter().map(|p| p.value).fold(0.0, f64::max)
    }

    /// Value at `t`, using the convention `[a, b)` for each piece.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.pieces.partition_point(|p| p.b <= t);
        match self.pieces.get(idx) {
            Some(p) if p.a <= t => p.value,
            _ => 0.0,
        }
    }

    /// `int_a^b f`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.pieces
            .iter()
            .map(|p| {
                let lo = p.a.max(a);
                let hi = p.b.min(b);
                if hi > lo {
                    p.value * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.value * (p.b - p.a)).sum()
    }

    /// `int f^q`.
    pub fn power_mass(&self, q: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.value.powf(q) * (p.b - p.a))
            .sum()
    }

    /// Measure of `{f > level}`.
    pub fn distribution(&self, level: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.value > level)
            .map(|p| p.b - p.a)
            .sum()
    }

    /// All breakpoints, including 0, sorted and deduplicated.
    pub fn knots(&self) -> Vec<f64> {
        let mut k = vec![0.0];
        for p in &self.pieces {
            k.push(p.a);
            k.push(p.b);
        }
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Decreasing rearrangement: pieces sorted by value, lengths concatenated
    /// from the origin.
    pub fn rearrange(&self) -> StepFunction {
        let mut sorted: Vec<&StepPiece> = self.pieces.iter().collect();
        sorted.sort_by(|x, y| y.value.total_cmp(&x.value));
        let mut t = 0.0;
        let mut out: Vec<StepPiece> = Vec::with_capacity(sorted.len());
        for p in sorted {
            let len = p.b - p.a;
            match out.last_mut() {
                Some(last) if last.value == p.value => {
                    last.b += len;
                    t = last.b;
                }
                _ => {
                    out.push(StepPiece {
                        a: t,
                        b: t + len,
                        value: p.value,
                    });
                    t += len;
                }
            }
        }
        StepFunction { pieces: out }
    }

    /// Whether `f` is non-increasing on the half-line (support must start at
    /// the origin and be contiguous).
    pub fn is_nonincreasing(&self) -> bool {
        let Some(first) = self.pieces.first() else {
            return true;
        };
        if first.a != 0.0 {
            return false;
        }
        self.pieces
            .windows(2)
            .all(|w| w[0].b == w[1].a && w[0].value >= w[1].value)
    }

    pub fn require_nonincreasing(&self) -> Result<()> {
        if self.is_nonincreasing() {
            Ok(())
        } else {
            Err(Error::NotNonIncreasing(
                "step function must start at 0, be contiguous and have decreasing values".into(),
            ))
        }
    }

    pub fn scale(&self, factor: f64) -> StepFunction {
        assert!(factor >= 0.0 && factor.is_finite(), "scale factor must be nonnegative");
        if factor == 0.0 {
            return StepFunction::zero();
        }
        StepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| StepPiece {
                    value: p.value * factor,
                    ..*p
                })
                .collect(),
        }
    }

    /// `t -> f(t / c)`.
    pub fn dilate(&self, c: f64) -> StepFunction {
        assert!(c > 0.0 && c.is_finite(), "dilation factor must be positive");
        StepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| StepPiece {
                    a: p.a * c,
                    b: p.b * c,
                    value: p.value,
                })
                .collect(),
        }
    }

    /// Common refinement of the breakpoints of both functions, with the pair
    /// of values on every cell.
    fn overlay(&self, other: &StepFunction) -> Vec<(f64, f64, f64, f64)> {
        let mut knots = self.knots();
        knots.extend(other.knots());
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        knots
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (w[0], w[1], self.value_at(mid), other.value_at(mid))
            })
            .collect()
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        let pieces = self
            .overlay(other)
            .into_iter()
            .map(|(a, b, u, v)| StepPiece { a, b, value: u + v })
            .collect();
        StepFunction::new(pieces).expect("sum of valid step functions is valid")
    }

    /// Sum of many step functions, using a single overlay.
    pub fn sum<'a, I>(parts: I) -> StepFunction
    where
        I: IntoIterator<Item = &'a StepFunction>,
    {
        let parts: Vec<&StepFunction> = parts.into_iter().collect();
        let mut knots: Vec<f64> = parts.iter().flat_map(|f| f.knots()).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let pieces = knots
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                StepPiece {
                    a: w[0],
                    b: w[1],
                    value: parts.iter().map(|f| f.value_at(mid)).sum(),
                }
            })
            .collect();
        StepFunction::new(pieces).expect("sum of valid step functions is valid")
    }

    /// `|f - g|`.
    pub fn abs_diff(&self, other: &StepFunction) -> StepFunction {
        let pieces = self
            .overlay(other)
            .into_iter()
            .map(|(a, b, u, v)| StepPiece {
                a,
                b,
                value: (u - v).abs(),
            })
            .collect();
        StepFunction::new(pieces).expect("difference of valid step functions is valid")
    }

    /// Whether `f <= g` everywhere.
    pub fn dominated_by(&self, other: &StepFunction) -> bool {
        self.overlay(other).into_iter().all(|(_, _, u, v)| u <= v)
    }

    /// Piece-list equality with value tolerance [`VALUE_TOL`] (relative to
    /// max(1, |value|)).
    pub fn approx_eq(&self, other: &StepFunction, tol: f64) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(p, q)| close(p.a, q.a) && close(p.b, q.b) && close(p.value, q.value))
    }

    pub fn to_monomial(&self) -> MonomialFunction {
        MonomialFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| MonomialPiece {
                    a: p.a,
                    b: p.b,
                    coeff: p.value,
                    beta: 0.0,
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Monomial functions
// ---------------------------------------------------------------------------

/// `coeff * t^(-beta)` on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialPiece {
    pub a: f64,
    pub b: f64,
    pub coeff: f64,
    pub beta: f64,
}

impl MonomialPiece {
    pub fn value_at(&self, t: f64) -> f64 {
        if self.beta == 0.0 {
            self.coeff
        } else {
            self.coeff * t.powf(-self.beta)
        }
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.a);
        let hi = hi.min(self.b);
        if hi <= lo {
            return 0.0;
        }
        self.coeff * power_integral(self.beta, lo, hi)
    }

    pub fn mass(&self) -> f64 {
        self.coeff * power_integral(self.beta, self.a, self.b)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawMonomial {
    pieces: Vec<MonomialPiece>,
}

/// Finitely many pieces `coeff * t^(-beta)` on disjoint intervals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawMonomial", into = "RawMonomial")]
pub struct MonomialFunction {
    pieces: Vec<MonomialPiece>,
}

impl TryFrom<RawMonomial> for MonomialFunction {
    type Error = Error;

    fn try_from(raw: RawMonomial) -> Result<Self> {
        MonomialFunction::new(raw.pieces)
    }
}

impl From<MonomialFunction> for RawMonomial {
    fn from(f: MonomialFunction) -> Self {
        RawMonomial { pieces: f.pieces }
    }
}

impl MonomialFunction {
    pub fn new(pieces: Vec<MonomialPiece>) -> Result<Self> {
        for (i, p) in pieces.iter().enumerate() {
            check_interval(i, p.a, p.b)?;
            if !p.coeff.is_finite() || p.coeff < 0.0 {
                return Err(Error::InvalidPiece {
                    index: i,
                    reason: format!("coefficient {} must be finite and nonnegative", p.coeff),
                });
            }
            if !p.beta.is_finite() {
                return Err(Error::InvalidPiece {
                    index: i,
                    reason: "exponent must be finite".into(),
                });
            }
            if p.a == 0.0 && p.beta >= 1.0 && p.coeff > 0.0 {
                return Err(Error::InvalidPiece {
                    index: i,
                    reason: format!("exponent {} >= 1 is not integrable at the origin", p.beta),
                });
            }
        }
        let mut indexed: Vec<(usize, MonomialPiece)> = pieces.into_iter().enumerate().collect();
        sort_and_check_disjoint(&mut indexed, |p| (p.a, p.b))?;

        let mut out: Vec<MonomialPiece> = Vec::with_capacity(indexed.len());
        for (_, p) in indexed {
            if p.coeff == 0.0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.b == p.a && last.coeff == p.coeff && last.beta == p.beta => {
                    last.b = p.b
                }
                _ => out.push(p),
            }
        }
        Ok(MonomialFunction { pieces: out })
    }

    pub fn zero() -> Self {
        MonomialFunction { pieces: Vec::new() }
    }

    /// `coeff * t^(-beta)` on `(a, b)`.
    pub fn monomial(a: f64, b: f64, coeff: f64, beta: f64) -> Result<Self> {
        Self::new(vec![MonomialPiece { a, b, coeff, beta }])
    }

    pub fn pieces(&self) -> &[MonomialPiece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.b)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.pieces.partition_point(|p| p.b <= t);
        match self.pieces.get(idx) {
            Some(p) if p.a <= t && t > 0.0 => p.value_at(t),
            _ => 0.0,
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.pieces.iter().map(|p| p.integral(a, b)).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(MonomialPiece::mass).sum()
    }

    pub fn knots(&self) -> Vec<f64> {
        let mut k = vec![0.0];
        for p in &self.pieces {
            k.push(p.a);
            k.push(p.b);
        }
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Non-increasing on the half-line: contiguous from 0, every piece
    /// non-increasing, and no upward jump at the joints.
    pub fn is_nonincreasing(&self) -> bool {
        let Some(first) = self.pieces.first() else {
            return true;
        };
        if first.a != 0.0 {
            return false;
        }
        if self.pieces.iter().any(|p| p.beta < 0.0) {
            return false;
        }
        self.pieces.windows(2).all(|w| {
            let left = w[0].value_at(w[0].b);
            let right = w[1].value_at(w[1].a);
            w[0].b == w[1].a && right <= left * (1.0 + VALUE_TOL)
        })
    }

    pub fn require_nonincreasing(&self) -> Result<()> {
        if self.is_nonincreasing() {
            Ok(())
        } else {
            Err(Error::NotNonIncreasing(
                "monomial function must start at 0, be contiguous and non-increasing".into(),
            ))
        }
    }

    pub fn scale(&self, factor: f64) -> MonomialFunction {
        assert!(factor >= 0.0 && factor.is_finite(), "scale factor must be nonnegative");
        if factor == 0.0 {
            return MonomialFunction::zero();
        }
        MonomialFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| MonomialPiece {
                    coeff: p.coeff * factor,
                    ..*p
                })
                .collect(),
        }
    }

    /// Mass-preserving cell averages on `cells` equal cells spanning
    /// `[first a, support end]`.
    pub fn discretize(&self, cells: usize) -> Result<StepFunction> {
        if cells == 0 {
            return Err(Error::InvalidArgument("cells must be at least 1".into()));
        }
        let (Some(first), Some(last)) = (self.pieces.first(), self.pieces.last()) else {
            return Ok(StepFunction::zero());
        };
        let lo = first.a;
        let hi = last.b;
        let width = (hi - lo) / cells as f64;
        let mut pieces = Vec::with_capacity(cells);
        for i in 0..cells {
            let a = lo + width * i as f64;
            let b = if i + 1 == cells { hi } else { lo + width * (i + 1) as f64 };
            pieces.push(StepPiece {
                a,
                b,
                value: self.integral(a, b) / (b - a),
            });
        }
        StepFunction::new(pieces)
    }
}

// ---------------------------------------------------------------------------
// Either kind
// ---------------------------------------------------------------------------

/// A function in either representation; this is the shared JSON format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Function {
    Step(StepFunction),
    Monomial(MonomialFunction),
}

impl From<StepFunction> for Function {
    fn from(f: StepFunction) -> Self {
        Function::Step(f)
    }
}

impl From<MonomialFunction> for Function {
    fn from(f: MonomialFunction) -> Self {
        Function::Monomial(f)
    }
}

impl Function {
    /// Pieces in monomial form (steps have `beta = 0`).
    pub fn monomial_pieces(&self) -> Vec<MonomialPiece> {
        match self {
            Function::Step(f) => f.to_monomial().pieces,
            Function::Monomial(f) => f.pieces.clone(),
        }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        match self {
            Function::Step(f) => f.value_at(t),
            Function::Monomial(f) => f.value_at(t),
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Function::Step(f) => f.integral(a, b),
            Function::Monomial(f) => f.integral(a, b),
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Function::Step(f) => f.total_mass(),
            Function::Monomial(f) => f.total_mass(),
        }
    }

    pub fn knots(&self) -> Vec<f64> {
        match self {
            Function::Step(f) => f.knots(),
            Function::Monomial(f) => f.knots(),
        }
    }

    pub fn is_step(&self) -> bool {
        matches!(self, Function::Step(_))
    }

    /// Non-increasing version: steps are rearranged, monomials must already be
    /// non-increasing.
    pub fn decreasing(&self) -> Result<Function> {
        match self {
            Function::Step(f) => Ok(Function::Step(f.rearrange())),
            Function::Monomial(f) => {
                f.require_nonincreasing()?;
                Ok(Function::Monomial(f.clone()))
            }
        }
    }
}

/// `int f g` for two piecewise functions, in closed form per overlapping pair
/// of pieces. Returns `+inf` if the product is not integrable at the origin.
pub fn pairing(f: &Function, g: &Function) -> f64 {
    let fp = f.monomial_pieces();
    let gp = g.monomial_pieces();
    let mut total = 0.0;
    let mut j = 0;
    for p in &fp {
        while j < gp.len() && gp[j].b <= p.a {
            j += 1;
        }
        let mut k = j;
        while k < gp.len() && gp[k].a < p.b {
            let q = &gp[k];
            let lo = p.a.max(q.a);
            let hi = p.b.min(q.b);
            if hi > lo {
                total += p.coeff * q.coeff * power_integral(p.beta + q.beta, lo, hi);
            }
            k += 1;
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Running integral and maximal function
// ---------------------------------------------------------------------------

/// `F(t) = int_0^t f` in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningIntegral {
    /// `(t, F(t))` at every breakpoint, starting with `(0, 0)`.
    pub knots: Vec<(f64, f64)>,
    segments: Vec<(MonomialPiece, f64)>,
}

impl RunningIntegral {
    pub fn new(f: &Function) -> Self {
        let mut knots = vec![(0.0, 0.0)];
        let mut segments = Vec::new();
        let mut acc = 0.0;
        for p in f.monomial_pieces() {
            if knots.last().is_none_or(|&(t, _)| t < p.a) {
                knots.push((p.a, acc));
            }
            segments.push((p, acc));
            acc += p.mass();
            knots.push((p.b, acc));
        }
        RunningIntegral { knots, segments }
    }

    pub fn total(&self) -> f64 {
        self.knots.last().map_or(0.0, |k| k.1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let idx = self.segments.partition_point(|(p, _)| p.b <= t);
        match self.segments.get(idx) {
            Some((p, start)) if p.a < t => start + p.integral(p.a, t),
            Some((_, start)) => *start,
            None => self.total(),
        }
    }
}

/// `A + B / t` on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalPiece {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "A")]
    pub constant: f64,
    #[serde(rename = "B")]
    pub inverse: f64,
}

impl MaximalPiece {
    pub fn value_at(&self, t: f64) -> f64 {
        self.constant + self.inverse / t
    }
}

/// `f**(t) = (1/t) int_0^t f*`; the last piece extends to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalFunction {
    pub pieces: Vec<MaximalPiece>,
}

impl MaximalFunction {
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.pieces.first().map_or(0.0, |p| p.constant);
        }
        let idx = self.pieces.partition_point(|p| p.b <= t);
        match self.pieces.get(idx) {
            Some(p) => p.value_at(t),
            None => 0.0,
        }
    }
}

/// Exact `f**` of a step function. With `require_nonincreasing` set the input
/// must already be non-increasing, otherwise it is rearranged first.
pub fn maximal_function(f: &StepFunction, require_nonincreasing: bool) -> Result<MaximalFunction> {
    let fstar = if require_nonincreasing {
        f.require_nonincreasing()?;
        f.clone()
    } else {
        f.rearrange()
    };
    let mut pieces = Vec::with_capacity(fstar.pieces().len() + 1);
    let mut mass = 0.0;
    for p in fstar.pieces() {
        pieces.push(MaximalPiece {
            a: p.a,
            b: p.b,
            constant: p.value,
            inverse: mass - p.value * p.a,
        });
        mass += p.value * (p.b - p.a);
    }
    if mass > 0.0 {
        pieces.push(MaximalPiece {
            a: fstar.support_end(),
            b: f64::INFINITY,
            constant: 0.0,
            inverse: mass,
        });
    }
    Ok(MaximalFunction { pieces })
}

// ---------------------------------------------------------------------------
// Hardy-Littlewood-Polya precedence
// ---------------------------------------------------------------------------

/// Outcome of a precedence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precedence {
    pub holds: bool,
    /// Set when a monomial operand forced interior sampling; step-step
    /// comparisons are exact at the knots.
    pub sampled: bool,
}

/// Default number of interior samples per monomial piece.
pub const DEFAULT_SAMPLES: usize = 64;

/// `n` Chebyshev points in the open interval `(a, b)`.
pub fn chebyshev_points(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..n).map(move |i| {
        let theta = std::f64::consts::PI * (2 * i + 1) as f64 / (2 * n) as f64;
        mid + half * theta.cos()
    })
}

/// `f < g` in the Hardy-Littlewood-Polya sense: `int_0^t f* <= int_0^t g*`
/// for all `t`.
pub fn precedes(f: &Function, g: &Function, samples_per_piece: usize) -> Result<Precedence> {
    let f = f.decreasing()?;
    let g = g.decreasing()?;
    let sampled = !(f.is_step() && g.is_step());
    let ff = RunningIntegral::new(&f);
    let gg = RunningIntegral::new(&g);

    let mut points: Vec<f64> = f.knots();
    points.extend(g.knots());
    if sampled {
        for h in [&f, &g] {
            for p in h.monomial_pieces() {
                points.extend(chebyshev_points(p.a, p.b, samples_per_piece));
            }
        }
    }
    let holds = points.into_iter().all(|t| {
        let lhs = ff.eval(t);
        let rhs = gg.eval(t);
        lhs <= rhs + VALUE_TOL * rhs.abs().max(1.0)
    });
    Ok(Precedence { holds, sampled })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn step(pieces: &[(f64, f64, f64)]) -> StepFunction {
        StepFunction::new(
            pieces
                .iter()
                .map(|&(a, b, value)| StepPiece { a, b, value })
                .collect(),
        )
        .unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
    }

    #[test]
    fn rearrange_sorts_values() {
        let f = step(&[(0.0, 1.0, 1.0), (1.0, 2.0, 3.0), (2.0, 3.0, 2.0)]);
        let expected = step(&[(0.0, 1.0, 3.0), (1.0, 2.0, 2.0), (2.0, 3.0, 1.0)]);
        assert_eq!(f.rearrange(), expected);
    }

    #[test]
    fn rearrange_identity_on_decreasing() {
        let f = step(&[(0.0, 0.5, 4.0), (0.5, 2.0, 1.5)]);
        assert_eq!(f.rearrange(), f);
    }

    #[test]
    fn canonicalization_merges_and_drops() {
        let f = step(&[(1.0, 2.0, 1.0), (0.0, 1.0, 1.0), (2.0, 3.0, 0.0)]);
        assert_eq!(f.pieces(), &[StepPiece { a: 0.0, b: 2.0, value: 1.0 }]);
    }

    #[test]
    fn rejects_bad_pieces() {
        assert!(matches!(
            StepFunction::new(vec![StepPiece { a: 0.0, b: 2.0, value: 1.0 }, StepPiece { a: 1.0, b: 3.0, value: 1.0 }]),
            Err(Error::Overlap { .. })
        ));
        assert!(StepFunction::new(vec![StepPiece { a: 1.0, b: 1.0, value: 1.0 }]).is_err());
        assert!(StepFunction::new(vec![StepPiece { a: 0.0, b: 1.0, value: -1.0 }]).is_err());
        assert!(MonomialFunction::monomial(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(MonomialFunction::monomial(0.5, 1.0, 1.0, 2.0).is_ok());
    }

    #[test]
    fn integrals() {
        let chi = step(&[(0.0, 1.0, 1.0)]);
        assert_eq!(chi.integral(0.0, 1.0), 1.0);
        let phi = MonomialFunction::monomial(0.0, 1.0, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!(close(phi.integral(0.0, 1.0), 1.0, 1e-14));
        assert!(close(phi.integral(0.0, 0.125), 0.25, 1e-14));
        assert!(close(phi.integral(0.0, 0.5), 0.5f64.powf(2.0 / 3.0), 1e-14));
        assert!((phi.integral(0.0, 0.5) - 0.6300).abs() < 1e-4);
        // log branch
        let inv = MonomialFunction::monomial(1.0, std::f64::consts::E, 1.0, 1.0).unwrap();
        assert!(close(inv.total_mass(), 1.0, 1e-14));
    }

    #[test]
    fn maximal_function_examples() {
        let chi = step(&[(0.0, 1.0, 1.0)]);
        let m = maximal_function(&chi, true).unwrap();
        assert_eq!(m.pieces[0], MaximalPiece { a: 0.0, b: 1.0, constant: 1.0, inverse: 0.0 });
        assert_eq!(m.pieces[1].constant, 0.0);
        assert_eq!(m.pieces[1].inverse, 1.0);
        assert_eq!(m.value_at(4.0), 0.25);

        let f = step(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]);
        let m = maximal_function(&f, true).unwrap();
        assert!(close(m.value_at(2.0), 1.5, 1e-15));

        let zero = maximal_function(&StepFunction::zero(), true).unwrap();
        assert_eq!(zero.value_at(1.0), 0.0);

        let up = step(&[(0.0, 1.0, 1.0), (1.0, 2.0, 2.0)]);
        assert!(maximal_function(&up, true).is_err());
        assert!(maximal_function(&up, false).is_ok());
    }

    #[test]
    fn precedence_examples() {
        let chi: Function = step(&[(0.0, 1.0, 1.0)]).into();
        let two_chi: Function = step(&[(0.0, 1.0, 2.0)]).into();
        let wide: Function = step(&[(0.0, 2.0, 1.0)]).into();
        let r = precedes(&chi, &two_chi, DEFAULT_SAMPLES).unwrap();
        assert!(r.holds && !r.sampled);
        assert!(!precedes(&two_chi, &wide, DEFAULT_SAMPLES).unwrap().holds);

        let level: Function = MonomialFunction::monomial(0.0, 1.0, 2.0 / 3.0, 1.0 / 3.0)
            .unwrap()
            .into();
        let r = precedes(&chi, &level, DEFAULT_SAMPLES).unwrap();
        assert!(r.holds && r.sampled);
        assert!(!precedes(&level, &chi, DEFAULT_SAMPLES).unwrap().holds);
    }

    #[test]
    fn discretize_examples() {
        let phi = MonomialFunction::monomial(0.0, 1.0, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let one = phi.discretize(1).unwrap();
        assert_eq!(one.pieces().len(), 1);
        assert!(close(one.pieces()[0].value, 1.0, 1e-14));
        let fine = phi.discretize(1000).unwrap();
        assert!(close(fine.total_mass(), phi.total_mass(), 1e-13));

        let chi = step(&[(0.0, 1.0, 1.0)]);
        assert_eq!(chi.to_monomial().discretize(4).unwrap(), chi);
        assert!(phi.discretize(0).is_err());
    }

    #[test]
    fn running_integral_matches_integral() {
        let f: Function = step(&[(0.0, 1.0, 2.0), (1.5, 2.0, 1.0)]).into();
        let ri = RunningIntegral::new(&f);
        for t in [0.0, 0.5, 1.0, 1.2, 1.75, 2.0, 5.0] {
            assert!(close(ri.eval(t), f.integral(0.0, t), 1e-15));
        }
        assert_eq!(ri.knots.first(), Some(&(0.0, 0.0)));
    }

    #[test]
    fn pairing_step_and_monomial() {
        let chi: Function = step(&[(0.0, 1.0, 1.0)]).into();
        let phi: Function = MonomialFunction::monomial(0.0, 1.0, 2.0 / 3.0, 1.0 / 3.0)
            .unwrap()
            .into();
        assert!(close(pairing(&chi, &phi), 1.0, 1e-14));
        assert!(close(pairing(&chi, &chi), 1.0, 1e-15));
        let g: Function = step(&[(0.5, 3.0, 2.0)]).into();
        assert!(close(pairing(&chi, &g), 1.0, 1e-15));
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"kind":"step","pieces":[{"a":1.0,"b":2.0,"value":1.0},{"a":0.0,"b":1.0,"value":1.0},{"a":3.0,"b":4.0,"value":0.0}]}"#;
        let f: Function = serde_json::from_str(json).unwrap();
        assert_eq!(f, Function::Step(step(&[(0.0, 2.0, 1.0)])));
        let back: Function = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);

        let bad = r#"{"kind":"step","pieces":[{"a":0.0,"b":1.0}]}"#;
        let err = serde_json::from_str::<Function>(bad).unwrap_err().to_string();
        assert!(err.contains("value"), "{err}");

        let mono = r#"{"kind":"monomial","pieces":[{"a":0.0,"b":1.0,"coeff":0.6667,"beta":0.3333}]}"#;
        assert!(matches!(serde_json::from_str::<Function>(mono).unwrap(), Function::Monomial(_)));
    }
}
