//! Exponent arithmetic and the norm functionals.
//!
//! The quasi-norm is
//!
//! ```text
//! ||f||_{p,s} = ( int_0^inf (t^{1/p} f*(t))^s dt/t )^{1/s}
//! ```
//!
//! and is evaluated in closed form for every piecewise-monomial `f*`. Sums of
//! piece contributions are accumulated in log space so that very large `s`
//! (the limit checks go to 1024) cannot overflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::{maximal_function, pairing, Function, MonomialPiece, StepFunction, LOG_BRANCH_TOL};
use crate::quadrature::{self, DEFAULT_TOL};

/// Second Lorentz index; `Infinite` is a first-class value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondIndex {
    Finite(f64),
    Infinite,
}

impl SecondIndex {
    pub fn is_infinite(self) -> bool {
        matches!(self, SecondIndex::Infinite)
    }

    /// The index as an `f64` (`+inf` for `Infinite`).
    pub fn as_f64(self) -> f64 {
        match self {
            SecondIndex::Finite(s) => s,
            SecondIndex::Infinite => f64::INFINITY,
        }
    }

    /// `1/s`, zero for `Infinite`.
    pub fn recip(self) -> f64 {
        match self {
            SecondIndex::Finite(s) => 1.0 / s,
            SecondIndex::Infinite => 0.0,
        }
    }

    /// `s' = s/(s-1)`, with `1' = inf` and `inf' = 1`.
    pub fn conjugate(self) -> SecondIndex {
        match self {
            SecondIndex::Infinite => SecondIndex::Finite(1.0),
            SecondIndex::Finite(1.0) => SecondIndex::Infinite,
            SecondIndex::Finite(s) => SecondIndex::Finite(s / (s - 1.0)),
        }
    }
}

impl From<f64> for SecondIndex {
    fn from(s: f64) -> Self {
        if s.is_infinite() {
            SecondIndex::Infinite
        } else {
            SecondIndex::Finite(s)
        }
    }
}

impl fmt::Display for SecondIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SecondIndex::Finite(s) => write!(f, "{s}"),
            SecondIndex::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for SecondIndex {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(SecondIndex::Infinite),
            other => other
                .parse::<f64>()
                .map(SecondIndex::from)
                .map_err(|_| Error::InvalidExponents(format!("cannot parse s = {text:?}"))),
        }
    }
}

impl Serialize for SecondIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SecondIndex::Finite(s) => serializer.serialize_f64(*s),
            SecondIndex::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SecondIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(s) => Ok(SecondIndex::Finite(s)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `x^{1/s}`, which is 1 when `s = inf`.
fn root(x: f64, s: SecondIndex) -> f64 {
    match s {
        SecondIndex::Finite(s) => x.powf(1.0 / s),
        SecondIndex::Infinite => 1.0,
    }
}

/// `(a/b)^{1/b}`-style factor `(p/s)^{1/s}` for a pair of indices.
fn ratio_root(p: f64, s: SecondIndex) -> f64 {
    match s {
        SecondIndex::Finite(s) => (p / s).powf(1.0 / s),
        SecondIndex::Infinite => 1.0,
    }
}

/// The parameter bundle `(p, s, p', s', alpha, c_{p,s})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: f64,
    pub s: SecondIndex,
    pub p_conj: f64,
    pub s_conj: SecondIndex,
    pub alpha: f64,
    pub c_ps: f64,
}

impl Exponents {
    pub fn new(p: f64, s: impl Into<SecondIndex>) -> Result<Self> {
        let s = s.into();
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponents(format!("p = {p} must lie in (1, inf)")));
        }
        if let SecondIndex::Finite(sv) = s {
            if !(sv >= 1.0 && sv.is_finite()) {
                return Err(Error::InvalidExponents(format!("s = {sv} must lie in [1, inf]")));
            }
        }
        let p_conj = p / (p - 1.0);
        let s_conj = s.conjugate();
        let alpha = match s_conj {
            SecondIndex::Finite(sc) => 1.0 - sc / p_conj,
            SecondIndex::Infinite => f64::NEG_INFINITY,
        };
        // (p'/s')^{1/s'} -> 1 as s' -> inf.
        let dual_factor = match s_conj {
            SecondIndex::Finite(sc) => (p_conj / sc).powf(1.0 / sc),
            SecondIndex::Infinite => 1.0,
        };
        let c_ps = ratio_root(p, s) * dual_factor;
        Ok(Exponents {
            p,
            s,
            p_conj,
            s_conj,
            alpha,
            c_ps,
        })
    }

    /// `(p', s')`.
    pub fn conjugate(&self) -> Exponents {
        Exponents::new(self.p_conj, self.s_conj).expect("conjugate of valid exponents is valid")
    }

    /// `p < s`: the quasi-norm regime with a nontrivial level function.
    pub fn p_lt_s(&self) -> bool {
        self.p < self.s.as_f64()
    }

    /// `||chi_(0,1)||_{p,s} = (p/s)^{1/s}`.
    pub fn char_norm(&self) -> f64 {
        ratio_root(self.p, self.s)
    }

    /// `||chi_(0,1)||'_{p,s} = (s'/p')^{1/s'}`.
    pub fn char_dual(&self) -> f64 {
        match self.s_conj {
            SecondIndex::Finite(sc) => (sc / self.p_conj).powf(1.0 / sc),
            SecondIndex::Infinite => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Supremum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub method: Method,
    pub err: f64,
}

impl NormValue {
    fn exact(value: f64, method: Method) -> Self {
        NormValue {
            value,
            method,
            err: 0.0,
        }
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// `ln int_a^b t^{gamma-1} dt`; `None` when divergent.
fn log_power_measure(gamma: f64, a: f64, b: f64) -> Option<f64> {
    if gamma.abs() < LOG_BRANCH_TOL {
        if a == 0.0 {
            return None;
        }
        return Some((b / a).ln().ln());
    }
    if a == 0.0 {
        if gamma <= 0.0 {
            return None;
        }
        return Some(gamma * b.ln() - gamma.ln());
    }
    Some(gamma * b.ln() + (-(gamma * (a / b).ln()).exp_m1() / gamma).ln())
}

/// Norm kernel on pieces already known to be non-increasing (no check).
pub(crate) fn norm_of_pieces(pieces: &[MonomialPiece], p: f64, s: SecondIndex) -> Result<f64> {
    match s {
        SecondIndex::Finite(s) => {
            let mut terms = Vec::with_capacity(pieces.len());
            for (i, piece) in pieces.iter().enumerate() {
                let gamma = s * (1.0 / p - piece.beta);
                let log_measure = log_power_measure(gamma, piece.a, piece.b).ok_or_else(|| {
                    Error::Divergent(format!("piece {i} on ({}, {}) with exponent {}", piece.a, piece.b, piece.beta))
                })?;
                terms.push(s * piece.coeff.ln() + log_measure);
            }
            if terms.is_empty() {
                return Ok(0.0);
            }
            Ok((log_sum_exp(&terms) / s).exp())
        }
        SecondIndex::Infinite => {
            let mut sup: f64 = 0.0;
            for (i, piece) in pieces.iter().enumerate() {
                let e = 1.0 / p - piece.beta;
                // alpha = 1/p up to rounding gives a flat product
                let v = if e.abs() < LOG_BRANCH_TOL {
                    piece.coeff
                } else if e > 0.0 {
                    piece.coeff * piece.b.powf(e)
                } else if piece.a == 0.0 {
                    return Err(Error::Divergent(format!(
                        "piece {i} is unbounded against t^(1/p) at the origin"
                    )));
                } else {
                    piece.coeff * piece.a.powf(e)
                };
                sup = sup.max(v);
            }
            Ok(sup)
        }
    }
}

/// `||f||_{p,s}` of a step function (always finite).
pub fn step_norm(f: &StepFunction, p: f64, s: SecondIndex) -> f64 {
    let fstar = f.rearrange();
    norm_of_pieces(fstar.to_monomial().pieces(), p, s).expect("step functions lie in every Lorentz space")
}

/// `||f||_{p,s}`. Steps are rearranged internally; monomial inputs must be
/// non-increasing already.
pub fn lorentz_norm(f: &Function, e: &Exponents) -> Result<NormValue> {
    let method = if e.s.is_infinite() {
        Method::Supremum
    } else {
        Method::ClosedForm
    };
    let value = match f {
        Function::Step(step) => step_norm(step, e.p, e.s),
        Function::Monomial(m) => {
            m.require_nonincreasing()?;
            norm_of_pieces(m.pieces(), e.p, e.s)?
        }
    };
    Ok(NormValue::exact(value, method))
}

/// `||f||*_{p,s}` through the exact `A + B/t` representation of `f**`.
pub fn maximal_norm(f: &StepFunction, e: &Exponents) -> Result<NormValue> {
    let mf = maximal_function(f, false)?;
    let p = e.p;
    let q = 1.0 / p;
    let g = |a: f64, b: f64, t: f64| a * t.powf(q) + b * t.powf(q - 1.0);

    // sup_t t^{1/p} f**(t), also used as the scale for finite s.
    let mut sup: f64 = 0.0;
    for piece in &mf.pieces {
        let (a, b, ca, cb) = (piece.a, piece.b, piece.constant, piece.inverse);
        if b.is_finite() {
            sup = sup.max(g(ca, cb, b));
        }
        if a > 0.0 {
            sup = sup.max(g(ca, cb, a));
        }
        if ca > 0.0 && cb > 0.0 {
            let t = cb * (p - 1.0) / ca;
            if t > a && t < b {
                sup = sup.max(g(ca, cb, t));
            }
        }
    }
    let SecondIndex::Finite(s) = e.s else {
        return Ok(NormValue::exact(sup, Method::Supremum));
    };
    if sup == 0.0 {
        return Ok(NormValue::exact(0.0, Method::ClosedForm));
    }

    let mut total = 0.0;
    let mut abs_error = 0.0;
    let mut used_quadrature = false;
    for piece in &mf.pieces {
        let (a, b, ca, cb) = (piece.a, piece.b, piece.constant, piece.inverse);
        if b.is_infinite() {
            // tail: (B t^{-1/p'})^s / t from a to inf
            let x = cb * a.powf(q - 1.0) / sup;
            total += x.powf(s) / (s * (1.0 - q));
        } else if a == 0.0 {
            // B = 0 on the first piece
            let x = ca * b.powf(q) / sup;
            total += x.powf(s) / (s * q);
        } else {
            used_quadrature = true;
            let integrand = |u: f64| {
                let t = u.exp();
                (g(ca, cb, t) / sup).powf(s)
            };
            let r = quadrature::integrate(integrand, a.ln(), b.ln(), DEFAULT_TOL);
            total += r.value;
            abs_error += r.abs_error;
        }
    }
    let value = sup * total.powf(1.0 / s);
    let err = value * abs_error / (total * s);
    Ok(NormValue {
        value,
        method: if used_quadrature { Method::Quadrature } else { Method::ClosedForm },
        err,
    })
}

/// `(int f g, ||f||_{p,s} ||g||_{p',s'})`.
pub fn holder_pairing(f: &Function, g: &Function, e: &Exponents) -> Result<(f64, f64)> {
    let pair = pairing(f, g);
    let bound = lorentz_norm(f, e)?.value * lorentz_norm(g, &e.conjugate())?.value;
    Ok((pair, bound))
}

/// `((s/p)^{1/s} ||f||_{p,s}, (r/p)^{1/r} ||f||_{p,r})` for `r < s`; the
/// first never exceeds the second, with equality at characteristic functions.
pub fn cross_index_check(f: &Function, e_r: &Exponents, e_s: &Exponents) -> Result<(f64, f64)> {
    if e_r.p != e_s.p {
        return Err(Error::InvalidExponents("cross-index check needs a common p".into()));
    }
    if e_r.s.as_f64() >= e_s.s.as_f64() {
        return Err(Error::InvalidExponents("cross-index check needs r < s".into()));
    }
    // (s/p)^{1/s} = 1 / ||chi_(0,1)||_{p,s}; equality at characteristic functions
    let lhs = lorentz_norm(f, e_s)?.value / e_s.char_norm();
    let rhs = lorentz_norm(f, e_r)?.value / e_r.char_norm();
    Ok((lhs, rhs))
}

/// `||f||_{p,s}` along `s_sequence`, followed by `||f||_{p,inf}`.
pub fn norm_limit_check(f: &StepFunction, p: f64, s_sequence: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s_sequence.len() + 1);
    for &s in s_sequence {
        let e = Exponents::new(p, s)?;
        out.push(step_norm(f, e.p, e.s));
    }
    out.push(step_norm(f, p, SecondIndex::Infinite));
    Ok(out)
}

/// Scalar `(p/s)^{1/s}`; exposed for callers building closed-form bounds.
pub fn char_factor(p: f64, s: SecondIndex) -> f64 {
    ratio_root(p, s)
}

/// `x^{1/s}` with the `s = inf` convention.
pub fn index_root(x: f64, s: SecondIndex) -> f64 {
    root(x, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{MonomialFunction, StepPiece};

    fn step(pieces: &[(f64, f64, f64)]) -> StepFunction {
        StepFunction::new(
            pieces
                .iter()
                .map(|&(a, b, value)| StepPiece { a, b, value })
                .collect(),
        )
        .unwrap()
    }

    fn chi() -> Function {
        step(&[(0.0, 1.0, 1.0)]).into()
    }

    fn e(p: f64, s: f64) -> Exponents {
        Exponents::new(p, s).unwrap()
    }

    #[test]
    fn exponent_bundle() {
        let x = e(2.0, 4.0);
        assert_eq!(x.p_conj, 2.0);
        assert!((x.s_conj.as_f64() - 4.0 / 3.0).abs() < 1e-15);
        assert!((x.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert!((x.c_ps - 1.139_754).abs() < 1e-6);

        let inf = e(2.0, f64::INFINITY);
        assert_eq!(inf.s_conj, SecondIndex::Finite(1.0));
        assert_eq!(inf.alpha, 0.5);
        assert_eq!(inf.c_ps, 2.0);

        assert!((e(3.0, 3.0).c_ps - 1.0).abs() < 1e-15);
        let one = e(2.0, 1.0);
        assert!(one.s_conj.is_infinite());
        assert!(one.alpha < 0.0);

        assert!(Exponents::new(1.0, 2.0).is_err());
        assert!(Exponents::new(2.0, 0.5).is_err());
    }

    #[test]
    fn char_identity_on_grid() {
        for p in [1.25, 1.5, 2.0, 3.0, 8.0] {
            for s in [1.0, 1.5, 2.0, 4.0, 16.0, f64::INFINITY] {
                let x = e(p, s);
                assert!((x.char_norm() - x.c_ps * x.char_dual()).abs() < 1e-12, "({p},{s})");
                assert!(x.c_ps >= 1.0 - 1e-15);
                let c = x.conjugate();
                assert!((1.0 / x.p + 1.0 / c.p - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn second_index_parsing() {
        assert_eq!("inf".parse::<SecondIndex>().unwrap(), SecondIndex::Infinite);
        assert_eq!("4".parse::<SecondIndex>().unwrap(), SecondIndex::Finite(4.0));
        assert!("four".parse::<SecondIndex>().is_err());
        assert_eq!(serde_json::to_string(&SecondIndex::Infinite).unwrap(), "\"inf\"");
        let back: SecondIndex = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, SecondIndex::Infinite);
        let back: SecondIndex = serde_json::from_str("2.5").unwrap();
        assert_eq!(back, SecondIndex::Finite(2.5));
    }

    #[test]
    fn quasi_norm_examples() {
        let v = lorentz_norm(&chi(), &e(2.0, 4.0)).unwrap();
        assert!((v.value - 0.5f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(v.method, Method::ClosedForm);

        let phi: Function = MonomialFunction::monomial(0.0, 1.0, 2.0 / 3.0, 1.0 / 3.0).unwrap().into();
        let v = lorentz_norm(&phi, &e(2.0, 4.0)).unwrap().value;
        assert!((v - (2.0f64 / 3.0).powf(0.75)).abs() < 1e-14);

        let two: Function = step(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]).into();
        let v = lorentz_norm(&two, &e(2.0, f64::INFINITY)).unwrap();
        assert_eq!(v.value, 2.0);
        assert_eq!(v.method, Method::Supremum);

        let three: Function = step(&[(0.0, 1.0, 3.0), (1.0, 2.0, 1.0)]).into();
        let v = lorentz_norm(&three, &e(2.0, 2.0)).unwrap().value;
        assert!((v - 10f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn divergence_is_reported() {
        // t^{-1/2} on (0,1) is not in L^{2,s} for finite s.
        let f: Function = MonomialFunction::monomial(0.0, 1.0, 1.0, 0.5).unwrap().into();
        assert!(matches!(lorentz_norm(&f, &e(2.0, 4.0)), Err(Error::Divergent(_))));
        assert_eq!(lorentz_norm(&f, &e(2.0, f64::INFINITY)).unwrap().value, 1.0);
    }

    #[test]
    fn log_branch_and_large_s() {
        // beta = 1/p gives gamma = 0.
        let f: Function = MonomialFunction::new(vec![
            MonomialPiece { a: 0.0, b: 1.0, coeff: 1.0, beta: 0.0 },
            MonomialPiece { a: 1.0, b: std::f64::consts::E, coeff: 1.0, beta: 0.5 },
        ])
        .unwrap()
        .into();
        let expected = (2.0f64 / 3.0 + 1.0).powf(1.0 / 3.0);
        assert!((lorentz_norm(&f, &e(2.0, 3.0)).unwrap().value - expected).abs() < 1e-14);
        let v = lorentz_norm(&chi(), &e(2.0, 1024.0)).unwrap().value;
        assert!((v - (2.0f64 / 1024.0).powf(1.0 / 1024.0)).abs() < 1e-14);
    }

    #[test]
    fn monomial_must_be_nonincreasing() {
        let f: Function = MonomialFunction::monomial(0.0, 1.0, 1.0, -1.0).unwrap().into();
        assert!(lorentz_norm(&f, &e(2.0, 2.0)).is_err());
    }

    #[test]
    fn maximal_norm_examples() {
        let chi = step(&[(0.0, 1.0, 1.0)]);
        let v = maximal_norm(&chi, &e(2.0, 4.0)).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        let lower = 2f64.powf(0.25) * step_norm(&chi, 2.0, SecondIndex::Finite(4.0));
        assert!((lower - 1.0).abs() < 1e-12);
        assert_eq!(maximal_norm(&StepFunction::zero(), &e(2.0, 4.0)).unwrap().value, 0.0);
        // s = inf: sup of t^{1/2} f** is 1 at t = 1.
        assert_eq!(maximal_norm(&chi, &e(2.0, f64::INFINITY)).unwrap().value, 1.0);
    }

    #[test]
    fn maximal_norm_against_brute_force() {
        let f = step(&[(0.0, 0.5, 3.0), (0.5, 1.5, 2.0), (1.5, 4.0, 0.25)]);
        let x = e(1.5, 3.0);
        let v = maximal_norm(&f, &x).unwrap();
        assert_eq!(v.method, Method::Quadrature);
        assert!(v.err <= 1e-9 * v.value.max(1.0));
        // Midpoint rule on a log grid, with the tail in closed form.
        let mf = maximal_function(&f, true).unwrap();
        let n = 400_000;
        let (lo, hi) = (-30.0f64, 4.0f64.ln());
        let h = (hi - lo) / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let t = (lo + (i as f64 + 0.5) * h).exp();
            sum += (t.powf(1.0 / 1.5) * mf.value_at(t)).powi(3) * h;
        }
        let mass = f.total_mass();
        sum += (mass * 4.0f64.powf(1.0 / 1.5 - 1.0)).powi(3) / (3.0 * (1.0 - 1.0 / 1.5));
        let brute = sum.powf(1.0 / 3.0);
        assert!((v.value - brute).abs() < 1e-6 * brute, "{} vs {brute}", v.value);
    }

    #[test]
    fn holder_and_cross_index() {
        let x = e(2.0, 4.0);
        let (pair, bound) = holder_pairing(&chi(), &chi(), &x).unwrap();
        assert!((pair - 1.0).abs() < 1e-15);
        assert!((bound - 1.139_754).abs() < 1e-6);
        let zero: Function = StepFunction::zero().into();
        assert_eq!(holder_pairing(&chi(), &zero, &x).unwrap(), (0.0, 0.0));

        let (lhs, rhs) = cross_index_check(&chi(), &e(2.0, 2.0), &x).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
        // (p/s)^{1/s} in place of (s/p)^{1/s} would put lhs = 1 above rhs = 2^{-1/2} here
        let (lhs, rhs) = cross_index_check(&chi(), &e(2.0, 4.0), &e(2.0, f64::INFINITY)).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
        let two: Function = StepFunction::from_knots(&[0.0, 1.0, 2.0], &[2.0, 1.0]).unwrap().into();
        let (lhs, rhs) = cross_index_check(&two, &e(2.0, 4.0), &e(2.0, f64::INFINITY)).unwrap();
        assert!(lhs < rhs, "{lhs} {rhs}");
        let (lhs, rhs) = cross_index_check(&chi(), &e(2.0, 2.0), &e(2.0, f64::INFINITY)).unwrap();
        assert_eq!((lhs, rhs), (1.0, 1.0));
        assert!(cross_index_check(&chi(), &x, &e(2.0, 2.0)).is_err());
    }

    #[test]
    fn limit_sequence() {
        let chi = step(&[(0.0, 1.0, 1.0)]);
        let v = norm_limit_check(&chi, 2.0, &[4.0, 16.0, 256.0, 1024.0]).unwrap();
        assert!((v[0] - 0.840_896).abs() < 1e-6);
        assert!((v[1] - (2.0f64 / 16.0).powf(1.0 / 16.0)).abs() < 1e-14);
        assert_eq!(v[4], 1.0);
        assert!((v[3] - 1.0).abs() < 0.02);
        let two = step(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]);
        assert_eq!(*norm_limit_check(&two, 2.0, &[]).unwrap().last().unwrap(), 2.0);
    }
}
